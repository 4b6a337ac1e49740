"""Galerkin matrices of planar composition operators ``f -> f ∘ phi``.

Points of the plane are complex numbers; harmonic polynomial bases from
:mod:`harmspec.harmonic` are evaluated at ``(Re z, Im z)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .ball import DecayBound
from .errors import DomainError, QuadratureError
from .expo import sorted_eigenvalues
from .geometry import BallSpec, DomainUnion
from .harmonic import OrthonormalBasis, orthonormal_basis
from .quadrature import ball_rule

__all__ = [
    "ConformalMap",
    "Semidisc",
    "GalerkinOperator",
    "example_psi",
    "example_psi_inv",
    "example_psi_derivative",
    "example_phi",
    "halfplane_map",
    "identity_map",
    "scaling_map",
    "mobius_map",
    "galerkin_matrix",
    "converged_eigenvalues",
    "estimate_K",
    "decay_report",
]

log = logging.getLogger(__name__)


def _as_complex(z) -> np.ndarray:
    return np.asarray(z, dtype=complex)


def _points(z: np.ndarray) -> np.ndarray:
    z = np.ravel(z)
    return np.column_stack([z.real, z.imag])


def _unwrap(z, out):
    return complex(out) if np.ndim(z) == 0 else out


@dataclass(frozen=True)
class ConformalMap:
    """Holomorphic map with nonvanishing derivative on ``domain``."""

    forward: Callable
    derivative: Callable
    inverse: Optional[Callable] = None
    domain: Optional[Callable] = None
    name: str = "map"

    def check_domain(self, z) -> None:
        if self.domain is not None and not np.all(self.domain(_as_complex(z))):
            raise DomainError(f"{self.name}: points outside the domain of the map")

    def __call__(self, z):
        self.check_domain(z)
        return self.forward(_as_complex(z))


@dataclass(frozen=True)
class Semidisc:
    """Open upper half of the disc ``|z - center| < radius``."""

    center: complex
    radius: float = 1.0

    def contains(self, z) -> np.ndarray:
        w = _as_complex(z) - self.center
        return (np.abs(w) < self.radius) & (w.imag > 0)


def example_psi(z):
    """``((1 + z) / (1 - z))**2``, mapping the upper unit semidisc onto the upper half-plane."""
    z = _as_complex(z)
    if not np.all((np.abs(z) < 1) & (z.imag > 0)):
        raise DomainError("example_psi is defined on the open upper unit semidisc")
    return _unwrap(z, ((1 + z) / (1 - z)) ** 2)


def example_psi_inv(w):
    """Inverse of :func:`example_psi`: ``(sqrt(w) - 1) / (sqrt(w) + 1)``, principal branch."""
    w = _as_complex(w)
    if not np.all(w.imag > 0):
        raise DomainError("example_psi_inv is defined on the open upper half-plane")
    s = np.sqrt(w)
    return _unwrap(w, (s - 1) / (s + 1))


def example_psi_derivative(z):
    """Analytic derivative ``4 (1 + z) / (1 - z)**3`` of :func:`example_psi`."""
    z = _as_complex(z)
    return _unwrap(z, 4 * (1 + z) / (1 - z) ** 3)


def example_phi(w):
    """``example_psi_inv(w) + 2i``: the upper half-plane onto the semidisc about ``2i``."""
    return example_psi_inv(w) + 2j


def _halfplane_fwd(w):
    s = np.sqrt(w)
    return (s - 1) / (s + 1) + 2j


def _halfplane_deriv(w):
    s = np.sqrt(w)
    return 1 / (s * (s + 1) ** 2)


def halfplane_map() -> ConformalMap:
    return ConformalMap(_halfplane_fwd, _halfplane_deriv,
                        inverse=lambda x: example_psi(x - 2j),
                        domain=lambda w: w.imag > 0, name="halfplane-example")


def identity_map() -> ConformalMap:
    return ConformalMap(lambda z: z, lambda z: np.ones_like(z), inverse=lambda x: x,
                        name="identity")


def scaling_map(rho: complex, center: complex = 0j) -> ConformalMap:
    """``z -> center + rho (z - center)``."""
    if rho == 0:
        raise DomainError("scaling factor must be nonzero")
    return ConformalMap(lambda z: center + rho * (z - center),
                        lambda z: np.full_like(z, rho),
                        inverse=lambda x: center + (x - center) / rho,
                        name="scaling")


def mobius_map(a: complex, b: complex, c: complex, d: complex) -> ConformalMap:
    """``z -> (a z + b) / (c z + d)`` away from its pole."""
    det = a * d - b * c
    if det == 0:
        raise DomainError("Mobius coefficients must satisfy ad - bc != 0")
    return ConformalMap(lambda z: (a * z + b) / (c * z + d),
                        lambda z: det / (c * z + d) ** 2,
                        inverse=lambda x: (d * x - b) / (a - c * x),
                        domain=lambda z: c * z + d != 0,
                        name="mobius")


@dataclass
class GalerkinOperator:
    """Matrix ``M_ij = (L e_j, e_i)`` of a composition operator in an orthonormal basis."""

    basis: OrthonormalBasis
    matrix: np.ndarray
    quadrature: dict = field(default_factory=dict)

    def eigenvalues(self) -> np.ndarray:
        return sorted_eigenvalues(self.matrix)


def _ball_of(omega) -> BallSpec:
    if isinstance(omega, BallSpec):
        return omega
    if isinstance(omega, DomainUnion) and len(omega.balls) == 1:
        return omega.balls[0]
    raise DomainError("Galerkin domains must be a single disc")


def _assemble(phi: ConformalMap, basis: OrthonormalBasis, n_radial: int, n_circle: int):
    rule = ball_rule(basis.ball, n_radial, 1, n_circle)
    z = rule.nodes[:, 0] + 1j * rule.nodes[:, 1]
    img = phi(z)
    e = basis.evaluate(rule.nodes)
    f = basis.evaluate(_points(img))
    return (e * rule.weights[:, None]).T @ f


def galerkin_matrix(phi: ConformalMap, omega_prime, kmax: int, quadrature=None,
                    tol: float = 1e-10, max_levels: int = 8) -> GalerkinOperator:
    """Galerkin matrix of ``L_phi`` on ``h^2`` of a disc, up to degree ``kmax``.

    ``quadrature`` may fix ``(n_radial, n_circle)`` node counts; otherwise
    both are doubled from a degree-based start until the largest entry
    change drops below ``tol``.
    """
    ball = _ball_of(omega_prime)
    if ball.d != 2:
        raise DomainError("composition operators are planar")
    if int(kmax) != kmax or kmax < 1:
        raise DomainError("kmax must be an integer >= 1")
    basis = orthonormal_basis(ball, kmax)
    if quadrature is not None:
        n_radial, n_circle = quadrature
        mat = _assemble(phi, basis, n_radial, n_circle)
        return GalerkinOperator(basis, mat, {"n_radial": n_radial, "n_circle": n_circle,
                                             "change": None})
    n_radial, n_circle = kmax + 8, 4 * (kmax + 4)
    mat = _assemble(phi, basis, n_radial, n_circle)
    for _ in range(max_levels):
        n_radial, n_circle = 2 * n_radial, 2 * n_circle
        new = _assemble(phi, basis, n_radial, n_circle)
        change = float(np.max(np.abs(new - mat)))
        mat = new
        log.debug("galerkin kmax=%d nodes=(%d, %d) change=%.2e", kmax, n_radial, n_circle, change)
        if change < tol:
            return GalerkinOperator(basis, mat, {"n_radial": n_radial, "n_circle": n_circle,
                                                 "change": change})
    raise QuadratureError(f"Galerkin quadrature did not converge (last change {change:.2e})")


def converged_eigenvalues(phi: ConformalMap, omega_prime, kmax: int, rel_tol: float = 1e-6,
                          quad_tol: float = 1e-10):
    """Eigenvalues at ``kmax`` with a mask of those stable over two more degrees.

    An eigenvalue counts as converged when its relative change from ``kmax``
    to ``kmax + 1`` and to ``kmax + 2`` (matched by sorted position) stays
    below ``rel_tol``.
    """
    ops = [galerkin_matrix(phi, omega_prime, kmax + j, tol=quad_tol) for j in range(3)]
    evs = [op.eigenvalues() for op in ops]
    base = evs[0]
    ok = np.ones(len(base), dtype=bool)
    for other in evs[1:]:
        ok &= np.abs(other[:len(base)] - base) <= rel_tol * np.abs(base)
    # a converged index must not follow an unconverged one
    if not ok.all():
        ok[int(np.argmin(ok)):] = False
    return ops[0], base, ok


def estimate_K(phi: ConformalMap, omega_prime, omega_dprime, n_samples: int = 4096,
               seed: int = 0, inverse_derivative: Optional[Callable] = None) -> float:
    """Change-of-variables upper estimate ``sup_{z in Ω''} 1 / |phi'(z)|`` of the constant K.

    ``omega_prime`` (anything with ``contains``) must contain the sampled
    image ``phi(Ω'')``.  If ``inverse_derivative`` is given it is evaluated
    at ``phi(z)`` as an independent route and must agree with ``1/|phi'|``.
    """
    dprime = omega_dprime if isinstance(omega_dprime, DomainUnion) else DomainUnion((omega_dprime,))
    pts = dprime.sample(n_samples, seed=seed, boundary_per_ball=max(256, n_samples // 4))
    z = pts[:, 0] + 1j * pts[:, 1]
    try:
        x = phi(z)
        deriv = phi.derivative(z)
    except (FloatingPointError, ZeroDivisionError, DomainError) as exc:
        raise DomainError(f"sampling failed: {exc}") from exc
    if not np.all(omega_prime.contains(_points(x))
                  if isinstance(omega_prime, (DomainUnion, BallSpec)) else omega_prime.contains(x)):
        raise DomainError("phi(Ω'') is not contained in Ω' on the samples")
    vals = 1 / np.abs(deriv)
    if inverse_derivative is not None:
        alt = np.abs(inverse_derivative(x))
        if not np.allclose(alt, vals, rtol=1e-9, atol=0):
            raise DomainError("inverse-derivative route disagrees with 1/|phi'|")
    if not np.all(np.isfinite(vals)):
        raise DomainError("derivative vanishes on Ω''")
    return float(vals.max())


def _fit_ratio(moduli: np.ndarray, tol: float = 1e-6):
    """Per-index geometric decay ratio from block means of equal-modulus runs.

    The leading block is skipped, as is any block containing a zero.
    """
    blocks = []
    start = 0
    for i in range(1, len(moduli) + 1):
        if i == len(moduli) or abs(moduli[i] - moduli[start]) > tol * moduli[start]:
            idx = np.arange(start + 1, i + 1)
            blocks.append((idx.mean(), moduli[start:i].mean()))
            start = i
    blocks = [b for b in blocks[1:] if b[1] > 0]
    if len(blocks) < 2:
        return None
    n = np.array([b[0] for b in blocks])
    y = np.log([b[1] for b in blocks])
    slope = np.polyfit(n, y, 1)[0]
    return float(math.exp(slope))


def decay_report(eigenvalues, bound: DecayBound, converged=None) -> dict:
    """Table of ``(n, |lambda_n|, bound(n), ratio)`` and violation flags.

    Only converged entries (all, if no mask is given) can count as
    violations and enter the fitted ratio.
    """
    ev = np.asarray(eigenvalues, dtype=complex)
    conv = np.ones(len(ev), dtype=bool) if converged is None else np.asarray(converged, bool)
    rows = []
    violations = []
    for i, lam in enumerate(ev):
        n = i + 1
        b = bound(n)
        ok = bool(abs(lam) <= b)
        if conv[i] and not ok:
            violations.append(n)
        rows.append({"n": n, "re": float(lam.real), "im": float(lam.imag), "abs": float(abs(lam)),
                     "bound": float(b), "ratio": float(abs(lam) / b) if b > 0 else math.inf,
                     "ok": ok, "converged": bool(conv[i])})
    moduli = np.abs(ev[conv])
    return {"eigenvalues": rows, "violations": violations,
            "fitted_ratio": _fit_ratio(moduli) if len(moduli) else None}
