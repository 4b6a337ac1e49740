"""Numerical matrices of restriction maps between harmonic Bergman spaces.

The source is always a ball carrying an :class:`OrthonormalBasis`.  The
target is either another ball with its own orthonormal basis (the matrix is
then ``(J e_j, f_i)``) or a union of balls, in which case the image vectors
``J e_j`` are orthonormalised in ``h^2(target)`` by a QR factorisation of
quadrature-weighted samples.  Either way the singular values of the
returned matrix are those of ``J`` compressed to the truncated source space.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .ball import ExactBallSpectrum, exact_singular_value
from .dims import h_dim
from .errors import ContainmentError, DomainError, MismatchError, QuadratureError
from .geometry import BallSpec, DomainUnion
from .harmonic import OrthonormalBasis, orthonormal_basis
from .quadrature import exact_orders, union_rule

__all__ = ["embedding_matrix", "singular_values", "verify_prop34"]

log = logging.getLogger(__name__)

MAX_REFINEMENTS = 6


def _check_containment(source: BallSpec, target: DomainUnion) -> None:
    for b in target.balls:
        if not source.contains_ball(b):
            raise ContainmentError(f"target ball {b} is not contained in source ball {source}")


def _assemble(source: OrthonormalBasis, target, orders) -> np.ndarray:
    if isinstance(target, OrthonormalBasis):
        rule, _ = union_rule(DomainUnion((target.ball,)), *orders)
        e = source.evaluate(rule.nodes)
        f = target.evaluate(rule.nodes)
        return (f * rule.weights[:, None]).T @ e
    rule, _ = union_rule(target, *orders)
    q = np.sqrt(rule.weights)[:, None] * source.evaluate(rule.nodes)
    return np.linalg.qr(q, mode="r")


def singular_values(matrix) -> np.ndarray:
    return np.linalg.svd(np.asarray(matrix), compute_uv=False)


def embedding_matrix(source_basis: OrthonormalBasis, target, tol: float = 1e-10,
                     degree: int | None = None) -> np.ndarray:
    """Matrix of the restriction ``h^2(source ball) -> h^2(target)``.

    Parameters
    ----------
    source_basis : OrthonormalBasis
        Truncated basis on the larger ball.
    target : OrthonormalBasis or DomainUnion or BallSpec
        A ball basis (giving a square cross-Gram matrix between the two
        bases) or a union of balls contained in the source ball.
    tol : float
        Refinement stops once the singular values move by less than
        ``0.1 * tol`` (relative to the largest) between successive orders.
    degree : int, optional
        Starting polynomial exactness degree; defaults to what integrates
        products of basis functions exactly.
    """
    if isinstance(target, BallSpec):
        target = DomainUnion((target,))
    tgt_union = DomainUnion((target.ball,)) if isinstance(target, OrthonormalBasis) else target
    if tgt_union.d != source_basis.d:
        raise MismatchError("source and target dimensions differ")
    if not tol > 0:
        raise DomainError("tol must be positive")
    _check_containment(source_basis.ball, tgt_union)

    kmax = source_basis.max_degree
    if isinstance(target, OrthonormalBasis):
        kmax = max(kmax, target.max_degree)
    deg = 2 * kmax if degree is None else int(degree)
    orders = exact_orders(source_basis.d, deg)
    mat = _assemble(source_basis, target, orders)
    sv = singular_values(mat)
    for level in range(MAX_REFINEMENTS):
        orders = tuple(2 * o for o in orders)
        new = _assemble(source_basis, target, orders)
        new_sv = singular_values(new)
        change = float(np.max(np.abs(new_sv - sv))) / max(float(sv[0]), 1e-300)
        log.debug("refinement %d orders=%s change=%.3e", level, orders, change)
        mat, sv = new, new_sv
        if change < 0.1 * tol:
            return mat
    raise QuadratureError(
        f"quadrature did not converge: last relative change {change:.3e} >= {0.1 * tol:.1e}")


def verify_prop34(d: int, gamma: float, kmax: int, tol: float = 1e-8) -> dict:
    """Compare numerical singular values of ``h^2(B(gamma)) -> h^2(B)`` with the closed form.

    Only indices ``n <= h_dim(d, kmax - 1)`` are compared.
    """
    if kmax < 1:
        raise DomainError("kmax must be >= 1")
    spec = ExactBallSpectrum(d, gamma)
    origin = (0.0,) * d
    unit = BallSpec(origin, 1.0)
    source = orthonormal_basis(unit.dilate(gamma), kmax)
    target = orthonormal_basis(unit, kmax)
    mat = embedding_matrix(source, target, tol=tol)
    sv = singular_values(mat)
    m = h_dim(d, kmax - 1)
    exact = np.array([exact_singular_value(spec, n) for n in range(1, len(sv) + 1)])
    rel = np.abs(sv[:m] - exact[:m]) / exact[:m]
    max_rel = float(rel.max())
    off = mat - np.diag(np.diag(mat))
    return {
        "d": d,
        "gamma": gamma,
        "kmax": kmax,
        "compared": m,
        "singular_values": sv.tolist(),
        "exact_values": exact.tolist(),
        "max_rel_error": max_rel,
        "max_offdiagonal": float(np.max(np.abs(off))) if off.size else 0.0,
        "tol": tol,
        "passed": bool(max_rel < tol and math.isfinite(max_rel)),
    }
