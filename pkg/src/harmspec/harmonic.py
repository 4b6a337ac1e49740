"""Homogeneous harmonic polynomials and Bergman-orthonormal bases on balls.

Polynomials are stored as coefficient vectors over the monomials of one
fixed degree (see :func:`monomials`).  Harmonic spaces and sphere moments
are exact (``fractions.Fraction``); orthonormalisation is done in floating
point from the exact Gram matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .dims import h_dim, n_dim
from .errors import DomainError, HarmonicSpaceError, MismatchError, NumericalRankError
from .geometry import BallSpec

__all__ = [
    "monomials",
    "HomogeneousPolynomial",
    "HarmonicSubspace",
    "OrthonormalBasis",
    "laplacian",
    "harmonic_space",
    "sphere_moment",
    "sphere_integral",
    "ball_gram_factor",
    "ball_inner_product",
    "unit_ball_volume",
    "orthonormal_basis",
]


@lru_cache(maxsize=None)
def _monomials(d: int, k: int) -> tuple:
    if d == 1:
        return ((k,),)
    out = []
    for first in range(k, -1, -1):
        for rest in _monomials(d - 1, k - first):
            out.append((first,) + rest)
    return tuple(out)


def monomials(d: int, k: int) -> tuple:
    """Exponent tuples of all degree-``k`` monomials in ``d`` variables.

    Ordered lexicographically with the exponent of ``x_1`` decreasing.
    """
    if d < 1 or k < 0:
        raise DomainError("need d >= 1 and k >= 0")
    return _monomials(d, k)


@lru_cache(maxsize=None)
def _monomial_index(d: int, k: int) -> dict:
    return {e: i for i, e in enumerate(_monomials(d, k))}


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """``p(x) = sum_alpha c_alpha (x - center)**alpha`` with ``|alpha| = degree``."""

    d: int
    degree: int
    coeffs: tuple
    center: tuple = None

    def __post_init__(self):
        if self.center is None:
            object.__setattr__(self, "center", (0.0,) * self.d)
        else:
            object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) != self.d:
            raise MismatchError("centre has the wrong dimension")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) != len(monomials(self.d, self.degree)):
            raise MismatchError("coefficient vector does not match the monomial count")

    def terms(self):
        """Nonzero ``(exponent, coefficient)`` pairs."""
        return [(e, c) for e, c in zip(monomials(self.d, self.degree), self.coeffs) if c != 0]

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float)) - np.asarray(self.center)
        vals = _monomial_values(pts, self.d, self.degree)
        return np.asarray(self.coeffs, dtype=float) @ vals


def _monomial_values(u: np.ndarray, d: int, k: int) -> np.ndarray:
    """Values of all degree-``k`` monomials at points ``u``; shape ``(M, P)``."""
    exps = np.asarray(monomials(d, k), dtype=int)
    powers = [np.vander(u[:, j], k + 1, increasing=True).T for j in range(d)]
    out = np.ones((len(exps), len(u)))
    for j in range(d):
        out *= powers[j][exps[:, j]]
    return out


def laplacian(d: int, k: int, coeffs: Sequence) -> list:
    """Exact Laplacian of a degree-``k`` polynomial, as degree ``k-2`` coefficients."""
    if k < 2:
        return []
    idx = _monomial_index(d, k - 2)
    out = [Fraction(0)] * len(idx)
    for e, c in zip(monomials(d, k), coeffs):
        if c == 0:
            continue
        for j in range(d):
            if e[j] >= 2:
                f = list(e)
                f[j] -= 2
                out[idx[tuple(f)]] += c * e[j] * (e[j] - 1)
    return out


def _laplacian_dict(poly: dict) -> dict:
    out: dict = {}
    for e, c in poly.items():
        for j, p in enumerate(e):
            if p >= 2:
                f = e[:j] + (p - 2,) + e[j + 1:]
                out[f] = out.get(f, 0) + c * p * (p - 1)
    return {e: c for e, c in out.items() if c != 0}


@dataclass(frozen=True)
class HarmonicSubspace:
    """Basis (rows, exact rationals) of harmonic polynomials of degree ``k``."""

    d: int
    k: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def as_array(self) -> np.ndarray:
        return np.array([[float(c) for c in row] for row in self.basis]).reshape(
            self.dim, len(monomials(self.d, self.k)))

    def polynomials(self, center=None) -> list:
        return [HomogeneousPolynomial(self.d, self.k, row, center) for row in self.basis]


@lru_cache(maxsize=None)
def harmonic_space(d: int, k: int) -> HarmonicSubspace:
    """Exact basis of the kernel of the Laplacian on degree-``k`` forms.

    The kernel has one element per monomial ``x_1**e * x'**beta`` with
    ``e in {0, 1}``: writing ``p = sum_j a_j x_1**(e+2j) D**j(x'**beta)``,
    with ``D`` the Laplacian in the remaining variables, harmonicity forces
    ``a_{j+1} = -a_j / ((e+2j+2)(e+2j+1))``, ``a_0 = 1``.  Each basis element
    carries its own pivot monomial with coefficient one, and every other term
    has ``x_1``-exponent at least two, so the rows are independent.
    """
    if int(d) != d or d < 2 or int(k) != k or k < 0:
        raise DomainError(f"need d >= 2 and k >= 0, got d={d!r}, k={k!r}")
    idx = _monomial_index(d, k)
    rows = []
    for e in (0, 1):
        if e > k:
            continue
        for beta in monomials(d - 1, k - e):
            term = {beta: Fraction(1)}
            a = Fraction(1)
            j = 0
            row = [Fraction(0)] * len(idx)
            while term:
                for b, c in term.items():
                    row[idx[(e + 2 * j,) + b]] += a * c
                a = -a / ((e + 2 * j + 2) * (e + 2 * j + 1))
                term = _laplacian_dict(term)
                j += 1
            rows.append(tuple(row))
    space = HarmonicSubspace(d, k, tuple(rows))
    if space.dim != n_dim(d, k):
        raise HarmonicSpaceError(
            f"harmonic space d={d}, k={k} has dimension {space.dim}, expected {n_dim(d, k)}")
    for row in rows:
        if any(c != 0 for c in laplacian(d, k, row)):
            raise HarmonicSpaceError(f"non-harmonic row in d={d}, k={k}")
    return space


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


@lru_cache(maxsize=None)
def sphere_moment(alpha: tuple) -> Fraction:
    """``∫_S x**alpha dσ`` for the normalised surface measure on the unit sphere.

    ``d = len(alpha)``.  Zero if any exponent is odd, otherwise
    ``prod (alpha_i - 1)!! / prod_{j=1}^{|alpha|/2} (d + 2j - 2)``.
    """
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise DomainError("multi-index entries must be >= 0")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    d = len(alpha)
    num = math.prod(_double_factorial(a - 1) for a in alpha)
    den = math.prod(d + 2 * j - 2 for j in range(1, sum(alpha) // 2 + 1))
    return Fraction(num, den)


def sphere_integral(f: HomogeneousPolynomial, g: HomogeneousPolynomial):
    """``∫_S f g dσ``, exact if both coefficient vectors are rational.

    Polynomials here have real coefficients, so no conjugation appears.
    """
    if f.d != g.d:
        raise MismatchError("polynomials live in different dimensions")
    total = 0
    gt = g.terms()
    for ea, ca in f.terms():
        for eb, cb in gt:
            m = sphere_moment(tuple(x + y for x, y in zip(ea, eb)))
            if m:
                total += ca * cb * m
    return total


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def _check_centres(f, g, ball: BallSpec) -> None:
    if f.d != ball.d or g.d != ball.d:
        raise MismatchError("polynomial and ball dimensions differ")
    c = np.asarray(ball.center)
    if not (np.allclose(f.center, c, rtol=0, atol=1e-14)
            and np.allclose(g.center, c, rtol=0, atol=1e-14)):
        raise MismatchError("polynomials must be homogeneous about the ball centre")


def ball_gram_factor(f: HomogeneousPolynomial, g: HomogeneousPolynomial, radius):
    """``(f, g)_{h^2(B_r)} / Vol(B_1)``; exact when ``radius`` and coefficients are rational."""
    p = f.d + f.degree + g.degree
    return f.d * sphere_integral(f, g) * radius ** p / p


def ball_inner_product(f: HomogeneousPolynomial, g: HomogeneousPolynomial,
                       ball: BallSpec) -> float:
    """Bergman inner product of two homogeneous polynomials on a ball about their centre."""
    _check_centres(f, g, ball)
    p = f.d + f.degree + g.degree
    return float(ball_gram_factor(f, g, 1)) * unit_ball_volume(ball.d) * ball.radius ** p


def _gram_schmidt(gram: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt in the inner product ``<u, v> = u @ gram @ v``.

    Returns ``Q`` whose rows are orthonormal coordinate vectors.  A vector
    whose norm falls below ``1e-7`` of its starting norm is swept a second
    time.
    """
    n = gram.shape[0]
    q = np.zeros((n, n))
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        start = math.sqrt(gram[i, i])
        for sweep in range(2):
            for j in range(i):
                v -= (q[j] @ gram @ v) * q[j]
            norm2 = v @ gram @ v
            if norm2 > (1e-7 * start) ** 2:
                break
        if not norm2 > (1e-13 * start) ** 2:
            raise NumericalRankError(f"Gram matrix is numerically singular at column {i}")
        q[i] = v / math.sqrt(norm2)
    return q


@lru_cache(maxsize=None)
def _unit_block(d: int, k: int) -> np.ndarray:
    """Coefficients (rows) of an orthonormal basis of degree ``k`` on the unit ball at 0."""
    space = harmonic_space(d, k)
    polys = space.polynomials()
    n = space.dim
    gram = np.empty((n, n))
    vol = unit_ball_volume(d)
    for i in range(n):
        for j in range(i, n):
            gram[i, j] = gram[j, i] = float(ball_gram_factor(polys[i], polys[j], 1)) * vol
    q = _gram_schmidt(gram)
    out = q @ space.as_array()
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class OrthonormalBasis:
    """Orthonormal harmonic polynomials of degree ``<= max_degree`` in ``h^2(ball)``.

    ``unit_blocks[k]`` holds the degree-``k`` coefficients for the unit ball
    at the origin; the basis on ``ball`` is
    ``e(x) = radius**(-d/2) q((x - center) / radius)``.
    """

    ball: BallSpec
    max_degree: int
    unit_blocks: tuple

    @property
    def d(self) -> int:
        return self.ball.d

    @property
    def size(self) -> int:
        return h_dim(self.d, self.max_degree)

    def degrees(self) -> np.ndarray:
        """Degree of every basis function, in basis order."""
        return np.concatenate([[k] * len(b) for k, b in enumerate(self.unit_blocks)])

    def evaluate(self, points) -> np.ndarray:
        """Matrix of basis values, shape ``(P, size)``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        u = (pts - np.asarray(self.ball.center)) / self.ball.radius
        cols = [(blk @ _monomial_values(u, self.d, k)).T for k, blk in enumerate(self.unit_blocks)]
        return np.hstack(cols) * self.ball.radius ** (-self.d / 2)

    def polynomials(self) -> list:
        """Basis functions as polynomials in ``x - center`` (float coefficients)."""
        out = []
        r = self.ball.radius
        for k, blk in enumerate(self.unit_blocks):
            scale = r ** (-k - self.d / 2)
            for row in blk:
                out.append(HomogeneousPolynomial(self.d, k, tuple(row * scale), self.ball.center))
        return out


def orthonormal_basis(ball: BallSpec, kmax: int) -> OrthonormalBasis:
    """Bergman-orthonormal harmonic polynomial basis of ``h^2(ball)`` up to degree ``kmax``.

    Orthogonalisation happens inside each degree block only; different
    degrees are orthogonal on any ball about the common centre.
    """
    if int(kmax) != kmax or kmax < 0:
        raise DomainError("kmax must be an integer >= 0")
    if ball.d < 2:
        raise DomainError("balls must live in dimension >= 2")
    blocks = tuple(_unit_block(ball.d, k) for k in range(kmax + 1))
    return OrthonormalBasis(ball, int(kmax), blocks)
