"""Dimension counts of spherical harmonics.

``n_dim(d, k)`` is the number of linearly independent spherical harmonics
of degree ``k`` on the sphere in ``R^d`` and ``h_dim(d, k)`` the number of
independent harmonic polynomials of degree at most ``k``.  Everything is
exact integer arithmetic; Python integers do not overflow.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = ["binom", "n_dim", "h_dim", "degree_of_index", "gauge_rate_factor"]


def binom(n: int, r: int) -> int:
    """Binomial coefficient, zero whenever ``n < 0`` or ``r`` is out of range."""
    if n < 0 or r < 0 or r > n:
        return 0
    return math.comb(n, r)


def _check_dim(d: int) -> None:
    if int(d) != d or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d!r}")


def n_dim(d: int, k: int) -> int:
    """Number of spherical harmonics of degree ``k`` in ``d`` dimensions."""
    _check_dim(d)
    if int(k) != k or k < 0:
        raise DomainError(f"degree must be an integer >= 0, got {k!r}")
    return binom(k + d - 1, d - 1) - binom(k + d - 3, d - 1)


def h_dim(d: int, k: int) -> int:
    """Cumulative count ``n_dim(d, 0) + ... + n_dim(d, k)``; ``h_dim(d, -1) == 0``."""
    _check_dim(d)
    if int(k) != k or k < -1:
        raise DomainError(f"degree must be an integer >= -1, got {k!r}")
    if k == -1:
        return 0
    return binom(k + d, d) - binom(k + d - 2, d)


def degree_of_index(d: int, n: int) -> int:
    """Return the unique ``k >= 0`` with ``h_dim(d, k-1) < n <= h_dim(d, k)``."""
    _check_dim(d)
    if int(n) != n or n < 1:
        raise DomainError(f"index must be an integer >= 1, got {n!r}")
    hi = 1
    while h_dim(d, hi) < n:
        hi *= 2
    lo = 0
    # smallest k in [lo, hi] with h_dim(d, k) >= n
    while lo < hi:
        mid = (lo + hi) // 2
        if h_dim(d, mid) >= n:
            hi = mid
        else:
            lo = mid + 1
    return lo


def gauge_rate_factor(d: int) -> float:
    """The dimensional constant ``((d-1)!/2) ** (1/(d-1))`` of the decay rates."""
    _check_dim(d)
    return (math.factorial(d - 1) / 2) ** (1.0 / (d - 1))
