"""Exact spectrum of the identification between Bergman spaces on concentric balls.

For ``gamma > 1`` the restriction map ``h^2(B(gamma)) -> h^2(B)`` has
singular values ``gamma ** -(k + d/2)``, each repeated ``n_dim(d, k)`` times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dims import degree_of_index, gauge_rate_factor, h_dim, n_dim
from .errors import DomainError
from .expo import ExponentialGauge, FiniteSpectrum

__all__ = [
    "ExactBallSpectrum",
    "DecayBound",
    "exact_singular_value",
    "exact_gauge",
    "asymptotic_log_rate",
    "sup_log_defect",
    "product_gap",
    "product_gap_limit",
]


@dataclass(frozen=True)
class ExactBallSpectrum:
    """Lazily evaluated singular values of the concentric-ball identification."""

    d: int
    gamma: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.d!r}")
        if not (self.gamma > 1 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be > 1, got {self.gamma!r}")

    @property
    def log_gamma(self) -> float:
        return math.log(self.gamma)

    def block_value(self, k: int) -> float:
        """Singular value shared by the whole degree-``k`` block."""
        return math.exp(-(k + self.d / 2) * self.log_gamma)

    def __getitem__(self, n: int) -> float:
        return exact_singular_value(self, n)

    def prefix(self, count: int) -> FiniteSpectrum:
        """The first ``count`` singular values, built block by block."""
        if count < 0:
            raise DomainError("count must be >= 0")
        out = []
        k = 0
        while len(out) < count:
            out.extend([self.block_value(k)] * n_dim(self.d, k))
            k += 1
        return FiniteSpectrum(tuple(out[:count]))

    def log_values(self, n) -> np.ndarray:
        """``log s_n`` for an array of indices (exact degrees, float logs)."""
        ks = np.array([degree_of_index(self.d, int(i)) for i in np.ravel(n)], dtype=float)
        return -(ks + self.d / 2) * self.log_gamma


@dataclass(frozen=True)
class DecayBound:
    """Pointwise bound ``n -> prefactor * exp(-rate * n**alpha)``."""

    prefactor: float
    rate: float
    alpha: float

    def __post_init__(self):
        if not self.prefactor >= 0:
            raise DomainError("prefactor must be >= 0")
        if not (self.rate > 0 and self.alpha > 0):
            raise DomainError("rate and alpha must be positive")

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        out = self.prefactor * np.exp(-self.rate * n ** self.alpha)
        return float(out) if out.ndim == 0 else out

    def to_dict(self) -> dict:
        return {"prefactor": self.prefactor, "rate": self.rate, "alpha": self.alpha}


def exact_singular_value(spec: ExactBallSpectrum, n: int) -> float:
    if int(n) != n or n < 1:
        raise DomainError(f"index must be an integer >= 1, got {n!r}")
    return spec.block_value(degree_of_index(spec.d, n))


def exact_gauge(spec: ExactBallSpectrum) -> ExponentialGauge:
    """Closed-form gauge: rate ``((d-1)!/2)**(1/(d-1)) log gamma``, value ``gamma**-1/2``."""
    return ExponentialGauge(
        a=gauge_rate_factor(spec.d) * spec.log_gamma,
        alpha=1.0 / (spec.d - 1),
        value=math.exp(-0.5 * spec.log_gamma),
        certified=True,
    )


def asymptotic_log_rate(spec: ExactBallSpectrum) -> float:
    """Limit of ``log s_n / n**(1/(d-1))``."""
    return -gauge_rate_factor(spec.d) * spec.log_gamma


def sup_log_defect(spec: ExactBallSpectrum, n_max: int) -> float:
    """``max_{n <= n_max} log s_n + (n (d-1)!/2)**(1/(d-1)) log gamma``.

    Inside a degree block ``log s_n`` is constant and the second term grows,
    so only block ends (and ``n_max`` itself, which may cut a block) are
    evaluated.
    """
    if int(n_max) != n_max or n_max < 1:
        raise DomainError("n_max must be an integer >= 1")
    d = spec.d
    fact = math.factorial(d - 1) / 2
    candidates = {1, int(n_max)}
    k = 0
    while h_dim(d, k) <= n_max:
        candidates.add(h_dim(d, k))
        k += 1
    best = -math.inf
    for n in sorted(candidates):
        k = degree_of_index(d, n)
        val = ((n * fact) ** (1.0 / (d - 1)) - (k + d / 2)) * spec.log_gamma
        best = max(best, val)
    return best


def _check_gap_args(a, x=0.0) -> np.ndarray:
    arr = np.asarray(a, dtype=float).ravel()
    if arr.size == 0:
        raise DomainError("need at least one entry")
    if np.any(arr < 0) or x < 0:
        raise DomainError("entries and x must be nonnegative")
    return arr


def product_gap(a, x: float) -> float:
    """``prod_k (x + a_k)**(1/d) - x`` for ``d = len(a)``.

    For ``x > 0`` the difference is formed as ``x * expm1(mean(log1p(a/x)))``,
    which avoids cancellation for large ``x``.
    """
    arr = _check_gap_args(a, x)
    if x == 0:
        return float(np.prod(arr ** (1.0 / arr.size)))
    return float(x * np.expm1(np.mean(np.log1p(arr / x))))


def product_gap_limit(a) -> float:
    """Supremum (and limit as ``x -> inf``) of :func:`product_gap`: the mean of ``a``."""
    arr = _check_gap_args(a)
    return float(np.mean(arr))
