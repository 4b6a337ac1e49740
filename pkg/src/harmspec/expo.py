"""Exponential classes of sequences and operators.

A nonnegative sequence ``x`` belongs to the class of type ``(a, alpha)``
when ``sup_n |x_n| exp(a n**alpha)`` is finite; that supremum is the
*gauge*.  An operator belongs to the class when its singular values do.
The helpers here evaluate gauges on finite prefixes and implement the
algebra of gauges under composition, finite sums and passage from
singular values to eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, MismatchError

__all__ = [
    "ExponentialGauge",
    "FiniteSpectrum",
    "sequence_gauge",
    "compose_gauge",
    "sum_rate",
    "sum_gauge",
    "eigen_rate_transfer",
    "interleave_counterexample",
    "sorted_eigenvalues",
]


def _check_rate(a: float, alpha: float) -> None:
    if not (a > 0 and math.isfinite(a)):
        raise DomainError(f"rate must be positive and finite, got {a!r}")
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"exponent must be positive and finite, got {alpha!r}")


@dataclass(frozen=True)
class ExponentialGauge:
    """Membership data ``(a, alpha, value)`` for an exponential class.

    ``certified`` is False when ``value`` was read off a finite prefix and
    is therefore only a lower bound for the supremum over all ``n``.
    """

    a: float
    alpha: float
    value: float
    certified: bool = True

    def __post_init__(self):
        _check_rate(self.a, self.alpha)
        if not self.value >= 0:
            raise DomainError(f"gauge value must be >= 0, got {self.value!r}")

    def to_dict(self) -> dict:
        return {"a": self.a, "alpha": self.alpha, "value": self.value,
                "certified": self.certified}


@dataclass(frozen=True)
class FiniteSpectrum:
    """A finite nonincreasing prefix of a singular-value or eigenvalue-modulus sequence."""

    values: tuple
    tail_certified: bool = False

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        arr = np.asarray(vals)
        if arr.size and (np.any(arr < 0) or np.any(np.isnan(arr))):
            raise DomainError("spectrum entries must be nonnegative numbers")
        if arr.size > 1 and np.any(np.diff(arr) > 0):
            raise DomainError("spectrum must be nonincreasing")

    @classmethod
    def from_unsorted(cls, values, tail_certified: bool = False) -> "FiniteSpectrum":
        """Build from arbitrary (possibly complex) entries, sorting moduli."""
        mods = np.sort(np.abs(np.asarray(values)).ravel())[::-1]
        return cls(tuple(mods), tail_certified)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _log_weighted(x: np.ndarray, a: float, alpha: float) -> np.ndarray:
    """``log(|x_n|) + a n**alpha`` with ``-inf`` for zero entries."""
    n = np.arange(1, x.size + 1, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(x)) + a * n ** alpha


def sequence_gauge(x: FiniteSpectrum, a: float, alpha: float) -> ExponentialGauge:
    """Gauge ``max_n |x_n| exp(a n**alpha)`` over the stored prefix.

    The result is certified only if the spectrum's tail is certified;
    otherwise it is a lower bound for the true gauge.  Overflow is reported
    as ``inf``.
    """
    _check_rate(a, alpha)
    arr = x.as_array()
    if arr.size == 0:
        value = 0.0
    else:
        top = float(np.max(_log_weighted(arr, a, alpha)))
        value = 0.0 if top == -math.inf else (math.exp(top) if top < 709.7 else math.inf)
    return ExponentialGauge(a, alpha, value, certified=x.tail_certified)


def compose_gauge(norm_left: float, mid: ExponentialGauge, norm_right: float) -> ExponentialGauge:
    """Gauge of ``A B C`` from the operator norms of ``A``, ``C`` and the gauge of ``B``."""
    if norm_left < 0 or norm_right < 0:
        raise DomainError("operator norms must be nonnegative")
    if norm_left == 0 or norm_right == 0:
        value = 0.0
    else:
        value = norm_left * mid.value * norm_right
    return ExponentialGauge(mid.a, mid.alpha, value, mid.certified)


def sum_rate(rates: Sequence[float], alpha: float) -> float:
    """Rate ``(sum_n a_n**(-1/alpha))**(-alpha)`` of a sum of class members.

    Evaluated relative to the smallest rate so that a single summand is
    returned unchanged and no term overflows.
    """
    rates = [float(r) for r in rates]
    if not rates:
        raise DomainError("sum_rate needs at least one rate")
    for r in rates:
        _check_rate(r, alpha)
    if len(rates) == 1:
        return rates[0]
    m = min(rates)
    s = math.fsum((m / r) ** (1.0 / alpha) for r in rates)
    return m * s ** (-alpha)


def sum_gauge(gauges: Sequence[ExponentialGauge]) -> ExponentialGauge:
    """Gauge bound for the sum of ``N`` operators with common exponent."""
    if not gauges:
        raise DomainError("sum_gauge needs at least one gauge")
    alpha = gauges[0].alpha
    if any(g.alpha != alpha for g in gauges):
        raise MismatchError("all summands must share the same exponent alpha")
    rate = sum_rate([g.a for g in gauges], alpha)
    value = len(gauges) * max(g.value for g in gauges)
    return ExponentialGauge(rate, alpha, value, all(g.certified for g in gauges))


def eigen_rate_transfer(g: ExponentialGauge) -> ExponentialGauge:
    """Gauge bound for the eigenvalue sequence of an operator with singular-value gauge ``g``."""
    return ExponentialGauge(g.a / (1.0 + g.alpha), g.alpha, g.value, g.certified)


def interleave_counterexample(a: float, alpha: float, m: int):
    """First ``2m`` singular values of ``A = diag(s1, 0, s2, 0, ...)``, ``B`` and ``A + B``.

    Here ``s_j = exp(-a j**alpha)``.  ``A`` and ``B`` have gauge 1 at
    ``(a, alpha)`` whereas ``A + B = diag(s1, s1, s2, s2, ...)`` does not
    belong to that class.  Returned spectra are sorted nonincreasing, so the
    zeros of ``A`` and ``B`` move to the back.
    """
    _check_rate(a, alpha)
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    sigma = np.exp(-a * np.arange(1, m + 1, dtype=float) ** alpha)
    diag_a = np.zeros(2 * m)
    diag_a[0::2] = sigma
    diag_b = np.zeros(2 * m)
    diag_b[1::2] = sigma
    return (FiniteSpectrum.from_unsorted(diag_a),
            FiniteSpectrum.from_unsorted(diag_b),
            FiniteSpectrum.from_unsorted(diag_a + diag_b))


def sorted_eigenvalues(matrix) -> np.ndarray:
    """Eigenvalues of a dense square matrix in a deterministic order.

    Sorted by modulus descending, then real part descending, then imaginary
    part descending.
    """
    ev = np.linalg.eigvals(np.asarray(matrix))
    ev = np.asarray(ev, dtype=complex)
    order = np.lexsort((-ev.imag, -ev.real, -np.abs(ev)))
    return ev[order]
