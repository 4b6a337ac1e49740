"""Relative covers of nested domains and the resulting decay bounds."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .ball import DecayBound
from .dims import gauge_rate_factor
from .errors import DomainError, InfeasibleCoverError, MismatchError
from .expo import ExponentialGauge
from .geometry import BallSpec, DomainUnion

__all__ = [
    "RelativeCover",
    "Efficiency",
    "CoverReport",
    "efficiency",
    "efficiency_norm",
    "validate_cover",
    "embedding_bound",
    "eigenvalue_bound",
    "natural_cover",
    "greedy_cover",
    "grid_candidates",
]


@dataclass(frozen=True)
class RelativeCover:
    """Balls ``B_j`` with scalings ``gamma_j`` for the pair ``inner ⊂⊂ outer``."""

    balls: tuple
    scalings: tuple
    outer: DomainUnion
    inner: DomainUnion

    def __post_init__(self):
        object.__setattr__(self, "balls", tuple(self.balls))
        object.__setattr__(self, "scalings", tuple(float(g) for g in self.scalings))
        if not self.balls:
            raise DomainError("a relative cover needs at least one ball")
        if len(self.balls) != len(self.scalings):
            raise MismatchError("one scaling per ball is required")
        for g in self.scalings:
            if not g > 1:
                raise DomainError(f"every scaling must exceed 1, got {g!r}")
        if any(b.d != self.outer.d for b in self.balls) or self.inner.d != self.outer.d:
            raise MismatchError("cover balls and domains must share the dimension")

    @property
    def size(self) -> int:
        return len(self.balls)

    @property
    def d(self) -> int:
        return self.outer.d


def efficiency_norm(gamma_logs, k: int) -> float:
    """``(sum_j |log gamma_j|**-k)**(-1/k)``, scaled by the minimum to avoid overflow.

    Writing ``m = min_j |log gamma_j|`` the norm equals
    ``m * (sum_j (m / |log gamma_j|)**k)**(-1/k)``; the sum is at least 1,
    and a single entry comes back unchanged.
    """
    logs = np.abs(np.asarray(gamma_logs, dtype=float))
    m = float(logs.min())
    if len(logs) == 1:
        return m
    s = math.fsum((m / g) ** k for g in logs)
    return m * s ** (-1.0 / k)


@dataclass(frozen=True)
class Efficiency:
    gamma_logs: tuple
    norm_min: float
    norm_k: dict = field(default_factory=dict)


def efficiency(cover: RelativeCover, k: int) -> Efficiency:
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    if any(not g > 1 for g in cover.scalings):
        raise DomainError("every scaling must exceed 1")
    logs = tuple(math.log(g) for g in cover.scalings)
    return Efficiency(logs, min(abs(x) for x in logs), {int(k): efficiency_norm(logs, k)})


@dataclass
class CoverReport:
    valid: bool
    violations: list

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": list(self.violations)}


def validate_cover(cover: RelativeCover, n_samples: int = 4096, seed: int = 0) -> CoverReport:
    """Check ``inner ⊆ ∪ B_j`` by sampling and ``∪ B_j(gamma_j) ⊆ outer``.

    Dilated balls that sit inside a single outer ball are accepted
    analytically; others are checked on boundary and interior samples.
    """
    violations = []
    cover_union = DomainUnion(cover.balls)
    pts = cover.inner.sample(n_samples, seed=seed)
    missed = ~cover_union.contains(pts)
    if missed.any():
        violations.append(
            f"condition (a): {int(missed.sum())} sampled inner points lie outside the cover, "
            f"e.g. {pts[missed][0].tolist()}")
    for j, (b, g) in enumerate(zip(cover.balls, cover.scalings)):
        big = b.dilate(g)
        if any(o.contains_ball(big) for o in cover.outer.balls):
            continue
        # interior of the dilated ball, slightly shrunk so tangencies do not count
        test = DomainUnion((BallSpec(big.center, big.radius * (1 - 1e-9)),))
        sample = test.sample(n_samples, seed=seed + 17 + j)
        out = ~cover.outer.contains(sample)
        if out.any():
            violations.append(
                f"condition (b): dilated ball {j} (radius {big.radius:.6g}) leaves the outer domain")
    return CoverReport(not violations, violations)


def embedding_bound(cover: RelativeCover, d: int):
    """Singular-value gauge and pointwise bound for ``h^2(outer) -> h^2(inner)``.

    Rate ``((d-1)!/2)**(1/(d-1)) * ||Gamma||_(d-1)``, exponent ``1/(d-1)``,
    gauge value ``N exp(-||Gamma|| / 2)``.
    """
    if d != cover.d:
        raise MismatchError("d does not match the cover dimension")
    eff = efficiency(cover, d - 1)
    rate = gauge_rate_factor(d) * eff.norm_k[d - 1]
    value = cover.size * math.exp(-0.5 * eff.norm_min)
    gauge = ExponentialGauge(rate, 1.0 / (d - 1), value, certified=True)
    return DecayBound(value, rate, 1.0 / (d - 1)), gauge


def eigenvalue_bound(cover: RelativeCover, d: int, K: float) -> DecayBound:
    """Eigenvalue bound ``K N exp(-||Gamma||/2) exp(-c n**(1/(d-1)))`` with ``c = (d-1)/d`` of the embedding rate."""
    if not K >= 0:
        raise DomainError("K must be nonnegative")
    _, gauge = embedding_bound(cover, d)
    return DecayBound(K * gauge.value, gauge.a * (d - 1) / d, gauge.alpha)


def _max_scalings(centers: np.ndarray, radius, outer: DomainUnion) -> np.ndarray:
    return outer.inner_distance(centers) / np.asarray(radius)


def natural_cover(outer: DomainUnion, inner: DomainUnion, safety: float = 0.01) -> RelativeCover:
    """Cover ``inner`` by its own balls, each dilated as far as one outer ball allows."""
    centers = np.array([b.center for b in inner.balls])
    radii = np.array([b.radius for b in inner.balls])
    gammas = (1 - safety) * _max_scalings(centers, radii, outer)
    if np.any(gammas <= 1):
        raise InfeasibleCoverError("some inner ball cannot be dilated inside the outer domain")
    return RelativeCover(inner.balls, tuple(gammas), outer, inner)


def grid_candidates(outer: DomainUnion, inner: DomainUnion, ball_radius: float,
                    grid_step: float, safety: float = 0.01):
    """Grid centres (anchored at the inner bounding-box centre) and their scalings.

    Only centres within ``ball_radius`` of the inner bounding box and with
    scaling above 1 are returned.  Halving ``grid_step`` keeps every previous
    centre.
    """
    lo, hi = inner.bounding_box()
    mid = (lo + hi) / 2
    reach = (hi - lo) / 2 + ball_radius
    steps = np.floor(reach / grid_step).astype(int)
    axes = [mid[i] + grid_step * np.arange(-steps[i], steps[i] + 1) for i in range(inner.d)]
    centers = np.array(list(itertools.product(*axes)), dtype=float)
    gammas = (1 - safety) * _max_scalings(centers, ball_radius, outer)
    keep = gammas > 1
    return centers[keep], gammas[keep]


def greedy_cover(outer: DomainUnion, inner: DomainUnion, ball_radius: float,
                 grid_step: float, n_samples: int = 4096, seed: int = 0,
                 safety: float = 0.01) -> RelativeCover:
    """Greedy set cover of sampled inner points by grid balls of one radius.

    Each candidate gets the largest scaling keeping its dilation inside a
    single outer ball, shrunk by ``safety``.  At every step the candidate
    covering most uncovered samples wins (ties: larger scaling).
    """
    if not (ball_radius > 0 and grid_step > 0):
        raise DomainError("ball_radius and grid_step must be positive")
    pts = inner.sample(n_samples, seed=seed)
    if np.any(outer.inner_distance(pts) <= 0):
        raise InfeasibleCoverError("inner domain is not contained in the outer domain")
    centers, gammas = grid_candidates(outer, inner, ball_radius, grid_step, safety)
    if len(centers) == 0:
        raise InfeasibleCoverError("no grid ball admits a scaling above 1")
    dist = np.linalg.norm(pts[:, None, :] - centers[None, :, :], axis=2)
    hits = dist < ball_radius
    if not hits.any(axis=1).all():
        raise InfeasibleCoverError("some inner points cannot be covered by an admissible ball")
    uncovered = np.ones(len(pts), dtype=bool)
    chosen = []
    while uncovered.any():
        counts = hits[uncovered].sum(axis=0)
        best = max(range(len(centers)), key=lambda j: (counts[j], gammas[j]))
        chosen.append(best)
        uncovered &= ~hits[:, best]
    balls = tuple(BallSpec(tuple(centers[j]), ball_radius) for j in chosen)
    return RelativeCover(balls, tuple(float(gammas[j]) for j in chosen), outer, inner)
