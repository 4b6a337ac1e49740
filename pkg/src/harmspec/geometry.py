"""Balls, finite unions of balls, sampling and the geometry JSON format.

Geometry files look like::

    {"outer": [{"center": [0, 0], "radius": 3}],
     "inner": [{"center": [-1, 0], "radius": 0.5}, {"center": [1, 0], "radius": 0.5}]}

An optional ``"cover"`` list holds balls with an extra ``"gamma"`` key.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .errors import DomainError, MismatchError

__all__ = ["BallSpec", "DomainUnion", "Geometry", "load_geometry", "sphere_points"]


@dataclass(frozen=True)
class BallSpec:
    """Open ball ``B_{radius, center}``."""

    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) < 1:
            raise DomainError("ball centre must have at least one coordinate")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError(f"radius must be positive, got {self.radius!r}")

    @property
    def d(self) -> int:
        return len(self.center)

    def dilate(self, gamma: float) -> "BallSpec":
        """Concentric ball with radius multiplied by ``gamma``."""
        return BallSpec(self.center, gamma * self.radius)

    def contains(self, points) -> np.ndarray:
        """Open-ball membership for an array of shape ``(P, d)``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        dist = np.linalg.norm(pts - np.asarray(self.center), axis=1)
        return dist < self.radius

    def contains_ball(self, other: "BallSpec", slack: float = 1e-12) -> bool:
        """Analytic test ``other ⊆ self`` (closed-radius comparison with slack)."""
        gap = np.linalg.norm(np.subtract(other.center, self.center))
        return gap + other.radius <= self.radius * (1 + slack)

    def boundary_distance(self, points) -> np.ndarray:
        """Signed distance to the sphere, positive inside."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self.radius - np.linalg.norm(pts - np.asarray(self.center), axis=1)

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius}

    @classmethod
    def from_dict(cls, obj: dict) -> "BallSpec":
        return cls(tuple(obj["center"]), float(obj["radius"]))


def sphere_points(d: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` deterministic, roughly uniform points on the unit sphere in ``R^d``."""
    if d == 2:
        t = 2 * np.pi * (np.arange(count) + 0.5) / count
        return np.column_stack([np.cos(t), np.sin(t)])
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((count, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


@dataclass(frozen=True)
class DomainUnion:
    """Open union of finitely many balls."""

    balls: tuple

    def __post_init__(self):
        balls = tuple(self.balls)
        if not balls:
            raise DomainError("a domain union needs at least one ball")
        d = balls[0].d
        if any(b.d != d for b in balls):
            raise MismatchError("all balls of a union must live in the same dimension")
        object.__setattr__(self, "balls", balls)

    @property
    def d(self) -> int:
        return self.balls[0].d

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(len(pts), dtype=bool)
        for b in self.balls:
            out |= b.contains(pts)
        return out

    def bounding_box(self):
        lo = np.min([np.subtract(b.center, b.radius) for b in self.balls], axis=0)
        hi = np.max([np.add(b.center, b.radius) for b in self.balls], axis=0)
        return lo, hi

    def inner_distance(self, points) -> np.ndarray:
        """Lower bound for the distance from points to the complement of the union."""
        return np.max([b.boundary_distance(points) for b in self.balls], axis=0)

    def sample(self, n: int, seed: int = 0, boundary_per_ball: int = 256) -> np.ndarray:
        """Deterministic sample of points of the union.

        Scrambled Sobol points in the bounding box filtered by membership,
        plus points just inside every bounding sphere.
        """
        lo, hi = self.bounding_box()
        sobol = qmc.Sobol(self.d, scramble=True, seed=seed)
        m = max(1, math.ceil(math.log2(max(n, 2))))
        pts = qmc.scale(sobol.random_base2(m), lo, hi)
        pts = pts[self.contains(pts)]
        shells = []
        for j, b in enumerate(self.balls):
            u = sphere_points(self.d, boundary_per_ball, seed + 1 + j)
            ring = np.asarray(b.center) + (1 - 1e-9) * b.radius * u
            shells.append(ring)
        return np.vstack([pts] + shells)

    def to_list(self) -> list:
        return [b.to_dict() for b in self.balls]

    @classmethod
    def from_list(cls, items: Sequence[dict]) -> "DomainUnion":
        return cls(tuple(BallSpec.from_dict(o) for o in items))


@dataclass(frozen=True)
class Geometry:
    """Nested pair ``inner ⊂⊂ outer`` plus an optional explicit cover."""

    outer: DomainUnion
    inner: DomainUnion
    cover: tuple = ()
    cover_scalings: tuple = ()

    @property
    def d(self) -> int:
        return self.outer.d


def load_geometry(source) -> Geometry:
    """Read a geometry JSON file (path) or an already parsed mapping."""
    if isinstance(source, (str, Path)):
        data = json.loads(Path(source).read_text())
    else:
        data = source
    outer = DomainUnion.from_list(data["outer"])
    inner = DomainUnion.from_list(data["inner"])
    if outer.d != inner.d:
        raise MismatchError("outer and inner domains have different dimensions")
    cover = tuple(BallSpec.from_dict(o) for o in data.get("cover", []))
    scalings = tuple(float(o["gamma"]) for o in data.get("cover", []))
    return Geometry(outer, inner, cover, scalings)
