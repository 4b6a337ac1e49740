"""Product quadrature on balls and on disjointified unions of balls.

The unit sphere in ``R^d`` is parametrised recursively as
``(t, sqrt(1 - t**2) xi)`` with ``xi`` on the sphere in ``R^(d-1)``; ``t`` is
integrated with Gauss-Jacobi nodes for the weight ``(1 - t**2)**((d-3)/2)``
(Gauss-Legendre when ``d = 3``) and the circle with the trapezoid rule.
The radius uses Gauss-Legendre on ``[0, 1]``.  With enough nodes all rules
are exact for polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError
from .geometry import BallSpec, DomainUnion
from .harmonic import unit_ball_volume

__all__ = ["QuadratureRule", "sphere_rule", "unit_ball_rule", "ball_rule", "union_rule",
           "exact_orders"]


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values) -> float:
        return float(np.asarray(values) @ self.weights)


@lru_cache(maxsize=64)
def sphere_rule(d: int, n_polar: int, n_circle: int):
    """Nodes and weights for the normalised surface measure on ``S^(d-1)``."""
    if d < 2:
        raise DomainError("sphere rules need d >= 2")
    if d == 2:
        t = 2 * np.pi * np.arange(n_circle) / n_circle
        return np.column_stack([np.cos(t), np.sin(t)]), np.full(n_circle, 1.0 / n_circle)
    a = (d - 3) / 2
    t, w = roots_jacobi(n_polar, a, a)
    w = w / w.sum()
    sub_nodes, sub_w = sphere_rule(d - 1, n_polar, n_circle)
    s = np.sqrt(1 - t ** 2)
    nodes = np.vstack([np.column_stack([np.full(len(sub_nodes), ti), si * sub_nodes])
                       for ti, si in zip(t, s)])
    weights = np.concatenate([wi * sub_w for wi in w])
    return nodes, weights


def exact_orders(d: int, degree: int):
    """Node counts ``(radial, polar, circle)`` exact for polynomials of total ``degree``."""
    radial = (degree + d) // 2 + 1
    polar = (degree + 1) // 2 + 1
    circle = degree + 1
    return radial, polar, circle


@lru_cache(maxsize=64)
def unit_ball_rule(d: int, n_radial: int, n_polar: int, n_circle: int) -> QuadratureRule:
    """Product rule for Lebesgue measure on the unit ball at the origin."""
    x, w = np.polynomial.legendre.leggauss(n_radial)
    rho = (x + 1) / 2
    w_rho = w / 2 * rho ** (d - 1) * d
    s_nodes, s_w = sphere_rule(d, n_polar, n_circle)
    nodes = (rho[:, None, None] * s_nodes[None, :, :]).reshape(-1, d)
    weights = (w_rho[:, None] * s_w[None, :]).ravel() * unit_ball_volume(d)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights)


def ball_rule(ball: BallSpec, n_radial: int, n_polar: int, n_circle: int) -> QuadratureRule:
    unit = unit_ball_rule(ball.d, n_radial, n_polar, n_circle)
    return QuadratureRule(np.asarray(ball.center) + ball.radius * unit.nodes,
                          unit.weights * ball.radius ** ball.d)


def union_rule(union: DomainUnion, n_radial: int, n_polar: int, n_circle: int):
    """Quadrature over the union via the ordered disjointification.

    Piece ``n`` is ball ``n`` minus all earlier balls; a node is kept by the
    lowest-index ball containing it.  Returns the rule and a flag telling
    whether the pieces are whole balls (then polynomial exactness holds).
    """
    nodes, weights = [], []
    exact = True
    for n, ball in enumerate(union.balls):
        rule = ball_rule(ball, n_radial, n_polar, n_circle)
        keep = np.ones(len(rule.nodes), dtype=bool)
        for earlier in union.balls[:n]:
            keep &= ~earlier.contains(rule.nodes)
            gap = np.linalg.norm(np.subtract(ball.center, earlier.center))
            if gap < ball.radius + earlier.radius:
                exact = False
        nodes.append(rule.nodes[keep])
        weights.append(rule.weights[keep])
    return QuadratureRule(np.vstack(nodes), np.concatenate(weights)), exact
