"""Ball averages, oscillations and the weighted Lipschitz seminorm L_w(delta~).

Integration over balls is one-dimensional (n = 1): a ball is the interval
[c - R, c + R] and uses the same graded Gauss meshes as the operator
quadrature. Functions are callables on a tuple of coordinate arrays (the
TestFunction / SymbolSpec convention) or plain callables of one array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from .geometry import Ball, BallFamily
from .quadrature import QuadratureConfig, interval_rule
from .weights.classes import ClassSweep, empirical_class_sup
from .weights.forms import INF, WeightSpec
from .weights.stats import ball_sup

BALL_CONFIG = QuadratureConfig(base_cells=8, depth=0, kink_depth=14, order=12)
ROOT_SAMPLES = 2049


def _as_line_function(f) -> Callable:
    """Wrap f so that it takes one array of points on the line."""
    if hasattr(f, "at"):
        return f.at
    return lambda y: np.asarray(f(y), dtype=float)


def _kinks_of(f) -> list:
    kinks = getattr(f, "kinks", ())
    out = list(kinks[0]) if kinks and isinstance(kinks[0], tuple) else list(kinks)
    box = getattr(f, "box", None)
    if box:
        out += [box[0][0], box[0][1]]
    return out


def _interval(B: Ball) -> tuple:
    if B.n != 1:
        raise NotImplementedError("ball quadrature is implemented for n = 1 only")
    c = B.center[0]
    return c - B.radius, c + B.radius


def _rule(B: Ball, kinks: Sequence[float], cfg: QuadratureConfig):
    a, b = _interval(B)
    inside = sorted({float(k) for k in kinks if a < k < b})
    return interval_rule(a, b, inside, cfg)


def ball_average(f, B: Ball, cfg: QuadratureConfig | None = None, kinks: Sequence[float] = ()) -> float:
    """|B|^{-1} int_B f."""
    cfg = cfg or BALL_CONFIG
    g = _as_line_function(f)
    nodes, weights = _rule(B, list(kinks) + _kinks_of(f), cfg)
    # normalizing by the rule's own weight sum keeps constants exact
    return float(np.dot(weights, np.broadcast_to(g(nodes), nodes.shape))) / float(np.sum(weights))


def _crossings(g: Callable, level: float, a: float, b: float, kinks: Sequence[float]) -> list:
    """Points in (a, b) where g - level changes sign, refined by Brent's method."""
    grid = np.unique(np.concatenate([np.linspace(a, b, ROOT_SAMPLES),
                                     [k for k in kinks if a < k < b]]))
    vals = np.broadcast_to(g(grid), grid.shape) - level
    roots = []
    for i in range(len(grid) - 1):
        u, v = vals[i], vals[i + 1]
        if u == 0:
            roots.append(grid[i])
        elif u * v < 0:
            roots.append(optimize.brentq(lambda t: float(g(np.array([t]))[0]) - level,
                                         grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15))
    return roots


def oscillation(f, B: Ball, cfg: QuadratureConfig | None = None, kinks: Sequence[float] = (),
                average: float | None = None) -> float:
    """int_B |f - f_B|, with the mesh split at the sign changes of f - f_B."""
    cfg = cfg or BALL_CONFIG
    g = _as_line_function(f)
    all_kinks = list(kinks) + _kinks_of(f)
    fb = ball_average(f, B, cfg, kinks) if average is None else average
    a, b = _interval(B)
    roots = _crossings(g, fb, a, b, all_kinks)
    nodes, weights = _rule(B, all_kinks + roots, cfg)
    vals = np.broadcast_to(g(nodes), nodes.shape)
    return float(np.dot(weights, np.abs(vals - fb)))


def weighted_lipschitz_quotient(f, w: WeightSpec, delta_tilde: float, B: Ball,
                                cfg: QuadratureConfig | None = None, kinks: Sequence[float] = ()) -> float:
    """||w chi_B||_inf |B|^{-(1 + delta~/n)} int_B |f - f_B|."""
    osc = oscillation(f, B, cfg, kinks)
    if osc == 0.0:
        return 0.0
    sup = ball_sup(w, B)
    if sup == INF:
        return INF
    return sup * B.volume ** (-(1.0 + delta_tilde / B.n)) * osc


def seminorm_estimate(f, w: WeightSpec, delta_tilde: float, family: BallFamily,
                      cfg: QuadratureConfig | None = None, kinks: Sequence[float] = ()) -> ClassSweep:
    """Empirical lower bound for ||f||_{L_w(delta~)} over the family, with its profile."""
    return empirical_class_sup(_quotient_at, (f, w, delta_tilde, cfg, tuple(kinks)), family)


def _quotient_at(f, w, delta_tilde, cfg, kinks, B):
    return weighted_lipschitz_quotient(f, w, delta_tilde, B, cfg, kinks)


@dataclass(frozen=True)
class PowerOscillation:
    """Closed forms for f(x) = |x|^d on B(0, R) in one dimension."""

    d: float

    def average(self, R: float) -> float:
        return R ** self.d / (self.d + 1)

    def oscillation(self, R: float) -> float:
        # f - f_B changes sign at r0 = R (d+1)^{-1/d}
        d = self.d
        fb = self.average(R)
        r0 = R * (d + 1) ** (-1 / d)
        below = fb * r0 - r0 ** (d + 1) / (d + 1)
        above = (R ** (d + 1) - r0 ** (d + 1)) / (d + 1) - fb * (R - r0)
        return 2.0 * (below + above)

    def quotient(self, R: float) -> float:
        """w = 1, delta~ = d: R-independent."""
        return (2 * R) ** (-(1 + self.d)) * self.oscillation(R)


__all__ = ["ball_average", "oscillation", "weighted_lipschitz_quotient", "seminorm_estimate",
           "PowerOscillation", "BALL_CONFIG"]
