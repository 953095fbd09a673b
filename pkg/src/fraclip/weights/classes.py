"""Per-ball weight-class quantities and empirical sups over ball families."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..geometry import Ball, BallFamily, unit_ball_volume
from ..params import ExponentVector, ParameterPoint, holder_conjugate
from .forms import INF, WeightSpec, WeightVector, product
from .stats import (ball_integral, ball_power_average, ball_sup, lebesgue_norm_on_ball,
                    tail_norm)


def _prod(factors) -> float:
    out = 1.0
    for f in factors:
        if f == INF:
            return INF
        out *= f
    return out


def _with_lead(lead: float, factors) -> float:
    """lead * prod(factors), where a vanishing lead factor wins over infinities."""
    if lead == 0:
        return 0.0
    rest = _prod(factors)
    if lead == INF or rest == INF:
        return INF
    return lead * rest


@dataclass(frozen=True)
class SigmaPattern:
    bits: tuple

    def __init__(self, bits):
        b = tuple(int(x) for x in bits)
        if any(x not in (0, 1) for x in b):
            raise ValueError("sigma bits must be 0 or 1")
        object.__setattr__(self, "bits", b)

    @property
    def complement(self) -> "SigmaPattern":
        return SigmaPattern(1 - x for x in self.bits)

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def theta(self, point: ParameterPoint) -> float:
        n, m = point.n, point.m
        return math.fsum(1 - point.betas[i] / n + point.delta / (m * n)
                         for i, s in enumerate(self.bits) if s == 1)

    @staticmethod
    def all_patterns(m: int):
        return [SigmaPattern(bits) for bits in itertools.product((0, 1), repeat=m)]


# -- Muckenhoupt-type brackets ------------------------------------------------

def _conjugate_factors(v: Sequence[WeightSpec], p: ExponentVector, B: Ball) -> list:
    out = []
    for vi, pi in zip(v, p):
        inv = vi.reciprocal()
        if pi == 1:
            out.append(ball_sup(inv, B))
        else:
            out.append(ball_power_average(inv, B, holder_conjugate(pi)))
    return out


def a_pq_quantity(v: Sequence[WeightSpec], p: ExponentVector, q: float, B: Ball) -> float:
    """Per-ball A_{p,q} bracket; q = inf uses the sup of prod v_i."""
    if len(v) != p.m:
        raise ValueError("need one weight per exponent")
    if not (q > 0):
        raise ValueError("q must be positive or inf")
    prod_v = product(v)
    lead = ball_sup(prod_v, B) if q == INF else ball_power_average(prod_v, B, q)
    if lead == 0:
        return 0.0
    return _with_lead(lead, _conjugate_factors(v, p, B))


def a_p_quantity(w: Sequence[WeightSpec], p: ExponentVector, B: Ball) -> float:
    """Per-ball multilinear A_p bracket."""
    if len(w) != p.m:
        raise ValueError("need one weight per exponent")
    if p.inv_p == 0:
        raise ValueError("A_p bracket needs a finite aggregate exponent p")
    agg = p.p
    nu = product([wi.power(agg / pi) for wi, pi in zip(w, p) if pi != INF])
    avg = ball_integral(nu, B) / B.volume
    lead = INF if avg == INF else avg ** (1.0 / agg)
    if lead == 0:
        return 0.0
    factors = []
    for wi, pi in zip(w, p):
        if pi == 1:
            factors.append(ball_sup(wi.reciprocal(), B))
        elif pi == INF:
            factors.append(1.0)
        else:
            pc = holder_conjugate(pi)
            s = ball_integral(wi.power(1 - pc), B) / B.volume
            factors.append(INF if s == INF else s ** (1 / pc))
    return _with_lead(lead, factors)


@dataclass(frozen=True)
class Transform:
    ell: ExponentVector
    z: tuple
    lam: float
    ell_aggregate: float


class TransformPreconditionError(ValueError):
    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"1/p_i + 1/(mq) - 1/(mp) = {value:.6g} <= 0 at i = {index + 1}")


def apq_to_ap_transform(w: Sequence[WeightSpec], p: ExponentVector, q: float) -> Transform:
    """Map an A_{p,q} vector to the A_ell vector with per-ball bracket identity
    a_p(z, ell, B) = a_pq(w, p, q, B)^(q/ell)."""
    m = p.m
    if not (0 < q < INF):
        raise ValueError("q must be a positive real")
    inv_p = p.inv_p
    for i, pi in enumerate(p):
        val = 1 / pi + 1 / (m * q) - inv_p / m if pi != INF else 1 / (m * q) - inv_p / m
        if not val > 0:
            raise TransformPreconditionError(i, val)
    mp = m / inv_p if inv_p > 0 else INF
    lam = (1 / holder_conjugate(mp) if mp >= 1 else math.nan) + 1 / (m * q)
    ell = []
    for pi in p:
        if pi == 1:
            ell.append(1.0)
        else:
            ell.append(holder_conjugate(lam * holder_conjugate(pi)))
    ell_vec = ExponentVector(ell)
    ell_agg = ell_vec.p
    z = tuple(wi.power(q * li / ell_agg) for wi, li in zip(w, ell))
    return Transform(ell_vec, z, lam, ell_agg)


# -- reverse Hoelder and doubling ------------------------------------------------

def rh_ratio(w: WeightSpec, s: float, B: Ball) -> float:
    avg = ball_power_average(w, B, 1.0)
    num = ball_sup(w, B) if s == INF else ball_power_average(w, B, s)
    if num == INF:
        return INF
    if avg == 0:
        return 1.0 if num == 0 else INF
    return num / avg


def doubling_ratio(w: WeightSpec, B: Ball) -> float:
    big = ball_integral(w, B.dilate(2.0))
    small = ball_integral(w, B)
    if big == INF:
        return INF
    if small == 0:
        return 1.0 if big == 0 else INF
    return big / small


# -- the two-weight class --------------------------------------------------------

def _check_pair(pair: WeightVector, p: ExponentVector, point: ParameterPoint) -> None:
    if pair.m != p.m or p.m != point.m:
        raise ValueError("weight pair, exponent vector and parameter point disagree on m")


def hm_full_quantity(pair: WeightVector, p: ExponentVector, point: ParameterPoint, B: Ball) -> float:
    _check_pair(pair, p, point)
    lead = ball_sup(pair.w, B)
    if lead == 0:
        return 0.0
    scale = B.volume ** (-(point.delta_tilde - point.delta) / point.n)
    factors = [tail_norm(vi.reciprocal(), B, point.kappa(i), holder_conjugate(pi), "full")
               for i, (vi, pi) in enumerate(zip(pair.v, p))]
    return _with_lead(lead * scale, factors)


def hm_local_quantity(pair: WeightVector, p: ExponentVector, point: ParameterPoint, B: Ball) -> float:
    _check_pair(pair, p, point)
    lead = ball_sup(pair.w, B)
    if lead == 0:
        return 0.0
    n = point.n
    scale = B.volume ** (-(point.delta_tilde / n + p.inv_p - point.beta / n))
    return _with_lead(lead * scale, _conjugate_factors(pair.v, p, B))


def _outside_factor(vi: WeightSpec, pi: float, kappa: float, B: Ball) -> float:
    return tail_norm(vi.reciprocal(), B, kappa, holder_conjugate(pi), "outside")


def hm_global_quantity(pair: WeightVector, p: ExponentVector, point: ParameterPoint, B: Ball) -> float:
    _check_pair(pair, p, point)
    lead = ball_sup(pair.w, B)
    if lead == 0:
        return 0.0
    scale = B.volume ** (-(point.delta_tilde - point.delta) / point.n)
    factors = [_outside_factor(vi, pi, point.kappa(i), B) for i, (vi, pi) in enumerate(zip(pair.v, p))]
    return _with_lead(lead * scale, factors)


def hm_sigma_quantity(pair: WeightVector, p: ExponentVector, point: ParameterPoint, B: Ball,
                      sigma: SigmaPattern) -> float:
    _check_pair(pair, p, point)
    if len(sigma.bits) != p.m:
        raise ValueError("sigma pattern length differs from m")
    lead = ball_sup(pair.w, B)
    if lead == 0:
        return 0.0
    n = point.n
    scale = B.volume ** (-((point.delta_tilde - point.delta) / n + sigma.theta(point)))
    factors = []
    for i, (vi, pi, s) in enumerate(zip(pair.v, p, sigma.bits)):
        if s == 1:
            factors.append(lebesgue_norm_on_ball(vi.reciprocal(), B, holder_conjugate(pi)))
        else:
            factors.append(_outside_factor(vi, pi, point.kappa(i), B))
    return _with_lead(lead * scale, factors)


def sigma_domination_constant(point: ParameterPoint) -> float:
    """c with hm_full >= c * hm_sigma on every ball.

    On B, |B|^{1/n} + |x_B - y| <= (1 + c_n^{1/n}) R; off B, it is at most
    (1 + c_n^{1/n}) |x_B - y|, with c_n the unit-ball volume.
    """
    root = unit_ball_volume(point.n) ** (1 / point.n)
    ratio = max(1 + root, (1 + root) / root)
    return _prod(ratio ** (-point.kappa(i)) for i in range(point.m))


# -- empirical sups --------------------------------------------------------------

@dataclass
class ClassSweep:
    sup: float
    argmax: Ball
    profile: list  # [(Ball, value)] in family order

    @property
    def finite(self) -> bool:
        return self.sup < INF

    def by_radius(self) -> tuple:
        """(radii, per-radius max over centers), radii ascending."""
        table: dict = {}
        for ball, val in self.profile:
            table[ball.radius] = max(table.get(ball.radius, -INF), val)
        radii = np.array(sorted(table))
        return radii, np.array([table[r] for r in radii])

    def slope(self) -> float:
        radii, vals = self.by_radius()
        return fit_loglog_slope(radii, vals)

    def max_decade_factor(self) -> float:
        """Largest |change of log10(value)| per decade of R between neighbouring radii."""
        radii, vals = self.by_radius()
        if len(radii) < 2 or np.any(vals <= 0) or np.any(~np.isfinite(vals)):
            return INF if np.any(~np.isfinite(vals)) else 0.0
        lr, lv = np.log10(radii), np.log10(vals)
        return float(np.max(np.abs(np.diff(lv)) / np.diff(lr)))

    def extension_growth(self) -> float:
        """Largest factor by which the family sup grows per decade of added radii.

        S_k is the sup over radii within k decades of the geometric middle
        radius; the result is max_k S_k / S_(k-1). A bounded class quantity
        gives factors near 1 however its profile bends inside the range.
        """
        radii, vals = self.by_radius()
        if np.any(~np.isfinite(vals)):
            return INF
        lr = np.log10(radii)
        mid = 0.5 * (lr[0] + lr[-1])
        dist = np.abs(lr - mid)
        k_max = int(math.ceil(dist.max() - 1e-12))
        sups = [float(np.max(vals[dist <= k + 1e-12], initial=0.0)) for k in range(k_max + 1)]
        growth = 1.0
        for prev, cur in zip(sups[:-1], sups[1:]):
            if prev > 0:
                growth = max(growth, cur / prev)
            elif cur > 0:
                return INF
        return growth


def fit_loglog_slope(xs, ys) -> float:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    mask = (xs > 0) & (ys > 0) & np.isfinite(ys)
    if mask.sum() < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(xs[mask]), np.log(ys[mask]), 1)
    return float(slope)


def _eval_one(args):
    fn, inputs, ball = args
    return fn(*inputs, ball)


def empirical_class_sup(quantity: Callable, inputs: tuple, family: BallFamily,
                        jobs: int = 1) -> ClassSweep:
    """Sweep ``quantity(*inputs, B)`` over the family in order.

    The reduction is an ordered max over the profile, so results do not depend
    on ``jobs``. The first ball with an infinite value is reported as argmax.
    """
    balls = list(family)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            values = list(ex.map(_eval_one, [(quantity, inputs, b) for b in balls]))
    else:
        values = [quantity(*inputs, b) for b in balls]
    profile = list(zip(balls, [float(v) for v in values]))
    best_i = 0
    for i, (_, val) in enumerate(profile):
        if val == INF:
            best_i = i
            break
        if val > profile[best_i][1]:
            best_i = i
    return ClassSweep(profile[best_i][1], profile[best_i][0], profile)


def rh_quantity(w: WeightSpec, s: float, family: BallFamily, jobs: int = 1) -> ClassSweep:
    if not s > 1:
        raise ValueError("reverse Hoelder exponent must exceed 1")
    return empirical_class_sup(rh_ratio, (w, s), family, jobs)


def doubling_quantity(w: WeightSpec, family: BallFamily, jobs: int = 1) -> ClassSweep:
    return empirical_class_sup(doubling_ratio, (w,), family, jobs)


QUANTITIES = {
    "hm_full": hm_full_quantity,
    "hm_local": hm_local_quantity,
    "hm_global": hm_global_quantity,
}
