"""Ball statistics of weights: sups, integrals, power averages and tail integrals.

One-dimensional pure powers use closed forms. Other radial forms go through
``scipy.integrate.quad`` with an algebraic end-point weight when the origin
is an end point; grid weights are integrated cell by cell in closed form.
In dimension n >= 2 radial integrals over a ball use the spherical-cap
fraction, and tail integrals use polar coordinates around the ball center.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate, optimize, special

from ..geometry import Ball, unit_sphere_area
from .forms import INF, GridWeight1D, RadialForm, WeightSpec

QUAD_EPSREL = 1e-11
QUAD_LIMIT = 200
TAIL_FRACTION = 1e-8
MAX_ANNULI = 400


def _quad(fn, a, b, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(fn, a, b, epsabs=0.0, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, **kw)
    return val


def _require_grid_dim(w: WeightSpec, n: int) -> None:
    if isinstance(w, GridWeight1D) and n != 1:
        raise ValueError("grid weights are one-dimensional")


# -- radial integrals ----------------------------------------------------------

def radial_segment_integral(w: RadialForm, r0: float, r1: float, extra_power: float = 0.0) -> float:
    """Integral of phi(r) r**extra_power over [r0, r1], 0 <= r0 <= r1."""
    if r1 <= r0 or w.is_zero:
        return 0.0
    a = w.exponent + extra_power
    if r0 == 0 and a <= -1:
        return INF
    if w.rate > 0 and r1 == INF:
        return INF
    if w.is_pure_power:
        if a == -1:
            return w.scale * math.log(r1 / r0)
        return w.scale * (r1 ** (a + 1) - r0 ** (a + 1)) / (a + 1)
    if r0 == 0 and a != 0:
        return _quad(lambda r: float(w.smooth_part(r)), 0.0, r1, weight="alg", wvar=(a, 0.0))
    return _quad(lambda r: float(w.radial(r)) * r ** extra_power, r0, r1)


def line_integral(w: WeightSpec, u: float, v: float) -> float:
    """Integral of w over the interval [u, v] of the real line."""
    if v <= u:
        return 0.0
    if isinstance(w, GridWeight1D):
        total = 0.0
        for left, right, val in w.cells():
            lo, hi = max(left, u), min(right, v)
            if hi > lo:
                if val == INF:
                    return INF
                total += val * (hi - lo)
        return total
    if u >= 0:
        return radial_segment_integral(w, u, v)
    if v <= 0:
        return radial_segment_integral(w, -v, -u)
    return radial_segment_integral(w, 0.0, -u) + radial_segment_integral(w, 0.0, v)


def cap_fraction(r: float, d: float, R: float, n: int) -> float:
    """Fraction of the sphere |x| = r lying in the ball B(c, R) with |c| = d."""
    if r + d <= R:
        return 1.0
    if r <= d - R or r >= d + R or r == 0:
        return 0.0
    t = (r * r + d * d - R * R) / (2 * r * d)
    t = min(1.0, max(-1.0, t))
    half = 0.5 * special.betainc((n - 1) / 2, 0.5, 1 - t * t)
    return half if t >= 0 else 1 - half


def ball_integral(w: WeightSpec, B: Ball) -> float:
    """Integral of w over B."""
    n = B.n
    _require_grid_dim(w, n)
    if w.is_zero:
        return 0.0
    if n == 1:
        c = B.center[0]
        return line_integral(w, c - B.radius, c + B.radius)
    assert isinstance(w, RadialForm)
    d, R = B.center_norm, B.radius
    area = unit_sphere_area(n)
    if d == 0:
        return area * radial_segment_integral(w, 0.0, R, extra_power=n - 1)
    inner = max(0.0, R - d)
    total = area * radial_segment_integral(w, 0.0, inner, extra_power=n - 1) if inner > 0 else 0.0
    if math.isinf(total):
        return INF
    lo, hi = abs(d - R), d + R
    if lo == 0 and w.exponent + n - 1 <= -1:
        return INF
    g = lambda r: float(w.radial(r)) * r ** (n - 1) * cap_fraction(r, d, R, n)
    total += area * _quad(g, lo, hi)
    return total


# -- sups ------------------------------------------------------------------------

def _radial_sup(w: RadialForm, r0: float, r1: float) -> float:
    if w.is_zero:
        return 0.0
    if r0 == 0 and w.exponent < 0:
        return INF
    if r1 == INF and (w.rate > 0 or (w.rate == 0 and w.tail_bound()[1] > 0)):
        return INF
    ends = [r0, r1] if r1 < INF else [r0]
    vals = [float(w.radial(r)) for r in ends]
    if r1 == INF:
        vals.append(float(w.radial(1e150)) if w.rate == 0 else 0.0)
    if len(w.log_derivative_signs()) <= 1:
        return max(vals)
    hi = r1 if r1 < INF else max(10 * r0, 1e6)
    grid = np.geomspace(max(r0, 1e-300), hi, 400) if r0 > 0 else np.concatenate(([0.0], np.geomspace(hi * 1e-12, hi, 400)))
    gv = w.radial(grid)
    k = int(np.argmax(gv))
    best = float(gv[k])
    lo_b, hi_b = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    if hi_b > lo_b:
        res = optimize.minimize_scalar(lambda r: -float(w.radial(r)), bounds=(lo_b, hi_b),
                                       method="bounded", options={"xatol": 1e-14 * hi_b})
        best = max(best, -float(res.fun))
    return max(best, *vals)


def ball_sup(w: WeightSpec, B: Ball) -> float:
    """Essential sup of w on B (+inf allowed)."""
    _require_grid_dim(w, B.n)
    if isinstance(w, GridWeight1D):
        c = B.center[0]
        lo, hi = c - B.radius, c + B.radius
        vals = [val for left, right, val in w.cells() if min(right, hi) > max(left, lo)]
        return max(vals)
    r0, r1 = B.radial_range()
    return _radial_sup(w, r0, r1)


def ball_inf(w: WeightSpec, B: Ball) -> float:
    s = ball_sup(w.power(-1.0), B)
    return 0.0 if s == INF else (INF if s == 0 else 1.0 / s)


def ball_power_average(w: WeightSpec, B: Ball, s: float) -> float:
    """(|B|^-1 int_B w^s)^(1/s); s = +inf gives the sup, s = -inf the inf."""
    if s == 0:
        raise ValueError("power average needs s != 0")
    if s == INF:
        return ball_sup(w, B)
    if s == -INF:
        return ball_inf(w, B)
    if w.is_zero:
        return 0.0 if s > 0 else INF
    ws = w.power(s)
    integral = ball_integral(ws, B)
    avg = integral / B.volume
    if avg == INF:
        return INF if s > 0 else 0.0
    if avg == 0:
        return 0.0 if s > 0 else INF
    return avg ** (1.0 / s)


def lebesgue_norm_on_ball(w: WeightSpec, B: Ball, s: float) -> float:
    """||w chi_B||_s."""
    if s == INF:
        return ball_sup(w, B)
    val = ball_integral(w.power(s), B)
    return val ** (1.0 / s) if val != INF else INF


# -- tail integrals and sups around a ball --------------------------------------

def _kernel_antiderivative(t: float, offset: float, k: float) -> float:
    """Antiderivative of (offset + t)^(-k) in t."""
    if k == 1:
        return math.log(offset + t)
    if t == INF:
        return 0.0 if k > 1 else INF
    return (offset + t) ** (1 - k) / (1 - k)


def _kernel_segment(t0: float, t1: float, offset: float, k: float) -> float:
    if t1 <= t0:
        return 0.0
    if t1 == INF and k <= 1:
        return INF
    if offset + t0 == 0 and k >= 1:
        return INF
    return _kernel_antiderivative(t1, offset, k) - _kernel_antiderivative(t0, offset, k)


def _grid_tail_integral(w: GridWeight1D, c: float, R: float, k: float, mode: str, side: float) -> float:
    offset = side if mode == "full" else 0.0
    t_min = 0.0 if mode == "full" else R
    total = 0.0
    for left, right, val in w.cells():
        if val == 0:
            continue
        pieces = []
        # right of the center: t = y - c
        lo, hi = max(left, c + t_min), right
        if hi > lo:
            pieces.append((lo - c, hi - c))
        # left of the center: t = c - y
        lo, hi = left, min(right, c - t_min)
        if hi > lo:
            pieces.append((c - hi, c - lo))
        for t0, t1 in pieces:
            seg = _kernel_segment(t0, t1, offset, k)
            if seg == INF or val == INF:
                return INF
            total += val * seg
    return total


def _segment_1d(w: RadialForm, y0: float, y1: float, kernel) -> float:
    """Integral of phi(|y|) kernel(y) over [y0, y1] not straddling 0."""
    if y1 <= y0:
        return 0.0
    a = w.exponent
    if y0 == 0 and a != 0:
        return _quad(lambda y: float(w.smooth_part(abs(y))) * kernel(y), 0.0, y1, weight="alg", wvar=(a, 0.0))
    if y1 == 0 and a != 0:
        return _quad(lambda y: float(w.smooth_part(abs(y))) * kernel(y), y0, 0.0, weight="alg", wvar=(0.0, a))
    return _quad(lambda y: float(w.radial(abs(y))) * kernel(y), y0, y1)


def _annulus_1d(w: RadialForm, c: float, t0: float, t1: float, kernel_t) -> float:
    total = 0.0
    for y0, y1 in ((c + t0, c + t1), (c - t1, c - t0)):
        kern = lambda y: kernel_t(abs(y - c))
        if y0 < 0 < y1:
            total += _segment_1d(w, y0, 0.0, kern) + _segment_1d(w, 0.0, y1, kern)
        else:
            total += _segment_1d(w, y0, y1, kern)
    return total


def _sphere_mean_factor(w: RadialForm, d: float, t: float, n: int) -> float:
    """Integral over the unit sphere of phi(|c + t omega|), |c| = d, n >= 2."""
    if d == 0:
        return unit_sphere_area(n) * float(w.radial(t))
    lower = unit_sphere_area(n - 1)

    def g(theta):
        r = math.sqrt(max(d * d + t * t + 2 * d * t * math.cos(theta), 0.0))
        return float(w.radial(r)) * math.sin(theta) ** (n - 2)

    return lower * _quad(g, 0.0, math.pi)


def _annulus_nd(w: RadialForm, d: float, t0: float, t1: float, kernel_t, n: int) -> float:
    pts = [t0, t1]
    if t0 < d < t1:
        pts = [t0, d, t1]
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        total += _quad(lambda t: kernel_t(t) * t ** (n - 1) * _sphere_mean_factor(w, d, t, n), a, b)
    return total


def tail_integral(w: WeightSpec, B: Ball, k: float, mode: str = "full") -> float:
    """Kernel-weighted integral of w around B.

    mode "full":    int_{R^n} w(y) (|B|^{1/n} + |x_B - y|)^{-k} dy
    mode "outside": int_{R^n \\ B} w(y) |x_B - y|^{-k} dy

    Computed over dyadic annuli B(x_B, 2^{j+1} R) \\ B(x_B, 2^j R) until the
    analytic power-law bound on the remaining tail falls below 1e-8 of the sum.
    """
    if mode not in ("full", "outside"):
        raise ValueError(f"unknown tail mode {mode!r}")
    n = B.n
    _require_grid_dim(w, n)
    if w.is_zero:
        return 0.0
    R, side = B.radius, B.side
    if isinstance(w, GridWeight1D):
        return _grid_tail_integral(w, B.center[0], R, k, mode, side)
    assert isinstance(w, RadialForm)
    d = B.center_norm
    origin_in_region = mode == "full" or d >= R
    if origin_in_region and w.exponent <= -n:
        return INF
    c_tail, b, r0 = w.tail_bound(n)
    if b == INF or k - b - n <= 0:
        return INF
    if mode == "full":
        kernel_t = lambda t: (side + t) ** (-k)
        bounds = [(0.0, R)]
    else:
        kernel_t = lambda t: t ** (-k)
        bounds = []
    if n == 1:
        c = B.center[0]
        piece = lambda t0, t1: _annulus_1d(w, c, t0, t1, kernel_t)
    else:
        piece = lambda t0, t1: _annulus_nd(w, d, t0, t1, kernel_t, n)
    total = sum(piece(t0, t1) for t0, t1 in bounds)
    j = 0
    mult_b = 1.5 ** b if b >= 0 else 2.0 ** (-b)
    area = unit_sphere_area(n)
    while True:
        t0, t1 = (2.0 ** j) * R, (2.0 ** (j + 1)) * R
        total += piece(t0, t1)
        j += 1
        T = t1
        if T >= 2 * max(d, r0):
            bound = area * c_tail * mult_b * T ** (b - k + n) / (k - b - n)
            if bound <= TAIL_FRACTION * total:
                return total
        if j > MAX_ANNULI:
            return total


def _line_sup(phi, s_lo: float, s_hi: float, samples: int = 256) -> float:
    """Numerical sup of a continuous positive function on a finite segment."""
    if s_hi <= s_lo:
        return float(phi(s_lo))
    grid = np.linspace(s_lo, s_hi, samples)
    vals = np.array([phi(s) for s in grid])
    k = int(np.nanargmax(vals))
    best = float(vals[k])
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, samples - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(lambda s: -phi(s), bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-13 * max(abs(hi), abs(lo), 1e-300)})
        best = max(best, -float(res.fun))
    return best


def tail_sup(w: WeightSpec, B: Ball, k: float, mode: str = "full") -> float:
    """Sup of w(y) times (|B|^{1/n} + |x_B - y|)^{-k} on R^n ("full"),
    or of w(y) |x_B - y|^{-k} on R^n \\ B ("outside").

    For radial w the sup is attained on the line through 0 and x_B, which
    reduces the search to one variable.
    """
    if mode not in ("full", "outside"):
        raise ValueError(f"unknown tail mode {mode!r}")
    n = B.n
    _require_grid_dim(w, n)
    if w.is_zero:
        return 0.0
    R, side = B.radius, B.side
    offset = side if mode == "full" else 0.0
    t_min = 0.0 if mode == "full" else R
    kern = lambda t: (offset + t) ** (-k)
    if isinstance(w, GridWeight1D):
        c = B.center[0]
        best = 0.0
        for left, right, val in w.cells():
            if val == 0:
                continue
            dist = INF
            if right > c + t_min:
                dist = min(dist, max(left - c, t_min))
            if left < c - t_min:
                dist = min(dist, max(c - right, t_min))
            if dist == INF:
                continue
            if val == INF:
                return INF
            best = max(best, val * kern(dist))
        return best
    assert isinstance(w, RadialForm)
    d = B.center_norm
    if (mode == "full" or d >= R) and w.exponent < 0:
        return INF
    c_tail, b, r0 = w.tail_bound(n)
    if b == INF or b - k > 0:
        return INF
    phi = lambda s: float(w.radial(abs(s))) * kern(abs(s - d))
    # segments in the line coordinate s, y = s * (x_B / |x_B|)
    marks = sorted({0.0, d, d - t_min, d + t_min})
    if mode == "outside":
        regions = [(-INF, d - R), (d + R, INF)]
    else:
        regions = [(-INF, INF)]
    best = 0.0
    for lo, hi in regions:
        cuts = [lo] + [s for s in marks if lo < s < hi] + [hi]
        for a, b_ in zip(cuts[:-1], cuts[1:]):
            if a == -INF:
                span = max(1.0, abs(b_), 10 * (d + R + r0))
                best = max(best, _line_sup(phi, b_ - span, b_), _far_sup(phi, b_ - span, -1))
            elif b_ == INF:
                span = max(1.0, abs(a), 10 * (d + R + r0))
                best = max(best, _line_sup(phi, a, a + span), _far_sup(phi, a + span, +1))
            else:
                best = max(best, _line_sup(phi, a, b_))
    return best


def _far_sup(phi, start: float, direction: int) -> float:
    """Sup of phi on a half line beyond ``start`` via a geometric sweep."""
    base = max(abs(start), 1.0)
    pts = start + direction * base * (np.geomspace(1e-6, 1e12, 400))
    vals = [phi(s) for s in pts]
    return float(np.nanmax(vals))


def tail_norm(w_inv: WeightSpec, B: Ball, kappa: float, p_conj: float, mode: str) -> float:
    """(int v^{-p'} K^{kappa p'})^{1/p'}, or the sup form when p' = inf.

    ``w_inv`` is v^{-1}.
    """
    if p_conj == INF:
        return tail_sup(w_inv, B, kappa, mode)
    val = tail_integral(w_inv.power(p_conj), B, kappa * p_conj, mode)
    return val ** (1.0 / p_conj) if val != INF else INF
