"""Explicit weight pairs for every nontrivial region of the (1/p, delta~) plane."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import special

from ..geometry import unit_sphere_area
from ..params import (BOUNDARY_TOL, ExponentVector, ParameterPoint, RegionClass, classify_region,
                      holder_conjugate, tau)
from .forms import INF, Constant, Exponential, Power, ShiftedPowerInverse, WeightVector


class ConstructionError(ValueError):
    """Raised when no construction applies; carries the region tag when known."""

    def __init__(self, message: str, region: RegionClass | None = None):
        super().__init__(message)
        self.region = region


@dataclass
class ConstructionRecipe:
    case: str
    rho: float
    xi: tuple = ()
    theta: tuple = ()
    epsilon: float | None = None
    g_exponents: tuple = ()
    notes: list = field(default_factory=list)

    def as_json(self) -> dict:
        return {"case": self.case, "rho": self.rho, "xi": list(self.xi), "theta": list(self.theta),
                "epsilon": self.epsilon, "g_exponents": list(self.g_exponents), "notes": list(self.notes)}


def theta_values(point: ParameterPoint, p: ExponentVector) -> tuple:
    """theta_i = n/p_i + (delta - beta)/m."""
    n, m = point.n, point.m
    return tuple(n * (0.0 if pi == INF else 1 / pi) + (point.delta - point.beta) / m for pi in p)


def _conj_bound(n: int, pi: float) -> float:
    """n/p_i', the local integrability threshold for v_i^{-p_i'} = |x|^{-xi p_i'}."""
    return n / holder_conjugate(pi)


def _power_case(point, p, case, rho, xi, theta=(), epsilon=None):
    pair = WeightVector(Power(rho), [Power(x) for x in xi])
    recipe = ConstructionRecipe(case, rho, tuple(xi), tuple(theta), epsilon)
    return pair, recipe


def _case_a(point, p):
    n, m = point.n, point.m
    m1 = len(p.I1)
    eps = 0.5 * (m * n - point.beta + point.delta_tilde) / (m - m1)
    xi = [0.0 if pi == 1 else _conj_bound(n, pi) - eps for pi in p]
    rho = math.fsum(xi) + point.delta_tilde - point.beta + n * p.inv_p
    return _power_case(point, p, "a", rho, xi, epsilon=eps)


def _case_b(point, p):
    n, m = point.n, point.m
    xi = [(point.beta - point.delta_tilde) / m - n * (0.0 if pi == INF else 1 / pi) for pi in p]
    pair = WeightVector(Constant(1.0), [Power(x) for x in xi])
    return pair, ConstructionRecipe("b", 0.0, tuple(xi))


def _case_cd(point, p, case):
    n, m = point.n, point.m
    t = tau(point)
    xi = []
    for pi in p:
        if pi == 1:
            xi.append(0.0)
        else:
            lo = (point.beta - t) / m - n * (0.0 if pi == INF else 1 / pi)
            hi = _conj_bound(n, pi)
            xi.append(0.5 * (lo + hi))
    rho = math.fsum(xi) + t - point.beta + n * p.inv_p
    pair, recipe = _power_case(point, p, case, rho, xi, theta_values(point, p))
    if case == "d":
        recipe.notes.append("uses the interval-midpoint weights of case (c); the auxiliary "
                            "epsilon only enters the logarithmic estimate, not the weights")
    return pair, recipe


def _case_e(point, p, tol):
    m = point.m
    t = tau(point)
    theta = theta_values(point, p)
    nat = point.beta - point.n * p.inv_p
    dt = point.delta_tilde
    if abs(dt - point.delta) <= tol and point.delta < nat - tol:
        if not all(th < 0 for th in theta):
            raise ConstructionError(
                f"delta~ = delta < beta - n/p needs theta_i < 0 for every i; got theta = {theta}")
    elif abs(dt - nat) <= tol and nat < point.delta - tol:
        if not (all(th < 0 for th in theta) or all(th > 0 for th in theta)):
            raise ConstructionError(
                f"delta~ = beta - n/p < delta needs all theta_i of one strict sign; got theta = {theta}")
    rho = dt - t
    xi = [(point.delta - t) / m - th for th in theta]
    return _power_case(point, p, "e", rho, xi, theta)


def lebesgue_norm_shifted(n: int, s: float, q: float) -> float:
    """|| (1 + |x|)^{-s} ||_{L^q(R^n)} via the Beta integral."""
    k = s * q
    if k <= n:
        return INF
    radial = special.beta(n, k - n)  # int_0^inf r^{n-1} (1 + r)^{-k} dr
    return (unit_sphere_area(n) * radial) ** (1 / q)


def _case_f(point, p, rho=1.0, normalize=True):
    n = point.n
    m1 = len(p.I1)
    w = ShiftedPowerInverse(rho, m1)
    v = []
    g_exp = []
    notes = []
    for pi in p:
        if pi == 1:
            v.append(Exponential(1.0))
            g_exp.append(0.0)
            continue
        q = holder_conjugate(pi)
        s = float(n) if q > 1 else 2.0 * n  # (1+|x|)^{-n} is not integrable, so use -2n for p_i = inf
        norm = lebesgue_norm_shifted(n, s, q) if normalize else 1.0
        v.append(ShiftedPowerInverse(1.0, -s, scale=norm))
        g_exp.append(s)
    if any(pi == INF for pi in p):
        notes.append("g_i = (1+|x|)^{-2n} for p_i = inf so that g_i is integrable")
    recipe = ConstructionRecipe("f", rho, (), (), None, tuple(g_exp), notes)
    return WeightVector(w, v), recipe


def check_recipe(recipe: ConstructionRecipe, point: ParameterPoint, p: ExponentVector) -> list:
    """Case preconditions that the proof relies on; returns a list of violations."""
    bad = []
    n = point.n
    if recipe.case in ("a", "c", "d", "e", "f") and not recipe.rho > 0:
        bad.append(f"rho = {recipe.rho} is not positive")
    if recipe.case == "a" and recipe.epsilon is not None:
        cap = (point.m * n - point.beta + point.delta_tilde) / (point.m - len(p.I1))
        if not 0 < recipe.epsilon < cap:
            bad.append(f"epsilon = {recipe.epsilon} outside (0, {cap})")
    for i, (x, pi) in enumerate(zip(recipe.xi, p)):
        if pi > 1 and not x < _conj_bound(n, pi):
            bad.append(f"xi_{i + 1} = {x} is not below n/p_{i + 1}' = {_conj_bound(n, pi)}")
        if pi == 1 and recipe.case in ("b", "e") and not x < 0:
            bad.append(f"xi_{i + 1} = {x} must be negative for p_{i + 1} = 1")
    if recipe.case in ("c", "d"):
        t = tau(point)
        for i, (x, pi) in enumerate(zip(recipe.xi, p)):
            if pi > 1:
                lo = (point.beta - t) / point.m - n * (0.0 if pi == INF else 1 / pi)
                if not lo < x:
                    bad.append(f"xi_{i + 1} = {x} not above {(lo)}")
    return bad


def construct_weights(point: ParameterPoint, p: ExponentVector, tol: float = BOUNDARY_TOL):
    """Return (WeightVector, ConstructionRecipe) for a nontrivial point."""
    region = classify_region(point, p, tol)
    if not region.is_nontrivial:
        raise ConstructionError(f"no construction for {region.label}: {region.explain()}", region)
    case = region.case
    if case == "a":
        pair, recipe = _case_a(point, p)
    elif case == "b":
        pair, recipe = _case_b(point, p)
    elif case in ("c", "d"):
        pair, recipe = _case_cd(point, p, case)
    elif case == "e":
        pair, recipe = _case_e(point, p, tol)
    else:
        pair, recipe = _case_f(point, p)
    bad = check_recipe(recipe, point, p)
    if bad:
        raise ConstructionError(f"case ({case}) preconditions fail: " + "; ".join(bad), region)
    return pair, recipe
