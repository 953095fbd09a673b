"""End-to-end numerical experiments built on the operator and weight modules.

Each experiment returns an ExperimentReport holding its parameters, the
per-ball profile, summary statistics and a PASS/FAIL/DEGENERATE status with
the thresholds that produced it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import Ball, BallFamily, centered_family, log_radii, unit_ball_volume
from .operators import (KernelSpec, SymbolSpec, TestFunction, bump_function, eval_I_alpha,
                        eval_product_commutator, eval_sum_commutator, linear_symbol, power_symbol,
                        sinusoid_symbol, standard_kernel)
from .params import (ExponentVector, ParameterPoint, admissible_theorem, classify_region,
                     holder_conjugate, natural_delta, tau)
from .quadrature import QuadratureConfig, interval_rule
from .weights.classes import (a_p_quantity, a_pq_quantity, apq_to_ap_transform,
                              empirical_class_sup, fit_loglog_slope, hm_full_quantity, hm_local_quantity,
                              rh_quantity)
from .weights.forms import INF, Constant, Power, RadialForm, WeightSpec, WeightVector, product
from .weights.stats import ball_integral, ball_sup

PASS, FAIL, DEGENERATE = "PASS", "FAIL", "DEGENERATE"
SLOPE_TOL = 0.05
SPREAD_TOL = 10.0
BOUNDED_GROWTH = 2.0  # sup growth factor per decade for the construction sweeps
EQUIVALENCE_GROWTH = 10 ** 0.05  # power-law slope 0.05 per decade


@dataclass
class ExperimentReport:
    experiment: str
    params: dict
    profile: list = field(default_factory=list)  # list of dict rows
    summary: dict = field(default_factory=dict)
    status: str = PASS
    thresholds: dict = field(default_factory=dict)
    seed: int | None = None
    runtime: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_json(self) -> dict:
        return {"experiment": self.experiment, "status": self.status, "params": self.params,
                "summary": self.summary, "thresholds": self.thresholds, "seed": self.seed,
                "runtime": self.runtime, "notes": list(self.notes), "profile": self.profile}

    def text(self) -> str:
        lines = [f"{self.experiment}: {self.status}"]
        for k, v in self.summary.items():
            lines.append(f"  {k}: {v}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def flatness(radii, values, slope_tol: float = SLOPE_TOL, spread_tol: float = SPREAD_TOL) -> dict:
    """The trend-flatness surrogate for a bounded constant."""
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(values)):
        return {"slope": math.nan, "spread": INF, "flat": False}
    positive = values[values > 0]
    if len(positive) == 0:
        return {"slope": 0.0, "spread": 1.0, "flat": True}
    spread = float(positive.max() / positive.min()) if len(positive) == len(values) else INF
    slope = fit_loglog_slope(radii, values)
    flat = bool(abs(slope) <= slope_tol and spread < spread_tol)
    return {"slope": slope, "spread": spread, "flat": flat}


# -- weighted norms and commutator outputs ---------------------------------------

# power weights may be singular at 0: grade deep enough that the leftover cell is below 1e-12
NORM_CONFIG = QuadratureConfig(base_cells=8, depth=0, kink_depth=30, order=12)


def _eval_weight(w: WeightSpec, y: np.ndarray) -> np.ndarray:
    return np.asarray(w.evaluate(y), dtype=float)


def weighted_norm(f: TestFunction, v: WeightSpec, p: float, cfg: QuadratureConfig | None = None) -> float:
    """||f v||_{L^p} over the support of f (n = 1); p = inf takes a grid sup."""
    if f.n != 1:
        raise NotImplementedError("weighted norms are implemented for n = 1 only")
    cfg = cfg or NORM_CONFIG
    lo, hi = f.box[0]
    kinks = sorted(k for k in {0.0, *f.kinks[0]} if lo < k < hi)
    nodes, weights = interval_rule(lo, hi, kinks, cfg)
    if p == INF:
        grid = np.unique(np.concatenate([nodes, np.linspace(lo, hi, 4097)]))
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.abs(f.at(grid) * _eval_weight(v, grid))
        return float(np.nanmax(vals))
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.abs(f.at(nodes) * _eval_weight(v, nodes)) ** p
    return float(np.dot(weights, vals)) ** (1.0 / p)


def _commutator(variant: str):
    if variant == "sum":
        return eval_sum_commutator
    if variant == "product":
        return eval_product_commutator
    raise ValueError(f"unknown commutator variant {variant!r}")


def _ball_nodes(B: Ball, kinks: Sequence[float], cfg: QuadratureConfig):
    c, R = B.center[0], B.radius
    inside = sorted({float(k) for k in kinks if c - R < k < c + R})
    return interval_rule(c - R, c + R, inside, cfg)


OUTPUT_CONFIG = QuadratureConfig(base_cells=2, depth=0, kink_depth=8, order=10)


def _output_oscillation(values: np.ndarray, weights: np.ndarray) -> tuple:
    total = float(np.sum(weights))
    mean = float(np.dot(weights, values)) / total
    return mean, float(np.dot(weights, np.abs(values - mean)))


BOUNDEDNESS_INPUTS = ("fixed", "dilated")


def run_boundedness_experiment(variant: str, K: KernelSpec, bs: Sequence[SymbolSpec],
                               fs: Sequence[TestFunction], pair: WeightVector, p: ExponentVector,
                               point: ParameterPoint, family: BallFamily,
                               cfg: QuadratureConfig | None = None,
                               ball_cfg: QuadratureConfig | None = None,
                               mode: str = "direct", evidence: bool = True,
                               inputs: str = "fixed") -> ExperimentReport:
    """Per-ball ratio of the weighted oscillation of the commutator output to prod ||f_i v_i||_{p_i}.

    ``point`` carries (n, m, delta, delta~, gamma); its beta must equal
    alpha~ of the chosen variant. With ``inputs="dilated"`` the ball B(c, R)
    is tested against f_i(. / R), so every ball sees its own input scale;
    otherwise the same f_i serve all balls.
    """
    start = time.perf_counter()
    if inputs not in BOUNDEDNESS_INPUTS:
        raise ValueError(f"inputs must be one of {BOUNDEDNESS_INPUTS}")
    adm = admissible_theorem(point, p, K.alpha, variant)
    if not adm.ok:
        raise ValueError("inadmissible parameters: " + "; ".join(adm.violations))
    if abs(point.beta - adm.alpha_tilde) > 1e-12:
        raise ValueError(f"point.beta = {point.beta} must equal alpha~ = {adm.alpha_tilde}")
    if family.n != 1:
        raise NotImplementedError("boundedness experiments run in n = 1")
    ball_cfg = ball_cfg or OUTPUT_CONFIG
    comm = _commutator(variant)
    params = {"variant": variant, "alpha": K.alpha, "alpha_tilde": adm.alpha_tilde,
              "kernel": K.as_json(), "symbols": [b.as_json() for b in bs],
              "functions": [f.as_json() for f in fs], "weights": pair.as_json(), "p": p.as_json(),
              "point": point.as_json(), "mode": mode, "inputs": inputs}
    report = ExperimentReport(f"boundedness_{variant}", params,
                              thresholds={"slope": SLOPE_TOL, "spread": SPREAD_TOL})
    norms = [weighted_norm(f, v, pi) for f, v, pi in zip(fs, pair.v, p)]
    report.summary["input_norms"] = norms
    if math.prod(norms) == 0:
        report.status = DEGENERATE
        report.notes.append("some f_i v_i vanishes: the ratio is 0/0")
        report.runtime = time.perf_counter() - start
        return report
    symbol_kinks = {0.0}
    for b in bs:
        symbol_kinks |= set(b.kinks[0]) if b.kinks else set()
    radii, ratios = [], []
    for i, B in enumerate(family):
        ball_fs = [f.dilated(B.radius) for f in fs] if inputs == "dilated" else list(fs)
        denom = math.prod(norms) if inputs == "fixed" else \
            math.prod(weighted_norm(f, v, pi) for f, v, pi in zip(ball_fs, pair.v, p))
        kinks = symbol_kinks | {e for f in ball_fs for e in f.box[0]}
        nodes, weights = _ball_nodes(B, kinks, ball_cfg)
        vals = np.array([comm(bs, K, ball_fs, float(x), cfg, mode) for x in nodes])
        mean, osc = _output_oscillation(vals, weights)
        sup_w = ball_sup(pair.w, B)
        if osc == 0.0:
            num = 0.0
        elif sup_w == INF:
            num = INF
        else:
            num = sup_w * B.volume ** (-(1 + point.delta_tilde / B.n)) * osc
        ratio = num / denom
        radii.append(B.radius)
        ratios.append(ratio)
        report.profile.append({"ball": i, "radius": B.radius, "center": B.center[0],
                               "oscillation": osc, "sup_w": sup_w, "input_norm": denom, "ratio": ratio})
    report.summary["sup_ratio"] = max(ratios)
    if all(r == 0 for r in ratios):
        report.summary.update({"slope": 0.0, "spread": 1.0, "zero_profile": True})
        report.notes.append("commutator output is constant on every ball: all ratios vanish")
    else:
        by_r = _max_by_radius(radii, ratios)
        flat = flatness(*by_r)
        report.summary.update({"slope": flat["slope"], "spread": flat["spread"]})
        report.status = PASS if flat["flat"] else FAIL
    if evidence:
        report.summary["rh_evidence"] = _rh_evidence(pair, p, family)
        report.notes.append("RH_m sups are empirical evidence over the family, not membership proofs")
    report.runtime = time.perf_counter() - start
    return report


def _max_by_radius(radii, values):
    table = {}
    for r, v in zip(radii, values):
        table[r] = max(table.get(r, -INF), v)
    rs = sorted(table)
    return np.array(rs), np.array([table[r] for r in rs])


def _rh_evidence(pair: WeightVector, p: ExponentVector, family: BallFamily) -> list:
    """Empirical RH_m sups of v_i^{-p_i'} (evidence only, never a proof of membership)."""
    out = []
    for v, pi in zip(pair.v, p):
        if pi == 1:
            out.append(None)
            continue
        pc = holder_conjugate(pi)
        weight = v.power(-pc) if pc != INF else v.power(-1.0)
        sweep = rh_quantity(weight, float(pair.m), family)
        out.append(sweep.sup)
    return out


# -- local lemma -----------------------------------------------------------------

def restrict(f: TestFunction, lo: float, hi: float) -> TestFunction | None:
    """f times the indicator of [lo, hi] (n = 1); None when the supports miss."""
    a, b = max(f.box[0][0], lo), min(f.box[0][1], hi)
    if not b > a:
        return None
    kinks = tuple(k for k in f.kinks[0] if a < k < b)
    return TestFunction(f.evaluator, ((a, b),), (kinks,), f"{f.name}|[{a:g},{b:g}]")


def run_local_lemma_experiment(fs: Sequence[TestFunction], alpha_tilde: float, pair: WeightVector,
                               p: ExponentVector, point: ParameterPoint, family: BallFamily,
                               cfg: QuadratureConfig | None = None,
                               ball_cfg: QuadratureConfig | None = None) -> ExperimentReport:
    """Per ball: int_B I_{alpha~}(f chi_2B) / (|B|^{1 + delta~/n} ||w chi_B||_inf^{-1} prod ||f_i v_i||)."""
    start = time.perf_counter()
    n = point.n
    if not p.inv_p < alpha_tilde / n:
        raise ValueError(f"p > n/alpha~ fails (1/p = {p.inv_p}, alpha~/n = {alpha_tilde / n})")
    ball_cfg = ball_cfg or OUTPUT_CONFIG
    norms = [weighted_norm(f, v, pi) for f, v, pi in zip(fs, pair.v, p)]
    denom = math.prod(norms)
    params = {"alpha_tilde": alpha_tilde, "functions": [f.as_json() for f in fs],
              "weights": pair.as_json(), "p": p.as_json(), "point": point.as_json()}
    report = ExperimentReport("local_lemma", params,
                              thresholds={"slope": SLOPE_TOL, "spread": SPREAD_TOL})
    report.summary["input_norms"] = norms
    if denom == 0:
        report.status = DEGENERATE
        report.notes.append("some f_i v_i vanishes: the ratio is 0/0")
        report.runtime = time.perf_counter() - start
        return report
    radii, ratios = [], []
    for i, B in enumerate(family):
        c, R = B.center[0], B.radius
        gs = [restrict(f, c - 2 * R, c + 2 * R) for f in fs]
        if any(g is None for g in gs):
            integral = 0.0
        else:
            kinks = {k for g in gs for k in g.box[0]}
            nodes, weights = _ball_nodes(B, kinks, ball_cfg)
            vals = np.array([eval_I_alpha(gs, alpha_tilde, float(x), cfg) for x in nodes])
            integral = float(np.dot(weights, vals))
        sup_w = ball_sup(pair.w, B)
        if integral == 0.0:
            ratio = 0.0
        elif sup_w == INF:
            ratio = INF
        else:
            ratio = integral * sup_w / (B.volume ** (1 + point.delta_tilde / n) * denom)
        radii.append(R)
        ratios.append(ratio)
        report.profile.append({"ball": i, "radius": R, "center": c, "integral": integral,
                               "sup_w": sup_w, "ratio": ratio})
    report.summary["sup_ratio"] = max(ratios)
    report.status = PASS if report.summary["sup_ratio"] < INF else FAIL
    report.summary["rh_evidence"] = _rh_evidence(pair, p, family)
    report.notes.append("RH_m sups are empirical evidence over the family, not membership proofs")
    report.runtime = time.perf_counter() - start
    return report


# -- triviality probes -----------------------------------------------------------

PROBE_DIRECTIONS = ("R_to_zero", "R_to_infinity")


def forced_local_exponent(pair: WeightVector, p: ExponentVector, point: ParameterPoint) -> float:
    """R-exponent of the local quantity on B(0, R) for pure power weights."""
    for wt in (pair.w, *pair.v):
        if not (isinstance(wt, RadialForm) and wt.is_pure_power):
            raise ValueError("forced exponents are available for pure power weights only")
    n = point.n
    return (pair.w.exponent - point.delta_tilde - n * p.inv_p + point.beta
            - math.fsum(v.exponent for v in pair.v))


def run_triviality_probe(pair: WeightVector, p: ExponentVector, point: ParameterPoint,
                         direction: str = "R_to_zero", decades: int = 3, per_decade: int = 4,
                         rel_tol: float = 0.05) -> ExperimentReport:
    """Sweep the local H_m quantity along B(0, R) and compare the fitted slope with the forced one."""
    start = time.perf_counter()
    if direction not in PROBE_DIRECTIONS:
        raise ValueError(f"direction must be one of {PROBE_DIRECTIONS}")
    region = classify_region(point, p)
    if not region.is_trivial:
        raise ValueError(f"the probe needs a trivial region; got {region.label}")
    if direction == "R_to_zero":
        radii = log_radii(10.0 ** -decades, 1.0, per_decade)
    else:
        radii = log_radii(1.0, 10.0 ** decades, per_decade)
    family = centered_family(radii, point.n)
    sweep = empirical_class_sup(hm_local_quantity, (pair, p, point), family)
    values = np.array([v for _, v in sweep.profile])
    params = {"weights": pair.as_json(), "p": p.as_json(), "point": point.as_json(),
              "direction": direction, "region": region.label, "explanation": region.explain()}
    report = ExperimentReport("triviality_probe", params, thresholds={"slope_rel": rel_tol})
    report.profile = [{"ball": i, "radius": B.radius, "value": v} for i, (B, v) in enumerate(sweep.profile)]
    if pair.w.is_zero or np.all(values == 0):
        report.status = DEGENERATE
        report.notes.append("w = 0: the pair satisfies the condition trivially")
        report.runtime = time.perf_counter() - start
        return report
    slope = fit_loglog_slope(radii, values)
    report.summary["slope"] = slope
    try:
        expected = forced_local_exponent(pair, p, point)
    except ValueError as exc:
        expected = None
        report.notes.append(str(exc))
    report.summary["expected_slope"] = expected
    if expected is None or not np.all(np.isfinite(values)):
        report.status = FAIL if expected is not None else DEGENERATE
    else:
        blows = expected < 0 if direction == "R_to_zero" else expected > 0
        report.summary["blows_up"] = blows
        if not blows:
            report.notes.append(f"no blow-up along {direction}: forced exponent {expected:.6g}")
        matched = abs(slope - expected) <= rel_tol * abs(expected) if expected != 0 else abs(slope) < 1e-9
        report.status = PASS if (matched and blows) else FAIL
    report.runtime = time.perf_counter() - start
    return report


# -- power integral asymptotics --------------------------------------------------

ASYMPTOTIC_OFFSETS = (0.0, 0.5, 2.0, 10.0)


def run_power_asymptotic(alpha: float, n: int = 1, radii=None,
                         offsets: Sequence[float] = ASYMPTOTIC_OFFSETS) -> ExperimentReport:
    """int_B |x|^alpha against R^n max(R, |x_B|)^alpha over radii and |x_B|/R values.

    ``ratio`` uses R^n; ``normalized`` divides by |B| = c_n R^n instead.
    """
    start = time.perf_counter()
    if not alpha > -n:
        raise ValueError(f"alpha = {alpha} must exceed -n = {-n}")
    radii = log_radii(1e-3, 1e3, 1) if radii is None else np.asarray(radii, dtype=float)
    w = Power(alpha)
    cn = unit_ball_volume(n)
    report = ExperimentReport("power_asymptotic", {"alpha": alpha, "n": n, "offsets": list(offsets)},
                              thresholds={"scale_rel": 1e-9})
    per_offset = {}
    for off in offsets:
        for R in radii:
            c = np.zeros(n)
            c[0] = off * R
            B = Ball(c, R)
            integral = ball_integral(w, B)
            ratio = integral / (R ** n * max(R, off * R) ** alpha)
            report.profile.append({"radius": float(R), "offset": off, "integral": integral,
                                   "ratio": ratio, "normalized": ratio / cn})
            per_offset.setdefault(off, []).append(ratio)
    ratios = [row["ratio"] for row in report.profile]
    drift = max(max(v) / min(v) - 1 for v in per_offset.values())
    report.summary = {"c1": min(ratios), "c2": max(ratios), "scale_drift": drift,
                      "normalized_c1": min(ratios) / cn, "normalized_c2": max(ratios) / cn}
    report.status = PASS if (drift < 1e-9 and min(ratios) > 0 and max(ratios) < INF) else FAIL
    report.runtime = time.perf_counter() - start
    return report


def verify_power_integral_asymptotic(alphas: Sequence[float] = (-0.5, 0.0, 1.0), n: int = 1) -> list:
    return [run_power_asymptotic(a, n) for a in alphas]


# -- identity suites -------------------------------------------------------------

def difference_of_products(a, b, c) -> tuple:
    """(prod(a - b) - prod(c - b), sum_j (a_j - c_j) prod_{i<j}(a_i - b_i) prod_{i>j}(c_i - b_i), scale)."""
    a, b, c = (np.asarray(t, dtype=float) for t in (a, b, c))
    lhs = math.prod(a - b) - math.prod(c - b)
    terms = [(a[j] - c[j]) * math.prod(a[:j] - b[:j]) * math.prod(c[j + 1:] - b[j + 1:])
             for j in range(len(a))]
    scale = abs(math.prod(a - b)) + abs(math.prod(c - b)) + math.fsum(abs(t) for t in terms)
    return lhs, math.fsum(terms), scale


def identity_difference_of_products(rng: np.random.Generator, trials: int, m_max: int = 5) -> dict:
    worst = 0.0
    for _ in range(trials):
        m = int(rng.integers(1, m_max + 1))
        a, b, c = rng.uniform(-2, 2, (3, m))
        lhs, rhs, scale = difference_of_products(a, b, c)
        if scale > 0:
            worst = max(worst, abs(lhs - rhs) / scale)
    return {"trials": trials, "max_rel": worst}


def random_commutator_instance(rng: np.random.Generator) -> dict:
    """A smooth seeded instance in n = 1, m = 2."""
    fs = [bump_function(float(rng.uniform(-0.5, 0.5)), float(rng.uniform(0.6, 1.4)), 4,
                        float(rng.uniform(0.5, 2.0))) for _ in range(2)]
    bs = []
    for _ in range(2):
        kind = int(rng.integers(0, 3))
        if kind == 0:
            bs.append(power_symbol(float(rng.uniform(0.2, 0.8)), float(rng.uniform(-1, 1))))
        elif kind == 1:
            bs.append(sinusoid_symbol(float(rng.uniform(0.5, 2)), float(rng.uniform(0.5, 3)),
                                      float(rng.uniform(0, 3))))
        else:
            bs.append(linear_symbol(float(rng.uniform(-2, 2))))
    K = standard_kernel(float(rng.uniform(0.3, 1.7)), 1, 2)
    x = float(rng.uniform(-1.5, 1.5))
    return {"bs": bs, "K": K, "fs": fs, "x": x}


def _rel(u: float, v: float) -> float:
    scale = max(abs(u), abs(v))
    return 0.0 if scale == 0 else abs(u - v) / scale


def identity_commutator_modes(rng: np.random.Generator, instances: int,
                              cfg: QuadratureConfig | None = None) -> dict:
    worst_prod = worst_sum = 0.0
    rows = []
    for k in range(instances):
        inst = random_commutator_instance(rng)
        args = (inst["bs"], inst["K"], inst["fs"], inst["x"], cfg)
        pd = eval_product_commutator(*args, mode="direct")
        pe = eval_product_commutator(*args, mode="expansion")
        pi = eval_product_commutator(*args, mode="iterative")
        sd = eval_sum_commutator(*args, mode="direct")
        si = eval_sum_commutator(*args, mode="iterative")
        dp = max(_rel(pd, pe), _rel(pd, pi), _rel(pe, pi))
        ds = _rel(sd, si)
        worst_prod, worst_sum = max(worst_prod, dp), max(worst_sum, ds)
        rows.append({"instance": k, "x": inst["x"], "alpha": inst["K"].alpha, "product_direct": pd,
                     "product_expansion": pe, "product_iterative": pi, "sum_direct": sd,
                     "sum_iterative": si, "product_rel": dp, "sum_rel": ds})
    return {"instances": instances, "max_rel_product": worst_prod, "max_rel_sum": worst_sum, "rows": rows}


def random_transform_instance(rng: np.random.Generator) -> dict:
    """Power weights and exponents for which both A-brackets are finite on every ball."""
    choices = (1.5, 2.0, 3.0, 4.0)
    while True:
        p = ExponentVector([float(rng.choice(choices)) for _ in range(2)])
        q = float(rng.choice((1.0, 2.0, 4.0)))
        try:
            tr = apq_to_ap_transform([Constant(1.0)] * 2, p, q)
        except ValueError:
            continue
        # small exponents keep every average finite
        a = [float(rng.uniform(-0.1, 0.1)) for _ in range(2)]
        w = [Power(ai) for ai in a]
        return {"w": w, "p": p, "q": q, "ell": tr.ell, "exponents": a}


def identity_transform(rng: np.random.Generator, instances: int = 10, balls: int = 50) -> dict:
    fam = [Ball((float(c),), float(r)) for c, r in
           zip(rng.uniform(-5, 5, balls), 10.0 ** rng.uniform(-2, 2, balls))]
    worst = 0.0
    for _ in range(instances):
        inst = random_transform_instance(rng)
        tr = apq_to_ap_transform(inst["w"], inst["p"], inst["q"])
        for B in fam:
            left = a_p_quantity(list(tr.z), tr.ell, B)
            right = a_pq_quantity(inst["w"], inst["p"], inst["q"], B) ** (inst["q"] / tr.ell_aggregate)
            worst = max(worst, _rel(left, right))
    return {"instances": instances, "balls": balls, "max_rel": worst}


def verify_identity_suites(seed: int = 0, trials: int = 10_000, commutator_instances: int = 100,
                           transform_instances: int = 10, transform_balls: int = 50,
                           cfg: QuadratureConfig | None = None) -> ExperimentReport:
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    dop = identity_difference_of_products(rng, trials)
    modes = identity_commutator_modes(rng, commutator_instances, cfg)
    trans = identity_transform(rng, transform_instances, transform_balls)
    thresholds = {"difference_of_products": 1e-12, "commutator_modes": 1e-6, "transform": 1e-10}
    report = ExperimentReport("identity_suites", {"trials": trials,
                                                  "commutator_instances": commutator_instances,
                                                  "transform_instances": transform_instances,
                                                  "transform_balls": transform_balls},
                              thresholds=thresholds, seed=seed)
    report.profile = modes.pop("rows")
    report.summary = {"difference_of_products_max_rel": dop["max_rel"],
                      "product_modes_max_rel": modes["max_rel_product"],
                      "sum_modes_max_rel": modes["max_rel_sum"],
                      "transform_max_rel": trans["max_rel"]}
    ok = (dop["max_rel"] < thresholds["difference_of_products"]
          and modes["max_rel_product"] < thresholds["commutator_modes"]
          and modes["max_rel_sum"] < thresholds["commutator_modes"]
          and trans["max_rel"] < thresholds["transform"])
    report.status = PASS if ok else FAIL
    report.runtime = time.perf_counter() - start
    return report


# -- corollary: H_m against A_{p, inf} ---------------------------------------------

def run_corollary_equivalence(v: Sequence[WeightSpec], p: ExponentVector, point: ParameterPoint,
                              family: BallFamily, growth_limit: float = EQUIVALENCE_GROWTH) -> ExperimentReport:
    """Compare the H_m sweep of (prod v_i, v) with the A_{p, inf} sweep of v."""
    start = time.perf_counter()
    t = tau(point)
    if not point.delta_tilde < t:
        raise ValueError(f"the equivalence needs delta~ < tau; got delta~ = {point.delta_tilde}, tau = {t}")
    pair = WeightVector(product(v), list(v))
    hm = empirical_class_sup(hm_full_quantity, (pair, p, point), family)
    ap = empirical_class_sup(a_pq_quantity, (list(v), p, INF), family)
    hm_bounded = hm.finite and hm.extension_growth() < growth_limit
    ap_bounded = ap.finite and ap.extension_growth() < growth_limit
    nat = natural_delta(point.beta, point.n, p)
    consistent = abs(point.delta_tilde - nat) <= 1e-12
    params = {"v": [x.as_json() for x in v], "p": p.as_json(), "point": point.as_json()}
    report = ExperimentReport("corollary_equivalence", params,
                              thresholds={"extension_growth": growth_limit})
    report.profile = [{"ball": i, "radius": B.radius, "center": B.center[0], "hm": h, "apq": a}
                      for i, ((B, h), (_, a)) in enumerate(zip(hm.profile, ap.profile))]
    report.summary = {"hm_sup": hm.sup, "apq_sup": ap.sup, "hm_growth": hm.extension_growth(),
                      "apq_growth": ap.extension_growth(), "hm_bounded": hm_bounded,
                      "apq_bounded": ap_bounded, "natural_delta": nat, "lemma_consistent": consistent}
    if not consistent:
        report.notes.append(f"equal weights force delta~ = beta - n/p = {nat}; got {point.delta_tilde}")
    agree = hm_bounded == ap_bounded
    explained = (not consistent) and (not hm_bounded)
    report.status = PASS if (agree or explained) else FAIL
    report.runtime = time.perf_counter() - start
    return report


# -- weight constructions --------------------------------------------------------

def run_construction_check(point: ParameterPoint, p: ExponentVector, family: BallFamily,
                           growth_limit: float = BOUNDED_GROWTH, jobs: int = 1) -> ExperimentReport:
    """Sweep the full H_m quantity of the constructed weights over the family."""
    from .weights.construct import construct_weights

    start = time.perf_counter()
    pair, recipe = construct_weights(point, p)
    sweep = empirical_class_sup(hm_full_quantity, (pair, p, point), family, jobs)
    radii, vals = sweep.by_radius()
    growth = sweep.extension_growth()
    params = {"point": point.as_json(), "p": p.as_json(), "recipe": recipe.as_json(),
              "weights": pair.as_json()}
    report = ExperimentReport(f"construction_{recipe.case}", params,
                              thresholds={"extension_growth": growth_limit})
    report.profile = [{"ball": i, "radius": B.radius, "center": B.center[0], "value": v}
                      for i, (B, v) in enumerate(sweep.profile)]
    report.summary = {"sup": sweep.sup, "extension_growth": growth,
                      "per_radius_decade_log10": sweep.max_decade_factor(),
                      "slope": sweep.slope(), "argmax_radius": sweep.argmax.radius}
    report.status = PASS if (sweep.finite and growth < growth_limit) else FAIL
    report.runtime = time.perf_counter() - start
    return report
