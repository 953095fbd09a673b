"""Multilinear fractional integrals, kernel operators and their commutators.

Functions of one slot take a tuple of n coordinate arrays (broadcastable) and
return an array; kernels take the evaluation point x (shape (n,)) and a list
of m such tuples.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .quadrature import QuadratureConfig, QuadResult, default_config, integrate_singular

MAX_AXES = 4


# -- test functions --------------------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """A compactly supported input f_i: R^n -> R."""

    __test__ = False  # keep pytest from collecting this class

    evaluator: Callable
    box: tuple  # ((lo, hi), ...) per coordinate
    kinks: tuple = ()  # per coordinate tuple of kink points
    name: str = "custom"
    params: dict = field(default_factory=dict)
    integral: float | None = None

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        if any(not hi > lo for lo, hi in box):
            raise ValueError("support box must have positive extent")
        kinks = tuple(tuple(float(k) for k in ks) for ks in self.kinks) or tuple(() for _ in box)
        if len(kinks) != len(box):
            raise ValueError("need one kink list per coordinate")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "kinks", kinks)

    @property
    def n(self) -> int:
        return len(self.box)

    def __call__(self, coords) -> np.ndarray:
        coords = tuple(np.asarray(c, dtype=float) for c in coords)
        inside = np.ones(np.broadcast(*coords).shape, dtype=bool)
        for c, (lo, hi) in zip(coords, self.box):
            inside &= (c >= lo) & (c <= hi)
        with np.errstate(invalid="ignore", divide="ignore"):
            val = np.asarray(self.evaluator(coords), dtype=float)
        return np.where(inside, np.broadcast_to(val, inside.shape), 0.0)

    def at(self, y) -> np.ndarray:
        """Evaluate at points of the real line (n = 1)."""
        return self((np.asarray(y, dtype=float),))

    def times(self, other) -> "TestFunction":
        """Pointwise product with a symbol or another test function."""
        kinks = [set(a) | set(b) for a, b in zip(self.kinks, other.kinks)]
        f_eval = self.evaluator
        if isinstance(other, TestFunction):
            # the other factor's support cuts the product off
            g_eval = other
            for ks, (lo, hi) in zip(kinks, other.box):
                ks |= {lo, hi}
        else:
            g_eval = other.evaluator
        kinks = tuple(tuple(sorted(ks)) for ks in kinks)
        return TestFunction(lambda c: f_eval(c) * g_eval(c), self.box, kinks,
                            f"{self.name}*{getattr(other, 'name', 'g')}")

    def scaled(self, c: float) -> "TestFunction":
        f_eval = self.evaluator
        integral = None if self.integral is None else c * self.integral
        return TestFunction(lambda y: c * f_eval(y), self.box, self.kinks, f"{c}*{self.name}",
                            dict(self.params), integral)

    def dilated(self, lam: float) -> "TestFunction":
        """y -> f(y / lam), with support and kinks stretched by lam."""
        if not lam > 0:
            raise ValueError("dilation factor must be positive")
        f_eval = self.evaluator
        box = tuple((lam * lo, lam * hi) for lo, hi in self.box)
        kinks = tuple(tuple(lam * k for k in ks) for ks in self.kinks)
        integral = None if self.integral is None else lam ** self.n * self.integral
        return TestFunction(lambda y: f_eval(tuple(c / lam for c in y)), box, kinks, self.name,
                            {**self.params, "dilation": lam}, integral)

    def plus(self, other: "TestFunction") -> "TestFunction":
        box = tuple((min(a[0], b[0]), max(a[1], b[1])) for a, b in zip(self.box, other.box))
        kinks = tuple(tuple(sorted(set(ka) | set(kb) | {a[0], a[1], b[0], b[1]}))
                      for ka, kb, a, b in zip(self.kinks, other.kinks, self.box, other.box))
        return TestFunction(lambda y: self(y) + other(y), box, kinks, f"{self.name}+{other.name}")

    def absolute(self) -> "TestFunction":
        f_eval = self.evaluator
        return TestFunction(lambda y: np.abs(f_eval(y)), self.box, self.kinks, f"|{self.name}|")

    def as_json(self) -> dict:
        return {"name": self.name, **self.params}


def box_function(lo=0.0, hi=1.0, value: float = 1.0, n: int = 1) -> TestFunction:
    los = np.broadcast_to(np.asarray(lo, dtype=float), (n,))
    his = np.broadcast_to(np.asarray(hi, dtype=float), (n,))
    vol = float(np.prod(his - los))
    return TestFunction(lambda y: np.full(np.broadcast(*y).shape, float(value)),
                        tuple(zip(los, his)), (), "box",
                        {"lo": los.tolist() if n > 1 else float(los[0]),
                         "hi": his.tolist() if n > 1 else float(his[0]), "value": value},
                        value * vol)


def bump_function(center=0.0, radius: float = 1.0, power: int = 4, amplitude: float = 1.0,
                  n: int = 1) -> TestFunction:
    """amplitude * prod_k (1 - ((y_k - c_k)/r)^2)^power on the cube |y_k - c_k| <= r."""
    c = np.broadcast_to(np.asarray(center, dtype=float), (n,)).copy()
    r = float(radius)

    def ev(y):
        out = amplitude
        for yk, ck in zip(y, c):
            out = out * np.clip(1.0 - ((yk - ck) / r) ** 2, 0.0, None) ** power
        return out

    one = r * math.sqrt(math.pi) * math.gamma(power + 1) / math.gamma(power + 1.5)
    box = tuple((ck - r, ck + r) for ck in c)
    return TestFunction(ev, box, (), "bump",
                        {"center": c.tolist() if n > 1 else float(c[0]), "radius": r,
                         "power": power, "amplitude": amplitude}, amplitude * one ** n)


def zero_function(n: int = 1) -> TestFunction:
    return TestFunction(lambda y: np.zeros(np.broadcast(*y).shape), tuple((-1.0, 1.0) for _ in range(n)),
                        (), "zero", {}, 0.0)


# -- symbols ---------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolSpec:
    """A symbol b in Lambda(delta) with a declared constant."""

    evaluator: Callable
    delta: float
    constant: float
    n: int = 1
    kinks: tuple = ()
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        kinks = tuple(tuple(float(k) for k in ks) for ks in self.kinks) or tuple(() for _ in range(self.n))
        object.__setattr__(self, "kinks", kinks)

    def __call__(self, coords) -> np.ndarray:
        coords = tuple(np.asarray(c, dtype=float) for c in coords)
        return np.asarray(self.evaluator(coords), dtype=float)

    def at(self, y) -> np.ndarray:
        return self((np.asarray(y, dtype=float),))

    def value_at_point(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return float(self(tuple(np.array(v) for v in x)))

    @property
    def is_constant(self) -> bool:
        return self.name == "constant"

    def as_json(self) -> dict:
        return {"name": self.name, **self.params}


def power_symbol(delta: float, center=0.0, scale: float = 1.0, n: int = 1) -> SymbolSpec:
    """scale * |y - c|^delta; the Lambda(delta) constant is scale."""
    c = np.broadcast_to(np.asarray(center, dtype=float), (n,)).copy()

    def ev(y):
        sq = 0.0
        for yk, ck in zip(y, c):
            sq = sq + (yk - ck) ** 2
        return scale * np.sqrt(sq) ** delta

    return SymbolSpec(ev, delta, abs(scale), n, tuple((ck,) for ck in c), "power",
                      {"delta": delta, "center": c.tolist() if n > 1 else float(c[0]), "scale": scale})


def linear_symbol(slope: float = 1.0, delta: float = 1.0, constant: float | None = None,
                  domain=(-1.0, 1.0), n: int = 1) -> SymbolSpec:
    """slope * y_1; on a domain of diameter D its Lambda(delta) constant is |slope| D^(1 - delta)."""
    if constant is None:
        diam = (domain[1] - domain[0]) * math.sqrt(n)
        constant = abs(slope) * diam ** (1 - delta)
    return SymbolSpec(lambda y: slope * y[0], delta, constant, n, (), "linear",
                      {"slope": slope, "delta": delta, "constant": constant})


def sinusoid_symbol(amplitude: float = 1.0, frequency: float = 1.0, phase: float = 0.0,
                    delta: float = 0.5, n: int = 1) -> SymbolSpec:
    """amplitude * sin(frequency * y_1 + phase); constant 2^(1-delta) |amplitude| frequency^delta."""
    const = 2 ** (1 - delta) * abs(amplitude) * abs(frequency) ** delta
    return SymbolSpec(lambda y: amplitude * np.sin(frequency * y[0] + phase), delta, const, n, (),
                      "sinusoid", {"amplitude": amplitude, "frequency": frequency, "phase": phase,
                                   "delta": delta})


def constant_symbol(value: float = 1.0, delta: float = 0.5, n: int = 1) -> SymbolSpec:
    return SymbolSpec(lambda y: np.full(np.broadcast(*y).shape, float(value)), delta, 0.0, n, (),
                      "constant", {"value": value, "delta": delta})


# -- kernels ---------------------------------------------------------------------

def _offset_norm_sum(D):
    """sum_i |d_i| for offsets d_i = y_i - x; hypot keeps tiny offsets from underflowing."""
    total = 0.0
    for slot in D:
        total = total + functools.reduce(np.hypot, slot, 0.0)
    return total


def _distance_sum(x, Y):
    return _offset_norm_sum([tuple(yk - xk for xk, yk in zip(x, slot)) for slot in Y])


@dataclass(frozen=True)
class KernelSpec:
    evaluator: Callable
    alpha: float
    n: int
    m: int
    gamma: float = 1.0
    c_size: float = 1.0
    c_smooth: float = 1.0
    is_standard: bool = False
    name: str = "custom"
    params: dict = field(default_factory=dict)
    offset_evaluator: Callable | None = None  # K from x and D = y - x, for use near the diagonal

    def __post_init__(self):
        if not 0 < self.alpha < self.m * self.n:
            raise ValueError(f"kernel order alpha = {self.alpha} outside (0, mn)")
        if not 0 < self.gamma <= 1:
            raise ValueError("kernel smoothness gamma must lie in (0, 1]")

    def __call__(self, x, Y):
        return self.evaluator(x, Y)

    def size_bound(self, x, Y):
        return _distance_sum(x, Y) ** (self.alpha - self.m * self.n)

    def at_offsets(self, x, D):
        if self.offset_evaluator is not None:
            return self.offset_evaluator(x, D)
        return self.evaluator(x, [tuple(xk + dk for xk, dk in zip(x, slot)) for slot in D])

    def as_json(self) -> dict:
        return {"name": self.name, "alpha": self.alpha, **self.params}


def standard_smoothness_constant(alpha: float, n: int, m: int) -> float:
    """|a| m 2^(1-a), a = alpha - mn: valid when sum |x - y_i| > 2m |x - x'|."""
    a = alpha - m * n
    return abs(a) * m * 2 ** (1 - a)


def standard_kernel(alpha: float, n: int = 1, m: int = 1) -> KernelSpec:
    a = alpha - m * n
    return KernelSpec(lambda x, Y: _distance_sum(x, Y) ** a, alpha, n, m, 1.0, 1.0,
                      standard_smoothness_constant(alpha, n, m), True, "standard", {"n": n, "m": m},
                      lambda x, D: _offset_norm_sum(D) ** a)


def modulated_kernel(alpha: float, n: int = 1, m: int = 1, reach: float = 10.0) -> KernelSpec:
    """Standard kernel times sin(x_1); the smoothness constant is declared for sum |x - y_i| <= reach."""
    a = alpha - m * n
    c_smooth = standard_smoothness_constant(alpha, n, m) + 2 ** (-a) * reach
    return KernelSpec(lambda x, Y: _distance_sum(x, Y) ** a * math.sin(float(x[0])), alpha, n, m,
                      1.0, 1.0, c_smooth, False, "modulated", {"n": n, "m": m, "reach": reach},
                      lambda x, D: _offset_norm_sum(D) ** a * math.sin(float(x[0])))


def violating_kernel(alpha: float, n: int = 1, m: int = 1) -> KernelSpec:
    """Standard kernel times |x - y_1|^(-n/2): breaks the size condition near the diagonal."""
    a = alpha - m * n

    def ev(x, Y):
        d1 = _distance_sum(x, Y[:1])
        return _distance_sum(x, Y) ** a * d1 ** (-n / 2)

    def ev_offsets(x, D):
        return _offset_norm_sum(D) ** a * _offset_norm_sum(D[:1]) ** (-n / 2)

    return KernelSpec(ev, alpha, n, m, 1.0, 1.0, standard_smoothness_constant(alpha, n, m), False,
                      "violating", {"n": n, "m": m}, ev_offsets)


def scaled_kernel(K: KernelSpec, c: float) -> KernelSpec:
    base = K.evaluator
    return KernelSpec(lambda x, Y: c * base(x, Y), K.alpha, K.n, K.m, K.gamma, abs(c) * K.c_size,
                      abs(c) * K.c_smooth, False, f"scaled_{K.name}", {**K.params, "factor": c},
                      lambda x, D: c * K.at_offsets(x, D))


# -- evaluation ------------------------------------------------------------------

def _check_inputs(fs: Sequence[TestFunction], alpha: float, x, n_expected: int | None = None):
    m = len(fs)
    if m == 0:
        raise ValueError("need at least one input function")
    n = fs[0].n
    if any(f.n != n for f in fs):
        raise ValueError("input functions live in different dimensions")
    if n_expected is not None and n != n_expected:
        raise ValueError("kernel and inputs disagree on the dimension")
    if not 0 < alpha < m * n:
        raise ValueError(f"alpha = {alpha} outside (0, mn) = (0, {m * n})")
    if m * n > MAX_AXES:
        raise ValueError(f"quadrature budget exceeded: nm = {m * n} > {MAX_AXES}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if len(x) != n:
        raise ValueError("evaluation point has the wrong dimension")
    return m, n, x


def _integrate(kernel: KernelSpec | None, alpha: float, fs, x, cfg, density=None, extra_kinks=None):
    m, n, x = _check_inputs(fs, alpha, x, None if kernel is None else kernel.n)
    if cfg is None:
        cfg = default_config(m * n)
    if kernel is None:
        a = alpha - m * n
        kern = lambda xx, D: _offset_norm_sum(D) ** a
        size = kern
    else:
        if kernel.m != m:
            raise ValueError("kernel multilinearity differs from the number of inputs")
        kern = kernel.at_offsets
        size = lambda xx, D: kernel.c_size * _offset_norm_sum(D) ** (kernel.alpha - m * n)
    if density is None:
        def density(Y):
            out = 1.0
            for f, slot in zip(fs, Y):
                out = out * f(slot)
            return out
    kinks = []
    for i, f in enumerate(fs):
        per = []
        for k in range(n):
            ks = set(f.kinks[k])
            if extra_kinks is not None:
                ks |= set(extra_kinks[i][k])
            per.append(tuple(sorted(ks)))
        kinks.append(per)
    return integrate_singular(kern, density, x, [f.box for f in fs], kinks, alpha, cfg, size)


def eval_I_alpha_detail(fs: Sequence[TestFunction], alpha: float, x, cfg: QuadratureConfig | None = None) -> QuadResult:
    return _integrate(None, alpha, fs, x, cfg)


def eval_I_alpha(fs: Sequence[TestFunction], alpha: float, x, cfg: QuadratureConfig | None = None) -> float:
    """I_alpha^m (f_1, ..., f_m)(x) by singular tensor quadrature."""
    return eval_I_alpha_detail(fs, alpha, x, cfg).value


def eval_T_alpha_detail(K: KernelSpec, fs, x, cfg: QuadratureConfig | None = None) -> QuadResult:
    return _integrate(K, K.alpha, fs, x, cfg)


def eval_T_alpha(K: KernelSpec, fs: Sequence[TestFunction], x, cfg: QuadratureConfig | None = None) -> float:
    return eval_T_alpha_detail(K, fs, x, cfg).value


def _point_coords(x):
    return tuple(np.array(v) for v in np.atleast_1d(np.asarray(x, dtype=float)))


def _symbol_kinks(bs, fs):
    n = fs[0].n
    return [[tuple(b.kinks[k]) if k < len(b.kinks) else () for k in range(n)] for b in bs]


def eval_sum_commutator(bs: Sequence[SymbolSpec], K: KernelSpec, fs: Sequence[TestFunction], x,
                        cfg: QuadratureConfig | None = None, mode: str = "direct") -> float:
    """sum_j int (b_j(x) - b_j(y_j)) K(x, y) prod f_i(y_i) dy."""
    if len(bs) != len(fs):
        raise ValueError("need one symbol per input")
    bx = [b.value_at_point(x) for b in bs]
    if mode == "direct":
        def density(Y):
            diff = 0.0
            for bj, bxj, slot in zip(bs, bx, Y):
                diff = diff + (bxj - bj(slot))
            out = diff
            for f, slot in zip(fs, Y):
                out = out * f(slot)
            return out

        return _integrate(K, K.alpha, fs, x, cfg, density, _symbol_kinks(bs, fs)).value
    if mode == "iterative":
        base = eval_T_alpha(K, fs, x, cfg)
        total = 0.0
        for j, (bj, bxj) in enumerate(zip(bs, bx)):
            swapped = list(fs)
            swapped[j] = fs[j].times(bj)
            total += bxj * base - eval_T_alpha(K, swapped, x, cfg)
        return total
    raise ValueError(f"unknown sum-commutator mode {mode!r}")


def eval_product_commutator(bs: Sequence[SymbolSpec], K: KernelSpec, fs: Sequence[TestFunction], x,
                            cfg: QuadratureConfig | None = None, mode: str = "direct") -> float:
    """int K(x, y) prod (b_i(x) - b_i(y_i)) f_i(y_i) dy."""
    if len(bs) != len(fs):
        raise ValueError("need one symbol per input")
    m = len(fs)
    bx = [b.value_at_point(x) for b in bs]
    if mode == "direct":
        def density(Y):
            out = 1.0
            for bi, bxi, f, slot in zip(bs, bx, fs, Y):
                out = out * (bxi - bi(slot)) * f(slot)
            return out

        return _integrate(K, K.alpha, fs, x, cfg, density, _symbol_kinks(bs, fs)).value
    if mode == "expansion":
        total = 0.0
        for sigma in itertools.product((0, 1), repeat=m):
            coef = (-1) ** (m - sum(sigma))
            for s, bxi in zip(sigma, bx):
                if s:
                    coef *= bxi
            if coef == 0:
                continue
            slots = [f if s else f.times(b) for f, b, s in zip(fs, bs, sigma)]
            total += coef * eval_T_alpha(K, slots, x, cfg)
        return total
    if mode == "iterative":
        def nested(k: int, slots: list) -> float:
            # [b_k, ... [b_1, T]_1 ...]_k applied to slots
            if k == 0:
                return eval_T_alpha(K, slots, x, cfg)
            j = k - 1
            swapped = list(slots)
            swapped[j] = slots[j].times(bs[j])
            return bx[j] * nested(k - 1, slots) - nested(k - 1, swapped)

        return nested(m, list(fs))
    raise ValueError(f"unknown product-commutator mode {mode!r}")


# -- checks ----------------------------------------------------------------------

@dataclass
class CheckReport:
    passed: bool
    size_ratio: float
    smooth_ratio: float
    size_witness: tuple | None = None
    smooth_witness: tuple | None = None
    samples: int = 0
    seed: int = 0
    separation: float = 2.0

    def as_json(self) -> dict:
        return {"passed": self.passed, "size_ratio": self.size_ratio, "smooth_ratio": self.smooth_ratio,
                "size_witness": self.size_witness, "smooth_witness": self.smooth_witness,
                "samples": self.samples, "seed": self.seed, "separation": self.separation}


def kernel_condition_check(K: KernelSpec, samples: int = 20000, seed: int = 0,
                           separation: float = 2.0, box: float = 2.0) -> CheckReport:
    """Sample the size and smoothness bounds of K.

    Smoothness pairs (x, x') satisfy sum |x - y_i| > separation * |x - x'|.
    Half of the y-samples sit at log-uniform distances from x or x' so that
    near-diagonal configurations are probed.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    n, m = K.n, K.m
    size_max, smooth_max = 0.0, 0.0
    size_w = smooth_w = None
    for _ in range(samples):
        x = rng.uniform(-box, box, n)
        scales = 10.0 ** rng.uniform(-6, 0.5, m)
        anchor_choice = rng.integers(0, 3)
        h = 10.0 ** rng.uniform(-6, 0) * rng.normal(size=n)
        xp = x + h
        anchor = x if anchor_choice == 0 else xp
        ys = []
        for i in range(m):
            if anchor_choice == 2:
                ys.append(rng.uniform(-box, box, n))
            else:
                ys.append(anchor + scales[i] * rng.normal(size=n))
        Y = [tuple(np.array(v) for v in y) for y in ys]
        s = float(_distance_sum(x, Y))
        if s == 0:
            continue
        kv = float(K(x, Y))
        bound = s ** (K.alpha - m * n)
        r = abs(kv) / bound
        if r > size_max:
            size_max, size_w = r, (x.tolist(), [y.tolist() for y in ys])
        dist = float(np.linalg.norm(h))
        if s > separation * dist and dist > 0:
            kvp = float(K(xp, Y))
            sb = dist ** K.gamma / s ** (m * n - K.alpha + K.gamma)
            r2 = abs(kv - kvp) / sb
            if r2 > smooth_max:
                smooth_max, smooth_w = r2, (x.tolist(), xp.tolist(), [y.tolist() for y in ys])
    tol = 1 + 1e-6
    passed = size_max <= K.c_size * tol and smooth_max <= K.c_smooth * tol
    return CheckReport(passed, size_max, smooth_max, size_w, smooth_w, samples, seed, separation)


@dataclass
class DominationReport:
    passed: bool
    rows: list  # (x, |T f|, C_size * I |f|, slack)


def pointwise_domination_check(K: KernelSpec, fs: Sequence[TestFunction], points,
                               cfg: QuadratureConfig | None = None, rel_tol: float = 1e-8) -> DominationReport:
    rows = []
    ok = True
    abs_fs = [f.absolute() for f in fs]
    for x in points:
        t = eval_T_alpha_detail(K, fs, x, cfg)
        i = eval_I_alpha_detail(abs_fs, K.alpha, x, cfg)
        lhs = abs(t.value)
        rhs = K.c_size * i.value
        slack = rel_tol * abs(rhs) + t.corner_bound + K.c_size * i.corner_bound * 1e-6
        good = lhs <= rhs + slack
        ok &= good
        rows.append((np.atleast_1d(x).tolist(), lhs, rhs, slack, good))
    return DominationReport(bool(ok), rows)


@dataclass
class SymbolEstimate:
    estimate: float
    declared: float
    passed: bool
    witness: tuple | None


def symbol_constant_estimate(b: SymbolSpec, domain=(-1.0, 1.0), grid: int = 201) -> SymbolEstimate:
    """Max over grid pairs of |b(x) - b(y)| / |x - y|^delta on a cube domain."""
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    axis = np.linspace(domain[0], domain[1], grid)
    if b.n == 1:
        pts = axis[:, None]
    else:
        pts = np.stack(np.meshgrid(*([axis] * b.n), indexing="ij"), axis=-1).reshape(-1, b.n)
    vals = b(tuple(pts[:, k] for k in range(b.n)))
    vals = np.broadcast_to(vals, (len(pts),))
    diff = np.abs(vals[:, None] - vals[None, :])
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dist > 0, diff / dist ** b.delta, 0.0)
    k = int(np.argmax(ratio))
    i, j = divmod(k, len(pts))
    est = float(ratio[i, j])
    return SymbolEstimate(est, b.constant, est <= b.constant * (1 + 1e-6),
                          (pts[i].tolist(), pts[j].tolist()) if est > 0 else None)


# -- catalogs --------------------------------------------------------------------

def test_function_from_json(data: dict, n: int = 1) -> TestFunction:
    data = dict(data)
    name = data.pop("name", None)
    if name == "bump":
        allowed = {"center", "radius", "power", "amplitude"}
        _reject(data, allowed, "bump")
        return bump_function(data.get("center", 0.0), data.get("radius", 1.0), int(data.get("power", 4)),
                             data.get("amplitude", 1.0), n)
    if name == "box":
        _reject(data, {"lo", "hi", "value"}, "box")
        return box_function(data.get("lo", 0.0), data.get("hi", 1.0), data.get("value", 1.0), n)
    if name == "zero":
        _reject(data, set(), "zero")
        return zero_function(n)
    raise ValueError(f"unknown test function {name!r}")


test_function_from_json.__test__ = False


def symbol_from_json(data: dict, n: int = 1) -> SymbolSpec:
    data = dict(data)
    name = data.pop("name", None)
    if name == "power":
        _reject(data, {"delta", "center", "scale"}, "power")
        return power_symbol(data["delta"], data.get("center", 0.0), data.get("scale", 1.0), n)
    if name == "linear":
        _reject(data, {"slope", "delta", "constant"}, "linear")
        return linear_symbol(data.get("slope", 1.0), data.get("delta", 1.0), data.get("constant"), n=n)
    if name == "sinusoid":
        _reject(data, {"amplitude", "frequency", "phase", "delta"}, "sinusoid")
        return sinusoid_symbol(data.get("amplitude", 1.0), data.get("frequency", 1.0),
                               data.get("phase", 0.0), data.get("delta", 0.5), n)
    if name == "constant":
        _reject(data, {"value", "delta"}, "constant")
        return constant_symbol(data.get("value", 1.0), data.get("delta", 0.5), n)
    raise ValueError(f"unknown symbol {name!r}")


def kernel_from_json(data: dict, n: int, m: int) -> KernelSpec:
    data = dict(data)
    name = data.pop("name", "standard")
    alpha = data.pop("alpha", None)
    if alpha is None:
        raise ValueError("kernel needs an order alpha")
    factor = data.pop("factor", None)
    reach = data.pop("reach", None)
    if data:
        raise ValueError(f"unknown kernel keys: {sorted(data)}")
    if name == "standard":
        K = standard_kernel(alpha, n, m)
    elif name == "modulated":
        K = modulated_kernel(alpha, n, m, reach if reach is not None else 10.0)
    elif name == "violating":
        K = violating_kernel(alpha, n, m)
    else:
        raise ValueError(f"unknown kernel {name!r}")
    return scaled_kernel(K, factor) if factor is not None else K


def _reject(data: dict, allowed: set, what: str) -> None:
    extra = set(data) - allowed
    if extra:
        raise ValueError(f"unknown keys for {what}: {sorted(extra)}")
