"""Exponent arithmetic, theorem admissibility and the (1/p, delta~) region map.

Extended reals are plain floats: ``math.inf`` is a first-class exponent and
``1/inf == 0`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

INF = math.inf

#: Two parameters closer than this are treated as equal by the classifier.
BOUNDARY_TOL = 1e-12


def parse_exponent(value) -> float:
    """Accept numbers and the strings ``"inf"``/``"infinity"``/``"∞"``."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity", "∞"):
            return INF
        return float(text)
    return float(value)


def reciprocal(p: float) -> float:
    return 0.0 if p == INF else 1.0 / p


def holder_conjugate(p: float) -> float:
    """Return p' with 1/p + 1/p' = 1 (1 -> inf, inf -> 1)."""
    p = parse_exponent(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"Hoelder conjugate needs p >= 1, got {p}")
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class ExponentVector:
    """The m-tuple (p_1, ..., p_m) with entries in [1, inf]."""

    entries: tuple

    def __init__(self, entries: Iterable):
        vals = tuple(parse_exponent(e) for e in entries)
        if not vals:
            raise ValueError("an exponent vector needs at least one entry")
        for i, p in enumerate(vals):
            if math.isnan(p) or p < 1:
                raise ValueError(f"exponent p_{i + 1} = {p} is below 1")
        object.__setattr__(self, "entries", vals)

    @classmethod
    def from_aggregate(cls, inv_p: float, m: int) -> "ExponentVector":
        """Equal split: every 1/p_i = inv_p/m."""
        if not 0 <= inv_p <= m + BOUNDARY_TOL:
            raise ValueError(f"aggregate 1/p = {inv_p} outside [0, {m}]")
        share = min(inv_p / m, 1.0)
        return cls([INF if share == 0 else 1.0 / share] * m)

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def inv_p(self) -> float:
        return math.fsum(reciprocal(p) for p in self.entries)

    @property
    def p(self) -> float:
        s = self.inv_p
        return INF if s == 0 else 1.0 / s

    @property
    def conjugates(self) -> tuple:
        return tuple(holder_conjugate(p) for p in self.entries)

    @property
    def I1(self) -> tuple:
        return tuple(i for i, p in enumerate(self.entries) if p == 1)

    @property
    def I2(self) -> tuple:
        return tuple(i for i, p in enumerate(self.entries) if p > 1)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def as_json(self) -> list:
        return ["inf" if p == INF else p for p in self.entries]


@dataclass(frozen=True)
class ParameterPoint:
    """A point (n, m, beta, delta, delta~, gamma) of the parameter space.

    ``beta_split`` defaults to the equal split beta_i = beta/m.
    """

    n: int
    m: int
    beta: float
    delta: float
    delta_tilde: float
    gamma: float = 1.0
    beta_split: tuple | None = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive integers")
        if not 0 < self.beta < self.m * self.n:
            raise ValueError(f"beta = {self.beta} outside (0, mn) = (0, {self.m * self.n})")
        if not 0 < self.gamma <= 1:
            raise ValueError(f"kernel smoothness gamma = {self.gamma} outside (0, 1]")
        if self.beta_split is not None:
            split = tuple(float(b) for b in self.beta_split)
            if len(split) != self.m:
                raise ValueError("beta_split needs m entries")
            if abs(math.fsum(split) - self.beta) > 1e-12:
                raise ValueError("beta_split must sum to beta")
            if any(not 0 < b < self.n for b in split):
                raise ValueError("every beta_i must lie in (0, n)")
            object.__setattr__(self, "beta_split", split)

    @property
    def tau(self) -> float:
        return tau(self)

    @property
    def betas(self) -> tuple:
        if self.beta_split is not None:
            return self.beta_split
        return (self.beta / self.m,) * self.m

    def kappa(self, i: int) -> float:
        """Exponent n - beta_i + delta/m of the i-th tail kernel."""
        return self.n - self.betas[i] + self.delta / self.m

    @property
    def symbol_space_defined(self) -> bool:
        return 0 < self.delta < 1

    def replace(self, **changes) -> "ParameterPoint":
        data = dict(n=self.n, m=self.m, beta=self.beta, delta=self.delta,
                    delta_tilde=self.delta_tilde, gamma=self.gamma,
                    beta_split=self.beta_split)
        data.update(changes)
        return ParameterPoint(**data)

    def as_json(self) -> dict:
        out = dict(n=self.n, m=self.m, beta=self.beta, delta=self.delta,
                   delta_tilde=self.delta_tilde, gamma=self.gamma)
        if self.beta_split is not None:
            out["beta_split"] = list(self.beta_split)
        return out


def tau(point: ParameterPoint) -> float:
    """Threshold (beta - mn)(1 - 1/m) + delta/m."""
    m, n = point.m, point.n
    return (point.beta - m * n) * (1 - 1 / m) + point.delta / m


def natural_delta(beta: float, n: int, p: ExponentVector) -> float:
    """The only delta~ compatible with w = prod v_i: beta - n/p."""
    return beta - n * p.inv_p


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    alpha_tilde: float
    violations: tuple = ()

    def __bool__(self):
        return self.ok


def admissible_theorem(point: ParameterPoint, p: ExponentVector, alpha: float,
                       variant: str) -> Admissibility:
    """Check the hypotheses on (alpha, delta, gamma, p) of the two boundedness theorems.

    ``variant`` is ``"sum"`` (alpha~ = alpha + delta) or ``"product"``
    (alpha~ = alpha + m delta). The hypothesis delta~ <= delta is checked too.
    """
    n, m = point.n, point.m
    if not 0 < alpha < m * n:
        raise ValueError(f"alpha = {alpha} outside (0, mn) = (0, {m * n})")
    delta, gamma = point.delta, point.gamma
    if variant == "sum":
        cap = m * n - alpha
        cap_name = "mn - alpha"
        alpha_tilde = alpha + delta
    elif variant == "product":
        cap = (m * n - alpha) / m
        cap_name = "(mn - alpha)/m"
        alpha_tilde = alpha + m * delta
    else:
        raise ValueError(f"unknown commutator variant {variant!r}")
    violations = []
    if not delta > 0:
        violations.append(f"0 < delta fails (delta = {delta})")
    if not delta < gamma:
        violations.append(f"delta < gamma fails ({delta} >= {gamma})")
    if not delta < cap:
        violations.append(f"delta < {cap_name} fails ({delta} >= {cap:.12g})")
    if not p.inv_p < alpha_tilde / n:
        violations.append(f"p > n/alpha~ fails (1/p = {p.inv_p:.12g}, alpha~/n = {alpha_tilde / n:.12g})")
    if not point.delta_tilde <= delta:
        violations.append(f"delta~ <= delta fails ({point.delta_tilde} > {delta})")
    return Admissibility(not violations, alpha_tilde, tuple(violations))


# -- region classification ---------------------------------------------------

TRIVIAL_A = "TrivialWeights_a"
TRIVIAL_B = "TrivialWeights_b"
TRIVIAL_C = "TrivialOrZero_c"
NONTRIVIAL = "Nontrivial"
EXCLUDED = "ExcludedBoundary"


@dataclass(frozen=True)
class RegionClass:
    tag: str
    case: str | None = None
    notes: tuple = field(default=())

    @property
    def label(self) -> str:
        return f"{self.tag}_{self.case}" if self.case else self.tag

    @property
    def is_nontrivial(self) -> bool:
        return self.tag == NONTRIVIAL

    @property
    def is_trivial(self) -> bool:
        return self.tag in (TRIVIAL_A, TRIVIAL_B, TRIVIAL_C)

    def explain(self) -> str:
        if self.tag == TRIVIAL_A:
            return ("triviality item (a): delta~ > delta or delta~ > beta - n/p, "
                    "the class holds only if some v_i = inf a.e.")
        if self.tag == TRIVIAL_B:
            return ("triviality item (b): delta~ = beta - n/p = delta, "
                    "the class holds only if some v_i = inf a.e.")
        if self.tag == TRIVIAL_C:
            return ("triviality item (c): delta~ < beta - mn, "
                    "the class holds only if some v_i = inf a.e. or w = 0 a.e.")
        if self.tag == EXCLUDED:
            return "tie between case boundaries not covered by any construction"
        return f"nontrivial, construction case ({self.case})"


def region_boundaries(point: ParameterPoint, p: ExponentVector) -> dict:
    n, m, beta = point.n, point.m, point.beta
    return {
        "delta": point.delta,
        "natural": beta - n * p.inv_p,
        "lower": beta - m * n,
        "tau": tau(point),
    }


def classify_region(point: ParameterPoint, p: ExponentVector,
                    tol: float = BOUNDARY_TOL) -> RegionClass:
    """Tag (1/p, delta~) as trivial, nontrivial (with its case letter) or an excluded tie."""
    if p.m != point.m:
        raise ValueError("exponent vector length differs from m")
    b = region_boundaries(point, p)
    dt, delta, nat, low, t = point.delta_tilde, b["delta"], b["natural"], b["lower"], b["tau"]
    notes = () if point.symbol_space_defined else ("symbol-space undefined: delta outside (0, 1)",)

    def eq(a, c):
        return abs(a - c) <= tol

    def lt(a, c):
        return a < c - tol

    def gt(a, c):
        return a > c + tol

    if gt(dt, delta) or gt(dt, nat):
        return RegionClass(TRIVIAL_A, None, notes)
    if eq(dt, nat) and eq(dt, delta):
        return RegionClass(TRIVIAL_B, None, notes)
    if lt(dt, low):
        return RegionClass(TRIVIAL_C, None, notes)
    if eq(dt, low):
        return RegionClass(NONTRIVIAL, "f", notes)
    # low < dt <= min(delta, nat) from here on
    if gt(dt, t):
        return RegionClass(NONTRIVIAL, "e", notes)
    if lt(dt, t):
        if lt(nat, t):
            return RegionClass(NONTRIVIAL, "b", notes)
        return RegionClass(NONTRIVIAL, "a", notes)
    # dt == tau
    if lt(t, delta) and lt(delta, nat):
        return RegionClass(NONTRIVIAL, "c", notes)
    if lt(t, nat) and lt(nat, delta):
        return RegionClass(NONTRIVIAL, "d", notes)
    return RegionClass(EXCLUDED, None, notes)


# -- region grids ------------------------------------------------------------

PANELS = ("beta_gt", "beta_eq", "beta_lt")


def panel_point(panel: str, n: int = 1, m: int = 2, delta: float = 0.3,
                beta: float | None = None) -> ParameterPoint:
    """Representative parameters for one panel of the region figure."""
    if panel not in PANELS:
        raise ValueError(f"unknown panel {panel!r}; expected one of {', '.join(PANELS)}")
    if beta is None:
        beta = {"beta_gt": 3 * delta, "beta_eq": delta, "beta_lt": 2 * delta / 3}[panel]
    ok = {"beta_gt": beta > delta, "beta_eq": beta == delta, "beta_lt": beta < delta}[panel]
    if not ok:
        raise ValueError(f"beta = {beta} does not match panel {panel} for delta = {delta}")
    return ParameterPoint(n=n, m=m, beta=beta, delta=delta, delta_tilde=0.0)


def grid_axes(point: ParameterPoint, resolution: int):
    """Node coordinates of the (1/p, delta~) raster.

    For resolution >= 4 the delta~ step is chosen so that beta - mn and delta
    are exact nodes, with one margin row outside each.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    m, n = point.m, point.n
    low, top = point.beta - m * n, point.delta
    inv_p = np.linspace(0.0, float(m), resolution)
    if resolution >= 4:
        h = (top - low) / (resolution - 3)
        dts = np.array([low + (k - 1) * h for k in range(resolution)])
        dts[resolution - 2] = top
        dts[1] = low
    else:
        margin = 0.1 * (top - low)
        dts = np.linspace(low - margin, top + margin, resolution)
    return inv_p, dts


@dataclass
class RegionGrid:
    panel: str
    point: ParameterPoint
    inv_p: np.ndarray
    delta_tilde: np.ndarray
    cells: list  # (inv_p, delta_tilde, RegionClass), row-major in delta~ then 1/p

    def rows(self):
        for x, y, rc in self.cells:
            yield (self.panel, x, y, rc.label)

    def edges(self) -> list:
        """tau and beta - n/p along the 1/p axis (the figure's dashed line and upper edge)."""
        t = tau(self.point)
        return [{"inv_p": float(x), "tau": t, "natural": self.point.beta - self.point.n * float(x)}
                for x in self.inv_p]


def region_grid(panel: str, resolution: int, *, n: int = 1, m: int = 2,
                delta: float = 0.3, beta: float | None = None) -> RegionGrid:
    base = panel_point(panel, n=n, m=m, delta=delta, beta=beta)
    xs, ys = grid_axes(base, resolution)
    cells = []
    for y in ys:
        for x in xs:
            pt = base.replace(delta_tilde=float(y))
            cells.append((float(x), float(y),
                          classify_region(pt, ExponentVector.from_aggregate(float(x), m))))
    return RegionGrid(panel, base, xs, ys, cells)


def classify_by_inequalities(point: ParameterPoint, inv_p: float,
                             tol: float = BOUNDARY_TOL) -> str:
    """Coarse re-derivation used to cross-check grids: trivial / nontrivial / excluded point."""
    nat = point.beta - point.n * inv_p
    low = point.beta - point.m * point.n
    dt, delta = point.delta_tilde, point.delta
    if abs(dt - delta) <= tol and abs(nat - delta) <= tol:
        return "trivial"
    if dt <= delta + tol and dt <= nat + tol and dt >= low - tol:
        return "nontrivial"
    return "trivial"


def coarse_label(rc: RegionClass) -> str:
    if rc.tag == NONTRIVIAL or rc.tag == EXCLUDED:
        return "nontrivial"
    return "trivial"


