"""Weight specifications.

Every analytic weight is a radial form

    phi(r) = scale * r**a * prod_j (1 + r**rho_j)**(-mult_j) * exp(rate * r),   r = |x|,

which covers power weights, (1 + |x|^rho)^(-m1), e^{|x|}, constants and
their products and real powers. One-dimensional piecewise-constant grid
weights are the other family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

INF = math.inf


class WeightSpec:
    """Common interface of weights on R^n."""

    def evaluate(self, x) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def power(self, s: float) -> "WeightSpec":  # pragma: no cover - interface
        raise NotImplementedError

    def multiply(self, other: "WeightSpec") -> "WeightSpec":  # pragma: no cover - interface
        raise NotImplementedError

    def scaled(self, c: float) -> "WeightSpec":  # pragma: no cover - interface
        raise NotImplementedError

    @property
    def is_zero(self) -> bool:  # pragma: no cover - interface
        raise NotImplementedError

    def as_json(self) -> dict:  # pragma: no cover - interface
        raise NotImplementedError

    def reciprocal(self) -> "WeightSpec":
        return self.power(-1.0)


def _points_norm(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    return np.abs(arr)


@dataclass(frozen=True)
class RadialForm(WeightSpec):
    scale: float = 1.0
    exponent: float = 0.0
    shifts: tuple = ()  # ((rho, mult), ...) meaning prod (1 + r^rho)^(-mult)
    rate: float = 0.0

    def __post_init__(self):
        if self.scale < 0 or math.isnan(self.scale):
            raise ValueError("weights are nonnegative")
        merged: dict = {}
        for rho, mult in self.shifts:
            if not rho > 0:
                raise ValueError("shift exponent rho must be positive")
            merged[float(rho)] = merged.get(float(rho), 0.0) + float(mult)
        clean = tuple(sorted((r, m) for r, m in merged.items() if m != 0))
        object.__setattr__(self, "shifts", clean)

    # -- structure -----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.scale == 0

    @property
    def is_pure_power(self) -> bool:
        return not self.shifts and self.rate == 0

    @property
    def is_constant(self) -> bool:
        return self.is_pure_power and self.exponent == 0

    def power(self, s: float) -> "RadialForm":
        s = float(s)
        if self.is_zero:
            if s > 0:
                return self
            raise ZeroDivisionError("negative power of the zero weight")
        return RadialForm(self.scale ** s, self.exponent * s,
                          tuple((r, m * s) for r, m in self.shifts), self.rate * s)

    def multiply(self, other: WeightSpec) -> WeightSpec:
        if isinstance(other, RadialForm):
            return RadialForm(self.scale * other.scale, self.exponent + other.exponent,
                              self.shifts + other.shifts, self.rate + other.rate)
        if isinstance(other, GridWeight1D):
            return other.multiply(self)
        raise TypeError(f"cannot multiply RadialForm by {type(other).__name__}")

    def scaled(self, c: float) -> "RadialForm":
        return RadialForm(self.scale * c, self.exponent, self.shifts, self.rate)

    # -- evaluation ----------------------------------------------------------
    def smooth_part(self, r) -> np.ndarray:
        """phi(r) / r**a, which is bounded and positive near r = 0."""
        r = np.asarray(r, dtype=float)
        out = np.full(r.shape, self.scale, dtype=float)
        for rho, mult in self.shifts:
            out = out * (1.0 + r ** rho) ** (-mult)
        if self.rate:
            out = out * np.exp(self.rate * r)
        return out

    def radial(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            base = np.where(r == 0, 0.0 if self.exponent > 0 else (1.0 if self.exponent == 0 else INF),
                            r ** self.exponent)
            out = base * self.smooth_part(r)
        if self.is_zero:
            return np.zeros_like(r)
        return out

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.radial(np.abs(x))

    def evaluate_points(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return self.radial(np.linalg.norm(pts, axis=-1))

    def log_derivative_signs(self) -> set:
        """Signs of the terms of d log(phi)/dr; one sign means phi is monotone."""
        signs = set()
        if self.exponent:
            signs.add(np.sign(self.exponent))
        for _, mult in self.shifts:
            signs.add(-np.sign(mult))
        if self.rate:
            signs.add(np.sign(self.rate))
        return signs

    def tail_bound(self, n: int = 1) -> tuple:
        """(C, b, r0) with phi(r) <= C r**b for r >= r0.

        b is the exact growth exponent when rate == 0; b = inf when phi grows
        exponentially. Exponential decay is dominated by a steep power.
        """
        if self.is_zero:
            return 0.0, -INF, 0.0
        if self.rate > 0:
            return INF, INF, 0.0
        c, b, r0 = self.scale, self.exponent, 1.0
        for rho, mult in self.shifts:
            b -= rho * mult
            if mult < 0:
                c *= 2.0 ** (-mult)  # (1 + r^rho) <= 2 r^rho for r >= 1
        if self.rate < 0:
            k = n + 24.0
            lam = -self.rate
            c *= (k / (lam * math.e)) ** k  # e^{-lam r} <= (k/(lam e))^k r^{-k}
            b -= k
        return c, b, r0

    def as_json(self) -> dict:
        if self.is_constant:
            return {"form": "constant", "value": self.scale}
        if self.is_pure_power:
            return {"form": "power", "exponent": self.exponent, "scale": self.scale}
        out = {"form": "radial", "scale": self.scale, "exponent": self.exponent,
               "shifts": [[r, m] for r, m in self.shifts], "rate": self.rate}
        return out


def Power(a: float, scale: float = 1.0) -> RadialForm:
    """|x|^a."""
    return RadialForm(scale=scale, exponent=float(a))


def ShiftedPowerInverse(rho: float, multiplicity: float, scale: float = 1.0) -> RadialForm:
    """(1 + |x|^rho)^(-multiplicity)."""
    return RadialForm(scale=scale, shifts=((float(rho), float(multiplicity)),))


def Exponential(rate: float = 1.0, scale: float = 1.0) -> RadialForm:
    """e^{rate |x|}."""
    return RadialForm(scale=scale, rate=float(rate))


def Constant(c: float) -> RadialForm:
    return RadialForm(scale=float(c))


@dataclass(frozen=True)
class GridWeight1D(WeightSpec):
    """Piecewise-constant weight on the real line.

    ``values[j]`` holds on [edges[j], edges[j+1]); ``fill`` holds outside the grid.
    Values may be 0 (a vanishing weight) or +inf after taking negative powers.
    Ball sups are taken over the cells a ball meets, so every essential sup and
    every seminorm built on it is relative to the chosen grid.
    """

    edges: tuple
    values: tuple
    fill: float = 0.0

    def __init__(self, edges: Sequence[float], values: Sequence[float], fill: float = 0.0):
        e = np.asarray(edges, dtype=float)
        v = np.asarray(values, dtype=float)
        if e.ndim != 1 or v.ndim != 1 or len(e) != len(v) + 1 or len(v) == 0:
            raise ValueError("grid weight needs len(edges) == len(values) + 1")
        if np.any(np.diff(e) <= 0):
            raise ValueError("grid edges must be strictly increasing")
        if np.any(v < 0) or np.any(np.isnan(v)) or fill < 0:
            raise ValueError("grid weight values must be nonnegative")
        object.__setattr__(self, "edges", tuple(e.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))
        object.__setattr__(self, "fill", float(fill))

    @property
    def is_zero(self) -> bool:
        return self.fill == 0 and all(v == 0 for v in self.values)

    def _map(self, fn) -> "GridWeight1D":
        with np.errstate(divide="ignore"):
            vals = [float(fn(v)) for v in self.values]
            fill = float(fn(self.fill))
        return GridWeight1D(self.edges, vals, fill)

    def power(self, s: float) -> "GridWeight1D":
        s = float(s)

        def pw(v):
            if v == 0:
                return 0.0 if s > 0 else (1.0 if s == 0 else INF)
            if v == INF:
                return INF if s > 0 else (1.0 if s == 0 else 0.0)
            return v ** s

        return self._map(pw)

    def scaled(self, c: float) -> "GridWeight1D":
        return self._map(lambda v: v * c if v != INF or c == 0 else INF)

    def multiply(self, other: WeightSpec) -> "GridWeight1D":
        if isinstance(other, RadialForm) and other.is_constant:
            return self.scaled(other.scale)
        if isinstance(other, GridWeight1D) and other.edges == self.edges:
            vals = [_safe_mul(a, b) for a, b in zip(self.values, other.values)]
            return GridWeight1D(self.edges, vals, _safe_mul(self.fill, other.fill))
        raise TypeError("grid weights multiply only with constants or grids on the same edges")

    def cells(self):
        """(left, right, value) including the two unbounded fill cells."""
        e = self.edges
        out = [(-INF, e[0], self.fill)]
        out += [(e[j], e[j + 1], self.values[j]) for j in range(len(self.values))]
        out.append((e[-1], INF, self.fill))
        return out

    def evaluate(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        e = np.asarray(self.edges)
        idx = np.searchsorted(e, x, side="right") - 1
        vals = np.asarray(self.values)
        inside = (idx >= 0) & (idx < len(vals))
        out = np.full(x.shape, self.fill)
        out[inside] = vals[idx[inside]]
        return out

    def as_json(self) -> dict:
        return {"form": "grid", "edges": list(self.edges), "values": list(self.values),
                "fill": self.fill}


def _safe_mul(a: float, b: float) -> float:
    if (a == 0 and b == INF) or (a == INF and b == 0):
        return 0.0
    return a * b


def product(weights: Sequence[WeightSpec]) -> WeightSpec:
    out: WeightSpec = Constant(1.0)
    for w in weights:
        out = w.multiply(out) if isinstance(w, GridWeight1D) else out.multiply(w)
    return out


def weight_from_json(data: dict) -> WeightSpec:
    form = data.get("form")
    known = {
        "constant": {"form", "value"},
        "power": {"form", "exponent", "scale"},
        "shifted_power_inverse": {"form", "rho", "multiplicity", "scale"},
        "exponential": {"form", "rate", "scale"},
        "radial": {"form", "scale", "exponent", "shifts", "rate"},
        "grid": {"form", "edges", "values", "fill"},
    }
    if form not in known:
        raise ValueError(f"unknown weight form {form!r}")
    extra = set(data) - known[form]
    if extra:
        raise ValueError(f"unknown keys for weight form {form!r}: {sorted(extra)}")
    if form == "constant":
        return Constant(float(data.get("value", 1.0)))
    if form == "power":
        return Power(float(data["exponent"]), float(data.get("scale", 1.0)))
    if form == "shifted_power_inverse":
        return ShiftedPowerInverse(float(data["rho"]), float(data["multiplicity"]),
                                   float(data.get("scale", 1.0)))
    if form == "exponential":
        return Exponential(float(data.get("rate", 1.0)), float(data.get("scale", 1.0)))
    if form == "radial":
        return RadialForm(float(data.get("scale", 1.0)), float(data.get("exponent", 0.0)),
                          tuple((float(r), float(m)) for r, m in data.get("shifts", [])),
                          float(data.get("rate", 0.0)))
    return GridWeight1D(data["edges"], data["values"], float(data.get("fill", 0.0)))


@dataclass(frozen=True)
class WeightVector:
    """The pair (w, (v_1, ..., v_m))."""

    w: WeightSpec
    v: tuple

    def __init__(self, w: WeightSpec, v: Sequence[WeightSpec]):
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "v", tuple(v))
        if not self.v:
            raise ValueError("need at least one v_i")

    @property
    def m(self) -> int:
        return len(self.v)

    def as_json(self) -> dict:
        return {"w": self.w.as_json(), "v": [vi.as_json() for vi in self.v]}

    @classmethod
    def from_json(cls, data: dict) -> "WeightVector":
        extra = set(data) - {"w", "v"}
        if extra:
            raise ValueError(f"unknown keys in weight pair: {sorted(extra)}")
        return cls(weight_from_json(data["w"]), [weight_from_json(d) for d in data["v"]])
