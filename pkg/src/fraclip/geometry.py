"""Balls in R^n and deterministic ball families for sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def unit_ball_volume(n: int) -> float:
    """Volume c_n = pi^(n/2) / Gamma(n/2 + 1) of the unit ball in R^n."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def unit_sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n (2 for n = 1)."""
    return n * unit_ball_volume(n)


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float

    def __init__(self, center, radius: float):
        c = np.atleast_1d(np.asarray(center, dtype=float))
        if c.ndim != 1:
            raise ValueError("ball center must be a point")
        if not radius > 0 or not math.isfinite(radius):
            raise ValueError(f"ball radius must be positive and finite, got {radius}")
        object.__setattr__(self, "center", tuple(float(v) for v in c))
        object.__setattr__(self, "radius", float(radius))

    @property
    def n(self) -> int:
        return len(self.center)

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.n) * self.radius ** self.n

    @property
    def side(self) -> float:
        """|B|^(1/n)."""
        return unit_ball_volume(self.n) ** (1.0 / self.n) * self.radius

    @property
    def center_norm(self) -> float:
        return math.hypot(*self.center) if self.n > 1 else abs(self.center[0])

    def dilate(self, k: float) -> "Ball":
        return Ball(self.center, k * self.radius)

    def radial_range(self) -> tuple:
        """The interval of |x| for x in the closed ball."""
        d = self.center_norm
        return max(0.0, d - self.radius), d + self.radius

    def contains_origin(self) -> bool:
        return self.center_norm < self.radius

    def as_json(self) -> dict:
        return {"center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class BallFamily:
    balls: tuple

    def __init__(self, balls: Iterable[Ball]):
        items = tuple(balls)
        if not items:
            raise ValueError("a ball family must be nonempty")
        n = items[0].n
        if any(b.n != n for b in items):
            raise ValueError("all balls in a family must live in the same dimension")
        object.__setattr__(self, "balls", items)

    def __iter__(self):
        return iter(self.balls)

    def __len__(self):
        return len(self.balls)

    def __getitem__(self, i):
        return self.balls[i]

    @property
    def n(self) -> int:
        return self.balls[0].n

    def radii(self) -> np.ndarray:
        return np.array([b.radius for b in self.balls])


STANDARD_OFFSETS = (0.0, 0.5, -0.5, 2.0, -2.0, 10.0, -10.0)


def log_radii(r_min: float = 1e-3, r_max: float = 1e3, per_decade: int = 2) -> np.ndarray:
    decades = math.log10(r_max / r_min)
    count = int(round(decades * per_decade)) + 1
    return np.logspace(math.log10(r_min), math.log10(r_max), count)


def standard_family(n: int = 1, r_min: float = 1e-3, r_max: float = 1e3,
                    per_decade: int = 2, offsets: Sequence[float] = STANDARD_OFFSETS) -> BallFamily:
    """Log-spaced radii, each paired with centers at offset * R along the first axis.

    Ordering: by radius, then by offset in the order given.
    """
    balls = []
    for r in log_radii(r_min, r_max, per_decade):
        for off in offsets:
            c = np.zeros(n)
            c[0] = off * r
            balls.append(Ball(c, r))
    return BallFamily(balls)


def centered_family(radii: Sequence[float], n: int = 1) -> BallFamily:
    return BallFamily(Ball(np.zeros(n), r) for r in radii)
