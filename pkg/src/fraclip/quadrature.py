"""Tensor-product quadrature for integrals with a point singularity.

Integrals have the form

    int_{box} K(x, y_1, ..., y_m) F(y_1, ..., y_m) dy,     y_i in R^n,

with K singular only where every y_i equals x. Each of the d = m n axes gets
a one-dimensional mesh: breakpoints at support edges, at the coordinate of x
and at declared kink points; cells halve geometrically toward x (``depth``
levels, or algebraically when ``grading`` > 0) and shrink by a factor 0.15
toward kinks (``kink_depth`` levels).
Every cell carries a Gauss-Legendre rule. The 2^d cells that touch the
singular point are replaced by a Duffy map (pyramids over the largest local
coordinate) with a Gauss-Jacobi rule for the radial factor t^(alpha - 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import special

KERNEL_RATIO = 0.5
KINK_RATIO = 0.15


@dataclass(frozen=True)
class QuadratureConfig:
    base_cells: int = 2
    depth: int = 8
    kink_depth: int = 14
    order: int = 12
    tolerance: float = 1e-8
    chunk: int = 400_000
    grading: float = 0.0  # > 0: algebraic grading (k/N)^grading toward x instead of geometric levels

    def __post_init__(self):
        if self.base_cells < 1:
            raise ValueError("base_cells must be at least 1")
        if self.depth < 0 or self.kink_depth < 0:
            raise ValueError("refinement depth must be nonnegative")
        if self.order < 1:
            raise ValueError("Gauss order must be at least 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.grading < 0:
            raise ValueError("grading exponent must be nonnegative")

    def replace(self, **kw) -> "QuadratureConfig":
        data = dict(base_cells=self.base_cells, depth=self.depth, kink_depth=self.kink_depth,
                    order=self.order, tolerance=self.tolerance, chunk=self.chunk, grading=self.grading)
        data.update(kw)
        return QuadratureConfig(**data)

    def as_json(self) -> dict:
        return dict(base_cells=self.base_cells, depth=self.depth, kink_depth=self.kink_depth,
                    order=self.order, tolerance=self.tolerance, grading=self.grading)


DEFAULT_CONFIG = QuadratureConfig()


def default_config(d: int) -> QuadratureConfig:
    """Default rule for d = m n integration axes (coarser as d grows)."""
    if d <= 2:
        return DEFAULT_CONFIG
    if d == 3:
        return QuadratureConfig(depth=6, kink_depth=10, order=8)
    return QuadratureConfig(depth=4, kink_depth=8, order=6)


@lru_cache(maxsize=None)
def gauss_legendre01(q: int):
    x, w = np.polynomial.legendre.leggauss(q)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=None)
def gauss_jacobi01(q: int, alpha: float):
    """Nodes/weights for int_0^1 t^(alpha-1) g(t) dt."""
    s, w = special.roots_jacobi(q, 0.0, alpha - 1.0)
    return 0.5 * (s + 1.0), w * 2.0 ** (-alpha)


# -- one-dimensional meshes ------------------------------------------------------

def _kernel_points(span: float, inner: float) -> list:
    """Offsets inner * 2^j below 0.75 span: geometric cells that start at a fixed size."""
    pts = [0.0]
    s = inner
    while s < 0.75 * span:
        pts.append(s)
        s *= 2.0
    return pts


def graded_cells(a: float, b: float, left: str | None, right: str | None,
                 cfg: QuadratureConfig, inner: float | None = None) -> list:
    """Cells of [a, b] graded toward the ends marked "kernel" or "kink".

    With ``inner`` set, the cell touching a "kernel" end has exactly that
    size and its neighbours double outward; this keeps the corner cells of
    all axes the same size.
    Returns (lo, hi, innermost_left, innermost_right) tuples.
    """
    if b <= a:
        return []
    mid = 0.5 * (a + b) if (left and right) else None
    pts_left = [a]
    pts_right = [b]

    def levels(kind):
        if kind == "kernel":
            return KERNEL_RATIO, cfg.depth
        return KINK_RATIO, cfg.kink_depth

    N = cfg.base_cells
    if left:
        span = (mid if mid is not None else b) - a
        if left == "kernel" and cfg.grading > 0:
            pts_left = [a + span * (k / N) ** cfg.grading for k in range(N)]
        elif left == "kernel" and inner is not None:
            pts_left = [a + t for t in _kernel_points(span, inner)]
        else:
            ratio, L = levels(left)
            pts_left = [a] + [a + span * ratio ** k for k in range(L, 0, -1)]
    if right:
        span = b - (mid if mid is not None else a)
        if right == "kernel" and cfg.grading > 0:
            pts_right = [b - span * (k / N) ** cfg.grading for k in range(N)][::-1]
        elif right == "kernel" and inner is not None:
            pts_right = [b - t for t in _kernel_points(span, inner)][::-1]
        else:
            ratio, L = levels(right)
            pts_right = [b - span * ratio ** k for k in range(1, L + 1)][::-1] + [b]
    inner = [mid] if mid is not None else []
    # uniform splitting of the middle part
    lo_m = pts_left[-1] if left else a
    hi_m = pts_right[0] if right else b
    if mid is not None:
        middle = [lo_m, mid, hi_m]
    else:
        middle = list(np.linspace(lo_m, hi_m, cfg.base_cells + 1))
    pts = sorted(set(pts_left + middle + pts_right + inner))
    pts = [p for p in pts if a <= p <= b]
    cells = []
    for i, (lo, hi) in enumerate(zip(pts[:-1], pts[1:])):
        if hi > lo:
            cells.append((lo, hi, bool(left) and i == 0, bool(right) and i == len(pts) - 2))
    return cells


@dataclass
class AxisRule:
    nodes: np.ndarray
    weights: np.ndarray
    corner: np.ndarray  # bool, node lies in a cell touching the singular coordinate
    corner_cells: list  # [(lo, hi)] cells touching the singular coordinate
    offsets: np.ndarray | None = None  # node - focus, accurate even when nodes crowd the focus


def _axis_marks(lo: float, hi: float, focus: float | None, kinks: Sequence[float]) -> dict:
    marks = {lo: None, hi: None}
    for k in kinks:
        if lo <= k <= hi:
            marks[float(k)] = "kink"
    if focus is not None and lo <= focus <= hi:
        marks[float(focus)] = "kernel"
    return marks


def kernel_span(lo: float, hi: float, focus: float, kinks: Sequence[float]) -> float:
    """Length of the shortest kernel-graded stretch next to ``focus`` on this axis."""
    marks = _axis_marks(lo, hi, focus, kinks)
    pts = sorted(marks)
    i = pts.index(float(focus))
    spans = []
    for j in (i - 1, i + 1):
        if 0 <= j < len(pts):
            d = abs(pts[j] - focus)
            spans.append(0.5 * d if marks[pts[j]] else d)
    return min(spans) if spans else 0.0


def axis_rule(lo: float, hi: float, focus: float | None, kinks: Sequence[float],
              cfg: QuadratureConfig, singular: bool, inner: float | None = None) -> AxisRule:
    """Gauss rule on [lo, hi] graded toward ``focus`` (kernel) and ``kinks``.

    ``singular`` marks that the kernel singularity is reachable on this axis,
    so the cells adjacent to ``focus`` are recorded for the Duffy correction.
    """
    marks = _axis_marks(lo, hi, focus, kinks)
    pts = sorted(marks)
    gx, gw = gauss_legendre01(cfg.order)
    nodes, weights, corner, corner_cells, offsets = [], [], [], [], []
    for a, b in zip(pts[:-1], pts[1:]):
        for c_lo, c_hi, in_l, in_r in graded_cells(a, b, marks[a], marks[b], cfg, inner):
            h = c_hi - c_lo
            nodes.append(c_lo + h * gx)
            if focus is not None:
                # c_lo - focus is exact next to the focus; node - focus would not be
                offsets.append((c_lo - focus) + h * gx)
            weights.append(h * gw)
            touches = singular and ((in_l and marks[a] == "kernel") or (in_r and marks[b] == "kernel"))
            corner.append(np.full(len(gx), touches))
            if touches:
                corner_cells.append((c_lo, c_hi))
    if not nodes:
        return AxisRule(np.zeros(0), np.zeros(0), np.zeros(0, bool), [], np.zeros(0))
    return AxisRule(np.concatenate(nodes), np.concatenate(weights), np.concatenate(corner), corner_cells,
                    np.concatenate(offsets) if offsets else None)


# -- the integrator --------------------------------------------------------------

@dataclass
class QuadResult:
    value: float
    corner_value: float = 0.0
    corner_bound: float = 0.0
    nodes: int = 0

    @property
    def interval(self) -> tuple:
        return (self.value - self.corner_bound, self.value + self.corner_bound)


def _split_slots(axes_values, m: int, n: int):
    """Group d = m n coordinate arrays into m slots of n coordinates."""
    return [tuple(axes_values[i * n:(i + 1) * n]) for i in range(m)]


def snap_to_marks(x: Sequence[float], boxes, kinks, alpha: float) -> np.ndarray:
    """Move x onto a box edge or kink closer than L 2^(-53/alpha), L the axis length.

    The integral is alpha-Hoelder in x, so such a move changes it by less than
    one rounding unit, while meshing the sub-ulp gap would overflow the kernel.
    """
    x = np.array(x, dtype=float)
    for k in range(len(x)):
        best = None
        for box, ks in zip(boxes, kinks):
            lo, hi = box[k]
            tol = (hi - lo) * 2.0 ** (-53.0 / alpha)
            for mark in (lo, hi, *ks[k]):
                gap = abs(x[k] - mark)
                if 0 < gap <= tol and (best is None or gap < abs(x[k] - best)):
                    best = mark
        if best is not None:
            x[k] = best
    return x


def integrate_singular(kernel: Callable, density: Callable, x: Sequence[float],
                       boxes: Sequence[Sequence[tuple]], kinks: Sequence[Sequence[Sequence[float]]],
                       alpha: float, cfg: QuadratureConfig, size_kernel: Callable | None = None) -> QuadResult:
    """Integrate kernel(x, Y - x) * density(Y) over the product of support boxes.

    ``boxes[i][k]`` is the (lo, hi) range of coordinate k of slot i and
    ``kinks[i][k]`` the kink points of that coordinate. ``density`` takes Y
    as a list of m tuples of n broadcastable arrays; ``kernel`` and
    ``size_kernel`` take x and the offsets D = Y - x in the same layout, so
    that distances to x keep full relative precision next to the singularity.
    """
    x = snap_to_marks(x, boxes, kinks, alpha)
    m = len(boxes)
    n = len(x)
    # the kernel singularity is reachable iff x lies in every slot's box
    inside = all(lo <= x[k] <= hi for box in boxes for k, (lo, hi) in enumerate(box))
    inner = None
    if inside and cfg.grading == 0:
        # one corner-cell size for every axis, so the Duffy cells are cubes
        spans = [kernel_span(lo, hi, x[k], kinks[i][k])
                 for i, box in enumerate(boxes) for k, (lo, hi) in enumerate(box)]
        spans = [s for s in spans if s > 0]
        # a kink sitting on the singular point makes the strips along the axes
        # non-smooth; push the corner further in to compensate
        on_focus = any(abs(kv - x[k]) <= 1e-14 * max(1.0, abs(x[k]))
                       for i, box in enumerate(boxes) for k in range(len(box)) for kv in kinks[i][k])
        depth = cfg.depth + (cfg.kink_depth if on_focus else 0)
        if spans:
            inner = min(spans) * KERNEL_RATIO ** depth
    rules = []
    for i, box in enumerate(boxes):
        for k, (lo, hi) in enumerate(box):
            focus = min(max(x[k], lo), hi)
            r = axis_rule(lo, hi, focus, kinks[i][k], cfg, inside, inner)
            if focus != x[k]:
                r.offsets = r.nodes - x[k]
            rules.append(r)
    if any(len(r.nodes) == 0 for r in rules):
        return QuadResult(0.0)
    total = _tensor_sum(kernel, density, x, rules, m, n, cfg, mask=None)
    corner_tensor = 0.0
    corner_val = 0.0
    bound = 0.0
    if inside:
        corner_tensor = _tensor_sum(kernel, density, x, rules, m, n, cfg, mask=True)
        for cells in itertools.product(*[r.corner_cells for r in rules]):
            val, bnd = _duffy_cell(kernel, density, x, cells, m, n, alpha, cfg, size_kernel)
            corner_val += val
            bound += bnd
    value = total - corner_tensor + corner_val
    return QuadResult(float(value), float(corner_val), float(bound),
                      int(np.prod([len(r.nodes) for r in rules])))


def _tensor_sum(kernel, density, x, rules, m, n, cfg, mask) -> float:
    d = len(rules)
    axes = []
    for r in rules:
        sel = r.corner if mask else slice(None)
        axes.append((r.nodes[sel], r.offsets[sel], r.weights[sel]))
    if any(len(a[0]) == 0 for a in axes):
        return 0.0
    sizes = [len(a[0]) for a in axes]
    rest = int(np.prod(sizes[1:])) if d > 1 else 1
    step = max(1, cfg.chunk // max(rest, 1))
    total = 0.0
    n0 = sizes[0]
    for start in range(0, n0, step):
        stop = min(n0, start + step)
        vals = []
        offs = []
        wts = None
        for a, (nodes, offsets, weights) in enumerate(axes):
            shape = [1] * d
            if a == 0:
                nodes, offsets, weights = nodes[start:stop], offsets[start:stop], weights[start:stop]
            shape[a] = len(nodes)
            vals.append(nodes.reshape(shape))
            offs.append(offsets.reshape(shape))
            w = weights.reshape(shape)
            wts = w if wts is None else wts * w
        Y = _split_slots(vals, m, n)
        D = _split_slots(offs, m, n)
        with np.errstate(divide="ignore", invalid="ignore"):
            integrand = kernel(x, D) * density(Y)
        total += float(np.sum(integrand * wts))
    return total


def _duffy_cell(kernel, density, x, cells, m, n, alpha, cfg, size_kernel):
    """Integral over the corner cell prod_j [x_j, x_j +- eps_j] via a Duffy map."""
    d = len(cells)
    xs = np.tile(x, m)
    origin = []
    span = []
    for j, (lo, hi) in enumerate(cells):
        if abs(lo - xs[j]) <= abs(hi - xs[j]):
            origin.append(lo)
            span.append(hi - lo)
        else:
            origin.append(hi)
            span.append(lo - hi)
    origin = np.array(origin)
    span = np.array(span)
    jac = float(np.prod(np.abs(span)))
    q = cfg.order
    tj, wj = gauss_jacobi01(q, float(alpha))
    gz, gwz = gauss_legendre01(q)
    value = 0.0
    size_total = 0.0
    sup_density = 0.0
    for k in range(d):
        # pyramid where local coordinate k is the largest: u_k = t, u_j = t z_j
        grids = np.meshgrid(tj, *([gz] * (d - 1)), indexing="ij")
        wgrids = np.meshgrid(wj, *([gwz] * (d - 1)), indexing="ij")
        t = grids[0]
        w = wgrids[0].copy()
        for g in wgrids[1:]:
            w = w * g
        local = []
        zi = 1
        for j in range(d):
            if j == k:
                local.append(np.ones_like(t))
            else:
                local.append(grids[zi])
                zi += 1
        steps = [span[j] * t * local[j] for j in range(d)]
        Y = _split_slots([origin[j] + steps[j] for j in range(d)], m, n)
        D = _split_slots([(origin[j] - xs[j]) + steps[j] for j in range(d)], m, n)
        factor = t ** (d - alpha)
        with np.errstate(divide="ignore", invalid="ignore"):
            kv = kernel(x, D) * factor
            dv = density(Y)
        value += jac * float(np.sum(w * kv * dv))
        if size_kernel is not None:
            with np.errstate(divide="ignore", invalid="ignore"):
                sv = size_kernel(x, D) * factor
            size_total += jac * float(np.sum(w * sv))
        if np.size(dv):
            sup_density = max(sup_density, float(np.max(np.abs(dv))))
    return value, size_total * sup_density


# -- ball quadrature (n = 1) -----------------------------------------------------

def interval_rule(a: float, b: float, kinks: Sequence[float], cfg: QuadratureConfig):
    """Gauss rule on [a, b] graded toward kink points (shared with the operators' meshes)."""
    r = axis_rule(a, b, None, kinks, cfg, singular=False)
    return r.nodes, r.weights
