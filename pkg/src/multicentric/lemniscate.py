"""Geometry of the sublevel sets V(p, rho) = {z : |p(z)| <= rho}.

Contours of |p| are extracted by marching squares with linear edge
interpolation on a rectangular grid; connected components of the
sublevel mask come from a flood fill over the same grid.  Distances to
the curve are vertex based, the convention under which the bundled
reference numbers were produced; a point-to-segment refinement is
available behind a flag.

The quantities driving the projection bounds all live here: the gap s
from the curve to the nearest critical point left outside, the basis
bound L(rho), the interpolation-kernel sum over all center/branch
pairs, and the empirical constant C = sum * s.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from contourpy import contour_generator
from scipy import ndimage
from scipy.optimize import minimize_scalar

from .polynomials import MonicPolynomial, SeparationTask, critical_points, lagrange_values, model_polynomial

DEFAULT_RESOLUTION = 1001


def enclosing_radius(p: MonicPolynomial, rho: float) -> float:
    """Radius beyond which |p(z)| > rho is guaranteed.

    Fixed point of r -> (rho + sum |a_k| r^k)^(1/d); for |z| above it,
    |p(z)| >= |z|^d - sum |a_k| |z|^k > rho.
    """
    if rho < 0:
        raise ValueError("level must be positive")
    a = np.abs(p.coeffs)  # a_0 .. a_{d-1}
    d = p.degree
    r = max(1.0, float(np.max(np.abs(p.roots))))
    for _ in range(60):
        pw = r ** np.arange(d)
        r_new = (rho + float(np.dot(a, pw))) ** (1.0 / d)
        if abs(r_new - r) < 1e-12:
            r = r_new
            break
        r = max(r, r_new)
    return 1.02 * r


@dataclass(frozen=True)
class GridSpec:
    """Sampling box and per-axis resolution for the |p| field."""

    box: tuple = (-1.5, 1.5, -1.5, 1.5)  # x_min, x_max, y_min, y_max
    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        x0, x1, y0, y1 = self.box
        if not (x0 < x1 and y0 < y1):
            raise ValueError("degenerate box")
        if self.resolution < 3:
            raise ValueError("resolution must be >= 3")

    @staticmethod
    def fitted(p: MonicPolynomial, rho: float, resolution: int = DEFAULT_RESOLUTION):
        r = enclosing_radius(p, rho)
        return GridSpec(box=(-r, r, -r, r), resolution=resolution)

    def axes(self):
        x0, x1, y0, y1 = self.box
        return (np.linspace(x0, x1, self.resolution),
                np.linspace(y0, y1, self.resolution))

    def field(self, p: MonicPolynomial) -> np.ndarray:
        x, y = self.axes()
        zz = x[None, :] + 1j * y[:, None]
        return np.abs(p(zz))

    def cell_diagonal(self) -> float:
        x0, x1, y0, y1 = self.box
        n = self.resolution - 1
        return float(np.hypot((x1 - x0) / n, (y1 - y0) / n))


def _resolve_grid(p, rho, grid):
    return grid if grid is not None else GridSpec.fitted(p, rho)


def extract_contours(p: MonicPolynomial, rho: float, grid: GridSpec | None = None):
    """Marching-squares polylines of |p(z)| = rho as (M, 2) xy arrays."""
    if rho <= 0:
        raise ValueError("level must be positive")
    grid = _resolve_grid(p, rho, grid)
    x, y = grid.axes()
    F = grid.field(p)
    lines = contour_generator(x=x, y=y, z=F).lines(rho)
    return [np.asarray(seg) for seg in lines if len(seg) >= 3]


@dataclass(frozen=True)
class Component:
    """One connected piece of the sublevel mask."""

    label: int
    root_indices: tuple
    bbox: tuple  # x_min, x_max, y_min, y_max
    cell_count: int
    touches_boundary: bool


def sublevel_components(p: MonicPolynomial, rho: float, grid: GridSpec | None = None):
    """Flood-fill components of |p| <= rho with root membership annotation."""
    grid = _resolve_grid(p, rho, grid)
    x, y = grid.axes()
    F = grid.field(p)
    mask = F <= rho
    labels, n = ndimage.label(mask)
    comps = []
    border = np.zeros_like(mask)
    border[0, :] = border[-1, :] = True
    border[:, 0] = border[:, -1] = True
    for lab in range(1, n + 1):
        sel = labels == lab
        rows, cols = np.nonzero(sel)
        bbox = (float(x[cols.min()]), float(x[cols.max()]),
                float(y[rows.min()]), float(y[rows.max()]))
        members = []
        for j, r in enumerate(p.roots):
            ci = int(np.argmin(np.abs(x - r.real)))
            ri = int(np.argmin(np.abs(y - r.imag)))
            if labels[ri, ci] == lab:
                members.append(j)
        comps.append(Component(
            label=lab,
            root_indices=tuple(members),
            bbox=bbox,
            cell_count=int(sel.sum()),
            touches_boundary=bool((sel & border).any()),
        ))
    return labels, comps


@dataclass(frozen=True)
class LemniscateAnalysis:
    """Bundle of the grid geometry at one level."""

    polynomial: MonicPolynomial
    level: float
    grid: GridSpec
    contours: list = field(repr=False)
    components: list = field(default_factory=list)
    outside_critical: list = field(default_factory=list)
    s: float | None = None

    @property
    def component_count(self):
        return len(self.components)


def analyze(p: MonicPolynomial, rho: float, grid: GridSpec | None = None) -> LemniscateAnalysis:
    grid = _resolve_grid(p, rho, grid)
    contours = extract_contours(p, rho, grid)
    _, comps = sublevel_components(p, rho, grid)
    outside = [zc for zc, _ in critical_points(p) if abs(p(zc)) > rho] if p.degree >= 2 else []
    s = None
    if outside and contours:
        s = min(distance_to_contours(contours, zc) for zc in outside)
    return LemniscateAnalysis(p, float(rho), grid, contours, comps, outside, s)


def distance_to_contours(contours, point, segments: bool = False) -> float:
    """Minimum distance from a point to the extracted curve.

    Vertex based by default; ``segments=True`` measures against each
    polyline segment instead (slightly smaller, grid-independent limit).
    """
    if isinstance(contours, LemniscateAnalysis):
        contours = contours.contours
    if not contours:
        raise ValueError("no contours to measure against")
    px, py = float(np.real(point)), float(np.imag(point))
    best = np.inf
    for seg in contours:
        dx = seg[:, 0] - px
        dy = seg[:, 1] - py
        best = min(best, float(np.min(np.hypot(dx, dy))))
        if segments and len(seg) > 1:
            a = seg[:-1]
            b = seg[1:]
            ab = b - a
            ap = np.array([px, py])[None, :] - a
            denom = np.einsum("ij,ij->i", ab, ab)
            denom[denom == 0] = 1.0
            t = np.clip(np.einsum("ij,ij->i", ap, ab) / denom, 0.0, 1.0)
            proj = a + t[:, None] * ab
            best = min(best, float(np.min(np.hypot(proj[:, 0] - px, proj[:, 1] - py))))
    return best


def separation_gap_s(p: MonicPolynomial, rho: float, grid: GridSpec | None = None,
                     segments: bool = False) -> float:
    """Distance from the level curve to the nearest outside critical point.

    Only critical points z_c with |p(z_c)| > rho count; if every critical
    point sits inside the sublevel set, the gap is undefined and the
    bound machinery downstream must refuse to run.
    """
    outside = [zc for zc, _ in critical_points(p) if abs(p(zc)) > rho]
    if not outside:
        raise ValueError("no critical point outside the sublevel set: s undefined")
    contours = extract_contours(p, rho, grid)
    if not contours:
        raise ValueError("empty contour set at this level")
    return min(distance_to_contours(contours, zc, segments=segments) for zc in outside)


def separates_imaginary_axis(p: MonicPolynomial, rho: float, samples: int = 4001) -> bool:
    """True iff min over real y of |p(iy)| exceeds rho.

    Dense sampling on |y| <= Y with local refinement around the sampled
    minimum; beyond Y the tail bound |p(iy)| >= |y|^d - sum |a_j||y|^j
    already clears the level by construction of Y.
    """
    Y = enclosing_radius(p, rho)
    y = np.linspace(-Y, Y, samples)
    vals = np.abs(p(1j * y))
    i = int(np.argmin(vals))
    lo = y[max(i - 1, 0)]
    hi = y[min(i + 1, samples - 1)]
    res = minimize_scalar(lambda t: abs(p(1j * t)), bounds=(lo, hi), method="bounded")
    return float(min(vals[i], res.fun)) > rho


def avoids_origin(p: MonicPolynomial, rho: float) -> bool:
    return abs(p(0.0)) > rho


def segments_inside(p: MonicPolynomial, rho: float, task: SeparationTask,
                    samples: int = 2001) -> bool:
    """True iff both model segments lie in the sublevel set."""
    for seg in task.sample(samples):
        if np.max(np.abs(p(seg))) > rho:
            return False
    return True


def exactly_two_components(p: MonicPolynomial, rho: float, grid: GridSpec | None = None) -> bool:
    _, comps = sublevel_components(p, rho, grid)
    return len(comps) == 2


def max_eta(d: int, epsilon: float, grid: GridSpec | None = None, hi: float = 0.05,
            tol: float = 1e-4, style: str = "conjugate") -> float:
    """Largest level drop eta with two components and axis separation.

    Bisection on eta in (0, hi]; the predicate is monotone because
    lowering the level only ever splits components further.
    """
    p = model_polynomial(d, epsilon, style=style)
    if grid is None:
        grid = GridSpec.fitted(p, 1.0)

    def ok(eta):
        rho = 1.0 - eta
        return exactly_two_components(p, rho, grid) and separates_imaginary_axis(p, rho)

    lo = 1e-5
    if not ok(lo):
        raise ValueError(f"no feasible eta for degree {d}: separation fails already at {lo}")
    if ok(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def ratio_and_angle(p: MonicPolynomial, rho: float, grid: GridSpec | None = None) -> dict:
    """Height/width data of the right-hand component of the level curve.

    Convention: a is the maximum |Im z| over contour vertices with
    Re z > 0, b is |Re z| at the maximizing vertex, and the opening
    angle is arctan(a/b).  Calibrated on the quadratic family, where the
    stationarity of the implicit curve gives a = rho/2 exactly.
    """
    contours = extract_contours(p, rho, grid)
    verts = np.vstack([seg for seg in contours]) if contours else np.empty((0, 2))
    right = verts[verts[:, 0] > 0]
    if len(right) == 0:
        raise ValueError("no right-half component at this level")
    i = int(np.argmax(np.abs(right[:, 1])))
    a = float(abs(right[i, 1]))
    b = float(abs(right[i, 0]))
    alpha = float(np.arctan2(a, b))
    return {"a": a, "b": b, "ratio": a / b, "alpha_rad": alpha,
            "alpha_deg": float(np.degrees(alpha))}


def sum_abs_delta(p: MonicPolynomial, w: complex) -> float:
    """Sum over branches l and centers k of |delta_l(lambda_k, w)|.

    The branch points zeta_l are the roots of p(lambda) - w; each term is
    |p(lambda_k) - w| / (|p'(zeta_l)| |lambda_k - zeta_l|).  Blows up as w
    approaches a critical value of p, which is exactly the regime the
    separation study probes.
    """
    cw = p.coeffs_desc.copy()
    cw[-1] -= w
    zetas = np.roots(cw)
    dp = p.derivative()
    dp_at = np.polyval(dp, zetas)
    if np.min(np.abs(dp_at)) < 1e-13:
        raise ValueError("w is (numerically) a critical value of p")
    total = 0.0
    for z, pd in zip(zetas, dp_at):
        total += float(np.sum(np.abs(p(p.roots) - w) / (np.abs(pd) * np.abs(p.roots - z))))
    return total


def constant_C(p: MonicPolynomial, rho: float, w: complex | None = None,
               grid: GridSpec | None = None) -> float:
    """Empirical constant C = sum_abs_delta(p, w) * s at the given level.

    The zero-multiplicity convention applies: the critical point left
    outside is simple, so the kernel sum scales like C/s.
    """
    if w is None:
        w = rho
    return sum_abs_delta(p, w) * separation_gap_s(p, rho, grid)


def L_rho(p: MonicPolynomial, rho: float, grid: GridSpec | None = None) -> float:
    """sup of sum_j |delta_j(z)| over the sublevel set.

    Each |delta_j| is subharmonic, so the sup sits on the boundary; the
    maximum over contour vertices realizes it to grid accuracy.
    """
    contours = extract_contours(p, rho, grid)
    if not contours:
        raise ValueError("empty contour set at this level")
    verts = np.vstack(contours)
    z = verts[:, 0] + 1j * verts[:, 1]
    return float(np.max(np.sum(np.abs(lagrange_values(p, z)), axis=0)))


def analysis_report(a: LemniscateAnalysis, with_L: bool = True,
                    with_sum: bool = True) -> dict:
    """JSON-ready summary: level, components, s, L, kernel sum, C."""
    rep = {
        "level": a.level,
        "component_count": a.component_count,
        "contour_count": len(a.contours),
        "components": [
            {"roots": list(c.root_indices), "bbox": list(c.bbox),
             "cells": c.cell_count, "touches_boundary": c.touches_boundary}
            for c in a.components
        ],
        "outside_critical": [[zc.real, zc.imag] for zc in a.outside_critical],
        "s": a.s,
    }
    if with_L:
        rep["L"] = L_rho(a.polynomial, a.level, a.grid) if a.contours else None
    if with_sum:
        try:
            rep["sum_abs_delta"] = sum_abs_delta(a.polynomial, a.level)
        except ValueError:
            rep["sum_abs_delta"] = None
        rep["C"] = (rep["sum_abs_delta"] * a.s
                    if rep["sum_abs_delta"] is not None and a.s is not None else None)
    return rep
