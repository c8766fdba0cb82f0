"""Maximization of the triangle objective along its border.

The feasible set is the triangle T >= 0, sign(z)*Delta >= 0,
T + |Delta| <= m with m = min(tau0, 2pi - tau0).  The maximum of the
distance objective lies on the T = 0 segment or on the hypotenuse
T + |Delta| = m, so the search runs dense grids plus golden-section
refinement on those segments; a full 2-D grid over the triangle is kept as
an optional safety net.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .connection import TWO_PI

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TrianglePoint:
    """Candidate point (T, Delta) of the feasible triangle."""

    T: float
    Delta: float


class SegmentKind(str, Enum):
    TZeroSegment = "TZeroSegment"
    Hypotenuse = "Hypotenuse"
    DeltaZeroSegment = "DeltaZeroSegment"


@dataclass(frozen=True)
class BorderSegment:
    """One border piece of the triangle, parametrized over s in [0, 1]."""

    kind: SegmentKind
    m: float
    sigma: int = 1

    def point(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind is SegmentKind.TZeroSegment:
            return np.zeros_like(s), self.sigma * self.m * s
        if self.kind is SegmentKind.Hypotenuse:
            return self.m * s, self.sigma * self.m * (1.0 - s)
        return self.m * s, np.zeros_like(s)


def _scalar(H, T: float, Delta: float) -> float:
    return float(np.asarray(H(np.asarray(T), np.asarray(Delta)), dtype=float))


def _golden_max(f, a: float, b: float, tol: float) -> tuple:
    """Golden-section maximization of f on [a, b]."""
    h = b - a
    c = b - INVPHI * h
    d = a + INVPHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - INVPHI * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INVPHI * h
            fd = f(d)
    s = 0.5 * (a + b)
    return s, f(s)


def maximize_on_segment(H, seg: BorderSegment, grid_n: int = 512, refine_tol: float = 1e-10):
    """Grid scan plus golden-section refinement of H along one segment.

    Every strict local maximum of the grid values seeds a refinement, since
    the objective need not be unimodal on a segment.  Returns (TrianglePoint,
    value).  A segment with no finite values falls back to its s = 0 endpoint.
    """
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    s_grid = np.linspace(0.0, 1.0, grid_n)
    T, D = seg.point(s_grid)
    vals = np.asarray(H(T, D), dtype=float)
    work = np.where(np.isfinite(vals), vals, -np.inf)
    if not np.any(work > -np.inf):
        T0, D0 = seg.point(0.0)
        return TrianglePoint(float(T0), float(D0)), float(vals[0])

    gi = int(np.argmax(work))
    brackets = [gi]
    for i in range(grid_n):
        if i == gi or work[i] == -np.inf:
            continue
        left_up = i == 0 or work[i] > work[i - 1]
        right_up = i == grid_n - 1 or work[i] > work[i + 1]
        if left_up and right_up:
            brackets.append(i)

    def f(s: float) -> float:
        Ts, Ds = seg.point(s)
        v = _scalar(H, Ts, Ds)
        return v if math.isfinite(v) else -math.inf

    best_s, best_v = float(s_grid[gi]), float(work[gi])
    for i in brackets:
        lo = float(s_grid[max(i - 1, 0)])
        hi = float(s_grid[min(i + 1, grid_n - 1)])
        s_ref, v_ref = _golden_max(f, lo, hi, refine_tol)
        if v_ref > best_v:
            best_s, best_v = s_ref, v_ref
    Tb, Db = seg.point(best_s)
    return TrianglePoint(float(Tb), float(Db)), best_v


def _grid_check(H, z_sign: float, m: float, border_best: float, grid2d_n: int) -> None:
    """Assert no interior grid point beats the border result."""
    t = np.linspace(0.0, m, grid2d_n)
    if z_sign > 0:
        d = np.linspace(0.0, m, grid2d_n)
    elif z_sign < 0:
        d = np.linspace(-m, 0.0, grid2d_n)
    else:
        d = np.linspace(-m, m, grid2d_n)
    T, D = np.meshgrid(t, d, indexing="ij")
    mask = T + np.abs(D) <= m + 1e-15 * m
    V = np.full_like(T, np.nan)
    V[mask] = np.asarray(H(T[mask], D[mask]), dtype=float)
    if not np.any(np.isfinite(V)):
        return
    interior_max = float(np.nanmax(V))

    lip = 0.0
    dt = t[1] - t[0] if grid2d_n > 1 else 1.0
    dd = d[1] - d[0] if grid2d_n > 1 else 1.0
    with np.errstate(invalid="ignore"):
        step_t = np.abs(np.diff(V, axis=0))
        step_d = np.abs(np.diff(V, axis=1))
    if np.any(np.isfinite(step_t)):
        lip = max(lip, float(np.nanmax(step_t)) / dt)
    if np.any(np.isfinite(step_d)):
        lip = max(lip, float(np.nanmax(step_d)) / abs(dd))
    tol = math.hypot(dt, dd) * lip + 1e-9 * (1.0 + abs(border_best))
    if interior_max > border_best + tol:
        raise RuntimeError(
            f"interior grid point {interior_max:.12g} exceeds border maximum "
            f"{border_best:.12g} beyond tolerance {tol:.3g}"
        )


def maximize_triangle(
    H,
    z_sign: float,
    tau0: float,
    grid2d_n: int = 256,
    grid_n: int = 512,
    refine_tol: float = 1e-10,
):
    """Maximum of H over the feasible triangle; returns (TrianglePoint, value).

    Only the T = 0 segment and the hypotenuse can carry the maximum; the
    Delta = 0 segment is scanned anyway as a cheap guard.  Set grid2d_n = 0
    to skip the interior cross-check.
    """
    if not 0.0 <= tau0 < TWO_PI:
        raise ValueError("tau0 must lie in [0, 2pi)")
    m = min(tau0, TWO_PI - tau0)
    if m == 0.0:
        return TrianglePoint(0.0, 0.0), _scalar(H, 0.0, 0.0)

    if z_sign > 0:
        sigmas = (1,)
    elif z_sign < 0:
        sigmas = (-1,)
    else:
        sigmas = (1, -1)
    segments = [BorderSegment(SegmentKind.TZeroSegment, m, s) for s in sigmas]
    segments += [BorderSegment(SegmentKind.Hypotenuse, m, s) for s in sigmas]
    segments.append(BorderSegment(SegmentKind.DeltaZeroSegment, m, 1))

    candidates = [maximize_on_segment(H, seg, grid_n, refine_tol) for seg in segments]
    best_v = max(v for _, v in candidates)
    band = 1e-11 * (1.0 + abs(best_v))
    near = [p for p, v in candidates if v >= best_v - band]
    pick = min(near, key=lambda p: (p.T, abs(p.Delta), p.Delta))

    # clamp onto the exact feasible set
    T = min(max(pick.T, 0.0), m)
    D = pick.Delta
    if z_sign > 0:
        D = max(D, 0.0)
    elif z_sign < 0:
        D = min(D, 0.0)
    if abs(D) > m - T:
        D = math.copysign(m - T, D)
    point = TrianglePoint(T, D)

    if grid2d_n > 0:
        _grid_check(H, z_sign, m, best_v, grid2d_n)
    return point, best_v
