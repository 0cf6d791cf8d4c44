"""(t,p) absolute-continuity moduli for sampled curves and box-counting
Hausdorff content of their images.

The modulus here is a greedy lower bound: candidate intervals are the
dyadic tilings of the sample line, each scored by the worst pair ratio
|f(x)-f(y)|^p / |x-y|^t it contains, ranked and packed into the length
budget. The true sup over all disjoint families is exponential; greedy
packing keeps every decreasing-ladder conclusion valid as a necessary
condition. Content is the single-scale cover cost min_r N(r) (r sqrt(m)/2)^p,
an upper bound for H^p_inf.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from fracsob import _kernels


@dataclass(frozen=True)
class Curve1D:
    """Uniform samples of a curve [0, length] -> R^m, endpoints included."""

    values: np.ndarray
    length: float = 1.0
    name: str = ""

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] < 2:
            raise ValueError("curve needs an (N, m) sample array with N >= 2")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve samples contain non-finite values")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def dx(self) -> float:
        return self.length / (self.n - 1)


def curve_from_csv(path: str | Path, length: float = 1.0) -> Curve1D:
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                continue  # header line
    return Curve1D(np.asarray(rows), length=length, name=str(path))


def _dyadic_candidates(n: int, dx: float, delta: float) -> tuple[np.ndarray, np.ndarray]:
    starts, lengths = [], []
    span = 1
    while span <= n - 1 and span * dx <= delta:
        s = np.arange(0, n - span, span, dtype=np.int64)
        starts.append(s)
        lengths.append(np.full(len(s), span + 1, dtype=np.int64))
        span *= 2
    return np.concatenate(starts), np.concatenate(lengths)


def ac_modulus(curve: Curve1D, t: float, p: float, delta: float) -> float:
    """Greedy packed sum of sup-pair ratios over intervals of total length <= delta."""
    if t < 0 or p <= 0:
        raise ValueError("need t >= 0 and p > 0")
    dx = curve.dx
    if delta < 2 * dx:
        raise ValueError(
            f"delta {delta:g} is below twice the sample spacing {dx:g}; refine the curve"
        )
    starts, lengths = _dyadic_candidates(curve.n, dx, delta)
    ratios = _kernels.interval_sup_ratios(curve.values, dx, t, p, starts, lengths)
    order = np.argsort(-ratios, kind="stable")
    occupied = np.zeros(curve.n - 1, dtype=bool)
    budget = delta * (1.0 + 1e-12)
    total_len = 0.0
    acc = 0.0
    for idx in order:
        if ratios[idx] <= 0.0:
            break
        s = int(starts[idx])
        cells = int(lengths[idx]) - 1
        span = cells * dx
        if total_len + span > budget:
            continue
        if occupied[s : s + cells].any():
            continue
        occupied[s : s + cells] = True
        total_len += span
        acc += float(ratios[idx])
    return acc


def ac_monotone_check(
    curve: Curve1D,
    t: float,
    p: float,
    t_target: float,
    p_target: float,
    deltas: Sequence[float],
) -> dict:
    """Moduli at both exponent pairs along a delta ladder.

    Valid only when (1 + t_target)/(1 + t) <= p_target/p <= 1; outside that
    range decay of the base modulus says nothing about the target one.
    """
    lo = (1.0 + t_target) / (1.0 + t)
    mid = p_target / p
    if mid > 1.0 + 1e-12:
        raise ValueError(f"exponent condition fails: p_target/p = {mid:.4g} > 1")
    if lo > mid + 1e-12:
        raise ValueError(
            f"exponent condition fails: (1+t_target)/(1+t) = {lo:.4g} "
            f"> p_target/p = {mid:.4g}"
        )
    deltas = sorted(deltas, reverse=True)
    base = [ac_modulus(curve, t, p, d) for d in deltas]
    target = [ac_modulus(curve, t_target, p_target, d) for d in deltas]

    def _decreasing(vals: list[float]) -> bool:
        slack = 1e-12 * max(abs(v) for v in vals)
        steps = all(b <= a + slack for a, b in zip(vals, vals[1:]))
        return steps and vals[-1] < vals[0]

    base_dec = _decreasing(base)
    target_dec = _decreasing(target)
    return {
        "deltas": list(deltas),
        "base": base,
        "target": target,
        "base_decreasing": base_dec,
        "target_decreasing": target_dec,
        "ok": (not base_dec) or target_dec,
    }


def _box_count(points: np.ndarray, r: float) -> int:
    cells = np.floor(points / r).astype(np.int64)
    return len(np.unique(cells, axis=0))


def content_ladder(
    points: np.ndarray, p: float, r_ladder: Sequence[float]
) -> list[tuple[float, float]]:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.size == 0:
        raise ValueError("empty point set has no content ladder")
    radii = sorted(r_ladder, reverse=True)
    if len(radii) < 4:
        raise ValueError(f"need at least 4 scales, got {len(radii)}")
    steps = [a / b for a, b in zip(radii, radii[1:])]
    if max(steps) / min(steps) > 1.5:
        raise ValueError("scale ladder is not geometric")
    m = pts.shape[1]
    half_diag = np.sqrt(m) / 2.0
    out = []
    for r in radii:
        cost = _box_count(pts, r) * (r * half_diag) ** p
        out.append((r, float(cost)))
    return out


def hausdorff_content(
    points: np.ndarray, p: float, r_ladder: Sequence[float]
) -> float:
    """min over the scale ladder of N(r) (r sqrt(m)/2)^p; upper bound for H^p_inf."""
    return min(c for _, c in content_ladder(points, p, r_ladder))


def default_r_ladder(points: np.ndarray, count: int = 6) -> list[float]:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    diam = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    floor_r = max(float(np.median(gaps)), 1e-12)
    # diam/4 boxes are few enough that count lumpiness beats the r^p trend
    top = max(diam / 8.0, 4 * floor_r)
    ladder = []
    r = top
    while len(ladder) < count and r >= floor_r * 0.999:
        ladder.append(r)
        r /= 2.0
    while len(ladder) < 4:
        ladder.append(ladder[-1] / 2.0)
    return ladder


def curve_image_dimension(
    curve: Curve1D, s: float, p: float, r_ladder: Sequence[float] | None = None
) -> dict:
    """Content ladder of the image at exponent 1/s + 0.1; decreasing ladders
    are consistent with Hausdorff dimension <= 1/s."""
    if s * p <= 1.0:
        raise ValueError(
            f"out of theorem scope: s*p = {s * p:g} <= 1 (such a curve may fill a square)"
        )
    pts = curve.values
    if r_ladder is None:
        r_ladder = default_r_ladder(pts)
    exponent = 1.0 / s + 0.1
    ladder = content_ladder(pts, exponent, r_ladder)
    costs = [c for _, c in ladder]
    slack = 1e-12 * max(costs)
    decreasing = all(b <= a + slack for a, b in zip(costs, costs[1:])) and costs[-1] < costs[0]
    return {
        "s": s,
        "p": p,
        "exponent": exponent,
        "ladder": ladder,
        "content": min(costs),
        "decreasing": decreasing,
    }


def hilbert_curve(order: int) -> Curve1D:
    """Hilbert iterate on the unit square, 4^order cell-center samples."""
    if not 1 <= order <= 12:
        raise ValueError("order must be between 1 and 12")
    n = 1 << order
    npts = n * n
    t = np.arange(npts, dtype=np.int64)
    x = np.zeros(npts, dtype=np.int64)
    y = np.zeros(npts, dtype=np.int64)
    s = 1
    while s < n:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        flip = (ry == 0) & (rx == 1)
        fx = np.where(flip, s - 1 - x, x)
        fy = np.where(flip, s - 1 - y, y)
        swap = ry == 0
        x = np.where(swap, fy, fx)
        y = np.where(swap, fx, fy)
        x = x + s * rx
        y = y + s * ry
        t //= 4
        s *= 2
    pts = (np.stack([x, y], axis=1).astype(np.float64) + 0.5) / n
    return Curve1D(pts, length=1.0, name=f"hilbert-{order}")


def power_cusp_curve(n: int = 4096, alpha: float = 0.25) -> Curve1D:
    """Graph of |x - 1/2|^alpha; lies in W^{s,2} exactly for s < alpha + 1/2."""
    x = np.linspace(0.0, 1.0, n)
    return Curve1D(
        np.stack([x, np.abs(x - 0.5) ** alpha], axis=1),
        name=f"cusp-{alpha:g}",
    )


def smooth_arc_curve(n: int = 4096) -> Curve1D:
    x = np.linspace(0.0, 1.0, n)
    return Curve1D(
        np.stack([x, 0.25 * np.sin(2 * np.pi * x)], axis=1), name="smooth-arc"
    )
