"""Pointwise and distributional Jacobians, winding degree, image area.

The distributional pairing follows the mollified-determinant construction:
pair det(grad f_eps) against a fixed test function along an epsilon ladder
and report the tail value with a convergence flag. Degree is computed by
summing angle increments of the mapped contour around the target.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fracsob.field import (
    Grid2D,
    ScalarField,
    VectorField,
    gradient,
)
from fracsob.mollify import default_eps_ladder, mollify_vector


@dataclass(frozen=True)
class DistPairing:
    """Ladder of pairing values with the tail taken as the limit."""

    ladder: tuple[tuple[float, float], ...]

    @property
    def limit(self) -> float:
        return self.ladder[-1][1]

    @property
    def converged(self) -> bool:
        tail = np.array([v for _, v in self.ladder[-3:]])
        scale = float(np.abs(tail).max())
        if scale < 1e-9:
            return True
        return float(tail.max() - tail.min()) / scale < 1e-2

    def to_dict(self) -> dict:
        return {
            "ladder": [[e, v] for e, v in self.ladder],
            "limit": self.limit,
            "converged": self.converged,
        }


def _gradients(f: VectorField, scheme: str) -> list[VectorField]:
    return [gradient(c, scheme=scheme) for c in f.components]


def pointwise_jacobian(f: VectorField, scheme: str = "auto") -> ScalarField:
    """det of the 2x2 gradient at each node.

    scheme 'auto' uses attached analytic derivatives per component when
    available and spectral differentiation otherwise; maps with a linear
    part carry it exactly through the affine attachment either way.
    """
    if f.m != 2:
        raise ValueError(f"jacobian needs a 2-component map, got {f.m}")
    g1, g2 = _gradients(f, scheme)
    det = g1[0].values * g2[1].values - g1[1].values * g2[0].values
    return ScalarField(f.grid, det)


def curl(f: VectorField, scheme: str = "auto") -> ScalarField:
    if f.m != 2:
        raise ValueError(f"curl needs a 2-component field, got {f.m}")
    g1, g2 = _gradients(f, scheme)
    return ScalarField(f.grid, g2[0].values - g1[1].values)


def _check_support_inside(phi: ScalarField, window: np.ndarray) -> None:
    supp = np.abs(phi.values) > 0
    outside = ~window
    # dilate the complement by one ring; support meeting it touches the boundary
    touch = outside.copy()
    for ax in (0, 1):
        for sh in (1, -1):
            touch |= np.roll(outside, sh, axis=ax)
    if np.any(supp & touch):
        raise ValueError("test function support touches the window boundary")


def dist_jacobian(
    f: VectorField,
    phi: ScalarField,
    ladder: Sequence[float] | None = None,
    grad_scheme: str = "spectral",
    window: np.ndarray | None = None,
) -> DistPairing:
    """Distributional Jacobian pairing: integral of det(grad f_eps) * phi per eps."""
    g = f.grid
    if ladder is None:
        ladder = default_eps_ladder(g)
    if window is not None:
        _check_support_inside(phi, window)
    pts = []
    for eps in ladder:
        fe = mollify_vector(f, eps)
        det = pointwise_jacobian(fe, scheme=grad_scheme)
        pts.append((eps, float((det.values * phi.values).sum()) * g.cell_area))
    return DistPairing(tuple(pts))


def shear_perturb(f: VectorField, delta: float,
                  center: tuple[float, float] | None = None) -> VectorField:
    """Add delta times the rotation field (-(x2 - c2), x1 - c1) in window coordinates.

    The linear part rides on the affine attachment, so gradients stay exact
    away from the seam opposite the window center.
    """
    if f.m != 2:
        raise ValueError("shear perturbation applies to planar maps")
    g = f.grid
    c = (g.length / 2, g.length / 2) if center is None else center
    offsets = [(0.0, -delta), (delta, 0.0)]
    comps = []
    for comp, (a1, a2) in zip(f.components, offsets):
        base = comp.affine if comp.affine is not None else (0.0, 0.0)
        if comp.affine is not None and comp.affine_center != c:
            raise ValueError("affine centers disagree between map and shear")
        grad_exprs = None
        if comp.grad_exprs is not None:
            g1, g2 = comp.grad_exprs
            grad_exprs = (
                (lambda X1, X2, _g=g1, _a=a1: np.asarray(_g(X1, X2)) + _a),
                (lambda X1, X2, _g=g2, _a=a2: np.asarray(_g(X1, X2)) + _a),
            )
        comps.append(
            ScalarField(
                g,
                comp.values,
                name=comp.name,
                affine=(base[0] + a1, base[1] + a2),
                affine_center=c,
                grad_exprs=grad_exprs,
            )
        )
    return VectorField(tuple(comps))


def map_values(f: VectorField) -> np.ndarray:
    """Mapped point per node, affine parts included, shape (n1, n2, 2)."""
    return np.stack([c.total_values() for c in f.components], axis=-1)


def winding_numbers(points: np.ndarray, targets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Summed angle increments of a closed polyline around each target.

    points: (M, 2) mapped contour. targets: (Q, 2). Returns (turns, residues)
    where turns is the raw angle sum over 2 pi.
    """
    pts = np.asarray(points, dtype=np.float64)
    tg = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    rel = pts[None, :, :] - tg[:, None, :]
    ang = np.arctan2(rel[..., 1], rel[..., 0])
    inc = np.diff(np.concatenate([ang, ang[:, :1]], axis=1), axis=1)
    inc = (inc + np.pi) % (2 * np.pi) - np.pi
    turns = inc.sum(axis=1) / (2 * np.pi)
    residue = np.abs(turns - np.round(turns))
    return turns, residue


def degree(f: VectorField, contour: np.ndarray, y: Sequence[float]) -> int:
    """Topological degree of f on the region bounded by the closed contour.

    contour: (M, 2) domain points tracing the boundary once, positively.
    The target must stay clear of the image of the contour; too close a pass
    (under ten image sample spacings) or a large rounding residue raises.
    """
    mapped = _interp_map(f, contour)
    y = np.asarray(y, dtype=np.float64)
    gaps = np.linalg.norm(np.diff(np.vstack([mapped, mapped[:1]]), axis=0), axis=1)
    min_dist = float(np.linalg.norm(mapped - y, axis=1).min())
    if min_dist <= 10 * float(gaps.max()):
        raise ValueError(
            f"degree ill-defined: target within {min_dist:.3g} of the image contour"
        )
    turns, residue = winding_numbers(mapped, y[None, :])
    if residue[0] >= 0.1:
        raise ValueError(f"degree ill-defined: rounding residue {residue[0]:.3f}")
    return int(np.round(turns[0]))


def _interp_map(f: VectorField, pts: np.ndarray) -> np.ndarray:
    """Bilinear interpolation of the map at arbitrary domain points."""
    g = f.grid
    vals = map_values(f)
    x = np.asarray(pts, dtype=np.float64)
    u = x[:, 0] / g.h1
    v = x[:, 1] / g.h2
    i0 = np.floor(u).astype(int) % g.n1
    j0 = np.floor(v).astype(int) % g.n2
    fu = (u - np.floor(u))[:, None]
    fv = (v - np.floor(v))[:, None]
    i1 = (i0 + 1) % g.n1
    j1 = (j0 + 1) % g.n2
    out = (
        vals[i0, j0] * (1 - fu) * (1 - fv)
        + vals[i1, j0] * fu * (1 - fv)
        + vals[i0, j1] * (1 - fu) * fv
        + vals[i1, j1] * fu * fv
    )
    return out


def rect_contour(grid: Grid2D, half_width: float, center: tuple[float, float] | None = None,
                 samples_per_side: int | None = None) -> np.ndarray:
    """Closed positively oriented boundary polyline of the centered square window."""
    L = grid.length
    c = (L / 2, L / 2) if center is None else center
    w = half_width * L
    m = samples_per_side if samples_per_side is not None else 2 * grid.n1
    t = np.linspace(0.0, 1.0, m, endpoint=False)
    lo1, hi1 = c[0] - w, c[0] + w
    lo2, hi2 = c[1] - w, c[1] + w
    bottom = np.column_stack([lo1 + 2 * w * t, np.full(m, lo2)])
    right = np.column_stack([np.full(m, hi1), lo2 + 2 * w * t])
    top = np.column_stack([hi1 - 2 * w * t, np.full(m, hi2)])
    left = np.column_stack([np.full(m, lo1), hi2 - 2 * w * t])
    return np.vstack([bottom, right, top, left])


def circle_contour(grid: Grid2D, radius: float, center: tuple[float, float] | None = None,
                   samples: int | None = None) -> np.ndarray:
    L = grid.length
    c = (L / 2, L / 2) if center is None else center
    m = samples if samples is not None else 4 * grid.n1
    t = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
    return np.column_stack([c[0] + radius * np.cos(t), c[1] + radius * np.sin(t)])


def degree_formula_residual(
    f: VectorField,
    contour: np.ndarray,
    region: np.ndarray,
    test_expr,
    target_grid: int = 256,
    ladder: Sequence[float] | None = None,
) -> dict:
    """Compare integral of g(y) deg(f; y) dy against the Jacobian pairing with g(f).

    test_expr is a callable g(y1, y2) supported inside the image of the
    region interior. The left side integrates over a uniform target grid
    covering the image; the right side is the direct quadrature of
    det(grad f) g(f) over the region.
    """
    g = f.grid
    mapped_contour = _interp_map(f, contour)
    vals = map_values(f)
    lo = mapped_contour.min(axis=0)
    hi = mapped_contour.max(axis=0)
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    q = target_grid
    y1 = np.linspace(lo[0], hi[0], q, endpoint=False) + (hi[0] - lo[0]) / (2 * q)
    y2 = np.linspace(lo[1], hi[1], q, endpoint=False) + (hi[1] - lo[1]) / (2 * q)
    Y1, Y2 = np.meshgrid(y1, y2, indexing="ij")
    gy = np.asarray(test_expr(Y1, Y2), dtype=np.float64)
    cell = (y1[1] - y1[0]) * (y2[1] - y2[0])
    live = np.abs(gy) > 0
    targets = np.column_stack([Y1[live], Y2[live]])
    lhs = 0.0
    if len(targets):
        turns, residue = winding_numbers(mapped_contour, targets)
        if float(residue.max()) >= 0.1:
            raise ValueError("degree ill-defined on the target grid")
        lhs = float((gy[live] * np.round(turns)).sum()) * cell
    det = pointwise_jacobian(f)
    comp = np.asarray(test_expr(vals[..., 0], vals[..., 1]), dtype=np.float64)
    rhs = float((det.values * comp)[region].sum()) * g.cell_area
    return {"lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs)}


def image_measure(
    f: VectorField,
    region: np.ndarray,
    resolutions: Sequence[int],
) -> list[tuple[float, float]]:
    """Rasterized image area of the region at matching resolutions.

    Each grid cell of the (decimated) map contributes the bounding box of
    its corner images on a target raster with the same spacing as the source
    rung; the covered area is the count of occupied raster cells times the
    raster cell area. Returns (h, area) pairs.
    """
    g = f.grid
    vals = map_values(f)
    out = []
    for n_k in resolutions:
        if g.n1 % n_k or g.n2 % n_k:
            raise ValueError(f"resolution {n_k} does not divide the base grid")
        step = g.n1 // n_k
        sub = vals[::step, ::step]
        reg = region[::step, ::step]
        h_k = g.length / n_k
        c00 = sub
        c10 = np.roll(sub, -1, axis=0)
        c01 = np.roll(sub, -1, axis=1)
        c11 = np.roll(np.roll(sub, -1, axis=0), -1, axis=1)
        cell_ok = reg & np.roll(reg, -1, axis=0) & np.roll(reg, -1, axis=1) \
            & np.roll(np.roll(reg, -1, axis=0), -1, axis=1)
        corners = np.stack([c00, c10, c01, c11])
        lo = corners.min(axis=0)[cell_ok]
        hi = corners.max(axis=0)[cell_ok]
        if len(lo) == 0:
            out.append((h_k, 0.0))
            continue
        origin = lo.min(axis=0)
        lo_idx = np.floor((lo - origin) / h_k).astype(int)
        hi_idx = np.floor((hi - origin) / h_k).astype(int)
        shape = hi_idx.max(axis=0) + 1
        raster = np.zeros(shape, dtype=bool)
        for (a1, a2), (b1, b2) in zip(lo_idx, hi_idx):
            raster[a1 : b1 + 1, a2 : b2 + 1] = True
        out.append((h_k, float(raster.sum()) * h_k * h_k))
    return out
