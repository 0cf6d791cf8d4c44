"""Mollification by the standard compactly supported bump.

The kernel is the sampled bump exp(-1/(1-|x/eps|^2)) renormalized to exact
unit discrete mass per epsilon, so constants and means are preserved to
roundoff. Convolution is circular via fft2; the transform of each kernel is
cached. Supports are expected to sit at least 2 eps away from the wrap seam,
which the standard centered window guarantees for ladder epsilons up to L/8.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from fracsob.field import (
    FracIndex,
    Grid2D,
    ScalarField,
    VectorField,
    gradient,
    lp_norm,
    lp_norm_vector,
    second_derivatives,
)
from fracsob.sobolev import RateFit, fit_rate


class MollifierKernel:
    """Sampled bump kernel at scale eps with cached transform."""

    def __init__(self, grid: Grid2D, eps: float):
        h = max(grid.h1, grid.h2)
        if eps < 2 * h:
            raise ValueError(
                f"kernel under-resolved: eps = {eps:.4g} below two spacings ({2 * h:.4g})"
            )
        if eps >= grid.length / 4:
            raise ValueError(
                f"eps = {eps:.4g} too large for the torus (needs eps < L/4 = {grid.length / 4:.4g})"
            )
        self.grid = grid
        self.eps = float(eps)
        d1 = grid.wrap_delta(np.arange(grid.n1) * grid.h1)[:, None]
        d2 = grid.wrap_delta(np.arange(grid.n2) * grid.h2)[None, :]
        r2 = (d1 * d1 + d2 * d2) / eps**2
        vals = np.zeros_like(r2)
        inside = r2 < 1.0
        vals[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
        mass = vals.sum() * grid.cell_area
        self.values = vals / mass
        self.transform = np.fft.fft2(self.values) * grid.cell_area

    @property
    def mass(self) -> float:
        return float(self.values.sum() * self.grid.cell_area)


@lru_cache(maxsize=64)
def _kernel_cached(n1: int, n2: int, length: float, eps: float) -> MollifierKernel:
    return MollifierKernel(Grid2D(n1, n2, length), eps)


def kernel_for(grid: Grid2D, eps: float) -> MollifierKernel:
    return _kernel_cached(grid.n1, grid.n2, grid.length, float(eps))


def mollify(f: ScalarField, eps: float) -> ScalarField:
    """Convolve with the eps bump. The affine part passes through exactly
    (the kernel is even with unit mass)."""
    ker = kernel_for(f.grid, eps)
    vals = np.fft.ifft2(np.fft.fft2(f.values) * ker.transform).real
    return ScalarField(f.grid, vals, name=f.name, affine=f.affine,
                       affine_center=f.affine_center)


def mollify_vector(v: VectorField, eps: float) -> VectorField:
    return VectorField(tuple(mollify(c, eps) for c in v.components))


def default_eps_ladder(grid: Grid2D, count: int = 5, start_factor: float = 0.125) -> list[float]:
    """Dyadic ladder from start_factor * L down, stopping above two spacings."""
    L = grid.length
    out = []
    e = start_factor * L
    for _ in range(count):
        if e < 2 * max(grid.h1, grid.h2):
            break
        out.append(e)
        e /= 2
    return out


def _derivative_norm(f: ScalarField, k: int, p: float, region: np.ndarray | None) -> float:
    if k == 0:
        return lp_norm(f, p, region=region)
    if k == 1:
        gr = gradient(f)
        return lp_norm_vector(gr.components, p, region=region)
    if k == 2:
        d11, d12, d22 = second_derivatives(f)
        g = f.grid
        comps = [ScalarField(g, d11), ScalarField(g, d12), ScalarField(g, d22)]
        return lp_norm_vector(comps, p, region=region, weights=[1.0, 2.0, 1.0])
    raise ValueError(f"derivative order k = {k} not supported (use 0, 1, 2)")


def mollify_rates(
    f: ScalarField,
    idx: FracIndex,
    k: int,
    ladder: Sequence[float] | None = None,
    region: np.ndarray | None = None,
) -> RateFit:
    """Rate fit of the mollification ladder.

    k = 0 fits ||f_eps - f||_p, k >= 1 fits the L^p norm of the k-th
    derivative tensor of f_eps (Frobenius magnitude, symmetric multiplicity).
    """
    if ladder is None:
        ladder = default_eps_ladder(f.grid)
    pts = []
    for eps in ladder:
        fe = mollify(f, eps)
        if k == 0:
            diff = ScalarField(f.grid, fe.values - f.values)
            pts.append((eps, lp_norm(diff, idx.p, region=region)))
        else:
            pts.append((eps, _derivative_norm(fe, k, idx.p, region)))
    return fit_rate(pts)


def commutator(f: ScalarField, g: ScalarField, eps: float, k: int = 0):
    """The product commutator f_eps g_eps - (f g)_eps, or its k-th derivative.

    Returns a ScalarField for k = 0, the gradient pair for k = 1, and the
    packed Hessian (d11, d12, d22) for k = 2.
    """
    fe = mollify(f, eps)
    ge = mollify(g, eps)
    prod = ScalarField(f.grid, f.values * g.values)
    pe = mollify(prod, eps)
    comm = ScalarField(f.grid, fe.values * ge.values - pe.values)
    if k == 0:
        return comm
    if k == 1:
        return gradient(comm)
    if k == 2:
        d11, d12, d22 = second_derivatives(comm)
        gr = f.grid
        return VectorField((ScalarField(gr, d11), ScalarField(gr, d12), ScalarField(gr, d22)))
    raise ValueError(f"derivative order k = {k} not supported (use 0, 1, 2)")


def commutator_rates(
    f: ScalarField,
    g: ScalarField,
    idx: FracIndex,
    k: int,
    ladder: Sequence[float] | None = None,
    region: np.ndarray | None = None,
) -> RateFit:
    """Rate fit of ||D^k (f_eps g_eps - (fg)_eps)||_{p/2} over the ladder."""
    if idx.p <= 2.0:
        raise ValueError("commutator rates need p > 2 so that p/2 is a norm exponent")
    if ladder is None:
        ladder = default_eps_ladder(f.grid)
    half = idx.p / 2
    pts = []
    for eps in ladder:
        c = commutator(f, g, eps, k)
        if k == 0:
            pts.append((eps, lp_norm(c, half, region=region)))
        elif k == 1:
            pts.append((eps, lp_norm_vector(c.components, half, region=region)))
        else:
            pts.append((eps, lp_norm_vector(c.components, half, region=region,
                                            weights=[1.0, 2.0, 1.0])))
    return fit_rate(pts)


def delta_correlation(f: ScalarField, g: ScalarField, eps: float) -> np.ndarray:
    """The kernel-weighted shift correlation of f and g.

    Expands to (fg)_eps - f g_eps - g f_eps + f g, which is what the pointwise
    commutator identity subtracts from (f_eps - f)(g_eps - g).
    """
    fe = mollify(f, eps).values
    ge = mollify(g, eps).values
    pe = mollify(ScalarField(f.grid, f.values * g.values), eps).values
    return pe - f.values * ge - g.values * fe + f.values * g.values


def vmo_modulus(
    f: ScalarField,
    idx: FracIndex,
    node: tuple[int, int],
    ladder: Sequence[float] | None = None,
    window: np.ndarray | None = None,
) -> RateFit:
    """Ball means of |f - f_eps(x)|^(2/s) around a node, one value per eps.

    Requires the critical pairing s p = 2 so the exponent matches the
    integrability. When a window is given every ball must stay inside it.
    """
    if not idx.critical:
        raise ValueError(f"vmo modulus needs s*p = 2, got s*p = {idx.sp:.4g}")
    g = f.grid
    if ladder is None:
        ladder = default_eps_ladder(g)
    i0, j0 = node
    x0 = np.array([i0 * g.h1, j0 * g.h2])
    X1, X2 = g.mesh()
    d1 = g.wrap_delta(X1 - x0[0])
    d2 = g.wrap_delta(X2 - x0[1])
    dist2 = d1 * d1 + d2 * d2
    q = 2.0 / idx.s
    pts = []
    for eps in ladder:
        ball = dist2 <= eps * eps
        if window is not None and np.any(ball & ~window):
            raise ValueError(f"ball of radius {eps:.4g} at node {node} leaves the window")
        center_val = float(mollify(f, eps).values[i0, j0])
        osc = np.abs(f.values[ball] - center_val) ** q
        pts.append((eps, float(osc.mean())))
    return fit_rate(pts)


def vmo_modulus_vector(
    v: VectorField,
    idx: FracIndex,
    node: tuple[int, int],
    ladder: Sequence[float] | None = None,
    window: np.ndarray | None = None,
) -> RateFit:
    """Euclidean-norm variant of vmo_modulus for vector-valued fields.

    A homogeneous degree-zero singularity (x/|x| at the origin) gives a
    scale-invariant ladder: the values neither grow nor decay, which is the
    signature separating it from fields continuous at the node.
    """
    if not idx.critical:
        raise ValueError(f"vmo modulus needs s*p = 2, got s*p = {idx.sp:.4g}")
    g = v.grid
    if ladder is None:
        ladder = default_eps_ladder(g)
    i0, j0 = node
    X1, X2 = g.mesh()
    d1 = g.wrap_delta(X1 - i0 * g.h1)
    d2 = g.wrap_delta(X2 - j0 * g.h2)
    dist2 = d1 * d1 + d2 * d2
    q = 2.0 / idx.s
    pts = []
    for eps in ladder:
        ball = dist2 <= eps * eps
        if window is not None and np.any(ball & ~window):
            raise ValueError(f"ball of radius {eps:.4g} at node {node} leaves the window")
        centers = [float(mollify(c, eps).values[i0, j0]) for c in v.components]
        osc = np.zeros(int(ball.sum()))
        for c, cv in zip(v.components, centers):
            osc += (c.values[ball] - cv) ** 2
        pts.append((eps, float((osc ** (q / 2)).mean())))
    return fit_rate(pts)
