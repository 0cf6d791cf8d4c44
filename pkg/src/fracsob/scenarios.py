"""Scenario library and suite runners.

Every scenario is built from closed forms: values and first derivatives are
attached analytically, so isometry defects measure the construction rather
than finite differencing. The cone keeps its apex at a grid node; the ruled
surface is a tangent developable of a helix, sampled through its unrolling
(an exact isometry wherever the cutoff plateau holds).

run_scenario(name, config) produces a JSON-ready report per scenario;
run_suite() walks every section and scenario and is the registry both the
`suite` command and the test suite consume.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from fracsob.abscont import (
    ac_modulus,
    ac_monotone_check,
    curve_image_dimension,
    hausdorff_content,
    hilbert_curve,
    power_cusp_curve,
    smooth_arc_curve,
)
from fracsob.field import (
    FracIndex,
    Grid2D,
    ScalarField,
    VectorField,
    disk_mask,
    gradient,
    lp_norm,
    sample,
    spectral_gradient_values,
    window_mask,
)
from fracsob.geometry import (
    RULED,
    SINGULAR,
    Immersion,
    christoffel,
    codazzi_residual,
    coherence_residual,
    constancy_agreement,
    detect_developability,
    normal_and_II,
    pullback_metric,
    recover_potential,
)
from fracsob.hodge import (
    decompose_one_form,
    det_estimate_check,
    difference_ladder,
    jacobian_identity_check,
)
from fracsob.jacobian import (
    _interp_map,
    degree_formula_residual,
    dist_jacobian,
    image_measure,
    pointwise_jacobian,
    rect_contour,
    shear_perturb,
    winding_numbers,
)
from fracsob.mollify import (
    commutator_rates,
    default_eps_ladder,
    mollify_rates,
    vmo_modulus_vector,
)
from fracsob.sobolev import _std_bump, fit_rate
from fracsob.spectral import divergence, grad_inv_laplacian, inv_laplacian, riesz

DEFAULT_CONFIG_PATH = Path(__file__).with_name("default_config.json")


def load_config(path: str | Path | None = None) -> dict:
    with open(DEFAULT_CONFIG_PATH) as fh:
        cfg = json.load(fh)
    if path is not None:
        with open(path) as fh:
            user = json.load(fh)
        _merge(cfg, user)
    return cfg


def _merge(base: dict, over: dict) -> None:
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(base.get(k), dict):
            _merge(base[k], v)
        else:
            base[k] = v


# ---------------------------------------------------------------------------
# cutoffs

_TINY = 1e-300


def _bump_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.clip(t, 0.0, 1.0)
    a = np.where(t > 0, np.exp(-1.0 / np.maximum(t, _TINY)), 0.0)
    b = np.where(t < 1, np.exp(-1.0 / np.maximum(1.0 - t, _TINY)), 0.0)
    return a / (a + b)


def _bump_step_d(t: np.ndarray) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)
    inner = (t > 0) & (t < 1)
    ts = np.where(inner, t, 0.5)
    a = np.exp(-1.0 / ts)
    b = np.exp(-1.0 / (1.0 - ts))
    da = a / ts**2
    db = -b / (1.0 - ts) ** 2
    out = (da * b - a * db) / (a + b) ** 2
    return np.where(inner, out, 0.0)


def radial_falloff(r: np.ndarray, r0: float, r1: float) -> tuple[np.ndarray, np.ndarray]:
    """chi == 1 for r <= r0, 0 for r >= r1, with its radial derivative."""
    tau = (r1 - r) / (r1 - r0)
    chi = _bump_step(tau)
    dchi = -_bump_step_d(tau) / (r1 - r0)
    return chi, dchi


def _window_polar(grid: Grid2D, center: tuple[float, float]):
    X1, X2 = grid.mesh()
    w1 = grid.wrap_delta(X1 - center[0])
    w2 = grid.wrap_delta(X2 - center[1])
    r = np.hypot(w1, w2)
    safe = np.where(r > 0, r, 1.0)
    ct = np.where(r > 0, w1 / safe, 1.0)  # apex convention: one-sided along +x1
    st = np.where(r > 0, w2 / safe, 0.0)
    return w1, w2, r, ct, st


# ---------------------------------------------------------------------------
# immersions

def _const_grad(c1: float, c2: float):
    # analytic closures own the whole derivative, affine slope included
    return (lambda x1, x2: np.full_like(x1, c1), lambda x1, x2: np.full_like(x1, c2))


def plane_immersion(n: int = 256, length: float = 1.0) -> Immersion:
    g = Grid2D(n, n, length)
    zeros = np.zeros((n, n))
    u = VectorField((
        ScalarField(g, zeros, affine=(1.0, 0.0), grad_exprs=_const_grad(1.0, 0.0)),
        ScalarField(g, zeros, affine=(0.0, 1.0), grad_exprs=_const_grad(0.0, 1.0)),
        ScalarField(g, zeros, grad_exprs=_const_grad(0.0, 0.0)),
    ))
    return Immersion(u, np.ones((n, n), dtype=bool), name="plane")


def cylinder_immersion(n: int = 256) -> Immersion:
    length = 2 * np.pi
    g = Grid2D(n, n, length)
    X1, _ = g.mesh()
    u = VectorField((
        ScalarField(g, np.cos(X1), grad_exprs=(
            lambda x1, x2: -np.sin(x1), lambda x1, x2: np.zeros_like(x1))),
        ScalarField(g, np.sin(X1), grad_exprs=(
            lambda x1, x2: np.cos(x1), lambda x1, x2: np.zeros_like(x1))),
        ScalarField(g, np.zeros((n, n)), affine=(0.0, 1.0), grad_exprs=_const_grad(0.0, 1.0)),
    ))
    return Immersion(u, np.ones((n, n), dtype=bool), name="cylinder")


def graph_immersion(n: int = 256, length: float = 1.0, amplitude: float = 0.02) -> Immersion:
    """Sinusoidal graph (x1, x2, A sin k x1 cos k x2).

    Not an isometry: its metric and Christoffel symbols are genuinely curved,
    which makes it the honest test bed for identities that must hold for any
    smooth immersion rather than just flat ones.  The normal never degenerates
    (third cross component is 1), so every node stays trusted.
    """
    g = Grid2D(n, n, length)
    X1, X2 = g.mesh()
    k = 2 * np.pi / length
    A = amplitude
    u = VectorField((
        ScalarField(g, np.zeros((n, n)), affine=(1.0, 0.0), grad_exprs=_const_grad(1.0, 0.0)),
        ScalarField(g, np.zeros((n, n)), affine=(0.0, 1.0), grad_exprs=_const_grad(0.0, 1.0)),
        ScalarField(g, A * np.sin(k * X1) * np.cos(k * X2), grad_exprs=(
            lambda x1, x2: A * k * np.cos(k * x1) * np.cos(k * x2),
            lambda x1, x2: -A * k * np.sin(k * x1) * np.sin(k * x2))),
    ))
    return Immersion(u, np.ones((n, n), dtype=bool), name="graph")


def cone_immersion(
    n: int = 256, length: float = 1.0, plateau: float = 0.30, support: float = 0.42
) -> Immersion:
    """Windowed flat cone u = chi (r/2 cos 2t, r/2 sin 2t, sqrt(3)/2 r).

    The doubled angle keeps the slant circle single-valued on the chart; the
    apex sits at the center node and its attached gradient takes the limit
    along the +x1 ray, which is still an exact linear isometry there.
    """
    g = Grid2D(n, n, length)
    c = (length / 2, length / 2)
    r0, r1 = plateau * length, support * length
    s3 = np.sqrt(3.0) / 2.0

    def pieces(x1, x2):
        w1 = g.wrap_delta(x1 - c[0])
        w2 = g.wrap_delta(x2 - c[1])
        r = np.hypot(w1, w2)
        safe = np.where(r > 0, r, 1.0)
        ct = np.where(r > 0, w1 / safe, 1.0)
        st = np.where(r > 0, w2 / safe, 0.0)
        chi, dchi = radial_falloff(r, r0, r1)
        c2t = ct * ct - st * st
        s2t = 2.0 * ct * st
        return r, ct, st, c2t, s2t, chi, dchi

    def val1(x1, x2):
        r, _, _, c2t, _, chi, _ = pieces(x1, x2)
        return chi * (r / 2) * c2t

    def val2(x1, x2):
        r, _, _, _, s2t, chi, _ = pieces(x1, x2)
        return chi * (r / 2) * s2t

    def val3(x1, x2):
        r, *_, chi, _ = pieces(x1, x2)
        return s3 * chi * r

    # grad(chi r/2 cos2t) = (chi' r/2 + chi/2) cos2t e_r - chi sin2t e_t
    def g1_1(x1, x2):
        r, ct, st, c2t, s2t, chi, dchi = pieces(x1, x2)
        return (dchi * r / 2 + chi / 2) * c2t * ct - chi * s2t * (-st)

    def g1_2(x1, x2):
        r, ct, st, c2t, s2t, chi, dchi = pieces(x1, x2)
        return (dchi * r / 2 + chi / 2) * c2t * st - chi * s2t * ct

    def g2_1(x1, x2):
        r, ct, st, c2t, s2t, chi, dchi = pieces(x1, x2)
        return (dchi * r / 2 + chi / 2) * s2t * ct + chi * c2t * (-st)

    def g2_2(x1, x2):
        r, ct, st, c2t, s2t, chi, dchi = pieces(x1, x2)
        return (dchi * r / 2 + chi / 2) * s2t * st + chi * c2t * ct

    def g3_1(x1, x2):
        r, ct, st, _, _, chi, dchi = pieces(x1, x2)
        return s3 * (dchi * r + chi) * ct

    def g3_2(x1, x2):
        r, ct, st, _, _, chi, dchi = pieces(x1, x2)
        return s3 * (dchi * r + chi) * st

    u = VectorField((
        sample(val1, g, grad=(g1_1, g1_2)),
        sample(val2, g, grad=(g2_1, g2_2)),
        sample(val3, g, grad=(g3_1, g3_2)),
    ))
    X1, X2 = g.mesh()
    r = np.hypot(g.wrap_delta(X1 - c[0]), g.wrap_delta(X2 - c[1]))
    mask = r <= r0
    return Immersion(u, mask, name="cone")


def cone_masks(grid: Grid2D, annulus: tuple[float, float] = (0.125, 0.175),
               apex_exclusion_cells: int = 4) -> dict:
    """Evaluation masks for the cone ladders.

    The annulus is fixed across rungs (clean second-order region); the lp
    mask excludes only a few mollifier widths around the apex so the
    homogeneous profile dominates the norm.
    """
    L = grid.length
    c = (L / 2, L / 2)
    X1, X2 = grid.mesh()
    r = np.hypot(grid.wrap_delta(X1 - c[0]), grid.wrap_delta(X2 - c[1]))
    return {
        "r": r,
        "annulus": (r >= annulus[0] * L) & (r <= annulus[1] * L),
        "plateau": r <= 0.29 * L,
        "apex_exclusion_cells": apex_exclusion_cells,
    }


def ruled_immersion(
    n: int = 256,
    length: float = 1.0,
    helix_a: float = 0.08,
    helix_b: float = 0.04,
    circle_center: tuple[float, float] = (0.08, 0.08),
    plateau: float = 0.36,
    support: float = 0.46,
) -> Immersion:
    """Tangent developable of a helix, sampled through its unrolling.

    The chart point x lies on the tangent line touching the unrolled circle
    (radius c^2/a around circle_center) at angle theta; the map sends it to
    gamma(c^2/a theta) + v T where gamma is the arclength helix and v the
    distance along the tangent. kappa R = 1 makes du = T (Tbar . dx) - N
    (e_r . dx), an exact isometry; rulings run along Tbar(theta).
    """
    g = Grid2D(n, n, length)
    a = helix_a * length
    b = helix_b * length
    c2 = a * a + b * b
    c = np.sqrt(c2)
    Rb = c2 / a
    wc = (length / 2, length / 2)
    q = (circle_center[0] * length, circle_center[1] * length)
    r0, r1 = plateau * length, support * length

    def frame(x1, x2):
        w1 = g.wrap_delta(x1 - wc[0])
        w2 = g.wrap_delta(x2 - wc[1])
        rwin = np.hypot(w1, w2)
        chi, dchi = radial_falloff(rwin, r0, r1)
        p1 = w1 - (q[0] - wc[0])
        p2 = w2 - (q[1] - wc[1])
        v = np.sqrt(np.maximum(p1 * p1 + p2 * p2 - Rb * Rb, 0.0))
        alpha = np.arctan2(p2, p1)
        theta = alpha - np.arctan2(v, Rb)
        w = Rb * theta / c
        T = (-(a / c) * np.sin(w), (a / c) * np.cos(w), b / c * np.ones_like(w))
        gam = (a * np.cos(w), a * np.sin(w), b * w)
        um = tuple(gam[m] + v * T[m] for m in range(3))
        safe = np.where(rwin > 0, rwin, 1.0)
        er_w = (np.where(rwin > 0, w1 / safe, 0.0), np.where(rwin > 0, w2 / safe, 0.0))
        tbar = (-np.sin(theta), np.cos(theta))
        nbar = (-np.cos(theta), -np.sin(theta))
        N = (-np.cos(w), -np.sin(w), np.zeros_like(w))
        return chi, dchi, um, T, N, tbar, nbar, er_w, theta

    def val(m):
        def f(x1, x2):
            chi, _, um, *_ = frame(x1, x2)
            return chi * um[m]
        return f

    def grad(m, k):
        def f(x1, x2):
            chi, dchi, um, T, N, tbar, nbar, er_w, _ = frame(x1, x2)
            du = T[m] * tbar[k] + N[m] * nbar[k]
            return chi * du + um[m] * dchi * er_w[k]
        return f

    u = VectorField(tuple(
        sample(val(m), g, grad=(grad(m, 0), grad(m, 1))) for m in range(3)
    ))
    X1, X2 = g.mesh()
    rwin = np.hypot(g.wrap_delta(X1 - wc[0]), g.wrap_delta(X2 - wc[1]))
    return Immersion(u, rwin <= r0, name="ruled")


def ruled_direction_angles(imm: Immersion) -> np.ndarray:
    """Analytic ruling angles in [0, pi) for the tangent developable chart."""
    if imm.name != "ruled":
        raise ValueError("direction oracle only exists for the ruled scenario")
    # reconstruct theta from the same chart the builder used
    g = imm.grid
    length = g.length
    a, b = 0.08 * length, 0.04 * length
    c2 = a * a + b * b
    Rb = c2 / a
    wc = (length / 2, length / 2)
    q = (0.08 * length, 0.08 * length)
    X1, X2 = g.mesh()
    w1 = g.wrap_delta(X1 - wc[0])
    w2 = g.wrap_delta(X2 - wc[1])
    p1 = w1 - (q[0] - wc[0])
    p2 = w2 - (q[1] - wc[1])
    v = np.sqrt(np.maximum(p1 * p1 + p2 * p2 - Rb * Rb, 0.0))
    theta = np.arctan2(p2, p1) - np.arctan2(v, Rb)
    return np.mod(theta + np.pi / 2, np.pi)


# ---------------------------------------------------------------------------
# planar maps

def identity_map(grid: Grid2D) -> VectorField:
    zeros = np.zeros((grid.n1, grid.n2))
    return VectorField((
        ScalarField(grid, zeros, affine=(1.0, 0.0), grad_exprs=_const_grad(1.0, 0.0)),
        ScalarField(grid, zeros, affine=(0.0, 1.0), grad_exprs=_const_grad(0.0, 1.0)),
    ))


def rank1_map(grid: Grid2D, amplitude: float = 0.3) -> VectorField:
    k = 2 * np.pi / grid.length
    A = amplitude
    return VectorField((
        sample(lambda x1, x2: A * np.sin(k * x1), grid, grad=(
            lambda x1, x2: A * k * np.cos(k * x1), lambda x1, x2: np.zeros_like(x1))),
        sample(lambda x1, x2: np.zeros_like(x1), grid, grad=(
            lambda x1, x2: np.zeros_like(x1), lambda x1, x2: np.zeros_like(x1))),
    ))


def rank1_triple(grid: Grid2D, amplitude: float = 0.3) -> tuple[ScalarField, VectorField, VectorField]:
    """(lambda, f, g) with grad f = lambda grad g, everything x1-dependent.

    g = (-A cos(k x1)/k, 0) so g' = A sin(k x1); lambda = 0.8 + 0.3 sin(k x1
    + 1/2); f integrates lambda g' in closed form, its secular part riding on
    the affine slot.
    """
    k = 2 * np.pi / grid.length
    A = amplitude

    lam = sample(lambda x1, x2: 0.8 + 0.3 * np.sin(k * x1 + 0.5), grid)
    gmap = VectorField((
        sample(lambda x1, x2: -A * np.cos(k * x1) / k, grid, grad=(
            lambda x1, x2: A * np.sin(k * x1), lambda x1, x2: np.zeros_like(x1))),
        sample(lambda x1, x2: np.zeros_like(x1), grid, grad=(
            lambda x1, x2: np.zeros_like(x1), lambda x1, x2: np.zeros_like(x1))),
    ))
    f1 = sample(
        lambda x1, x2: -0.8 * A * np.cos(k * x1) / k - 0.15 * A * np.sin(2 * k * x1 + 0.5) / (2 * k),
        grid,
        grad=(
            lambda x1, x2: 0.8 * A * np.sin(k * x1) + 0.15 * A * (np.cos(0.5) - np.cos(2 * k * x1 + 0.5)),
            lambda x1, x2: np.zeros_like(x1),
        ),
    )
    f1 = ScalarField(grid, f1.values, affine=(0.15 * A * np.cos(0.5), 0.0),
                     grad_exprs=f1.grad_exprs)
    f2 = sample(lambda x1, x2: np.zeros_like(x1), grid, grad=(
        lambda x1, x2: np.zeros_like(x1), lambda x1, x2: np.zeros_like(x1)))
    return lam, VectorField((f1, f2)), gmap


def perturbed_identity_map(grid: Grid2D, eta: float = 0.05) -> VectorField:
    k = 2 * np.pi / grid.length
    q1 = lambda x1, x2: np.sin(k * x1) * np.cos(2 * k * x2 + 0.3)
    q2 = lambda x1, x2: np.cos(2 * k * x1 + 0.7) * np.sin(k * x2)
    X1, X2 = grid.mesh()
    f1 = ScalarField(grid, eta * q1(X1, X2), affine=(1.0, 0.0), grad_exprs=(
        lambda x1, x2: 1.0 + eta * k * np.cos(k * x1) * np.cos(2 * k * x2 + 0.3),
        lambda x1, x2: -2 * eta * k * np.sin(k * x1) * np.sin(2 * k * x2 + 0.3),
    ))
    f2 = ScalarField(grid, eta * q2(X1, X2), affine=(0.0, 1.0), grad_exprs=(
        lambda x1, x2: -2 * eta * k * np.sin(2 * k * x1 + 0.7) * np.sin(k * x2),
        lambda x1, x2: 1.0 + eta * k * np.cos(2 * k * x1 + 0.7) * np.cos(k * x2),
    ))
    return VectorField((f1, f2))


# ---------------------------------------------------------------------------
# rate corpus

def _supersampled(grid: Grid2D, expr: Callable, factor: int = 4) -> np.ndarray:
    fine = Grid2D(grid.n1 * factor, grid.n2 * factor, grid.length)
    Xf1, Xf2 = fine.mesh()
    vals = expr(Xf1, Xf2)
    return vals.reshape(grid.n1, factor, grid.n2, factor).mean(axis=(1, 3))


def cusp_field(grid: Grid2D, cutoff: tuple[float, float] = (0.15, 0.22),
               supersample: int = 4) -> ScalarField:
    """|x - c|^{1/3} under a radial cutoff, cell-averaged on a finer mesh.

    Cell averaging keeps the quadrature of the cusp honest at the coarse
    nodes nearest the singularity.
    """
    c = (grid.length / 2, grid.length / 2)
    r0, r1 = cutoff[0] * grid.length, cutoff[1] * grid.length

    def expr(x1, x2):
        r = np.hypot(grid.wrap_delta(x1 - c[0]), grid.wrap_delta(x2 - c[1]))
        chi, _ = radial_falloff(r, r0, r1)
        return chi * r ** (1.0 / 3.0)

    return ScalarField(grid, _supersampled(grid, expr, supersample), name="cusp")


def cone_gradient_fields(grid: Grid2D, cutoff: tuple[float, float] = (0.30, 0.42)) -> VectorField:
    """Gradient of the windowed cone height chi sqrt(3)/2 r, a bounded field
    whose direction jumps at the center."""
    c = (grid.length / 2, grid.length / 2)
    r0, r1 = cutoff[0] * grid.length, cutoff[1] * grid.length
    s3 = np.sqrt(3.0) / 2.0
    X1, X2 = grid.mesh()
    _, _, r, ct, st = _window_polar(grid, c)
    chi, dchi = radial_falloff(r, r0, r1)
    rad = s3 * (dchi * r + chi)
    return VectorField((
        ScalarField(grid, rad * ct, name="cone-grad-1"),
        ScalarField(grid, rad * st, name="cone-grad-2"),
    ))


def corpus_fields(grid: Grid2D) -> dict:
    """The frozen rate corpus with per-field evaluation regions."""
    cg = cone_gradient_fields(grid)
    return {
        "cusp": (cusp_field(grid), disk_mask(grid, 0.13 * grid.length)),
        "cone-grad-1": (cg[0], window_mask(grid, 0.25)),
        "cone-grad-2": (cg[1], window_mask(grid, 0.25)),
    }


# ---------------------------------------------------------------------------
# check plumbing

SCENARIO_NAMES = (
    "plane", "cylinder", "cone", "ruled",
    "rank1-map", "perturbed-identity", "hilbert",
)


def _record(checks: list, cid: str, value, require: str, passed) -> None:
    checks.append({"id": cid, "value": value, "require": require, "passed": bool(passed)})


def _time_record(timing: dict, cid: str, seconds: float, budget: float) -> None:
    timing.setdefault("checks", []).append({
        "id": cid, "seconds": seconds, "require": f"< {budget:g} s",
        "passed": bool(seconds < budget),
    })


def _angle_gap(a: np.ndarray, b) -> np.ndarray:
    """Distance between undirected angles, in radians within [0, pi/2]."""
    return np.abs(np.mod(a - b + np.pi / 2, np.pi) - np.pi / 2)


def _metric_deviation(met) -> np.ndarray:
    return np.sqrt((met.g11 - 1.0) ** 2 + 2.0 * met.g12**2 + (met.g22 - 1.0) ** 2)


def _band_limited_field(grid: Grid2D, seed: int, modes: int = 40) -> ScalarField:
    """Random real field with spectrum inside the resolved quarter band."""
    n1, n2 = grid.n1, grid.n2
    rng = np.random.default_rng(seed)
    spec = np.zeros((n1, n2), dtype=complex)
    for _ in range(modes):
        a = int(rng.integers(-n1 // 4, n1 // 4))
        b = int(rng.integers(-n2 // 4, n2 // 4))
        if a == 0 and b == 0:
            continue
        c = rng.normal() + 1j * rng.normal()
        spec[a % n1, b % n2] += c
        spec[(-a) % n1, (-b) % n2] += np.conj(c)
    vals = np.fft.ifft2(spec).real
    vals -= vals.mean()
    peak = np.abs(vals).max()
    if peak > 0:
        vals /= peak
    return ScalarField(grid, vals)


def _scaled_map(v: VectorField, c: float) -> VectorField:
    comps = []
    for comp in v.components:
        affine = None if comp.affine is None else (c * comp.affine[0], c * comp.affine[1])
        grads = None
        if comp.grad_exprs is not None:
            g1, g2 = comp.grad_exprs
            grads = (
                lambda x1, x2, _g=g1: c * np.asarray(_g(x1, x2)),
                lambda x1, x2, _g=g2: c * np.asarray(_g(x1, x2)),
            )
        comps.append(ScalarField(
            v.grid, c * comp.values, name=comp.name, affine=affine,
            affine_center=comp.affine_center, grad_exprs=grads,
        ))
    return VectorField(tuple(comps))


# ---------------------------------------------------------------------------
# scenario runners

def _run_plane(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    imm = plane_immersion(cfg["scenarios"]["plane"]["n"])
    checks: list = []
    res = imm.isometry_residual()
    _record(checks, "plane/isometry-residual", res,
            f"< {tol['isometry_residual']:g}", res < tol["isometry_residual"])
    cls = detect_developability(imm)
    cc = cls.counts()
    _record(checks, "plane/all-flat", cc, "flat == total",
            cc["flat"] == cc["total"] and cc["total"] > 0)
    eps = default_eps_ladder(imm.grid)[-1]
    cod = codazzi_residual(imm, eps)
    _record(checks, "plane/codazzi-corrected", cod["corrected_max"],
            f"< {tol['codazzi_corrected']:g}",
            cod["corrected_max"] < tol["codazzi_corrected"])
    return {
        "scenario": "plane",
        "params": cfg["scenarios"]["plane"],
        "checks": checks,
        "data": {"classification": cc, "codazzi": cod},
        "_classification": cls,
    }


def _run_cylinder(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    sc = cfg["scenarios"]["cylinder"]
    imm = cylinder_immersion(sc["n"])
    g = imm.grid
    ladder = default_eps_ladder(g, count=cfg["ladders"]["eps_count"],
                                start_factor=cfg["ladders"]["eps_start_factor"])
    checks: list = []

    res = imm.isometry_residual()
    _record(checks, "cylinder/isometry-residual", res,
            f"< {tol['isometry_residual']:g}", res < tol["isometry_residual"])

    c0, l32 = [], []
    for eps in ladder:
        met = pullback_metric(imm, eps)
        dev = _metric_deviation(met)
        c0.append((eps, float(dev[met.mask].max())))
        l32.append((eps, float((dev[met.mask] ** 1.5).sum() * g.cell_area) ** (2 / 3)))
    fit = fit_rate(l32)
    _record(checks, "cylinder/metric-c0-final", c0[-1][1],
            f"< {tol['metric_c0_final']:g}", c0[-1][1] < tol["metric_c0_final"])
    _record(checks, "cylinder/metric-l32-slope", fit.slope,
            f">= {tol['metric_slope']:.4f}", fit.slope >= tol["metric_slope"])

    eps_fine = ladder[-1]
    normal, form = normal_and_II(imm, eps_fine)
    unit_err = float(np.abs(np.sqrt(sum(c.values**2 for c in normal.components)) - 1.0)[form.mask].max())
    _record(checks, "cylinder/normal-unit", unit_err,
            f"< {tol['normal_unit']:g}", unit_err < tol["normal_unit"])
    ii11, ii12, ii22 = form.ii
    det_ii = float(np.abs(ii11 * ii22 - ii12 * ii12)[form.mask].max())
    _record(checks, "cylinder/det-ii", det_ii, "< 1e-06", det_ii < 1e-6)

    cod = codazzi_residual(imm, eps_fine)
    _record(checks, "cylinder/codazzi-corrected", cod["corrected_max"],
            f"< {tol['codazzi_corrected']:g}",
            cod["corrected_max"] < tol["codazzi_corrected"])

    cls = detect_developability(imm)
    cc = cls.counts()
    frac = cc["ruled"] / max(cc["total"], 1)
    _record(checks, "cylinder/ruled-fraction", frac,
            f">= {tol['ruled_fraction']:g}", frac >= tol["ruled_fraction"])
    ruled_nodes = (cls.labels == RULED)
    axis_err_deg = float(np.rad2deg(_angle_gap(cls.theta[ruled_nodes], np.pi / 2)).max()) \
        if ruled_nodes.any() else float("nan")
    _record(checks, "cylinder/axis-angle", axis_err_deg,
            f"<= {tol['axis_angle_deg']:g} deg",
            ruled_nodes.any() and axis_err_deg <= tol["axis_angle_deg"])

    # recovered potential against every component map: shared rulings
    f_rec = recover_potential(form)
    region = window_mask(g, 0.25)
    cls_f = detect_developability(f_rec, region=region)
    agreements = []
    coherence = {}
    X1, X2 = g.mesh()
    phi = ScalarField(g, _std_bump(X1, X2, g, (g.length / 2, g.length / 2), 0.35 * g.length))
    for m in range(3):
        gr = gradient(imm.u.components[m], scheme="auto")
        gm = VectorField((gr[0], gr[1]))
        cls_m = detect_developability(gm, region=region)
        agreements.append(constancy_agreement(cls_f, cls_m))
        if m < 2:
            lam = normal[m]
            lhs, rhs = jacobian_identity_check(
                lam, gm, f_rec, phi,
                constraint_tol=tol["coherence_constraint_tol"])
            final = max(abs(lhs.limit), abs(rhs.limit))
            coherence[f"m{m + 1}"] = {"lhs": lhs.to_dict(), "rhs": rhs.to_dict()}
            _record(checks, f"cylinder/coherence-final-m{m + 1}", final,
                    f"< {tol['identity_coherence_final']:g}",
                    final < tol["identity_coherence_final"])
    agree = min(agreements)
    _record(checks, "cylinder/constancy-agreement", agree,
            f">= {tol['agreement_min']:g}", agree >= tol["agreement_min"])

    return {
        "scenario": "cylinder",
        "params": sc,
        "checks": checks,
        "data": {
            "metric_c0": c0, "metric_l32": fit.to_dict(),
            "codazzi": cod, "classification": cc,
            "axis_angle_deg": axis_err_deg,
            "agreements": agreements, "coherence": coherence,
        },
        "_classification": cls,
    }


def _run_cone(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    sc = cfg["scenarios"]["cone"]
    imm = cone_immersion(sc["n"], plateau=sc["plateau"], support=sc["support"])
    g = imm.grid
    masks = cone_masks(g, annulus=tuple(sc["annulus"]),
                       apex_exclusion_cells=sc["apex_box_cells"])
    annulus = masks["annulus"]
    plateau = masks["plateau"]
    r = masks["r"]
    band = (r >= 4 * g.h1) & (r <= sc["annulus"][1] * g.length)
    ladder = default_eps_ladder(g, count=cfg["ladders"]["eps_count"],
                                start_factor=cfg["ladders"]["eps_start_factor"])
    checks: list = []

    res = imm.isometry_residual()
    _record(checks, "cone/isometry-residual", res,
            f"< {tol['isometry_residual']:g}", res < tol["isometry_residual"])

    c0, l32, gam_pts, ii_pts, raw_pts, corr_pts = [], [], [], [], [], []
    for eps in ladder:
        met = pullback_metric(imm, eps)
        dev = _metric_deviation(met)
        m_ann = met.mask & annulus
        m_band = met.mask & band
        c0.append((eps, float(dev[m_ann].max())))
        l32.append((eps, float((dev[m_band] ** 1.5).sum() * g.cell_area) ** (2 / 3)))
        gam = christoffel(met).christoffel
        gam_mag = np.sqrt(sum(c**2 for c in gam))
        m_pl = met.mask & plateau
        gam_pts.append((eps, float((gam_mag[m_pl] ** 1.5).sum() * g.cell_area) ** (2 / 3)))
        _, form = normal_and_II(imm, eps)
        ii_mag = np.sqrt(sum(c**2 for c in form.ii))
        m_ii = form.mask & plateau
        ii_pts.append((eps, float((ii_mag[m_ii] ** 3).sum() * g.cell_area) ** (1 / 3)))
        cod = codazzi_residual(imm, eps, r=1.0, region=annulus)
        raw_pts.append((eps, cod["raw_max"]))
        corr_pts.append((eps, cod["corrected_max"]))

    fit_l32 = fit_rate(l32)
    fit_gam = fit_rate(gam_pts)
    fit_ii = fit_rate(ii_pts)
    _record(checks, "cone/metric-c0-final", c0[-1][1],
            f"< {tol['metric_c0_final']:g}", c0[-1][1] < tol["metric_c0_final"])
    _record(checks, "cone/metric-l32-slope", fit_l32.slope,
            f">= {tol['metric_slope']:.4f}", fit_l32.slope >= tol["metric_slope"])
    _record(checks, "cone/christoffel-slope", fit_gam.slope,
            f">= {tol['christoffel_slope']:.4f}", fit_gam.slope >= tol["christoffel_slope"])
    _record(checks, "cone/ii-slope", fit_ii.slope,
            f">= {tol['ii_slope']:.4f}", fit_ii.slope >= tol["ii_slope"])
    raw_vals = [v for _, v in raw_pts]
    raw_dec = all(b < a for a, b in zip(raw_vals, raw_vals[1:]))
    _record(checks, "cone/codazzi-raw-decreasing", raw_vals,
            "strictly decreasing", raw_dec)
    _record(checks, "cone/codazzi-raw-final", raw_vals[-1],
            f"< {tol['codazzi_raw_final']:g}", raw_vals[-1] < tol["codazzi_raw_final"])

    t_atom = time.perf_counter()
    chi, _ = radial_falloff(r, sc["atom_phi"][0] * g.length, sc["atom_phi"][1] * g.length)
    phi = ScalarField(g, chi, name="apex-bump")
    grad_u3 = gradient(imm.u.components[2], scheme="auto")
    pairing = dist_jacobian(VectorField((grad_u3[0], grad_u3[1])), phi, ladder=ladder)
    atom_ref = 0.75 * np.pi
    atom_rel = abs(pairing.limit - atom_ref) / atom_ref
    t_atom = time.perf_counter() - t_atom
    _record(checks, "cone/atom-relative-error", atom_rel,
            f"< {tol['atom_rel']:g}", atom_rel < tol["atom_rel"] and pairing.converged)

    cls = detect_developability(imm)
    cc = cls.counts()
    n1, n2 = g.n1, g.n2
    box = sc["apex_box_cells"]
    ii_idx, jj_idx = np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij")
    apex_box = (np.abs(ii_idx - n1 // 2) <= box) & (np.abs(jj_idx - n2 // 2) <= box)
    singular = cls.labels == SINGULAR
    n_sing = int(singular.sum())
    inside = int((singular & apex_box).sum())
    _record(checks, "cone/singular-cluster", {"total": n_sing, "in_apex_box": inside},
            f"<= {tol['singular_cluster_max']} nodes, all at the apex",
            n_sing <= tol["singular_cluster_max"] and inside == n_sing)
    ruled_nodes = (cls.labels == RULED) & ~apex_box
    w1, w2, _, _, _ = _window_polar(g, (g.length / 2, g.length / 2))
    radial = np.mod(np.arctan2(w2, w1), np.pi)
    rad_err_deg = float(np.rad2deg(_angle_gap(cls.theta[ruled_nodes], radial[ruled_nodes])).max()) \
        if ruled_nodes.any() else float("nan")
    _record(checks, "cone/radial-ruling-angle", rad_err_deg,
            f"<= {tol['radial_angle_deg']:g} deg",
            ruled_nodes.any() and rad_err_deg <= tol["radial_angle_deg"])

    # bounded direction-jump field: oscillation around the apex does not decay
    vmo = vmo_modulus_vector(cone_gradient_fields(g),
                             FracIndex(cfg["indices"]["s"], cfg["indices"]["p"]),
                             (n1 // 2, n2 // 2), ladder=ladder)
    coh = {f"m{m}": [(eps, coherence_residual(imm, eps, m)) for eps in ladder]
           for m in (1, 2, 3)}

    return {
        "scenario": "cone",
        "params": sc,
        "checks": checks,
        "data": {
            "metric_c0": c0, "metric_l32": fit_l32.to_dict(),
            "christoffel": fit_gam.to_dict(), "ii": fit_ii.to_dict(),
            "codazzi_raw": raw_pts, "codazzi_corrected": corr_pts,
            "atom": pairing.to_dict(), "atom_reference": atom_ref,
            "classification": cc, "radial_angle_deg": rad_err_deg,
            "vmo_modulus": vmo.to_dict(), "coherence_residual": coh,
        },
        "timing": {"atom_seconds": t_atom},
        "_classification": cls,
    }


def _run_ruled(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    sc = cfg["scenarios"]["ruled"]
    imm = ruled_immersion(sc["n"], helix_a=sc["helix_a"], helix_b=sc["helix_b"],
                          circle_center=tuple(sc["circle_center"]),
                          plateau=sc["plateau"], support=sc["support"])
    checks: list = []
    res = imm.isometry_residual()
    _record(checks, "ruled/isometry-residual", res,
            f"< {tol['isometry_residual']:g}", res < tol["isometry_residual"])
    cls = detect_developability(imm)
    cc = cls.counts()
    frac = cc["ruled"] / max(cc["total"], 1)
    _record(checks, "ruled/ruled-fraction", frac,
            f">= {tol['ruled_fraction']:g}", frac >= tol["ruled_fraction"])
    ruled_nodes = cls.labels == RULED
    ref = ruled_direction_angles(imm)
    ang_err_deg = float(np.rad2deg(_angle_gap(cls.theta[ruled_nodes], ref[ruled_nodes])).max()) \
        if ruled_nodes.any() else float("nan")
    _record(checks, "ruled/ruling-angle", ang_err_deg,
            f"<= {tol['radial_angle_deg']:g} deg",
            ruled_nodes.any() and ang_err_deg <= tol["radial_angle_deg"])
    eps = default_eps_ladder(imm.grid)[-1]
    cod = codazzi_residual(imm, eps, region=imm.mask)
    return {
        "scenario": "ruled",
        "params": sc,
        "checks": checks,
        "data": {"classification": cc, "ruling_angle_deg": ang_err_deg, "codazzi": cod},
        "_classification": cls,
    }


def _run_rank1(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    sc = cfg["scenarios"]["rank1-map"]
    g = Grid2D(sc["n"], sc["n"], cfg["grid"]["length"])
    checks: list = []
    fmap = rank1_map(g, amplitude=sc["amplitude"])

    for delta in sc["deltas"]:
        fd = shear_perturb(fmap, delta)
        det = pointwise_jacobian(fd, scheme="auto")
        err = float(np.abs(det.values - delta**2).max())
        _record(checks, f"rank1-map/jacobian-delta-{delta:g}", err,
                f"< {tol['delta_sq_abs']:g}", err < tol["delta_sq_abs"])

    X1, X2 = g.mesh()
    c = (g.length / 2, g.length / 2)
    phi = ScalarField(g, _std_bump(X1, X2, g, c, 0.35 * g.length))

    gsmooth = perturbed_identity_map(g, eta=0.05)
    cval = sc["const_lambda"]
    lam_const = ScalarField(g, np.full((g.n1, g.n2), cval))
    lhs, rhs = jacobian_identity_check(lam_const, _scaled_map(gsmooth, cval), gsmooth, phi)
    const_gap = abs(lhs.limit - rhs.limit)
    _record(checks, "rank1-map/const-lambda-identity", const_gap,
            f"< {tol['identity_const_lambda']:g}",
            const_gap < tol["identity_const_lambda"])

    lam, fpot, gpot = rank1_triple(g, amplitude=sc["amplitude"])
    lhs1, rhs1 = jacobian_identity_check(lam, fpot, gpot, phi)
    triple_max = max(abs(lhs1.limit), abs(rhs1.limit))
    _record(checks, "rank1-map/constructed-triple", triple_max,
            f"< {tol['identity_rank1']:g}", triple_max < tol["identity_rank1"])

    half = sc["area_window"]
    win = (np.abs(g.wrap_delta(X1 - c[0])) < half * g.length) \
        & (np.abs(g.wrap_delta(X2 - c[1])) < half * g.length)
    ladder = image_measure(fmap, win, sc["area_resolutions"])
    areas = [a for _, a in ladder]
    ratios = [a / h for h, a in ladder]
    prop_h = max(ratios) / min(ratios) <= tol["covered_area_factor"] \
        and all(b < a for a, b in zip(areas, areas[1:]))
    _record(checks, "rank1-map/covered-area", {"ladder": ladder, "area_per_h": ratios},
            f"decreasing, area/h within {tol['covered_area_factor']:g}x", prop_h)

    control = image_measure(identity_map(g), win, sc["area_resolutions"])
    win_area = (2 * half * g.length) ** 2
    ctrl_rel = max(abs(a - win_area) / win_area for _, a in control)
    _record(checks, "rank1-map/identity-area-control", ctrl_rel,
            f"<= {tol['identity_area_rel']:g} relative", ctrl_rel <= tol["identity_area_rel"])

    return {
        "scenario": "rank1-map",
        "params": sc,
        "checks": checks,
        "data": {
            "const_lambda": {"lhs": lhs.to_dict(), "rhs": rhs.to_dict()},
            "triple": {"lhs": lhs1.to_dict(), "rhs": rhs1.to_dict()},
            "covered_area": ladder, "identity_control": control,
        },
    }


def _run_perturbed_identity(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    sc = cfg["scenarios"]["perturbed-identity"]
    g = Grid2D(sc["n"], sc["n"], cfg["grid"]["length"])
    checks: list = []
    fmap = perturbed_identity_map(g, eta=sc["eta"])
    contour = rect_contour(g, sc["contour_half_width"])
    region = window_mask(g, sc["contour_half_width"])
    rad = sc["test_bump_radius"]

    def test_expr(y1, y2):
        r2 = (y1**2 + y2**2) / rad**2
        out = np.zeros_like(r2)
        inside = r2 < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
        return out

    rep = degree_formula_residual(fmap, contour, region, test_expr)
    _record(checks, "perturbed-identity/degree-residual", rep["residual"],
            f"< {tol['degree_residual']:g}", rep["residual"] < tol["degree_residual"])

    rng = np.random.default_rng(cfg["seeds"]["degree_targets"])
    box = sc["target_box"]
    targets = rng.uniform(-box, box, size=(sc["targets"], 2))
    turns, residue = winding_numbers(_interp_map(fmap, contour), targets)
    degs = np.round(turns).astype(int)
    ok = bool((degs >= 1).all() and float(residue.max()) < 0.1)
    _record(checks, "perturbed-identity/degree-positivity", degs.tolist(),
            ">= 1 at every sampled interior target", ok)

    return {
        "scenario": "perturbed-identity",
        "params": sc,
        "checks": checks,
        "data": {"formula": rep, "degrees": degs.tolist()},
    }


def _run_hilbert(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    sc = cfg["scenarios"]["hilbert"]
    checks: list = []

    cusp = power_cusp_curve(sc["curve_n"], alpha=sc["cusp_alpha"])
    t, p = sc["modulus_t"], sc["modulus_p"]
    deltas = sc["modulus_deltas"]
    base = [ac_modulus(cusp, t, p, d) for d in deltas]
    dec = all(b < a for a, b in zip(base, base[1:]))
    _record(checks, "hilbert/cusp-modulus-decreasing", list(zip(deltas, base)),
            "strictly decreasing in delta", dec)
    mono = ac_monotone_check(cusp, t, p, 0.0, p / (1.0 + t), deltas=deltas)
    _record(checks, "hilbert/cusp-modulus-embedded", mono,
            "both exponent ladders decreasing", mono["ok"])

    contents = {}
    floor_ok = True
    for order in sc["orders"]:
        curve = hilbert_curve(order)
        r_ladder = [2.0 ** (-j) for j in range(1, order + 1)]
        if len(r_ladder) < 4:
            r_ladder += [r_ladder[-1] / 2.0]
        c = hausdorff_content(curve.values, 2.0, r_ladder)
        contents[order] = c
        floor_ok = floor_ok and c >= tol["content_floor"]
    _record(checks, "hilbert/content-floor", contents,
            f">= {tol['content_floor']:g} at exponent 2", floor_ok)

    smooth = smooth_arc_curve(sc["curve_n"])
    dim = curve_image_dimension(smooth, sc["smooth_s"], 2.0)
    _record(checks, "hilbert/smooth-content-decreasing",
            {"exponent": dim["exponent"], "ladder": dim["ladder"]},
            "content ladder decreasing", dim["decreasing"])

    return {
        "scenario": "hilbert",
        "params": sc,
        "checks": checks,
        "data": {"cusp_modulus": list(zip(deltas, base)), "monotone": mono,
                 "hilbert_content": contents, "smooth": dim},
    }


_RUNNERS: dict[str, Callable[[dict], dict]] = {
    "plane": _run_plane,
    "cylinder": _run_cylinder,
    "cone": _run_cone,
    "ruled": _run_ruled,
    "rank1-map": _run_rank1,
    "perturbed-identity": _run_perturbed_identity,
    "hilbert": _run_hilbert,
}


def run_scenario(name: str, config: dict | None = None) -> dict:
    """One scenario's full report: residuals, rate fits, classifications."""
    if name not in _RUNNERS:
        known = ", ".join(SCENARIO_NAMES)
        raise ValueError(f"unknown scenario '{name}'; known scenarios: {known}")
    cfg = load_config() if config is None else config
    t0 = time.perf_counter()
    report = _RUNNERS[name](cfg)
    report.setdefault("timing", {})["seconds"] = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# suite-level sections

def spectral_roundtrip_checks(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    n = cfg["grid"]["n"]
    g = Grid2D(n, n, cfg["grid"]["length"])
    t0 = time.perf_counter()
    f = _band_limited_field(g, cfg["seeds"]["roundtrip"])
    scale = float(np.abs(f.values).max())
    checks: list = []

    pot = inv_laplacian(f)
    d1, d2 = spectral_gradient_values(g, pot.values)
    back = divergence(VectorField((ScalarField(g, d1), ScalarField(g, d2))))
    err = float(np.abs(back.values - f.values).max()) / scale
    _record(checks, "spectral/laplacian-roundtrip", err,
            f"< {tol['roundtrip_rel']:g} relative", err < tol["roundtrip_rel"])

    rr = riesz(f)
    twice = sum(riesz(c)[k].values for k, c in enumerate(rr.components))
    err = float(np.abs(twice + f.values).max()) / scale
    _record(checks, "spectral/riesz-squared", err,
            f"< {tol['roundtrip_rel']:g} relative", err < tol["roundtrip_rel"])

    back = divergence(grad_inv_laplacian(f))
    err = float(np.abs(-back.values - f.values).max()) / scale
    _record(checks, "spectral/newtonian-div-grad", err,
            f"< {tol['roundtrip_rel']:g} relative", err < tol["roundtrip_rel"])

    seconds = time.perf_counter() - t0
    timing: dict = {"seconds": seconds}
    _time_record(timing, "spectral/round-trip-time", seconds, tol["roundtrip_seconds"])
    return {"section": "spectral", "checks": checks, "timing": timing}


def corpus_rate_checks(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    n = cfg["grid"]["n"]
    g = Grid2D(n, n, cfg["grid"]["length"])
    idx = FracIndex(cfg["indices"]["s"], cfg["indices"]["p"])
    ladder = default_eps_ladder(g, count=cfg["ladders"]["eps_count"],
                                start_factor=cfg["ladders"]["eps_start_factor"])
    t0 = time.perf_counter()
    corpus = corpus_fields(g)
    checks: list = []
    fits: dict = {}
    slope_floor = {0: tol["rate_k0_slope"], 1: tol["rate_k1_slope"], 2: tol["rate_k2_slope"]}
    for name, (fld, region) in corpus.items():
        for k in (0, 1, 2):
            fit = mollify_rates(fld, idx, k, ladder=ladder, region=region)
            fits[f"{name}/k{k}"] = fit.to_dict()
            ok = fit.slope >= slope_floor[k] and fit.r2 >= tol["rate_r2"]
            _record(checks, f"corpus/rate-{name}-k{k}",
                    {"slope": fit.slope, "r2": fit.r2},
                    f"slope >= {slope_floor[k]:g}, r2 >= {tol['rate_r2']:g}", ok)

    pairs = [
        ("cusp", "cusp", corpus["cusp"][0], corpus["cusp"][0], corpus["cusp"][1]),
        ("cone-grad-1", "cone-grad-2", corpus["cone-grad-1"][0],
         corpus["cone-grad-2"][0], corpus["cone-grad-1"][1]),
    ]
    margin = tol["commutator_margin"]
    for na, nb, fa, fb, region in pairs:
        for k in (0, 1):
            floor = 2 * idx.s - k - margin
            fit = commutator_rates(fa, fb, idx, k, ladder=ladder, region=region)
            fits[f"comm {na}*{nb}/k{k}"] = fit.to_dict()
            _record(checks, f"corpus/commutator-{na}-{nb}-k{k}", fit.slope,
                    f">= {floor:.4f}", fit.slope >= floor)

    seconds = time.perf_counter() - t0
    timing: dict = {"seconds": seconds}
    _time_record(timing, "corpus/rate-time", seconds, tol["rates_seconds"])
    return {"section": "corpus", "checks": checks, "data": fits, "timing": timing}


def hodge_checks(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    n = cfg["grid"]["n"]
    g = Grid2D(n, n, cfg["grid"]["length"])
    t0 = time.perf_counter()
    checks: list = []

    w = VectorField((
        _band_limited_field(g, cfg["seeds"]["roundtrip"] + 1),
        _band_limited_field(g, cfg["seeds"]["roundtrip"] + 2),
    ))
    parts = decompose_one_form(w)
    _record(checks, "hodge/reconstruction", parts.reconstruction_residual,
            f"< {tol['hodge_reconstruction']:g}",
            parts.reconstruction_residual < tol["hodge_reconstruction"])

    X1, X2 = g.mesh()
    kk = 2 * np.pi / g.length
    lam = ScalarField(g, 0.8 + 0.3 * np.sin(kk * X1 + 0.5) * np.cos(kk * X2))
    ff = ScalarField(g, 0.5 * np.sin(kk * X1) * np.sin(2 * kk * X2)
                     + 0.3 * np.cos(2 * kk * X1 + 0.4))
    ladder = default_eps_ladder(g, count=cfg["ladders"]["eps_count"],
                                start_factor=cfg["ladders"]["eps_start_factor"])
    lad = difference_ladder(lam, ff, ladder)
    drops = {}
    for part in ("a", "beta"):
        vals = [v for _, v in lad[part]]
        drops[part] = vals[0] / vals[-1] if vals[-1] > 0 else float("inf")
        _record(checks, f"hodge/difference-drop-{part}", drops[part],
                f">= {tol['hodge_ladder_drop']:g}x first to last",
                drops[part] >= tol["hodge_ladder_drop"])

    seconds = time.perf_counter() - t0
    return {"section": "hodge", "checks": checks,
            "data": {"ladders": lad, "drops": drops},
            "timing": {"seconds": seconds}}


def codazzi_identity_checks(cfg: dict) -> dict:
    """Corrected compatibility residual on a genuinely curved immersion.

    The plane and cylinder runs already cover the flat cases, where the
    correction terms vanish identically; the sinusoidal graph has nonzero
    Christoffel symbols, so passing here means the correction actually
    cancels an order-one raw residual rather than subtracting zero.
    """
    tol = cfg["tolerances"]
    t0 = time.perf_counter()
    imm = graph_immersion(cfg["grid"]["n"], cfg["grid"]["length"])
    eps = default_eps_ladder(imm.grid)[-1]
    cod = codazzi_residual(imm, eps)
    checks: list = []
    _record(checks, "codazzi/graph-corrected", cod["corrected_max"],
            f"< {tol['codazzi_corrected']:g}",
            cod["corrected_max"] < tol["codazzi_corrected"])
    _record(checks, "codazzi/graph-raw-nonvacuous", cod["raw_max"],
            "> 0.001 so the identity is not trivially 0 = 0",
            cod["raw_max"] > 0.001)
    return {"section": "codazzi", "checks": checks, "data": {"residuals": cod},
            "timing": {"seconds": time.perf_counter() - t0}}


def det_estimate_checks(cfg: dict) -> dict:
    tol = cfg["tolerances"]
    cal = cfg["calibration"]
    n = cal["det_corpus_n"]
    g = Grid2D(n, n, cfg["grid"]["length"])
    X1, X2 = g.mesh()
    rng = np.random.default_rng(cfg["seeds"]["det_corpus"])
    t0 = time.perf_counter()

    def rand_scalar(max_mode: int, decay: float) -> ScalarField:
        vals = np.zeros((n, n))
        for _ in range(cal["det_corpus_modes"]):
            k1, k2 = rng.integers(-max_mode, max_mode + 1, size=2)
            amp = rng.normal() / (1.0 + k1 * k1 + k2 * k2) ** (decay / 2)
            ph = rng.uniform(0, 2 * np.pi)
            vals += amp * np.cos(2 * np.pi * (k1 * X1 + k2 * X2) / g.length + ph)
        return ScalarField(g, vals)

    phi = ScalarField(g, _std_bump(X1, X2, g, (g.length / 2, g.length / 2), 0.3 * g.length))
    C = tol["det_estimate_constant"]
    rough_every = cal["det_corpus_rough_every"]
    ratios = []
    for i in range(cal["det_corpus_size"]):
        k = i % 3
        rough = (i % rough_every) == 0
        max_mode, decay = (8, 0.8) if rough else (3, 1.5)
        a_list = [rand_scalar(max_mode, decay) for _ in range(k)]
        b_list = [VectorField((rand_scalar(max_mode, decay), rand_scalar(max_mode, decay)))
                  for _ in range(2 - k)]
        lhs, rhs = det_estimate_check(a_list, b_list, phi)
        ratios.append(lhs / rhs if rhs > 0 else 0.0)
    violations = int(sum(1 for q in ratios if q > C))
    checks: list = []
    _record(checks, "det-estimate/frozen-constant",
            {"constant": C, "max_ratio": max(ratios), "violations": violations},
            "zero violations of lhs <= C rhs", violations == 0)
    seconds = time.perf_counter() - t0
    return {"section": "det-estimate", "checks": checks,
            "data": {"ratios": ratios}, "timing": {"seconds": seconds}}


_SECTIONS = (
    ("spectral", spectral_roundtrip_checks),
    ("corpus", corpus_rate_checks),
    ("codazzi", codazzi_identity_checks),
    ("hodge", hodge_checks),
    ("det-estimate", det_estimate_checks),
)


def run_suite(config: dict | None = None, threads: int = 1) -> dict:
    """Every section and scenario; the registry behind `fracsob suite`.

    Scenario reports are independent, so threads > 1 maps them over a small
    pool; numbers do not depend on the thread count because each report is
    assembled in registry order afterwards.
    """
    cfg = load_config() if config is None else config
    t0 = time.perf_counter()
    reports: dict = {}
    checks: list = []
    timing_checks: list = []
    for name, fn in _SECTIONS:
        rep = fn(cfg)
        reports[name] = rep
        checks.extend(rep["checks"])
        timing_checks.extend(rep.get("timing", {}).get("checks", []))

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {name: pool.submit(run_scenario, name, cfg) for name in SCENARIO_NAMES}
            scen = {name: futures[name].result() for name in SCENARIO_NAMES}
    else:
        scen = {name: run_scenario(name, cfg) for name in SCENARIO_NAMES}
    tol = cfg["tolerances"]
    for name in SCENARIO_NAMES:
        rep = scen[name]
        reports[name] = rep
        checks.extend(rep["checks"])
        if name == "cone":
            _time_record({"checks": timing_checks}, "cone/atom-time",
                         rep["timing"]["atom_seconds"], tol["atom_seconds"])

    total = time.perf_counter() - t0
    timing = {"seconds": total, "checks": timing_checks}
    _time_record(timing, "suite/wall-time", total, tol["suite_seconds"])
    passed = all(c["passed"] for c in checks) and all(c["passed"] for c in timing["checks"])
    return {"reports": reports, "checks": checks, "timing": timing,
            "passed": passed, "threads": threads}
