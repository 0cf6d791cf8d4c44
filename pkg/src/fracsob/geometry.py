"""Immersion geometry: pullback metrics, second fundamental forms,
Gauss/Codazzi residuals, potential recovery, and developability detection.

All curvature quantities are computed for the mollified immersion at a
kernel scale eps, so every derivative acts on a smooth periodic field and
spectral differentiation applies. Raw (unmollified) immersions enter only
through their sampled values and optional analytic derivative attachments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from fracsob.field import (
    Grid2D,
    ScalarField,
    VectorField,
    gradient,
    second_derivatives,
    window_mask,
)
from fracsob.mollify import mollify_vector
from fracsob.spectral import divergence, inv_laplacian


@dataclass(frozen=True)
class MetricField:
    """Symmetric 2x2 metric samples with a validity mask.

    The mask marks nodes where det g stays above 1/4; `flagged` records
    whether any requested node fell below that floor.
    """

    grid: Grid2D
    g11: np.ndarray
    g12: np.ndarray
    g22: np.ndarray
    mask: np.ndarray
    flagged: bool = False

    @property
    def det(self) -> np.ndarray:
        return self.g11 * self.g22 - self.g12 * self.g12

    def inverse(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        d = np.where(self.mask, self.det, 1.0)
        return self.g22 / d, -self.g12 / d, self.g11 / d

    def deviation(self) -> np.ndarray:
        """Frobenius distance to the identity metric per node."""
        return np.sqrt(
            (self.g11 - 1.0) ** 2 + 2 * self.g12**2 + (self.g22 - 1.0) ** 2
        )


@dataclass(frozen=True)
class FormField:
    """Second-fundamental-form and/or Christoffel samples on a shared mask.

    ii is (II11, II12, II22); christoffel is (G111, G112, G122, G211, G212,
    G222) with Gl_ij symmetric in ij, index order l, then (11, 12, 22).
    """

    grid: Grid2D
    ii: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
    christoffel: tuple[np.ndarray, ...] | None = None
    mask: np.ndarray | None = None

    def ii_rows(self) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
        a, b, c = self.ii
        return (a, b), (b, c)


@dataclass(frozen=True)
class Immersion:
    """A 3-component map with the mask on which its contracts are asserted."""

    u: VectorField
    mask: np.ndarray
    name: str = ""

    def __post_init__(self):
        if self.u.m != 3:
            raise ValueError(f"immersion needs 3 components, got {self.u.m}")

    @property
    def grid(self) -> Grid2D:
        return self.u.grid

    def isometry_residual(self) -> float:
        """sup over the mask of |(grad u)^T grad u - Id|, analytic derivatives."""
        grads = [gradient(c, scheme="auto") for c in self.u.components]
        g11 = sum(g[0].values ** 2 for g in grads)
        g12 = sum(g[0].values * g[1].values for g in grads)
        g22 = sum(g[1].values ** 2 for g in grads)
        dev = np.sqrt((g11 - 1) ** 2 + 2 * g12**2 + (g22 - 1) ** 2)
        return float(dev[self.mask].max())


def mollified_map(imm: Immersion, eps: float) -> VectorField:
    return mollify_vector(imm.u, eps)


def _metric_of(grads: list[VectorField]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    g11 = sum(g[0].values ** 2 for g in grads)
    g12 = sum(g[0].values * g[1].values for g in grads)
    g22 = sum(g[1].values ** 2 for g in grads)
    return g11, g12, g22


def pullback_metric(imm: Immersion, eps: float) -> MetricField:
    """Metric of the mollified immersion; mask shrinks where det <= 1/4."""
    ue = mollified_map(imm, eps)
    grads = [gradient(c, scheme="spectral") for c in ue.components]
    g11, g12, g22 = _metric_of(grads)
    det = g11 * g22 - g12 * g12
    ok = det > 0.25
    flagged = bool(np.any(imm.mask & ~ok))
    return MetricField(imm.grid, g11, g12, g22, imm.mask & ok, flagged)


def normal_and_II(imm: Immersion, eps: float) -> tuple[VectorField, FormField]:
    """Unit normal and second fundamental form of the mollified immersion."""
    g = imm.grid
    ue = mollified_map(imm, eps)
    grads = [gradient(c, scheme="spectral") for c in ue.components]
    d1 = np.stack([gr[0].values for gr in grads])
    d2 = np.stack([gr[1].values for gr in grads])
    cross = np.stack([
        d1[1] * d2[2] - d1[2] * d2[1],
        d1[2] * d2[0] - d1[0] * d2[2],
        d1[0] * d2[1] - d1[1] * d2[0],
    ])
    mag = np.sqrt((cross**2).sum(axis=0))
    ok = mag > 1e-12
    safe = np.where(ok, mag, 1.0)
    n = cross / safe
    # Compactly supported immersions leave marginally resolved features in
    # the mollified map at fine eps; the k^2 amplification of a spectral
    # Hessian turns those into grid-wide ringing, so go local instead.
    hess_scheme = "spectral" if bool(imm.mask.all()) else "centered"
    hess = [second_derivatives(c, scheme=hess_scheme) for c in ue.components]
    ii = tuple(
        sum(hess[m][k] * n[m] for m in range(3)) for k in range(3)
    )
    normal = VectorField(tuple(ScalarField(g, n[m]) for m in range(3)))
    metric = pullback_metric(imm, eps)
    return normal, FormField(g, ii=ii, mask=metric.mask & ok)


def christoffel(metric: MetricField) -> FormField:
    """All six independent Christoffel symbols of the metric."""
    g = metric.grid
    comps = {"11": metric.g11, "12": metric.g12, "22": metric.g22}
    d = {}
    for key, arr in comps.items():
        gr = gradient(ScalarField(g, arr), scheme="spectral")
        d["1" + key] = gr[0].values
        d["2" + key] = gr[1].values
    i11, i12, i22 = metric.inverse()
    inv = {("1", "1"): i11, ("1", "2"): i12, ("2", "1"): i12, ("2", "2"): i22}

    def first_kind(i: str, j: str, m: str) -> np.ndarray:
        # Gamma_{ij,m} = (d_i g_mj + d_j g_im - d_m g_ij) / 2
        return 0.5 * (
            d[i + "".join(sorted(m + j))]
            + d[j + "".join(sorted(i + m))]
            - d[m + "".join(sorted(i + j))]
        )

    out = []
    for l in ("1", "2"):
        for (i, j) in (("1", "1"), ("1", "2"), ("2", "2")):
            val = sum(inv[(l, m)] * first_kind(i, j, m) for m in ("1", "2"))
            out.append(np.where(metric.mask, val, 0.0))
    return FormField(g, christoffel=tuple(out), mask=metric.mask)


def _brioschi_curvature_times_det(metric: MetricField) -> np.ndarray:
    """R_1212 of the metric: K * det g via the Brioschi determinant formula."""
    g = metric.grid
    E, F, G = metric.g11, metric.g12, metric.g22

    def dspec(arr):
        gr = gradient(ScalarField(g, arr), scheme="spectral")
        return gr[0].values, gr[1].values

    E1, E2 = dspec(E)
    F1, F2 = dspec(F)
    G1, G2 = dspec(G)
    _, E22 = dspec(E2)
    F12, _ = dspec(F2)
    G11, _ = dspec(G1)
    a = -0.5 * E22 + F12 - 0.5 * G11
    m1 = (
        a * (E * G - F * F)
        - (0.5 * E1) * ((F2 - 0.5 * G1) * G - 0.5 * G2 * F)
        + (F1 - 0.5 * E2) * ((F2 - 0.5 * G1) * F - 0.5 * G2 * E)
    )
    m2 = (
        -(0.5 * E2) * (0.5 * E2 * G - 0.5 * G1 * F)
        + (0.5 * G1) * (0.5 * E2 * F - 0.5 * G1 * E)
    )
    det = E * G - F * F
    return (m1 - m2) / np.where(metric.mask, det, 1.0)


def gauss_residual(imm: Immersion, eps: float, phi: ScalarField) -> dict:
    """Termwise check of det II = R_1212(g) paired against a test function."""
    g = imm.grid
    _, form = normal_and_II(imm, eps)
    metric = pullback_metric(imm, eps)
    ii11, ii12, ii22 = form.ii
    det_ii = ii11 * ii22 - ii12 * ii12
    r1212 = _brioschi_curvature_times_det(metric)
    mask = form.mask & metric.mask
    w = phi.values * mask
    lhs = float((det_ii * w).sum()) * g.cell_area
    rhs = float((r1212 * w).sum()) * g.cell_area
    return {"det_ii_pairing": lhs, "curvature_pairing": rhs,
            "residual": abs(lhs - rhs)}


def codazzi_residual(
    imm: Immersion,
    eps: float,
    r: float = 1.0,
    region: np.ndarray | None = None,
) -> dict:
    """L^r size of curl II per row, raw and with the Christoffel correction.

    The corrected combination d2 II_i1 - d1 II_i2 - II_l1 G^l_i2 + II_l2 G^l_i1
    vanishes identically for smooth immersions; the raw combination is the
    ladder quantity that must decay for isometric limits.
    """
    if r < 1:
        raise ValueError("norm exponent must be >= 1")
    g = imm.grid
    _, form = normal_and_II(imm, eps)
    metric = pullback_metric(imm, eps)
    gam = christoffel(metric).christoffel
    G = {("1", "11"): gam[0], ("1", "12"): gam[1], ("1", "21"): gam[1],
         ("1", "22"): gam[2], ("2", "11"): gam[3], ("2", "12"): gam[4],
         ("2", "21"): gam[4], ("2", "22"): gam[5]}
    rows = form.ii_rows()
    II = {("1", "1"): rows[0][0], ("1", "2"): rows[0][1],
          ("2", "1"): rows[1][0], ("2", "2"): rows[1][1]}
    trusted = form.mask & metric.mask
    # II holds meaningless values wherever the immersion degenerates, and a
    # trigonometric derivative would smear those values across the grid.  Only
    # differentiate spectrally when every node is trusted; otherwise fall back
    # to centered stencils and drop nodes whose stencil leaves the trusted set.
    if bool(trusted.all()):
        scheme = "spectral"
        mask = trusted.copy()
    else:
        scheme = "centered"
        mask = trusted.copy()
        for ax in (0, 1):
            for sh in (-1, 1):
                mask &= np.roll(trusted, sh, axis=ax)
    if region is not None:
        mask = mask & region
    if not mask.any():
        raise ValueError("empty evaluation region")
    area = g.cell_area
    raw, corrected = [], []
    for i in ("1", "2"):
        gi1 = gradient(ScalarField(g, II[(i, "1")]), scheme=scheme)
        gi2 = gradient(ScalarField(g, II[(i, "2")]), scheme=scheme)
        raw_field = gi1[1].values - gi2[0].values
        corr = sum(
            II[(l, "1")] * G[(l, i + "2")] - II[(l, "2")] * G[(l, i + "1")]
            for l in ("1", "2")
        )
        raw.append(float((np.abs(raw_field[mask]) ** r).sum() * area) ** (1 / r))
        cfield = raw_field - corr
        corrected.append(float((np.abs(cfield[mask]) ** r).sum() * area) ** (1 / r))
    return {"raw": raw, "corrected": corrected,
            "raw_max": max(raw), "corrected_max": max(corrected)}


def coherence_residual(imm: Immersion, eps: float, m: int) -> float:
    """L1 defect of the covariant Hessian split for component m (1-based).

    hess u^m = G^k . d_k u^m + II . n^m holds exactly in the continuum for
    any immersion; the discrete residual measures spectral consistency.
    """
    if m not in (1, 2, 3):
        raise ValueError("component index must be 1, 2, or 3")
    g = imm.grid
    ue = mollified_map(imm, eps)
    comp = ue.components[m - 1]
    normal, form = normal_and_II(imm, eps)
    metric = pullback_metric(imm, eps)
    gam = christoffel(metric).christoffel
    grads = gradient(comp, scheme="spectral")
    d1u, d2u = grads[0].values, grads[1].values
    h11, h12, h22 = second_derivatives(comp)
    n_m = normal.components[m - 1].values
    ii11, ii12, ii22 = form.ii
    mask = form.mask & metric.mask
    res = (
        np.abs(h11 - gam[0] * d1u - gam[3] * d2u - ii11 * n_m)
        + 2 * np.abs(h12 - gam[1] * d1u - gam[4] * d2u - ii12 * n_m)
        + np.abs(h22 - gam[2] * d1u - gam[5] * d2u - ii22 * n_m)
    )
    return float(res[mask].sum()) * g.cell_area


def recover_potential(form: FormField) -> VectorField:
    """Planar potential f with grad f = II, rowwise, means carried as affine.

    Each row of II is split into its mean (the linear part of f, stored on
    the affine attachment) and a periodic remainder inverted spectrally.
    A large curl of II makes the problem inconsistent; recovery proceeds
    with a warning and lands on the curl-free part.
    """
    g = form.grid
    comps = []
    for (wa, wb) in form.ii_rows():
        ma, mb = float(wa.mean()), float(wb.mean())
        pa, pb = wa - ma, wb - mb
        curl_sz = float(np.sqrt(((gradient(ScalarField(g, pa), "spectral")[1].values
                                  - gradient(ScalarField(g, pb), "spectral")[0].values) ** 2).mean()))
        scale = float(np.sqrt((pa**2 + pb**2).mean()))
        if curl_sz > 1e-6 * max(scale, 1e-30):
            warnings.warn(
                f"curl of the form is {curl_sz:.3g}; recovery keeps only the curl-free part"
            )
        w = VectorField((ScalarField(g, pa), ScalarField(g, pb)))
        pot = inv_laplacian(divergence(w))
        comps.append(ScalarField(g, pot.values, affine=(ma, mb)))
    return VectorField(tuple(comps))


# developability classification labels
FLAT, RULED, SINGULAR, UNLABELED = 0, 1, 2, -1


@dataclass(frozen=True)
class Classification:
    """Per-node developability labels with ruling angles in [0, pi)."""

    grid: Grid2D
    labels: np.ndarray
    theta: np.ndarray
    valid: np.ndarray
    params: dict = dc_field(default_factory=dict)

    def counts(self) -> dict:
        v = self.valid
        return {
            "flat": int((self.labels[v] == FLAT).sum()),
            "ruled": int((self.labels[v] == RULED).sum()),
            "singular": int((self.labels[v] == SINGULAR).sum()),
            "total": int(v.sum()),
        }


def _feature_stack(obj) -> tuple[Grid2D, np.ndarray]:
    """Feature vector per node: gradient entries for an immersion, total
    values for a planar field (the object whose level sets carry rulings)."""
    if isinstance(obj, Immersion):
        feats = []
        for c in obj.u.components:
            gr = gradient(c, scheme="auto")
            feats.extend([gr[0].values, gr[1].values])
        return obj.grid, np.stack(feats, axis=-1)
    if isinstance(obj, VectorField):
        if obj.m != 2:
            raise ValueError("developability detection takes a planar field")
        return obj.grid, np.stack([c.total_values() for c in obj.components], axis=-1)
    raise TypeError("expected an Immersion or a 2-component VectorField")


def _interp_features(F: np.ndarray, g: Grid2D, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    u = x1 / g.h1
    v = x2 / g.h2
    i0 = np.floor(u).astype(int) % g.n1
    j0 = np.floor(v).astype(int) % g.n2
    fu = (u - np.floor(u))[..., None]
    fv = (v - np.floor(v))[..., None]
    i1 = (i0 + 1) % g.n1
    j1 = (j0 + 1) % g.n2
    return (
        F[i0, j0] * (1 - fu) * (1 - fv)
        + F[i1, j0] * fu * (1 - fv)
        + F[i0, j1] * (1 - fu) * fv
        + F[i1, j1] * fu * fv
    )


def _directional_variation(F, g, X1, X2, theta, step):
    """One-sided variations along +theta and -theta.

    Returns (min, max) of the two sides: a ruling that ends at a singular
    point (cone apex) is still constant toward the boundary, so the ruled
    test scores the better side while the anisotropy denominator uses the
    worse one.
    """
    c, s = np.cos(theta), np.sin(theta)
    base = _interp_features(F, g, X1, X2)
    plus = np.zeros(theta.shape)
    minus = np.zeros(theta.shape)
    for t in (step, 2 * step):
        probe = _interp_features(F, g, X1 + t * c, X2 + t * s)
        plus = np.maximum(plus, np.linalg.norm(probe - base, axis=-1))
        probe = _interp_features(F, g, X1 - t * c, X2 - t * s)
        minus = np.maximum(minus, np.linalg.norm(probe - base, axis=-1))
    return np.minimum(plus, minus), np.maximum(plus, minus)


def detect_developability(
    obj,
    tol: float = 1e-3,
    region: np.ndarray | None = None,
    n_angles: int = 16,
    ratio_tol: float = 0.1,
    refine_deg: float = 0.1,
    trace_tol_factor: float = 5.0,
) -> Classification:
    """Label nodes flat / ruled(theta) / singular from local field variation.

    flat: variation over the 5x5 stencil below tol (relative to the feature
    spread). ruled: one direction whose variation is under ratio_tol times
    the worst direction, refined to refine_deg and required to extend by
    straight-line tracing to the region boundary on at least one side.
    """
    g, F = _feature_stack(obj)
    if region is None:
        region = window_mask(g, 0.25)
        if isinstance(obj, Immersion):
            region = region & obj.mask
    spread = 0.0
    for q in range(F.shape[-1]):
        vals = F[..., q][region]
        spread = max(spread, float(vals.max() - vals.min()))
    tol_abs = tol * max(spread, 1e-30)

    # flat test over the 5x5 stencil
    stencil_var = np.zeros(F.shape[:2])
    for di in range(-2, 3):
        for dj in range(-2, 3):
            if di == 0 and dj == 0:
                continue
            diff = np.roll(np.roll(F, di, axis=0), dj, axis=1) - F
            stencil_var = np.maximum(stencil_var, np.linalg.norm(diff, axis=-1))
    flat = stencil_var < tol_abs

    X1, X2 = g.mesh()
    step = min(g.h1, g.h2)
    angles = np.linspace(0.0, np.pi, n_angles, endpoint=False)
    lo_var = []
    hi_var = []
    for a in angles:
        vmin_a, vmax_a = _directional_variation(F, g, X1, X2, np.full(X1.shape, a), step)
        lo_var.append(vmin_a)
        hi_var.append(vmax_a)
    lo_var = np.stack(lo_var)
    best_k = lo_var.argmin(axis=0)
    v_max = np.stack(hi_var).max(axis=0)

    # golden-section refinement of the best direction per node
    half = np.pi / n_angles
    lo = angles[best_k] - half
    hi = angles[best_k] + half
    gold = (np.sqrt(5.0) - 1) / 2
    a1 = hi - gold * (hi - lo)
    b1 = lo + gold * (hi - lo)
    fa = _directional_variation(F, g, X1, X2, a1, step)[0]
    fb = _directional_variation(F, g, X1, X2, b1, step)[0]
    target = np.deg2rad(refine_deg)
    while float((hi - lo).max()) > target:
        take_lo = fa < fb
        hi = np.where(take_lo, b1, hi)
        lo = np.where(take_lo, lo, a1)
        a1 = hi - gold * (hi - lo)
        b1 = lo + gold * (hi - lo)
        fa = _directional_variation(F, g, X1, X2, a1, step)[0]
        fb = _directional_variation(F, g, X1, X2, b1, step)[0]
    theta = 0.5 * (lo + hi)
    v_min = np.minimum(fa, fb)
    theta = np.mod(theta, np.pi)

    ratio_ok = v_min < ratio_tol * np.maximum(v_max, 1e-30)
    candidate = region & ~flat & ratio_ok & (v_max > tol_abs)

    # line tracing: the ruling must reach the region boundary on one side
    labels = np.full(F.shape[:2], UNLABELED, dtype=np.int8)
    labels[region & flat] = FLAT
    labels[region & ~flat] = SINGULAR
    idx = np.argwhere(candidate)
    if len(idx):
        # a trace cannot be held tighter than the node's own valley noise
        trace_tol = np.maximum(
            trace_tol_factor * tol_abs, 3.0 * v_min[idx[:, 0], idx[:, 1]]
        )
        ok_any = np.zeros(len(idx), dtype=bool)
        p1 = X1[idx[:, 0], idx[:, 1]]
        p2 = X2[idx[:, 0], idx[:, 1]]
        th = theta[idx[:, 0], idx[:, 1]]
        base = F[idx[:, 0], idx[:, 1]]
        for sgn in (1.0, -1.0):
            c1 = p1.copy()
            c2 = p2.copy()
            alive = np.ones(len(idx), dtype=bool)
            good = np.zeros(len(idx), dtype=bool)
            max_steps = 2 * max(g.n1, g.n2)
            for _ in range(max_steps):
                c1 = c1 + sgn * (step / 2) * np.cos(th)
                c2 = c2 + sgn * (step / 2) * np.sin(th)
                ii = np.round(c1 / g.h1).astype(int) % g.n1
                jj = np.round(c2 / g.h2).astype(int) % g.n2
                inside = region[ii, jj]
                # leaving the region without a prior violation = success
                good |= alive & ~inside
                alive &= inside
                if not alive.any():
                    break
                probe = _interp_features(F, g, c1[alive], c2[alive])
                dev = np.linalg.norm(probe - base[alive], axis=-1)
                sub = np.zeros(len(idx), dtype=bool)
                sub[np.flatnonzero(alive)[dev > trace_tol[alive]]] = True
                alive &= ~sub
            ok_any |= good
        keep = idx[ok_any]
        labels[keep[:, 0], keep[:, 1]] = RULED
    theta_out = np.where(labels == RULED, theta, np.nan)
    return Classification(
        g, labels, theta_out, region,
        params={"tol": tol, "ratio_tol": ratio_tol, "n_angles": n_angles,
                "refine_deg": refine_deg},
    )


def constancy_agreement(
    a: Classification, b: Classification, angle_tol_deg: float = 2.0
) -> float:
    """Fraction of commonly valid nodes with compatible constancy structure.

    A flat node is constant along every direction and matches anything.
    Two ruled nodes must share their ruling direction within angle_tol_deg.
    A singular node matches only another singular node.
    """
    both = a.valid & b.valid
    if not both.any():
        raise ValueError("no common valid nodes")
    la, lb = a.labels[both], b.labels[both]
    ok = (la == FLAT) | (lb == FLAT)
    pair = (la == RULED) & (lb == RULED)
    if pair.any():
        d = a.theta[both][pair] - b.theta[both][pair]
        diff = np.abs(np.mod(d + np.pi / 2, np.pi) - np.pi / 2)
        ok[pair] = diff <= np.deg2rad(angle_tol_deg)
    ok |= (la == SINGULAR) & (lb == SINGULAR)
    return float(ok.mean())
