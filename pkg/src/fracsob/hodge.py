"""Hodge splitting of one-forms, the wedge-determinant estimate, and the
scaled Jacobian identity Jac(f)[phi] = Jac(g)[lambda^2 phi].

At two dimensions the exterior calculus collapses to concrete operators:
d on scalars is the gradient, d on one-forms is the scalar curl, and the
codifferential on one-forms is minus the divergence. The splitting
w = da + beta takes a = inv_laplacian(div w), so beta keeps the harmonic
(constant) part and stays divergence-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fracsob.field import ScalarField, VectorField, gradient, sup_norm
from fracsob.jacobian import DistPairing, dist_jacobian, pointwise_jacobian
from fracsob.mollify import default_eps_ladder, mollify, mollify_vector
from fracsob.sobolev import FracIndex, gagliardo_seminorm, gagliardo_seminorm_vector
from fracsob.spectral import divergence, inv_laplacian


@dataclass(frozen=True)
class HodgeParts:
    """w = da + beta with a zero-mean and beta divergence-free."""

    a: ScalarField
    beta: VectorField
    reconstruction_residual: float

    def beta_divergence(self) -> float:
        div = divergence(self.beta)
        return float(np.abs(div.values).max())


def decompose_one_form(w: VectorField) -> HodgeParts:
    """Split a one-form into an exact part and a coexact-plus-harmonic rest."""
    if w.m != 2:
        raise ValueError("one-forms on the plane have 2 components")
    g = w.grid
    a = inv_laplacian(divergence(w))
    da = gradient(a, scheme="spectral")
    beta = VectorField((
        ScalarField(g, w.components[0].values - da[0].values),
        ScalarField(g, w.components[1].values - da[1].values),
    ))
    recon = np.sqrt(
        (da[0].values + beta.components[0].values - w.components[0].values) ** 2
        + (da[1].values + beta.components[1].values - w.components[1].values) ** 2
    )
    residual = float(np.sqrt((recon**2).mean()))
    return HodgeParts(a, beta, residual)


def _lambda_dg(lam: ScalarField, gfield: ScalarField) -> VectorField:
    dg = gradient(gfield, scheme="auto")
    g = lam.grid
    return VectorField((
        ScalarField(g, lam.values * dg[0].values),
        ScalarField(g, lam.values * dg[1].values),
    ))


def hodge_decompose(lam: ScalarField, gfield: ScalarField) -> HodgeParts:
    """Split lambda dg. For constant lambda, beta carries only the mean of dg."""
    if lam.grid is not gfield.grid and lam.grid != gfield.grid:
        raise ValueError("fields live on different grids")
    return decompose_one_form(_lambda_dg(lam, gfield))


def hodge_difference(lam: ScalarField, ffield: ScalarField, eps: float) -> HodgeParts:
    """Split the commutator one-form lambda_eps df_eps - (lambda df)_eps."""
    g = lam.grid
    lam_e = mollify(lam, eps)
    f_e = mollify(ffield, eps)
    df_e = gradient(f_e, scheme="spectral")
    w_direct = _lambda_dg(lam, ffield)
    w_moll = mollify_vector(w_direct, eps)
    comm = VectorField((
        ScalarField(g, lam_e.values * df_e[0].values - w_moll.components[0].values),
        ScalarField(g, lam_e.values * df_e[1].values - w_moll.components[1].values),
    ))
    return decompose_one_form(comm)


A_INDEX = FracIndex(2.0 / 3.0, 3.0)
BETA_INDEX = FracIndex(1.0 / 3.0, 1.5)


def difference_ladder(
    lam: ScalarField,
    ffield: ScalarField,
    ladder: Sequence[float] | None = None,
) -> dict:
    """Seminorm ladders of both parts of the difference decomposition."""
    g = lam.grid
    if ladder is None:
        ladder = default_eps_ladder(g)
    a_ladder, b_ladder = [], []
    for eps in ladder:
        parts = hodge_difference(lam, ffield, eps)
        a_ladder.append((eps, gagliardo_seminorm(parts.a, A_INDEX)))
        b_ladder.append((eps, gagliardo_seminorm_vector(parts.beta.components, BETA_INDEX)))
    return {"a": a_ladder, "beta": b_ladder}


def _wedge_density(kind_a: list[VectorField], kind_b: list[VectorField]) -> np.ndarray:
    forms = kind_a + kind_b
    w1, w2 = forms[0], forms[1]
    return (
        w1.components[0].values * w2.components[1].values
        - w1.components[1].values * w2.components[0].values
    )


def det_estimate_check(
    a_list: Sequence[ScalarField],
    beta_list: Sequence[VectorField],
    phi: ScalarField,
) -> tuple[float, float]:
    """Wedge pairing against phi versus the product-of-seminorms bound.

    Takes k exact potentials (as scalars a_j, contributing da_j) and 2-k
    one-forms beta_j; returns (lhs, rhs) where lhs is the direct quadrature
    |integral of the wedge times phi| and rhs is the seminorm product
    (sup phi + [phi]_{2/3,3}) prod [a_j]_{2/3,3} prod [beta_j]_{1/3,3/2}.
    """
    k = len(a_list)
    if k + len(beta_list) != 2:
        raise ValueError("need exactly two forms at n = 2")
    g = phi.grid
    das = [gradient(a, scheme="spectral") for a in a_list]
    density = _wedge_density(list(das), list(beta_list))
    lhs = abs(float((density * phi.values).sum()) * g.cell_area)
    rhs = sup_norm(phi) + gagliardo_seminorm(phi, A_INDEX)
    for a in a_list:
        rhs *= gagliardo_seminorm(a, A_INDEX)
    for b in beta_list:
        rhs *= gagliardo_seminorm_vector(b.components, BETA_INDEX)
    return lhs, rhs


def jacobian_identity_check(
    lam: ScalarField,
    f: VectorField,
    gmap: VectorField,
    phi: ScalarField,
    ladder: Sequence[float] | None = None,
    window: np.ndarray | None = None,
    constraint_tol: float = 1e-6,
):
    """Both pairings of Jac(f)[phi] = Jac(g)[lambda^2 phi] along one ladder.

    Requires grad f = lambda grad g at grid scale. constraint_tol loosens
    the factorization guard for triples assembled from measured quantities
    (a mollified normal times a recovered potential carries the smoothing
    bias of its rung). The right side pairs the mollified determinant of g
    against lambda_eps^2 phi, mollifying lambda along the same ladder as
    the map.
    """
    g = lam.grid
    if ladder is None:
        ladder = default_eps_ladder(g)
    scale = 0.0
    defect = 0.0
    for cf, cg in zip(f.components, gmap.components):
        gf = gradient(cf, scheme="auto")
        gg = gradient(cg, scheme="auto")
        for k in range(2):
            d = gf[k].values - lam.values * gg[k].values
            defect += float((d**2).mean())
            scale += float(((lam.values * gg[k].values) ** 2).mean())
    defect = np.sqrt(defect)
    if defect > constraint_tol * max(1.0, np.sqrt(scale)):
        raise ValueError(
            f"triple does not satisfy grad f = lambda grad g (L2 defect {defect:.3g})"
        )
    lhs = dist_jacobian(f, phi, ladder=ladder, window=window)
    pts = []
    for eps in ladder:
        ge = mollify_vector(gmap, eps)
        lam_e = mollify(lam, eps)
        det = pointwise_jacobian(ge, scheme="spectral")
        test = lam_e.values**2 * phi.values
        pts.append((eps, float((det.values * test).sum()) * g.cell_area))
    rhs = DistPairing(tuple(pts))
    return lhs, rhs
