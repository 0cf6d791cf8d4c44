import numpy as np
import pytest

from fracsob.field import Grid2D, ScalarField, VectorField
from fracsob.hodge import (
    decompose_one_form,
    det_estimate_check,
    difference_ladder,
    hodge_decompose,
    jacobian_identity_check,
)
from fracsob.mollify import default_eps_ladder
from fracsob.scenarios import perturbed_identity_map, rank1_triple
from fracsob.sobolev import _std_bump
from fracsob.spectral import divergence


@pytest.fixture
def one_form(grid64):
    rng = np.random.default_rng(17)
    comps = []
    X1, X2 = grid64.mesh()
    for _ in range(2):
        vals = np.zeros((64, 64))
        for _ in range(6):
            k1, k2 = rng.integers(-8, 9, size=2)
            if k1 == 0 and k2 == 0:
                continue
            vals += rng.normal() * np.cos(2 * np.pi * (k1 * X1 + k2 * X2)
                                          + rng.uniform(0, 2 * np.pi))
        comps.append(ScalarField(grid64, vals))
    return VectorField(tuple(comps))


def test_decompose_reconstructs(one_form):
    parts = decompose_one_form(one_form)
    assert parts.reconstruction_residual < 1e-10


def test_coexact_part_divergence_free(one_form):
    parts = decompose_one_form(one_form)
    div = divergence(parts.beta)
    scale = max(np.abs(c.values).max() for c in parts.beta.components) + 1e-30
    assert np.abs(div.values).max() / scale < 1e-8


def test_hodge_decompose_of_product(grid64):
    X1, X2 = grid64.mesh()
    lam = ScalarField(grid64, 1.0 + 0.3 * np.sin(2 * np.pi * X1))
    gfield = ScalarField(grid64, np.cos(2 * np.pi * X2))
    parts = hodge_decompose(lam, gfield)
    assert parts.reconstruction_residual < 1e-10


def test_difference_ladder_decays_for_smooth_pair(grid64):
    X1, X2 = grid64.mesh()
    k = 2 * np.pi
    lam = ScalarField(grid64, 0.8 + 0.3 * np.sin(k * X1 + 0.5) * np.cos(k * X2))
    ff = ScalarField(grid64, 0.5 * np.sin(k * X1) * np.sin(2 * k * X2))
    ladder = default_eps_ladder(grid64)
    lad = difference_ladder(lam, ff, ladder)
    for part in ("a", "beta"):
        vals = [v for _, v in lad[part]]
        assert vals[-1] < vals[0]


def test_det_estimate_two_scalars(grid64):
    X1, X2 = grid64.mesh()
    a1 = ScalarField(grid64, np.sin(2 * np.pi * X1))
    a2 = ScalarField(grid64, np.cos(2 * np.pi * X2))
    phi = ScalarField(grid64, _std_bump(X1, X2, grid64, (0.5, 0.5), 0.3))
    lhs, rhs = det_estimate_check([a1, a2], [], phi)
    assert lhs >= 0 and rhs > 0
    assert lhs <= 0.02 * rhs


def test_det_estimate_requires_two_factors(grid64):
    X1, X2 = grid64.mesh()
    a1 = ScalarField(grid64, np.sin(2 * np.pi * X1))
    phi = ScalarField(grid64, _std_bump(X1, X2, grid64, (0.5, 0.5), 0.3))
    with pytest.raises(ValueError):
        det_estimate_check([a1], [], phi)


def test_identity_check_constant_lambda(grid64):
    g = perturbed_identity_map(grid64, eta=0.05)
    c = 0.7
    comps = tuple(
        ScalarField(grid64, c * comp.values,
                    affine=None if comp.affine is None
                    else (c * comp.affine[0], c * comp.affine[1]),
                    affine_center=comp.affine_center)
        for comp in g.components
    )
    f = VectorField(comps)
    lam = ScalarField(grid64, np.full((64, 64), c))
    X1, X2 = grid64.mesh()
    phi = ScalarField(grid64, _std_bump(X1, X2, grid64, (0.5, 0.5), 0.3))
    lhs, rhs = jacobian_identity_check(lam, f, g, phi)
    assert abs(lhs.limit - rhs.limit) < 1e-8


def test_identity_check_rank1_triple(grid64):
    lam, f, gmap = rank1_triple(grid64, amplitude=0.3)
    X1, X2 = grid64.mesh()
    phi = ScalarField(grid64, _std_bump(X1, X2, grid64, (0.5, 0.5), 0.3))
    lhs, rhs = jacobian_identity_check(lam, f, gmap, phi)
    assert abs(lhs.limit) < 1e-6
    assert abs(rhs.limit) < 1e-6


def test_identity_check_rejects_unrelated_triple(grid64):
    g = perturbed_identity_map(grid64, eta=0.05)
    f = perturbed_identity_map(grid64, eta=0.0)  # not lambda * grad g for lambda below
    lam = ScalarField(grid64, np.full((64, 64), 0.5))
    X1, X2 = grid64.mesh()
    phi = ScalarField(grid64, _std_bump(X1, X2, grid64, (0.5, 0.5), 0.3))
    with pytest.raises(ValueError, match="grad f = lambda grad g"):
        jacobian_identity_check(lam, f, g, phi)
