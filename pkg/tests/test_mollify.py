import numpy as np
import pytest

from fracsob.field import FracIndex, Grid2D, ScalarField, lp_norm
from fracsob.mollify import (
    commutator,
    default_eps_ladder,
    delta_correlation,
    kernel_for,
    mollify,
    mollify_rates,
    vmo_modulus,
)
from fracsob.scenarios import cone_gradient_fields, cusp_field


def test_kernel_mass_is_one(grid64):
    assert kernel_for(grid64, 0.1).mass == pytest.approx(1.0, abs=1e-12)


def test_kernel_under_resolved_raises(grid64):
    with pytest.raises(ValueError, match="under-resolved"):
        kernel_for(grid64, grid64.h1)


def test_mollify_preserves_constants(grid64):
    f = ScalarField(grid64, np.full((64, 64), 2.5))
    assert np.abs(mollify(f, 0.1).values - 2.5).max() < 1e-12


def test_mollify_is_lp_contraction(grid64, smooth_field):
    for p in (1.5, 3.0):
        assert lp_norm(mollify(smooth_field, 0.1), p) <= lp_norm(smooth_field, p)


def test_smooth_field_second_order_rate(grid128):
    # symmetric kernel: error O(eps^2) for smooth f, so the k = 0 slope
    # should sit near 2
    X1, X2 = grid128.mesh()
    f = ScalarField(grid128, np.sin(2 * np.pi * X1) * np.cos(2 * np.pi * X2))
    fit = mollify_rates(f, FracIndex(2 / 3, 3.0), 0)
    assert fit.slope > 1.8
    assert fit.r2 > 0.99


def test_default_ladder_respects_resolution():
    g = Grid2D(64, 64, 1.0)
    ladder = default_eps_ladder(g, count=10)
    assert all(e >= 2 * g.h1 for e in ladder)
    assert all(b == a / 2 for a, b in zip(ladder, ladder[1:]))


def test_commutator_pointwise_identity(grid64, smooth_field):
    X1, X2 = grid64.mesh()
    other = ScalarField(grid64, np.cos(2 * np.pi * (X1 + X2)))
    eps = 0.0625
    comm = commutator(smooth_field, other, eps).values
    fe = mollify(smooth_field, eps).values
    ge = mollify(other, eps).values
    ident = (fe - smooth_field.values) * (ge - other.values) \
        - delta_correlation(smooth_field, other, eps)
    assert np.abs(comm - ident).max() < 1e-8


def test_commutator_rejects_bad_order(grid64, smooth_field):
    with pytest.raises(ValueError, match="k = 3"):
        commutator(smooth_field, smooth_field, 0.1, k=3)


def test_vmo_modulus_scale_invariant_vs_smooth(grid128):
    # the direction-jump field oscillates at every scale around its center;
    # a smooth field's local mean oscillation decays with the window
    idx = FracIndex(2 / 3, 3.0)
    node = (64, 64)
    cg = cone_gradient_fields(grid128)
    rough = vmo_modulus(cg[0], idx, node)
    vals_r = [v for _, v in rough.ladder]
    X1, X2 = grid128.mesh()
    smooth = ScalarField(grid128, np.sin(2 * np.pi * X1))
    fine = vmo_modulus(smooth, idx, node)
    vals_s = [v for _, v in fine.ladder]
    # smooth decays by a factor along the ladder, rough stays put
    assert vals_s[-1] < 0.25 * vals_s[0]
    assert vals_r[-1] > 0.5 * vals_r[0]


def test_cusp_field_rates_match_membership(grid128):
    # the frozen corpus field: in the space, so k = 0 improves and k = 2
    # degrades no faster than the contracted exponents
    fit0 = mollify_rates(cusp_field(grid128), FracIndex(2 / 3, 3.0), 0)
    assert fit0.slope > 0.5
    assert fit0.r2 > 0.9
