import numpy as np
import pytest

from fracsob.field import Grid2D
from fracsob.geometry import (
    FLAT,
    RULED,
    SINGULAR,
    Classification,
    christoffel,
    codazzi_residual,
    coherence_residual,
    constancy_agreement,
    detect_developability,
    normal_and_II,
    pullback_metric,
    recover_potential,
)
from fracsob.mollify import default_eps_ladder
from fracsob.scenarios import (
    cone_immersion,
    cylinder_immersion,
    graph_immersion,
    plane_immersion,
    ruled_immersion,
)


@pytest.fixture(scope="module")
def cylinder():
    return cylinder_immersion(128)


@pytest.fixture(scope="module")
def cone():
    return cone_immersion(128)


def test_plane_metric_exact():
    imm = plane_immersion(64)
    met = pullback_metric(imm, 0.1)
    assert np.abs(met.g11 - 1).max() < 1e-12
    assert np.abs(met.g12).max() < 1e-12
    assert np.abs(met.g22 - 1).max() < 1e-12


def test_plane_christoffel_vanish():
    imm = plane_immersion(64)
    gam = christoffel(pullback_metric(imm, 0.1)).christoffel
    assert max(np.abs(c).max() for c in gam) < 1e-10


def test_cylinder_isometric(cylinder):
    assert cylinder.isometry_residual() < 1e-12


def test_cylinder_normal_unit_and_flat_det(cylinder):
    eps = default_eps_ladder(cylinder.grid)[-1]
    normal, form = normal_and_II(cylinder, eps)
    mag = np.sqrt(sum(c.values**2 for c in normal.components))
    assert np.abs(mag - 1.0)[form.mask].max() < 1e-10
    ii11, ii12, ii22 = form.ii
    det = np.abs(ii11 * ii22 - ii12 * ii12)
    assert det[form.mask].max() < 1e-6


def test_codazzi_corrected_vanishes_on_curved_graph():
    imm = graph_immersion(128)
    eps = default_eps_ladder(imm.grid)[-1]
    res = codazzi_residual(imm, eps)
    assert res["raw_max"] > 1e-3          # the identity has something to cancel
    assert res["corrected_max"] < 1e-8


def test_codazzi_region_restriction(cone):
    eps = default_eps_ladder(cone.grid)[-1]
    X1, X2 = cone.grid.mesh()
    ring = (np.hypot(X1 - 0.5, X2 - 0.5) > 0.1) & (np.hypot(X1 - 0.5, X2 - 0.5) < 0.2)
    full = codazzi_residual(cone, eps)
    part = codazzi_residual(cone, eps, region=ring)
    assert part["raw_max"] <= full["raw_max"] * (1 + 1e-12)


def test_coherence_residual_machine_small_on_cylinder(cylinder):
    # the cylinder's mollified normal and component determinants agree to
    # rounding at every scale, not just in the limit
    ladder = default_eps_ladder(cylinder.grid)
    for eps in (ladder[0], ladder[-1]):
        assert coherence_residual(cylinder, eps, 1) < 1e-10


def test_recover_potential_matches_component_gradient(cylinder):
    eps = default_eps_ladder(cylinder.grid)[-1]
    _, form = normal_and_II(cylinder, eps)
    rec = recover_potential(form)
    assert rec.m == 2


def test_classification_plane_flat():
    cls = detect_developability(plane_immersion(64))
    assert (cls.labels[cls.valid] == FLAT).all()


def test_classification_cylinder_ruled_along_axis(cylinder):
    cls = detect_developability(cylinder)
    ruled = cls.labels == RULED
    assert ruled.sum() > 0.99 * cls.valid.sum()
    gap = np.abs(np.mod(cls.theta[ruled] - np.pi / 2 + np.pi / 2, np.pi) - np.pi / 2)
    assert np.rad2deg(gap).max() < 2.0


def test_classification_cone_radial_with_apex(cone):
    cls = detect_developability(cone)
    n = cone.grid.n1
    singular = cls.labels == SINGULAR
    if singular.any():
        si, sj = np.nonzero(singular)
        assert np.abs(si - n // 2).max() <= 4
        assert np.abs(sj - n // 2).max() <= 4


def test_constancy_agreement_semantics(grid64):
    shape = (4, 4)
    g = Grid2D(8, 8, 1.0)
    base = dict(grid=g, params={})

    def mk(labels, theta):
        lab = np.full((8, 8), labels, dtype=np.int8)
        th = np.full((8, 8), theta, dtype=np.float64)
        return Classification(grid=g, labels=lab, theta=th,
                              valid=np.ones((8, 8), dtype=bool), params={})

    flat = mk(FLAT, np.nan)
    ruled_x = mk(RULED, 0.0)
    ruled_y = mk(RULED, np.pi / 2)
    sing = mk(SINGULAR, np.nan)

    assert constancy_agreement(flat, ruled_x) == 1.0       # flat matches anything
    assert constancy_agreement(ruled_x, ruled_x) == 1.0
    assert constancy_agreement(ruled_x, ruled_y) == 0.0    # 90 degrees apart
    assert constancy_agreement(sing, sing) == 1.0
    assert constancy_agreement(sing, ruled_x) == 0.0


def test_constancy_agreement_needs_overlap():
    g = Grid2D(8, 8, 1.0)
    a = Classification(grid=g, labels=np.zeros((8, 8), dtype=np.int8),
                       theta=np.zeros((8, 8)), valid=np.zeros((8, 8), dtype=bool),
                       params={})
    with pytest.raises(ValueError, match="common valid"):
        constancy_agreement(a, a)


def test_ruled_immersion_isometric():
    imm = ruled_immersion(128)
    assert imm.isometry_residual() < 1e-12
