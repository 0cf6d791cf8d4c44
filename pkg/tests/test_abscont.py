import numpy as np
import pytest

from fracsob.abscont import (
    Curve1D,
    ac_modulus,
    ac_monotone_check,
    content_ladder,
    curve_image_dimension,
    default_r_ladder,
    hausdorff_content,
    hilbert_curve,
    power_cusp_curve,
    smooth_arc_curve,
)


@pytest.fixture
def line() -> Curve1D:
    return Curve1D(np.column_stack([np.linspace(0, 1, 2049), np.zeros(2049)]))


def test_line_modulus_fills_budget(line):
    # unit-speed straight line at t = 0, p = 1: the packed sum equals the
    # interval budget up to dyadic granularity
    for delta in (0.32, 0.08, 0.02):
        assert ac_modulus(line, 0.0, 1.0, delta) == pytest.approx(delta, rel=0.05)


def test_modulus_monotone_in_delta(line):
    cusp = power_cusp_curve(2048, 0.25)
    vals = [ac_modulus(cusp, 0.4, 2.0, d) for d in (0.32, 0.16, 0.08, 0.04)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_modulus_monotone_under_restriction():
    cusp = power_cusp_curve(2048, 0.25)
    half = Curve1D(cusp.values[:1025], length=0.5)
    assert ac_modulus(half, 0.4, 2.0, 0.08) <= ac_modulus(cusp, 0.4, 2.0, 0.08) * (1 + 1e-12)


def test_modulus_rejects_tiny_delta(line):
    with pytest.raises(ValueError, match="sample spacing"):
        ac_modulus(line, 0.4, 2.0, 1e-6)


def test_monotone_check_rejects_bad_exponents():
    cusp = power_cusp_curve(1024, 0.25)
    with pytest.raises(ValueError, match="exponent condition"):
        ac_monotone_check(cusp, 0.4, 2.0, 0.0, 0.5, deltas=[0.32, 0.08])


def test_hilbert_content_exact_half():
    for order in (4, 5, 6):
        curve = hilbert_curve(order)
        ladder = [2.0 ** (-j) for j in range(1, order + 1)]
        if len(ladder) < 4:
            ladder.append(ladder[-1] / 2)
        assert hausdorff_content(curve.values, 2.0, ladder) == pytest.approx(0.5, rel=1e-9)


def test_content_monotone_in_exponent():
    curve = hilbert_curve(5)
    ladder = [2.0 ** (-j) for j in range(1, 6)]
    c2 = hausdorff_content(curve.values, 2.0, ladder)
    c3 = hausdorff_content(curve.values, 3.0, ladder)
    assert c3 <= c2 * (1 + 1e-12)


def test_content_ladder_validation():
    pts = np.random.default_rng(3).uniform(size=(64, 2))
    with pytest.raises(ValueError, match="empty point set"):
        content_ladder(np.zeros((0, 2)), 2.0, [0.5, 0.25, 0.125, 0.0625])
    with pytest.raises(ValueError, match="at least 4"):
        content_ladder(pts, 2.0, [0.5, 0.25])
    with pytest.raises(ValueError, match="not geometric"):
        content_ladder(pts, 2.0, [0.5, 0.4, 0.1, 0.01])


def test_default_r_ladder_geometric():
    pts = np.random.default_rng(11).uniform(size=(256, 2))
    ladder = default_r_ladder(pts)
    assert len(ladder) >= 4
    ratios = [a / b for a, b in zip(ladder, ladder[1:])]
    assert max(ratios) / min(ratios) < 1.5


def test_curve_image_dimension_scope():
    smooth = smooth_arc_curve(2048)
    rep = curve_image_dimension(smooth, 0.9, 2.0)
    assert rep["decreasing"]
    assert rep["exponent"] == pytest.approx(1 / 0.9 + 0.1)
    with pytest.raises(ValueError, match="out of theorem scope"):
        curve_image_dimension(smooth, 0.4, 2.0)


def test_hilbert_curve_fills_unit_square():
    curve = hilbert_curve(6)
    assert curve.values.min() >= 0.0
    assert curve.values.max() <= 1.0
    # every dyadic cell at the curve's own scale is visited
    n_cells = 2**6
    idx = np.floor(curve.values * n_cells).clip(max=n_cells - 1).astype(int)
    visited = np.zeros((n_cells, n_cells), dtype=bool)
    visited[idx[:, 0], idx[:, 1]] = True
    assert visited.all()


def test_power_cusp_endpoints():
    c = power_cusp_curve(1024, 0.25)
    assert c.values[0, 0] == pytest.approx(0.0)
    assert np.isfinite(c.values).all()
