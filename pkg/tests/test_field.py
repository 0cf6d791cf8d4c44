import numpy as np
import pytest

from fracsob.field import (
    FracIndex,
    Grid2D,
    ScalarField,
    VectorField,
    disk_mask,
    gradient,
    load_field,
    lp_norm,
    sample,
    save_field,
    second_derivatives,
    window_mask,
)


def test_grid_mesh_shapes(grid64):
    X1, X2 = grid64.mesh()
    assert X1.shape == (64, 64)
    assert X1[1, 0] - X1[0, 0] == pytest.approx(grid64.h1)
    assert X2[0, 1] - X2[0, 0] == pytest.approx(grid64.h2)


def test_frac_index_validation():
    idx = FracIndex(2 / 3, 3.0)
    assert idx.s * idx.p == pytest.approx(2.0)
    with pytest.raises(ValueError):
        FracIndex(1.5, 3.0)
    with pytest.raises(ValueError):
        FracIndex(0.5, 0.5)


def test_scalar_field_values_frozen(grid64):
    f = ScalarField(grid64, np.zeros((64, 64)))
    with pytest.raises(ValueError):
        f.values[0, 0] = 1.0


def test_gradient_spectral_matches_analytic(grid64):
    X1, X2 = grid64.mesh()
    k = 2 * np.pi
    f = ScalarField(grid64, np.sin(k * X1) * np.cos(k * X2))
    d = gradient(f, scheme="spectral")
    assert np.abs(d[0].values - k * np.cos(k * X1) * np.cos(k * X2)).max() < 1e-10
    assert np.abs(d[1].values + k * np.sin(k * X1) * np.sin(k * X2)).max() < 1e-10


def test_gradient_affine_part_added(grid64):
    f = ScalarField(grid64, np.zeros((64, 64)), affine=(2.0, -1.0))
    d = gradient(f, scheme="spectral")
    assert np.all(d[0].values == 2.0)
    assert np.all(d[1].values == -1.0)


def test_gradient_unknown_scheme(grid64):
    f = ScalarField(grid64, np.zeros((64, 64)))
    with pytest.raises(ValueError):
        gradient(f, scheme="upwind")


def test_second_derivatives_schemes_agree_on_smooth(grid128):
    X1, X2 = grid128.mesh()
    k = 2 * np.pi
    f = ScalarField(grid128, np.sin(k * X1 + 0.3) * np.cos(k * X2))
    exact = -(k**2) * np.sin(k * X1 + 0.3) * np.cos(k * X2)
    d11_s, _, _ = second_derivatives(f, scheme="spectral")
    d11_c, _, _ = second_derivatives(f, scheme="centered")
    assert np.abs(d11_s - exact).max() < 1e-9
    # centered stencil carries an O(h^2) truncation error
    assert np.abs(d11_c - exact).max() < k**4 * grid128.h1**2


def test_lp_norm_homogeneous(grid64, smooth_field):
    a = lp_norm(smooth_field, 3.0)
    doubled = ScalarField(grid64, 2.0 * smooth_field.values)
    assert lp_norm(doubled, 3.0) == pytest.approx(2.0 * a, rel=1e-12)


def test_masks_cover_expected_fraction(grid64):
    w = window_mask(grid64, 0.25)
    assert w.mean() == pytest.approx(0.25, abs=0.05)
    d = disk_mask(grid64, 0.25)
    assert d.mean() == pytest.approx(np.pi * 0.25**2, abs=0.02)


def test_save_load_round_trip_scalar(tmp_path, smooth_field):
    path = tmp_path / "f.bin"
    save_field(smooth_field, path)
    back = load_field(path)
    assert np.array_equal(back.values, smooth_field.values)
    assert back.grid == smooth_field.grid


def test_save_load_round_trip_map_with_affine(tmp_path, grid64):
    comps = (
        ScalarField(grid64, np.zeros((64, 64)), affine=(1.0, 0.0)),
        ScalarField(grid64, 0.1 * np.sin(2 * np.pi * grid64.mesh()[0]),
                    affine=(0.0, 1.0)),
    )
    f = VectorField(comps)
    path = tmp_path / "map.bin"
    save_field(f, path)
    back = load_field(path)
    assert back.m == 2
    for orig, rec in zip(f.components, back.components):
        assert rec.affine == orig.affine
        assert np.array_equal(rec.values, orig.values)


def test_load_field_size_mismatch(tmp_path, smooth_field):
    path = tmp_path / "f.bin"
    save_field(smooth_field, path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ValueError, match="header implies"):
        load_field(path)


def test_sample_closed_form(grid64):
    f = sample(lambda x1, x2: np.sin(2 * np.pi * x1), grid64)
    X1, _ = grid64.mesh()
    assert np.allclose(f.values, np.sin(2 * np.pi * X1))


def test_sample_rejects_non_finite(grid64):
    with np.errstate(divide="ignore"):
        with pytest.raises(ValueError, match="non-finite"):
            sample(lambda x1, x2: 1.0 / (x1 + x2), grid64)
