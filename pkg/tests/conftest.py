import numpy as np
import pytest

from fracsob.field import Grid2D, ScalarField


@pytest.fixture
def grid64() -> Grid2D:
    return Grid2D(64, 64, 1.0)


@pytest.fixture
def grid128() -> Grid2D:
    return Grid2D(128, 128, 1.0)


@pytest.fixture
def smooth_field(grid64) -> ScalarField:
    X1, X2 = grid64.mesh()
    vals = np.sin(2 * np.pi * X1) * np.cos(4 * np.pi * X2) \
        + 0.5 * np.cos(2 * np.pi * (X1 + X2))
    return ScalarField(grid64, vals, name="smooth")


def pytest_addoption(parser):
    parser.addoption(
        "--skip-suite", action="store_true", default=False,
        help="skip the full acceptance suite (about a minute of compute)",
    )
