import numpy as np
import pytest

import vortexflow as vf

FOUR_PI = 4.0 * np.pi
EIGHT_PI = 8.0 * np.pi


@pytest.fixture(scope="session")
def grid128():
    return vf.make_grid(128, 8.0)


@pytest.fixture(scope="session")
def grid256():
    return vf.make_grid(256, 8.0)


@pytest.fixture(scope="session")
def unit_gaussian_128(grid128):
    return vf.gaussian_field(grid128, 1.0)


@pytest.fixture(scope="session")
def unit_gaussian_256(grid256):
    return vf.gaussian_field(grid256, 1.0)


def l1_distance(f, g):
    return float(np.abs(f.values - g.values).sum() * f.grid.cell_area)


def gaussian_mixture(grid, params, rng=None):
    """Positive unit-mass mixture of Gaussians; params: [(weight, sigma2, cx, cy)]."""
    X, Y = grid.meshgrid()
    vals = np.zeros((grid.n, grid.n))
    for wgt, s2, cx, cy in params:
        vals += wgt * np.exp(-((X - cx) ** 2 + (Y - cy) ** 2) / (2 * s2)) / (2 * np.pi * s2)
    return vf.ScalarField(grid, vals).normalized()
