import numpy as np

import vortexflow as vf


def test_gradient_of_constant_vanishes(grid128):
    f = vf.ScalarField(grid128, np.full((grid128.n, grid128.n), 3.7))
    g = vf.gradient(f)
    # roundoff of the one-sided edge closure only
    assert np.abs(g.ux).max() < 1e-13
    assert np.abs(g.uy).max() < 1e-13


def test_gradient_exact_on_quadratics(grid128):
    X, _ = grid128.meshgrid()
    f = vf.ScalarField(grid128, X ** 2)
    g = vf.gradient(f)
    # centered differences are exact on quadratics, including the one-sided edges
    np.testing.assert_allclose(g.ux, 2 * X, atol=1e-11)
    np.testing.assert_allclose(g.uy, 0.0, atol=1e-11)


def test_divergence_of_gradient_is_wide_five_point_laplacian(grid128):
    w = vf.gaussian_field(grid128, 1.0)
    composed = vf.divergence(vf.gradient(w))
    v = w.values
    h = grid128.h
    # the composition of centered stencils is the 5-point Laplacian at doubled spacing
    wide = (v[4:, 2:-2] + v[:-4, 2:-2] + v[2:-2, 4:] + v[2:-2, :-4]
            - 4.0 * v[2:-2, 2:-2]) / (2.0 * h) ** 2
    np.testing.assert_allclose(composed.values[2:-2, 2:-2], wide, rtol=0, atol=1e-14)


def test_compact_laplacian_consistency(grid128):
    w = vf.gaussian_field(grid128, 1.0)
    lap = vf.laplacian(w)
    X, Y = grid128.meshgrid()
    r2 = X ** 2 + Y ** 2
    exact = (r2 - 2.0) * w.values  # Laplacian of the unit Gaussian
    interior = (slice(1, -1), slice(1, -1))
    assert np.abs(lap.values[interior] - exact[interior]).max() < 2e-3  # O(h^2), h = 1/8
