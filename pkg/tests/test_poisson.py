"""Free-space solve: radial oracle, inverse consistency, far field, symmetry."""

import numpy as np
from scipy.integrate import quad

import vortexflow as vf


def gaussian_psi_oracle(r, sigma2=1.0):
    """psi(r) = -(circ(r) log r + int_r^inf log s w(s) 2 pi s ds) / (2 pi)."""
    circ = 1.0 - np.exp(-0.5 * r * r / sigma2)
    tail, _ = quad(lambda s: np.log(s) * np.exp(-0.5 * s * s / sigma2) / sigma2 * s,
                   r, np.inf)
    return -(circ * np.log(r) + tail) / (2.0 * np.pi)


def test_zero_field_gives_zero_psi(grid128):
    zero = vf.ScalarField(grid128, np.zeros((grid128.n, grid128.n)))
    psi = vf.solve_streamfunction(zero)
    assert np.all(psi.values == 0.0)


def test_gaussian_psi_matches_radial_oracle():
    g = vf.make_grid(256, 8.0)
    w = vf.gaussian_field(g, 1.0)
    psi = vf.solve_streamfunction(w)
    c = g.coords()
    i = np.argmin(np.abs(c - 6.0))
    j = np.argmin(np.abs(c - 0.0))
    r = np.hypot(c[i], c[j])
    assert abs(psi.values[i, j] - gaussian_psi_oracle(r)) < 1e-3


def test_poisson_inverse_consistency_second_order():
    errs = []
    for n in (128, 256):
        g = vf.make_grid(n, 8.0)
        w = vf.gaussian_field(g, 1.0)
        psi = vf.solve_streamfunction(w)
        lap = vf.laplacian(psi)
        resid = np.abs(lap.values[1:-1, 1:-1] + w.values[1:-1, 1:-1]).max()
        errs.append(resid)
    assert errs[1] < errs[0] / 3.0  # empirically order 2
    assert errs[1] < 5e-4


def test_far_field_log_law():
    g = vf.make_grid(256, 8.0)
    w = vf.gaussian_field(g, 0.5)
    psi = vf.solve_streamfunction(w)
    R = g.radius()
    band = np.abs(R - 0.75 * g.half_width) < g.h
    resid = np.abs(psi.values[band] + np.log(R[band]) / (2 * np.pi)).max()
    assert resid < 1e-6


def test_velocity_is_azimuthal_for_radial_field(grid128):
    w = vf.gaussian_field(grid128, 1.0)
    psi = vf.solve_streamfunction(w)
    u = vf.velocity(psi)
    X, Y = grid128.meshgrid()
    R = grid128.radius()
    radial_comp = (u.ux * X + u.uy * Y) / R
    mask = (R > 0.5) & (R < 6.0)  # skip origin noise and the boundary ring
    assert np.abs(radial_comp[mask]).max() < 5e-4


def test_velocity_magnitude_matches_circulation():
    g = vf.make_grid(256, 8.0)
    sigma2 = 1.0
    w = vf.gaussian_field(g, sigma2)
    u = vf.velocity(vf.solve_streamfunction(w))
    R = g.radius()
    speed = np.hypot(u.ux, u.uy)
    expected = (1.0 - np.exp(-0.5 * R ** 2 / sigma2)) / (2 * np.pi * R)
    mask = (R > 0.5) & (R < 5.0)
    rel = np.abs(speed[mask] / expected[mask] - 1.0).max()
    assert rel < 2e-3  # O(h^2) at h = 0.0625


def test_patch_core_drift_is_linear():
    # inside a uniform patch the induced drift is w grad psi = -w x / (2 pi R^2)
    g = vf.make_grid(256, 4.0)
    R0 = 1.0
    w = vf.patch_field(g, R0, 0.05)
    psi = vf.solve_streamfunction(w)
    gx, gy = np.gradient(psi.values, g.h, edge_order=2)
    X, Y = g.meshgrid()
    R = g.radius()
    core = R < 0.6 * R0
    np.testing.assert_allclose(gx[core], -X[core] / (2 * np.pi * R0 ** 2),
                               atol=2e-3 / (2 * np.pi))
    np.testing.assert_allclose(gy[core], -Y[core] / (2 * np.pi * R0 ** 2),
                               atol=2e-3 / (2 * np.pi))


def test_velocity_discretely_divergence_free(grid128):
    w = vf.gaussian_field(grid128, 1.0)
    u = vf.velocity(vf.solve_streamfunction(w))
    div = vf.divergence(u)
    interior = div.values[2:-2, 2:-2]
    assert np.abs(interior).max() < 1e-10  # centered cross-derivatives cancel exactly


def test_rotational_equivariance(grid128):
    # a radial field is itself invariant under quarter turns, and so is its psi
    w = vf.gaussian_field(grid128, 1.0)
    assert np.array_equal(np.rot90(w.values), w.values)
    psi = vf.solve_streamfunction(w)
    psi_of_rot = vf.solve_streamfunction(vf.ScalarField(grid128, np.rot90(w.values).copy()))
    np.testing.assert_array_equal(psi_of_rot.values, psi.values)

    # a shifted field: psi co-rotates, the speed field co-rotates
    w2 = vf.gaussian_field(grid128, 0.8, center=(1.0, 0.4))
    psi2 = vf.solve_streamfunction(w2)
    rot = vf.ScalarField(grid128, np.rot90(w2.values).copy())
    psi2_rot = vf.solve_streamfunction(rot)
    np.testing.assert_allclose(psi2_rot.values, np.rot90(psi2.values), atol=1e-12)
    speed = np.hypot(*(lambda u: (u.ux, u.uy))(vf.velocity(psi2)))
    speed_rot = np.hypot(*(lambda u: (u.ux, u.uy))(vf.velocity(psi2_rot)))
    np.testing.assert_allclose(speed_rot, np.rot90(speed), atol=1e-11)
