"""Shooting construction: normalization, functionals, inverse problem."""

import numpy as np
import pytest

import vortexflow as vf
from vortexflow.errors import NoSolutionInRange, OutOfRange
from vortexflow.meanfield import _z_of_chi

from conftest import EIGHT_PI

B4 = 4 * np.pi


def test_normalization_limits():
    z_neg = _z_of_chi(-1.0, B4, -20.0, rtol=1e-10)
    z_pos = _z_of_chi(-1.0, B4, 20.0, rtol=1e-10)
    assert z_neg < 0.05
    assert abs(z_pos - 2.0) < 0.1  # 8 pi / b = 2 at b = 4 pi


def test_normalization_monotone():
    chis = np.linspace(-12, 12, 41)
    zs = [_z_of_chi(-1.0, B4, c, rtol=1e-10) for c in chis]
    assert all(z2 >= z1 - 1e-8 for z1, z2 in zip(zs, zs[1:]))


def test_normalize_hits_unit_mass():
    chi = vf.normalize(-1.0, B4)
    assert abs(_z_of_chi(-1.0, B4, chi, rtol=1e-12) - 1.0) < 1e-10


def test_normalize_rejects_large_b():
    with pytest.raises(OutOfRange):
        vf.normalize(-1.0, EIGHT_PI)
    with pytest.raises(OutOfRange):
        vf.canonical_solution(-1.0, 26.0)


def test_normalize_bracket_direction_independent():
    # approaching the root from a tighter bracket gives the same shift
    chi1 = vf.normalize(-1.0, B4)
    chi2 = vf.normalize(-1.0, B4, tol=1e-11)
    assert abs(chi1 - chi2) < 1e-9


def test_shoot_profile_invariants():
    prof = vf.shoot(-1.0, B4, chi=0.0)
    assert abs(prof.Hdot[0] - 2.0) < 1e-9          # left boundary condition
    assert np.all(np.diff(prof.Hdot) <= 1e-12)     # Hdot nonincreasing
    # auxiliary energy 0.5 Hdot^2 + b e^G is nonincreasing and caps b e^G at 2
    en = prof.auxiliary_energy(-1.0, B4)
    assert np.all(np.diff(en) <= 1e-9)
    G = prof.H + 0.5 * (-1.0) * np.exp(2.0 * (prof.t_grid - 0.5 * prof.chi))
    assert (B4 * np.exp(G)).max() <= 2.0 + 1e-9


def test_gaussian_branch():
    sol = vf.canonical_solution(-0.5, 0.0)
    assert sol.I == pytest.approx(2.0)
    assert sol.S == pytest.approx(-1.0 - np.log(4 * np.pi))
    assert sol.E == pytest.approx(vf.gaussian_energy(2.0))
    assert sol.pohozaev_residual == 0.0


def test_small_b_joins_gaussian_branch():
    sol = vf.canonical_solution(-1.0, 0.02)
    assert abs(sol.I - 1.0) < 1e-3
    assert abs(sol.E - vf.gaussian_energy(1.0)) < 1e-3
    assert abs(sol.mass - 1.0) < 1e-9


def test_canonical_solution_moment_identity():
    sol = vf.canonical_solution(-1.0, B4)
    assert abs(sol.mass - 1.0) < 1e-9
    assert sol.pohozaev_residual < 1e-6
    # fixed-b family: I |a| = 1 - b / (8 pi)
    assert abs(sol.I - 0.5) < 1e-8


def test_inertia_decreases_toward_eight_pi():
    inertias = [vf.canonical_solution(-1.0, b).I for b in (B4, 6 * np.pi, 7 * np.pi)]
    assert inertias[0] > inertias[1] > inertias[2]


def test_streamfunction_gauge_is_decaying():
    sol = vf.canonical_solution(-1.0, B4)
    far = sol.r > 50.0
    resid = np.abs(sol.psi[far] + np.log(sol.r[far]) / (2 * np.pi))
    assert resid.max() < 1e-6


def test_entropy_separation_along_constant_energy():
    # dS/dI = a < 0 at fixed E: shrinking I at matched E must raise S.
    # The b = 0 endpoint bounds the admissible window: I >= e^(gamma - 8 pi E)/4,
    # so the shrink factors stay above that endpoint for the b = 6 pi base.
    base = vf.canonical_solution(-1.0, 6 * np.pi)
    assert 0.88 * base.I > np.exp(np.euler_gamma - EIGHT_PI * base.E) / 4.0
    entropies = [base.S]
    for shrink in (0.95, 0.88):
        a, b = vf.microcanonical_solve(base.E, shrink * base.I)
        sol = vf.canonical_solution(a, b)
        assert abs(sol.E - base.E) < 1e-5
        entropies.append(sol.S)
    assert entropies[0] < entropies[1] < entropies[2]


def test_inertia_monotone_in_a():
    vals = [vf.canonical_solution(a, B4).I for a in (-2.0, -1.0, -0.5)]
    assert vals[0] < vals[1] < vals[2]


def test_microcanonical_gaussian_target():
    a, b = vf.microcanonical_solve(vf.gaussian_energy(2.0), 2.0)
    assert a == pytest.approx(-0.5)
    assert b == 0.0


def test_microcanonical_round_trip():
    sol = vf.canonical_solution(-1.0, B4)
    a, b = vf.microcanonical_solve(sol.E, sol.I)
    assert abs(a + 1.0) < 1e-4
    assert abs(b - B4) / B4 < 1e-4


def test_microcanonical_below_gaussian_energy():
    with pytest.raises(NoSolutionInRange):
        vf.microcanonical_solve(vf.gaussian_energy(2.0) - 0.05, 2.0)
    with pytest.raises(OutOfRange):
        vf.microcanonical_solve(0.0, -1.0)


def test_sample_on_grid_gaussian_branch():
    g = vf.make_grid(128, 8.0)
    sol = vf.canonical_solution(-1.0, 0.0)
    sampled = vf.sample_on_grid(sol, g)
    direct = vf.gaussian_field(g, 1.0)
    assert np.abs(sampled.values - direct.values).max() < 1e-5


def test_sample_on_grid_moments_match():
    sol = vf.canonical_solution(-1.0, B4)
    g = vf.make_grid(256, 9.0)
    sampled = vf.sample_on_grid(sol, g)
    _, _, I = vf.moments(sampled)
    assert abs(I - sol.I) / sol.I < 5e-3


def test_sample_on_grid_multiplier_recovery():
    sol = vf.canonical_solution(-1.0, B4)
    g = vf.make_grid(256, 9.0)
    sampled = vf.sample_on_grid(sol, g)
    a, b, _ = vf.multipliers(sampled)
    assert abs(a - sol.a) / abs(sol.a) < 0.01
    assert abs(b - sol.b) / sol.b < 0.01


def test_sample_on_grid_mass_loss():
    g = vf.make_grid(16, 0.5)  # far too small for the state
    sol = vf.canonical_solution(-1.0, B4)
    with pytest.raises(vf.errors.MassLoss):
        vf.sample_on_grid(sol, g)
