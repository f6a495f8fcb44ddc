"""Scalar diagnostics of a vorticity snapshot.

Everything here is a midpoint quadrature on the cell-centered grid.  The
gradient of the streamfunction entering the moment integrals uses the
fourth-order stencil: the multiplier denominator D = 2I * int(w |grad psi|^2)
- V^2 is a near-cancelling difference and needs the extra accuracy.

Conventions match the evolved model: psi carries the decaying-log gauge
produced by `solve_streamfunction`, I and V are recentered on the measured
center of vorticity, entropy uses 0 log 0 = 0.
"""

from dataclasses import dataclass, fields

import numpy as np

from .errors import DegenerateDenominator, SupportMismatch, ZeroMass
from .grid import ScalarField
from .operators import gradient4_arrays
from .poisson import solve_streamfunction

EPS_D = 1e-6  # degeneracy guard on D(omega); vortex patches land below it

FOUR_PI = 4.0 * np.pi
EIGHT_PI = 8.0 * np.pi


@dataclass
class Functionals:
    """One diagnostics row; field order defines the CSV layout."""

    time: float = np.nan
    mass: float = np.nan
    Mx: float = np.nan
    My: float = np.nan
    I: float = np.nan
    E: float = np.nan
    S: float = np.nan
    enstrophy: float = np.nan
    gradpsi_moment: float = np.nan
    V: float = np.nan
    D: float = np.nan
    a: float = np.nan
    b: float = np.nan
    dissipation_rate: float = np.nan
    l1_dist_to_reference: float = np.nan
    rel_entropy_to_reference: float = np.nan
    loghls_gap: float = np.nan
    energy_lower_gap: float = np.nan
    clipped_mass: float = np.nan

    @classmethod
    def column_names(cls):
        return [f.name for f in fields(cls)]

    def as_row(self):
        return [getattr(self, name) for name in self.column_names()]

    def as_dict(self):
        return {name: getattr(self, name) for name in self.column_names()}


def moments(omega: ScalarField):
    """(mass, center M, inertia I); I is half the centered second moment."""
    if omega.values.min() < 0:
        raise ValueError("moments expects a nonnegative field")
    w = omega.values
    area = omega.grid.cell_area
    mass = float(w.sum() * area)
    if mass < 1e-12:
        raise ZeroMass(f"mass {mass:.3e}")
    X, Y = omega.grid.meshgrid()
    Mx = float((X * w).sum() * area / mass)
    My = float((Y * w).sum() * area / mass)
    I = float(0.5 * (((X - Mx) ** 2 + (Y - My) ** 2) * w).sum() * area)
    return mass, (Mx, My), I


def energy(omega: ScalarField, psi: ScalarField):
    """Interaction energy E = (h^2/2) sum(psi * omega)."""
    return float(0.5 * (psi.values * omega.values).sum() * omega.grid.cell_area)


def entropy(omega: ScalarField):
    """S = h^2 sum(w log w) with 0 log 0 = 0."""
    w = omega.values
    pos = w > 0.0
    return float((w[pos] * np.log(w[pos])).sum() * omega.grid.cell_area)


def _psi_gradient(psi: ScalarField):
    return gradient4_arrays(psi.values, psi.grid.h)


def interaction_moments(omega: ScalarField, psi: ScalarField, center=(0.0, 0.0)):
    """(enstrophy, int w |grad psi|^2, virial V), V recentered on `center`."""
    w = omega.values
    area = omega.grid.cell_area
    gx, gy = _psi_gradient(psi)
    X, Y = omega.grid.meshgrid()
    enstrophy = float((w * w).sum() * area)
    gradpsi_moment = float((w * (gx * gx + gy * gy)).sum() * area)
    V = float((w * ((X - center[0]) * gx + (Y - center[1]) * gy)).sum() * area)
    return enstrophy, gradpsi_moment, V


def multipliers(omega: ScalarField, psi: ScalarField = None, eps_d: float = EPS_D):
    """Lagrange multipliers (a, b) of the constrained flow, plus D.

    Solves the 2x2 moment system

        b * int(w |grad psi|^2) + a * V = int(w^2)
        b * V + 2 a * I = -2

    whose determinant D = 2 I int(w |grad psi|^2) - V^2 is the
    Cauchy-Schwarz gap; D < eps_d raises DegenerateDenominator (the
    circular-patch family sits at D = 0, where the flow is ill-posed).
    """
    if psi is None:
        psi = solve_streamfunction(omega)
    _, center, I = moments(omega)
    enstrophy, gradpsi_moment, V = interaction_moments(omega, psi, center)
    D = 2.0 * I * gradpsi_moment - V * V
    if D < eps_d:
        raise DegenerateDenominator(D, eps_d)
    b = (2.0 * I * enstrophy + 2.0 * V) / D
    a = -(2.0 * gradpsi_moment + V * enstrophy) / D
    return a, b, D


def relative_entropy(omega: ScalarField, rho: ScalarField, support_tol: float = 1e-14):
    """int w log(w / rho); raises SupportMismatch where w > tol but rho = 0."""
    w = omega.values
    r = rho.values
    bad = (r <= 0.0) & (w > support_tol)
    if bad.any():
        raise SupportMismatch(f"{int(bad.sum())} cells have omega > {support_tol:g} where rho = 0")
    pos = (w > 0.0) & (r > 0.0)
    return float((w[pos] * np.log(w[pos] / r[pos])).sum() * omega.grid.cell_area)


def inequality_gaps(omega: ScalarField, psi: ScalarField = None):
    """(log-HLS gap, energy-lower-bound gap), both nonnegative in exact arithmetic.

    log-HLS:  S - 8 pi E + (1 + log pi) >= 0.
    energy lower bound:  E + log(4 I) / (8 pi) >= 0.
    """
    if psi is None:
        psi = solve_streamfunction(omega)
    _, _, I = moments(omega)
    E = energy(omega, psi)
    S = entropy(omega)
    loghls_gap = S - EIGHT_PI * E + (1.0 + np.log(np.pi))
    energy_lower_gap = E + np.log(4.0 * I) / EIGHT_PI
    return float(loghls_gap), float(energy_lower_gap)


def dissipation_rate(omega: ScalarField, psi: ScalarField, a: float, b: float):
    """Entropy dissipation density int w |grad(log w - b psi - a |x|^2 / 2)|^2.

    Assembled on cell faces with arithmetically averaged w, the same two-point
    structure the drift-diffusion fluxes use; faces touching empty cells are
    skipped (0 log 0 convention).
    """
    g = omega.grid
    w = omega.values
    X, Y = g.meshgrid()
    pos = w > 0.0
    arg = np.zeros_like(w)
    arg[pos] = np.log(w[pos])
    arg -= b * psi.values + 0.5 * a * (X * X + Y * Y)

    dx = (arg[1:, :] - arg[:-1, :]) / g.h
    wx = 0.5 * (w[1:, :] + w[:-1, :])
    mx = pos[1:, :] & pos[:-1, :]
    dy = (arg[:, 1:] - arg[:, :-1]) / g.h
    wy = 0.5 * (w[:, 1:] + w[:, :-1])
    my = pos[:, 1:] & pos[:, :-1]
    total = (wx * dx * dx)[mx].sum() + (wy * dy * dy)[my].sum()
    return float(total * g.cell_area)


def evaluate(omega: ScalarField, psi: ScalarField = None, reference: ScalarField = None,
             eps_d: float = EPS_D, clipped_mass: float = np.nan) -> Functionals:
    """Full diagnostics record for one snapshot.

    Near-degenerate fields (D < eps_d) get NaN multipliers instead of an
    exception so that diagnosis of patch-like states still produces a row.
    """
    if psi is None:
        psi = solve_streamfunction(omega)
    mass, center, I = moments(omega)
    enstrophy, gradpsi_moment, V = interaction_moments(omega, psi, center)
    E = energy(omega, psi)
    S = entropy(omega)
    D = 2.0 * I * gradpsi_moment - V * V
    rec = Functionals(
        time=omega.time, mass=mass, Mx=center[0], My=center[1], I=I, E=E, S=S,
        enstrophy=enstrophy, gradpsi_moment=gradpsi_moment, V=V, D=D,
        loghls_gap=S - EIGHT_PI * E + (1.0 + np.log(np.pi)),
        energy_lower_gap=E + np.log(4.0 * I) / EIGHT_PI,
        clipped_mass=clipped_mass,
    )
    if D >= eps_d:
        rec.b = (2.0 * I * enstrophy + 2.0 * V) / D
        rec.a = -(2.0 * gradpsi_moment + V * enstrophy) / D
        rec.dissipation_rate = dissipation_rate(omega, psi, rec.a, rec.b)
    if reference is not None:
        rec.l1_dist_to_reference = float(
            np.abs(omega.values - reference.values).sum() * omega.grid.cell_area)
        try:
            rec.rel_entropy_to_reference = relative_entropy(omega, reference)
        except SupportMismatch:
            rec.rel_entropy_to_reference = np.nan
    return rec
