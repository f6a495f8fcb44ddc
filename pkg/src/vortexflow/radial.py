"""Quadrature helpers for radially symmetric densities.

A profile is a pair of arrays (r, w) with r strictly increasing and w the
density at radius r; an optional w0 gives the r -> 0 limit.  These helpers
back the grid sampling of shooting solutions and the closed-form
cross-checks of the reference states.
"""

import numpy as np

from .errors import MassLoss
from .grid import Grid, ScalarField


def profile_mass(r, w):
    return float(np.trapezoid(2.0 * np.pi * r * w, r))


def profile_inertia(r, w):
    return float(np.trapezoid(np.pi * r ** 3 * w, r))


def profile_entropy(r, w):
    integrand = np.where(w > 0, w * np.log(np.maximum(w, 1e-300)), 0.0)
    return float(np.trapezoid(2.0 * np.pi * r * integrand, r))


def profile_streamfunction(r, w):
    """psi(r) in the decaying-log gauge, from the circulation integrals."""
    ring = 2.0 * np.pi * r * w
    circ = np.concatenate([[0.0], np.cumsum(0.5 * (ring[1:] + ring[:-1]) * np.diff(r))])
    logr = np.log(r)
    tail_d = 0.5 * (ring[1:] * logr[1:] + ring[:-1] * logr[:-1]) * np.diff(r)
    tail = np.concatenate([[0.0], np.cumsum(tail_d)])
    tail = tail[-1] - tail
    return -(circ * logr + tail) / (2.0 * np.pi)


def profile_energy(r, w):
    """E = (1/2) int psi w dx via the radial streamfunction (gauge-free value)."""
    psi = profile_streamfunction(r, w)
    return float(np.trapezoid(np.pi * r * psi * w, r))


def sample_profile(grid: Grid, r, w, w0=None, min_mass=0.999, renormalize=True,
                   time=0.0) -> ScalarField:
    """Interpolate a radial profile onto a grid and renormalize to unit mass.

    Linear interpolation in r; radii beyond the table evaluate to zero, radii
    below it to w0 (or the first table value).  Raises MassLoss when the grid
    captures less than `min_mass` of the profile before renormalization.
    """
    R = grid.radius()
    left = float(w[0] if w0 is None else w0)
    vals = np.interp(R.ravel(), r, w, left=left, right=0.0).reshape(R.shape)
    field = ScalarField(grid, vals, time)
    pre_mass = field.mass()
    if pre_mass < min_mass:
        raise MassLoss(f"grid captures mass {pre_mass:.6f} < {min_mass}")
    return field.normalized() if renormalize else field
