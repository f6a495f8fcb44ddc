"""Discrete differential operators on cell-centered fields.

All public stencils are centered second order in the interior with one-sided
second-order closures on the boundary ring.  `gradient4` is a private
higher-order variant used by the functional quadratures, where the extra
accuracy pays off in the multiplier formulas.
"""

import numpy as np

from .grid import ScalarField, VectorField


def _gradient_arrays(values, h):
    gx = np.empty_like(values)
    gy = np.empty_like(values)
    gx[1:-1, :] = (values[2:, :] - values[:-2, :]) / (2.0 * h)
    gx[0, :] = (-3.0 * values[0, :] + 4.0 * values[1, :] - values[2, :]) / (2.0 * h)
    gx[-1, :] = (3.0 * values[-1, :] - 4.0 * values[-2, :] + values[-3, :]) / (2.0 * h)
    gy[:, 1:-1] = (values[:, 2:] - values[:, :-2]) / (2.0 * h)
    gy[:, 0] = (-3.0 * values[:, 0] + 4.0 * values[:, 1] - values[:, 2]) / (2.0 * h)
    gy[:, -1] = (3.0 * values[:, -1] - 4.0 * values[:, -2] + values[:, -3]) / (2.0 * h)
    return gx, gy


def gradient(f: ScalarField) -> VectorField:
    """Centered-difference gradient of a scalar field."""
    gx, gy = _gradient_arrays(f.values, f.grid.h)
    return VectorField(f.grid, gx, gy)


def divergence(v: VectorField) -> ScalarField:
    """Centered-difference divergence of a vector field."""
    gx, _ = _gradient_arrays(v.ux, v.grid.h)
    _, gy = _gradient_arrays(v.uy, v.grid.h)
    return ScalarField(v.grid, gx + gy)


def laplacian(f: ScalarField) -> ScalarField:
    """Compact 5-point Laplacian (interior; boundary ring left at zero)."""
    h2 = f.grid.h ** 2
    out = np.zeros_like(f.values)
    v = f.values
    out[1:-1, 1:-1] = (v[2:, 1:-1] + v[:-2, 1:-1] + v[1:-1, 2:] + v[1:-1, :-2]
                       - 4.0 * v[1:-1, 1:-1]) / h2
    return ScalarField(f.grid, out)


def velocity(psi: ScalarField) -> VectorField:
    """Velocity u = (-d_y psi, d_x psi) by centered differences."""
    gx, gy = _gradient_arrays(psi.values, psi.grid.h)
    return VectorField(psi.grid, -gy, gx)


def gradient4_arrays(values, h):
    """Fourth-order centered gradient, degrading gracefully at the edges."""
    gx = np.empty_like(values)
    gy = np.empty_like(values)
    gx[2:-2, :] = (-values[4:, :] + 8.0 * values[3:-1, :]
                   - 8.0 * values[1:-3, :] + values[:-4, :]) / (12.0 * h)
    gy[:, 2:-2] = (-values[:, 4:] + 8.0 * values[:, 3:-1]
                   - 8.0 * values[:, 1:-3] + values[:, :-4]) / (12.0 * h)
    gx[1, :] = (values[2, :] - values[0, :]) / (2.0 * h)
    gx[-2, :] = (values[-1, :] - values[-3, :]) / (2.0 * h)
    gy[:, 1] = (values[:, 2] - values[:, 0]) / (2.0 * h)
    gy[:, -2] = (values[:, -1] - values[:, -3]) / (2.0 * h)
    gx[0, :] = (values[1, :] - values[0, :]) / h
    gx[-1, :] = (values[-1, :] - values[-2, :]) / h
    gy[:, 0] = (values[:, 1] - values[:, 0]) / h
    gy[:, -1] = (values[:, -1] - values[:, -2]) / h
    return gx, gy


def face_velocities(psi_values, h):
    """Discretely divergence-free face-normal velocities from a streamfunction.

    The streamfunction is averaged to cell corners and differenced along
    faces, so the per-cell flux divergence of (U, V) telescopes to zero
    exactly on interior cells.  U has shape (n+1, n) on x-faces, V has
    shape (n, n+1) on y-faces; boundary faces carry zero flux in the
    advection scheme and are returned only for CFL estimation.
    """
    n = psi_values.shape[0]
    psic = np.empty((n + 1, n + 1))
    psic[1:-1, 1:-1] = 0.25 * (psi_values[:-1, :-1] + psi_values[1:, :-1]
                               + psi_values[:-1, 1:] + psi_values[1:, 1:])
    psic[0, 1:-1] = 0.5 * (psi_values[0, :-1] + psi_values[0, 1:])
    psic[-1, 1:-1] = 0.5 * (psi_values[-1, :-1] + psi_values[-1, 1:])
    psic[1:-1, 0] = 0.5 * (psi_values[:-1, 0] + psi_values[1:, 0])
    psic[1:-1, -1] = 0.5 * (psi_values[:-1, -1] + psi_values[1:, -1])
    psic[0, 0] = psi_values[0, 0]
    psic[0, -1] = psi_values[0, -1]
    psic[-1, 0] = psi_values[-1, 0]
    psic[-1, -1] = psi_values[-1, -1]
    U = -(psic[:, 1:] - psic[:, :-1]) / h
    V = (psic[1:, :] - psic[:-1, :]) / h
    return U, V
