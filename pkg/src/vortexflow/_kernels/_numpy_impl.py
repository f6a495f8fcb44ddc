"""Pure-NumPy flux kernels (fallback when the compiled extension is absent).

Contracts are shared with `_core` (the Cython build): same shapes, same
flux formulas, zero-flux domain boundaries.
"""

import numpy as np

LIMITER_FROMM = 0
LIMITER_MINMOD = 1


def bernoulli(x):
    """B(x) = x / (e^x - 1), the exponential-fitting weight, stable near 0."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-8
    xs = x[~small]
    out[~small] = xs / np.expm1(xs)
    out[small] = 1.0 - 0.5 * x[small]
    return out


def sg_fluxes(omega, phi, h):
    """Scharfetter-Gummel face fluxes of J = -(grad w - w grad phi).

    Interior faces only: Fx has shape (n-1, n), Fy has shape (n, n-1).
    The flux vanishes identically on the discrete Gibbs state w = C e^phi.
    """
    dphix = phi[1:, :] - phi[:-1, :]
    Fx = (bernoulli(-dphix) * omega[:-1, :] - bernoulli(dphix) * omega[1:, :]) / h
    dphiy = phi[:, 1:] - phi[:, :-1]
    Fy = (bernoulli(-dphiy) * omega[:, :-1] - bernoulli(dphiy) * omega[:, 1:]) / h
    return Fx, Fy


def sg_tendency(omega, phi, h):
    """div(grad w - w grad phi) assembled from SG fluxes, zero-flux boundary."""
    Fx, Fy = sg_fluxes(omega, phi, h)
    out = np.zeros_like(omega)
    out[:-1, :] -= Fx / h
    out[1:, :] += Fx / h
    out[:, :-1] -= Fy / h
    out[:, 1:] += Fy / h
    return out


def _minmod(p, q):
    return np.where(p * q > 0.0, np.where(np.abs(p) < np.abs(q), p, q), 0.0)


def advect_tendency(omega, U, V, h, limiter=LIMITER_FROMM):
    """-div(u w) by upwind-biased linear reconstruction, conservative form.

    U (n+1, n) and V (n, n+1) are face-normal velocities; boundary faces
    carry zero flux.  limiter selects Fromm (central) or minmod slopes.
    """
    n = omega.shape[0]
    out = np.zeros_like(omega)

    d = np.zeros((n + 1, n))
    d[1:-1, :] = omega[1:, :] - omega[:-1, :]
    if limiter == LIMITER_MINMOD:
        slope = 0.5 * _minmod(d[:-1, :], d[1:, :])
    else:
        slope = 0.25 * (d[:-1, :] + d[1:, :])
    uf = U[1:-1, :]
    Fx = np.where(uf >= 0.0,
                  uf * (omega[:-1, :] + slope[:-1, :]),
                  uf * (omega[1:, :] - slope[1:, :]))
    out[:-1, :] -= Fx / h
    out[1:, :] += Fx / h

    d = np.zeros((n, n + 1))
    d[:, 1:-1] = omega[:, 1:] - omega[:, :-1]
    if limiter == LIMITER_MINMOD:
        slope = 0.5 * _minmod(d[:, :-1], d[:, 1:])
    else:
        slope = 0.25 * (d[:, :-1] + d[:, 1:])
    vf = V[:, 1:-1]
    Fy = np.where(vf >= 0.0,
                  vf * (omega[:, :-1] + slope[:, :-1]),
                  vf * (omega[:, 1:] - slope[:, 1:]))
    out[:, :-1] -= Fy / h
    out[:, 1:] += Fy / h
    return out
