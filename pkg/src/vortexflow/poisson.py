"""Free-space Poisson solve psi = -Laplace^{-1} omega on the open plane.

The solve is a discrete convolution with the exact logarithmic kernel
g(x) = -log|x| / (2 pi), evaluated by zero-padding the field to a 2n x 2n
domain so the circular FFT convolution reproduces the free-space one.  A
periodic solve is deliberately avoided: the energy functional and the log
tail of psi depend on the free-space kernel.

The kernel's singular self-cell is replaced by the analytic average of g
over one h x h cell,

    <g>_cell = -(log h + pi/4 - 3/2 - log(2)/2) / (2 pi),

which keeps the quadrature second-order accurate.
"""

import numpy as np

from .grid import ScalarField

_KERNEL_CACHE: dict = {}


def _kernel_hat(n, h):
    """rfft2 of the padded log kernel, cached per (n, h)."""
    key = (n, float(h))
    hit = _KERNEL_CACHE.get(key)
    if hit is not None:
        return hit
    idx = np.arange(2 * n)
    d = np.where(idx < n, idx, idx - 2 * n) * h
    DX, DY = np.meshgrid(d, d, indexing="ij")
    R = np.hypot(DX, DY)
    with np.errstate(divide="ignore"):
        G = -np.log(R) / (2.0 * np.pi)
    G[0, 0] = -(np.log(h) + np.pi / 4.0 - 1.5 - 0.5 * np.log(2.0)) / (2.0 * np.pi)
    hat = np.fft.rfft2(G)
    if len(_KERNEL_CACHE) > 8:
        _KERNEL_CACHE.clear()
    _KERNEL_CACHE[key] = hat
    return hat


def convolve_free_space(values, h, kernel_hat):
    """h^2-weighted free-space convolution of an n x n array with a cached kernel."""
    n = values.shape[0]
    pad = np.zeros((2 * n, 2 * n))
    pad[:n, :n] = values
    out = np.fft.irfft2(np.fft.rfft2(pad) * kernel_hat, s=(2 * n, 2 * n))
    return out[:n, :n] * (h * h)


def solve_streamfunction(omega: ScalarField) -> ScalarField:
    """psi = g * omega with the decaying-log gauge (psi ~ -mass * log r / 2pi)."""
    omega.check_finite()
    g = omega.grid
    psi = convolve_free_space(omega.values, g.h, _kernel_hat(g.n, g.h))
    return ScalarField(g, psi, omega.time)
