"""Closed-form reference states and oracle evolutions used for testing.

These are the independent yardsticks the dynamics is measured against: the
self-similar spreading vortex, Gaussians, smoothed circular patches (the
designated degenerate-denominator witnesses), the exact evolution of the
linear drift-diffusion equation with a time-dependent confinement, and the
two-route determination of the inertia rate law for fixed multipliers.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .errors import MassLoss, OracleDisagreement
from .grid import Grid, ScalarField, make_grid

FOUR_PI = 4.0 * np.pi
MIN_MASS = 0.9999


def gaussian_field(grid: Grid, sigma2: float, center=(0.0, 0.0), renormalize=True,
                   time: float = 0.0) -> ScalarField:
    """Unit Gaussian of per-component variance sigma2 centered at `center`."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    X, Y = grid.meshgrid()
    r2 = (X - center[0]) ** 2 + (Y - center[1]) ** 2
    vals = np.exp(-0.5 * r2 / sigma2) / (2.0 * np.pi * sigma2)
    f = ScalarField(grid, vals, time)
    if f.mass() < MIN_MASS:
        raise MassLoss(f"grid captures only {f.mass():.6f} of the Gaussian")
    return f.normalized() if renormalize else f


def oseen_field(grid: Grid, t: float, nu: float) -> ScalarField:
    """Spreading self-similar vortex: Gaussian with variance 2 nu (t + 1).

    Solves both the heat equation and the full nonlinear transport (the
    velocity it induces is purely azimuthal), so I(t) - I(0) = 2 nu t exactly.
    """
    if t < 0 or nu <= 0:
        raise ValueError("need t >= 0 and nu > 0")
    s2 = 2.0 * nu * (t + 1.0)
    X, Y = grid.meshgrid()
    vals = np.exp(-(X * X + Y * Y) / (2.0 * s2)) / (2.0 * np.pi * s2)
    f = ScalarField(grid, vals, t)
    if f.mass() < MIN_MASS:
        raise MassLoss(f"grid captures only {f.mass():.6f} of the vortex at t={t}")
    return f


def patch_field(grid: Grid, R: float, eps: float, time: float = 0.0) -> ScalarField:
    """Uniform circular patch of radius R with a tanh edge of width eps.

    The sharp patch makes the multiplier denominator vanish; the smoothing
    width controls how close D(omega) sits to zero.
    """
    if eps <= 0:
        raise ValueError("eps must be positive (use a small value for a near-sharp edge)")
    r = grid.radius()
    # eps is the full transition width; the tanh scale is half of it
    vals = 0.5 * (1.0 - np.tanh(2.0 * (r - R) / eps))
    f = ScalarField(grid, vals, time)
    if grid.half_width < R + 5 * eps:
        raise MassLoss("grid too small for the requested patch")
    return f.normalized()


def rescaled_oseen(grid: Grid) -> ScalarField:
    """Fixed point of the self-similar frame: the Gaussian with inertia 2."""
    return gaussian_field(grid, 2.0)


@dataclass
class DriftCurve:
    """Piecewise-constant confinement coefficient gamma(t) with its integral B.

    `times` are the breakpoints (first entry is the curve origin); gamma takes
    values[i] on [times[i], times[i+1]) and values[-1] beyond the last break.
    """

    times: np.ndarray
    values: np.ndarray
    K0: float = field(init=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.times.ndim != 1 or self.times.size != self.values.size:
            raise ValueError("times and values must be 1-D and equally long")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        self.K0 = float(np.abs(self.values).max())

    @classmethod
    def constant(cls, gamma, t0=0.0):
        return cls(np.array([t0]), np.array([gamma]))

    def B(self, t):
        """Integral of gamma from the curve origin to t."""
        t = float(t)
        if t < self.times[0]:
            raise ValueError("t precedes the curve origin")
        acc = 0.0
        for k in range(self.times.size):
            seg_end = self.times[k + 1] if k + 1 < self.times.size else np.inf
            if t <= seg_end:
                return acc + self.values[k] * (t - self.times[k])
            acc += self.values[k] * (seg_end - self.times[k])
        return acc

    def _segments(self, tau, t):
        """(start, end, gamma) pieces covering [tau, t]."""
        out = []
        for k in range(self.times.size):
            seg_start = self.times[k]
            seg_end = self.times[k + 1] if k + 1 < self.times.size else np.inf
            lo, hi = max(tau, seg_start), min(t, seg_end)
            if hi > lo:
                out.append((lo, hi, self.values[k]))
        return out


def fp_exact(omega0: ScalarField, curve: DriftCurve, nu: float, t: float,
             tau: float = 0.0) -> ScalarField:
    """Exact evolution of d_t w = nu (Lap w + gamma(t) div(x w)) from tau to t.

    The solution is a heat-kernel smoothing of the dilated initial state,

        w(x, t) = e^{2c} int G_{2 nu A}(x - y) w0(e^c y) dy,
        c = nu (B(t) - B(tau)),
        A = int_tau^t e^{2 nu (B(s) - B(t))} ds,

    evaluated by quintic-spline dilation and a padded-grid convolution with
    the sampled Gaussian kernel.  The kernel must be resolved: 2 nu A should
    exceed a few h^2.
    """
    if t <= tau:
        raise ValueError("need t > tau")
    grid = omega0.grid
    Bt, Btau = curve.B(t), curve.B(tau)
    c = nu * (Bt - Btau)
    A = 0.0
    for lo, hi, g in curve._segments(tau, t):
        offset = 2.0 * nu * (curve.B(lo) - Bt)
        span = hi - lo
        if g == 0.0:
            A += np.exp(offset) * span
        else:
            A += np.exp(offset) * np.expm1(2.0 * nu * g * span) / (2.0 * nu * g)

    coords = grid.coords()
    spline = RectBivariateSpline(coords, coords, omega0.values, kx=5, ky=5)
    scaled = np.exp(c) * coords
    inside = np.abs(scaled) <= grid.half_width
    dil = np.zeros((grid.n, grid.n))
    if inside.all():
        dil = spline(scaled, scaled)
    else:
        dil[np.ix_(inside, inside)] = spline(scaled[inside], scaled[inside])
    dil *= np.exp(2.0 * c)
    lost = omega0.mass() - float(dil.sum() * grid.cell_area)
    if abs(lost) > 1e-6:
        raise MassLoss(f"dilation lost mass {lost:.3e}; state does not fit the grid")

    var = 2.0 * nu * A
    idx = np.arange(2 * grid.n)
    d = np.where(idx < grid.n, idx, idx - 2 * grid.n) * grid.h
    DX, DY = np.meshgrid(d, d, indexing="ij")
    kernel = np.exp(-(DX * DX + DY * DY) / (2.0 * var)) / (2.0 * np.pi * var)
    khat = np.fft.rfft2(kernel)
    pad = np.zeros((2 * grid.n, 2 * grid.n))
    pad[:grid.n, :grid.n] = dil
    out = np.fft.irfft2(np.fft.rfft2(pad) * khat, s=(2 * grid.n, 2 * grid.n))[:grid.n, :grid.n]
    return ScalarField(grid, out * grid.cell_area, t)


def ou_variance(sigma2_0, gamma, nu, dt):
    """Closed-form variance of a Gaussian under constant-gamma drift-diffusion."""
    if gamma == 0.0:
        return sigma2_0 + 2.0 * nu * dt
    decay = np.exp(-2.0 * nu * gamma * dt)
    return sigma2_0 * decay + (1.0 - decay) / gamma


@dataclass
class InertiaLaw:
    """Affine inertia rate law dI/dt = alpha I + beta with its fit residuals."""

    alpha: float
    beta: float
    fitted_alpha: float
    fitted_beta: float

    def predict(self, t, I0):
        t = np.asarray(t, dtype=np.float64)
        Iinf = -self.beta / self.alpha
        return (I0 - Iinf) * np.exp(self.alpha * t) + Iinf


def inertia_ode_oracle(a, b, nu, I0, horizon, n=256, tol=0.02) -> InertiaLaw:
    """Two-route determination of dI/dt = alpha I + beta under fixed (a, b).

    Route one evaluates the moment balance of the flux divergence on analytic
    Gaussians, where every piece is a closed-form integral:

        int x . grad w = -2,   int w x . grad psi = -1 / (4 pi),
        int |x|^2 w = 2 sigma^2,

    so dI/dt = nu (2 + b V + 2 a sigma^2) and a two-point solve in sigma^2
    gives alpha = 2 nu a, beta = nu (2 - b / (4 pi)).  Route two least-squares
    fits I(t) from a short fine-grid simulation of the same model.  The routes
    must agree to `tol` relative or OracleDisagreement is raised.
    """
    V = -1.0 / FOUR_PI

    def exact_rate(sig2):
        return nu * (2.0 + b * V + 2.0 * a * sig2)

    s1, s2 = I0, 2.0 * I0
    alpha = (exact_rate(s2) - exact_rate(s1)) / (s2 - s1)
    beta = exact_rate(s1) - alpha * s1

    from .dynamics import ModelSpec, run  # local import: avoid cycle

    L = max(6.0, 12.5 * np.sqrt(I0))  # keeps the Gaussian's tail under the mass guard
    grid = make_grid(n, L)
    init = gaussian_field(grid, I0)
    model = ModelSpec(variant="fixed_ab", nu=nu, fixed_a=a, fixed_b=b)
    traj = run(init, model, horizon, cadence=max(horizon / 40.0, 1e-3),
               ceiling=np.inf)
    times = traj.column("time")
    inertia = traj.column("I")
    rates = np.diff(inertia) / np.diff(times)
    mids = 0.5 * (inertia[1:] + inertia[:-1])
    design = np.column_stack([mids, np.ones_like(mids)])
    (fit_alpha, fit_beta), *_ = np.linalg.lstsq(design, rates, rcond=None)

    scale = max(abs(alpha) * I0, abs(beta))
    if (abs(fit_alpha - alpha) * I0 > tol * scale) or (abs(fit_beta - beta) > tol * scale):
        raise OracleDisagreement(
            f"moment identities give (alpha, beta) = ({alpha:.6g}, {beta:.6g}) but the "
            f"simulation fit gives ({fit_alpha:.6g}, {fit_beta:.6g})")
    return InertiaLaw(float(alpha), float(beta), float(fit_alpha), float(fit_beta))
