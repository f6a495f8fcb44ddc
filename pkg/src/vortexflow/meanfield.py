"""Stationary mean-field states by shooting in log-radius.

A radial stationary state w = exp(b psi + a |x|^2 / 2) / Z of the constrained
flow satisfies, after r = e^t and H(t) = b psi + 2t, the autonomous-looking
problem

    H'' = -F(t - chi/2) e^H,   F(t) = b exp(a e^{2t} / 2),
    H ~ 2t,  H'(-inf) = 2,

where the shift chi absorbs the free constant of H.  The normalization

    Z(chi) = (2 pi / b) (H'(t_min) - H'(t_max))

is nondecreasing in chi with limits 0 and 8 pi / b, so for 0 < b < 8 pi the
unit-mass state exists and bisection on chi pins Z = 1.  b = 0 is the exact
Gaussian branch, handled in closed form (the Z formula is singular there).

The integrated system carries quadrature components alongside (mass, inertia,
entropy and the two nested integrals of the energy), so every reported
functional inherits the ODE tolerance instead of a separate quadrature error.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import BracketFailure, MassLoss, NonFinite, NoSolutionInRange, OutOfRange
from .grid import Grid, ScalarField
from .radial import sample_profile

EIGHT_PI = 8.0 * np.pi

T_MIN, T_MAX = -14.0, 6.0   # window covers the bend of H for |a| in [1e-3, 1e3]
CHI_MIN, CHI_MAX = -20.0, 20.0
RTOL_SHOOT = 1e-10          # bracketing accuracy
RTOL_PROFILE = 1e-12        # final profile and its quadratures
H_CAP = 600.0               # e^H overflow guard

# search box for the (E, I) -> (a, b) inversion
A_BOX = (-1e3, -1e-4)
B_MARGIN = 1e-3


@dataclass
class ShootingProfile:
    """Trajectory of one shot: H(t), its slope, the shift and normalization."""

    t_grid: np.ndarray
    H: np.ndarray
    Hdot: np.ndarray
    chi: float
    Z: float

    def modulation(self, a):
        """F(t - chi/2) along the trajectory (b factored out)."""
        return np.exp(0.5 * a * np.exp(2.0 * (self.t_grid - 0.5 * self.chi)))

    def auxiliary_energy(self, a, b):
        """0.5 Hdot^2 + b e^G with G = H + (a/2) e^{2(t - chi/2)}; nonincreasing."""
        G = self.H + 0.5 * a * np.exp(2.0 * (self.t_grid - 0.5 * self.chi))
        return 0.5 * self.Hdot ** 2 + b * np.exp(G)


@dataclass
class MeanFieldSolution:
    """Radial unit-mass stationary state with its multipliers and functionals."""

    a: float
    b: float
    chi: float
    Z: float
    r: np.ndarray
    omega: np.ndarray
    psi: np.ndarray
    omega0: float        # r -> 0 limit of the density
    mass: float
    I: float
    E: float
    S: float

    @property
    def pohozaev_residual(self):
        """|1 - (8 pi a / b) I - 8 pi / b|, zero on exact solutions (b > 0)."""
        if self.b == 0.0:
            return 0.0
        return abs(1.0 - (EIGHT_PI * self.a / self.b) * self.I - EIGHT_PI / self.b)

    def density_at(self, r):
        return np.interp(r, self.r, self.omega, left=self.omega0, right=0.0)


def _check_ab(a, b, require_positive_b):
    if a >= 0.0:
        raise OutOfRange(f"a={a} must be negative")
    if b >= EIGHT_PI:
        raise OutOfRange(f"b={b:.6g} >= 8*pi: no unit-mass state exists")
    if require_positive_b and b <= 0.0:
        raise OutOfRange(f"b={b} must be positive for shooting (b=0 is the Gaussian branch)")


def _rhs_shot(a, b, chi):
    c2 = 0.5 * chi

    def rhs(t, y):
        # y = (H - 2t, Hdot - 2): offset form avoids cancellation at t_min
        H = y[0] + 2.0 * t
        if H > H_CAP:
            raise NonFinite(f"e^H overflow during shot at chi={chi:.6g}")
        s = t - c2
        force = -b * np.exp(0.5 * a * np.exp(2.0 * s) + H)
        return (y[1], force)

    return rhs


def shoot(a, b, chi, rtol=RTOL_SHOOT, samples=401) -> ShootingProfile:
    """Integrate one shot over the window and report Z(chi)."""
    _check_ab(a, b, require_positive_b=True)
    t_eval = np.linspace(T_MIN, T_MAX, samples) if samples else None
    sol = solve_ivp(_rhs_shot(a, b, chi), (T_MIN, T_MAX), (0.0, 0.0),
                    method="DOP853", rtol=rtol, atol=1e-14, t_eval=t_eval)
    if not sol.success:
        raise NonFinite(f"shot failed at chi={chi:.6g}: {sol.message}")
    t = sol.t
    H = sol.y[0] + 2.0 * t
    Hdot = sol.y[1] + 2.0
    Z = (2.0 * np.pi / b) * (Hdot[0] - Hdot[-1])
    return ShootingProfile(t, H, Hdot, float(chi), float(Z))


def _z_of_chi(a, b, chi, rtol):
    sol = solve_ivp(_rhs_shot(a, b, chi), (T_MIN, T_MAX), (0.0, 0.0),
                    method="DOP853", rtol=rtol, atol=1e-14)
    if not sol.success:
        raise NonFinite(f"shot failed at chi={chi:.6g}: {sol.message}")
    return (2.0 * np.pi / b) * (2.0 - (sol.y[1, -1] + 2.0))


def normalize(a, b, tol=1e-10, rtol=None):
    """Shift chi* with Z(chi*) = 1, by bisection on the nondecreasing Z."""
    _check_ab(a, b, require_positive_b=True)
    rtol = RTOL_PROFILE if rtol is None else rtol
    lo, hi = CHI_MIN, CHI_MAX
    z_lo = _z_of_chi(a, b, lo, rtol)
    z_hi = _z_of_chi(a, b, hi, rtol)
    if not (z_lo < 1.0 < z_hi):
        raise BracketFailure(
            f"Z({lo})={z_lo:.4g}, Z({hi})={z_hi:.4g} do not straddle 1 for a={a}, b={b}")
    z = np.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        z = _z_of_chi(a, b, mid, rtol)
        if abs(z - 1.0) <= tol:
            return mid
        if z < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    if abs(z - 1.0) > tol:
        raise BracketFailure(f"bisection stalled at |Z-1|={abs(z - 1.0):.3e} > {tol:.1e}")
    return 0.5 * (lo + hi)


def _profile_with_quadratures(a, b, chi, samples=4001, rtol=RTOL_PROFILE):
    """Integrate the shot plus running integrals of mass, I, S and E."""
    c2 = 0.5 * chi
    two_pi = 2.0 * np.pi

    def rhs(s, y):
        H = y[0] + 2.0 * s
        if H > H_CAP:
            raise NonFinite(f"e^H overflow at chi={chi:.6g}")
        t = s - c2                      # original log-radius
        r2 = np.exp(2.0 * t)
        gauss = 0.5 * a * r2
        dGamma = two_pi * np.exp(H + gauss)          # ring-mass rate
        log_w = H - 2.0 * s + chi + gauss            # log density (Z = 1 gauge)
        return (
            y[1],
            -b * np.exp(gauss + H),
            dGamma,                 # y[2]: mass
            0.5 * r2 * dGamma,      # y[3]: inertia
            log_w * dGamma,         # y[4]: entropy
            t * dGamma,             # y[5]: P     = int log r dGamma
            y[2] * t * dGamma,      # y[6]: q1    = int Gamma log r dGamma
            y[5] * dGamma,          # y[7]: q2    = int P dGamma
        )

    t_eval = np.linspace(T_MIN, T_MAX, samples)
    sol = solve_ivp(rhs, (T_MIN, T_MAX), np.zeros(8), method="DOP853",
                    rtol=rtol, atol=1e-14, t_eval=t_eval)
    if not sol.success:
        raise NonFinite(f"profile integration failed: {sol.message}")
    return sol


def canonical_solution(a, b, samples=4001) -> MeanFieldSolution:
    """Unit-mass stationary state for given multipliers (a < 0, 0 <= b < 8 pi).

    For b > 0 the shot is normalized in chi and the functionals come from the
    integrated quadrature components; b = 0 returns the exact Gaussian.
    """
    _check_ab(a, b, require_positive_b=False)
    if b == 0.0:
        return _gaussian_branch(a, samples)
    chi = normalize(a, b)
    sol = _profile_with_quadratures(a, b, chi, samples)
    s = sol.t
    H = sol.y[0] + 2.0 * s
    Hdot = sol.y[1] + 2.0
    mass, inertia, ent, P, q1, q2 = (sol.y[k, -1] for k in range(2, 8))
    E = -(q1 + P * mass - q2) / (4.0 * np.pi)

    t_orig = s - 0.5 * chi
    r = np.exp(t_orig)
    gauss = 0.5 * a * r ** 2
    log_w = H - 2.0 * s + chi + gauss
    omega = np.exp(log_w)
    # psi in the decaying-log gauge: subtract the constant the ODE gauge carries
    psi_ode = (H - 2.0 * t_orig) / b
    slope_inf = 2.0 - b / (2.0 * np.pi)       # H'(+inf) when Z = 1
    c_inf = H[-1] - slope_inf * t_orig[-1]
    psi = psi_ode - c_inf / b
    Z = (2.0 * np.pi / b) * (Hdot[0] - Hdot[-1])
    return MeanFieldSolution(a=float(a), b=float(b), chi=float(chi), Z=float(Z),
                             r=r, omega=omega, psi=psi, omega0=float(np.exp(chi)),
                             mass=float(mass), I=float(inertia), E=float(E), S=float(ent))


def _gaussian_branch(a, samples):
    """b = 0: omega = (|a| / 2 pi) exp(a r^2 / 2), all functionals closed-form."""
    sigma2 = 1.0 / abs(a)
    r = np.geomspace(1e-6, max(40.0 * np.sqrt(sigma2), 1.0), samples)
    omega = np.exp(-0.5 * r ** 2 / sigma2) / (2.0 * np.pi * sigma2)
    circ = 1.0 - np.exp(-0.5 * r ** 2 / sigma2)
    # decaying-gauge streamfunction of the unit Gaussian
    from scipy.special import exp1
    with np.errstate(over="ignore"):
        tail = 0.5 * exp1(0.5 * r ** 2 / sigma2) + np.exp(-0.5 * r ** 2 / sigma2) * np.log(r)
    psi = -(circ * np.log(r) + tail) / (2.0 * np.pi)
    E = -(np.log(4.0 * sigma2) - np.euler_gamma) / (8.0 * np.pi)
    S = -1.0 - np.log(2.0 * np.pi * sigma2)
    return MeanFieldSolution(a=float(a), b=0.0, chi=np.nan, Z=1.0,
                             r=r, omega=omega, psi=psi,
                             omega0=float(1.0 / (2.0 * np.pi * sigma2)),
                             mass=1.0, I=sigma2, E=float(E), S=float(S))


def gaussian_energy(I):
    """Closed-form E of the centered unit Gaussian with inertia I (= sigma^2)."""
    return -(np.log(4.0 * I) - np.euler_gamma) / (8.0 * np.pi)


def _inertia_at(a, b):
    """Solver-computed inertia and energy (quadratures of the shot)."""
    if b == 0.0:
        return 1.0 / abs(a), gaussian_energy(1.0 / abs(a))
    chi = normalize(a, b)
    sol = _profile_with_quadratures(a, b, chi, samples=2)
    mass, inertia, _, P, q1, q2 = (sol.y[k, -1] for k in range(2, 8))
    E = -(q1 + P * mass - q2) / (4.0 * np.pi)
    return float(inertia), float(E)


def _solve_a_for_inertia(b, I_target, rtol_rel=1e-9, stall_rel=1e-5, max_iter=12):
    """Inner loop: a < 0 with I(a, b) = I_target at fixed b.

    Inertia is monotone in a (increasing toward a = 0) and scales as 1/|a|
    along the fixed-b dilation family, so the scaling update converges in a
    couple of solver-verified iterations.  Near b = 8 pi the integration
    window truncates the profile and the achievable accuracy floors out
    around 1e-6 relative; the loop then settles for its best iterate as long
    as it clears `stall_rel`.  Returns (a, E(a, b)).
    """
    a = -min(max((1.0 - b / EIGHT_PI) / I_target, -A_BOX[1]), -A_BOX[0])
    best = (np.inf, a, np.nan)
    for _ in range(max_iter):
        I_val, E_val = _inertia_at(a, b)
        rel = I_val / I_target - 1.0
        if abs(rel) < best[0]:
            best = (abs(rel), a, E_val)
        if abs(rel) <= rtol_rel:
            return a, E_val
        a *= I_val / I_target          # I scales as 1/|a|
        if not (A_BOX[0] <= a <= A_BOX[1]):
            raise NoSolutionInRange(
                f"a left the search box [{A_BOX[0]}, {A_BOX[1]}] at b={b:.6g}")
    if best[0] <= stall_rel:
        return best[1], best[2]
    raise NoSolutionInRange(f"inner inertia loop stalled at b={b:.6g} (rel={best[0]:.2e})")


def microcanonical_solve(E, I, tol=1e-6):
    """Invert the state map: multipliers (a, b) with E(w_ab) = E, I(w_ab) = I.

    Nested monotone root-finding: the inner loop fixes a to match I at given b
    (inertia is increasing in a), the outer loop moves b to match E (energy is
    increasing in b along the fixed-inertia curve).  The b = 0 endpoint is the
    Gaussian branch; targets below its energy would need b < 0 and raise
    NoSolutionInRange.
    """
    if I <= 0.0:
        raise OutOfRange(f"I={I} must be positive")
    E_gauss = gaussian_energy(I)
    scale = max(abs(E), 1.0 / EIGHT_PI)
    if abs(E - E_gauss) <= tol * scale:
        return -1.0 / I, 0.0
    if E < E_gauss:
        raise NoSolutionInRange(
            f"target E={E:.8g} below the b=0 bound {E_gauss:.8g} at I={I:.6g}")

    a_for_b = {}

    def energy_mismatch(b):
        a, E_val = _solve_a_for_inertia(b, I)
        a_for_b[b] = a
        return E_val - E

    # keep the inner-loop seed |a| = (1 - b/8pi)/I inside the a search box
    b_lo = 1e-4
    b_hi = min(EIGHT_PI - B_MARGIN, EIGHT_PI * (1.0 - 1.1 * (-A_BOX[1]) * I))
    f_lo = energy_mismatch(b_lo)
    f_hi = energy_mismatch(b_hi)
    if f_lo > 0.0 or f_hi < 0.0:
        raise NoSolutionInRange(
            f"E={E:.8g} not bracketed for b in [{b_lo:.1e}, {b_hi:.6g}]: "
            f"mismatch bracket [{f_lo:.3e}, {f_hi:.3e}]")
    b_mid = b_lo
    for _ in range(100):
        b_mid = 0.5 * (b_lo + b_hi)
        f_mid = energy_mismatch(b_mid)
        if abs(f_mid) <= 0.2 * tol * scale or (b_hi - b_lo) < 1e-12:
            break
        if f_mid < 0.0:
            b_lo = b_mid
        else:
            b_hi = b_mid
    return a_for_b[b_mid], b_mid


def sample_on_grid(solution: MeanFieldSolution, grid: Grid) -> ScalarField:
    """Radial profile interpolated onto a grid, renormalized to unit mass."""
    try:
        return sample_profile(grid, solution.r, solution.omega, w0=solution.omega0)
    except MassLoss as exc:
        raise MassLoss(f"grid (n={grid.n}, L={grid.half_width}) too small for "
                       f"(a={solution.a:.4g}, b={solution.b:.4g}): {exc}") from exc
