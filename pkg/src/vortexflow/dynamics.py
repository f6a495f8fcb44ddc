"""Time integration of the vorticity-transport family.

Six variants share one spatial discretization and differ only in the
drift-diffusion potential Phi of

    d_t w + u . grad w = nu div(grad w - w grad Phi),   u = curl^T psi:

    euler           nu = 0 (advection only)
    navier_stokes   Phi = 0
    rescaled_ns     Phi = -|x|^2 / 4          (self-similar frame)
    constrained_I   Phi = -|x|^2 / (2 I_ref)  (inertia pinned)
    fixed_ab        Phi = b psi + a |x|^2 / 2, (a, b) given constants
    constrained_EI  same Phi, (a, b) the state-dependent multipliers

One step is a Strang split: an explicit Scharfetter-Gummel half step (the
exponential-fitting fluxes keep the discrete Gibbs state e^Phi stationary and
preserve positivity under the CFL bound), a Heun advection step on
divergence-free face velocities with Fromm reconstruction (central slopes keep
second order at smooth extrema -- a slope limiter there manufactures entropy
an order of magnitude above the physical dissipation), and a second
drift-diffusion half step.

For constrained_EI the quadrature multipliers get a one-shot Newton correction
that zeroes the *discrete flux-form* moment rates: the quadrature values alone
leave O(h^2) residual fluxes of E and I, visible as secular drift.  The
correction reuses the moment matrix [[2I, V], [V, int w|grad psi|^2]] whose
determinant is D, so it costs one extra flux assembly per half step.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import BlowUpDetected, CflViolation, ConfigError, DegenerateDenominator, MassLoss
from .functionals import EPS_D, Functionals, evaluate, interaction_moments, moments, multipliers
from .grid import ScalarField
from .operators import face_velocities
from .poisson import solve_streamfunction

VARIANTS = ("euler", "navier_stokes", "rescaled_ns", "constrained_I",
            "constrained_EI", "fixed_ab")

CFL_SAFETY = 0.4
DT_MAX = 0.1
MASS_GUARD = 1e-8          # initial mass allowed outside r = L/2
DEFAULT_CEILING = np.inf

_LIMITERS = {"fromm": _kernels.LIMITER_FROMM, "minmod": _kernels.LIMITER_MINMOD}


@dataclass(frozen=True)
class ModelSpec:
    """Which member of the equation family evolves the state."""

    variant: str
    nu: float = 0.0
    fixed_a: float = None
    fixed_b: float = None
    I_ref: float = None
    eps_d: float = EPS_D
    limiter: str = "fromm"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.variant == "euler":
            if self.nu != 0.0:
                raise ConfigError("euler runs with nu = 0")
        elif self.nu <= 0.0:
            raise ConfigError(f"variant {self.variant!r} needs nu > 0")
        if self.variant == "fixed_ab" and (self.fixed_a is None or self.fixed_b is None):
            raise ConfigError("fixed_ab needs fixed_a and fixed_b")
        if self.variant == "constrained_I" and (self.I_ref is None or self.I_ref <= 0):
            raise ConfigError("constrained_I needs I_ref > 0")
        if self.limiter not in _LIMITERS:
            raise ConfigError(f"unknown limiter {self.limiter!r}")


class FlowState:
    """Vorticity snapshot with a lazily solved, invalidation-safe psi cache."""

    def __init__(self, omega: ScalarField, clipped: float = 0.0):
        self.omega = omega
        self.clipped = clipped
        self._psi = None

    @property
    def time(self):
        return self.omega.time

    def psi(self) -> ScalarField:
        if self._psi is None:
            self._psi = solve_streamfunction(self.omega)
        return self._psi


@dataclass
class Trajectory:
    """Diagnostics rows at cadence plus optional stored snapshots."""

    rows: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    status: str = "ok"
    error: str = ""
    clipped_total: float = 0.0
    final_state: FlowState = None

    def append_row(self, rec: Functionals):
        if self.rows and rec.time <= self.rows[-1].time:
            raise ValueError("trajectory times must be strictly increasing")
        self.rows.append(rec)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows])


def _psi_values(state: FlowState):
    return state.psi().values


def _static_potential(model: ModelSpec, grid):
    """Potential part that does not depend on the state (None when absent)."""
    if model.variant in ("euler", "navier_stokes"):
        return None
    X, Y = grid.meshgrid()
    r2 = X * X + Y * Y
    if model.variant == "rescaled_ns":
        return -0.25 * r2
    if model.variant == "constrained_I":
        return -0.5 * r2 / model.I_ref
    return r2  # fixed_ab / constrained_EI combine r2 with psi at use time


def _corrected_multipliers(omega, psi_vals, grid, eps_d, r2):
    """Quadrature multipliers plus the flux-consistent Newton correction."""
    field_psi = ScalarField(grid, psi_vals)
    field_w = ScalarField(grid, omega)
    _, center, I = moments(field_w)
    enstrophy, gradpsi_moment, V = interaction_moments(field_w, field_psi, center)
    D = 2.0 * I * gradpsi_moment - V * V
    if D < eps_d:
        raise DegenerateDenominator(D, eps_d)
    b0 = (2.0 * I * enstrophy + 2.0 * V) / D
    a0 = -(2.0 * gradpsi_moment + V * enstrophy) / D

    phi = b0 * psi_vals + 0.5 * a0 * r2
    Fx, Fy = _kernels.sg_fluxes(omega, phi, grid.h)
    cI = 0.5 * r2
    Idot = grid.h * (float((Fx * (cI[1:, :] - cI[:-1, :])).sum())
                     + float((Fy * (cI[:, 1:] - cI[:, :-1])).sum()))
    Edot = grid.h * (float((Fx * (psi_vals[1:, :] - psi_vals[:-1, :])).sum())
                     + float((Fy * (psi_vals[:, 1:] - psi_vals[:, :-1])).sum()))
    # moment matrix [[2I, V], [V, gp]] has determinant D
    da = -(gradpsi_moment * Idot - V * Edot) / D
    db = -(-V * Idot + 2.0 * I * Edot) / D
    return a0 + da, b0 + db


def _potential(model: ModelSpec, omega, psi_vals, grid, static, corrected=False):
    """Drift potential Phi for the SG fluxes; None when there is none."""
    if model.variant in ("euler",):
        return None
    if model.variant == "navier_stokes":
        return np.zeros_like(omega)
    if model.variant in ("rescaled_ns", "constrained_I"):
        return static
    r2 = static
    if model.variant == "fixed_ab":
        if model.fixed_b == 0.0:
            return 0.5 * model.fixed_a * r2
        return model.fixed_b * psi_vals + 0.5 * model.fixed_a * r2
    if corrected:
        a, b = _corrected_multipliers(omega, psi_vals, grid, model.eps_d, r2)
    else:
        a, b, _ = multipliers(ScalarField(grid, omega), ScalarField(grid, psi_vals),
                              eps_d=model.eps_d)
    return b * psi_vals + 0.5 * a * r2


def tendency(state: FlowState, model: ModelSpec) -> ScalarField:
    """Assembled d_t omega for diagnostics: advection flux plus drift-diffusion."""
    grid = state.omega.grid
    w = state.omega.values
    psi_vals = _psi_values(state)
    U, V = face_velocities(psi_vals, grid.h)
    out = _kernels.advect_tendency(w, U, V, grid.h, _LIMITERS[model.limiter])
    if model.variant != "euler":
        phi = _potential(model, w, psi_vals, grid, _static_potential(model, grid))
        out = out + model.nu * _kernels.sg_tendency(w, phi, grid.h)
    return ScalarField(grid, out, state.time)


def _stability_bound(state: FlowState, model: ModelSpec, static):
    grid = state.omega.grid
    h = grid.h
    bound = np.inf
    psi_vals = _psi_values(state)
    U, V = face_velocities(psi_vals, grid.h)
    umax = max(abs(U).max(), abs(V).max())
    if umax > 0:
        bound = min(bound, h / umax)
    if model.variant != "euler":
        bound = min(bound, h * h / (2.0 * model.nu))
        phi = _potential(model, state.omega.values, psi_vals, grid, static)
        if phi is not None and phi.any():
            gmax = max(np.abs(np.diff(phi, axis=0)).max(),
                       np.abs(np.diff(phi, axis=1)).max()) / h
            if gmax > 0:
                bound = min(bound, h / gmax)
    return bound


def cfl_dt(state: FlowState, model: ModelSpec, safety: float = CFL_SAFETY,
           dt_max: float = DT_MAX) -> float:
    """safety * min(h/|u|, h/|grad Phi|, h^2/(2 nu)), capped at dt_max."""
    bound = _stability_bound(state, model, _static_potential(model, state.omega.grid))
    return float(min(safety * bound, dt_max))


def step(state: FlowState, model: ModelSpec, dt: float) -> FlowState:
    """One Strang-split step; negatives are clipped into the returned state's tally."""
    static = _static_potential(model, state.omega.grid)
    if dt > _stability_bound(state, model, static) * (1.0 + 1e-12):
        raise CflViolation(f"dt={dt:.3e} above the stability bound")
    return _advance(state, model, dt, static)


def _advance(state: FlowState, model: ModelSpec, dt: float, static) -> FlowState:
    grid = state.omega.grid
    h = grid.h
    limiter = _LIMITERS[model.limiter]
    w = state.omega.values
    nu = model.nu

    if model.variant != "euler":
        psi_vals = _psi_values(state)
        phi = _potential(model, w, psi_vals, grid, static, corrected=True)
        w = w + (0.5 * dt * nu) * _kernels.sg_tendency(w, phi, h)
        psi_mid = solve_streamfunction(ScalarField(grid, w)).values
    else:
        psi_mid = _psi_values(state)

    U, V = face_velocities(psi_mid, h)
    k1 = _kernels.advect_tendency(w, U, V, h, limiter)
    k2 = _kernels.advect_tendency(w + dt * k1, U, V, h, limiter)
    w = w + (0.5 * dt) * (k1 + k2)

    if model.variant != "euler":
        psi_end = solve_streamfunction(ScalarField(grid, w)).values
        phi = _potential(model, w, psi_end, grid, static, corrected=True)
        w = w + (0.5 * dt * nu) * _kernels.sg_tendency(w, phi, h)

    neg = w < 0.0
    clipped = float(-w[neg].sum() * grid.cell_area) if neg.any() else 0.0
    if clipped:
        w = np.where(neg, 0.0, w)
    w = w / (w.sum() * grid.cell_area)
    return FlowState(ScalarField(grid, w, state.time + dt), clipped=clipped)


def _recentered(omega: ScalarField) -> ScalarField:
    """Shift the field by whole cells so the center of vorticity sits at 0."""
    _, (Mx, My), _ = moments(omega)
    h = omega.grid.h
    si, sj = int(round(Mx / h)), int(round(My / h))
    if si == 0 and sj == 0:
        return omega
    vals = np.roll(omega.values, (-si, -sj), axis=(0, 1))
    return ScalarField(omega.grid, vals, omega.time)


def run(initial: ScalarField, model: ModelSpec, horizon: float, dt="auto",
        cadence: float = 0.1, snapshot_times=(), ceiling: float = DEFAULT_CEILING,
        reference: ScalarField = None, mass_guard: float = MASS_GUARD) -> Trajectory:
    """March the model to `horizon`, sampling diagnostics every `cadence`.

    The initial field is normalized to unit mass and recentered; a guard
    requires its mass outside r = L/2 to stay below `mass_guard` (the free
    space solve is only faithful when the state clears the boundary).  The
    trajectory carries a status of "ok", "degenerate" (multiplier denominator
    collapsed) or "blowup" (sup-norm ceiling exceeded); partial rows and the
    last state are always retained.
    """
    omega = _recentered(initial.normalized())
    grid = omega.grid
    outside = float(omega.values[grid.radius() > 0.5 * grid.half_width].sum() * grid.cell_area)
    if outside > mass_guard:
        raise MassLoss(f"initial mass {outside:.3e} outside r = L/2 exceeds {mass_guard:.1e}; "
                       f"enlarge half_width")
    if dt != "auto":
        dt = float(dt)
        if dt <= 0:
            raise ConfigError("dt must be positive or 'auto'")

    static = _static_potential(model, grid)
    state = FlowState(omega)
    traj = Trajectory()
    snap_queue = sorted(float(s) for s in snapshot_times)
    eps_t = 1e-9

    def record(st: FlowState):
        rec = evaluate(st.omega, st.psi(), reference=reference,
                       eps_d=model.eps_d, clipped_mass=traj.clipped_total)
        traj.append_row(rec)

    try:
        record(state)
        next_row = cadence
        while state.time < horizon - eps_t:
            bound = _stability_bound(state, model, static)
            dt_step = min(CFL_SAFETY * bound, DT_MAX) if dt == "auto" else dt
            if dt_step > bound * (1.0 + 1e-12):
                raise CflViolation(f"dt={dt_step:.3e} above the stability bound {bound:.3e}")
            dt_step = min(dt_step, horizon - state.time, max(next_row - state.time, 1e-12))
            if snap_queue and state.time < snap_queue[0]:
                dt_step = min(dt_step, max(snap_queue[0] - state.time, 1e-12))
            state = _advance(state, model, dt_step, static)
            traj.clipped_total += state.clipped
            while snap_queue and state.time >= snap_queue[0] - eps_t:
                traj.snapshots.append(state.omega.copy())
                snap_queue.pop(0)
            if state.time >= next_row - eps_t or state.time >= horizon - eps_t:
                record(state)
                next_row = state.time + cadence
            sup = float(state.omega.values.max())
            if sup > ceiling:
                raise BlowUpDetected(state.time, sup, ceiling)
    except DegenerateDenominator as exc:
        traj.status, traj.error = "degenerate", str(exc)
    except BlowUpDetected as exc:
        traj.status, traj.error = "blowup", str(exc)
    traj.final_state = state
    if traj.status != "ok" and (not traj.rows or traj.rows[-1].time < state.time):
        try:
            record(state)
        except Exception:
            pass
    return traj
