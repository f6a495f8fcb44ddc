"""vortexflow: constrained 2-D vorticity dynamics on the open plane.

The library evolves a nonnegative unit-mass vorticity field under a family
of transport / drift-diffusion equations (including the variant that
dissipates entropy while holding energy and moment of inertia fixed),
evaluates the associated conserved and dissipated functionals, and solves
the stationary mean-field problem by a shooting construction in log-radius.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend
from .dynamics import FlowState, ModelSpec, Trajectory, cfl_dt, run, step, tendency
from .functionals import (Functionals, dissipation_rate, energy, entropy, evaluate,
                          inequality_gaps, interaction_moments, moments, multipliers,
                          relative_entropy)
from .grid import Grid, ScalarField, VectorField, make_grid
from .meanfield import (MeanFieldSolution, ShootingProfile, canonical_solution,
                        gaussian_energy, microcanonical_solve, normalize,
                        sample_on_grid, shoot)
from .operators import divergence, gradient, laplacian, velocity
from .poisson import solve_streamfunction
from .reference import (DriftCurve, InertiaLaw, fp_exact, gaussian_field,
                        inertia_ode_oracle, oseen_field, ou_variance, patch_field,
                        rescaled_oseen)
from .storage import read_vf2d, write_vf2d

__all__ = [
    "__version__", "kernel_backend",
    "Grid", "ScalarField", "VectorField", "make_grid",
    "solve_streamfunction", "velocity", "gradient", "divergence", "laplacian",
    "Functionals", "moments", "energy", "entropy", "interaction_moments",
    "multipliers", "relative_entropy", "inequality_gaps", "dissipation_rate",
    "evaluate",
    "ShootingProfile", "MeanFieldSolution", "shoot", "normalize",
    "canonical_solution", "microcanonical_solve", "sample_on_grid",
    "gaussian_energy",
    "ModelSpec", "FlowState", "Trajectory", "tendency", "step", "run", "cfl_dt",
    "DriftCurve", "InertiaLaw", "fp_exact", "gaussian_field", "oseen_field",
    "patch_field", "rescaled_oseen", "ou_variance", "inertia_ode_oracle",
    "read_vf2d", "write_vf2d",
]
