#!/usr/bin/env python3
"""Timing comparison of the compiled flux kernels against the NumPy fallback.

Measures the two hot kernels (drift-diffusion flux divergence and upwind
advection) in isolation and a full constrained step for context, on the
default production resolution.  Run after building the extension:

    python benchmarks/kernel_benchmark.py [n]
"""

import sys
import time

import numpy as np

import vortexflow as vf
from vortexflow._kernels import _numpy_impl

try:
    from vortexflow._kernels import _core
except ImportError:
    _core = None


def timeit(fn, *args, repeat=30):
    fn(*args)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 256
    grid = vf.make_grid(n, 9.0)
    omega = vf.gaussian_field(grid, 0.8).values
    psi = vf.solve_streamfunction(vf.ScalarField(grid, omega)).values
    X, Y = grid.meshgrid()
    phi = 2.0 * psi - 0.5 * (X ** 2 + Y ** 2)
    from vortexflow.operators import face_velocities
    U, V = face_velocities(psi, grid.h)

    backends = [("numpy", _numpy_impl)]
    if _core is not None:
        backends.append(("compiled", _core))
    else:
        print("compiled extension not built; timing the fallback only")

    print(f"n = {n}, h = {grid.h:.4f}   (times in ms per call)")
    print(f"{'kernel':<24}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    rows = [
        ("sg_tendency", lambda impl: impl.sg_tendency(omega, phi, grid.h)),
        ("sg_fluxes", lambda impl: impl.sg_fluxes(omega, phi, grid.h)),
        ("advect (fromm)", lambda impl: impl.advect_tendency(omega, U, V, grid.h, 0)),
        ("advect (minmod)", lambda impl: impl.advect_tendency(omega, U, V, grid.h, 1)),
    ]
    for label, call in rows:
        times = [timeit(lambda: call(impl)) * 1e3 for _, impl in backends]
        speed = f"{times[0] / times[-1]:.1f}x" if len(times) > 1 else "-"
        print(f"{label:<24}" + "".join(f"{t:>12.3f}" for t in times) + f"{speed:>10}")

    # a full constrained step, for context (includes FFT solves either way)
    model = vf.ModelSpec(variant="constrained_EI", nu=0.1)
    state = vf.FlowState(vf.gaussian_field(grid, 0.8))
    dt = vf.cfl_dt(state, model)
    t_step = timeit(lambda: vf.step(state, model, dt), repeat=10) * 1e3
    print(f"\nfull constrained step ({vf.kernel_backend} backend): {t_step:.1f} ms"
          f"  [dt = {dt:.2e}]")
    print("set VORTEXFLOW_PURE=1 to rerun the step with the fallback kernels")


if __name__ == "__main__":
    main()
