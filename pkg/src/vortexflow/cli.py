"""Command-line scenario runner.

Subcommands:

    meanfield   solve a stationary state from (a, b) or from (E, I) targets
    simulate    run a configured scenario (JSON config), persist CSV/VF2D/manifest
    diagnose    print the functionals of a snapshot file or a named reference state
    sweep       run a cartesian parameter sweep of meanfield/diagnose/simulate cells

Exit codes: 0 ok, 2 config error, 3 degenerate denominator, 4 blow-up
detected, 5 oracle disagreement, 6 I/O error.  VORTEXFLOW_THREADS caps sweep
parallelism.
"""

import argparse
import itertools
import json
import os
import sys
import time as _time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, meanfield, reference
from .dynamics import ModelSpec, run
from .errors import (BlowUpDetected, ConfigError, DegenerateDenominator, FormatError,
                     MassLoss, NoSolutionInRange, OracleDisagreement, OutOfRange,
                     VortexflowError)
from .functionals import Functionals, evaluate
from .grid import ScalarField, make_grid
from .storage import read_vf2d, write_diagnostics_csv, write_json_atomic, write_vf2d
from .svgplot import heat_map, line_chart

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_BLOWUP = 4
EXIT_ORACLE = 5
EXIT_IO = 6

_EXIT_FOR = {
    ConfigError: EXIT_CONFIG,
    OutOfRange: EXIT_CONFIG,
    NoSolutionInRange: EXIT_CONFIG,
    MassLoss: EXIT_CONFIG,
    DegenerateDenominator: EXIT_DEGENERATE,
    BlowUpDetected: EXIT_BLOWUP,
    OracleDisagreement: EXIT_ORACLE,
    FormatError: EXIT_IO,
    OSError: EXIT_IO,
}


def _exit_code_for(exc):
    for etype, code in _EXIT_FOR.items():
        if isinstance(exc, etype):
            return code
    return 1


# ---------------------------------------------------------------- config

def _require_keys(section, allowed, required, where):
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    missing = set(required) - set(section)
    if missing:
        raise ConfigError(f"{where}: missing keys {sorted(missing)}")


def _build_grid(cfg):
    _require_keys(cfg, {"n", "half_width"}, {"n", "half_width"}, "grid")
    return make_grid(int(cfg["n"]), float(cfg["half_width"]))


def _build_model(cfg):
    _require_keys(cfg, {"variant", "nu", "a", "b", "I_ref", "limiter"}, {"variant"}, "model")
    return ModelSpec(variant=cfg["variant"], nu=float(cfg.get("nu", 0.0)),
                     fixed_a=cfg.get("a"), fixed_b=cfg.get("b"),
                     I_ref=cfg.get("I_ref"), limiter=cfg.get("limiter", "fromm"))


def _build_field(cfg, grid, seed=0, where="initial"):
    _require_keys(cfg, {"kind", "sigma2", "center", "t0", "nu", "R", "eps",
                        "a", "b", "path", "perturbation"}, {"kind"}, where)
    kind = cfg["kind"]
    if kind == "gaussian":
        f = reference.gaussian_field(grid, float(cfg.get("sigma2", 1.0)),
                                     tuple(cfg.get("center", (0.0, 0.0))))
    elif kind == "oseen":
        f = reference.oseen_field(grid, float(cfg.get("t0", 0.0)), float(cfg["nu"]))
    elif kind == "patch":
        f = reference.patch_field(grid, float(cfg.get("R", 1.0)), float(cfg["eps"]))
    elif kind == "meanfield":
        sol = meanfield.canonical_solution(float(cfg["a"]), float(cfg["b"]))
        f = meanfield.sample_on_grid(sol, grid)
    elif kind == "file":
        f = read_vf2d(cfg["path"])
        if f.grid.n != grid.n or f.grid.half_width != grid.half_width:
            raise ConfigError(f"{where}: snapshot grid does not match the scenario grid")
    else:
        raise ConfigError(f"{where}: unknown kind {kind!r}")
    pert = cfg.get("perturbation")
    if pert:
        f = _perturb(f, pert, seed)
    return f


def _perturb(field, cfg, seed):
    _require_keys(cfg, {"kind", "amplitude", "wavenumber", "envelope"}, {"kind"},
                  "perturbation")
    kind = cfg["kind"]
    amp = float(cfg.get("amplitude", 0.05))
    R = field.grid.radius()
    if kind == "radial_cos":
        k = float(cfg.get("wavenumber", 4.0))
        env = float(cfg.get("envelope", 0.25))
        factor = 1.0 + amp * np.cos(k * R) * np.exp(-env * R * R)
    elif kind == "random":
        rng = np.random.default_rng(seed)
        modes = rng.normal(size=4)
        k = 1.0 + 3.0 * rng.random(size=4)
        factor = 1.0 + amp * sum(
            m * np.cos(kk * R) for m, kk in zip(modes, k)) * np.exp(-0.25 * R * R) / 2.0
    else:
        raise ConfigError(f"perturbation: unknown kind {kind!r}")
    return ScalarField(field.grid, field.values * factor, field.time).normalized()


def load_scenario(cfg):
    """Validate a simulate config; returns the constructed pieces."""
    _require_keys(cfg, {"grid", "model", "initial", "run", "reference",
                        "output_dir", "seed"},
                  {"grid", "model", "initial", "run", "output_dir"}, "scenario")
    grid = _build_grid(cfg["grid"])
    model = _build_model(cfg["model"])
    seed = int(cfg.get("seed", 0))
    initial = _build_field(cfg["initial"], grid, seed)
    run_cfg = dict(cfg["run"])
    _require_keys(run_cfg, {"horizon", "dt", "cadence", "snapshot_times", "ceiling"},
                  {"horizon"}, "run")
    ref_cfg = cfg.get("reference")
    ref = _build_field(ref_cfg, grid, seed, where="reference") if ref_cfg else None
    return grid, model, initial, run_cfg, ref


def run_scenario(cfg, output_dir=None, plot=False):
    """Execute one simulate scenario; writes outputs and the manifest."""
    t_start = _time.time()
    output_dir = output_dir or cfg.get("output_dir", "out")
    os.makedirs(output_dir, exist_ok=True)
    manifest = {"config": cfg, "version": __version__, "status": "error",
                "error": "", "exit_code": 1, "wall_time": 0.0,
                "clipped_mass_total": 0.0, "final_functionals": None}
    traj = None
    try:
        grid, model, initial, run_cfg, ref = load_scenario(cfg)
        dt = run_cfg.get("dt", "auto")
        traj = run(initial, model, float(run_cfg["horizon"]), dt=dt,
                   cadence=float(run_cfg.get("cadence", 0.1)),
                   snapshot_times=run_cfg.get("snapshot_times", ()),
                   ceiling=float(run_cfg.get("ceiling", np.inf)),
                   reference=ref)
        manifest["status"] = traj.status
        manifest["error"] = traj.error
        manifest["clipped_mass_total"] = traj.clipped_total
        manifest["exit_code"] = {"ok": EXIT_OK, "degenerate": EXIT_DEGENERATE,
                                 "blowup": EXIT_BLOWUP}[traj.status]
        if traj.rows:
            manifest["final_functionals"] = traj.rows[-1].as_dict()
    except VortexflowError as exc:
        manifest["status"] = "error"
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        manifest["exit_code"] = _exit_code_for(exc)
    finally:
        if traj is not None:
            write_diagnostics_csv(os.path.join(output_dir, "diagnostics.csv"), traj.rows)
            for k, snap in enumerate(traj.snapshots):
                write_vf2d(os.path.join(output_dir, f"snapshot_{k:03d}.vf2d"), snap)
            if traj.final_state is not None:
                write_vf2d(os.path.join(output_dir, "final_state.vf2d"),
                           traj.final_state.omega)
            if plot and traj.rows:
                _emit_plots(output_dir, traj)
        manifest["wall_time"] = _time.time() - t_start
        write_json_atomic(os.path.join(output_dir, "manifest.json"), manifest)
    return manifest


def _emit_plots(output_dir, traj):
    plot_dir = os.path.join(output_dir, "plots")
    os.makedirs(plot_dir, exist_ok=True)
    times = traj.column("time")
    for name in Functionals.column_names():
        if name == "time":
            continue
        svg = line_chart(times, traj.column(name), title=name, ylabel=name)
        with open(os.path.join(plot_dir, f"{name}.svg"), "w", encoding="utf-8") as fh:
            fh.write(svg)
    if traj.final_state is not None:
        svg = heat_map(traj.final_state.omega.values, title="final omega")
        with open(os.path.join(plot_dir, "final_omega.svg"), "w", encoding="utf-8") as fh:
            fh.write(svg)


# ---------------------------------------------------------------- meanfield

def solve_meanfield_request(a=None, b=None, E=None, I=None):
    if (E is None) != (I is None):
        raise ConfigError("provide both --E and --I for the inverse problem")
    if E is not None:
        if a is not None or b is not None:
            raise ConfigError("give either (--a, --b) or (--E, --I), not both")
        a, b = meanfield.microcanonical_solve(float(E), float(I))
    if a is None or b is None:
        raise ConfigError("provide (--a, --b) or (--E, --I)")
    return meanfield.canonical_solution(float(a), float(b))


def cmd_meanfield(args):
    sol = solve_meanfield_request(args.a, args.b, args.E, args.I)
    header = {"a": sol.a, "b": sol.b, "chi": sol.chi, "Z": sol.Z, "I": sol.I,
              "E": sol.E, "S": sol.S, "pohozaev_residual": sol.pohozaev_residual}
    os.makedirs(args.out, exist_ok=True)
    write_json_atomic(os.path.join(args.out, "meanfield.json"), header)
    with open(os.path.join(args.out, "profile.csv"), "w", encoding="utf-8") as fh:
        fh.write("r,omega,psi\n")
        for r, w, p in zip(sol.r, sol.omega, sol.psi):
            fh.write(f"{r!r},{w!r},{p!r}\n")
    print(json.dumps(header, indent=2, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------- diagnose

_CLOSED_FORMS = {
    "gaussian": lambda p: _gaussian_closed(float(p.get("sigma2", 1.0))),
    "oseen": lambda p: _gaussian_closed(2.0 * float(p["nu"]) * (float(p.get("t0", 0.0)) + 1.0)),
    "rescaled_oseen": lambda p: _gaussian_closed(2.0),
    "patch": lambda p: _patch_closed(float(p.get("R", 1.0))),
}


def _gaussian_closed(s2):
    return {"mass": 1.0, "I": s2, "S": -1.0 - np.log(2.0 * np.pi * s2),
            "E": meanfield.gaussian_energy(s2), "enstrophy": 1.0 / (4.0 * np.pi * s2),
            "V": -1.0 / (4.0 * np.pi), "a": -1.0 / s2, "b": 0.0}


def _patch_closed(R):
    return {"mass": 1.0, "I": R * R / 4.0, "S": -np.log(np.pi * R * R),
            "E": -np.log(R) / (4.0 * np.pi) + 1.0 / (16.0 * np.pi),
            "enstrophy": 1.0 / (np.pi * R * R), "V": -1.0 / (4.0 * np.pi), "D": 0.0}


def cmd_diagnose(args):
    if bool(args.file) == bool(args.reference):
        raise ConfigError("provide exactly one of --file or --reference")
    if args.file:
        field = read_vf2d(args.file)
        rec = evaluate(field)
        print(json.dumps(rec.as_dict(), indent=2, sort_keys=True))
        if abs(rec.mass - 1.0) > 1e-6:
            print(f"# note: mass = {rec.mass!r}; the virial scales as "
                  f"-mass^2 / (4 pi) = {-rec.mass ** 2 / (4 * np.pi)!r}", file=sys.stderr)
        return EXIT_OK
    kind = args.reference
    params = dict(kv.split("=", 1) for kv in (args.param or []))
    if kind not in _CLOSED_FORMS:
        raise ConfigError(f"unknown reference {kind!r}; choose from {sorted(_CLOSED_FORMS)}")
    grid = make_grid(args.grid_n, args.grid_half_width)
    if kind == "gaussian":
        field = reference.gaussian_field(grid, float(params.get("sigma2", 1.0)))
    elif kind == "oseen":
        field = reference.oseen_field(grid, float(params.get("t0", 0.0)), float(params["nu"]))
    elif kind == "rescaled_oseen":
        field = reference.rescaled_oseen(grid)
    else:
        field = reference.patch_field(grid, float(params.get("R", 1.0)),
                                      float(params.get("eps", 0.05)))
    rec = evaluate(field)
    closed = _CLOSED_FORMS[kind](params)
    print(f"# reference {kind} on n={grid.n}, half_width={grid.half_width}")
    print(f"{'quantity':<16}{'grid':>18}{'closed form':>18}{'rel err':>12}")
    for name, exact in closed.items():
        got = getattr(rec, name)
        denom = abs(exact) if exact != 0.0 else 1.0
        print(f"{name:<16}{got:>18.10g}{exact:>18.10g}{abs(got - exact) / denom:>12.2e}")
    print(json.dumps(rec.as_dict(), indent=2, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------- sweep

def _set_path(cfg, dotted, value):
    keys = dotted.split(".")
    node = cfg
    for key in keys[:-1]:
        node = node.setdefault(key, {})
    node[keys[-1]] = value


def _sweep_cell(task, base, assignment, cell_dir):
    cfg = json.loads(json.dumps(base))
    for dotted, value in assignment:
        _set_path(cfg, dotted, value)
    row = {"cell": os.path.basename(cell_dir), "status": "ok", "error": ""}
    row.update({dotted: value for dotted, value in assignment})
    try:
        if task == "simulate":
            manifest = run_scenario(cfg, output_dir=cell_dir)
            row["status"] = manifest["status"]
            row["error"] = manifest.get("error", "")
            if manifest.get("final_functionals"):
                row.update(manifest["final_functionals"])
        elif task == "meanfield":
            sol = solve_meanfield_request(cfg.get("a"), cfg.get("b"),
                                          cfg.get("E"), cfg.get("I"))
            row.update({"a": sol.a, "b": sol.b, "chi": sol.chi, "Z": sol.Z,
                        "I": sol.I, "E": sol.E, "S": sol.S,
                        "pohozaev_residual": sol.pohozaev_residual})
            os.makedirs(cell_dir, exist_ok=True)
            write_json_atomic(os.path.join(cell_dir, "meanfield.json"),
                              {k: row[k] for k in ("a", "b", "chi", "Z", "I", "E", "S",
                                                   "pohozaev_residual")})
        elif task == "diagnose":
            grid = _build_grid(cfg["grid"])
            field = _build_field(cfg["field"], grid, where="field")
            rec = evaluate(field)
            row.update(rec.as_dict())
            os.makedirs(cell_dir, exist_ok=True)
            write_json_atomic(os.path.join(cell_dir, "functionals.json"), rec.as_dict())
        else:
            raise ConfigError(f"unknown sweep task {task!r}")
    except Exception as exc:  # cell failures recorded, sweep continues
        row["status"] = "failed"
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_sweep(args):
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    _require_keys(cfg, {"task", "base", "sweep", "output_dir"},
                  {"task", "base", "sweep", "output_dir"}, "sweep")
    task = cfg["task"]
    axes = sorted(cfg["sweep"].items())
    names = [name for name, _ in axes]
    combos = list(itertools.product(*(values for _, values in axes)))
    out_dir = cfg["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    workers = int(os.environ.get("VORTEXFLOW_THREADS", "0")) or min(4, os.cpu_count() or 1)
    jobs = []
    for k, combo in enumerate(combos):
        assignment = list(zip(names, combo))
        cell_dir = os.path.join(out_dir, f"cell_{k:03d}")
        jobs.append((task, cfg["base"], assignment, cell_dir))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda j: _sweep_cell(*j), jobs))
    else:
        rows = [_sweep_cell(*j) for j in jobs]
    columns = sorted({key for row in rows for key in row},
                     key=lambda k: (k not in ("cell", "status", "error"), k))
    with open(os.path.join(out_dir, "summary.csv"), "w", encoding="utf-8") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(str(row.get(c, "")) for c in columns) + "\n")
    failed = sum(1 for row in rows if row["status"] == "failed")
    print(f"sweep: {len(rows)} cells, {failed} failed, summary in "
          f"{os.path.join(out_dir, 'summary.csv')}")
    return EXIT_OK


# ---------------------------------------------------------------- entry

def _build_parser():
    parser = argparse.ArgumentParser(prog="vortexflow",
                                     description="Constrained 2-D vorticity dynamics toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_mf = sub.add_parser("meanfield", help="solve a stationary state")
    p_mf.add_argument("--a", type=float, default=None)
    p_mf.add_argument("--b", type=float, default=None)
    p_mf.add_argument("--E", type=float, default=None)
    p_mf.add_argument("--I", type=float, default=None)
    p_mf.add_argument("--out", default="meanfield_out")
    p_mf.set_defaults(func=cmd_meanfield)

    p_sim = sub.add_parser("simulate", help="run a JSON-configured scenario")
    p_sim.add_argument("config")
    p_sim.add_argument("--plot", action="store_true")
    p_sim.add_argument("--output-dir", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_diag = sub.add_parser("diagnose", help="functionals of a snapshot or reference")
    p_diag.add_argument("--file", default=None)
    p_diag.add_argument("--reference", default=None)
    p_diag.add_argument("--param", action="append", default=None,
                        help="reference parameter key=value (repeatable)")
    p_diag.add_argument("--grid-n", type=int, default=256)
    p_diag.add_argument("--grid-half-width", type=float, default=8.0)
    p_diag.set_defaults(func=cmd_diagnose)

    p_sweep = sub.add_parser("sweep", help="cartesian parameter sweep")
    p_sweep.add_argument("config")
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def cmd_simulate(args):
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad JSON in {args.config}: {exc}") from exc
    manifest = run_scenario(cfg, output_dir=args.output_dir, plot=args.plot)
    if manifest["status"] != "ok":
        print(f"run ended with status {manifest['status']}: {manifest['error']}",
              file=sys.stderr)
    return manifest["exit_code"]


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VortexflowError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
