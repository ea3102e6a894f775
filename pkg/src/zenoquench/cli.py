"""Command-line front end: free / quench / zeno / bound-state / sweep.

Exit codes: 0 success, 2 usage or configuration error, 3 I/O error,
4 numerical failure.  Flag values override config-file values, which
override built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, ConvergenceFailure, DegenerateFitError, InvalidValueError
from .experiments import run_free_decay, run_periodic_quench, run_single_quench, sweep
from .model import TWO_PI, SystemParams, build_params, protocol_segments
from .observables import bound_state_analysis, fit_zeno_time
from .reporting import RunManifest, write_csv, write_json

_OVERRIDE_KEYS = ("omega0_ghz", "omegac_ghz", "hop_ghz", "g0_ghz", "n_sites", "boundary", "frame")


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {what} '{path}': {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} '{path}' is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"{what} '{path}' must contain a JSON object")
    return payload


def _resolve_params(args: argparse.Namespace) -> SystemParams:
    raw = _load_json(args.config, "config file")
    for key in _OVERRIDE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    return build_params(raw)


def _require_positive(name: str, value: float) -> None:
    if not value > 0:
        raise InvalidValueError(name, f"must be positive, got {value}")


def _prepare_out_dir(args: argparse.Namespace) -> Path:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def _finish(
    manifest: RunManifest,
    out_dir: Path,
    outputs: list[str],
    started: float,
) -> int:
    manifest.outputs = sorted(outputs + ["manifest.json"])
    manifest.wall_clock_s = time.perf_counter() - started
    manifest.created_utc = datetime.now(timezone.utc).isoformat()
    manifest.write(out_dir / "manifest.json")
    return 0


def _cmd_free(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    params = _resolve_params(args)
    _require_positive("--t-end", args.t_end)
    _require_positive("--dt", args.dt)
    _require_positive("--fit-window", args.fit_window)
    out_dir = _prepare_out_dir(args)

    result = run_free_decay(params, args.t_end, args.dt, fit_window_ns=args.fit_window)
    outputs: list[str] = []

    write_csv(
        out_dir / "population.csv",
        ["t_ns", "P"],
        zip(result.times_ns, result.survival),
    )
    outputs.append("population.csv")

    site_header = ["t_ns"] + [f"site_{l}" for l in range(params.n_sites)]
    write_csv(
        out_dir / "sites.csv",
        site_header,
        ([t, *row] for t, row in zip(result.times_ns, result.site_populations)),
    )
    outputs.append("sites.csv")

    rates = result.rates
    write_csv(
        out_dir / "rates.csv",
        ["t_ns", "omega", "gamma", "valid"],
        zip(rates.times_ns, rates.omega_shift / TWO_PI, rates.gamma, (bool(v) for v in rates.valid)),
    )
    outputs.append("rates.csv")

    fit = result.zeno_fit
    if fit is None:
        payload = {"tau_z_ns": None, "window": min(args.fit_window, args.t_end), "slope": None, "window_sensitivity": {}}
    else:
        sensitivity = {}
        for label, window in (("half_window", 0.5 * fit.window_ns), ("double_window", min(2.0 * fit.window_ns, args.t_end))):
            try:
                sensitivity[label] = {
                    "window_ns": window,
                    "tau_z_ns": fit_zeno_time((result.times_ns, result.survival), window).tau_z_ns,
                }
            except DegenerateFitError:
                sensitivity[label] = {"window_ns": window, "tau_z_ns": None}
        payload = {"tau_z_ns": fit.tau_z_ns, "window": fit.window_ns, "slope": fit.slope, "window_sensitivity": sensitivity}
    write_json(out_dir / "zeno_fit.json", payload)
    outputs.append("zeno_fit.json")

    if not args.no_figures:
        from . import plots

        outputs += plots.plot_free_decay(result, out_dir)

    manifest = RunManifest.for_run("free", __version__, params, result.trajectory.protocol, args.dt)
    return _finish(manifest, out_dir, outputs, started)


def _cmd_quench(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    params = _resolve_params(args)
    _require_positive("--tau", args.tau)
    if args.delta < 0:
        raise InvalidValueError("--delta", f"must be non-negative, got {args.delta}")
    _require_positive("--dt", args.dt)
    out_dir = _prepare_out_dir(args)

    result = run_single_quench(params, args.tau, args.delta, args.dt)
    outputs: list[str] = []
    write_csv(
        out_dir / "quench.csv",
        ["t_ns", "P", "C", "g_active_ghz"],
        zip(result.times_ns, result.survival, result.concurrence, result.coupling_ghz),
    )
    outputs.append("quench.csv")
    write_json(
        out_dir / "shape_distance.json",
        {"shape_distance": result.shape_distance, "tau_ns": result.tau_ns, "delta_ns": result.delta_ns},
    )
    outputs.append("shape_distance.json")

    if not args.no_figures:
        from . import plots

        outputs += plots.plot_single_quench(result, out_dir)

    manifest = RunManifest.for_run("quench", __version__, params, result.trajectory.protocol, args.dt)
    return _finish(manifest, out_dir, outputs, started)


def _cmd_zeno(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    params = _resolve_params(args)
    _require_positive("--tau", args.tau)
    if args.delta < 0:
        raise InvalidValueError("--delta", f"must be non-negative, got {args.delta}")
    if args.cycles < 1:
        raise InvalidValueError("--cycles", f"must be at least 1, got {args.cycles}")
    _require_positive("--dt", args.dt)
    out_dir = _prepare_out_dir(args)

    result = run_periodic_quench(params, args.tau, args.delta, args.cycles, args.dt, args.margin)
    outputs: list[str] = []
    write_csv(
        out_dir / "zeno.csv",
        ["on_time_ns", "p_quench", "p_free", "p_ideal"],
        zip(result.on_time_axis_ns, result.p_quench, result.p_free, result.p_ideal),
    )
    outputs.append("zeno.csv")
    write_csv(
        out_dir / "concurrence.csv",
        ["t_ns", "C"],
        zip(result.full_times_ns, result.concurrence_full),
    )
    outputs.append("concurrence.csv")
    write_json(
        out_dir / "verdict.json",
        {
            "verdict": result.verdict,
            "p_quench_final": float(result.p_quench[-1]),
            "p_free_final": float(result.p_free[-1]),
            "on_time_final_ns": float(result.on_time_axis_ns[-1]),
            "p_tau": result.p_tau,
            "margin": args.margin,
        },
    )
    outputs.append("verdict.json")

    if not args.no_figures:
        from . import plots

        outputs += plots.plot_periodic_quench(result, out_dir)

    manifest = RunManifest.for_run("zeno", __version__, params, result.trajectory.protocol, args.dt)
    return _finish(manifest, out_dir, outputs, started)


def _cmd_bound_state(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    params = _resolve_params(args)
    out_dir = _prepare_out_dir(args)

    report = bound_state_analysis(params)
    outputs: list[str] = []
    write_json(
        out_dir / "bound_state.json",
        {
            "exists": report.exists,
            "energy_ghz": report.energy_ghz,
            "emitter_weight": report.emitter_weight,
            "trapped_population_prediction": report.trapped_population_prediction,
        },
    )
    outputs.append("bound_state.json")

    if not args.no_figures:
        from . import plots

        outputs += plots.plot_bound_state(report, params, out_dir)

    manifest = RunManifest.for_run("bound-state", __version__, params, None, 0.0)
    return _finish(manifest, out_dir, outputs, started)


def _cmd_sweep(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    params = _resolve_params(args)
    if args.cycles < 1:
        raise InvalidValueError("--cycles", f"must be at least 1, got {args.cycles}")
    _require_positive("--dt", args.dt)
    grid = _load_json(args.grid_file, "grid file")
    axes = {}
    for key in ("tau_ns", "delta_ns", "omega0_ghz"):
        values = grid.get(key)
        if not isinstance(values, list) or len(values) == 0:
            raise ConfigError(f"grid file must list at least one value for '{key}'")
        axes[key] = [float(v) for v in values]
    out_dir = _prepare_out_dir(args)

    rows = sweep(params, axes["tau_ns"], axes["delta_ns"], axes["omega0_ghz"], args.cycles, args.dt, args.margin)
    outputs: list[str] = []
    write_csv(
        out_dir / "sweep.csv",
        ["tau_ns", "delta_ns", "omega0_ghz", "verdict", "p_quench", "p_free"],
        ((r.tau_ns, r.delta_ns, r.omega0_ghz, r.verdict, r.p_quench, r.p_free) for r in rows),
    )
    outputs.append("sweep.csv")
    failures = {f"tau={r.tau_ns:g},delta={r.delta_ns:g},omega0={r.omega0_ghz:g}": r.error for r in rows if r.error}
    if failures:
        write_json(out_dir / "sweep_errors.json", failures)
        outputs.append("sweep_errors.json")

    manifest = RunManifest.for_run("sweep", __version__, params, None, args.dt)
    return _finish(manifest, out_dir, outputs, started)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", help="JSON config file with the system parameters")
    parser.add_argument("--out-dir", default="out", help="output directory (created if missing)")
    parser.add_argument("--dt", type=float, default=0.01, help="sampling step in ns")
    parser.add_argument("--no-figures", action="store_true", help="skip PNG figure rendering")
    group = parser.add_argument_group("config overrides")
    group.add_argument("--omega0-ghz", type=float, dest="omega0_ghz")
    group.add_argument("--omegac-ghz", type=float, dest="omegac_ghz")
    group.add_argument("--hop-ghz", type=float, dest="hop_ghz")
    group.add_argument("--g0-ghz", type=float, dest="g0_ghz")
    group.add_argument("--n-sites", type=int, dest="n_sites")
    group.add_argument("--boundary", choices=("open", "periodic"), dest="boundary")
    group.add_argument("--frame", choices=("rotating", "lab"), dest="frame")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenoquench",
        description="Simulate emitter decay in a coupled-resonator array under coupling quenches.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_free = sub.add_parser("free", help="constant-coupling decay run")
    _add_common(p_free)
    p_free.add_argument("--t-end", type=float, default=70.0, help="run duration in ns")
    p_free.add_argument("--fit-window", type=float, default=1.0, help="quadratic-fit window in ns")
    p_free.set_defaults(handler=_cmd_free)

    p_quench = sub.add_parser("quench", help="single on-off-on quench run")
    _add_common(p_quench)
    p_quench.add_argument("--tau", type=float, default=1.0, help="quench-on time in ns")
    p_quench.add_argument("--delta", type=float, default=13.0, help="quench-off time in ns")
    p_quench.set_defaults(handler=_cmd_quench)

    p_zeno = sub.add_parser("zeno", help="periodic quench run with companions")
    _add_common(p_zeno)
    p_zeno.add_argument("--tau", type=float, default=1.0, help="quench-on time in ns")
    p_zeno.add_argument("--delta", type=float, default=13.0, help="quench-off time in ns")
    p_zeno.add_argument("--cycles", type=int, default=5, help="number of on/off cycles before the final on-stage")
    p_zeno.add_argument("--margin", type=float, default=0.05, help="relative margin for the verdict")
    p_zeno.set_defaults(handler=_cmd_zeno)

    p_bound = sub.add_parser("bound-state", help="bound-state and trapping analysis")
    _add_common(p_bound)
    p_bound.set_defaults(handler=_cmd_bound_state)

    p_sweep = sub.add_parser("sweep", help="verdicts over a (tau, delta, omega0) grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--grid-file", required=True, help="JSON file with tau_ns, delta_ns, omega0_ghz arrays")
    p_sweep.add_argument("--cycles", type=int, default=5)
    p_sweep.add_argument("--margin", type=float, default=0.05)
    p_sweep.set_defaults(handler=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"zenoquench: config error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateFitError, ConvergenceFailure, FloatingPointError) as exc:
        print(f"zenoquench: numerical failure: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"zenoquench: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
