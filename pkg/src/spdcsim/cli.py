"""Command-line front end: ``simulate sweep|converge|oracle|presets``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import list_presets, load_scenario
from .errors import ConfigError, SimulationError
from .interference import oracle_distances, pattern_sweep
from .interference.pattern import convergence_report

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
log = logging.getLogger("spdcsim")


def _num(x):
    """Round to 12 significant digits for output."""
    return float(f"{x:.12g}")


def format_csv(pattern):
    rows = ["tau_fs,rate_raw,rate_normalized"]
    for t, raw, norm in zip(pattern.tau * 1e15, pattern.raw, pattern.normalized):
        rows.append(f"{t:.12g},{raw:.12g},{norm:.12g}")
    return "\n".join(rows) + "\n"


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def _scenario(args):
    scenario = load_scenario(args.config)
    if getattr(args, "steps", None) is not None:
        scenario = scenario.with_steps(args.steps)
    return scenario


def _sweep(scenario, threads, convergence):
    v = scenario.values
    return pattern_sweep(
        v["sweep.tau_start_fs"] * 1e-15, v["sweep.tau_stop_fs"] * 1e-15, v["sweep.steps"],
        scenario.scene(), scenario.method, threads, convergence=convergence,
    )


def cmd_sweep(args):
    scenario = _scenario(args)
    pattern = _sweep(scenario, args.threads, args.converge)
    name = scenario.values["name"]
    out = Path(args.out)
    sidecar = {
        "tool": "spdcsim",
        "version": __version__,
        "visibility": pattern.visibility,
        "asymmetry": pattern.asymmetry,
        "dip_tau_fs": pattern.dip_tau * 1e15,
        "baseline_raw": pattern.baseline,
        "grid": pattern.grid,
        "convergence": pattern.convergence,
        "resolved_config": scenario.resolved(),
    }
    _write(out / f"{name}.csv", format_csv(pattern))
    _write(out / f"{name}.json", _dump(_clean(sidecar)))
    print(f"{name}: V = {pattern.visibility:.4f}, S = {_fmt(pattern.asymmetry)} -> {out / (name + '.csv')}")
    if args.converge:
        return _verdict(pattern.convergence, scenario.values["convergence.tolerance"])
    return EXIT_OK


def _fmt(x):
    return "n/a" if x is None else f"{x:.4f}"


def _verdict(report, tol):
    worst = max(report.values(), default=0.0)
    if worst > tol:
        log.error("grid not converged: max change %.3g > %.3g", worst, tol)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_converge(args):
    scenario = _scenario(args)
    tol = scenario.values["convergence.tolerance"]
    tau = scenario.tau
    report = convergence_report(tau, scenario.scene(), scenario.method, args.threads)
    result = {
        "name": scenario.values["name"],
        "tolerance": tol,
        "max_change": report,
        "converged": max(report.values(), default=0.0) <= tol,
    }
    text = _dump(_clean(result))
    if args.out:
        _write(Path(args.out) / f"{scenario.values['name']}_convergence.json", text)
    sys.stdout.write(text)
    return _verdict(report, tol)


def cmd_oracle(args):
    scenario = _scenario(args)
    v = scenario.values
    if not v["oracle.one_dimensional"]:
        raise scenario.error("oracle.one_dimensional", "scenario is not flagged as a 1-D limit scene")
    scene = scenario.scene()
    pattern = _sweep(scenario, args.threads, False)
    l_inf, l2 = oracle_distances(pattern, scene.crystal, scene.analyzers, scene.pump.center_omega / 2)
    tol = v["oracle.tolerance"]
    result = {"name": v["name"], "linf": l_inf, "l2": l2, "tolerance": tol, "pass": l_inf <= tol}
    text = _dump(_clean(result))
    if args.out:
        _write(Path(args.out) / f"{v['name']}_oracle.json", text)
    sys.stdout.write(text)
    return EXIT_OK if l_inf <= tol else EXIT_NUMERIC


def cmd_presets(args):
    for name in list_presets():
        print(name)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="simulate", description="Type-II SPDC polarization-interference simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default):
        p.add_argument("--config", required=True, help="scenario file, sweep JSON sidecar or preset name")
        p.add_argument("--out", default=out_default, help="output directory")
        p.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
        p.add_argument("--steps", type=int, default=None, help="override sweep.steps")

    p = sub.add_parser("sweep", help="run a delay sweep and write CSV + JSON")
    common(p, ".")
    p.add_argument("--converge", action="store_true", help="also attach a grid-refinement report")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("converge", help="double each grid dimension and report the change")
    common(p, None)
    p.set_defaults(func=cmd_converge)
    p = sub.add_parser("oracle", help="compare a 1-D limit scene with the analytic pattern")
    common(p, None)
    p.set_defaults(func=cmd_oracle)
    p = sub.add_parser("presets", help="list available presets")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
