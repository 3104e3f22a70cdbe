"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 physics error (no steady state,
or a threshold search that cannot bracket a crossing).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .config import (ConfigError, load_json, run_config_from_dict, sweep_spec_from_dict,
                     threshold_spec_from_dict)
from .entanglement import analyze
from .model import build_drift
from .modes import dark_mode_count, diagonalize_mechanics, tilde_modes
from .solver import NoSteadyStateError, assess_stability
from .sweep import SweepError, ThresholdError, find_threshold, run_sweep

EXIT_OK, EXIT_INPUT, EXIT_PHYSICS = 0, 1, 2


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, allow_nan=False)
    sys.stdout.write("\n")


def _fail(code: int, message: str) -> int:
    print(f"omsim: error: {message}", file=sys.stderr)
    return code


def cmd_stability(args) -> int:
    p, _ = run_config_from_dict(load_json(args.config))
    rep = assess_stability(build_drift(p))
    _emit(rep.to_dict())
    return EXIT_OK if rep.stable else EXIT_PHYSICS


def cmd_entangle(args) -> int:
    p, _ = run_config_from_dict(load_json(args.config))
    try:
        rep = analyze(p)
    except NoSteadyStateError as exc:
        return _fail(EXIT_PHYSICS, str(exc))
    out = rep.to_dict()
    if p.omega_m_hz is not None:
        out["omega_m_hz"] = p.omega_m_hz
    _emit(out)
    return EXIT_OK


def modes_report(p, tol: float | None) -> dict:
    if tol is None:
        tol = 1e-6 * max(abs(g) for g in p.G)
    count = dark_mode_count(p, tol)
    numerical = diagonalize_mechanics(p)
    decomposition = tilde_modes(p.to_two_mode()) if p.N == 2 else numerical
    return {
        "N": p.N,
        "decomposition": decomposition.to_dict(),
        "numerical": numerical.to_dict(),
        "dark_mode_present": count > 0,
        "dark_mode_count": count,
        "verdict": "DMU" if count > 0 else "DMB",
        "tol": tol,
    }


def cmd_modes(args) -> int:
    p, opts = run_config_from_dict(load_json(args.config))
    tol = args.tol if args.tol is not None else opts.get("tol")
    _emit(modes_report(p, tol))
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec, threads = sweep_spec_from_dict(load_json(args.spec))
    if args.threads is not None:
        threads = args.threads
    result = run_sweep(spec, threads=threads)
    try:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            result.write_csv(fh)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot write {args.output}: {exc.strerror}")
    n_unstable = sum(not r["stable"] for r in result.rows)
    print(f"wrote {len(result)} rows to {args.output} ({n_unstable} unstable)", file=sys.stderr)
    return EXIT_OK


def cmd_threshold(args) -> int:
    kw = threshold_spec_from_dict(load_json(args.spec))
    if args.tol is not None:
        kw["rtol"] = args.tol
    try:
        value = find_threshold(**kw)
    except ThresholdError as exc:
        return _fail(EXIT_PHYSICS, str(exc))
    _emit({"param": kw["param"], "target": kw["target_output"],
           "bracket": list(kw["bracket"]), "threshold": value})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omsim",
        description="Steady-state cavity-vibration entanglement with synthetic magnetism.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stability", help="Hurwitz test of the drift matrix")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("entangle", help="log-negativities and residual contangle")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_entangle)

    p = sub.add_parser("modes", help="hybrid vibration modes and dark-mode verdict")
    p.add_argument("--config", required=True)
    p.add_argument("--tol", type=float, default=None, help="coupling below which a mode is dark")
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("sweep", help="grid sweep written as CSV")
    p.add_argument("--spec", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads, 0 = all cores (default: $OMSIM_THREADS or 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("threshold", help="zero crossing of an entanglement output")
    p.add_argument("--spec", required=True)
    p.add_argument("--tol", type=float, default=None, help="relative tolerance (default 1e-3)")
    p.set_defaults(func=cmd_threshold)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SweepError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    except np.linalg.LinAlgError as exc:
        return _fail(EXIT_PHYSICS, str(exc))


if __name__ == "__main__":
    sys.exit(main())
