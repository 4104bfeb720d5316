"""Command-line experiment runner.

    hamid run <config.json> [--out DIR] [--seed N] [--nd N] [--steps N] [--tol X]
    hamid sweep [--etas ...] [--n-seeds N] [--k-max N] [--workers N] ...
    hamid demo singularity [--steps N] [--out DIR]

Config files are JSON documents with a "kind" field; see the README for the
schema and the available experiment kinds.
"""
from __future__ import annotations

import argparse
import json
import sys

from .experiments import ExperimentConfig, run_experiment
from .reporting import format_float


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="output directory (overrides the config)")
    parser.add_argument("--seed", type=int, help="base RNG seed")
    parser.add_argument("--steps", type=int, help="number of time steps")
    parser.add_argument("--tol", type=float, help="Newton stopping tolerance")
    parser.add_argument("--nd", type=int, help="Hilbert-space size (double-well levels)")


def _apply_overrides(cfg: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    if getattr(args, "out", None):
        cfg.out_dir = args.out
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "steps", None) is not None:
        cfg.n_steps = args.steps
    if getattr(args, "tol", None) is not None:
        cfg.newton = dict(cfg.newton or {})
        cfg.newton["tol"] = args.tol
    if getattr(args, "nd", None) is not None:
        cfg.model = dict(cfg.model or {})
        cfg.model["n_levels"] = args.nd
    return cfg


def _print_summary(result) -> None:
    print(f"wrote {len(result.files)} files to {result.out_dir}")
    for key, value in result.summary.items():
        if isinstance(value, float):
            value = format_float(value)
        print(f"  {key}: {value}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="hamid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment described by a JSON config")
    run_p.add_argument("config", help="path to the experiment config JSON")
    _add_common(run_p)

    sweep_p = sub.add_parser("sweep", help="perturbation-magnitude sweep on the two-level benchmark")
    sweep_p.add_argument("--etas", help="comma-separated perturbation magnitudes")
    sweep_p.add_argument("--n-seeds", type=int, default=15)
    sweep_p.add_argument("--k-max", type=int, default=9)
    sweep_p.add_argument("--workers", type=int, default=1)
    _add_common(sweep_p)

    demo_p = sub.add_parser("demo", help="built-in demonstrations")
    demo_p.add_argument("name", choices=["singularity"], help="demo name")
    _add_common(demo_p)

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            with open(args.config) as fh:
                cfg = ExperimentConfig.from_dict(json.load(fh))
            cfg = _apply_overrides(cfg, args)
            result = run_experiment(cfg)
            _print_summary(result)
        elif args.command == "sweep":
            sweep = {"n_seeds": args.n_seeds, "k_max": args.k_max, "workers": args.workers}
            if args.etas:
                sweep["etas"] = [float(x) for x in args.etas.split(",")]
            cfg = ExperimentConfig(kind="eta-sweep", sweep=sweep)
            cfg = _apply_overrides(cfg, args)
            result = run_experiment(cfg)
            _print_summary(result)
        elif args.command == "demo":
            cfg = ExperimentConfig(kind="singularity-demo")
            cfg = _apply_overrides(cfg, args)
            result = run_experiment(cfg)
            rank = result.summary["numerical_rank"]
            refused = result.summary["newton_step_refused"]
            print(f"reduced-system numerical rank: {rank} (of 4)")
            print(f"condition estimate: {format_float(result.summary['condition_estimate'])}")
            print(
                "Newton step refused (singular Jacobian)"
                if refused
                else "Newton step was NOT refused"
            )
            _print_summary(result)
    except (ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
