"""Command-line entry points.

Subcommands: run (one config, all seeds), sweep (a named preset), toy2d
(the 2-parameter demo), bench (step-overhead measurement), validate-config
(parse and range-check a config without running anything).

Exit codes: 0 success, 1 invalid input or runtime failure, 2 usage errors
(from argparse).
"""

from __future__ import annotations

import argparse
import sys

from ..errors import ExcitationError, InputError
from .bench import DEFAULT_SIZES, format_bench_table, overhead_bench, write_bench_json
from .config import load_config, override
from .runner import run_experiment
from .sweeps import PRESETS, format_sweep_table, run_sweep
from .toy2d import toy2d_demo


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError as err:
        raise InputError(f"--seeds must be comma-separated integers, got {text!r}") from err


def _add_common(parser: argparse.ArgumentParser, config_required: bool) -> None:
    parser.add_argument(
        "--config",
        required=config_required,
        help="path to the experiment config JSON",
    )
    parser.add_argument("--out", help="output directory (overrides output_dir)")
    parser.add_argument("--data-dir", help="dataset directory (overrides data_dir)")
    parser.add_argument("--seeds", help="comma-separated seed list (overrides seeds)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads")


def _effective_config(args: argparse.Namespace):
    config = load_config(args.config) if args.config else _default_config()
    changes = {}
    if args.out:
        changes["output_dir"] = args.out
    if getattr(args, "data_dir", None):
        changes["data_dir"] = args.data_dir
    if args.seeds:
        changes["seeds"] = _parse_seeds(args.seeds)
    return override(config, **changes) if changes else config


def _default_config():
    from .config import ExperimentConfig

    return ExperimentConfig()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="excitation",
        description="Train sparse Top-K MLPs with excitation-modulated updates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment config across its seeds")
    _add_common(run_p, config_required=True)

    sweep_p = sub.add_parser("sweep", help="run a named sweep preset")
    sweep_p.add_argument(
        "--preset", required=True, choices=sorted(PRESETS), help="sweep preset name"
    )
    _add_common(sweep_p, config_required=False)

    toy_p = sub.add_parser("toy2d", help="2-parameter descent demo with fixed utilization")
    toy_p.add_argument("--out", default="results/toy2d", help="output directory")
    toy_p.add_argument("--variant", default="zerosum", help="excitation variant")
    toy_p.add_argument("--gamma", type=float, default=1.0)
    toy_p.add_argument("--steps", type=int, default=60)

    bench_p = sub.add_parser("bench", help="measure excited-step overhead")
    bench_p.add_argument("--out", help="directory for overhead.json")
    bench_p.add_argument("--trials", type=int, default=100)
    bench_p.add_argument("--burn-in", type=int, default=20)
    bench_p.add_argument("--sessions", type=int, default=3)
    bench_p.add_argument(
        "--self-check",
        action="store_true",
        help="time identical plain loops on both sides (chi must be ~0)",
    )

    val_p = sub.add_parser("validate-config", help="check a config file and exit")
    val_p.add_argument("--config", required=True, help="path to the config JSON")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = _effective_config(args)
            print(f"run {config.config_hash()} -> {config.output_dir}")
            summary = run_experiment(config, threads=args.threads, log=print)
            acc = summary["dev_accuracy"]
            if acc["mean"] is not None:
                print(f"dev accuracy mean={acc['mean']:.4f} std={acc['std']:.4f} n={acc['n']}")
            if summary["diverged_seeds"]:
                print(f"diverged seeds: {summary['diverged_seeds']}")
            return 0

        if args.command == "sweep":
            config = _effective_config(args)
            run_sweep(args.preset, config, threads=args.threads, log=print)
            return 0

        if args.command == "toy2d":
            demo = toy2d_demo(
                variant=args.variant,
                gamma=args.gamma,
                steps=args.steps,
                out_dir=args.out,
            )
            meta = demo["meta"]
            print(f"multipliers: {meta['multipliers']}")
            for name, steps in meta["steps_to_threshold"].items():
                reached = steps if steps is not None else "not reached"
                print(f"{name}: loss < {meta['loss_threshold']} at step {reached}")
            print(f"wrote {args.out}")
            return 0

        if args.command == "bench":
            variant = None if args.self_check else "zerosum"
            reports = overhead_bench(
                DEFAULT_SIZES,
                baseline_variant=None,
                treatment_variant=variant,
                trials=args.trials,
                burn_in=args.burn_in,
                sessions=args.sessions,
            )
            print(format_bench_table(reports))
            if args.out:
                from pathlib import Path

                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                write_bench_json(reports, out / "overhead.json")
                print(f"wrote {out / 'overhead.json'}")
            return 0

        if args.command == "validate-config":
            config = load_config(args.config)
            print(f"ok: {args.config} (hash {config.config_hash()})")
            return 0

        raise InputError(f"unknown command {args.command!r}")
    except (ExcitationError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
