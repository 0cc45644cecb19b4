"""Named sweep presets: one axis varied, vanilla vs excited per cell.

A sweep is a list of (cell label, config) pairs derived from a base config.
Each cell runs as a full experiment in its own subdirectory; the sweep
summary tabulates mean/std of final dev accuracy per cell and the delta
of every excited cell against the vanilla cell at the same axis value.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable

from ..errors import InputError
from .config import ExperimentConfig, override
from .runner import run_experiment

# each optimizer gets the step size it is normally run at
OPTIMIZER_LR = {
    "sgd": 0.01,
    "sgd_momentum": 0.01,
    "adam": 1e-4,
    "adamw": 1e-4,
    "rmsprop": 1e-4,
    "adagrad": 0.01,
}

Cells = list[tuple[str, ExperimentConfig]]


VARIANT_ARMS = ("none", "zerosum", "positivesum")


def _with_variants(
    base: ExperimentConfig,
    axis: str,
    values: list,
    variants: tuple[str, ...] = VARIANT_ARMS,
    extra: Callable[[object], dict] | None = None,
) -> Cells:
    cells: Cells = []
    for value in values:
        changes = {axis: value}
        if extra is not None:
            changes.update(extra(value))
        for variant in variants:
            label = f"{axis}={value}/{variant}"
            cells.append((label, override(base, excitation_variant=variant, **changes)))
    return cells


def _sparsity_cells(base: ExperimentConfig) -> Cells:
    return _with_variants(base, "sparsity", [0.9, 0.7, 0.5, 0.3, 0.1])


def _batch_cells(base: ExperimentConfig) -> Cells:
    return _with_variants(base, "batch_size", [16, 32, 64, 128, 256, 512])


def _scheduler_cells(base: ExperimentConfig) -> Cells:
    return _with_variants(base, "schedule", ["constant", "cosine"])


def _power_cells(base: ExperimentConfig) -> Cells:
    return _with_variants(base, "gamma", [1.0, 2.0, 3.0])


def _optimizer_cells(base: ExperimentConfig) -> Cells:
    return _with_variants(
        base,
        "optimizer",
        list(OPTIMIZER_LR),
        extra=lambda kind: {"lr": OPTIMIZER_LR[kind]},
    )


def _lr_cells(base: ExperimentConfig) -> Cells:
    if base.optimizer in ("adam", "adamw", "rmsprop"):
        values = [1e-4, 1.5e-4, 2e-4, 5e-4, 1e-3, 2e-3, 3e-3]
    else:
        values = [0.01, 0.015, 0.02, 0.05, 0.1, 0.2, 0.3]
    return _with_variants(base, "lr", values)


def _deep_rescue_cells(base: ExperimentConfig) -> Cells:
    cells: Cells = []
    for depth, kind in [(10, "sgd"), (20, "adam")]:
        for variant in VARIANT_ARMS:
            label = f"depth={depth}-{kind}/{variant}"
            cells.append(
                (
                    label,
                    override(
                        base,
                        depth=depth,
                        optimizer=kind,
                        lr=OPTIMIZER_LR[kind],
                        excitation_variant=variant,
                    ),
                )
            )
    return cells


def _dynamics_cells(base: ExperimentConfig) -> Cells:
    deep = override(base, depth=8)
    return [
        ("depth=8/none", override(deep, excitation_variant="none")),
        ("depth=8/zerosum", override(deep, excitation_variant="zerosum")),
    ]


PRESETS: dict[str, Callable[[ExperimentConfig], Cells]] = {
    "sparsity": _sparsity_cells,
    "batch_size": _batch_cells,
    "scheduler": _scheduler_cells,
    "power": _power_cells,
    "optimizers": _optimizer_cells,
    "lr": _lr_cells,
    "deep_rescue": _deep_rescue_cells,
    "dynamics": _dynamics_cells,
}


def _slug(label: str) -> str:
    return label.replace("/", "_").replace("=", "-")


def run_sweep(
    preset: str,
    base: ExperimentConfig,
    threads: int = 1,
    log: Callable[[str], None] | None = None,
) -> dict:
    """Run every cell of a preset; one run's divergence never stops the rest."""
    if preset not in PRESETS:
        raise InputError(f"unknown sweep preset {preset!r}; have {sorted(PRESETS)}")
    root = Path(base.output_dir)
    root.mkdir(parents=True, exist_ok=True)
    cells = PRESETS[preset](base)

    rows = []
    for label, config in cells:
        cell_config = override(config, output_dir=str(root / _slug(label)))
        if log is not None:
            log(f"cell {label}")
        summary = run_experiment(cell_config, threads=threads, log=log)
        rows.append(
            {
                "cell": label,
                "axis_value": label.split("/")[0],
                "variant": config.excitation_variant,
                "mean": summary["dev_accuracy"]["mean"],
                "std": summary["dev_accuracy"]["std"],
                "n": summary["dev_accuracy"]["n"],
                "diverged_seeds": summary["diverged_seeds"],
                "dir": _slug(label),
            }
        )

    baselines = {
        row["axis_value"]: row["mean"] for row in rows if row["variant"] == "none"
    }
    for row in rows:
        base_mean = baselines.get(row["axis_value"])
        if row["variant"] != "none" and base_mean is not None and row["mean"] is not None:
            row["delta"] = row["mean"] - base_mean
        else:
            row["delta"] = None

    sweep_summary = {"preset": preset, "cells": rows}
    with open(root / "sweep_summary.json", "w") as sink:
        json.dump(sweep_summary, sink, indent=2)
        sink.write("\n")
    if log is not None:
        log(format_sweep_table(sweep_summary))
    return sweep_summary


def format_sweep_table(sweep_summary: dict) -> str:
    lines = [f"{'cell':<32} {'mean':>8} {'std':>8} {'delta':>8}"]
    for row in sweep_summary["cells"]:
        mean = f"{row['mean']:.4f}" if row["mean"] is not None else "---"
        std = f"{row['std']:.4f}" if row["std"] is not None else "---"
        delta = f"{row['delta']:+.4f}" if row.get("delta") is not None else ""
        lines.append(f"{row['cell']:<32} {mean:>8} {std:>8} {delta:>8}")
    return "\n".join(lines)
