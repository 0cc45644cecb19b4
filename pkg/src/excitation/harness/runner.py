"""Experiment execution: datasets in, per-seed CSV logs and a summary out.

Every run writes one CSV named after its run id. Rows are streamed and
flushed as evaluation points arrive, so a partial file is still valid up to
its last line. Floats are written with repr (shortest round-trip), which
makes reruns of a deterministic config byte-identical.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, TextIO

from ..data import Dataset, load_cifar10, synth_clusters
from ..errors import InputError
from ..training import EvalPoint, TrainResult, train_loop
from .config import ExperimentConfig

# the synthetic dataset is fixed across run seeds so that every variant and
# seed trains on identical data; only init/batch order follow the run seed
_SYNTH_DATA_SEED = 7


def load_datasets(config: ExperimentConfig) -> tuple[Dataset, Dataset]:
    """(train, dev) for the configured dataset."""
    if config.dataset == "cifar10":
        if not config.data_dir:
            raise InputError(
                "dataset=cifar10 needs data_dir (config key or --data-dir flag)"
            )
        train, test = load_cifar10(config.data_dir)
        if config.input_dim != train.features.shape[1]:
            raise InputError(
                f"input_dim={config.input_dim} but CIFAR-10 has "
                f"{train.features.shape[1]} features"
            )
        return train, test
    dev_n = max(512, config.synth_n // 5)
    pool = synth_clusters(
        seed=_SYNTH_DATA_SEED,
        n=config.synth_n + dev_n,
        d=config.input_dim,
        classes=config.classes,
        spread=config.synth_spread,
    )
    train = Dataset(
        pool.features[: config.synth_n],
        pool.labels[: config.synth_n],
        classes=config.classes,
        name="synth-train",
    )
    dev = Dataset(
        pool.features[config.synth_n :],
        pool.labels[config.synth_n :],
        classes=config.classes,
        name="synth-dev",
    )
    return train, dev


def csv_header(depth: int) -> list[str]:
    cols = ["run_id", "seed", "epoch", "step", "split", "loss", "accuracy", "lr"]
    for l in range(depth):
        cols += [
            f"entropy_{l}",
            f"specialization_{l}",
            f"phi_min_{l}",
            f"phi_mean_{l}",
            f"phi_max_{l}",
        ]
    return cols


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_row(out: TextIO, cells: list) -> None:
    out.write(",".join(_cell(c) for c in cells) + "\n")
    out.flush()


def _point_rows(run_id: str, seed: int, depth: int, point: EvalPoint) -> list[list]:
    """One train row (stream stats + phi) and one dev row (full-pass metrics)."""
    prefix = [run_id, seed, point.epoch, point.step]
    train_tail: list = []
    for l in range(depth):
        train_tail += [None, None, point.phi_min[l], point.phi_mean[l], point.phi_max[l]]
    rows = [
        prefix + ["train", point.train_loss, point.train_accuracy, point.lr] + train_tail
    ]
    if point.dev is not None:
        dev_tail: list = []
        for l in range(depth):
            dev_tail += [
                point.dev.entropy[l],
                point.dev.specialization[l],
                None,
                None,
                None,
            ]
        rows.append(
            prefix + ["dev", point.dev.loss, point.dev.accuracy, point.lr] + dev_tail
        )
    return rows


@dataclass
class RunOutcome:
    run_id: str
    seed: int
    csv_path: str
    steps: int
    diverged: bool
    divergence_step: int | None
    final_dev_loss: float | None
    final_dev_accuracy: float | None
    wall_seconds: float
    degenerate_events: int


def run_single(
    config: ExperimentConfig,
    seed: int,
    train: Dataset,
    dev: Dataset,
    out_dir: Path,
) -> RunOutcome:
    run_id = config.run_id(seed)
    csv_path = out_dir / f"{run_id}.csv"
    depth = config.depth
    started = time.perf_counter()
    with open(csv_path, "w") as sink:
        _write_row(sink, csv_header(depth))

        def on_eval(point: EvalPoint) -> None:
            for row in _point_rows(run_id, seed, depth, point):
                _write_row(sink, row)

        result: TrainResult = train_loop(
            config.model_config(),
            config.optimizer_config(),
            config.excitation_config(),
            train,
            epochs=config.total_epochs,
            batch_size=config.batch_size,
            seed=seed,
            schedule=config.schedule,
            eval_set=dev,
            eval_every=config.eval_every,
            on_eval=on_eval,
        )
    wall = time.perf_counter() - started
    final = result.eval_points[-1] if result.eval_points else None
    return RunOutcome(
        run_id=run_id,
        seed=seed,
        csv_path=str(csv_path),
        steps=result.steps,
        diverged=result.diverged,
        divergence_step=result.divergence_step,
        final_dev_loss=final.dev.loss if final and final.dev else None,
        final_dev_accuracy=final.dev.accuracy if final and final.dev else None,
        wall_seconds=wall,
        degenerate_events=result.degenerate_events,
    )


def _aggregate(values: list[float]) -> dict:
    if not values:
        return {"mean": None, "std": None, "n": 0}
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    return {"mean": mean, "std": var**0.5, "n": len(values)}


def run_experiment(
    config: ExperimentConfig,
    threads: int = 1,
    log: Callable[[str], None] | None = None,
) -> dict:
    """All seeds of one configuration; returns and writes the summary."""
    config.validate()
    if threads < 1:
        raise InputError(f"threads must be >= 1, got {threads}")
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    train, dev = load_datasets(config)

    def one(seed: int) -> RunOutcome:
        outcome = run_single(config, seed, train, dev, out_dir)
        if log is not None:
            acc = (
                f"dev_acc={outcome.final_dev_accuracy:.4f}"
                if outcome.final_dev_accuracy is not None
                else "no eval"
            )
            status = "DIVERGED" if outcome.diverged else acc
            log(f"  {outcome.run_id}: {status} ({outcome.wall_seconds:.1f}s)")
        return outcome

    if threads == 1 or len(config.seeds) == 1:
        outcomes = [one(seed) for seed in config.seeds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(one, config.seeds))

    finals = [
        o.final_dev_accuracy
        for o in outcomes
        if not o.diverged and o.final_dev_accuracy is not None
    ]
    summary = {
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "dev_accuracy": _aggregate(finals),
        "diverged_seeds": [o.seed for o in outcomes if o.diverged],
        "degenerate_events": sum(o.degenerate_events for o in outcomes),
        "runs": [
            {
                "run_id": o.run_id,
                "seed": o.seed,
                "csv": Path(o.csv_path).name,
                "steps": o.steps,
                "diverged": o.diverged,
                "divergence_step": o.divergence_step,
                "final_dev_loss": o.final_dev_loss,
                "final_dev_accuracy": o.final_dev_accuracy,
                "wall_seconds": o.wall_seconds,
            }
            for o in outcomes
        ],
    }
    with open(out_dir / "summary.json", "w") as sink:
        json.dump(summary, sink, indent=2)
        sink.write("\n")
    return summary
