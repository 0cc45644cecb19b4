"""Reproducible experiment harness: configs, runs, sweeps, demos, benchmarks."""

from .config import ExperimentConfig, config_from_dict, load_config, override
from .runner import csv_header, load_datasets, run_experiment, run_single
from .sweeps import PRESETS, run_sweep
from .toy2d import toy2d_demo
from .bench import overhead_bench

__all__ = [
    "ExperimentConfig",
    "PRESETS",
    "config_from_dict",
    "csv_header",
    "load_config",
    "load_datasets",
    "overhead_bench",
    "override",
    "run_experiment",
    "run_single",
    "run_sweep",
    "toy2d_demo",
]
