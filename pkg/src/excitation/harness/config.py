"""Experiment configuration: JSON in, validated dataclass out.

The JSON schema is flat and closed: unknown keys are rejected so a typo
cannot silently fall back to a default. Every field has a default, so a
config file only needs the keys it wants to change.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from ..errors import FormatError, InputError
from ..modulation import ExcitationConfig
from ..optimizers import SCHEDULE_KINDS, OptimizerConfig
from ..topk_mlp import ModelConfig

DATASETS = ("cifar10", "synth")


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = "synth"
    input_dim: int = 3072
    width: int = 128
    depth: int = 4
    classes: int = 10
    sparsity: float = 0.9
    optimizer: str = "sgd"
    lr: float = 0.01
    momentum: float = 0.9
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.01
    schedule: str = "cosine"
    total_epochs: int = 30
    batch_size: int = 512
    excitation_variant: str = "none"
    gamma: float = 1.0
    utilization_floor: float = 1e-6
    eval_every: int = 0
    seeds: tuple[int, ...] = (0, 1, 2)
    output_dir: str = "results"
    # optional keys: dataset location and synthetic-set shape
    data_dir: str | None = None
    synth_n: int = 20000
    synth_spread: float = 1.0

    def validate(self) -> None:
        """Range-check every field; raises InputError with the failing key."""
        if self.dataset not in DATASETS:
            raise InputError(f"dataset must be one of {DATASETS}, got {self.dataset!r}")
        if self.schedule not in SCHEDULE_KINDS:
            raise InputError(
                f"schedule must be one of {SCHEDULE_KINDS}, got {self.schedule!r}"
            )
        if self.total_epochs < 1:
            raise InputError(f"total_epochs must be >= 1, got {self.total_epochs}")
        if self.batch_size < 1:
            raise InputError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.eval_every < 0:
            raise InputError(f"eval_every must be >= 0, got {self.eval_every}")
        if not self.seeds:
            raise InputError("seeds must be a nonempty list of integers")
        if any(not isinstance(s, int) or isinstance(s, bool) for s in self.seeds):
            raise InputError(f"seeds must be integers, got {self.seeds!r}")
        if self.synth_n < 1:
            raise InputError(f"synth_n must be >= 1, got {self.synth_n}")
        if self.synth_spread < 0.0:
            raise InputError(f"synth_spread must be >= 0, got {self.synth_spread}")
        if not self.output_dir:
            raise InputError("output_dir must be a nonempty path")
        # the sub-config constructors own the remaining range checks
        self.model_config()
        self.optimizer_config()
        self.excitation_config()

    def model_config(self) -> ModelConfig:
        return ModelConfig(
            input_dim=self.input_dim,
            width=self.width,
            depth=self.depth,
            classes=self.classes,
            sparsity=self.sparsity,
        )

    def optimizer_config(self) -> OptimizerConfig:
        return OptimizerConfig(
            kind=self.optimizer,
            lr=self.lr,
            momentum=self.momentum,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
            weight_decay=self.weight_decay,
        )

    def excitation_config(self) -> ExcitationConfig:
        return ExcitationConfig(
            variant=self.excitation_variant,
            gamma=self.gamma,
            utilization_floor=self.utilization_floor,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["seeds"] = list(self.seeds)
        return d

    def config_hash(self) -> str:
        """Short stable digest of everything that affects the run outcome."""
        d = self.to_dict()
        d.pop("output_dir")  # where results land does not change what they are
        d.pop("data_dir")
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]

    def run_id(self, seed: int) -> str:
        return (
            f"{self.dataset}-{self.optimizer}-{self.excitation_variant}"
            f"-{self.config_hash()}-seed{seed}"
        )


_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise FormatError(f"config root must be a JSON object, got {type(raw).__name__}")
    unknown = sorted(set(raw) - _FIELD_NAMES)
    if unknown:
        raise InputError(f"unknown config keys: {', '.join(unknown)}")
    kwargs = dict(raw)
    if "seeds" in kwargs:
        seeds = kwargs["seeds"]
        if not isinstance(seeds, list):
            raise InputError(f"seeds must be a JSON array, got {type(seeds).__name__}")
        kwargs["seeds"] = tuple(seeds)
    config = ExperimentConfig(**kwargs)
    config.validate()
    return config


def load_config(path: str | Path) -> ExperimentConfig:
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError(f"{path}: invalid JSON: {err}") from err
    return config_from_dict(raw)


def override(config: ExperimentConfig, **changes) -> ExperimentConfig:
    """replace() plus revalidation, for CLI flag overrides."""
    changed = replace(config, **changes)
    changed.validate()
    return changed
