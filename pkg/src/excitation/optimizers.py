"""First-order optimizers with a propose-then-apply interface.

Each optimizer is a pure rule from (state, gradients) to a proposed update
delta per parameter tensor; nothing here touches the parameters themselves.
That split is what lets a caller rescale the delta before applying it while
the internal state (moments, accumulators, step count) keeps evolving on the
raw gradients exactly as the textbook rules prescribe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericsError
from .topk_mlp import ModelParams

OPTIMIZER_KINDS = ("sgd", "sgd_momentum", "adam", "adamw", "rmsprop", "adagrad")
SCHEDULE_KINDS = ("constant", "cosine")


@dataclass(frozen=True)
class OptimizerConfig:
    kind: str = "sgd"
    lr: float = 0.01
    momentum: float = 0.9
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.01
    rmsprop_alpha: float = 0.99

    def __post_init__(self):
        if self.kind not in OPTIMIZER_KINDS:
            raise InputError(f"unknown optimizer kind {self.kind!r}")
        if self.lr <= 0.0:
            raise InputError(f"lr must be positive, got {self.lr}")
        if not 0.0 <= self.momentum < 1.0:
            raise InputError(f"momentum must lie in [0, 1), got {self.momentum}")
        for name in ("beta1", "beta2", "rmsprop_alpha"):
            val = getattr(self, name)
            if not 0.0 <= val < 1.0:
                raise InputError(f"{name} must lie in [0, 1), got {val}")
        if self.eps <= 0.0:
            raise InputError(f"eps must be positive, got {self.eps}")
        if self.weight_decay < 0.0:
            raise InputError(f"weight_decay must be >= 0, got {self.weight_decay}")


@dataclass
class OptimizerState:
    """Per-tensor buffers in ModelParams.tensors() order, plus a step count."""

    m: list[np.ndarray] = field(default_factory=list)
    v: list[np.ndarray] = field(default_factory=list)
    t: int = 0


def init_state(params: ModelParams) -> OptimizerState:
    tensors = params.tensors()
    return OptimizerState(
        m=[np.zeros_like(x) for x in tensors],
        v=[np.zeros_like(x) for x in tensors],
        t=0,
    )


def propose_delta(
    state: OptimizerState,
    config: OptimizerConfig,
    grads: ModelParams,
    params: ModelParams,
    lr: float | None = None,
) -> ModelParams:
    """Advance the optimizer state on the raw gradients and return the delta.

    The returned bundle holds, per tensor, the step delta = O(theta, g) - theta
    that the plain optimizer would have taken. The caller applies it (possibly
    rescaled per expert); state never sees the rescaling. lr, when given,
    overrides config.lr for this step only (how schedules feed in; 0 allowed,
    the moments still advance).
    """
    grad_tensors = grads.tensors()
    param_tensors = params.tensors()
    if len(state.m) != len(grad_tensors):
        raise InputError(
            f"state holds {len(state.m)} buffers, gradients have {len(grad_tensors)}"
        )
    for g in grad_tensors:
        if not np.all(np.isfinite(g)):
            raise NumericsError("non-finite gradient")

    state.t += 1
    deltas: list[np.ndarray] = []
    kind = config.kind
    if lr is None:
        lr = config.lr
    elif lr < 0.0:
        raise InputError(f"lr override must be >= 0, got {lr}")
    for i, (g, theta) in enumerate(zip(grad_tensors, param_tensors)):
        if kind == "sgd":
            delta = -lr * g
        elif kind == "sgd_momentum":
            state.m[i] = config.momentum * state.m[i] + g
            delta = -lr * state.m[i]
        elif kind in ("adam", "adamw"):
            state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g
            state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g
            m_hat = state.m[i] / (1.0 - config.beta1 ** state.t)
            v_hat = state.v[i] / (1.0 - config.beta2 ** state.t)
            delta = -lr * m_hat / (np.sqrt(v_hat) + config.eps)
            if kind == "adamw":
                # decoupled decay: part of the delta, invisible to the moments
                delta = delta - lr * config.weight_decay * theta
        elif kind == "rmsprop":
            alpha = config.rmsprop_alpha
            state.v[i] = alpha * state.v[i] + (1.0 - alpha) * g * g
            delta = -lr * g / (np.sqrt(state.v[i]) + config.eps)
        elif kind == "adagrad":
            state.v[i] = state.v[i] + g * g
            delta = -lr * g / (np.sqrt(state.v[i]) + config.eps)
        else:  # pragma: no cover - rejected by OptimizerConfig
            raise InputError(f"unknown optimizer kind {kind!r}")
        deltas.append(delta)
    return ModelParams.from_tensors(deltas, grads)


def apply_delta(params: ModelParams, delta: ModelParams) -> ModelParams:
    """Plain update: theta + delta, a fresh bundle."""
    return ModelParams.from_tensors(
        [theta + d for theta, d in zip(params.tensors(), delta.tensors())], params
    )


@dataclass(frozen=True)
class ScheduleConfig:
    kind: str = "constant"
    base_lr: float = 0.01
    total_steps: int = 1

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise InputError(f"unknown schedule kind {self.kind!r}")
        if self.base_lr <= 0.0:
            raise InputError(f"base_lr must be positive, got {self.base_lr}")
        if self.total_steps < 1:
            raise InputError(f"total_steps must be >= 1, got {self.total_steps}")


def lr_at(schedule: ScheduleConfig, step: int) -> float:
    """Learning rate at a given optimization step; steps past the end clamp."""
    if step < 0:
        raise InputError(f"step must be >= 0, got {step}")
    if schedule.kind == "constant":
        return schedule.base_lr
    t = min(step, schedule.total_steps)
    return schedule.base_lr * 0.5 * (1.0 + math.cos(math.pi * t / schedule.total_steps))
