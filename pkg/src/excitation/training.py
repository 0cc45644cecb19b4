"""The training loop shared by the estimator and the experiment harness.

One step is: forward with routing recorded, loss, backward, optimizer delta
proposal on the raw gradients, then either a plain apply or an excited apply
with per-expert multipliers computed from this batch's utilization. All
randomness (init, batch order, random_boost permutations) descends from the
run seed, so a rerun reproduces the trajectory bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import modulation
from .data import BatchPlan, Dataset, batches
from .errors import InputError, NumericsError
from .linalg import softmax_cross_entropy
from .metrics import (
    SpecializationAccumulator,
    accuracy,
    mean_routing_entropy,
    routing_distribution,
    specialization_score,
)
from .modulation import ExcitationConfig, coefficients, compute_utilization, excite_step
from .optimizers import (
    OptimizerConfig,
    ScheduleConfig,
    apply_delta,
    init_state,
    lr_at,
    propose_delta,
)
from .topk_mlp import ModelConfig, ModelParams, backward, forward, init_params


@dataclass
class EvalMetrics:
    loss: float
    accuracy: float
    entropy: list[float]  # per hidden layer, nats
    specialization: list[float | None]  # per hidden layer; None if no expert fired


@dataclass
class EvalPoint:
    """One evaluation event: training-stream stats plus an optional dev pass."""

    epoch: int  # 0-based epoch of the step that triggered the eval
    step: int  # 1-based global optimization step count
    lr: float  # learning rate used at that step
    train_loss: float
    train_accuracy: float
    phi_min: list[float]  # per layer, from the most recent training batch
    phi_mean: list[float]
    phi_max: list[float]
    dev: EvalMetrics | None


@dataclass
class TrainResult:
    params: ModelParams
    steps: int
    diverged: bool = False
    divergence_step: int | None = None
    eval_points: list[EvalPoint] = field(default_factory=list)
    degenerate_events: int = 0


def evaluate(
    params: ModelParams,
    config: ModelConfig,
    dataset: Dataset,
    chunk: int = 2048,
) -> EvalMetrics:
    """Full pass over a dataset: loss, accuracy, and per-layer routing stats.

    Runs in chunks to bound memory; losses and entropies are weighted by
    chunk size so the result matches a single-pass computation.
    """
    n = len(dataset)
    if n == 0:
        raise InputError("cannot evaluate on an empty dataset")
    loss_sum = 0.0
    correct_sum = 0.0
    entropy_sums = np.zeros(config.depth)
    spec = SpecializationAccumulator(config.depth, config.width, dataset.classes)
    for start in range(0, n, chunk):
        x = dataset.features[start : start + chunk]
        y = dataset.labels[start : start + chunk]
        out = forward(params, x, config)
        loss_out = softmax_cross_entropy(out.logits, y)
        loss_sum += loss_out.loss * x.shape[0]
        correct_sum += accuracy(out.logits, y) * x.shape[0]
        for l in range(config.depth):
            probs = routing_distribution(out.activation.pre_activations[l])
            entropy_sums[l] += mean_routing_entropy(probs) * x.shape[0]
        spec.update(out.activation, y)
    return EvalMetrics(
        loss=loss_sum / n,
        accuracy=correct_sum / n,
        entropy=[float(s / n) for s in entropy_sums],
        specialization=[specialization_score(c) for c in spec.layer_counts],
    )


def train_loop(
    model_config: ModelConfig,
    optimizer_config: OptimizerConfig,
    excitation_config: ExcitationConfig | None,
    train_set: Dataset,
    *,
    epochs: int,
    batch_size: int,
    seed: int,
    schedule: str = "constant",
    eval_set: Dataset | None = None,
    eval_every: int = 0,
    on_eval: Callable[[EvalPoint], None] | None = None,
) -> TrainResult:
    """Train for a fixed number of epochs and collect evaluation points.

    excitation_config=None disables the modulation machinery entirely: the
    optimizer delta is applied directly. variant="none" goes through the
    excited path with all coefficients exactly 1; both routes must produce
    bitwise-identical parameters.

    eval_every=0 evaluates at the end of every epoch; a positive value
    evaluates every that-many steps and once more at the end. A non-finite
    loss or gradient stops the run and marks it diverged instead of raising.
    """
    if epochs < 1:
        raise InputError(f"epochs must be >= 1, got {epochs}")
    if eval_every < 0:
        raise InputError(f"eval_every must be >= 0, got {eval_every}")
    if train_set.classes != model_config.classes:
        raise InputError(
            f"dataset has {train_set.classes} classes, model expects "
            f"{model_config.classes}"
        )

    params = init_params(model_config, seed)
    state = init_state(params)
    plan = BatchPlan(seed=seed, batch_size=batch_size)
    steps_per_epoch = len(batches(plan, train_set, 0))
    schedule_config = ScheduleConfig(
        kind=schedule, base_lr=optimizer_config.lr, total_steps=epochs * steps_per_epoch
    )
    # separate stream so control variants never perturb init or batch order
    modulation_rng = np.random.default_rng([seed, 1])
    degenerate_before = modulation.degenerate_event_count()

    result = TrainResult(params=params, steps=0)
    stream_loss = 0.0
    stream_correct = 0.0
    stream_count = 0
    last_phi: list[np.ndarray] | None = None
    last_lr = optimizer_config.lr
    step = 0

    def emit_eval(epoch: int) -> None:
        nonlocal stream_loss, stream_correct, stream_count
        if stream_count == 0:
            return
        ones = [1.0] * model_config.depth
        phi = last_phi if last_phi is not None else None
        point = EvalPoint(
            epoch=epoch,
            step=step,
            lr=last_lr,
            train_loss=stream_loss / stream_count,
            train_accuracy=stream_correct / stream_count,
            phi_min=[float(p.min()) for p in phi] if phi else ones,
            phi_mean=[float(p.mean()) for p in phi] if phi else ones,
            phi_max=[float(p.max()) for p in phi] if phi else ones,
            dev=evaluate(result.params, model_config, eval_set) if eval_set else None,
        )
        result.eval_points.append(point)
        if on_eval is not None:
            on_eval(point)
        stream_loss = 0.0
        stream_correct = 0.0
        stream_count = 0

    for epoch in range(epochs):
        for idx in batches(plan, train_set, epoch):
            x = train_set.features[idx]
            y = train_set.labels[idx]
            lr = lr_at(schedule_config, step)
            out = forward(result.params, x, model_config)
            loss_out = softmax_cross_entropy(out.logits, y)
            if not np.isfinite(loss_out.loss):
                result.diverged = True
                result.divergence_step = step + 1
                break
            grads = backward(result.params, model_config, out, loss_out.grad_logits)
            try:
                delta = propose_delta(state, optimizer_config, grads, result.params, lr=lr)
                if excitation_config is None:
                    result.params = apply_delta(result.params, delta)
                    last_phi = None
                else:
                    utilization = compute_utilization(out.activation)
                    phi = [
                        coefficients(u, excitation_config, modulation_rng)
                        for u in utilization
                    ]
                    result.params = excite_step(result.params, delta, phi)
                    last_phi = phi
            except NumericsError:
                result.diverged = True
                result.divergence_step = step + 1
                break
            step += 1
            result.steps = step
            last_lr = lr
            stream_loss += loss_out.loss * x.shape[0]
            stream_correct += accuracy(out.logits, y) * x.shape[0]
            stream_count += x.shape[0]
            if eval_every > 0 and step % eval_every == 0:
                emit_eval(epoch)
        if result.diverged:
            break
        if eval_every == 0:
            emit_eval(epoch)
    if not result.diverged and eval_every > 0:
        emit_eval(epochs - 1)
    result.degenerate_events = modulation.degenerate_event_count() - degenerate_before
    return result
