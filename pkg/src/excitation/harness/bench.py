"""Wall-clock overhead of the excited step relative to the plain step.

chi = (median excited step time - median plain step time) / plain, measured
per session on the same process with fresh params, then averaged across
sessions. The expert count N_e = depth * width grows along the size ladder
while the matmul work grows quadratically in width, so the relative cost of
modulation falls even as its absolute cost rises.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..errors import InputError
from ..linalg import softmax_cross_entropy
from ..modulation import ExcitationConfig, coefficients, compute_utilization, excite_step
from ..optimizers import OptimizerConfig, apply_delta, init_state, propose_delta
from ..topk_mlp import ModelConfig, backward, forward, init_params

DEFAULT_SIZES = ((32, 2), (64, 2), (128, 2), (256, 2), (512, 2))


@dataclass
class BenchReport:
    width: int
    depth: int
    n_experts: int
    baseline_ms: float  # median plain step, last session
    treatment_ms: float  # median excited step, last session
    chi: float  # mean over sessions of (treatment - baseline) / baseline
    chi_sessions: list[float]
    trials: int
    burn_in: int


class _StepContext:
    """Independent training state for one timed arm."""

    def __init__(self, model_config, optimizer_config, excitation_config, seed):
        self.model_config = model_config
        self.optimizer_config = optimizer_config
        self.excitation_config = excitation_config
        self.params = init_params(model_config, seed)
        self.state = init_state(self.params)
        self.rng = np.random.default_rng(seed)

    def step_seconds(self, x: np.ndarray, y: np.ndarray) -> float:
        begin = time.perf_counter()
        out = forward(self.params, x, self.model_config)
        loss_out = softmax_cross_entropy(out.logits, y)
        grads = backward(self.params, self.model_config, out, loss_out.grad_logits)
        delta = propose_delta(self.state, self.optimizer_config, grads, self.params)
        if self.excitation_config is None:
            self.params = apply_delta(self.params, delta)
        else:
            utilization = compute_utilization(out.activation)
            phi = [coefficients(u, self.excitation_config, self.rng) for u in utilization]
            self.params = excite_step(self.params, delta, phi)
        return time.perf_counter() - begin


def _paired_medians(
    model_config: ModelConfig,
    optimizer_config: OptimizerConfig,
    baseline_exc: ExcitationConfig | None,
    treatment_exc: ExcitationConfig | None,
    x: np.ndarray,
    y: np.ndarray,
    trials: int,
    burn_in: int,
    seed: int,
) -> tuple[float, float]:
    """Median step seconds for both arms, trials interleaved.

    The arms alternate within every trial pair and swap who goes first each
    trial, so allocator warmth and clock drift land on both sides equally
    instead of biasing whichever arm runs second.
    """
    base = _StepContext(model_config, optimizer_config, baseline_exc, seed)
    treat = _StepContext(model_config, optimizer_config, treatment_exc, seed)
    base_times: list[float] = []
    treat_times: list[float] = []
    for trial in range(burn_in + trials):
        first, second = (base, treat) if trial % 2 == 0 else (treat, base)
        d_first = first.step_seconds(x, y)
        d_second = second.step_seconds(x, y)
        if trial >= burn_in:
            if first is base:
                base_times.append(d_first)
                treat_times.append(d_second)
            else:
                treat_times.append(d_first)
                base_times.append(d_second)
    return statistics.median(base_times), statistics.median(treat_times)


def overhead_bench(
    sizes=DEFAULT_SIZES,
    *,
    batch: int = 128,
    input_dim: int = 64,
    classes: int = 10,
    sparsity: float = 0.9,
    optimizer: str = "sgd",
    lr: float = 1e-3,
    baseline_variant: str | None = None,
    treatment_variant: str | None = "zerosum",
    gamma: float = 1.0,
    trials: int = 100,
    burn_in: int = 20,
    sessions: int = 3,
    seed: int = 0,
) -> list[BenchReport]:
    """Measure chi over a ladder of model sizes.

    A variant of None times the loop with modulation disabled entirely.
    Passing the same variant for baseline and treatment is the self-check:
    chi must then sit at zero up to timer noise.
    """
    if trials < 100:
        raise InputError(f"need at least 100 timed trials per session, got {trials}")
    if burn_in < 0 or sessions < 1:
        raise InputError(f"bad bench plan: burn_in={burn_in} sessions={sessions}")
    data_rng = np.random.default_rng(seed)
    x = data_rng.standard_normal((batch, input_dim))
    y = data_rng.integers(0, classes, size=batch)
    optimizer_config = OptimizerConfig(kind=optimizer, lr=lr)

    def exc(variant: str | None) -> ExcitationConfig | None:
        return None if variant is None else ExcitationConfig(variant=variant, gamma=gamma)

    reports: list[BenchReport] = []
    for width, depth in sizes:
        model_config = ModelConfig(
            input_dim=input_dim,
            width=width,
            depth=depth,
            classes=classes,
            sparsity=sparsity,
        )
        chis: list[float] = []
        base_med = treat_med = 0.0
        for session in range(sessions):
            base_med, treat_med = _paired_medians(
                model_config, optimizer_config,
                exc(baseline_variant), exc(treatment_variant),
                x, y, trials, burn_in, seed + session,
            )
            chis.append((treat_med - base_med) / base_med)
        reports.append(
            BenchReport(
                width=width,
                depth=depth,
                n_experts=width * depth,
                baseline_ms=base_med * 1e3,
                treatment_ms=treat_med * 1e3,
                chi=sum(chis) / len(chis),
                chi_sessions=chis,
                trials=trials,
                burn_in=burn_in,
            )
        )
    return reports


def format_bench_table(reports: list[BenchReport]) -> str:
    lines = [f"{'width':>6} {'depth':>6} {'N_e':>6} {'plain ms':>10} {'excited ms':>11} {'chi':>8}"]
    for r in reports:
        lines.append(
            f"{r.width:>6} {r.depth:>6} {r.n_experts:>6} "
            f"{r.baseline_ms:>10.3f} {r.treatment_ms:>11.3f} {r.chi:>8.2%}"
        )
    return "\n".join(lines)


def write_bench_json(reports: list[BenchReport], path: str | Path) -> None:
    payload = {"reports": [asdict(r) for r in reports]}
    with open(path, "w") as sink:
        json.dump(payload, sink, indent=2)
        sink.write("\n")
