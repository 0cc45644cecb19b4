"""Two-parameter demo: watch the multipliers bend a quadratic descent.

The loss is an axis-aligned bowl with one steep and one shallow coordinate.
Utilization is pinned to (0.75, 0.25), so at gamma=1 the zerosum multipliers
are exactly (1.5, 0.5): the steep coordinate gets amplified steps and the
shallow one dampened steps. Excited descent therefore crosses the loss
threshold in fewer steps than plain descent along the same gradient field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InputError
from ..modulation import ExcitationConfig, coefficients

CURVATURE = (1.0, 0.05)
START = (-1.0, -0.1)
UTILIZATION = (0.75, 0.25)
LOSS_THRESHOLD = 1e-3


@dataclass
class Trajectory:
    name: str
    points: list[tuple[int, float, float, float]]  # (step, w0, w1, loss)
    steps_to_threshold: int | None


def _loss(w: np.ndarray) -> float:
    return float(np.sum(np.asarray(CURVATURE) * w * w))


def _grad(w: np.ndarray) -> np.ndarray:
    return 2.0 * np.asarray(CURVATURE) * w


def _descend(name: str, steps: int, lr: float, phi: np.ndarray, momentum: float) -> Trajectory:
    w = np.asarray(START, dtype=np.float64)
    m = np.zeros_like(w)
    points = [(0, float(w[0]), float(w[1]), _loss(w))]
    hit: int | None = 0 if _loss(w) < LOSS_THRESHOLD else None
    for step in range(1, steps + 1):
        g = _grad(w)
        if momentum > 0.0:
            m = momentum * m + g
            delta = -lr * m
        else:
            delta = -lr * g
        w = w + phi * delta
        loss = _loss(w)
        points.append((step, float(w[0]), float(w[1]), loss))
        if hit is None and loss < LOSS_THRESHOLD:
            hit = step
    return Trajectory(name=name, points=points, steps_to_threshold=hit)


def toy2d_demo(
    variant: str = "zerosum",
    gamma: float = 1.0,
    steps: int = 60,
    lr: float = 0.1,
    momentum: float = 0.9,
    out_dir: str | Path | None = None,
) -> dict:
    """Run the three trajectories; optionally write their CSVs and metadata."""
    if steps < 1:
        raise InputError(f"steps must be >= 1, got {steps}")
    if lr <= 0.0:
        raise InputError(f"lr must be positive, got {lr}")
    config = ExcitationConfig(variant=variant, gamma=gamma)
    u = np.asarray(UTILIZATION)
    phi = coefficients(u, config, np.random.default_rng(0))
    ones = np.ones(2)

    trajectories = [
        _descend("sgd", steps, lr, ones, momentum=0.0),
        _descend("sgd_momentum", steps, lr, ones, momentum=momentum),
        _descend(f"excited_{variant}", steps, lr, phi, momentum=0.0),
    ]
    meta = {
        "curvature": list(CURVATURE),
        "start": list(START),
        "utilization": list(UTILIZATION),
        "variant": variant,
        "gamma": gamma,
        "lr": lr,
        "momentum": momentum,
        "loss_threshold": LOSS_THRESHOLD,
        "multipliers": [float(p) for p in phi],
        "steps_to_threshold": {t.name: t.steps_to_threshold for t in trajectories},
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for t in trajectories:
            with open(out / f"toy2d_{t.name}.csv", "w") as sink:
                sink.write("step,w0,w1,loss\n")
                for step, w0, w1, loss in t.points:
                    sink.write(f"{step},{w0!r},{w1!r},{loss!r}\n")
        with open(out / "toy2d_meta.json", "w") as sink:
            json.dump(meta, sink, indent=2)
            sink.write("\n")
    return {"trajectories": trajectories, "meta": meta}
