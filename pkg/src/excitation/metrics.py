"""Routing diagnostics: entropy, specialization, accuracy.

These read the routing side of the network (pre-activations, masks, labels)
and never touch parameters, so they can run on any recorded forward pass.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError, ShapeError
from .linalg import Matrix
from .topk_mlp import ActivationRecord


def routing_distribution(pre_activations: Matrix, mask: np.ndarray | None = None) -> Matrix:
    """Per-sample softmax over a layer's pre-activations.

    The distribution is taken over all experts of the layer, selected or not;
    the mask parameter is accepted for callers that carry it alongside but
    does not change the computation.
    """
    z = np.asarray(pre_activations, dtype=np.float64)
    if z.ndim == 1:
        z = z[None, :]
    if z.ndim != 2:
        raise ShapeError(f"pre-activations must be 1-D or 2-D, got ndim={z.ndim}")
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def mean_routing_entropy(probs: Matrix) -> float:
    """Mean Shannon entropy (nats) of routing distributions, rows = samples."""
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim == 1:
        p = p[None, :]
    if p.min() < 0.0:
        raise InputError(f"probabilities must be >= 0, got min={p.min()}")
    if not np.allclose(p.sum(axis=1), 1.0, atol=1e-9):
        raise InputError("rows must sum to 1")
    # 0 * log(0) := 0
    terms = np.where(p > 0.0, p * np.log(np.where(p > 0.0, p, 1.0)), 0.0)
    return float(-terms.sum(axis=1).mean())


class SpecializationAccumulator:
    """Per-layer expert-vs-class activation counts, built up batch by batch."""

    def __init__(self, depth: int, width: int, classes: int):
        if depth < 1 or width < 1 or classes < 1:
            raise InputError(
                f"bad accumulator shape: depth={depth} width={width} classes={classes}"
            )
        self.classes = classes
        self.layer_counts = [np.zeros((width, classes), dtype=np.int64) for _ in range(depth)]

    def update(self, record: ActivationRecord, labels: np.ndarray) -> None:
        labels = np.asarray(labels)
        if len(record.masks) != len(self.layer_counts):
            raise ShapeError(
                f"record has {len(record.masks)} layers, accumulator "
                f"{len(self.layer_counts)}"
            )
        if labels.min() < 0 or labels.max() >= self.classes:
            raise InputError(f"labels out of [0, {self.classes})")
        onehot = np.zeros((labels.shape[0], self.classes), dtype=np.int64)
        onehot[np.arange(labels.shape[0]), labels] = 1
        for counts, mask in zip(self.layer_counts, record.masks):
            if mask.shape[0] != labels.shape[0]:
                raise ShapeError("mask batch does not match labels")
            counts += mask.T.astype(np.int64) @ onehot


def specialization_score(counts: np.ndarray) -> float | None:
    """Mean squared-probability mass of the class profile of active experts.

    For each expert with at least one activation, its class profile is the
    normalized count row; the expert's score is sum(p^2), which is 1/classes
    for a uniform profile and 1 for a single-class one. Experts that never
    fired are excluded; if none fired at all there is no data and the result
    is None.
    """
    counts = np.asarray(counts, dtype=np.float64)
    if counts.ndim != 2:
        raise ShapeError(f"counts must be 2-D, got ndim={counts.ndim}")
    if counts.min() < 0:
        raise InputError("counts must be >= 0")
    totals = counts.sum(axis=1)
    active = totals > 0
    if not active.any():
        return None
    p = counts[active] / totals[active, None]
    return float((p**2).sum(axis=1).mean())


def accuracy(logits: Matrix, labels: np.ndarray) -> float:
    """Fraction of rows whose argmax (first maximum on ties) hits the label."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels)
    if logits.ndim != 2 or labels.ndim != 1 or logits.shape[0] != labels.shape[0]:
        raise ShapeError(
            f"logits {logits.shape} and labels {labels.shape} do not align"
        )
    if logits.shape[0] == 0:
        raise InputError("empty batch")
    return float((logits.argmax(axis=1) == labels).mean())
