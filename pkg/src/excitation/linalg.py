"""Dense float64 primitives underneath the network engine.

Everything here operates on 2-D numpy arrays in row-major order and is pure:
no function mutates its inputs. Shape agreement is checked at this level so
the layers above can assume consistent operands.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ShapeError

# A Matrix is a 2-D float64 ndarray. The alias marks intent in signatures.
Matrix = np.ndarray


def as_matrix(values, rows: int | None = None, cols: int | None = None) -> Matrix:
    """Coerce nested sequences or an array to a validated 2-D float64 matrix."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if rows is not None and arr.shape[0] != rows:
        raise ShapeError(f"expected {rows} rows, got {arr.shape[0]}")
    if cols is not None and arr.shape[1] != cols:
        raise ShapeError(f"expected {cols} cols, got {arr.shape[1]}")
    return arr


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product a @ b with explicit inner-dimension checking."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError(f"matmul needs 2-D operands, got {a.ndim}-D and {b.ndim}-D")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"inner dimensions disagree: {a.shape} @ {b.shape}")
    return a @ b


def relu(x: Matrix) -> Matrix:
    return np.maximum(x, 0.0)


def relu_grad(x: Matrix) -> Matrix:
    """Elementwise derivative of relu; the subgradient at exactly 0 is 0."""
    return (x > 0.0).astype(np.float64)


@dataclass(frozen=True)
class LossOutput:
    """Mean cross-entropy over the batch and its gradient w.r.t. the logits."""

    loss: float
    grad_logits: Matrix


def softmax_cross_entropy(logits: Matrix, labels: np.ndarray) -> LossOutput:
    """Numerically stable mean softmax cross-entropy.

    The max logit is subtracted per row before exponentiation, so saturated
    logits (|z| ~ 1e4) stay finite. grad_logits is (softmax - onehot) / batch,
    which makes the loss gradient of the *mean* directly usable by callers.
    """
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels)
    if logits.ndim != 2:
        raise ShapeError(f"logits must be 2-D, got ndim={logits.ndim}")
    if labels.ndim != 1 or labels.shape[0] != logits.shape[0]:
        raise ShapeError(
            f"labels shape {labels.shape} does not match batch of {logits.shape[0]}"
        )
    n, classes = logits.shape
    if n == 0:
        raise InputError("empty batch")
    if not np.issubdtype(labels.dtype, np.integer):
        raise InputError(f"labels must be integers, got dtype {labels.dtype}")
    if labels.min() < 0 or labels.max() >= classes:
        raise InputError(
            f"labels must lie in [0, {classes}), got range "
            f"[{labels.min()}, {labels.max()}]"
        )

    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    total = exp.sum(axis=1, keepdims=True)
    log_probs = shifted - np.log(total)
    rows = np.arange(n)
    loss = float(-log_probs[rows, labels].mean())

    grad = exp / total
    grad[rows, labels] -= 1.0
    grad /= n
    return LossOutput(loss, grad)
