"""Sparse MLP where each hidden neuron is treated as an expert.

Per hidden layer and per sample, only the K largest pre-activations are kept
and the rest are zeroed before the nonlinearity is applied. The kept set is
the sample's routing decision and is recorded independently of the ReLU sign:
a neuron selected with a negative pre-activation contributes zero forward but
still counts as active for utilization purposes.

Expert k of a hidden layer owns that layer's incoming weight column k and
bias entry k. The output layer belongs to no expert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, ShapeError
from .linalg import Matrix, matmul


@dataclass(frozen=True)
class ModelConfig:
    """Architecture of the network; immutable once built."""

    input_dim: int
    width: int
    depth: int
    classes: int
    sparsity: float = 0.9
    use_residual: bool = False

    def __post_init__(self):
        if self.input_dim < 1 or self.width < 1 or self.classes < 2:
            raise InputError(
                f"dimensions out of range: input_dim={self.input_dim} "
                f"width={self.width} classes={self.classes}"
            )
        if self.depth < 1:
            raise InputError(f"depth must be >= 1, got {self.depth}")
        if not 0.0 <= self.sparsity < 1.0:
            raise InputError(f"sparsity must lie in [0, 1), got {self.sparsity}")

    @property
    def top_k(self) -> int:
        """Active neurons per layer per sample: K = max(1, round(W*(1-s)))."""
        return max(1, round(self.width * (1.0 - self.sparsity)))


@dataclass
class LayerParams:
    weight: Matrix  # (fan_in, fan_out)
    bias: np.ndarray  # (fan_out,)


@dataclass
class ModelParams:
    """Parameter bundle; also the container for gradients and update deltas."""

    hidden: list[LayerParams]
    out: LayerParams

    def tensors(self) -> list[np.ndarray]:
        """Flat view in a fixed order: (W, b) per hidden layer, then output."""
        flat: list[np.ndarray] = []
        for layer in self.hidden:
            flat.append(layer.weight)
            flat.append(layer.bias)
        flat.append(self.out.weight)
        flat.append(self.out.bias)
        return flat

    @classmethod
    def from_tensors(cls, tensors: list[np.ndarray], template: "ModelParams") -> "ModelParams":
        """Rebuild the bundle structure from a flat list in tensors() order."""
        expected = 2 * len(template.hidden) + 2
        if len(tensors) != expected:
            raise ShapeError(f"expected {expected} tensors, got {len(tensors)}")
        hidden = [
            LayerParams(weight=tensors[2 * i], bias=tensors[2 * i + 1])
            for i in range(len(template.hidden))
        ]
        return cls(hidden=hidden, out=LayerParams(weight=tensors[-2], bias=tensors[-1]))

    def copy(self) -> "ModelParams":
        return ModelParams.from_tensors([t.copy() for t in self.tensors()], self)

    def zeros_like(self) -> "ModelParams":
        return ModelParams.from_tensors([np.zeros_like(t) for t in self.tensors()], self)


@dataclass(frozen=True)
class ExpertSlice:
    """One expert's parameter slice: column `expert` of layer `layer`."""

    layer: int
    expert: int


def expert_partition(config: ModelConfig) -> list[list[ExpertSlice]]:
    """All experts grouped by hidden layer.

    The slices are pairwise disjoint and jointly cover every hidden-layer
    parameter (each weight column and bias entry appears in exactly one
    slice); output-layer parameters are deliberately uncovered.
    """
    return [
        [ExpertSlice(layer=l, expert=k) for k in range(config.width)]
        for l in range(config.depth)
    ]


@dataclass
class ActivationRecord:
    """Routing decisions of one forward pass.

    masks[l] is a bool (batch, width) array marking the Top-K selection on
    the raw pre-activations; pre_activations[l] holds those raw values.
    """

    masks: list[np.ndarray]
    pre_activations: list[Matrix]


@dataclass
class ForwardOutput:
    logits: Matrix
    activation: ActivationRecord
    # kept so backward() can rebuild the layer inputs without a second pass
    inputs: Matrix = field(repr=False, default=None)


def init_params(config: ModelConfig, seed: int) -> ModelParams:
    """Glorot-uniform weights, zero biases, from a fresh seeded generator.

    The draw order is fixed (hidden layers first, then output), so the same
    (config, seed) pair always yields bitwise-identical parameters.
    """
    rng = np.random.default_rng(seed)

    def glorot(fan_in: int, fan_out: int) -> Matrix:
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-limit, limit, size=(fan_in, fan_out))

    hidden: list[LayerParams] = []
    fan_in = config.input_dim
    for _ in range(config.depth):
        hidden.append(
            LayerParams(weight=glorot(fan_in, config.width), bias=np.zeros(config.width))
        )
        fan_in = config.width
    out = LayerParams(weight=glorot(fan_in, config.classes), bias=np.zeros(config.classes))
    return ModelParams(hidden=hidden, out=out)


def top_k_mask(pre_activations: Matrix, k: int) -> np.ndarray:
    """Bool mask of the k largest entries per row; ties keep the lowest index.

    A stable descending argsort gives exactly that tie-break: equal values
    stay in index order, so the earliest column wins the last slot.
    """
    width = pre_activations.shape[1]
    if not 1 <= k <= width:
        raise InputError(f"k={k} out of range for width {width}")
    order = np.argsort(-pre_activations, axis=1, kind="stable")[:, :k]
    mask = np.zeros(pre_activations.shape, dtype=bool)
    np.put_along_axis(mask, order, True, axis=1)
    return mask


def forward(params: ModelParams, x: Matrix, config: ModelConfig) -> ForwardOutput:
    """Run the network, recording per-layer masks and pre-activations."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != config.input_dim:
        raise ShapeError(
            f"input shape {x.shape} does not match input_dim={config.input_dim}"
        )
    if len(params.hidden) != config.depth:
        raise ShapeError(
            f"params have {len(params.hidden)} hidden layers, config says {config.depth}"
        )
    k = config.top_k
    masks: list[np.ndarray] = []
    pres: list[Matrix] = []
    h = x
    for layer in params.hidden:
        z = matmul(h, layer.weight) + layer.bias
        mask = top_k_mask(z, k)
        a = np.where(mask, np.maximum(z, 0.0), 0.0)
        if config.use_residual and a.shape == h.shape:
            a = a + h
        masks.append(mask)
        pres.append(z)
        h = a
    logits = matmul(h, params.out.weight) + params.out.bias
    return ForwardOutput(logits=logits, activation=ActivationRecord(masks, pres), inputs=x)


def _hidden_outputs(params: ModelParams, config: ModelConfig, out: ForwardOutput) -> list[Matrix]:
    """Rebuild each hidden layer's output from the recorded pre-activations."""
    outputs: list[Matrix] = []
    h = out.inputs
    for l in range(config.depth):
        z = out.activation.pre_activations[l]
        mask = out.activation.masks[l]
        a = np.where(mask, np.maximum(z, 0.0), 0.0)
        if config.use_residual and a.shape == h.shape:
            a = a + h
        outputs.append(a)
        h = a
    return outputs


def backward(
    params: ModelParams,
    config: ModelConfig,
    out: ForwardOutput,
    grad_logits: Matrix,
) -> ModelParams:
    """Exact gradients for every parameter via reverse accumulation.

    The Top-K mask is treated as constant (straight-through zero outside the
    selected set), matching the forward zeroing. Must be called with the
    ForwardOutput of the same params/inputs, otherwise the rebuilt layer
    outputs are meaningless.
    """
    grad_logits = np.asarray(grad_logits, dtype=np.float64)
    if grad_logits.shape != out.logits.shape:
        raise ShapeError(
            f"grad_logits shape {grad_logits.shape} != logits shape {out.logits.shape}"
        )
    hidden_out = _hidden_outputs(params, config, out)
    grads = params.zeros_like()

    last = hidden_out[-1] if config.depth > 0 else out.inputs
    grads.out.weight[...] = matmul(last.T, grad_logits)
    grads.out.bias[...] = grad_logits.sum(axis=0)
    d_h = matmul(grad_logits, params.out.weight.T)

    for l in range(config.depth - 1, -1, -1):
        z = out.activation.pre_activations[l]
        mask = out.activation.masks[l]
        # gradient flows only through selected, positive pre-activations
        dz = d_h * mask * (z > 0.0)
        below = hidden_out[l - 1] if l > 0 else out.inputs
        grads.hidden[l].weight[...] = matmul(below.T, dz)
        grads.hidden[l].bias[...] = dz.sum(axis=0)
        d_prev = matmul(dz, params.hidden[l].weight.T)
        if config.use_residual and d_h.shape == d_prev.shape:
            d_prev = d_prev + d_h
        d_h = d_prev
    return grads
