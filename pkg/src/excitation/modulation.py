"""Utilization-driven rescaling of optimizer update deltas.

An expert's utilization is the fraction of the batch that routed through it.
A modulation variant maps the utilization vector of a layer to one positive
multiplier per expert; the multiplier rescales that expert's slice of the
proposed update delta before it is applied. Multipliers are recomputed every
step from the current batch only; nothing here carries state across steps.

Normalized variants keep mean(phi) == 1 over the layer, so the average
update magnitude is preserved and only its allocation across experts shifts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericsError, ShapeError
from .topk_mlp import ActivationRecord, ExpertSlice, ModelParams

EXCITATION_VARIANTS = (
    "none",
    "zerosum",
    "positivesum",
    "expdiff",
    "global_exp",
    "random_boost",
    "inverted",
)

# how often a variant hit the all-idle fallback (phi forced to 1)
_degenerate_events = 0


def degenerate_event_count() -> int:
    return _degenerate_events


def reset_degenerate_event_count() -> None:
    global _degenerate_events
    _degenerate_events = 0


def _record_degenerate() -> None:
    global _degenerate_events
    _degenerate_events += 1


@dataclass(frozen=True)
class ExcitationConfig:
    variant: str = "none"
    gamma: float = 1.0
    utilization_floor: float = 1e-6

    def __post_init__(self):
        if self.variant not in EXCITATION_VARIANTS:
            raise InputError(f"unknown excitation variant {self.variant!r}")
        if self.gamma <= 0.0:
            raise InputError(f"gamma must be positive, got {self.gamma}")
        if self.utilization_floor <= 0.0:
            raise InputError(
                f"utilization_floor must be positive, got {self.utilization_floor}"
            )


def compute_utilization(record: ActivationRecord) -> list[np.ndarray]:
    """Per layer, the fraction of the batch that selected each expert."""
    if not record.masks:
        raise InputError("activation record holds no layers")
    out = []
    for mask in record.masks:
        if mask.shape[0] == 0:
            raise InputError("empty batch")
        out.append(mask.mean(axis=0))
    return out


def _validate_u(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or u.size == 0:
        raise InputError(f"utilization must be a nonempty vector, got shape {u.shape}")
    if u.min() < 0.0 or u.max() > 1.0:
        raise InputError(f"utilization out of [0, 1]: min={u.min()} max={u.max()}")
    return u


def phi_zerosum(u: np.ndarray, gamma: float) -> np.ndarray:
    """u^gamma normalized to mean one; boosts busy experts at idle ones' cost."""
    u = _validate_u(u)
    powered = u**gamma
    mean = powered.mean()
    if mean == 0.0:
        _record_degenerate()
        return np.ones_like(u)
    return powered / mean


def phi_positivesum(u: np.ndarray, gamma: float) -> np.ndarray:
    """Like zerosum but floored at 1: boosts only, never dampens."""
    return np.maximum(1.0, phi_zerosum(u, gamma))


def phi_expdiff(u: np.ndarray, gamma: float) -> np.ndarray:
    """exp(gamma*u) normalized to mean one; smooth and never zero."""
    u = _validate_u(u)
    e = np.exp(gamma * u)
    return e / e.mean()


def phi_global_exp(u: np.ndarray, gamma: float) -> float:
    """One shared multiplier >= 1 from the above-average utilization mass."""
    u = _validate_u(u)
    return float(np.exp(gamma * np.maximum(0.0, u - u.mean())).mean())


def phi_random_boost(u: np.ndarray, gamma: float, rng: np.random.Generator) -> np.ndarray:
    """Control arm: the zerosum multipliers dealt to random experts."""
    return rng.permutation(phi_zerosum(u, gamma))


def phi_inverted(u: np.ndarray, gamma: float, utilization_floor: float) -> np.ndarray:
    """Control arm: boosts the idle experts instead (u floored to stay finite)."""
    u = _validate_u(u)
    if utilization_floor <= 0.0:
        raise InputError(f"utilization_floor must be positive, got {utilization_floor}")
    floored = np.maximum(u, utilization_floor)
    w = floored ** (-gamma)
    return w / w.mean()


def coefficients(
    u: np.ndarray,
    config: ExcitationConfig,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Dispatch one layer's utilization to its per-expert multiplier vector."""
    u = _validate_u(u)
    if config.variant == "none":
        return np.ones_like(u)
    if config.variant == "zerosum":
        return phi_zerosum(u, config.gamma)
    if config.variant == "positivesum":
        return phi_positivesum(u, config.gamma)
    if config.variant == "expdiff":
        return phi_expdiff(u, config.gamma)
    if config.variant == "global_exp":
        return np.full_like(u, phi_global_exp(u, config.gamma))
    if config.variant == "random_boost":
        if rng is None:
            raise InputError("random_boost needs a random generator")
        return phi_random_boost(u, config.gamma, rng)
    if config.variant == "inverted":
        return phi_inverted(u, config.gamma, config.utilization_floor)
    raise InputError(f"unknown excitation variant {config.variant!r}")


def excite_step(
    params: ModelParams,
    delta: ModelParams,
    layer_coefficients: list[np.ndarray],
    partition: list[list[ExpertSlice]] | None = None,
) -> ModelParams:
    """Apply the delta with each expert's slice rescaled by its multiplier.

    Expert k of hidden layer l owns weight column k and bias entry k there,
    so the whole layer update is one broadcasted multiply. The output layer
    is applied unmodulated. Inputs are not mutated.
    """
    if len(layer_coefficients) != len(params.hidden):
        raise ShapeError(
            f"{len(layer_coefficients)} coefficient vectors for "
            f"{len(params.hidden)} hidden layers"
        )
    if partition is not None:
        if len(partition) != len(params.hidden):
            raise ShapeError(
                f"partition covers {len(partition)} layers, params have "
                f"{len(params.hidden)}"
            )
        for l, slices in enumerate(partition):
            if len(slices) != params.hidden[l].weight.shape[1]:
                raise ShapeError(
                    f"layer {l}: {len(slices)} expert slices for width "
                    f"{params.hidden[l].weight.shape[1]}"
                )
    new_hidden = []
    for l, layer in enumerate(params.hidden):
        phi = np.asarray(layer_coefficients[l], dtype=np.float64)
        if phi.shape != (layer.weight.shape[1],):
            raise ShapeError(
                f"layer {l}: coefficient shape {phi.shape} does not match "
                f"width {layer.weight.shape[1]}"
            )
        if not np.all(np.isfinite(phi)):
            raise NumericsError(f"non-finite modulation coefficient in layer {l}")
        new_hidden.append(
            type(layer)(
                weight=layer.weight + delta.hidden[l].weight * phi[None, :],
                bias=layer.bias + delta.hidden[l].bias * phi,
            )
        )
    new_out = type(params.out)(
        weight=params.out.weight + delta.out.weight,
        bias=params.out.bias + delta.out.bias,
    )
    return ModelParams(hidden=new_hidden, out=new_out)
