"""Activation-aware optimizer update modulation for sparse Top-K MLPs.

The package trains small MLPs whose hidden neurons act as experts: per
sample, only the K largest pre-activations survive. Expert utilization
measured on each batch drives a per-expert multiplier that rescales the
optimizer's proposed update before it is applied, for any of six base
optimizers. `TopKMLPClassifier` is the scikit-learn-style entry point; the
`excitation.harness` subpackage runs reproducible experiments from JSON
configs via the `excitation` CLI.
"""

from .data import BatchPlan, Dataset, batches, load_cifar10, synth_clusters
from .errors import (
    ExcitationError,
    FormatError,
    InputError,
    NumericsError,
    ShapeError,
)
from .estimator import TopKMLPClassifier
from .metrics import (
    SpecializationAccumulator,
    accuracy,
    mean_routing_entropy,
    routing_distribution,
    specialization_score,
)
from .modulation import (
    EXCITATION_VARIANTS,
    ExcitationConfig,
    coefficients,
    compute_utilization,
    excite_step,
    phi_expdiff,
    phi_global_exp,
    phi_inverted,
    phi_positivesum,
    phi_random_boost,
    phi_zerosum,
)
from .optimizers import (
    OPTIMIZER_KINDS,
    OptimizerConfig,
    OptimizerState,
    ScheduleConfig,
    apply_delta,
    init_state,
    lr_at,
    propose_delta,
)
from .topk_mlp import (
    ActivationRecord,
    ExpertSlice,
    ForwardOutput,
    LayerParams,
    ModelConfig,
    ModelParams,
    backward,
    expert_partition,
    forward,
    init_params,
    top_k_mask,
)
from .training import EvalMetrics, EvalPoint, TrainResult, evaluate, train_loop

__version__ = "0.1.0"

__all__ = [
    "ActivationRecord",
    "BatchPlan",
    "Dataset",
    "EXCITATION_VARIANTS",
    "EvalMetrics",
    "EvalPoint",
    "ExcitationConfig",
    "ExcitationError",
    "ExpertSlice",
    "FormatError",
    "ForwardOutput",
    "InputError",
    "LayerParams",
    "ModelConfig",
    "ModelParams",
    "NumericsError",
    "OPTIMIZER_KINDS",
    "OptimizerConfig",
    "OptimizerState",
    "ScheduleConfig",
    "ShapeError",
    "SpecializationAccumulator",
    "TopKMLPClassifier",
    "TrainResult",
    "accuracy",
    "apply_delta",
    "backward",
    "batches",
    "coefficients",
    "compute_utilization",
    "evaluate",
    "excite_step",
    "expert_partition",
    "forward",
    "init_params",
    "init_state",
    "load_cifar10",
    "lr_at",
    "mean_routing_entropy",
    "phi_expdiff",
    "phi_global_exp",
    "phi_inverted",
    "phi_positivesum",
    "phi_random_boost",
    "phi_zerosum",
    "propose_delta",
    "routing_distribution",
    "specialization_score",
    "synth_clusters",
    "top_k_mask",
    "train_loop",
]
