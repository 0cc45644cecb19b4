"""scikit-learn estimator facade over the Top-K MLP training engine."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .data import Dataset
from .errors import InputError
from .modulation import ExcitationConfig
from .optimizers import OptimizerConfig
from .topk_mlp import ModelConfig, forward
from .training import train_loop


class TopKMLPClassifier(ClassifierMixin, BaseEstimator):
    """Sparse MLP classifier with optional excitation-modulated updates.

    Hidden layers keep only the top-K pre-activations per sample (K derived
    from `sparsity`); updates are proposed by the chosen optimizer and, when
    `excitation` is not "none", rescaled per neuron by a utilization-driven
    multiplier before being applied.

    Parameters mirror the training engine; see fit() for the composition.
    Follows scikit-learn conventions: all constructor arguments are stored
    verbatim and validated in fit, so clone() and grid search work.
    """

    def __init__(
        self,
        width: int = 32,
        depth: int = 2,
        sparsity: float = 0.9,
        optimizer: str = "sgd",
        lr: float = 0.01,
        momentum: float = 0.9,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
        weight_decay: float = 0.01,
        schedule: str = "constant",
        epochs: int = 10,
        batch_size: int = 128,
        excitation: str = "none",
        gamma: float = 1.0,
        utilization_floor: float = 1e-6,
        use_residual: bool = False,
        random_state: int = 0,
    ):
        self.width = width
        self.depth = depth
        self.sparsity = sparsity
        self.optimizer = optimizer
        self.lr = lr
        self.momentum = momentum
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.weight_decay = weight_decay
        self.schedule = schedule
        self.epochs = epochs
        self.batch_size = batch_size
        self.excitation = excitation
        self.gamma = gamma
        self.utilization_floor = utilization_floor
        self.use_residual = use_residual
        self.random_state = random_state

    def fit(self, X, y):
        X, y = validate_data(self, X, y, dtype=np.float64)
        self.classes_, encoded = np.unique(y, return_inverse=True)
        if self.classes_.shape[0] < 2:
            raise InputError("need at least 2 classes to fit")

        model_config = ModelConfig(
            input_dim=X.shape[1],
            width=self.width,
            depth=self.depth,
            classes=self.classes_.shape[0],
            sparsity=self.sparsity,
            use_residual=self.use_residual,
        )
        optimizer_config = OptimizerConfig(
            kind=self.optimizer,
            lr=self.lr,
            momentum=self.momentum,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
            weight_decay=self.weight_decay,
        )
        excitation_config = ExcitationConfig(
            variant=self.excitation,
            gamma=self.gamma,
            utilization_floor=self.utilization_floor,
        )
        train_set = Dataset(
            features=X,
            labels=encoded.astype(np.int64),
            classes=self.classes_.shape[0],
            name="fit",
        )
        result = train_loop(
            model_config,
            optimizer_config,
            excitation_config,
            train_set,
            epochs=self.epochs,
            batch_size=min(self.batch_size, X.shape[0]),
            seed=self.random_state,
            schedule=self.schedule,
        )
        self.model_config_ = model_config
        self.params_ = result.params
        self.n_steps_ = result.steps
        self.diverged_ = result.diverged
        self.loss_curve_ = [p.train_loss for p in result.eval_points]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "params_")
        X = validate_data(self, X, reset=False, dtype=np.float64)
        return forward(self.params_, X, self.model_config_).logits

    def predict_proba(self, X):
        logits = self.decision_function(X)
        shifted = logits - logits.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        return e / e.sum(axis=1, keepdims=True)

    def predict(self, X):
        check_is_fitted(self, "params_")
        return self.classes_[self.decision_function(X).argmax(axis=1)]
