"""Datasets and deterministic batching.

Two sources: the CIFAR-10 binary files (user-supplied on disk, never
downloaded here) and a seeded synthetic Gaussian-cluster generator used for
fast end-to-end runs. Batch order is a pure function of (seed, epoch), so a
rerun with the same plan visits identical batches.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, InputError
from .linalg import Matrix

CIFAR10_TRAIN_FILES = tuple(f"data_batch_{i}.bin" for i in range(1, 6))
CIFAR10_TEST_FILE = "test_batch.bin"
_CIFAR_RECORD = 3073  # 1 label byte + 32*32*3 pixel bytes, channel-planar
_CIFAR_RECORDS_PER_FILE = 10000
_CIFAR_FILE_BYTES = _CIFAR_RECORD * _CIFAR_RECORDS_PER_FILE


@dataclass
class Dataset:
    features: Matrix  # (n, d) float64
    labels: np.ndarray  # (n,) int64
    classes: int
    name: str

    def __post_init__(self):
        if self.features.ndim != 2 or self.labels.ndim != 1:
            raise InputError("features must be (n, d), labels (n,)")
        if self.features.shape[0] != self.labels.shape[0]:
            raise InputError(
                f"{self.features.shape[0]} feature rows vs "
                f"{self.labels.shape[0]} labels"
            )

    def __len__(self) -> int:
        return self.features.shape[0]


def _read_cifar_file(path: Path) -> tuple[Matrix, np.ndarray]:
    """One binary batch file -> ([0,1]-scaled pixels, labels)."""
    if not path.is_file():
        raise FileNotFoundError(f"CIFAR-10 file missing: {path}")
    raw = np.fromfile(path, dtype=np.uint8)
    if raw.size != _CIFAR_FILE_BYTES:
        raise FormatError(
            f"{path}: expected {_CIFAR_FILE_BYTES} bytes, got {raw.size}"
        )
    records = raw.reshape(_CIFAR_RECORDS_PER_FILE, _CIFAR_RECORD)
    labels = records[:, 0].astype(np.int64)
    if labels.max() > 9:
        raise FormatError(f"{path}: label byte {labels.max()} out of range 0..9")
    pixels = records[:, 1:].astype(np.float64) / 255.0
    return pixels, labels


def _resolve_cifar_dir(data_dir: str | Path) -> Path:
    """Accept either the batch directory itself or its parent."""
    root = Path(data_dir)
    if (root / CIFAR10_TEST_FILE).is_file():
        return root
    nested = root / "cifar-10-batches-bin"
    if (nested / CIFAR10_TEST_FILE).is_file():
        return nested
    return root  # let the per-file check raise with the precise path


def load_cifar10(data_dir: str | Path) -> tuple[Dataset, Dataset]:
    """Load the 6 binary batch files; standardize per channel on train stats.

    Pixels are scaled to [0, 1], then each of the three 1024-entry channel
    planes is centered and scaled by the train split's mean and standard
    deviation. The same constants are applied to the test split.
    """
    root = _resolve_cifar_dir(data_dir)
    parts = [_read_cifar_file(root / name) for name in CIFAR10_TRAIN_FILES]
    train_x = np.concatenate([p for p, _ in parts], axis=0)
    train_y = np.concatenate([l for _, l in parts], axis=0)
    test_x, test_y = _read_cifar_file(root / CIFAR10_TEST_FILE)

    plane = train_x.reshape(-1, 3, 1024)
    mean = plane.mean(axis=(0, 2))
    std = plane.std(axis=(0, 2))
    std = np.where(std == 0.0, 1.0, std)

    def standardize(x: Matrix) -> Matrix:
        # in place: the raw pixel arrays are locals, and avoiding the two
        # temporaries keeps peak memory well under control at CIFAR scale
        shaped = x.reshape(-1, 3, 1024)
        shaped -= mean[None, :, None]
        shaped /= std[None, :, None]
        return x

    train = Dataset(standardize(train_x), train_y, classes=10, name="cifar10-train")
    test = Dataset(standardize(test_x), test_y, classes=10, name="cifar10-test")
    return train, test


def synth_clusters(
    seed: int,
    n: int,
    d: int,
    classes: int,
    spread: float,
    name: str = "synth",
) -> Dataset:
    """Balanced Gaussian blobs around class centers on a radius-4 sphere.

    Deterministic in seed: centers, then noise, are drawn in a fixed order
    from one fresh generator. spread=0 collapses every sample onto its class
    center, which makes the task linearly separable.
    """
    if n < classes:
        raise InputError(f"need at least one sample per class: n={n} classes={classes}")
    if classes < 2 or d < 1:
        raise InputError(f"bad shape: d={d} classes={classes}")
    if spread < 0.0:
        raise InputError(f"spread must be >= 0, got {spread}")
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((classes, d))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    centers *= 4.0
    labels = (np.arange(n) % classes).astype(np.int64)
    noise = rng.standard_normal((n, d)) * spread
    features = centers[labels] + noise
    return Dataset(features, labels, classes=classes, name=name)


@dataclass(frozen=True)
class BatchPlan:
    seed: int
    batch_size: int

    def __post_init__(self):
        if self.batch_size < 1:
            raise InputError(f"batch_size must be >= 1, got {self.batch_size}")


def batches(plan: BatchPlan, dataset: Dataset, epoch: int) -> list[np.ndarray]:
    """Index batches for one epoch: a seeded shuffle cut into batch_size runs.

    The permutation is seeded by (plan.seed, epoch), so it differs across
    epochs but is identical across runs. The final short batch is kept.
    """
    n = len(dataset)
    if plan.batch_size > n:
        raise InputError(f"batch_size {plan.batch_size} exceeds dataset size {n}")
    if epoch < 0:
        raise InputError(f"epoch must be >= 0, got {epoch}")
    perm = np.random.default_rng([plan.seed, epoch]).permutation(n)
    return [perm[i : i + plan.batch_size] for i in range(0, n, plan.batch_size)]
