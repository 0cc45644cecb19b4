"""Shared fixtures.

Real CIFAR-10 is never downloaded: tests that need it read the directory
named by EXCITATION_CIFAR10_DIR and skip loudly when it is unset. Format
tests use a synthetic directory with files that are byte-for-byte valid
(correct sizes, labels, channel-planar layout) but random-ish content.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest

CIFAR_ENV = "EXCITATION_CIFAR10_DIR"

TRAIN_FILES = tuple(f"data_batch_{i}.bin" for i in range(1, 6))
TEST_FILE = "test_batch.bin"
RECORDS = 10000
RECORD_BYTES = 3073


@pytest.fixture(scope="session")
def cifar_dir() -> Path:
    """Directory with the real CIFAR-10 binaries, or skip."""
    path = os.environ.get(CIFAR_ENV)
    if not path:
        pytest.skip(
            f"CIFAR-10 binaries not available in this environment; "
            f"set {CIFAR_ENV} to the directory holding data_batch_*.bin "
            f"to run this criterion"
        )
    return Path(path)


def _write_fake_file(path: Path, file_index: int) -> None:
    rng = np.random.default_rng(1000 + file_index)
    records = np.empty((RECORDS, RECORD_BYTES), dtype=np.uint8)
    records[:, 0] = np.arange(RECORDS) % 10
    records[:, 1:] = rng.integers(0, 256, size=(RECORDS, RECORD_BYTES - 1), dtype=np.uint8)
    records.tofile(path)


@pytest.fixture(scope="session")
def fake_cifar_dir(tmp_path_factory) -> Path:
    """Format-valid stand-in files: right sizes, labels in range."""
    root = tmp_path_factory.mktemp("fake_cifar")
    for i, name in enumerate(TRAIN_FILES):
        _write_fake_file(root / name, i)
    _write_fake_file(root / TEST_FILE, 5)
    return root
