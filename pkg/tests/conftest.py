from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from roby.metrics import EmbeddingDataset


def random_dataset(seed: int, *, k_range=(2, 6), n_range=(1, 20), m_range=(1, 16),
                   shuffle: bool = True) -> EmbeddingDataset:
    """Seeded dataset with per-class record counts, presented in shuffled order."""
    rng = np.random.Generator(np.random.PCG64(seed))
    num_classes = int(rng.integers(k_range[0], k_range[1] + 1))
    dims = int(rng.integers(m_range[0], m_range[1] + 1))
    counts = rng.integers(n_range[0], n_range[1] + 1, size=num_classes)
    labels = np.repeat(np.arange(num_classes, dtype=np.int64), counts)
    vectors = rng.standard_normal((int(counts.sum()), dims))
    indices = np.arange(labels.size, dtype=np.int64)
    if shuffle:
        perm = rng.permutation(labels.size)
        labels, vectors, indices = labels[perm], vectors[perm], indices[perm]
    return EmbeddingDataset(dims, num_classes, indices, labels, vectors,
                            model_name=f"random-{seed}")


@pytest.fixture
def tiny_dataset() -> EmbeddingDataset:
    """Two well-separated 2-D classes, two records each."""
    return EmbeddingDataset.from_arrays(
        [0, 0, 1, 1],
        [[0.0, 0.0], [2.0, 0.0], [10.0, 0.0], [10.0, 2.0]],
        model_name="tiny",
    )
