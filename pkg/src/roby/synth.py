"""Seeded synthetic embedding datasets (isotropic Gaussian blobs).

Reproducibility: draws come from numpy's PCG64 bit generator seeded with
the spec seed, consumed through a single `standard_normal` call whose shape
depends only on (num_classes * samples_per_class, dims). Identical specs
therefore yield bit-identical datasets, and sweeping `separation` at a fixed
seed reuses the same noise realization (only the deterministic center layout
is rescaled).

Center layout ("anchored spokes"): class 0 sits at the origin; class 1 sits
at 0.2 x separation along axis 0 (a deliberately close pair); every further
class k sits on axis (k - 1) mod dims at radius separation x (1 + 0.5 *
((k - 1) // dims)). Positions are pairwise distinct and the pairwise-distance
multiset is non-degenerate, which keeps the ROBY-vs-separation sweep
well-conditioned (a layout with all-equal center distances would collapse
the min-max normalization step).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec
from .metrics import EmbeddingDataset


@dataclass(frozen=True)
class SynthSpec:
    """Parameters for one blob dataset; equal specs generate identical data."""

    num_classes: int
    samples_per_class: int
    dims: int
    separation: float
    spread: float
    seed: int

    def __post_init__(self) -> None:
        if self.num_classes < 2:
            raise InvalidSpec(f"num_classes must be >= 2, got {self.num_classes}")
        if self.samples_per_class < 1:
            raise InvalidSpec(f"samples_per_class must be >= 1, got {self.samples_per_class}")
        if self.dims < 1:
            raise InvalidSpec(f"dims must be >= 1, got {self.dims}")
        if not np.isfinite(self.separation) or self.separation < 0:
            raise InvalidSpec(f"separation must be finite and >= 0, got {self.separation}")
        if not np.isfinite(self.spread) or self.spread <= 0:
            raise InvalidSpec(f"spread must be finite and > 0, got {self.spread}")


def center_layout(num_classes: int, dims: int) -> np.ndarray:
    """Unit-scale anchored-spoke center positions, shape (K, M)."""
    layout = np.zeros((num_classes, dims))
    for k in range(1, num_classes):
        axis = (k - 1) % dims
        radius = 0.2 if k == 1 else 1.0 + 0.5 * ((k - 1) // dims)
        layout[k, axis] = radius
    return layout


def generate_blobs(spec: SynthSpec) -> EmbeddingDataset:
    """Draw `samples_per_class` points around each scaled layout center."""
    k, n, m = spec.num_classes, spec.samples_per_class, spec.dims
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    noise = rng.standard_normal((k * n, m))
    labels = np.repeat(np.arange(k, dtype=np.int64), n)
    centers = spec.separation * center_layout(k, m)
    vectors = centers[labels] + spec.spread * noise
    name = (
        f"synth-k{k}-n{n}-m{m}-sep{spec.separation:g}"
        f"-spread{spec.spread:g}-seed{spec.seed}"
    )
    return EmbeddingDataset(
        dims=m,
        num_classes=k,
        indices=np.arange(k * n, dtype=np.int64),
        labels=labels,
        vectors=vectors,
        model_name=name,
    )
