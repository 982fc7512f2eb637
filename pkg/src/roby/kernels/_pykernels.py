"""Pure-numpy kernel backend.

Mirrors the compiled extension's surface exactly. The `threads` argument is
accepted for signature parity and ignored: every reduction here is a single
deterministic vectorized call, so results do not depend on it.
"""

from __future__ import annotations

import numpy as np

KIND_GENERAL = 0
KIND_P1 = 1
KIND_P2 = 2
KIND_INF = 3


def row_distances(diffs: np.ndarray, kind: int, p: float) -> np.ndarray:
    """Per-row Minkowski length of a (T, M) difference matrix."""
    a = np.abs(diffs)
    if kind == KIND_P1:
        return a.sum(axis=1)
    if kind == KIND_P2:
        return np.sqrt((diffs * diffs).sum(axis=1))
    if kind == KIND_INF:
        return a.max(axis=1)
    # General finite p: factor out the max to avoid overflow for large p.
    scale = a.max(axis=1)
    out = np.zeros_like(scale)
    nz = scale > 0.0
    if nz.any():
        ratios = a[nz] / scale[nz, None]
        out[nz] = scale[nz] * (ratios**p).sum(axis=1) ** (1.0 / p)
    return out


def class_centers(vectors: np.ndarray, offsets: np.ndarray, threads: int) -> np.ndarray:
    counts = np.diff(offsets)
    sums = np.add.reduceat(vectors, offsets[:-1], axis=0)
    return sums / counts[:, None]


def fsa_raw(
    vectors: np.ndarray,
    offsets: np.ndarray,
    centers: np.ndarray,
    kind: int,
    p: float,
    threads: int,
) -> np.ndarray:
    counts = np.diff(offsets)
    d = row_distances(vectors - np.repeat(centers, counts, axis=0), kind, p)
    return np.add.reduceat(d, offsets[:-1]) / counts


def pair_distances(
    centers: np.ndarray,
    ii: np.ndarray,
    jj: np.ndarray,
    kind: int,
    p: float,
    threads: int,
) -> np.ndarray:
    return row_distances(centers[ii] - centers[jj], kind, p)
