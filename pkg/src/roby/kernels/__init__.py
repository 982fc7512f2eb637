"""Kernel backend selection.

The hot loops (per-record distances to class centers, pairwise center
distances) live in the compiled extension `roby._ckernels` when it built;
otherwise the numpy fallback in `_pykernels` is used. `ROBY_KERNEL=python`
forces the fallback, `ROBY_KERNEL=c` insists on the extension.

Both backends share one determinism contract: each output slot (class k,
pair t) is accumulated serially in canonical record order, so results are
bit-identical across thread counts and across repeated runs.
"""

from __future__ import annotations

import math
import os

import numpy as np

from ..errors import InvalidSpec
from . import _pykernels
from ._pykernels import KIND_GENERAL, KIND_INF, KIND_P1, KIND_P2

_forced = os.environ.get("ROBY_KERNEL", "").strip().lower()
if _forced in ("python", "py", "numpy"):
    _impl = _pykernels
    BACKEND = "python"
elif _forced in ("c", "cython", "compiled"):
    from roby import _ckernels as _impl  # noqa: F401  (ImportError is the point)

    BACKEND = "c"
elif _forced:
    raise InvalidSpec(f"ROBY_KERNEL must be 'c' or 'python', got {_forced!r}")
else:
    try:
        from roby import _ckernels as _impl

        BACKEND = "c"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def available_backends() -> dict[str, object]:
    """Importable backend modules keyed by name (for the benchmark)."""
    found: dict[str, object] = {"python": _pykernels}
    try:
        from roby import _ckernels

        found["c"] = _ckernels
    except ImportError:
        pass
    return found


def kind_of(p: float) -> int:
    if math.isinf(p):
        return KIND_INF
    if p == 1.0:
        return KIND_P1
    if p == 2.0:
        return KIND_P2
    return KIND_GENERAL


def resolve_threads(threads: int | None) -> int:
    """Explicit argument wins; else ROBY_THREADS; else 1."""
    if threads is None:
        raw = os.environ.get("ROBY_THREADS", "").strip()
        if not raw:
            return 1
        try:
            threads = int(raw)
        except ValueError:
            raise InvalidSpec(f"ROBY_THREADS must be a positive integer, got {raw!r}") from None
    threads = int(threads)
    if threads < 1:
        raise InvalidSpec(f"thread count must be a positive integer, got {threads}")
    return threads


def class_centers(vectors: np.ndarray, offsets: np.ndarray, threads: int) -> np.ndarray:
    return _impl.class_centers(vectors, offsets, threads)


def fsa_raw(
    vectors: np.ndarray,
    offsets: np.ndarray,
    centers: np.ndarray,
    kind: int,
    p: float,
    threads: int,
) -> np.ndarray:
    return _impl.fsa_raw(vectors, offsets, centers, kind, p, threads)


def pair_distances(centers: np.ndarray, kind: int, p: float, threads: int) -> np.ndarray:
    num_classes = centers.shape[0]
    ii, jj = np.triu_indices(num_classes, k=1)
    return _impl.pair_distances(
        centers, ii.astype(np.int64), jj.astype(np.int64), kind, p, threads
    )
