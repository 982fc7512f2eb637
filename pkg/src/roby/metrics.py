"""Decision-boundary statistics over labeled embedding vectors.

The pipeline: per-class centers, raw within-class mean distances (FSA),
raw pairwise center distances (FSD), and the combined per-pair values
FSA_i + FSA_j - dist(center_i, center_j) (ROBY). Each raw list is min-max
normalized to [0, 1] and averaged into the three aggregate scalars; a
zero-range list normalizes to all zeros.

All reductions run over records sorted by (label, index), so a report is
bit-identical under any permutation of the input records and any thread
count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    DuplicateIndex,
    EmptyClass,
    EmptyInput,
    InvalidSpec,
    LabelOutOfRange,
    NonFiniteInput,
    RobyError,
)

NORMALIZATION_TAG = "minmax[0,1];zero-range->0"

K2_WARNING = (
    "K=2: aggregate metrics are degenerate (two-value min-max forces "
    "fsa=0.5 or 1.0; single-pair lists force fsd=roby=0)"
)


@dataclass(frozen=True)
class DistanceSpec:
    """Minkowski order selecting the l_p distance family.

    `p` is any real >= 1, or `math.inf` for the max-absolute-difference
    form.
    """

    p: float = 2.0

    def __post_init__(self) -> None:
        p = float(self.p)
        if math.isnan(p) or p < 1.0:
            raise InvalidSpec(f"Minkowski order must satisfy p >= 1, got {self.p!r}")
        object.__setattr__(self, "p", p)

    @classmethod
    def infinity(cls) -> "DistanceSpec":
        return cls(math.inf)

    @classmethod
    def parse(cls, text: str) -> "DistanceSpec":
        """Parse the CLI forms 'p=<real>' and 'inf'."""
        text = text.strip()
        if text == "inf":
            return cls.infinity()
        if text.startswith("p="):
            try:
                return cls(float(text[2:]))
            except ValueError:
                raise InvalidSpec(f"cannot parse Minkowski order {text!r}") from None
        raise InvalidSpec(f"distance must be 'p=<real>' or 'inf', got {text!r}")

    @property
    def is_infinity(self) -> bool:
        return math.isinf(self.p)

    @property
    def tag(self) -> str:
        # .17g is lossless for binary64, so report round trips preserve p
        return "inf" if self.is_infinity else f"p={self.p:.17g}"


@dataclass(frozen=True, eq=False)
class EmbeddingRecord:
    """One labeled embedding vector; `label` is the classifier's prediction."""

    index: int
    label: int
    vector: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingRecord):
            return NotImplemented
        return (
            self.index == other.index
            and self.label == other.label
            and np.array_equal(self.vector, other.vector)
        )


class EmbeddingDataset:
    """Canonically ordered labeled embedding vectors for one model.

    Construction validates every invariant (finite coordinates, labels in
    [0, K), K >= 2, no empty class, unique indices) and sorts records by
    (label, index). The stored arrays are read-only and may be shared
    across threads.
    """

    __slots__ = ("dims", "num_classes", "model_name", "indices", "labels", "vectors", "class_offsets")

    def __init__(
        self,
        dims: int,
        num_classes: int,
        indices: Sequence[int] | np.ndarray,
        labels: Sequence[int] | np.ndarray,
        vectors: Sequence[Sequence[float]] | np.ndarray,
        model_name: str = "",
    ) -> None:
        dims = int(dims)
        num_classes = int(num_classes)
        if dims < 1:
            raise InvalidSpec(f"dims must be >= 1, got {dims}")
        try:
            vec = np.ascontiguousarray(np.asarray(vectors, dtype=np.float64))
        except ValueError:
            raise DimensionMismatch("records disagree on vector length") from None
        if vec.ndim != 2:
            raise DimensionMismatch(f"vectors must be a 2-D array, got ndim={vec.ndim}")
        if vec.shape[1] != dims:
            raise DimensionMismatch(
                f"vectors have {vec.shape[1]} coordinates but dims={dims}"
            )
        n = vec.shape[0]
        lab = np.ascontiguousarray(np.asarray(labels, dtype=np.int64))
        idx = np.ascontiguousarray(np.asarray(indices, dtype=np.int64))
        if lab.shape != (n,) or idx.shape != (n,):
            raise DimensionMismatch(
                f"indices/labels/vectors disagree on record count "
                f"({idx.shape[0]}/{lab.shape[0]}/{n})"
            )
        if num_classes < 2:
            raise EmptyClass(f"K >= 2 unsatisfiable: num_classes={num_classes}")
        if n and idx.min() < 0:
            raise InvalidSpec("record indices must be non-negative")
        if np.unique(idx).size != n:
            raise DuplicateIndex("record indices must be unique")
        if not np.isfinite(vec).all():
            bad = int(np.argwhere(~np.isfinite(vec).all(axis=1))[0, 0])
            raise NonFiniteInput(
                f"record index {int(idx[bad])} has a non-finite coordinate"
            )
        if n:
            if lab.min() < 0 or lab.max() >= num_classes:
                bad = int(np.argwhere((lab < 0) | (lab >= num_classes))[0, 0])
                raise LabelOutOfRange(
                    f"record index {int(idx[bad])} has label {int(lab[bad])} "
                    f"outside [0, {num_classes})"
                )
        counts = np.bincount(lab, minlength=num_classes) if n else np.zeros(num_classes, dtype=np.int64)
        if (counts == 0).any():
            missing = int(np.flatnonzero(counts == 0)[0])
            raise EmptyClass(f"class {missing} has no records (K={num_classes})")

        order = np.lexsort((idx, lab))
        offsets = np.zeros(num_classes + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])

        self.dims = dims
        self.num_classes = num_classes
        self.model_name = str(model_name)
        self.indices = _frozen(idx[order])
        self.labels = _frozen(lab[order])
        self.vectors = _frozen(np.ascontiguousarray(vec[order]))
        self.class_offsets = _frozen(offsets)

    @classmethod
    def from_arrays(
        cls,
        labels: Sequence[int] | np.ndarray,
        vectors: Sequence[Sequence[float]] | np.ndarray,
        *,
        num_classes: int | None = None,
        indices: Sequence[int] | np.ndarray | None = None,
        model_name: str = "",
    ) -> "EmbeddingDataset":
        """Build a dataset, inferring K = max(label) + 1 and M unless given."""
        try:
            vec = np.asarray(vectors, dtype=np.float64)
        except ValueError:
            raise DimensionMismatch("records disagree on vector length") from None
        if vec.ndim != 2:
            raise DimensionMismatch(f"vectors must be a 2-D array, got ndim={vec.ndim}")
        lab = np.asarray(labels, dtype=np.int64)
        if num_classes is None:
            if lab.size == 0:
                raise EmptyClass("K >= 2 unsatisfiable: no records to infer K from")
            if lab.min() < 0:
                raise LabelOutOfRange(f"label {int(lab.min())} is negative")
            num_classes = int(lab.max()) + 1
        if indices is None:
            indices = np.arange(vec.shape[0], dtype=np.int64)
        return cls(vec.shape[1], num_classes, indices, lab, vec, model_name)

    @classmethod
    def from_records(
        cls,
        records: Iterable[EmbeddingRecord],
        *,
        num_classes: int | None = None,
        model_name: str = "",
    ) -> "EmbeddingDataset":
        recs = list(records)
        if not recs:
            raise EmptyClass("K >= 2 unsatisfiable: no records")
        shapes = {np.asarray(r.vector).shape for r in recs}
        if len(shapes) != 1 or len(next(iter(shapes))) != 1:
            raise DimensionMismatch(f"records disagree on vector shape: {sorted(shapes)}")
        vec = np.asarray([np.asarray(r.vector, dtype=np.float64) for r in recs])
        lab = np.asarray([r.label for r in recs], dtype=np.int64)
        idx = np.asarray([r.index for r in recs], dtype=np.int64)
        if num_classes is None:
            if lab.min() < 0:
                raise LabelOutOfRange(f"label {int(lab.min())} is negative")
            num_classes = int(lab.max()) + 1
        return cls(vec.shape[1], num_classes, idx, lab, vec, model_name)

    @property
    def num_records(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def class_counts(self) -> np.ndarray:
        return np.diff(self.class_offsets)

    def class_vectors(self, k: int) -> np.ndarray:
        start, stop = self.class_offsets[k], self.class_offsets[k + 1]
        return self.vectors[start:stop]

    def records(self) -> Iterator[EmbeddingRecord]:
        for i in range(self.num_records):
            yield EmbeddingRecord(
                int(self.indices[i]), int(self.labels[i]), self.vectors[i]
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingDataset):
            return NotImplemented
        return (
            self.dims == other.dims
            and self.num_classes == other.num_classes
            and self.model_name == other.model_name
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.vectors, other.vectors)
        )

    def __repr__(self) -> str:
        return (
            f"EmbeddingDataset(model={self.model_name!r}, K={self.num_classes}, "
            f"M={self.dims}, n={self.num_records})"
        )


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ClassCenters:
    """Per-class mean embedding vectors, indexed by class."""

    centers: np.ndarray  # (K, M)

    @property
    def num_classes(self) -> int:
        return int(self.centers.shape[0])

    @property
    def dims(self) -> int:
        return int(self.centers.shape[1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassCenters):
            return NotImplemented
        return np.array_equal(self.centers, other.centers)


@dataclass(frozen=True, eq=False)
class MetricReport:
    """All raw and aggregate metric values plus provenance.

    The pair arrays are ordered lexicographically by (i, j) with i < j;
    `pair_labels(num_classes)` reproduces that ordering.
    """

    model_name: str
    num_classes: int
    dims: int
    distance_spec: DistanceSpec
    normalization: str
    fsa_per_class: np.ndarray
    fsa: float
    fsd_per_pair: np.ndarray
    fsd: float
    roby_per_pair: np.ndarray
    roby: float
    warning: str | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MetricReport):
            return NotImplemented
        return (
            self.model_name == other.model_name
            and self.num_classes == other.num_classes
            and self.dims == other.dims
            and self.distance_spec == other.distance_spec
            and self.normalization == other.normalization
            and np.array_equal(self.fsa_per_class, other.fsa_per_class)
            and self.fsa == other.fsa
            and np.array_equal(self.fsd_per_pair, other.fsd_per_pair)
            and self.fsd == other.fsd
            and np.array_equal(self.roby_per_pair, other.roby_per_pair)
            and self.roby == other.roby
            and self.warning == other.warning
        )


def pair_labels(num_classes: int) -> list[tuple[int, int]]:
    """(i, j) pairs with i < j in lexicographic order."""
    return [(i, j) for i in range(num_classes) for j in range(i + 1, num_classes)]


def _as_vector(a: Sequence[float] | np.ndarray, name: str) -> np.ndarray:
    v = np.asarray(a, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatch(f"{name} must be a 1-D vector, got ndim={v.ndim}")
    return v


def minkowski_distance(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    spec: DistanceSpec,
) -> float:
    """Distance between two equal-length vectors under the given order."""
    va = _as_vector(a, "a")
    vb = _as_vector(b, "b")
    if va.shape[0] != vb.shape[0]:
        raise DimensionMismatch(
            f"vector lengths differ: {va.shape[0]} vs {vb.shape[0]}"
        )
    if not (np.isfinite(va).all() and np.isfinite(vb).all()):
        raise NonFiniteInput("distance inputs must be finite")
    from .kernels import _pykernels  # single pair is never hot; use the numpy path

    return float(
        _pykernels.row_distances((va - vb)[None, :], kernels.kind_of(spec.p), spec.p)[0]
    )


def minmax_normalize(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Affine map of a list onto [0, 1]; a zero-range list maps to all zeros."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D sequence, got ndim={v.ndim}")
    if v.size == 0:
        raise EmptyInput("cannot normalize an empty sequence")
    if not np.isfinite(v).all():
        raise NonFiniteInput("cannot normalize non-finite values")
    lo = v.min()
    hi = v.max()
    if hi > lo:
        return (v - lo) / (hi - lo)
    return np.zeros_like(v)


def compute_class_centers(ds: EmbeddingDataset, threads: int | None = None) -> ClassCenters:
    """Coordinate-wise mean of each class, accumulated in canonical order."""
    t = kernels.resolve_threads(threads)
    return ClassCenters(_frozen(kernels.class_centers(ds.vectors, ds.class_offsets, t)))


def _check_centers(ds: EmbeddingDataset, centers: ClassCenters) -> None:
    if centers.num_classes != ds.num_classes or centers.dims != ds.dims:
        raise DimensionMismatch(
            f"centers shape ({centers.num_classes}, {centers.dims}) does not "
            f"match dataset (K={ds.num_classes}, M={ds.dims})"
        )


def fsa_raw_per_class(
    ds: EmbeddingDataset,
    centers: ClassCenters,
    spec: DistanceSpec,
    threads: int | None = None,
) -> np.ndarray:
    """Mean within-class distance to the class center, one value per class."""
    _check_centers(ds, centers)
    t = kernels.resolve_threads(threads)
    return kernels.fsa_raw(
        ds.vectors, ds.class_offsets, centers.centers, kernels.kind_of(spec.p), spec.p, t
    )


def fsa_aggregate(raw: Sequence[float] | np.ndarray) -> float:
    """1 - mean of the min-max normalized per-class list."""
    v = np.asarray(raw, dtype=np.float64)
    if v.size == 0:
        raise EmptyInput("fsa aggregate needs at least one per-class value")
    return float(1.0 - minmax_normalize(v).mean())


def fsd_raw_per_pair(
    centers: ClassCenters, spec: DistanceSpec, threads: int | None = None
) -> np.ndarray:
    """Center-to-center distance for every (i, j) pair, i < j."""
    if centers.num_classes < 2:
        raise EmptyInput("pairwise distances need at least two classes")
    t = kernels.resolve_threads(threads)
    return kernels.pair_distances(centers.centers, kernels.kind_of(spec.p), spec.p, t)


def fsd_aggregate(raw_pairs: Sequence[float] | np.ndarray) -> float:
    """Mean of the min-max normalized pair list."""
    v = np.asarray(raw_pairs, dtype=np.float64)
    if v.size == 0:
        raise EmptyInput("fsd aggregate needs at least one pair value")
    return float(minmax_normalize(v).mean())


def roby_raw_per_pair(
    fsa_raw: Sequence[float] | np.ndarray,
    centers: ClassCenters,
    spec: DistanceSpec,
    threads: int | None = None,
) -> np.ndarray:
    """fsa_raw[i] + fsa_raw[j] - dist(center_i, center_j) per pair; may be negative."""
    raw = np.asarray(fsa_raw, dtype=np.float64)
    if raw.shape != (centers.num_classes,):
        raise DimensionMismatch(
            f"fsa_raw has shape {raw.shape}, expected ({centers.num_classes},)"
        )
    d = fsd_raw_per_pair(centers, spec, threads)
    ii, jj = np.triu_indices(centers.num_classes, k=1)
    return raw[ii] + raw[jj] - d


def roby_aggregate(raw_pairs: Sequence[float] | np.ndarray) -> float:
    """Mean of the min-max normalized pair list."""
    v = np.asarray(raw_pairs, dtype=np.float64)
    if v.size == 0:
        raise EmptyInput("roby aggregate needs at least one pair value")
    return float(minmax_normalize(v).mean())


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except RobyError as err:
        raise type(err)(f"{name} stage: {err}") from err


def evaluate(
    ds: EmbeddingDataset, spec: DistanceSpec, threads: int | None = None
) -> MetricReport:
    """Run the full pipeline and return a report with raw and aggregate values.

    Deterministic for a fixed dataset regardless of the record order it was
    constructed from and regardless of `threads`.
    """
    centers = _stage("centers", compute_class_centers, ds, threads)
    raw_fsa = _stage("fsa_raw", fsa_raw_per_class, ds, centers, spec, threads)
    fsa = _stage("fsa", fsa_aggregate, raw_fsa)
    raw_fsd = _stage("fsd_raw", fsd_raw_per_pair, centers, spec, threads)
    fsd = _stage("fsd", fsd_aggregate, raw_fsd)
    raw_roby = _stage("roby_raw", roby_raw_per_pair, raw_fsa, centers, spec, threads)
    roby = _stage("roby", roby_aggregate, raw_roby)
    return MetricReport(
        model_name=ds.model_name,
        num_classes=ds.num_classes,
        dims=ds.dims,
        distance_spec=spec,
        normalization=NORMALIZATION_TAG,
        fsa_per_class=_frozen(raw_fsa),
        fsa=fsa,
        fsd_per_pair=_frozen(raw_fsd),
        fsd=fsd,
        roby_per_pair=_frozen(raw_roby),
        roby=roby,
        warning=K2_WARNING if ds.num_classes == 2 else None,
    )
