"""Pearson correlation protocol over per-model metric tables.

A table holds one row per model with the canonical columns ACC, ASR_INF,
FSA_INF, FSD_INF, ROBY_INF, ASR_2, FSA_2, FSD_2, ROBY_2. The operations
here rank models by a column, correlate metric columns against attack
success rates, and average the correlations across datasets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    LengthMismatch,
    MissingColumn,
    NonFiniteInput,
    TooFewPoints,
    UnknownColumn,
    ZeroVariance,
)

CANONICAL_COLUMNS = (
    "ACC",
    "ASR_INF",
    "FSA_INF",
    "FSD_INF",
    "ROBY_INF",
    "ASR_2",
    "FSA_2",
    "FSD_2",
    "ROBY_2",
)

CROSS_NORM_PAIRS = (
    ("ASR_2", "ROBY_2"),
    ("ASR_2", "ROBY_INF"),
    ("ASR_INF", "ROBY_2"),
    ("ASR_INF", "ROBY_INF"),
)


@dataclass(frozen=True)
class ModelRow:
    model_name: str
    values: Mapping[str, float]


@dataclass(frozen=True)
class ModelMetricsTable:
    """One dataset's models with their metric columns."""

    dataset_name: str
    rows: tuple[ModelRow, ...]

    def __post_init__(self) -> None:
        if self.rows:
            first = set(self.rows[0].values)
            for row in self.rows[1:]:
                if set(row.values) != first:
                    raise MissingColumn(
                        f"row {row.model_name!r} has a different column set "
                        f"than row {self.rows[0].model_name!r}"
                    )

    @property
    def model_names(self) -> tuple[str, ...]:
        return tuple(r.model_name for r in self.rows)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(self.rows[0].values) if self.rows else ()

    def column(self, name: str) -> np.ndarray:
        if not self.rows or name not in self.rows[0].values:
            raise UnknownColumn(
                f"table {self.dataset_name!r} has no column {name!r}"
            )
        return np.array([r.values[name] for r in self.rows], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class CorrelationResult:
    column_x: str
    column_y: str
    r: float
    n: int


def pearson(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """Pearson correlation coefficient, clamped to [-1, 1] against rounding."""
    vx = np.asarray(x, dtype=np.float64)
    vy = np.asarray(y, dtype=np.float64)
    if vx.shape != vy.shape or vx.ndim != 1:
        raise LengthMismatch(f"inputs must be equal-length 1-D, got {vx.shape} and {vy.shape}")
    if vx.size < 3:
        raise TooFewPoints(f"correlation needs at least 3 points, got {vx.size}")
    if not (np.isfinite(vx).all() and np.isfinite(vy).all()):
        raise NonFiniteInput("correlation inputs must be finite")
    dx = vx - vx.mean()
    dy = vy - vy.mean()
    sxx = float((dx * dx).sum())
    syy = float((dy * dy).sum())
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("a constant column has no defined correlation")
    r = float((dx * dy).sum()) / float(np.sqrt(sxx * syy))
    return min(1.0, max(-1.0, r))


def rank_models(table: ModelMetricsTable, column: str, descending: bool = True) -> list[str]:
    """Model names sorted by a column; ties break lexicographically by name."""
    values = table.column(column)
    if not np.isfinite(values).all():
        raise NonFiniteInput(f"column {column!r} contains non-finite values")
    pairs = list(zip(table.model_names, values))
    if descending:
        pairs.sort(key=lambda it: (-it[1], it[0]))
    else:
        pairs.sort(key=lambda it: (it[1], it[0]))
    return [name for name, _ in pairs]


def correlation_matrix(
    table: ModelMetricsTable, targets: Sequence[str], against: str
) -> list[CorrelationResult]:
    """Correlate each target column with `against`, preserving target order."""
    y = table.column(against)
    out = []
    for target in targets:
        x = table.column(target)
        out.append(CorrelationResult(target, against, pearson(x, y), int(x.size)))
    return out


def cross_norm_summary(
    tables: Iterable[ModelMetricsTable],
) -> dict[tuple[str, str], float]:
    """Average r across datasets for each (ASR, ROBY) column pairing."""
    tables = list(tables)
    if not tables:
        raise TooFewPoints("cross-norm summary needs at least one table")
    out: dict[tuple[str, str], float] = {}
    for asr, roby in CROSS_NORM_PAIRS:
        rs = [pearson(t.column(roby), t.column(asr)) for t in tables]
        out[(asr, roby)] = float(np.mean(rs))
    return out
