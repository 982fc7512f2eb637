"""Attack-independent robustness evaluation from classifier embedding dumps.

Computes per-class aggregation (FSA), inter-class separation (FSD), and the
combined per-pair overlap statistic (ROBY) from labeled embedding vectors,
plus the Pearson-correlation protocol that checks those metrics against
attack success rates across models.
"""

from .analysis import (
    CANONICAL_COLUMNS,
    CROSS_NORM_PAIRS,
    CorrelationResult,
    ModelMetricsTable,
    ModelRow,
    correlation_matrix,
    cross_norm_summary,
    pearson,
    rank_models,
)
from .errors import RobyError
from .io import (
    load_embeddings,
    load_embeddings_binary,
    load_embeddings_csv,
    load_metrics_table,
    read_report,
    write_embeddings_binary,
    write_embeddings_csv,
    write_report,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .metrics import (
    ClassCenters,
    DistanceSpec,
    EmbeddingDataset,
    EmbeddingRecord,
    MetricReport,
    compute_class_centers,
    evaluate,
    fsa_aggregate,
    fsa_raw_per_class,
    fsd_aggregate,
    fsd_raw_per_pair,
    minkowski_distance,
    minmax_normalize,
    pair_labels,
    roby_aggregate,
    roby_raw_per_pair,
)
from .synth import SynthSpec, generate_blobs

__version__ = "0.1.0"

__all__ = [
    "CANONICAL_COLUMNS",
    "CROSS_NORM_PAIRS",
    "ClassCenters",
    "CorrelationResult",
    "DistanceSpec",
    "EmbeddingDataset",
    "EmbeddingRecord",
    "KERNEL_BACKEND",
    "MetricReport",
    "ModelMetricsTable",
    "ModelRow",
    "RobyError",
    "SynthSpec",
    "compute_class_centers",
    "correlation_matrix",
    "cross_norm_summary",
    "evaluate",
    "fsa_aggregate",
    "fsa_raw_per_class",
    "fsd_aggregate",
    "fsd_raw_per_pair",
    "generate_blobs",
    "load_embeddings",
    "load_embeddings_binary",
    "load_embeddings_csv",
    "load_metrics_table",
    "minkowski_distance",
    "minmax_normalize",
    "pair_labels",
    "pearson",
    "rank_models",
    "read_report",
    "roby_aggregate",
    "roby_raw_per_pair",
    "write_embeddings_binary",
    "write_embeddings_csv",
    "write_report",
]
