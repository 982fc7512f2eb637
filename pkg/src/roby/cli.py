"""Command-line entry point.

Subcommands: compute, correlate, rank, synth, validate. Exit codes: 0 on
success, 2 on input/usage errors (with a diagnostic naming the offending
file or flag), 1 on internal failures.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import io
from .analysis import correlation_matrix, pearson, rank_models
from .errors import RobyError
from .kernels import resolve_threads
from .metrics import DistanceSpec, evaluate
from .synth import SynthSpec, generate_blobs


@dataclass
class RunConfig:
    """One parsed invocation."""

    command: str
    inputs: list[str] = field(default_factory=list)
    distance: DistanceSpec | None = None
    output: str | None = None
    format: str = "json"
    threads: int | None = None
    seed: int = 0
    num_classes: int | None = None
    drop_misclassified: bool = False
    targets: list[str] = field(default_factory=list)
    against: str = ""
    summary: bool = False
    descending: bool = True
    column: str = ""
    samples_per_class: int = 0
    dims: int = 0
    separation: float = 0.0
    spread: float = 1.0


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def cmd_compute(cfg: RunConfig) -> int:
    ds = io.load_embeddings(
        cfg.inputs[0],
        num_classes=cfg.num_classes,
        drop_misclassified=cfg.drop_misclassified,
    )
    report = evaluate(ds, cfg.distance, threads=cfg.threads)
    if cfg.output:
        io.write_report(report, cfg.output, cfg.format)
    if report.warning:
        print(f"warning: {report.warning}", file=sys.stderr)
    print(f"FSA={_f17(report.fsa)} FSD={_f17(report.fsd)} ROBY={_f17(report.roby)}")
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    ds = io.load_embeddings(cfg.inputs[0], num_classes=cfg.num_classes)
    print(f"model: {ds.model_name}")
    print(f"classes: {ds.num_classes}")
    print(f"dims: {ds.dims}")
    print(f"records: {ds.num_records}")
    for k, count in enumerate(ds.class_counts):
        print(f"class {k}: {int(count)}")
    print("ok: dataset is metric-ready")
    return 0


def cmd_synth(cfg: RunConfig) -> int:
    spec = SynthSpec(
        num_classes=cfg.num_classes,
        samples_per_class=cfg.samples_per_class,
        dims=cfg.dims,
        separation=cfg.separation,
        spread=cfg.spread,
        seed=cfg.seed,
    )
    ds = generate_blobs(spec)
    if cfg.format == "binary":
        io.write_embeddings_binary(ds, cfg.output)
    else:
        io.write_embeddings_csv(ds, cfg.output)
    print(f"wrote {ds.num_records} records (K={ds.num_classes}, M={ds.dims}) to {cfg.output}")
    return 0


def cmd_correlate(cfg: RunConfig) -> int:
    tables = [io.load_metrics_table(p) for p in cfg.inputs]
    all_results = []
    for table in tables:
        results = correlation_matrix(table, cfg.targets, cfg.against)
        all_results.extend(results)
        for res in results:
            print(
                f"{table.dataset_name}: r({res.column_x}, {res.column_y}) = "
                f"{_f17(res.r)} (n={res.n})"
            )
    if cfg.summary:
        for target in cfg.targets:
            rs = [pearson(t.column(target), t.column(cfg.against)) for t in tables]
            avg = sum(rs) / len(rs)
            print(f"summary: mean r({target}, {cfg.against}) = {_f17(avg)} over {len(rs)} tables")
    if cfg.output:
        io.write_report(all_results, cfg.output, cfg.format)
    return 0


def cmd_rank(cfg: RunConfig) -> int:
    table = io.load_metrics_table(cfg.inputs[0])
    order = rank_models(table, cfg.column, descending=cfg.descending)
    by_name = {row.model_name: row.values[cfg.column] for row in table.rows}
    for name in order:
        print(f"{name}\t{_f17(by_name[name])}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roby",
        description="Decision-boundary robustness metrics over embedding dumps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="compute FSA/FSD/ROBY for an embedding dump")
    compute.add_argument("input", help="embedding file (CSV or binary, sniffed)")
    compute.add_argument("--distance", default="p=2", help="'p=<real>' (p >= 1) or 'inf'")
    compute.add_argument("--output", help="report file to write")
    compute.add_argument("--format", choices=("json", "csv"), default="json")
    compute.add_argument("--threads", type=int, help="worker threads (or ROBY_THREADS)")
    compute.add_argument(
        "--num-classes", type=int, help="declare K instead of inferring max(label)+1 (CSV only)"
    )
    compute.add_argument(
        "--drop-misclassified",
        action="store_true",
        help="drop rows whose true_label differs from label (CSV with true_label only)",
    )

    validate = sub.add_parser("validate", help="check a dump against every loader invariant")
    validate.add_argument("input")
    validate.add_argument("--num-classes", type=int)

    synth = sub.add_parser("synth", help="generate a seeded Gaussian-blob dump")
    synth.add_argument("--classes", type=int, required=True)
    synth.add_argument("--per-class", type=int, required=True)
    synth.add_argument("--dims", type=int, required=True)
    synth.add_argument("--separation", type=float, required=True)
    synth.add_argument("--spread", type=float, default=1.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--output", required=True)
    synth.add_argument("--format", choices=("csv", "binary"), default="csv")

    correlate = sub.add_parser("correlate", help="Pearson correlations on metric tables")
    correlate.add_argument("tables", nargs="+", help="metric-table CSV files")
    correlate.add_argument("--targets", required=True, help="comma-separated target columns")
    correlate.add_argument("--against", required=True, help="column to correlate against")
    correlate.add_argument("--summary", action="store_true", help="also average r across tables")
    correlate.add_argument("--output", help="correlation list file to write")
    correlate.add_argument("--format", choices=("json", "csv"), default="json")

    rank = sub.add_parser("rank", help="rank models by a table column")
    rank.add_argument("table")
    rank.add_argument("--by", required=True, help="column to sort by")
    rank.add_argument("--ascending", action="store_true", help="sort ascending (default descending)")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.command == "compute":
        cfg.inputs = [args.input]
        cfg.distance = DistanceSpec.parse(args.distance)
        cfg.output = args.output
        cfg.format = args.format
        cfg.threads = resolve_threads(args.threads)
        cfg.num_classes = args.num_classes
        cfg.drop_misclassified = args.drop_misclassified
    elif args.command == "validate":
        cfg.inputs = [args.input]
        cfg.num_classes = args.num_classes
    elif args.command == "synth":
        cfg.num_classes = args.classes
        cfg.samples_per_class = args.per_class
        cfg.dims = args.dims
        cfg.separation = args.separation
        cfg.spread = args.spread
        cfg.seed = args.seed
        cfg.output = args.output
        cfg.format = args.format
    elif args.command == "correlate":
        cfg.inputs = list(args.tables)
        cfg.targets = [t.strip() for t in args.targets.split(",") if t.strip()]
        cfg.against = args.against
        cfg.summary = args.summary
        cfg.output = args.output
        cfg.format = args.format
    elif args.command == "rank":
        cfg.inputs = [args.table]
        cfg.column = args.by
        cfg.descending = not args.ascending
    return cfg


_COMMANDS = {
    "compute": cmd_compute,
    "validate": cmd_validate,
    "synth": cmd_synth,
    "correlate": cmd_correlate,
    "rank": cmd_rank,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[cfg.command](cfg)
    except (RobyError, OSError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # pragma: no cover - internal failure path
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
