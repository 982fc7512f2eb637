"""File formats: embedding dumps (CSV and binary), metric tables, reports.

Binary embedding layout (all integers little-endian, reals IEEE-754
binary64):

    magic    8 bytes  ASCII "ROBYEMB1"
    version  u16      currently 1
    dims     u32      M
    classes  u32      K
    count    u64      record count
    records  count x (label u32, M x f64); record index = position

CSV embedding layout: header ``index,label,e_0,...,e_{M-1}`` (an optional
``true_label`` column may follow ``label``), UTF-8, decimal-point reals.
Coordinates are written with 17 significant digits so a CSV round trip is
bit-exact and matches the binary loader on the same logical content.
"""

from __future__ import annotations

import csv
import json
import math
import struct
from pathlib import Path
from typing import Sequence

import numpy as np

from .analysis import CANONICAL_COLUMNS, CorrelationResult, ModelMetricsTable, ModelRow
from .errors import (
    BadMagic,
    IoFailure,
    MalformedHeader,
    MissingColumn,
    NonFiniteValue,
    RaggedRow,
    TruncatedFile,
)
from .metrics import DistanceSpec, EmbeddingDataset, MetricReport, pair_labels

MAGIC = b"ROBYEMB1"
VERSION = 1
_HEADER = struct.Struct("<8sHIIQ")

TABLE_HEADER = ("model",) + CANONICAL_COLUMNS


def _f17(x: float) -> str:
    """Render a float with 17 significant digits (lossless for binary64)."""
    return format(float(x), ".17g")


def _default_name(path: str | Path, explicit: str | None) -> str:
    return explicit if explicit is not None else Path(path).stem


# -- embedding CSV -----------------------------------------------------------

def _parse_embedding_header(fields: list[str], path: str | Path) -> tuple[int, bool]:
    """Return (M, has_true_label) or raise MalformedHeader."""
    if len(fields) < 3 or fields[0] != "index" or fields[1] != "label":
        raise MalformedHeader(
            f"{path}: expected header 'index,label[,true_label],e_0,...', got {fields[:3]}..."
        )
    has_true = fields[2] == "true_label"
    coord_names = fields[3:] if has_true else fields[2:]
    expected = [f"e_{i}" for i in range(len(coord_names))]
    if not coord_names or coord_names != expected:
        raise MalformedHeader(
            f"{path}: coordinate columns must be e_0..e_{{M-1}} in order"
        )
    return len(coord_names), has_true


def load_embeddings_csv(
    path: str | Path,
    *,
    num_classes: int | None = None,
    model_name: str | None = None,
    drop_misclassified: bool = False,
) -> EmbeddingDataset:
    """Load a CSV embedding dump.

    K is inferred as max(label) + 1 unless `num_classes` overrides it.
    With `drop_misclassified`, rows whose `true_label` differs from `label`
    are removed before K inference; the file must carry the column.
    """
    indices: list[int] = []
    labels: list[int] = []
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedHeader(f"{path}: empty file") from None
        dims, has_true = _parse_embedding_header(header, path)
        if drop_misclassified and not has_true:
            raise MissingColumn(
                f"{path}: --drop-misclassified needs a 'true_label' column"
            )
        width = len(header)
        for lineno, fields in enumerate(reader, start=2):
            if len(fields) != width:
                raise RaggedRow(
                    f"{path}:{lineno}: expected {width} fields, got {len(fields)}"
                )
            try:
                index = int(fields[0])
                label = int(fields[1])
                true_label = int(fields[2]) if has_true else None
            except ValueError as err:
                raise NonFiniteValue(f"{path}:{lineno}: {err}") from None
            coords = []
            for text in fields[3:] if has_true else fields[2:]:
                try:
                    value = float(text)
                except ValueError:
                    raise NonFiniteValue(
                        f"{path}:{lineno}: {text!r} is not a real number"
                    ) from None
                if not math.isfinite(value):
                    raise NonFiniteValue(
                        f"{path}:{lineno}: non-finite coordinate {text!r}"
                    )
                coords.append(value)
            if drop_misclassified and true_label != label:
                continue
            indices.append(index)
            labels.append(label)
            rows.append(coords)
    vectors = np.array(rows, dtype=np.float64).reshape(len(rows), dims)
    return EmbeddingDataset.from_arrays(
        np.asarray(labels, dtype=np.int64),
        vectors,
        num_classes=num_classes,
        indices=np.asarray(indices, dtype=np.int64),
        model_name=_default_name(path, model_name),
    )


def write_embeddings_csv(ds: EmbeddingDataset, path: str | Path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "label"] + [f"e_{i}" for i in range(ds.dims)])
            for i in range(ds.num_records):
                writer.writerow(
                    [int(ds.indices[i]), int(ds.labels[i])]
                    + [_f17(v) for v in ds.vectors[i]]
                )
    except OSError as err:
        raise IoFailure(f"cannot write {path}: {err}") from err


# -- embedding binary --------------------------------------------------------

def load_embeddings_binary(
    path: str | Path, *, model_name: str | None = None
) -> EmbeddingDataset:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC):
        raise TruncatedFile(f"{path}: shorter than the 8-byte magic")
    if blob[: len(MAGIC)] != MAGIC:
        raise BadMagic(f"{path}: bad magic {blob[:len(MAGIC)]!r}, expected {MAGIC!r}")
    if len(blob) < _HEADER.size:
        raise TruncatedFile(f"{path}: truncated header ({len(blob)} bytes)")
    _, version, dims, num_classes, count = _HEADER.unpack_from(blob)
    if version != VERSION:
        raise BadMagic(f"{path}: unsupported version {version}, expected {VERSION}")
    record = np.dtype([("label", "<u4"), ("vec", "<f8", (dims,))])
    body = blob[_HEADER.size :]
    if len(body) != count * record.itemsize:
        raise TruncatedFile(
            f"{path}: body holds {len(body)} bytes but header declares "
            f"{count} records of {record.itemsize} bytes"
        )
    records = np.frombuffer(body, dtype=record, count=count)
    return EmbeddingDataset(
        dims=int(dims),
        num_classes=int(num_classes),
        indices=np.arange(count, dtype=np.int64),
        labels=records["label"].astype(np.int64),
        vectors=records["vec"].reshape(count, dims),
        model_name=_default_name(path, model_name),
    )


def write_embeddings_binary(ds: EmbeddingDataset, path: str | Path) -> None:
    record = np.dtype([("label", "<u4"), ("vec", "<f8", (ds.dims,))])
    out = np.empty(ds.num_records, dtype=record)
    out["label"] = ds.labels
    out["vec"] = ds.vectors
    try:
        with open(path, "wb") as fh:
            fh.write(
                _HEADER.pack(MAGIC, VERSION, ds.dims, ds.num_classes, ds.num_records)
            )
            fh.write(out.tobytes())
    except OSError as err:
        raise IoFailure(f"cannot write {path}: {err}") from err


def sniff_format(path: str | Path) -> str:
    """'binary' if the file starts with the magic, else 'csv'."""
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    return "binary" if head == MAGIC else "csv"


def load_embeddings(
    path: str | Path,
    *,
    num_classes: int | None = None,
    model_name: str | None = None,
    drop_misclassified: bool = False,
) -> EmbeddingDataset:
    """Dispatch on the sniffed file format."""
    if sniff_format(path) == "binary":
        if drop_misclassified:
            raise MissingColumn(
                f"{path}: --drop-misclassified needs a CSV input with a "
                f"'true_label' column; binary dumps carry none"
            )
        return load_embeddings_binary(path, model_name=model_name)
    return load_embeddings_csv(
        path,
        num_classes=num_classes,
        model_name=model_name,
        drop_misclassified=drop_misclassified,
    )


# -- metric tables -----------------------------------------------------------

def load_metrics_table(
    path: str | Path, *, dataset_name: str | None = None
) -> ModelMetricsTable:
    """Load a per-model metrics CSV with the canonical column header."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedHeader(f"{path}: empty file") from None
        if not header or header[0] != "model":
            raise MalformedHeader(
                f"{path}: first column must be 'model', got {header[:1]}"
            )
        if len(set(header)) != len(header):
            raise MalformedHeader(f"{path}: duplicate column names")
        missing = [c for c in CANONICAL_COLUMNS if c not in header]
        if missing:
            raise MissingColumn(f"{path}: missing column {missing[0]!r}")
        positions = {name: header.index(name) for name in header[1:]}
        rows: list[ModelRow] = []
        for lineno, fields in enumerate(reader, start=2):
            if len(fields) != len(header):
                raise RaggedRow(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(fields)}"
                )
            values = {}
            for name, pos in positions.items():
                try:
                    value = float(fields[pos])
                except ValueError:
                    raise NonFiniteValue(
                        f"{path}:{lineno}: {fields[pos]!r} is not a real number"
                    ) from None
                if not math.isfinite(value):
                    raise NonFiniteValue(
                        f"{path}:{lineno}: non-finite value in column {name!r}"
                    )
                values[name] = value
            rows.append(ModelRow(fields[0], values))
    return ModelMetricsTable(_default_name(path, dataset_name), tuple(rows))


def write_metrics_table(table: ModelMetricsTable, path: str | Path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TABLE_HEADER)
            for row in table.rows:
                writer.writerow(
                    [row.model_name] + [_f17(row.values[c]) for c in CANONICAL_COLUMNS]
                )
    except OSError as err:
        raise IoFailure(f"cannot write {path}: {err}") from err


# -- reports -----------------------------------------------------------------

def _report_json(report: MetricReport) -> str:
    pairs = pair_labels(report.num_classes)

    def pair_array(values: np.ndarray) -> str:
        items = [
            '{"i": %d, "j": %d, "value": %s}' % (i, j, _f17(v))
            for (i, j), v in zip(pairs, values)
        ]
        return "[" + ", ".join(items) + "]"

    lines = [
        "{",
        f'  "model": {json.dumps(report.model_name)},',
        f'  "distance": {json.dumps(report.distance_spec.tag)},',
        f'  "normalization": {json.dumps(report.normalization)},',
        f'  "num_classes": {report.num_classes},',
        f'  "dims": {report.dims},',
        f'  "warning": {json.dumps(report.warning)},',
        f'  "fsa": {_f17(report.fsa)},',
        f'  "fsd": {_f17(report.fsd)},',
        f'  "roby": {_f17(report.roby)},',
        '  "fsa_per_class": [' + ", ".join(_f17(v) for v in report.fsa_per_class) + "],",
        '  "fsd_per_pair": ' + pair_array(report.fsd_per_pair) + ",",
        '  "roby_per_pair": ' + pair_array(report.roby_per_pair),
        "}",
    ]
    return "\n".join(lines) + "\n"


def _report_csv_rows(report: MetricReport) -> list[list[str]]:
    rows = [
        ["field", "i", "j", "value"],
        ["model", "", "", report.model_name],
        ["distance", "", "", report.distance_spec.tag],
        ["normalization", "", "", report.normalization],
        ["num_classes", "", "", str(report.num_classes)],
        ["dims", "", "", str(report.dims)],
        ["warning", "", "", report.warning or ""],
        ["fsa", "", "", _f17(report.fsa)],
        ["fsd", "", "", _f17(report.fsd)],
        ["roby", "", "", _f17(report.roby)],
    ]
    for k, v in enumerate(report.fsa_per_class):
        rows.append(["fsa_class", str(k), "", _f17(v)])
    pairs = pair_labels(report.num_classes)
    for (i, j), v in zip(pairs, report.fsd_per_pair):
        rows.append(["fsd_pair", str(i), str(j), _f17(v)])
    for (i, j), v in zip(pairs, report.roby_per_pair):
        rows.append(["roby_pair", str(i), str(j), _f17(v)])
    return rows


def _correlations_json(results: Sequence[CorrelationResult]) -> str:
    items = [
        "  {"
        + f'"column_x": {json.dumps(c.column_x)}, '
        + f'"column_y": {json.dumps(c.column_y)}, '
        + f'"r": {_f17(c.r)}, "n": {c.n}'
        + "}"
        for c in results
    ]
    return "[\n" + ",\n".join(items) + "\n]\n"


def write_report(
    report: MetricReport | Sequence[CorrelationResult],
    path: str | Path,
    fmt: str = "json",
) -> None:
    """Write a metric report or a correlation list as JSON or CSV.

    Every real number is rendered with 17 significant digits, so parsing
    the file back recovers the exact binary64 values.
    """
    if fmt not in ("json", "csv"):
        raise IoFailure(f"unknown report format {fmt!r} (use 'json' or 'csv')")
    is_report = isinstance(report, MetricReport)
    try:
        if is_report and fmt == "json":
            text = _report_json(report)
        elif is_report:
            text = None
        elif fmt == "json":
            text = _correlations_json(list(report))
        else:
            text = None
        with open(path, "w", encoding="utf-8", newline="") as fh:
            if text is not None:
                fh.write(text)
            elif is_report:
                csv.writer(fh).writerows(_report_csv_rows(report))
            else:
                writer = csv.writer(fh)
                writer.writerow(["column_x", "column_y", "r", "n"])
                for c in report:
                    writer.writerow([c.column_x, c.column_y, _f17(c.r), str(c.n)])
    except OSError as err:
        raise IoFailure(f"cannot write {path}: {err}") from err


def read_report(path: str | Path) -> MetricReport:
    """Parse a JSON metric report back into a MetricReport."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    num_classes = int(data["num_classes"])
    pairs = pair_labels(num_classes)
    got_fsd = [(int(e["i"]), int(e["j"])) for e in data["fsd_per_pair"]]
    got_roby = [(int(e["i"]), int(e["j"])) for e in data["roby_per_pair"]]
    if got_fsd != pairs or got_roby != pairs:
        raise MalformedHeader(f"{path}: pair arrays are not in lexicographic order")
    return MetricReport(
        model_name=str(data["model"]),
        num_classes=num_classes,
        dims=int(data["dims"]),
        distance_spec=DistanceSpec.parse(str(data["distance"])),
        normalization=str(data["normalization"]),
        fsa_per_class=np.array([float(v) for v in data["fsa_per_class"]]),
        fsa=float(data["fsa"]),
        fsd_per_pair=np.array([float(e["value"]) for e in data["fsd_per_pair"]]),
        fsd=float(data["fsd"]),
        roby_per_pair=np.array([float(e["value"]) for e in data["roby_per_pair"]]),
        roby=float(data["roby"]),
        warning=data.get("warning"),
    )
