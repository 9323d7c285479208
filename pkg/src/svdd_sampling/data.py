"""Dataset container, labels, index sets, and CSV/report input-output.

Observations live in an immutable N x M float matrix. Labels are the two
strings ``"in"`` / ``"out"``. Index sets are 1-based everywhere in the public
API (files, CLI, reports); zero-based views exist only for array indexing.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, is_dataclass, asdict
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .errors import DataFormatError

IN = "in"
OUT = "out"

#: Column order of run reports; the six metric columns follow the benchmark
#: table schema (t_samp, t_train, t_inf, size, ratio, mcc).
REPORT_FIELDS = (
    "dataset",
    "method",
    "t_samp",
    "t_train",
    "t_inf",
    "size",
    "ratio",
    "mcc",
    "gamma",
    "p_out",
    "seed",
)


@dataclass(frozen=True, eq=False)
class Dataset:
    """N x M matrix of real-valued observations.

    Invariants: N >= 1, M >= 1, all entries finite. The backing array is
    read-only, so a Dataset can be shared freely across workers.
    """

    X: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"observations must form an N x M matrix with N,M >= 1, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            bad = np.argwhere(~np.isfinite(X))[0]
            raise ValueError(f"non-finite value at observation {bad[0] + 1}, feature {bad[1] + 1}")
        X = X.copy()
        X.setflags(write=False)
        object.__setattr__(self, "X", X)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def m(self) -> int:
        return self.X.shape[1]

    def restrict(self, subset: "IndexSet") -> "Dataset":
        """Rows named by `subset` (1-based), in ascending index order."""
        subset.validate_max(self.n)
        if len(subset) == 0:
            raise ValueError("cannot restrict a dataset to an empty index set")
        return Dataset(self.X[subset.zero_based])


@dataclass(frozen=True, eq=False)
class LabelVector:
    """Sequence of ``"in"`` / ``"out"`` labels; pairs with a Dataset of equal length."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=object)
        if vals.ndim != 1:
            raise ValueError("labels must be a flat sequence")
        for v in vals:
            if v not in (IN, OUT):
                raise ValueError(f"label {v!r} is not '{IN}' or '{OUT}'")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    def is_outlier(self) -> np.ndarray:
        return np.asarray([v == OUT for v in self.values], dtype=bool)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelVector) and np.array_equal(self.values, other.values)

    def __iter__(self) -> Iterator[str]:
        return iter(self.values)


@dataclass(frozen=True, eq=False)
class IndexSet:
    """Ordered set of distinct 1-based observation indices.

    May be empty (the outlier set of an unfiltered dataset is). Upper-bound
    validation happens where the paired dataset size is known.
    """

    indices: np.ndarray

    def __post_init__(self):
        idx = np.unique(np.asarray(self.indices, dtype=np.int64))
        if idx.size and idx[0] < 1:
            raise ValueError(f"indices are 1-based; got {idx[0]}")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(np.arange(1, n + 1))

    @classmethod
    def from_zero_based(cls, idx: Iterable[int]) -> "IndexSet":
        return cls(np.asarray(list(idx), dtype=np.int64) + 1)

    @property
    def zero_based(self) -> np.ndarray:
        return self.indices - 1

    def validate_max(self, n: int) -> None:
        if len(self) and self.indices[-1] > n:
            raise ValueError(f"index {self.indices[-1]} exceeds dataset size {n}")

    def complement(self, n: int) -> "IndexSet":
        mask = np.ones(n + 1, dtype=bool)
        mask[0] = False
        mask[self.indices] = False
        return IndexSet(np.flatnonzero(mask))

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(np.concatenate([self.indices, other.indices]))

    def issubset(self, other: "IndexSet") -> bool:
        return bool(np.isin(self.indices, other.indices).all())

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self) -> Iterator[int]:
        return (int(i) for i in self.indices)

    def __contains__(self, i) -> bool:
        pos = np.searchsorted(self.indices, i)
        return pos < len(self) and self.indices[pos] == i

    def __eq__(self, other) -> bool:
        return isinstance(other, IndexSet) and np.array_equal(self.indices, other.indices)

    def __repr__(self) -> str:
        return f"IndexSet({self.indices.tolist()})"


# ---------------------------------------------------------------------------
# CSV ingestion / emission


def _parse_cell(cell: str, file_row: int, file_col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise DataFormatError(
            f"row {file_row}, column {file_col}: could not parse {cell.strip()!r} as a real number"
        ) from None
    if not math.isfinite(value):
        raise DataFormatError(f"row {file_row}, column {file_col}: non-finite value {cell.strip()!r}")
    return value


def _is_numeric_row(row: Sequence[str]) -> bool:
    for cell in row:
        try:
            float(cell)
        except ValueError:
            return False
    return True


def load_csv(
    path: Union[str, Path],
    label_column: Optional[str] = None,
    label_map: Optional[dict] = None,
) -> tuple[Dataset, Optional[LabelVector]]:
    """Load a CSV file of observations, optionally with a label column.

    The file may carry a header row; it must when `label_column` names the
    column holding labels. `label_map` declares how raw label values map to
    ``"in"`` / ``"out"`` (e.g. ``{"yes": "out", "no": "in"}``). It may be
    omitted only when the column already holds literal ``in`` / ``out``.

    Row order of the file is preserved: feature row k becomes observation k.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise DataFormatError(f"{path}: file contains no data")

    label_idx: Optional[int] = None
    if label_column is not None:
        header = [c.strip() for c in rows[0]]
        if label_column not in header:
            raise DataFormatError(f"{path}: label column {label_column!r} not found in header {header}")
        label_idx = header.index(label_column)
        data_rows, first_file_row = rows[1:], 2
    elif _is_numeric_row(rows[0]):
        data_rows, first_file_row = rows, 1
    else:
        data_rows, first_file_row = rows[1:], 2

    if not data_rows:
        raise DataFormatError(f"{path}: no observation rows")
    width = len(rows[0])
    if width - (1 if label_idx is not None else 0) < 1:
        raise DataFormatError(f"{path}: no feature columns")

    features = []
    raw_labels = []
    for k, row in enumerate(data_rows):
        file_row = first_file_row + k
        if len(row) != width:
            raise DataFormatError(f"{path}: row {file_row} has {len(row)} cells, expected {width}")
        feat = []
        for j, cell in enumerate(row):
            if j == label_idx:
                raw_labels.append(cell.strip())
            else:
                feat.append(_parse_cell(cell, file_row, j + 1))
        features.append(feat)

    dataset = Dataset(np.asarray(features, dtype=np.float64))
    if label_idx is None:
        return dataset, None

    distinct = sorted(set(raw_labels))
    if len(distinct) > 2:
        raise DataFormatError(f"{path}: label column has {len(distinct)} distinct values, expected at most 2: {distinct}")
    if label_map is None:
        if not set(distinct) <= {IN, OUT}:
            raise DataFormatError(
                f"{path}: label values {distinct} need an explicit mapping to '{IN}'/'{OUT}'"
            )
        label_map = {IN: IN, OUT: OUT}
    for value in distinct:
        if value not in label_map:
            raise DataFormatError(f"{path}: label value {value!r} missing from the label mapping")
        if label_map[value] not in (IN, OUT):
            raise DataFormatError(f"{path}: mapping target {label_map[value]!r} is not '{IN}' or '{OUT}'")
    labels = LabelVector(np.asarray([label_map[v] for v in raw_labels], dtype=object))
    return dataset, labels


def format_real(x: float) -> str:
    """Render a real with 6 significant digits, always keeping a decimal marker."""
    s = f"{float(x):.6g}"
    if "." not in s and "e" not in s:
        s += ".0"
    return s


def write_csv(
    dataset: Dataset,
    path: Union[str, Path],
    labels: Optional[LabelVector] = None,
) -> None:
    """Write observations to CSV. With labels, a header ``f1..fM,label`` is emitted."""
    if labels is not None and labels.n != dataset.n:
        raise ValueError(f"{labels.n} labels for {dataset.n} observations")
    lines = []
    if labels is not None:
        lines.append(",".join([f"f{j + 1}" for j in range(dataset.m)] + ["label"]))
    for i in range(dataset.n):
        cells = [format_real(v) for v in dataset.X[i]]
        if labels is not None:
            cells.append(str(labels.values[i]))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Run reports


def _report_dict(report) -> dict:
    if is_dataclass(report) and not isinstance(report, type):
        rec = asdict(report)
    else:
        rec = dict(report)
    missing = [k for k in REPORT_FIELDS if k not in rec]
    if missing:
        raise ValueError(f"report is missing fields {missing}")
    return rec


def _json_value(key: str, value):
    if value is None:
        return None
    if key in ("size", "seed"):
        return int(value)
    if key in ("dataset", "method"):
        return str(value)
    # quantize reals to 6 significant digits so serialization is bit-stable
    return float(f"{float(value):.6g}")


def _csv_value(key: str, value) -> str:
    if value is None:
        return ""
    if key in ("size", "seed"):
        return str(int(value))
    if key in ("dataset", "method"):
        return str(value)
    return format_real(value)


def write_report(report, path: Union[str, Path], format: str = "json") -> None:
    """Serialize one run report (or a sequence of them) to `path`.

    Output is byte-stable for identical input: fixed key order, reals at
    6 significant digits. JSON holds a flat object per run (an array when a
    sequence is given); CSV holds a header row plus one row per run.
    """
    reports = report if isinstance(report, (list, tuple)) else [report]
    records = [_report_dict(r) for r in reports]
    path = Path(path)
    if format == "json":
        objs = [{k: _json_value(k, rec[k]) for k in REPORT_FIELDS} for rec in records]
        payload = objs[0] if not isinstance(report, (list, tuple)) else objs
        path.write_text(json.dumps(payload, indent=2) + "\n")
    elif format == "csv":
        lines = [",".join(REPORT_FIELDS)]
        for rec in records:
            lines.append(",".join(_csv_value(k, rec[k]) for k in REPORT_FIELDS))
        path.write_text("\n".join(lines) + "\n")
    else:
        raise ValueError(f"unknown report format {format!r} (expected 'csv' or 'json')")
