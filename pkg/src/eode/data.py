"""Dataset container, CSV ingestion and stratified splitting."""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

LABEL_COLUMN = "label"


class DataError(ValueError):
    """Raised for malformed or semantically invalid input data."""


class ParseError(DataError):
    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Samples x features matrix with contiguous integer labels ``0..class_count-1``.

    Subsets produced by :meth:`subset` keep ``class_count`` but may lack some
    classes; only datasets built through :func:`make_dataset` or
    :func:`load_dataset` are checked for full class coverage.
    """

    samples: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    class_count: int
    name: str = ""

    def __post_init__(self):
        X = np.array(self.samples, dtype=np.float64, copy=True)
        y = np.array(self.labels, dtype=np.int64, copy=True)
        if X.ndim != 2:
            raise DataError(f"samples must be 2-D, got shape {X.shape}")
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise DataError(f"labels length {y.shape} does not match {X.shape[0]} rows")
        if X.shape[1] < 1:
            raise DataError("dataset needs at least one feature")
        if len(self.feature_names) != X.shape[1]:
            raise DataError(
                f"{len(self.feature_names)} feature names for {X.shape[1]} columns"
            )
        if not np.all(np.isfinite(X)):
            bad = np.argwhere(~np.isfinite(X))[0]
            raise DataError(f"non-finite value at row {bad[0]}, column {bad[1]}")
        if y.size and (y.min() < 0 or y.max() >= self.class_count):
            raise DataError(f"labels must lie in [0, {self.class_count - 1}]")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "samples", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.class_count)

    def subset(self, rows: Sequence[int]) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            self.samples[rows], self.labels[rows], self.feature_names, self.class_count, self.name
        )


def _check_complete(ds: Dataset) -> Dataset:
    if ds.n < 2:
        raise DataError(f"dataset needs at least 2 samples, got {ds.n}")
    if ds.class_count < 2:
        raise DataError("dataset needs at least 2 classes")
    missing = np.flatnonzero(ds.class_counts() == 0)
    if missing.size:
        raise DataError(f"class ids {missing.tolist()} have no samples")
    return ds


def encode_labels(raw: Sequence) -> tuple[np.ndarray, list]:
    """Map arbitrary labels to 0..c-1 in order of first appearance."""
    mapping: dict = {}
    encoded = np.empty(len(raw), dtype=np.int64)
    for i, value in enumerate(raw):
        encoded[i] = mapping.setdefault(value, len(mapping))
    return encoded, list(mapping)


def make_dataset(samples, labels, feature_names=None, name: str = "") -> Dataset:
    """Build a validated dataset, re-encoding ``labels`` by first appearance."""
    samples = np.asarray(samples, dtype=np.float64)
    encoded, classes = encode_labels(list(np.asarray(labels).tolist()))
    if feature_names is None:
        feature_names = [f"f{j}" for j in range(samples.shape[1] if samples.ndim == 2 else 0)]
    ds = Dataset(samples, encoded, tuple(feature_names), len(classes), name)
    return _check_complete(ds)


def _parse_label(cell: str):
    value = float(cell)
    return int(value) if value.is_integer() else value


def load_dataset(path: str | Path, format: str = "csv") -> Dataset:
    """Read a CSV whose header lists feature names followed by a ``label`` column."""
    if format != "csv":
        raise DataError(f"unsupported format {format!r}")
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such dataset file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file") from None
        header = [h.strip() for h in header]
        if len(header) < 2 or header[-1] != LABEL_COLUMN:
            raise ParseError(f"last header column must be {LABEL_COLUMN!r}", row=1)
        rows, raw_labels = [], []
        for lineno, record in enumerate(reader, start=2):
            if not record or all(not c.strip() for c in record):
                continue
            if len(record) != len(header):
                raise ParseError(
                    f"expected {len(header)} cells, got {len(record)}", row=lineno
                )
            values = []
            for col, cell in enumerate(record[:-1], start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(f"non-numeric cell {cell!r}", lineno, col) from None
            try:
                raw_labels.append(_parse_label(record[-1]))
            except ValueError:
                raise ParseError(
                    f"non-numeric label {record[-1]!r}", lineno, len(record)
                ) from None
            rows.append(values)
    if not rows:
        raise DataError(f"{path} contains no samples")
    X = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(X)):
        r, c = np.argwhere(~np.isfinite(X))[0]
        raise DataError(f"NaN or infinite value at row {r + 2}, column {c + 1}")
    return make_dataset(X, raw_labels, header[:-1], name=path.stem)


def save_dataset(ds: Dataset, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*ds.feature_names, LABEL_COLUMN])
        for row, label in zip(ds.samples, ds.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])


def apply_mask(ds: Dataset, mask) -> Dataset:
    """Keep the columns whose mask bit is set, in their original order."""
    mask = np.asarray(mask).astype(bool)
    if mask.shape != (ds.dim,):
        raise DataError(f"mask length {mask.shape} does not match dim {ds.dim}")
    if not mask.any():
        raise DataError("mask selects no features")
    names = tuple(n for n, keep in zip(ds.feature_names, mask) if keep)
    return Dataset(ds.samples[:, mask], ds.labels, names, ds.class_count, ds.name)


@dataclass(frozen=True, eq=False)
class SplitPair:
    train: Dataset
    test: Dataset
    seed: int
    train_rows: np.ndarray
    test_rows: np.ndarray


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split(ds: Dataset, test_fraction: float, seed: int) -> SplitPair:
    """Per class, ``round(test_fraction * size)`` rows (clamped to [1, size-1]) go to test."""
    if not 0.0 < test_fraction < 1.0:
        raise DataError(f"test_fraction must be in (0, 1), got {test_fraction}")
    counts = ds.class_counts()
    if np.any((counts > 0) & (counts < 2)):
        small = np.flatnonzero((counts > 0) & (counts < 2)).tolist()
        raise DataError(f"classes {small} have fewer than 2 samples; cannot split")
    rng = np.random.default_rng(seed)
    test_rows = []
    for c in range(ds.class_count):
        rows = np.flatnonzero(ds.labels == c)
        if rows.size == 0:
            continue
        n_test = min(max(_round_half_up(test_fraction * rows.size), 1), rows.size - 1)
        test_rows.extend(rng.permutation(rows)[:n_test].tolist())
    test_rows = np.sort(np.array(test_rows, dtype=np.int64))
    train_rows = np.setdiff1d(np.arange(ds.n), test_rows)
    return SplitPair(ds.subset(train_rows), ds.subset(test_rows), seed, train_rows, test_rows)


@dataclass(frozen=True)
class FoldSet:
    folds: tuple[tuple[int, ...], ...]
    seed: int
    warnings: tuple[str, ...] = field(default=())

    @property
    def k(self) -> int:
        return len(self.folds)

    def train_test(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        test = np.array(self.folds[i], dtype=np.int64)
        train = np.array(
            sorted(r for j, f in enumerate(self.folds) if j != i for r in f), dtype=np.int64
        )
        return train, test


def stratified_kfold_labels(labels, class_count: int, k: int, seed: int) -> FoldSet:
    labels = np.asarray(labels)
    if k < 2:
        raise DataError(f"k must be at least 2, got {k}")
    if labels.size < k:
        raise DataError(f"cannot build {k} folds from {labels.size} rows")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    notes = []
    start = 0
    for c in range(class_count):
        rows = np.flatnonzero(labels == c)
        if rows.size == 0:
            continue
        if rows.size < k:
            msg = f"class {c} has {rows.size} samples, fewer than k={k}; dealt round-robin"
            notes.append(msg)
            warnings.warn(msg, stacklevel=3)
        # Continue dealing from where the previous class stopped so totals stay balanced.
        for offset, row in enumerate(rng.permutation(rows)):
            folds[(start + offset) % k].append(int(row))
        start = (start + rows.size) % k
    return FoldSet(tuple(tuple(sorted(f)) for f in folds), seed, tuple(notes))


def stratified_kfold(ds: Dataset, k: int, seed: int) -> FoldSet:
    return stratified_kfold_labels(ds.labels, ds.class_count, k, seed)
