"""Tabular data loading, binary class selection and pattern reflection.

A :class:`Dataset` holds raw feature rows with opaque string labels.  Training
works on a :class:`ReflectedDataset`, where every sample is augmented with a
leading constant and class-2 samples are negated, so that a weight vector
``v = (w0, w)`` classifies sample ``i`` correctly exactly when ``v @ y_i > 0``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

IRIS_LABEL_COLUMN = "species"
IRIS_FEATURES = ("sepal_length", "sepal_width", "petal_length", "petal_width")


class DatasetError(ValueError):
    """Raised for malformed input data or an invalid class/feature selection."""


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """Feature rows with one label per row.

    ``class_labels`` is empty for a plain loaded table.  After
    :func:`select_binary` it holds ``(class_a, class_b)``; ``class_a`` is
    class index 1 (the positive side of the discriminant).
    """

    samples: np.ndarray
    labels: tuple[str, ...]
    feature_names: tuple[str, ...]
    class_labels: tuple[str, ...] = ()

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2:
            raise DatasetError(f"samples must be 2-D, got shape {samples.shape}")
        n, p = samples.shape
        if p < 1:
            raise DatasetError("samples need at least one feature")
        if len(self.labels) != n:
            raise DatasetError(f"{len(self.labels)} labels for {n} samples")
        if len(self.feature_names) != p:
            raise DatasetError(f"{len(self.feature_names)} feature names for {p} features")
        if not np.all(np.isfinite(samples)):
            raise DatasetError("feature values must be finite")
        object.__setattr__(self, "samples", _frozen(samples))
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "class_labels", tuple(self.class_labels))

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def n_features(self) -> int:
        return self.samples.shape[1]

    def class_indices(self) -> np.ndarray:
        """Class index (1 or 2) per row; requires a binary selection."""
        if len(self.class_labels) != 2:
            raise DatasetError("dataset is not a binary selection (use select_binary)")
        a, b = self.class_labels
        out = np.empty(self.n_samples, dtype=int)
        for i, lab in enumerate(self.labels):
            if lab == a:
                out[i] = 1
            elif lab == b:
                out[i] = 2
            else:
                raise DatasetError(f"row {i} has label {lab!r} outside the class pair")
        return out


@dataclass(frozen=True)
class ReflectedDataset:
    """Augmented, sign-reflected samples.

    Row ``i`` of ``reflected`` is ``(1, x_i)`` for class 1 and ``(-1, -x_i)``
    for class 2.  ``source`` is the dataset the rows came from.
    """

    reflected: np.ndarray
    class_of: np.ndarray
    source: Dataset = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "reflected", _frozen(self.reflected))
        object.__setattr__(self, "class_of", _frozen(self.class_of, dtype=int))

    @property
    def n_samples(self) -> int:
        return self.reflected.shape[0]

    @property
    def dim(self) -> int:
        return self.reflected.shape[1]


def load_csv(path, label_column: str = "label") -> Dataset:
    """Read a headed CSV with one label column and numeric feature columns."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            return _parse_rows(csv.reader(fh), label_column, str(path))
    except FileNotFoundError:
        raise FileNotFoundError(f"data file not found: {path}") from None


def _parse_rows(reader, label_column: str, source: str) -> Dataset:
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DatasetError(f"{source}: empty file, expected a header row") from None
    if label_column not in header:
        raise DatasetError(f"{source}: label column {label_column!r} not in header {header}")
    li = header.index(label_column)
    feature_cols = [j for j in range(len(header)) if j != li]
    samples, labels = [], []
    for rowno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DatasetError(f"{source}: row {rowno} has {len(row)} fields, expected {len(header)}")
        vals = []
        for j in feature_cols:
            cell = row[j].strip()
            try:
                x = float(cell)
            except ValueError:
                raise DatasetError(
                    f"{source}: row {rowno}, column {j} ({header[j]!r}): cannot parse {cell!r} as a number"
                ) from None
            if not math.isfinite(x):
                raise DatasetError(f"{source}: row {rowno}, column {j} ({header[j]!r}): non-finite value")
            vals.append(x)
        samples.append(vals)
        labels.append(row[li].strip())
    if not samples:
        raise DatasetError(f"{source}: no data rows")
    return Dataset(np.array(samples, dtype=float), tuple(labels), tuple(header[j] for j in feature_cols))


def write_csv(ds: Dataset, path, label_column: str = "label") -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*ds.feature_names, label_column])
        for x, lab in zip(ds.samples, ds.labels):
            w.writerow([*(repr(float(v)) for v in x), lab])


def load_iris() -> Dataset:
    """The 150-row Fisher Iris table bundled with the package."""
    src = resources.files("fclda").joinpath("data/iris.csv")
    with src.open("r", encoding="utf-8", newline="") as fh:
        return _parse_rows(csv.reader(fh), IRIS_LABEL_COLUMN, "iris.csv")


def select_binary(ds: Dataset, class_a: str, class_b: str, features: Sequence[str] | None = None) -> Dataset:
    """Restrict to two labels and a subset of feature columns, keeping row order.

    ``class_a`` becomes class 1, ``class_b`` class 2.
    """
    if class_a == class_b:
        raise DatasetError("the two classes must differ")
    present = set(ds.labels)
    for lab in (class_a, class_b):
        if lab not in present:
            raise DatasetError(f"unknown label {lab!r}; available: {sorted(present)}")
    if features is None:
        features = ds.feature_names
    cols = []
    for name in features:
        if name not in ds.feature_names:
            raise DatasetError(f"unknown feature {name!r}; available: {list(ds.feature_names)}")
        cols.append(ds.feature_names.index(name))
    if not cols:
        raise DatasetError("no features selected")
    rows = [i for i, lab in enumerate(ds.labels) if lab in (class_a, class_b)]
    return Dataset(
        ds.samples[np.ix_(rows, cols)],
        tuple(ds.labels[i] for i in rows),
        tuple(features),
        (class_a, class_b),
    )


def augment_reflect(ds: Dataset) -> ReflectedDataset:
    cls = ds.class_indices()
    counts = {k: int(np.sum(cls == k)) for k in (1, 2)}
    if counts[1] == 0 or counts[2] == 0:
        raise DatasetError(f"need both classes present, got counts {counts}")
    aug = np.hstack([np.ones((ds.n_samples, 1)), ds.samples])
    sign = np.where(cls == 1, 1.0, -1.0)
    return ReflectedDataset(aug * sign[:, None], cls, ds)


def synthetic_two_gaussians(
    n_per_class: int,
    mean1: Sequence[float],
    mean2: Sequence[float],
    stddev: float,
    seed: int,
) -> Dataset:
    """Two isotropic Gaussian clouds labelled ``class1`` / ``class2``.

    Rows are ordered class 1 first.  Output is bit-identical for a fixed seed.
    """
    if n_per_class < 1:
        raise DatasetError("n_per_class must be at least 1")
    if not stddev > 0:
        raise DatasetError("stddev must be positive")
    m1 = np.asarray(mean1, dtype=float)
    m2 = np.asarray(mean2, dtype=float)
    if m1.shape != m2.shape or m1.ndim != 1:
        raise DatasetError("means must be vectors of equal length")
    rng = np.random.default_rng(seed)
    x1 = m1 + stddev * rng.standard_normal((n_per_class, m1.size))
    x2 = m2 + stddev * rng.standard_normal((n_per_class, m2.size))
    labels = ("class1",) * n_per_class + ("class2",) * n_per_class
    names = tuple(f"x{j + 1}" for j in range(m1.size))
    return Dataset(np.vstack([x1, x2]), labels, names, ("class1", "class2"))
