"""Tabular dataset loading, stratified splitting and standardization.

Three named CSV schemas (iris, diabetes, heart) cover the bundled benchmark
fixtures; the generic schema accepts any headered CSV whose last column is
the class label. All features are stored as reals; categorical columns are
kept as ordinal codes, so every downstream split is a threshold split.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DegenerateSplit, EmptyDataset, MalformedCsv, UnknownSchema

MISSING_TOKENS = {"", "?"}

#: Standard deviations below this floor are clamped so constant features
#: transform to zeros instead of dividing by zero.
STD_FLOOR = 1e-8


@dataclass(frozen=True)
class FeatureMeta:
    """Descriptive metadata for one feature column.

    ``kind`` affects rendering only; splitting always thresholds raw values.
    """

    name: str
    kind: str = "numeric"  # "numeric" | "categorical"
    units: str | None = None


@dataclass(frozen=True)
class Dataset:
    """An immutable instance matrix with per-feature metadata and labels."""

    features: list[FeatureMeta]
    X: np.ndarray  # (n_instances, n_features) float64
    y: np.ndarray  # (n_instances,) int class indices
    class_names: list[str]
    name: str = "dataset"

    def __post_init__(self) -> None:
        if self.X.shape[0] == 0:
            raise EmptyDataset(f"{self.name}: no instances")
        if self.X.shape[0] != self.y.shape[0]:
            raise MalformedCsv(f"{self.name}: X has {self.X.shape[0]} rows but y has {self.y.shape[0]}")
        if self.y.size and int(self.y.max()) >= len(self.class_names):
            raise MalformedCsv(f"{self.name}: class index {int(self.y.max())} out of range")
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise MalformedCsv(f"{self.name}: duplicate feature names")
        self.X.setflags(write=False)
        self.y.setflags(write=False)

    @property
    def n_instances(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def feature_names(self) -> list[str]:
        return [f.name for f in self.features]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y, minlength=self.n_classes)

    def subset(self, indices: np.ndarray, name: str | None = None) -> "Dataset":
        return Dataset(
            features=self.features,
            X=self.X[indices].copy(),
            y=self.y[indices].copy(),
            class_names=self.class_names,
            name=name or self.name,
        )


@dataclass(frozen=True)
class Scaler:
    """Per-feature standardizer fitted on a training split only."""

    mean: np.ndarray
    std: np.ndarray  # floored at STD_FLOOR

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.mean) / self.std

    def inverse_transform(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=float) * self.std + self.mean


@dataclass(frozen=True)
class _Schema:
    columns: list[str] | None  # None: take columns from the header (generic)
    feature_meta: list[FeatureMeta] | None
    class_names: list[str] | None
    label_map: dict[str, int] | None = None
    binarize_label_above: float | None = None  # heart: codes 1-4 collapse to 1


_IRIS_FEATURES = [
    FeatureMeta("sepal length (cm)", "numeric", "cm"),
    FeatureMeta("sepal width (cm)", "numeric", "cm"),
    FeatureMeta("petal length (cm)", "numeric", "cm"),
    FeatureMeta("petal width (cm)", "numeric", "cm"),
]

_DIABETES_FEATURES = [
    FeatureMeta("pregnancies", "numeric"),
    FeatureMeta("glucose", "numeric", "mg/dl"),
    FeatureMeta("blood pressure", "numeric", "mm Hg"),
    FeatureMeta("skin thickness", "numeric", "mm"),
    FeatureMeta("insulin", "numeric", "mu U/ml"),
    FeatureMeta("bmi", "numeric", "kg/m^2"),
    FeatureMeta("diabetes pedigree", "numeric"),
    FeatureMeta("age", "numeric", "years"),
]

_HEART_FEATURES = [
    FeatureMeta("age", "numeric", "years"),
    FeatureMeta("sex", "categorical"),
    FeatureMeta("chest pain type", "categorical"),
    FeatureMeta("resting blood pressure", "numeric", "mm Hg"),
    FeatureMeta("serum cholesterol", "numeric", "mg/dl"),
    FeatureMeta("fasting blood sugar > 120", "categorical"),
    FeatureMeta("resting ecg", "categorical"),
    FeatureMeta("max heart rate", "numeric", "bpm"),
    FeatureMeta("exercise induced angina", "categorical"),
    FeatureMeta("st depression", "numeric"),
    FeatureMeta("st slope", "categorical"),
    FeatureMeta("major vessels colored", "categorical"),
    FeatureMeta("thalassemia", "categorical"),
]

_SCHEMAS: dict[str, _Schema] = {
    "iris": _Schema(
        columns=[f.name for f in _IRIS_FEATURES] + ["species"],
        feature_meta=_IRIS_FEATURES,
        class_names=["setosa", "versicolor", "virginica"],
        label_map={"setosa": 0, "versicolor": 1, "virginica": 2},
    ),
    "diabetes": _Schema(
        columns=[f.name for f in _DIABETES_FEATURES] + ["outcome"],
        feature_meta=_DIABETES_FEATURES,
        class_names=["negative", "positive"],
        label_map={"0": 0, "1": 1},
    ),
    "heart": _Schema(
        columns=[f.name for f in _HEART_FEATURES] + ["num"],
        feature_meta=_HEART_FEATURES,
        class_names=["no presence", "presence"],
        binarize_label_above=0.5,
    ),
}

BUILTIN_DATASETS = tuple(_SCHEMAS)


def fixture_path(name: str) -> Path:
    """Path of a bundled benchmark CSV (iris, diabetes or heart)."""
    if name not in _SCHEMAS:
        raise UnknownSchema(f"no bundled fixture named {name!r}")
    return Path(str(resources.files("foiltree").joinpath(f"fixtures/{name}.csv")))


def load_builtin(name: str) -> Dataset:
    return load_csv(fixture_path(name), schema=name)


def load_csv(path: str | Path, schema: str = "generic") -> Dataset:
    """Load a headered CSV into a :class:`Dataset`.

    Rows containing missing values (empty cell or ``?``) are dropped.
    The named schemas validate the header and fix class name order; the
    generic schema treats the last column as the label.
    """
    if schema != "generic" and schema not in _SCHEMAS:
        raise UnknownSchema(f"unknown schema {schema!r}")
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        rows = [[c.strip() for c in row] for row in reader if row]

    if schema == "generic":
        if len(header) < 2:
            raise MalformedCsv(f"{path}: need at least one feature column and a label column")
        meta = [FeatureMeta(name) for name in header[:-1]]
        return _build(path, header, rows, meta, class_names=None, label_map=None, binarize=None, name=path.stem)

    sch = _SCHEMAS[schema]
    if header != sch.columns:
        raise MalformedCsv(f"{path}: header does not match the {schema!r} schema: {header}")
    return _build(
        path, header, rows, list(sch.feature_meta), sch.class_names, sch.label_map, sch.binarize_label_above, schema
    )


def _build(path, header, rows, meta, class_names, label_map, binarize, name) -> Dataset:
    n_cols = len(header)
    X_rows: list[list[float]] = []
    labels: list[str] = []
    for lineno, row in enumerate(rows, start=2):
        if len(row) != n_cols:
            raise MalformedCsv(f"{path}:{lineno}: expected {n_cols} cells, got {len(row)}")
        if any(cell in MISSING_TOKENS for cell in row):
            continue  # complete-case deletion
        values = []
        for col, cell in zip(header[:-1], row[:-1]):
            try:
                values.append(float(cell))
            except ValueError:
                raise MalformedCsv(f"{path}:{lineno}: non-numeric value {cell!r} in column {col!r}") from None
        X_rows.append(values)
        labels.append(row[-1])
    if not X_rows:
        raise EmptyDataset(f"{path}: no complete rows")

    if binarize is not None:
        y = np.array([1 if _as_float(path, lab) > binarize else 0 for lab in labels], dtype=np.intp)
    elif label_map is not None:
        try:
            y = np.array([label_map[lab] for lab in labels], dtype=np.intp)
        except KeyError as exc:
            raise MalformedCsv(f"{path}: unknown class label {exc.args[0]!r}") from None
    else:
        class_names = _infer_class_names(labels)
        index = {c: i for i, c in enumerate(class_names)}
        y = np.array([index[lab] for lab in labels], dtype=np.intp)

    return Dataset(features=meta, X=np.array(X_rows, dtype=float), y=y, class_names=list(class_names), name=name)


def _as_float(path, cell: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise MalformedCsv(f"{path}: non-numeric class label {cell!r}") from None


def _infer_class_names(labels: list[str]) -> list[str]:
    uniq = sorted(set(labels))
    try:
        uniq.sort(key=lambda s: float(s))
    except ValueError:
        pass  # non-numeric labels stay lexicographic
    return uniq


def split(d: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Stratified train/test split, deterministic under ``seed``.

    Each class contributes ``round(test_fraction * n_c)`` test instances,
    clamped so both splits keep at least one instance of every class.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    counts = d.class_counts()
    if (counts < 2).any():
        bad = int(np.argmin(counts))
        raise DegenerateSplit(f"class {d.class_names[bad]!r} has {int(counts[bad])} instance(s); cannot stratify")
    test_idx: list[np.ndarray] = []
    train_idx: list[np.ndarray] = []
    for c in range(d.n_classes):
        members = np.flatnonzero(d.y == c)
        n_test = int(round(test_fraction * members.size))
        n_test = min(max(n_test, 1), members.size - 1)
        perm = rng.permutation(members)
        test_idx.append(perm[:n_test])
        train_idx.append(perm[n_test:])
    train = np.sort(np.concatenate(train_idx))
    test = np.sort(np.concatenate(test_idx))
    return d.subset(train, f"{d.name}-train"), d.subset(test, f"{d.name}-test")


def fit_scaler(train: Dataset) -> Scaler:
    """Fit a per-feature standardizer on the training split."""
    mean = train.X.mean(axis=0)
    std = train.X.std(axis=0)
    return Scaler(mean=mean, std=np.maximum(std, STD_FLOOR))
