"""CSV ingestion, min-max scaling, fold planning, config files and model persistence.

Feature matrices here are observation-major (``m x n``, one row per observation).
"""
from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ConfigError, DataError, NumericalError, ShapeError
from .model import FcmModel, Variant

MODEL_FORMAT = "fcm-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class RawTable:
    """Unscaled features with integer-encoded labels."""

    X: np.ndarray
    y: np.ndarray
    label_names: Tuple[str, ...]
    feature_names: Tuple[str, ...] = ()

    def subset(self, idx) -> "RawTable":
        return RawTable(self.X[idx], self.y[idx], self.label_names, self.feature_names)


@dataclass(frozen=True)
class MinMaxScaler:
    mins: np.ndarray
    maxs: np.ndarray

    def transform(self, X) -> np.ndarray:
        return minmax_apply(self, X)


@dataclass(frozen=True)
class LabeledDataset:
    """Features scaled into ``[0, 1]`` plus labels ``0..k-1``.

    The labels double as the cluster assignment when scoring compactness.
    """

    X: np.ndarray
    y: np.ndarray
    label_names: Tuple[str, ...]
    scaler: Optional[MinMaxScaler] = None

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int64).reshape(-1)
        if X.ndim != 2 or X.shape[0] != y.size:
            raise ShapeError(f"{X.shape} features for {y.size} labels")
        if X.size and (X.min() < 0 or X.max() > 1):
            raise DataError("features must be scaled into [0, 1]")
        k = len(self.label_names)
        if y.size and (y.min() < 0 or y.max() >= k):
            raise DataError(f"labels must lie in 0..{k - 1}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "label_names", tuple(str(s) for s in self.label_names))

    @property
    def k(self) -> int:
        return len(self.label_names)


def load_csv(path, label_column: int = -1) -> RawTable:
    """Read a header + comma-separated numeric table.

    The label column (default: last) may hold arbitrary strings; labels are
    numbered in order of first appearance.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    if not body:
        raise DataError(f"{path}: no data rows")
    width = len(header)
    col = label_column if label_column >= 0 else width + label_column
    if not 0 <= col < width:
        raise DataError(f"{path}: label column {label_column} not present ({width} columns)")

    codes: Dict[str, int] = {}
    X = np.empty((len(body), width - 1))
    y = np.empty(len(body), dtype=np.int64)
    for i, row in enumerate(body, start=2):
        if len(row) != width:
            raise DataError(f"{path}:{i}: expected {width} columns, got {len(row)}")
        label = row[col].strip()
        y[i - 2] = codes.setdefault(label, len(codes))
        for j, cell in enumerate(c for c_idx, c in enumerate(row) if c_idx != col):
            try:
                X[i - 2, j] = float(cell)
            except ValueError:
                name = header[j if j < col else j + 1]
                raise DataError(f"{path}:{i}: non-numeric value {cell!r} in column {name!r}") from None
    if not np.all(np.isfinite(X)):
        raise DataError(f"{path}: non-finite feature values")
    features = tuple(h for c, h in enumerate(header) if c != col)
    return RawTable(X, y, tuple(codes), features)


def read_features(path, n: int) -> np.ndarray:
    """Read a header + numeric CSV for prediction; every column is a feature."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    if len(rows) < 2:
        raise DataError(f"{path}: no data rows")
    body = rows[1:]
    if len(rows[0]) != n:
        raise ShapeError(f"{path}: model expects n={n} feature columns, got {len(rows[0])}")
    try:
        X = np.array([[float(c) for c in row] for row in body])
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    if X.shape[1] != n:
        raise ShapeError(f"{path}: model expects n={n} feature columns, got {X.shape[1]}")
    return X


def minmax_fit(X_train) -> MinMaxScaler:
    X = np.asarray(X_train, dtype=np.float64)
    return MinMaxScaler(X.min(axis=0), X.max(axis=0))


def minmax_apply(scaler: MinMaxScaler, X) -> np.ndarray:
    """Scale into ``[0, 1]``; constant features map to 0 and unseen extremes are clamped."""
    X = np.asarray(X, dtype=np.float64)
    span = scaler.maxs - scaler.mins
    safe = np.where(span > 0, span, 1.0)
    out = np.where(span > 0, (X - scaler.mins) / safe, 0.0)
    return np.clip(out, 0.0, 1.0)


def scale_split(table: RawTable, train_idx, test_idx) -> Tuple[LabeledDataset, LabeledDataset]:
    """Fit the scaler on the training rows only and apply it to both splits."""
    scaler = minmax_fit(table.X[train_idx])
    train = LabeledDataset(minmax_apply(scaler, table.X[train_idx]), table.y[train_idx],
                           table.label_names, scaler)
    test = LabeledDataset(minmax_apply(scaler, table.X[test_idx]), table.y[test_idx],
                          table.label_names, scaler)
    return train, test


def scale_all(table: RawTable) -> LabeledDataset:
    scaler = minmax_fit(table.X)
    return LabeledDataset(minmax_apply(scaler, table.X), table.y, table.label_names, scaler)


@dataclass(frozen=True)
class FoldPlan:
    folds: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    seed: int
    stratified: bool

    def __iter__(self):
        return iter(self.folds)

    def __len__(self):
        return len(self.folds)


def kfold_split(m: int, k_folds: int, seed: int, labels=None) -> FoldPlan:
    """Seeded k-fold partition, stratified by ``labels`` when every class has ``k_folds`` members.

    Stratification deals each class's shuffled members round-robin across
    folds, continuing the rotation from where the previous class stopped, so
    fold sizes differ by at most one and per-class counts by at most one.
    """
    if k_folds < 2:
        raise ValueError(f"need at least 2 folds, got {k_folds}")
    if k_folds > m:
        raise ValueError(f"cannot split {m} observations into {k_folds} folds")
    rng = np.random.default_rng(seed)
    assignment = np.empty(m, dtype=np.int64)
    stratified = False
    if labels is not None:
        labels = np.asarray(labels).reshape(-1)
        if labels.size != m:
            raise ShapeError(f"{labels.size} labels for {m} observations")
        classes, counts = np.unique(labels, return_counts=True)
        if counts.min() >= k_folds:
            stratified = True
        else:
            warnings.warn(f"a class has fewer than {k_folds} members; using unstratified folds",
                          stacklevel=2)
    if stratified:
        offset = 0
        for c in classes:
            members = rng.permutation(np.flatnonzero(labels == c))
            assignment[members] = (offset + np.arange(members.size)) % k_folds
            offset = (offset + members.size) % k_folds
    else:
        assignment[rng.permutation(m)] = np.arange(m) % k_folds
    folds = tuple(
        (np.flatnonzero(assignment != f), np.flatnonzero(assignment == f)) for f in range(k_folds)
    )
    return FoldPlan(folds, seed, stratified)


def parse_config(text: str) -> Dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"config line {lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def load_config(path, seed: int = 0):
    from .training import TrainConfig

    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from None
    return TrainConfig.from_mapping(parse_config(text), seed=seed)


def model_to_dict(model: FcmModel) -> dict:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "variant": model.variant.value,
        "n": model.n,
        "k": model.k,
        "depth": model.depth,
        "lambda": model.lam,
        "W": [[float(v) for v in row] for row in model.W],
        "b": [float(v) for v in model.b],
        "class_labels": list(model.class_labels),
        "scaler": None,
    }
    if model.scaler is not None:
        doc["scaler"] = {"mins": [float(v) for v in model.scaler.mins],
                         "maxs": [float(v) for v in model.scaler.maxs]}
    return doc


def model_from_dict(doc) -> FcmModel:
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise DataError("not an FCM model document")
    if doc.get("version") != MODEL_VERSION:
        raise DataError(f"unsupported model version {doc.get('version')!r}; expected {MODEL_VERSION}")
    try:
        variant = Variant.parse(doc["variant"])
        n, k = int(doc["n"]), int(doc["k"])
        r = n + (1 if variant is Variant.FCMB else k)
        W = np.array(doc["W"], dtype=np.float64)
        b = np.array(doc["b"], dtype=np.float64)
        if W.shape != (r, r):
            raise ShapeError(f"W has shape {W.shape}; expected r={r} ({r}x{r})")
        if b.shape != (r,):
            raise ShapeError(f"b has length {b.size}; expected r={r}")
        scaler = None
        if doc.get("scaler") is not None:
            mins = np.array(doc["scaler"]["mins"], dtype=np.float64)
            maxs = np.array(doc["scaler"]["maxs"], dtype=np.float64)
            if mins.shape != (n,) or maxs.shape != (n,):
                raise ShapeError(f"scaler must have {n} mins and maxs")
            if not (np.all(np.isfinite(mins)) and np.all(np.isfinite(maxs))):
                raise NumericalError("scaler contains non-finite values")
            scaler = MinMaxScaler(mins, maxs)
        return FcmModel(variant=variant, n=n, k=k, W=W, b=b, depth=int(doc["depth"]),
                        lam=float(doc["lambda"]), class_labels=tuple(doc["class_labels"]),
                        scaler=scaler)
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed model document: {exc!r}") from None


def save_model(model: FcmModel, path) -> None:
    text = json.dumps(model_to_dict(model), indent=1, allow_nan=False)
    try:
        Path(path).write_text(text + "\n", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write model to {path}: {exc}") from None


def load_model(path) -> FcmModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read model {path}: {exc}") from None
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: cannot parse model file: {exc}") from None
    return model_from_dict(doc)


def _reject_constant(name):
    raise NumericalError(f"non-finite value {name} in model file")


def write_csv(path, header: Sequence[str], rows) -> None:
    try:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None


def format_float(v: float) -> str:
    return repr(float(v)) if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
