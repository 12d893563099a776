"""Dataset ingestion, one-class task construction, splits, and centering.

Sample matrices are column-major throughout the package: X has shape (D, N)
with one column per sample. Labels are boolean, True for the target class.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    LoadError,
    StratificationError,
    TargetClassNotFoundError,
    ZeroVarianceError,
)


@dataclass(frozen=True)
class Dataset:
    """A one-class task: feature matrix, target/outlier flags, provenance."""

    X: np.ndarray          # (D, N), float64
    labels: np.ndarray     # (N,), bool, True = target
    name: str
    source_class: str

    @property
    def n_samples(self) -> int:
        return self.X.shape[1]

    @property
    def n_features(self) -> int:
        return self.X.shape[0]

    @property
    def n_targets(self) -> int:
        return int(self.labels.sum())

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.X[:, idx], self.labels[idx], self.name, self.source_class)

    def target_matrix(self) -> np.ndarray:
        """Feature columns of the target samples only."""
        return self.X[:, self.labels]


@dataclass(frozen=True)
class SplitPlan:
    """Stratified train/test partition plus CV folds over the training part."""

    train_indices: np.ndarray
    test_indices: np.ndarray
    seed: int
    train_fraction: float
    folds: list  # list of np.ndarray, disjoint, covering train_indices

    def to_json(self) -> str:
        doc = {
            "seed": self.seed,
            "train": self.train_indices.tolist(),
            "test": self.test_indices.tolist(),
            "folds": [f.tolist() for f in self.folds],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(text: str, train_fraction: float = float("nan")) -> "SplitPlan":
        doc = json.loads(text)
        return SplitPlan(
            train_indices=np.asarray(doc["train"], dtype=int),
            test_indices=np.asarray(doc["test"], dtype=int),
            seed=int(doc["seed"]),
            train_fraction=train_fraction,
            folds=[np.asarray(f, dtype=int) for f in doc["folds"]],
        )


@dataclass(frozen=True)
class CenteringStats:
    """Train-target mean (and optional per-feature scale) used on all splits."""

    mu: np.ndarray
    scale: np.ndarray | None = None

    def transform(self, X: np.ndarray) -> np.ndarray:
        out = X - self.mu[:, None]
        if self.scale is not None:
            out = out / self.scale[:, None]
        return out


def load_csv(path, label_column: int, target_class: str, name: str | None = None) -> Dataset:
    """Read a delimited multi-class file and build a one-class Dataset.

    The row whose cells are not all numeric (apart from the label column) is
    treated as a header and skipped. Feature cells must parse as finite
    floats; the label column is read as a string and compared against
    `target_class`.
    """
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise LoadError(f"{path} is empty")

    ncol = len(rows[0])
    label_idx = label_column if label_column >= 0 else ncol + label_column
    if not 0 <= label_idx < ncol:
        raise LoadError(f"label column {label_column} out of range for {ncol} columns")

    def is_numeric_row(row):
        for j, cell in enumerate(row):
            if j == label_idx:
                continue
            try:
                float(cell)
            except ValueError:
                return False
        return True

    start = 0 if is_numeric_row(rows[0]) else 1
    if len(rows) <= start:
        raise LoadError(f"{path} has a header but no data rows")

    features = []
    labels_raw = []
    for r, row in enumerate(rows[start:], start=start + 1):
        if len(row) != ncol:
            raise LoadError(f"{path}:{r}: expected {ncol} cells, got {len(row)}")
        vec = []
        for j, cell in enumerate(row):
            if j == label_idx:
                continue
            try:
                value = float(cell)
            except ValueError as exc:
                raise LoadError(f"{path}:{r}: cell {j!r}={cell!r} is not numeric") from exc
            if not math.isfinite(value):
                raise LoadError(f"{path}:{r}: non-finite value {cell!r} in column {j}")
            vec.append(value)
        features.append(vec)
        labels_raw.append(row[label_idx].strip())

    classes = set(labels_raw)
    if len(classes) < 2:
        raise LoadError(f"{path} holds a single class {classes}; need at least two")
    if target_class not in classes:
        raise TargetClassNotFoundError(target_class, classes)

    X = np.asarray(features, dtype=float).T  # (D, N)
    labels = np.asarray([lab == target_class for lab in labels_raw], dtype=bool)
    if name is None:
        name = os.path.splitext(os.path.basename(str(path)))[0]
    return Dataset(X=X, labels=labels, name=name, source_class=target_class)


def _largest_remainder_counts(sizes, fraction, total_train):
    """Per-class train counts: floors first, leftovers by largest remainder."""
    raw = [fraction * s for s in sizes]
    counts = [int(math.floor(v)) for v in raw]
    leftover = total_train - sum(counts)
    remainders = sorted(
        range(len(sizes)), key=lambda i: (-(raw[i] - counts[i]), i)
    )
    for i in remainders[:leftover]:
        counts[i] += 1
    return counts


def make_split(ds: Dataset, train_fraction: float = 0.7, seed: int = 0,
               k_folds: int = 5) -> SplitPlan:
    """Stratified train/test split plus stratified CV folds, seed-reproducible.

    Per-class train counts are floor(fraction * class_size); whatever the
    floors leave short of floor(fraction * N) goes back to train, largest
    fractional remainder first. Folds are stratified over the training
    indices so every fold can score both classes.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if k_folds < 2:
        raise ValueError(f"k_folds must be >= 2, got {k_folds}")

    n = ds.n_samples
    rng = np.random.default_rng(seed)
    class_indices = [np.flatnonzero(ds.labels), np.flatnonzero(~ds.labels)]
    class_names = [f"target({ds.source_class})", "outlier"]

    total_train = int(math.floor(train_fraction * n))
    counts = _largest_remainder_counts(
        [len(c) for c in class_indices], train_fraction, total_train
    )

    train_parts, test_parts = [], []
    for idx, k in zip(class_indices, counts):
        perm = rng.permutation(idx)
        train_parts.append(perm[:k])
        test_parts.append(perm[k:])

    for name, part in zip(class_names, train_parts):
        if len(part) < k_folds:
            raise StratificationError(
                f"class {name} has only {len(part)} training samples; "
                f"cannot build {k_folds} stratified folds"
            )

    folds = [[] for _ in range(k_folds)]
    for part in train_parts:
        perm = rng.permutation(part)
        for i, sample in enumerate(perm):
            folds[i % k_folds].append(int(sample))

    train = np.sort(np.concatenate(train_parts))
    test = np.sort(np.concatenate(test_parts))
    return SplitPlan(
        train_indices=train,
        test_indices=test,
        seed=seed,
        train_fraction=train_fraction,
        folds=[np.sort(np.asarray(f, dtype=int)) for f in folds],
    )


def center(train_targets: np.ndarray, apply_to: np.ndarray,
           with_scale: bool = False) -> tuple[CenteringStats, np.ndarray]:
    """Column-wise centering (optionally z-scaling) with train-target stats."""
    train_targets = np.asarray(train_targets, dtype=float)
    if train_targets.size == 0:
        raise ValueError("train_targets is empty")
    mu = train_targets.mean(axis=1)
    scale = None
    if with_scale:
        scale = train_targets.std(axis=1)
        dead = np.flatnonzero(scale <= 0.0)
        if dead.size:
            raise ZeroVarianceError(dead)
    stats = CenteringStats(mu=mu, scale=scale)
    return stats, stats.transform(np.asarray(apply_to, dtype=float))
