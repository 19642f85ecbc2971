"""Dataset loading, min-max scaling, complement coding and seeded ordering."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError

__all__ = [
    "Dataset",
    "NormalizationRanges",
    "load_csv",
    "normalize_fit_apply",
    "normalize_apply",
    "complement_code",
    "splitmix64",
    "shuffle_seeded",
]


@dataclass
class Dataset:
    """Row-major feature matrix with an optional integer label column."""

    X: np.ndarray
    feature_names: list[str]
    labels: np.ndarray | None = None
    label_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        if self.X.ndim != 2:
            raise DataError("dataset must be a 2-D matrix")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != (self.X.shape[0],):
                raise DataError("labels must cover every row")

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def dim(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class NormalizationRanges:
    """Per-feature (min, max) pairs learned on training data."""

    mins: tuple[float, ...]
    maxs: tuple[float, ...]

    def __post_init__(self):
        if len(self.mins) != len(self.maxs):
            raise DataError("mins and maxs differ in length")
        for lo, hi in zip(self.mins, self.maxs):
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
                raise DataError(f"invalid range ({lo}, {hi})")

    @property
    def dim(self) -> int:
        return len(self.mins)


def _parse_cell(text: str, row: int, col: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"row {row}, column {col!r}: non-numeric value {text!r}") from None
    if not math.isfinite(value):
        raise DataError(f"row {row}, column {col!r}: non-finite value {text!r}")
    return value


def load_csv(path, label_column: str | None = None) -> Dataset:
    """Read a headed CSV file of decimal features.

    Label strings are mapped to dense ids in order of first appearance.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise DataError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    if label_column is not None and label_column not in header:
        raise DataError(f"unknown label column {label_column!r}")
    label_idx = header.index(label_column) if label_column is not None else None
    feature_idx = [i for i in range(len(header)) if i != label_idx]
    if not body:
        raise DataError(f"{path}: no data rows")

    X = np.empty((len(body), len(feature_idx)))
    label_names: list[str] = []
    label_ids: dict[str, int] = {}
    labels = []
    for r, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DataError(f"row {r}: expected {len(header)} fields, got {len(row)}")
        for out_col, i in enumerate(feature_idx):
            X[r - 2, out_col] = _parse_cell(row[i].strip(), r, header[i])
        if label_idx is not None:
            name = row[label_idx].strip()
            if name not in label_ids:
                label_ids[name] = len(label_names)
                label_names.append(name)
            labels.append(label_ids[name])

    return Dataset(
        X=X,
        feature_names=[header[i] for i in feature_idx],
        labels=np.array(labels, dtype=np.int64) if label_idx is not None else None,
        label_names=label_names,
    )


def normalize_fit_apply(X) -> tuple[np.ndarray, NormalizationRanges]:
    """Learn per-feature ranges from ``X`` and scale it into [0, 1].

    Constant features map to 0.5.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise DataError("need a 2-D matrix with at least one row")
    if not np.all(np.isfinite(X)):
        raise DataError("non-finite feature value")
    ranges = NormalizationRanges(
        mins=tuple(float(v) for v in X.min(axis=0)),
        maxs=tuple(float(v) for v in X.max(axis=0)),
    )
    return normalize_apply(ranges, X), ranges


def normalize_apply(ranges: NormalizationRanges, X) -> np.ndarray:
    """Scale ``X`` with stored ranges, clamping the result into [0, 1]."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != ranges.dim:
        raise DataError(f"expected {ranges.dim} features, got {X.shape[1]}")
    lo = np.array(ranges.mins)
    hi = np.array(ranges.maxs)
    span = hi - lo
    const = span == 0
    out = (X - lo) / np.where(const, 1.0, span)
    out[:, const] = 0.5
    return np.clip(out, 0.0, 1.0)


def complement_code(x) -> np.ndarray:
    """Return ``[x, 1 - x]``; works on a single sample or on rows of a matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise DataError("empty sample")
    if not np.all((x >= 0.0) & (x <= 1.0)):
        raise DataError("complement coding needs components in [0, 1]")
    return np.concatenate([x, 1.0 - x], axis=-1)


_MASK64 = (1 << 64) - 1


def splitmix64(seed: int):
    """Infinite generator of SplitMix64 outputs (Steele, Lea & Flood 2014)."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def _bounded(stream, bound: int) -> int:
    # rejection sampling keeps the draw unbiased
    limit = (1 << 64) - ((1 << 64) % bound)
    while True:
        r = next(stream)
        if r < limit:
            return r % bound


def shuffle_seeded(n: int, seed: int) -> list[int]:
    """Deterministic permutation of ``range(n)``.

    Fisher-Yates driven by SplitMix64, so the result only depends on
    ``(n, seed)`` and not on the numpy version.
    """
    if n < 1:
        raise DataError("n must be >= 1")
    perm = list(range(n))
    stream = splitmix64(seed)
    for i in range(n - 1, 0, -1):
        j = _bounded(stream, i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm
