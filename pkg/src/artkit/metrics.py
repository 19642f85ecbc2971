"""External clustering / classification scores."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError

__all__ = ["MetricReport", "adjusted_rand_index", "accuracy", "UNASSIGNED"]

UNASSIGNED = -1


@dataclass(frozen=True)
class MetricReport:
    name: str
    value: float
    support: int


def _labels(a: Sequence, b: Sequence) -> tuple[np.ndarray, np.ndarray]:
    a = np.array([UNASSIGNED if v is None else v for v in a])
    b = np.array([UNASSIGNED if v is None else v for v in b])
    if a.shape != b.shape:
        raise DataError(f"length mismatch: {a.size} vs {b.size}")
    if a.size == 0:
        raise DataError("need at least one label")
    return a, b


def _pairs(counts: np.ndarray) -> float:
    counts = counts.astype(np.float64)
    return float((counts * (counts - 1) / 2).sum())


def adjusted_rand_index(labels_a, labels_b) -> float:
    """Pair-counting ARI (Hubert & Arabie) with the hypergeometric expectation.

    Unassigned entries (``None`` or -1) form one cluster of their own.
    Two trivial partitions that agree score 1.
    """
    a, b = _labels(labels_a, labels_b)
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    index = _pairs(table)
    rows = _pairs(table.sum(axis=1))
    cols = _pairs(table.sum(axis=0))
    total = a.size * (a.size - 1) / 2
    expected = rows * cols / total if total else 0.0
    max_index = (rows + cols) / 2
    if max_index == expected:
        return 1.0
    return (index - expected) / (max_index - expected)


def accuracy(pred, truth) -> float:
    """Fraction of exact matches; unassigned predictions count as errors."""
    p = [UNASSIGNED if v is None else v for v in pred]
    p, t = _labels(p, truth)
    hits = (p == t) & (p != UNASSIGNED)
    return float(hits.mean())
