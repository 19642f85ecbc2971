"""Hypersphere ART and Ellipsoid ART (raw, non complement-coded inputs)."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import ClassVar

import numpy as np
from scipy.spatial.distance import cdist

from .engine import ArtModel
from .errors import ConfigError, DataError

__all__ = [
    "SphereCategory",
    "EllipsoidCategory",
    "HypersphereART",
    "EllipsoidART",
    "ha_activation",
    "ha_match",
    "ha_learn",
    "ha_rmax",
    "ea_distance",
    "ea_activation",
    "ea_match",
    "ea_learn",
]

# Tolerated negative round-off under the ellipsoid square root.
SQRT_GUARD = 1e-12


@dataclass(frozen=True, eq=False)
class SphereCategory:
    m: np.ndarray
    R: float = 0.0
    n: int = 1


@dataclass(frozen=True, eq=False)
class EllipsoidCategory:
    m: np.ndarray
    dvec: np.ndarray
    R: float = 0.0
    n: int = 1


def _dists(M: np.ndarray, x: np.ndarray) -> np.ndarray:
    diff = x - M
    return np.sqrt((diff * diff).sum(axis=1))


def _euclid(x: np.ndarray, m: np.ndarray) -> float:
    # same reduction as the row-wise version, so both agree bit for bit
    return float(_dists(m[None, :], x)[0])


def _check_radii(R: np.ndarray, rbar: float) -> None:
    if np.any(R > rbar):
        raise ConfigError(f"radial extent {rbar} is below category radius {R.max()}")


def _ha_scores(M, R, x, rbar, alpha):
    _check_radii(R, rbar)
    return (rbar - np.maximum(R, _dists(M, x))) / (rbar - R + alpha)


def _ha_matches(M, R, x, rbar):
    return 1.0 - np.maximum(R, _dists(M, x)) / rbar


def _stack(categories):
    return np.array([c.m for c in categories]), np.array([c.R for c in categories])


def ha_activation(c: SphereCategory, x: np.ndarray, rbar: float, alpha: float) -> float:
    return float(_ha_scores(c.m[None, :], np.array([c.R]), x, rbar, alpha)[0])


def ha_match(c: SphereCategory, x: np.ndarray, rbar: float) -> float:
    return float(_ha_matches(c.m[None, :], np.array([c.R]), x, rbar)[0])


def _move_centroid(m, x, beta, R, dist):
    # zero distance is the no-movement limit of the update
    if dist == 0.0:
        return m
    return m + (beta / 2.0) * (x - m) * (1.0 - min(R, dist) / dist)


def ha_learn(c: SphereCategory, x: np.ndarray, beta: float) -> SphereCategory:
    dist = _euclid(x, c.m)
    R = c.R + (beta / 2.0) * (max(c.R, dist) - c.R)
    return SphereCategory(_move_centroid(c.m, x, beta, c.R, dist), R, c.n + 1)


def ha_rmax(data) -> float:
    """Half the largest pairwise Euclidean distance in ``data``."""
    X = np.asarray(data, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DataError("need at least two samples")
    best = 0.0
    block = 512
    for start in range(0, X.shape[0], block):
        D = cdist(X[start:start + block], X[start:])
        best = max(best, float(D.max()))
    return best / 2.0


def _auto_extent(X: np.ndarray, scale: float) -> float:
    """``scale * 2 * R_max``, falling back to ``scale * sqrt(d)`` on degenerate data."""
    try:
        rmax = ha_rmax(X)
    except DataError:
        rmax = 0.0
    if rmax == 0.0:
        return scale * math.sqrt(X.shape[1])
    return scale * 2.0 * rmax


@dataclass(frozen=True)
class _GeometricModel(ArtModel):
    rho: float = 0.75
    alpha: float = 0.001
    beta: float = 1.0
    rbar: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError("rho must lie in [0, 1]")
        if not self.alpha > 0.0:
            raise ConfigError("alpha must be > 0")
        if not 0.0 < self.beta <= 1.0:
            raise ConfigError("beta must lie in (0, 1]")
        if self.rbar is not None and not self.rbar > 0.0:
            raise ConfigError("rbar must be > 0")

    @property
    def extent(self) -> float:
        if self.rbar is None:
            raise ConfigError("rbar is unset; pass it explicitly or use batch fit")
        return self.rbar

    def category_size(self, category):
        return float(category.R)


@dataclass(frozen=True)
class HypersphereART(_GeometricModel):
    """Hypersphere ART; ``rbar=None`` is filled with ``R_max`` of the training set."""

    kind: ClassVar[str] = "hypersphere"

    def prepare(self, data):
        if self.rbar is not None:
            return self
        return replace(self, rbar=_auto_extent(data, 0.5))

    def activation(self, category, x):
        return ha_activation(category, x, self.extent, self.alpha)

    def activations(self, categories, x):
        return _ha_scores(*_stack(categories), x, self.extent, self.alpha)

    def match(self, category, x):
        return ha_match(category, x, self.extent)

    def vigilance_values(self, categories, x):
        return _ha_matches(*_stack(categories), x, self.extent)

    def learn(self, category, x):
        return ha_learn(category, x, self.beta)

    def init_category(self, x):
        return SphereCategory(x.copy(), 0.0, 1)

    def category_arrays(self, category):
        return {"m": category.m, "R": category.R}

    def category_from_arrays(self, values, n):
        return SphereCategory(np.asarray(values["m"], dtype=np.float64), float(values["R"]), n)


def _check_mu(mu: float) -> None:
    if not 0.0 < mu <= 1.0:
        raise ConfigError("mu must lie in (0, 1]")


def _ea_distances(M: np.ndarray, D: np.ndarray, x: np.ndarray, mu: float) -> np.ndarray:
    _check_mu(mu)
    diff = x - M
    sq = (diff * diff).sum(axis=1)
    proj = (D * diff).sum(axis=1)
    val = sq - (1.0 - mu * mu) * proj * proj
    if np.any(val < -SQRT_GUARD):
        raise ArithmeticError(f"negative squared ellipsoid distance {val.min()}")
    shrunk = np.sqrt(np.maximum(val, 0.0)) / mu
    # no major axis yet: plain Euclidean distance
    return np.where(D.any(axis=1), shrunk, np.sqrt(sq))


def ea_distance(c: EllipsoidCategory, x: np.ndarray, mu: float) -> float:
    """Distance from the centroid, shrunk along the major axis by ``mu``."""
    return float(_ea_distances(c.m[None, :], c.dvec[None, :], x, mu)[0])


def _ea_stack(categories):
    return (
        np.array([c.m for c in categories]),
        np.array([c.dvec for c in categories]),
        np.array([c.R for c in categories]),
    )


def _ea_scores(M, D, R, x, rbar, alpha, mu):
    dis = _ea_distances(M, D, x, mu)
    return (rbar - R - np.maximum(R, dis)) / (rbar - 2.0 * R + alpha)


def _ea_matches(M, D, R, x, rbar, mu):
    return 1.0 - (R + np.maximum(R, _ea_distances(M, D, x, mu))) / rbar


def ea_activation(c: EllipsoidCategory, x, rbar: float, alpha: float, mu: float) -> float:
    return float(_ea_scores(*_ea_stack([c]), x, rbar, alpha, mu)[0])


def ea_match(c: EllipsoidCategory, x, rbar: float, mu: float) -> float:
    return float(_ea_matches(*_ea_stack([c]), x, rbar, mu)[0])


def ea_learn(
    c: EllipsoidCategory, x, beta: float, mu: float, direction_from: str = "post"
) -> EllipsoidCategory:
    """Hypersphere-style update with the ellipsoid distance.

    The major-axis direction is set once, from the first encoded sample that
    differs from the anchoring centroid (post- or pre-update, per
    ``direction_from``), and never rewritten.
    """
    dis = ea_distance(c, x, mu)
    R = c.R + (beta / 2.0) * (max(c.R, dis) - c.R)
    m = _move_centroid(c.m, x, beta, c.R, dis)
    dvec = c.dvec
    if not dvec.any():
        anchor = m if direction_from == "post" else c.m
        v = x - anchor
        norm = math.sqrt(float((v * v).sum()))
        if norm > 0.0:
            dvec = v / norm
    return EllipsoidCategory(m, dvec, R, c.n + 1)


@dataclass(frozen=True)
class EllipsoidART(_GeometricModel):
    """Ellipsoid ART with axis ratio ``mu``.

    ``rbar=None`` is filled with ``max pairwise distance / mu`` at batch fit.
    """

    mu: float = 0.8
    direction_from: str = "post"

    kind: ClassVar[str] = "ellipsoid"

    def __post_init__(self):
        super().__post_init__()
        if not 0.0 < self.mu <= 1.0:
            raise ConfigError("mu must lie in (0, 1]")
        if self.direction_from not in ("post", "pre"):
            raise ConfigError("direction_from must be 'post' or 'pre'")

    def prepare(self, data):
        if self.rbar is not None:
            return self
        return replace(self, rbar=_auto_extent(data, 1.0 / self.mu))

    def activation(self, category, x):
        return ea_activation(category, x, self.extent, self.alpha, self.mu)

    def activations(self, categories, x):
        return _ea_scores(*_ea_stack(categories), x, self.extent, self.alpha, self.mu)

    def match(self, category, x):
        return ea_match(category, x, self.extent, self.mu)

    def vigilance_values(self, categories, x):
        return _ea_matches(*_ea_stack(categories), x, self.extent, self.mu)

    def learn(self, category, x):
        return ea_learn(category, x, self.beta, self.mu, self.direction_from)

    def init_category(self, x):
        return EllipsoidCategory(x.copy(), np.zeros_like(x), 0.0, 1)

    def category_arrays(self, category):
        return {"m": category.m, "dvec": category.dvec, "R": category.R}

    def category_from_arrays(self, values, n):
        return EllipsoidCategory(
            np.asarray(values["m"], dtype=np.float64),
            np.asarray(values["dvec"], dtype=np.float64),
            float(values["R"]),
            n,
        )
