"""Gaussian ART (diagonal) and Bayesian ART (full or diagonal covariance).

Likelihoods are evaluated in the log domain; activation scores of Gaussian
ART are log posteriors up to the shared evidence term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Sequence

import numpy as np
from scipy.special import logsumexp

from .engine import ACCEPT, REJECT, ArtModel
from .errors import ConfigError, DataError

__all__ = [
    "GaussCategory",
    "BayesCategory",
    "GaussianART",
    "BayesianART",
    "ga_log_activation",
    "ga_activation",
    "ga_match",
    "ga_learn",
    "ba_activation",
    "ba_match",
    "ba_learn",
]

LOG_2PI = math.log(2.0 * math.pi)
# floor on covariance diagonal, keeps Cholesky well posed on duplicate-heavy streams
VARIANCE_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class GaussCategory:
    mu: np.ndarray
    sigma: np.ndarray
    n: int = 1


@dataclass(frozen=True, eq=False)
class BayesCategory:
    mu: np.ndarray
    cov: np.ndarray
    n: int = 1


def _log_priors(categories) -> np.ndarray:
    counts = np.array([c.n for c in categories], dtype=np.float64)
    return np.log(counts) - math.log(counts.sum())


def ga_log_activation(categories: Sequence[GaussCategory], x: np.ndarray) -> np.ndarray:
    """Log of likelihood times prior for each category (evidence dropped)."""
    mu = np.array([c.mu for c in categories])
    sigma = np.array([c.sigma for c in categories])
    if np.any(sigma <= 0.0):
        raise DataError("standard deviation underflowed to zero")
    z = (x - mu) / sigma
    loglik = -0.5 * (z * z).sum(axis=1) - np.log(sigma).sum(axis=1) - 0.5 * x.size * LOG_2PI
    scores = loglik + _log_priors(categories)
    if not np.all(np.isfinite(scores)):
        raise DataError("non-finite log-likelihood")
    return scores


def ga_activation(categories, x):
    """Alias of :func:`ga_log_activation`; the engine ranks on these scores."""
    return ga_log_activation(categories, x)


def _ga_log_matches(mu: np.ndarray, sigma: np.ndarray, x: np.ndarray) -> np.ndarray:
    z = (mu - x) / sigma
    return -0.5 * (z * z).sum(axis=1)


def _ga_log_match(c: GaussCategory, x: np.ndarray) -> float:
    return float(_ga_log_matches(c.mu[None, :], c.sigma[None, :], x)[0])


def ga_match(c: GaussCategory, x: np.ndarray) -> float:
    return math.exp(_ga_log_match(c, x))


def ga_learn(c: GaussCategory, x: np.ndarray) -> GaussCategory:
    n = c.n + 1
    mu = (1.0 - 1.0 / n) * c.mu + (1.0 / n) * x
    var = (1.0 - 1.0 / n) * c.sigma**2 + (1.0 / n) * (mu - x) ** 2
    return GaussCategory(mu, np.sqrt(var), n)


@dataclass(frozen=True)
class GaussianART(ArtModel):
    """Gaussian ART with diagonal covariance and count-based priors.

    Parameters
    ----------
    rho : float
        Match floor in (0, 1].
    sigma_init : float
        Initial standard deviation of new categories.
    """

    rho: float = 0.5
    sigma_init: float = 0.1

    kind: ClassVar[str] = "gaussian"

    def __post_init__(self):
        if not 0.0 < self.rho <= 1.0:
            raise ConfigError("rho must lie in (0, 1]")
        if not self.sigma_init > 0.0:
            raise ConfigError("sigma_init must be > 0")

    def activation(self, category, x):
        return float(ga_log_activation([category], x)[0])

    def activations(self, categories, x):
        return ga_log_activation(categories, x)

    def match(self, category, x):
        return ga_match(category, x)

    def vigilance_values(self, categories, x):
        # log M, so that tiny matches still compare correctly
        mu = np.array([c.mu for c in categories])
        sigma = np.array([c.sigma for c in categories])
        return _ga_log_matches(mu, sigma, x)

    def verdict_codes(self, values, rho):
        if rho <= 0.0:
            return np.full(values.shape, ACCEPT)
        return np.where(values >= math.log(rho), ACCEPT, REJECT)

    def reported_match(self, value):
        return math.exp(value)

    def learn(self, category, x):
        return ga_learn(category, x)

    def init_category(self, x):
        return GaussCategory(x.copy(), np.full(x.size, self.sigma_init), 1)

    def category_size(self, category):
        return float(np.prod(category.sigma))

    def category_arrays(self, category):
        return {"mu": category.mu, "sigma": category.sigma}

    def category_from_arrays(self, values, n):
        return GaussCategory(
            np.asarray(values["mu"], dtype=np.float64),
            np.asarray(values["sigma"], dtype=np.float64),
            n,
        )


def _log_likelihoods(categories: Sequence[BayesCategory], x: np.ndarray) -> np.ndarray:
    cov = np.array([c.cov for c in categories])
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise DataError("singular covariance matrix") from None
    r = x - np.array([c.mu for c in categories])
    z = np.linalg.solve(L, r[..., None])[..., 0]
    logdet = 2.0 * np.log(np.diagonal(L, axis1=1, axis2=2)).sum(axis=1)
    return -0.5 * (z * z).sum(axis=1) - 0.5 * logdet - 0.5 * x.size * LOG_2PI


def ba_activation(categories: Sequence[BayesCategory], x: np.ndarray) -> np.ndarray:
    """Posterior probability of each category; the vector sums to one."""
    scores = _log_likelihoods(categories, x) + _log_priors(categories)
    return np.exp(scores - logsumexp(scores))


def _ba_volumes(categories: Sequence[BayesCategory]) -> np.ndarray:
    return np.linalg.det(np.array([c.cov for c in categories]))


def ba_match(c: BayesCategory) -> float:
    """Determinant of the covariance, i.e. the category's hyper-volume."""
    return float(_ba_volumes([c])[0])


def ba_learn(c: BayesCategory, x: np.ndarray, diagonal: bool = False) -> BayesCategory:
    n = c.n + 1
    mu = (1.0 - 1.0 / n) * c.mu + (1.0 / n) * x
    r = x - mu
    outer = np.outer(r, r)
    if diagonal:
        outer = np.diag(np.diag(outer))
    cov = (c.n / n) * c.cov + (1.0 / n) * outer
    cov = 0.5 * (cov + cov.T)
    idx = np.diag_indices_from(cov)
    cov[idx] = np.maximum(cov[idx], VARIANCE_FLOOR)
    return BayesCategory(mu, cov, n)


@dataclass(frozen=True)
class BayesianART(ArtModel):
    """Bayesian ART; ``rho`` bounds the covariance determinant from above.

    New categories start at ``sigma_init**2 * I``, which must satisfy
    ``sigma_init**2 <= 0.1 * rho**(1/d)``.
    """

    rho: float = 1e-3
    sigma_init: float = 0.01
    diagonal: bool = False

    kind: ClassVar[str] = "bayes"
    match_rises: ClassVar[bool] = False

    def __post_init__(self):
        if not self.rho > 0.0:
            raise ConfigError("rho (maximum hyper-volume) must be > 0")
        if not self.sigma_init > 0.0:
            raise ConfigError("sigma_init must be > 0")

    def check_dim(self, dim):
        bound = 0.1 * self.rho ** (1.0 / dim)
        if self.sigma_init**2 > bound:
            raise ConfigError(
                f"sigma_init**2 = {self.sigma_init**2:g} exceeds 0.1 * rho**(1/d) = {bound:g}"
            )

    def activation(self, category, x):
        return float(ba_activation([category], x)[0])

    def activations(self, categories, x):
        return ba_activation(categories, x)

    def match(self, category, x):
        return ba_match(category)

    def vigilance_values(self, categories, x):
        return _ba_volumes(categories)

    def passes(self, m, rho):
        return m <= rho

    def learn(self, category, x):
        return ba_learn(category, x, self.diagonal)

    def init_category(self, x):
        return BayesCategory(x.copy(), self.sigma_init**2 * np.eye(x.size), 1)

    def category_size(self, category):
        return ba_match(category)

    def category_arrays(self, category):
        return {"mu": category.mu, "cov": category.cov}

    def category_from_arrays(self, values, n):
        return BayesCategory(
            np.asarray(values["mu"], dtype=np.float64),
            np.asarray(values["cov"], dtype=np.float64),
            n,
        )
