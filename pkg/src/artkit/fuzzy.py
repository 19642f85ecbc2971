"""ART 1, Fuzzy ART and Dual-Vigilance Fuzzy ART."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .engine import ACCEPT, LINKED, REJECT, ArtModel, ResonanceVerdict, Verdict
from .errors import ConfigError, DataError

__all__ = [
    "FuzzyCategory",
    "Art1Category",
    "FuzzyART",
    "DVFA",
    "ART1",
    "fa_activation",
    "fa_match",
    "fa_learn",
    "fa_category_size",
    "art1_activation",
    "art1_match",
    "art1_learn",
    "art1_uncommitted",
    "dvfa_resonance",
]


@dataclass(frozen=True, eq=False)
class FuzzyCategory:
    """Complement-coded weight vector ``w = [u, 1 - v]`` (a hyperbox)."""

    w: np.ndarray
    n: int = 1


@dataclass(frozen=True, eq=False)
class Art1Category:
    td: np.ndarray
    bu: np.ndarray
    n: int = 1


def _l1(x: np.ndarray) -> float:
    # correctly rounded, so a complement-coded vector sums to exactly d
    return math.fsum(x.tolist())


def _fa_scores(W: np.ndarray, x: np.ndarray, alpha: float) -> np.ndarray:
    return np.minimum(W, x).sum(axis=1) / (alpha + W.sum(axis=1))


def fa_activation(c: FuzzyCategory, x: np.ndarray, alpha: float) -> float:
    """Weber-law choice ``|x ^ w| / (alpha + |w|)``."""
    if c.w.shape != x.shape:
        raise DataError("category and sample dimensions differ")
    return float(_fa_scores(c.w[None, :], x, alpha)[0])


def _fa_matches(W: np.ndarray, x: np.ndarray) -> np.ndarray:
    norm = _l1(x)
    if norm <= 0.0:
        raise DataError("zero-norm input")
    return np.minimum(W, x).sum(axis=1) / norm


def fa_match(c: FuzzyCategory, x: np.ndarray) -> float:
    """``|x ^ w| / |x|``."""
    if c.w.shape != x.shape:
        raise DataError("category and sample dimensions differ")
    return float(_fa_matches(c.w[None, :], x)[0])


def fa_learn(c: FuzzyCategory, x: np.ndarray, beta: float) -> FuzzyCategory:
    """``w' = (1 - beta) w + beta (x ^ w)``; the count goes up by one."""
    fuzzy_and = np.minimum(x, c.w)
    # written as a non-negative decrement so rounding can never raise a weight
    w = fuzzy_and if beta == 1.0 else c.w - beta * (c.w - fuzzy_and)
    return FuzzyCategory(w, c.n + 1)


def fa_category_size(c: FuzzyCategory) -> float:
    """Summed side lengths of the hyperbox, ``d - |w|``; ``-d`` when uncommitted."""
    return c.w.size // 2 - float(c.w.sum())


@dataclass(frozen=True)
class FuzzyART(ArtModel):
    """Fuzzy ART on complement-coded inputs.

    Parameters
    ----------
    rho : float
        Vigilance in [0, 1].
    alpha : float
        Choice parameter, > 0.
    beta : float
        Learning rate in (0, 1]; 1 is fast learning.
    """

    rho: float = 0.75
    alpha: float = 0.001
    beta: float = 1.0

    kind: ClassVar[str] = "fuzzy"
    complement_coding: ClassVar[bool] = True

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError("rho must lie in [0, 1]")
        if not self.alpha > 0.0:
            raise ConfigError("alpha must be > 0")
        if not 0.0 < self.beta <= 1.0:
            raise ConfigError("beta must lie in (0, 1]")

    def activation(self, category, x):
        return fa_activation(category, x, self.alpha)

    def activations(self, categories, x):
        W = np.array([c.w for c in categories])
        return _fa_scores(W, x, self.alpha)

    def match(self, category, x):
        return fa_match(category, x)

    def vigilance_values(self, categories, x):
        return _fa_matches(np.array([c.w for c in categories]), x)

    def learn(self, category, x):
        return fa_learn(category, x, self.beta)

    def init_category(self, x):
        # uncommitted all-ones node learning x gives the point box w = x
        return FuzzyCategory(np.minimum(x, 1.0), 1)

    def category_size(self, category):
        return fa_category_size(category)

    def category_arrays(self, category):
        return {"w": category.w}

    def category_from_arrays(self, values, n):
        return FuzzyCategory(np.asarray(values["w"], dtype=np.float64), n)


def _dvfa_codes(m: np.ndarray, rho_ub: float, rho_lb: float) -> np.ndarray:
    if not 0.0 <= rho_lb <= rho_ub <= 1.0:
        raise ConfigError("need 0 <= rho_lb <= rho_ub <= 1")
    return np.where(m >= rho_ub, ACCEPT, np.where(m >= rho_lb, LINKED, REJECT))


def dvfa_resonance(c: FuzzyCategory, x: np.ndarray, rho_ub: float, rho_lb: float) -> ResonanceVerdict:
    """Accept above the upper bound, accept as a new linked category above the lower one."""
    m = fa_match(c, x)
    code = int(_dvfa_codes(np.array([m]), rho_ub, rho_lb)[0])
    verdict = {ACCEPT: Verdict.ACCEPT, LINKED: Verdict.ACCEPT_AS_NEW_LINKED}.get(code, Verdict.REJECT)
    return ResonanceVerdict(verdict, m)


@dataclass(frozen=True)
class DVFA(FuzzyART):
    """Dual-vigilance Fuzzy ART: ``rho`` is the upper bound, ``rho_lb`` the lower.

    Samples that only pass the lower bound seed a new category in the tested
    category's cluster, so clusters are unions of hyperboxes.
    """

    rho_lb: float = 0.5

    kind: ClassVar[str] = "dvfa"
    uses_clusters: ClassVar[bool] = True

    def __post_init__(self):
        super().__post_init__()
        if not 0.0 <= self.rho_lb <= self.rho:
            raise ConfigError("need 0 <= rho_lb <= rho (upper bound)")

    def verdict_codes(self, values, rho):
        # a tightened upper bound (match tracking) also caps the lower one
        return _dvfa_codes(values, rho, min(self.rho_lb, rho))


def art1_activation(c: Art1Category, x: np.ndarray) -> float:
    return float((c.bu * x).sum())


def art1_match(c: Art1Category, x: np.ndarray) -> float:
    norm = float(x.sum())
    if norm <= 0.0:
        raise DataError("ART 1 needs at least one active bit")
    return float(np.minimum(x, c.td).sum()) / norm


def _bottom_up(td: np.ndarray, L: float) -> np.ndarray:
    return (L / (L - 1.0 + float(td.sum()))) * td


def art1_learn(c: Art1Category, x: np.ndarray, L: float) -> Art1Category:
    td = np.minimum(x, c.td)
    return Art1Category(td, _bottom_up(td, L), c.n + 1)


def art1_uncommitted(dim: int, L: float) -> Art1Category:
    td = np.ones(dim)
    return Art1Category(td, _bottom_up(td, L), 0)


@dataclass(frozen=True)
class ART1(ArtModel):
    """Binary ART 1. One uncommitted node always takes part in the competition."""

    rho: float = 0.75
    L: float = 2.0

    kind: ClassVar[str] = "art1"
    binary_input: ClassVar[bool] = True

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError("rho must lie in [0, 1]")
        if not self.L > 1.0:
            raise ConfigError("L must be > 1")

    def check_sample(self, x):
        if not np.all((x == 0.0) | (x == 1.0)):
            raise DataError("ART 1 accepts binary inputs only")
        if not x.any():
            raise DataError("ART 1 needs at least one active bit")

    def activation(self, category, x):
        return art1_activation(category, x)

    def match(self, category, x):
        return art1_match(category, x)

    def learn(self, category, x):
        return art1_learn(category, x, self.L)

    def init_category(self, x):
        return art1_learn(art1_uncommitted(x.size, self.L), x, self.L)

    def uncommitted(self, dim):
        return art1_uncommitted(dim, self.L)

    def category_size(self, category):
        return float(category.td.size - category.td.sum())

    def category_arrays(self, category):
        return {"td": category.td, "bu": category.bu}

    def category_from_arrays(self, values, n):
        return Art1Category(
            np.asarray(values["td"], dtype=np.float64),
            np.asarray(values["bu"], dtype=np.float64),
            n,
        )
