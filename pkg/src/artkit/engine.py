"""Generic match-based learning loop shared by every category geometry.

A model supplies activation, match/resonance, learning and initialization
for its category type. The engine owns the search: candidates are tried in
descending activation (ties go to the lowest index), the first one that
resonates learns the sample, and a new category is created when the search
is exhausted.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Any, ClassVar, Sequence

import numpy as np

from .errors import ConfigError, DataError, ModelError
from .preprocess import complement_code, shuffle_seeded

__all__ = [
    "Verdict",
    "ResonanceVerdict",
    "ArtModel",
    "ArtState",
    "PresentOutcome",
    "MODEL_KINDS",
    "present",
    "rank_candidates",
    "search",
    "fit",
    "check_convergence",
    "predict",
]

MODEL_KINDS: dict[str, type["ArtModel"]] = {}


class Verdict(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    ACCEPT_AS_NEW_LINKED = "accept_as_new_linked"


# integer verdict codes used by the vectorized search
REJECT, ACCEPT, LINKED = 0, 1, 2
_VERDICTS = (Verdict.REJECT, Verdict.ACCEPT, Verdict.ACCEPT_AS_NEW_LINKED)


@dataclass(frozen=True)
class ResonanceVerdict:
    verdict: Verdict
    match: float

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPT


@dataclass(frozen=True)
class ArtModel:
    """Hyperparameter record plus the category contract of one ART family.

    Subclasses are frozen dataclasses whose fields are the hyperparameters.
    Category objects are treated as immutable: ``learn`` returns a new one
    with the instance count already incremented.
    """

    kind: ClassVar[str] = ""
    complement_coding: ClassVar[bool] = False
    binary_input: ClassVar[bool] = False
    uses_clusters: ClassVar[bool] = False
    # True when a larger match value means a better fit; Bayesian ART bounds
    # a volume from above instead, which flips match tracking.
    match_rises: ClassVar[bool] = True

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls.kind:
            MODEL_KINDS[cls.kind] = cls

    # -- contract -------------------------------------------------------
    def activation(self, category, x: np.ndarray) -> float:
        raise NotImplementedError

    def activations(self, categories: Sequence, x: np.ndarray) -> np.ndarray:
        return np.array([self.activation(c, x) for c in categories], dtype=np.float64)

    def match(self, category, x: np.ndarray) -> float:
        raise NotImplementedError

    def passes(self, m, rho):
        """Vigilance test; works elementwise on arrays."""
        return m >= rho

    def vigilance_values(self, categories: Sequence, x: np.ndarray) -> np.ndarray:
        """Per-category values that the vigilance test compares with ``rho``."""
        return np.array([self.match(c, x) for c in categories], dtype=np.float64)

    def verdict_codes(self, values: np.ndarray, rho: float) -> np.ndarray:
        return np.where(self.passes(values, rho), ACCEPT, REJECT)

    def reported_match(self, value: float) -> float:
        """Match value corresponding to one entry of :meth:`vigilance_values`."""
        return float(value)

    def resonance(self, category, x: np.ndarray, rho: float | None = None) -> ResonanceVerdict:
        v = self.vigilance_values([category], x)
        code = int(self.verdict_codes(v, self.rho if rho is None else rho)[0])
        return ResonanceVerdict(_VERDICTS[code], self.reported_match(v[0]))

    def learn(self, category, x: np.ndarray):
        raise NotImplementedError

    def init_category(self, x: np.ndarray):
        raise NotImplementedError

    def uncommitted(self, dim: int):
        """Uncommitted node that joins the competition, or None."""
        return None

    def category_size(self, category) -> float:
        raise NotImplementedError

    def category_arrays(self, category) -> dict[str, Any]:
        """Named LTM values of a category (arrays or floats), count excluded."""
        raise NotImplementedError

    def category_from_arrays(self, values: dict[str, Any], n: int):
        raise NotImplementedError

    # -- configuration hooks -------------------------------------------
    def check_dim(self, dim: int) -> None:
        """Reject hyperparameters that are inconsistent with the input dimension."""

    def prepare(self, data: np.ndarray) -> "ArtModel":
        """Fill data-dependent defaults before batch training."""
        return self

    def check_sample(self, x: np.ndarray) -> None:
        pass

    def params(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def tracked_rho(self, m: float, epsilon: float) -> float:
        """Vigilance that excludes a category whose match is ``m``."""
        return m + epsilon if self.match_rises else m - epsilon


@dataclass
class PresentOutcome:
    index: int
    created: bool
    match: float
    activity: np.ndarray
    cluster: int | None = None
    # candidates in the order they were tested, with activations and verdicts
    tested: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    activations: np.ndarray = field(default_factory=lambda: np.empty(0))
    # raw vigilance values of the rejected candidates, converted on demand
    rejected_values: np.ndarray = field(default_factory=lambda: np.empty(0))
    final: ResonanceVerdict | None = None
    model: ArtModel | None = field(default=None, repr=False)

    @property
    def label(self) -> int:
        return self.index if self.cluster is None else self.cluster

    @property
    def verdicts(self) -> list[ResonanceVerdict]:
        out = [ResonanceVerdict(Verdict.REJECT, self.model.reported_match(v)) for v in self.rejected_values]
        return out if self.final is None else out + [self.final]

    @property
    def trace(self) -> list[tuple[int, float, ResonanceVerdict]]:
        return [(int(j), float(self.activations[j]), v) for j, v in zip(self.tested, self.verdicts)]


@dataclass
class ArtState:
    """Trained (or training) unsupervised model."""

    model: ArtModel
    dim: int
    categories: list = field(default_factory=list)
    cluster_map: list[int] | None = None
    n_presented: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError("input dimension must be >= 1")
        self.model.check_dim(self.dim)
        if self.model.uses_clusters and self.cluster_map is None:
            self.cluster_map = []

    @property
    def kind(self) -> str:
        return self.model.kind

    @property
    def complement(self) -> bool:
        return self.model.complement_coding

    @property
    def n_categories(self) -> int:
        return len(self.categories)

    def copy(self) -> "ArtState":
        # categories are never mutated in place, a shallow list copy suffices
        return dataclasses.replace(
            self,
            categories=list(self.categories),
            cluster_map=None if self.cluster_map is None else list(self.cluster_map),
        )

    def encode(self, x) -> np.ndarray:
        """Validate a raw sample and map it into the model's input space."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.size == 0:
            raise DataError("sample must be a non-empty 1-D vector")
        if x.size != self.dim:
            raise DataError(f"expected {self.dim} features, got {x.size}")
        if not np.all(np.isfinite(x)):
            raise DataError("non-finite feature value")
        if not np.all((x >= 0.0) & (x <= 1.0)):
            raise DataError("features must lie in [0, 1]")
        self.model.check_sample(x)
        return complement_code(x) if self.complement else x

    def ltm_signature(self) -> tuple:
        """Bitwise fingerprint of all long-term memory, counts excluded."""
        cats = []
        for c in self.categories:
            vals = self.model.category_arrays(c)
            cats.append(tuple((k, _bits(v)) for k, v in sorted(vals.items())))
        clusters = None if self.cluster_map is None else tuple(self.cluster_map)
        return (self.kind, self.dim, _params_bits(self.model.params()), tuple(cats), clusters)


def _bits(v) -> bytes:
    return np.asarray(v, dtype=np.float64).tobytes()


def _params_bits(params: dict) -> tuple:
    return tuple(
        (k, _bits(v) if isinstance(v, float) else v) for k, v in sorted(params.items())
    )


def rank_candidates(state: ArtState, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Search order and activations for an encoded sample.

    When the model keeps an uncommitted node in the competition, it appears
    as index ``len(state.categories)``.
    """
    model = state.model
    T = model.activations(state.categories, x) if state.categories else np.empty(0)
    unc = model.uncommitted(x.size)
    if unc is not None:
        T = np.append(T, model.activation(unc, x))
    # stable sort on the negated scores: equal activations keep index order
    order = np.argsort(-T, kind="stable")
    return order, T


def _create(state: ArtState, x: np.ndarray, cluster: int | None = None) -> int:
    model = state.model
    unc = model.uncommitted(x.size)
    cat = model.learn(unc, x) if unc is not None else model.init_category(x)
    state.categories.append(cat)
    if state.cluster_map is not None:
        new_cluster = (max(state.cluster_map) + 1 if state.cluster_map else 0)
        state.cluster_map.append(new_cluster if cluster is None else cluster)
    return len(state.categories) - 1


def _one_hot(k: int, j: int) -> np.ndarray:
    y = np.zeros(k)
    y[j] = 1.0
    return y


def search(state: ArtState, x: np.ndarray, order: np.ndarray, rho: float) -> tuple[int, int, np.ndarray]:
    """First candidate in ``order`` whose verdict is not a rejection.

    Returns ``(position, code, values)``; ``position`` is ``len(order)`` when
    every candidate is rejected. The uncommitted node, when present, always
    accepts.
    """
    model = state.model
    k = len(state.categories)
    values = model.vigilance_values(state.categories, x) if k else np.empty(0)
    codes = model.verdict_codes(values, rho) if k else np.empty(0, dtype=np.int64)
    if order.size > k:
        codes = np.append(codes, ACCEPT)
    hits = np.flatnonzero(codes[order] != REJECT)
    if hits.size == 0:
        return order.size, REJECT, values
    pos = int(hits[0])
    return pos, int(codes[order[pos]]), values


def present(state: ArtState, x) -> PresentOutcome:
    """Present one raw sample: search, resonate, learn or create. Mutates ``state``."""
    x = state.encode(x)
    model = state.model
    cats = state.categories
    k = len(cats)
    order, T = rank_candidates(state, x)
    state.n_presented += 1
    pos, code, values = search(state, x, order, model.rho)

    tested = order[: pos + 1]
    rejected = values[order[:pos]]
    if pos == order.size or order[pos] == k:
        # exhausted, or the uncommitted node won
        J = _create(state, x)
        m = model.match(cats[J], x)
        final = ResonanceVerdict(Verdict.ACCEPT, m) if pos < order.size else None
        return _outcome(state, J, True, m, tested, T, rejected, final)
    j = int(order[pos])
    v = ResonanceVerdict(_VERDICTS[code], model.reported_match(values[j]))
    if code == ACCEPT:
        cats[j] = model.learn(cats[j], x)
        return _outcome(state, j, False, v.match, tested, T, rejected, v)
    J = _create(state, x, cluster=state.cluster_map[j])
    return _outcome(state, J, True, v.match, tested, T, rejected, v)


def _outcome(state, J, created, m, tested, T, rejected, final) -> PresentOutcome:
    cluster = None if state.cluster_map is None else state.cluster_map[J]
    activity = _one_hot(len(state.categories), J)
    return PresentOutcome(J, created, float(m), activity, cluster, tested, T, rejected, final, state.model)


def _as_matrix(data) -> np.ndarray:
    try:
        X = np.asarray(data, dtype=np.float64)
    except ValueError:
        raise DataError("samples have heterogeneous dimensions") from None
    if X.ndim != 2:
        if X.ndim == 1 and X.size == 0:
            raise DataError("empty dataset")
        raise DataError("samples have heterogeneous dimensions")
    if X.shape[0] == 0:
        raise DataError("empty dataset")
    return X


def epoch_order(n: int, shuffle_seed: int | None) -> list[int]:
    return list(range(n)) if shuffle_seed is None else shuffle_seeded(n, shuffle_seed)


def fit(state, data, max_epochs: int = 100, shuffle_seed: int | None = None):
    """Re-present ``data`` until an epoch leaves the LTM bitwise unchanged.

    The presentation order (given order, or one seeded shuffle) is fixed for
    all epochs. Returns ``(state, labels of the last epoch, epochs_run)``.
    """
    X = _as_matrix(data)
    if max_epochs < 1:
        raise ConfigError("max_epochs must be >= 1")
    if X.shape[1] != state.dim:
        raise DataError(f"expected {state.dim} features, got {X.shape[1]}")
    if isinstance(state, ArtState) and not state.categories:
        state.model = state.model.prepare(X)
    order = epoch_order(X.shape[0], shuffle_seed)
    step = (lambda x: present(state, x)) if isinstance(state, ArtState) else state.present

    labels = np.empty(X.shape[0], dtype=np.int64)
    for epoch in range(1, max_epochs + 1):
        prev = state.copy()
        for i in order:
            labels[i] = step(X[i]).label
        if check_convergence(prev, state):
            break
    return state, labels, epoch


def check_convergence(prev, cur) -> bool:
    """True iff both states hold bitwise-identical long-term memory."""
    if prev.kind != cur.kind:
        raise ModelError(f"model kinds differ: {prev.kind} vs {cur.kind}")
    return prev.ltm_signature() == cur.ltm_signature()


def predict(state, x, policy: str = "strict") -> int | None:
    """Label of ``x`` without learning; ``None`` means unassigned.

    ``strict`` requires the top-ranked category to resonate, ``nearest``
    returns it unconditionally.
    """
    if policy not in ("strict", "nearest"):
        raise ConfigError(f"unknown policy {policy!r}")
    if not isinstance(state, ArtState):
        return state.predict(x)
    if not state.categories:
        raise ModelError("model is untrained")
    x = state.encode(x)
    model = state.model
    T = model.activations(state.categories, x)
    J = int(np.argsort(-T, kind="stable")[0])
    if policy == "strict" and model.resonance(state.categories[J], x).verdict is Verdict.REJECT:
        return None
    return J if state.cluster_map is None else state.cluster_map[J]
