"""Simplified ARTMAP: an unsupervised module plus a permanent category->class map.

A wrong prediction triggers match tracking: the resonant category is
inhibited for the rest of the presentation and the vigilance moves to just
past its match value (MT+), or just short of it (MT-), before the search
resumes.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .engine import ACCEPT, ArtState, Verdict, _as_matrix, _create, epoch_order, rank_candidates
from .errors import ConfigError, DataError, ModelError

__all__ = ["SfamState", "TrainOutcome", "sfam_train_step", "sfam_fit", "sfam_predict"]


@dataclass
class SfamState:
    """Simplified ARTMAP state.

    ``class_map[j]`` is the class of category ``j`` and never changes once set.
    ``epsilon`` is signed: positive selects MT+, negative selects MT-.
    """

    inner: ArtState
    class_map: list[int] = field(default_factory=list)
    epsilon: float = 0.001

    def __post_init__(self):
        if self.inner.cluster_map is not None:
            raise ConfigError(f"{self.inner.kind} cannot serve as the ARTMAP input module")
        if self.epsilon == 0.0:
            raise ConfigError("epsilon must be non-zero")

    kind = "sfam"

    @property
    def mode(self) -> str:
        return "plus" if self.epsilon > 0 else "minus"

    @property
    def rho_bar(self) -> float:
        return self.inner.model.rho

    @property
    def dim(self) -> int:
        return self.inner.dim

    def copy(self) -> "SfamState":
        return dataclasses.replace(self, inner=self.inner.copy(), class_map=list(self.class_map))

    def ltm_signature(self) -> tuple:
        return (self.inner.ltm_signature(), tuple(self.class_map), self.epsilon)

    def present(self, x, label: int) -> "TrainOutcome":
        return sfam_train_step(self, x, label)


@dataclass
class TrainOutcome:
    index: int
    created: bool
    # categories inhibited by match tracking, with the vigilance in force when each was rejected
    inhibited: list[tuple[int, float, float]] = field(default_factory=list)
    rho_final: float = 0.0

    @property
    def label(self) -> int:
        return self.index


def sfam_train_step(state: SfamState, x, label: int) -> TrainOutcome:
    """Learn one labelled sample; vigilance starts from its baseline every call."""
    label = int(label)
    if label < 0:
        raise DataError("class ids must be non-negative")
    inner = state.inner
    model = inner.model
    x = inner.encode(x)
    inner.n_presented += 1
    cats = inner.categories
    order, _ = rank_candidates(inner, x)
    # the uncommitted node (if any) ends the search: creation follows
    stop = np.flatnonzero(order == len(cats))
    if stop.size:
        order = order[: stop[0]]
    values = model.vigilance_values(cats, x) if cats else np.empty(0)
    rho = model.rho
    inhibited: list[tuple[int, float, float]] = []

    start = 0
    while start < order.size:
        rest = order[start:]
        hits = np.flatnonzero(model.verdict_codes(values[rest], rho) == ACCEPT)
        if hits.size == 0:
            break
        j = int(rest[hits[0]])
        m = model.reported_match(values[j])
        if state.class_map[j] == label:
            cats[j] = model.learn(cats[j], x)
            return TrainOutcome(j, False, inhibited, rho)
        inhibited.append((j, m, rho))
        mag = abs(state.epsilon)
        rho = model.tracked_rho(m, mag if state.epsilon > 0 else -mag)
        start += int(hits[0]) + 1

    J = _create(inner, x)
    state.class_map.append(label)
    return TrainOutcome(J, True, inhibited, rho)


def sfam_predict(state: SfamState, x, strict: bool = False) -> int | None:
    """Class of the winner-take-all category; vigilance only checked when ``strict``."""
    inner = state.inner
    if not inner.categories:
        raise ModelError("model is untrained")
    x = inner.encode(x)
    T = inner.model.activations(inner.categories, x)
    J = int(np.argsort(-T, kind="stable")[0])
    if strict and inner.model.resonance(inner.categories[J], x).verdict is not Verdict.ACCEPT:
        return None
    return state.class_map[J]


def sfam_fit(state: SfamState, data, labels, max_epochs: int = 100, shuffle_seed: int | None = None):
    """Epoch driver; stops when an epoch changes no weight, map entry or category count.

    Returns ``(state, winning categories of the last epoch, epochs_run)``.
    """
    X = _as_matrix(data)
    y = np.asarray(labels, dtype=np.int64)
    if y.shape != (X.shape[0],):
        raise DataError("need exactly one label per sample")
    if max_epochs < 1:
        raise ConfigError("max_epochs must be >= 1")
    if not state.inner.categories:
        state.inner.model = state.inner.model.prepare(X)
    order = epoch_order(X.shape[0], shuffle_seed)
    winners = np.empty(X.shape[0], dtype=np.int64)
    for epoch in range(1, max_epochs + 1):
        prev = state.ltm_signature()
        for i in order:
            winners[i] = sfam_train_step(state, X[i], y[i]).index
        if state.ltm_signature() == prev:
            break
    return state, winners, epoch
