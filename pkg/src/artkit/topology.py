"""TopoART: two cascaded Fuzzy ART modules with noise pruning and edge learning.

Module A filters noise for module B: a sample reaches B only when A's
resonant category is permanent. Each module links its first and second
winner, and clusters are the connected components over permanent nodes.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .engine import _params_bits, _bits
from .errors import ConfigError, DataError, ModelError
from .fuzzy import FuzzyCategory, fa_learn, fa_match, _fa_scores
from .preprocess import complement_code

__all__ = [
    "TopoParams",
    "TopoModule",
    "TopoOutcome",
    "TopoState",
    "topo_present",
    "topo_cleanup",
    "topo_clusters",
    "topo_activation",
    "topo_predict",
]


@dataclass(frozen=True)
class TopoParams:
    """Hyperparameters shared by both modules; ``rho_b`` is derived."""

    rho: float = 0.9
    phi: int = 3
    tau: int = 100
    beta2: float = 0.6
    alpha: float = 0.001

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError("rho must lie in [0, 1]")
        if self.phi < 1 or self.tau < 1:
            raise ConfigError("phi and tau must be >= 1")
        if not 0.0 <= self.beta2 < 1.0:
            raise ConfigError("beta2 must lie in [0, 1)")
        if not self.alpha > 0.0:
            raise ConfigError("alpha must be > 0")

    @property
    def rho_b(self) -> float:
        return (self.rho + 1.0) / 2.0


@dataclass
class TopoModule:
    """One Fuzzy ART layer with counters, permanence flags and an edge set."""

    rho: float
    categories: list[FuzzyCategory] = field(default_factory=list)
    permanent: list[bool] = field(default_factory=list)
    edges: set[tuple[int, int]] = field(default_factory=set)
    clock: int = 0
    removed_count: int = 0

    def copy(self) -> "TopoModule":
        return dataclasses.replace(
            self,
            categories=list(self.categories),
            permanent=list(self.permanent),
            edges=set(self.edges),
        )

    def neighbours(self, j: int) -> set[int]:
        return {b if a == j else a for a, b in self.edges if j in (a, b)}


@dataclass
class TopoOutcome:
    winner: int
    second: int | None
    created: bool
    propagated: bool
    winner_b: int | None = None

    @property
    def label(self) -> int:
        return self.winner


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _module_step(module: TopoModule, x: np.ndarray, params: TopoParams) -> tuple[int, int | None, bool]:
    cats = module.categories
    J1 = J2 = None
    if cats:
        T = _fa_scores(np.array([c.w for c in cats]), x, params.alpha)
        for j in np.argsort(-T, kind="stable"):
            j = int(j)
            if fa_match(cats[j], x) >= module.rho:
                if J1 is None:
                    J1 = j
                else:
                    J2 = j
                    break
    created = J1 is None
    if created:
        cats.append(FuzzyCategory(np.minimum(x, 1.0), 1))
        module.permanent.append(False)
        J1 = len(cats) - 1
    else:
        cats[J1] = fa_learn(cats[J1], x, 1.0)
        if J2 is not None:
            # partial learning only; the second winner's counter stays put
            c = cats[J2]
            cats[J2] = FuzzyCategory(fa_learn(c, x, params.beta2).w, c.n)
            module.edges.add(_edge(J1, J2))
    return J1, J2, created


def topo_cleanup(module: TopoModule, phi: int) -> TopoModule:
    """Promote categories with ``n >= phi``, then drop the remaining candidates with ``n < phi``."""
    for j, c in enumerate(module.categories):
        if c.n >= phi:
            module.permanent[j] = True
    keep = [j for j, c in enumerate(module.categories) if module.permanent[j] or c.n >= phi]
    remap = {old: new for new, old in enumerate(keep)}
    module.removed_count += sum(c.n for j, c in enumerate(module.categories) if j not in remap)
    module.categories = [module.categories[j] for j in keep]
    module.permanent = [module.permanent[j] for j in keep]
    module.edges = {
        _edge(remap[a], remap[b]) for a, b in module.edges if a in remap and b in remap
    }
    return module


def topo_clusters(module: TopoModule) -> dict[int, int]:
    """Map each permanent category to a cluster id.

    Ids are dense and ordered by the smallest member index.
    """
    perm = [j for j, p in enumerate(module.permanent) if p]
    if not perm:
        return {}
    pos = {j: i for i, j in enumerate(perm)}
    rows, cols = [], []
    for a, b in module.edges:
        if a in pos and b in pos:
            rows.append(pos[a])
            cols.append(pos[b])
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(perm), len(perm)))
    _, comp = connected_components(graph, directed=False)
    # relabel components in order of first (smallest) member
    dense: dict[int, int] = {}
    out = {}
    for j, c in zip(perm, comp):
        out[j] = dense.setdefault(int(c), len(dense))
    return out


def topo_activation(c: FuzzyCategory, x: np.ndarray) -> float:
    """Size-independent prediction score ``1 - |(x ^ w) - w| / |x|``."""
    diff = np.minimum(x, c.w) - c.w
    return 1.0 - float(np.abs(diff).sum()) / float(x.sum())


def topo_predict(module: TopoModule, x: np.ndarray) -> int:
    """Cluster id of the best permanent category; vigilance is ignored."""
    perm = [j for j, p in enumerate(module.permanent) if p]
    if not perm:
        raise ModelError("module has no permanent categories")
    scores = [topo_activation(module.categories[j], x) for j in perm]
    best = perm[int(np.argmax(scores))]
    return topo_clusters(module)[best]


@dataclass
class TopoState:
    """TopoART network: module A (vigilance ``rho``) feeding module B (``rho_b``)."""

    params: TopoParams
    dim: int
    a: TopoModule = None
    b: TopoModule = None
    n_presented: int = 0

    kind = "topoart"
    complement = True

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError("input dimension must be >= 1")
        if self.a is None:
            self.a = TopoModule(self.params.rho)
        if self.b is None:
            self.b = TopoModule(self.params.rho_b)

    @property
    def n_categories(self) -> int:
        return len(self.b.categories)

    def encode(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.size != self.dim:
            raise DataError(f"expected {self.dim} features")
        if not np.all(np.isfinite(x)):
            raise DataError("non-finite feature value")
        return complement_code(x)

    def copy(self) -> "TopoState":
        return dataclasses.replace(self, a=self.a.copy(), b=self.b.copy())

    def present(self, x) -> TopoOutcome:
        return topo_present(self, x)

    def predict(self, x, module: str = "b") -> int:
        return topo_predict(self.b if module == "b" else self.a, self.encode(x))

    def ltm_signature(self) -> tuple:
        def sig(m: TopoModule):
            return (
                tuple(_bits(c.w) for c in m.categories),
                tuple(m.permanent),
                tuple(sorted(m.edges)),
            )

        params = _params_bits(dataclasses.asdict(self.params))
        return (self.kind, self.dim, params, sig(self.a), sig(self.b))


def _tick(module: TopoModule, phi: int, tau: int) -> None:
    module.clock += 1
    if module.clock % tau == 0:
        topo_cleanup(module, phi)


def topo_present(state: TopoState, x) -> TopoOutcome:
    """Present one raw sample to module A and, if A's winner is permanent, to B."""
    x = state.encode(x)
    p = state.params
    state.n_presented += 1
    J1, J2, created = _module_step(state.a, x, p)
    propagated = state.a.permanent[J1]
    out = TopoOutcome(J1, J2, created, propagated)
    if propagated:
        out.winner_b = _module_step(state.b, x, p)[0]
        _tick(state.b, p.phi, p.tau)
    _tick(state.a, p.phi, p.tau)
    return out
