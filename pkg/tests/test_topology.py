import numpy as np
import pytest

from artkit import fit
from artkit.errors import ConfigError, DataError, ModelError
from artkit.fuzzy import FuzzyCategory, fa_category_size
from artkit.metrics import adjusted_rand_index
from artkit.topology import (
    TopoModule,
    TopoParams,
    TopoState,
    topo_cleanup,
    topo_clusters,
    topo_predict,
)

import datasets


def module_with(ns, permanent=None, edges=()):
    cats = [FuzzyCategory(np.full(4, 0.1 * (i + 1)), n) for i, n in enumerate(ns)]
    return TopoModule(0.9, cats, list(permanent or [False] * len(ns)), set(edges))


def fixture_state():
    X, y = datasets.two_blobs_noise(7)
    p = datasets.TOPO_FIXTURE
    params = TopoParams(rho=p["rho"], phi=p["phi"], tau=p["tau"], beta2=p["beta2"])
    state, _, _ = fit(TopoState(params, 2), X, p["epochs"])
    return state, X, y


class TestParams:
    def test_rho_b(self):
        assert TopoParams(rho=0.8).rho_b == 0.9

    @pytest.mark.parametrize("kw", [{"phi": 0}, {"tau": 0}, {"beta2": 1.0}, {"rho": -0.1}, {"alpha": 0.0}])
    def test_config(self, kw):
        with pytest.raises(ConfigError):
            TopoParams(**kw)


class TestCleanup:
    def test_promotes_and_prunes(self):
        m = module_with([1, 3, 2], edges={(0, 1), (1, 2)})
        topo_cleanup(m, 2)
        assert [c.n for c in m.categories] == [3, 2]
        assert m.permanent == [True, True]
        assert m.edges == {(0, 1)}
        assert m.removed_count == 1

    def test_permanent_survives(self):
        m = module_with([2])
        topo_cleanup(m, 2)
        for _ in range(3):
            topo_cleanup(m, 5)
        assert len(m.categories) == 1 and m.permanent == [True]


class TestClusters:
    def test_singletons(self):
        m = module_with([5, 5, 5], [True] * 3)
        assert topo_clusters(m) == {0: 0, 1: 1, 2: 2}

    def test_chain(self):
        m = module_with([5, 5, 5], [True] * 3, {(0, 1), (1, 2)})
        assert set(topo_clusters(m).values()) == {0}

    def test_ids_by_smallest_member(self):
        m = module_with([5, 5, 5, 5], [True] * 4, {(1, 3)})
        assert topo_clusters(m) == {0: 0, 1: 1, 2: 2, 3: 1}

    def test_candidates_excluded(self):
        m = module_with([5, 1, 5], [True, False, True], {(0, 1), (1, 2)})
        assert topo_clusters(m) == {0: 0, 2: 1}


class TestPredict:
    def test_exact_point_scores_one(self):
        w = np.array([0.2, 0.4, 0.8, 0.6])
        m = TopoModule(0.9, [FuzzyCategory(w, 5)], [True])
        assert topo_predict(m, w) == 0

    def test_no_permanent_nodes(self):
        with pytest.raises(ModelError):
            topo_predict(module_with([1]), np.full(4, 0.5))


class TestNetwork:
    def test_b_only_sees_permanent_winners(self):
        s = TopoState(TopoParams(rho=0.8, phi=2, tau=3), 2)
        outs = [s.present([0.5, 0.5]) for _ in range(6)]
        assert not any(o.propagated for o in outs[:3])
        assert all(o.propagated for o in outs[3:])
        assert len(s.b.categories) == 1

    def test_second_winner_count_unchanged(self):
        s = TopoState(TopoParams(rho=0.5, phi=1, tau=1000), 2)
        s.present([0.3, 0.3])
        s.present([0.6, 0.6])
        assert len(s.a.categories) == 1
        s.a.categories.append(FuzzyCategory(np.array([0.35, 0.35, 0.65, 0.65]), 1))
        s.a.permanent.append(False)
        out = s.present([0.34, 0.34])
        assert out.second is not None
        assert s.a.categories[out.second].n == 1
        assert (min(out.winner, out.second), max(out.winner, out.second)) in s.a.edges

    def test_counter_conservation(self):
        X, _ = datasets.two_blobs_noise(3)
        s = TopoState(TopoParams(rho=0.85, phi=4, tau=50), 2)
        for x in X:
            s.present(x)
        assert sum(c.n for c in s.a.categories) + s.a.removed_count == len(X)

    def test_edges_reference_live_nodes(self):
        state, _, _ = fixture_state()
        for m in (state.a, state.b):
            for a, b in m.edges:
                assert a < b < len(m.categories)

    def test_module_b_size_bound(self):
        s = TopoState(TopoParams(rho=0.8, phi=2, tau=20), 2)
        for x in datasets.two_blobs_noise(1)[0]:
            s.present(x)
            for c in s.b.categories:
                assert fa_category_size(c) <= 2 * (1 - s.params.rho_b)

    def test_fixture_clusters(self):
        state, X, y = fixture_state()
        assert len(set(topo_clusters(state.b).values())) == 2
        keep = y >= 0
        pred = [state.predict(x) for x in X[keep]]
        assert adjusted_rand_index(pred, y[keep]) == 1.0

    def test_bad_input(self):
        with pytest.raises(DataError):
            TopoState(TopoParams(), 2).present([0.1])
