import numpy as np
import pytest

from artkit import ArtState, check_convergence, fit, predict, present
from artkit.engine import MODEL_KINDS, rank_candidates
from artkit.errors import ConfigError, DataError, ModelError
from artkit.fuzzy import ART1, DVFA, FuzzyART, FuzzyCategory
from artkit.geometric import HypersphereART

import datasets


def fuzzy_state(**kw):
    return ArtState(FuzzyART(**kw), 2)


def test_registry_has_all_kinds():
    assert set(MODEL_KINDS) == {"art1", "fuzzy", "dvfa", "hypersphere", "ellipsoid", "gaussian", "bayes"}


class TestPresent:
    def test_empty_state_creates(self):
        s = fuzzy_state()
        out = present(s, [0.3, 0.6])
        assert (out.index, out.created) == (0, True)
        assert out.activity.tolist() == [1.0]
        assert s.categories[0].w.tolist() == [0.3, 0.6, 0.7, 0.4]

    def test_vacuous_vigilance_never_creates(self):
        s = fuzzy_state(rho=0.0)
        present(s, [0.1, 0.1])
        present(s, [0.9, 0.9])
        rng = np.random.default_rng(0)
        for x in rng.random((50, 2)):
            out = present(s, x)
            assert not out.created
        assert s.n_categories == 1

    def test_one_hot_activity(self):
        s = fuzzy_state(rho=0.9)
        for x in datasets.uniform(1, 30, 2):
            out = present(s, x)
            assert out.activity.sum() == 1.0 and out.activity[out.index] == 1.0

    def test_tie_goes_to_lowest_index(self):
        s = fuzzy_state(rho=0.0)
        w = np.array([0.5, 0.5, 0.5, 0.5])
        s.categories = [FuzzyCategory(w.copy()), FuzzyCategory(w.copy())]
        order, T = rank_candidates(s, s.encode([0.5, 0.5]))
        assert T[0] == T[1] and order.tolist() == [0, 1]
        assert present(s, [0.5, 0.5]).index == 0

    def test_search_order_is_descending_activation(self):
        s = fuzzy_state(rho=0.99)
        for x in [[0.1, 0.1], [0.5, 0.5], [0.9, 0.9]]:
            present(s, x)
        out = present(s, [0.45, 0.55])
        acts = [t for _, t, _ in out.trace]
        assert acts == sorted(acts, reverse=True)

    @pytest.mark.parametrize(
        "x,err",
        [([0.1], DataError), ([0.1, np.nan], DataError), ([], DataError), ([0.1, 1.5], DataError)],
    )
    def test_bad_samples(self, x, err):
        with pytest.raises(err):
            present(fuzzy_state(), x)

    def test_counts_increment(self):
        s = fuzzy_state(rho=0.5)
        for _ in range(4):
            present(s, [0.2, 0.2])
        assert s.categories[0].n == 4 and s.n_presented == 4


class TestFit:
    def test_single_sample(self):
        s, labels, epochs = fit(fuzzy_state(), [[0.4, 0.2]], 5)
        assert epochs == 2 and s.n_categories == 1 and labels.tolist() == [0]

    @pytest.mark.parametrize("seed", [None, 1, 2])
    def test_identical_samples(self, seed):
        s, _, _ = fit(fuzzy_state(rho=0.9), [[0.3, 0.3]] * 7, 5, seed)
        assert s.n_categories == 1

    def test_max_epochs_respected(self):
        s, _, epochs = fit(ArtState(FuzzyART(rho=0.7, beta=0.1), 2), datasets.uniform(0, 60, 2), 2)
        assert epochs == 2

    def test_shuffle_changes_order_not_determinism(self):
        X = datasets.uniform(3, 80, 2)
        a = fit(fuzzy_state(rho=0.8), X, 20, 5)
        b = fit(fuzzy_state(rho=0.8), X, 20, 5)
        assert a[0].ltm_signature() == b[0].ltm_signature()
        assert a[1].tolist() == b[1].tolist()

    def test_errors(self):
        with pytest.raises(DataError):
            fit(fuzzy_state(), [], 3)
        with pytest.raises(DataError):
            fit(fuzzy_state(), [[0.1, 0.2], [0.3]], 3)
        with pytest.raises(DataError):
            fit(fuzzy_state(), [[0.1, 0.2, 0.3]], 3)
        with pytest.raises(ConfigError):
            fit(fuzzy_state(), [[0.1, 0.2]], 0)

    def test_geometric_extent_set_from_data(self):
        s, _, _ = fit(ArtState(HypersphereART(rho=0.5), 2), [[0.0, 0.0], [1.0, 1.0]], 3)
        assert s.model.rbar == pytest.approx(np.sqrt(2) / 2)


class TestConvergence:
    def test_self(self):
        s, _, _ = fit(fuzzy_state(), datasets.four_pairs(), 5)
        assert check_convergence(s, s.copy())

    def test_detects_bit_change(self):
        s, _, _ = fit(fuzzy_state(), datasets.four_pairs(), 5)
        t = s.copy()
        w = t.categories[0].w.copy()
        w[0] = np.nextafter(w[0], 0.0)
        t.categories[0] = FuzzyCategory(w, t.categories[0].n)
        assert not check_convergence(s, t)

    def test_counts_ignored(self):
        s, _, _ = fit(fuzzy_state(), datasets.four_pairs(), 5)
        t = s.copy()
        t.categories[0] = FuzzyCategory(t.categories[0].w, 99)
        assert check_convergence(s, t)

    def test_kind_mismatch(self):
        with pytest.raises(ModelError):
            check_convergence(fuzzy_state(), ArtState(DVFA(), 2))


class TestPredict:
    def test_strict_and_nearest(self):
        s, _, _ = fit(fuzzy_state(rho=0.9), [[0.1, 0.1], [0.9, 0.9]], 5)
        assert predict(s, [0.1, 0.1]) == 0
        assert predict(s, [0.9, 0.9]) == 1
        assert predict(s, [0.5, 0.5]) is None
        assert predict(s, [0.5, 0.5], "nearest") in (0, 1)

    def test_does_not_learn(self):
        s, _, _ = fit(fuzzy_state(rho=0.5), datasets.four_pairs(), 5)
        sig = s.ltm_signature()
        for x in datasets.uniform(0, 20, 2):
            predict(s, x, "nearest")
        assert s.ltm_signature() == sig

    def test_untrained(self):
        with pytest.raises(ModelError):
            predict(fuzzy_state(), [0.1, 0.1])

    def test_unknown_policy(self):
        with pytest.raises(ConfigError):
            predict(fuzzy_state(), [0.1, 0.1], "closest")


class TestArt1Engine:
    def test_uncommitted_node_creates(self):
        s = ArtState(ART1(rho=0.9), 4)
        out = present(s, [1, 0, 1, 0])
        assert out.created and s.categories[0].td.tolist() == [1, 0, 1, 0]

    def test_binary_check(self):
        with pytest.raises(DataError):
            present(ArtState(ART1(), 3), [0.5, 0, 1])
        with pytest.raises(DataError):
            present(ArtState(ART1(), 3), [0, 0, 0])

    def test_subset_resonates(self):
        s = ArtState(ART1(rho=0.5), 4)
        present(s, [1, 1, 1, 0])
        out = present(s, [1, 1, 0, 0])
        assert out.index == 0 and s.categories[0].td.tolist() == [1, 1, 0, 0]
