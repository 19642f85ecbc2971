import mpmath
import numpy as np
import pytest

import oracles
from artkit import ArtState, fit, present
from artkit.errors import ConfigError
from artkit.probabilistic import (
    VARIANCE_FLOOR,
    BayesCategory,
    BayesianART,
    GaussCategory,
    GaussianART,
    ba_activation,
    ba_learn,
    ba_match,
    ga_log_activation,
)

import datasets


class TestGaussian:
    def test_log_scores_against_direct_domain(self):
        rng = np.random.default_rng(0)
        mus = rng.random((4, 3))
        sig = rng.uniform(0.05, 0.3, (4, 3))
        counts = [1, 4, 2, 7]
        cats = [GaussCategory(m, s, n) for m, s, n in zip(mus, sig, counts)]
        x = rng.random(3)
        got = ga_log_activation(cats, x)
        ref = oracles.gauss_posterior_direct(mus.tolist(), sig.tolist(), counts, x.tolist())
        for g, r in zip(got, ref):
            assert g == pytest.approx(float(mpmath.log(r)), abs=1e-12)

    def test_far_point_does_not_underflow(self):
        cats = [GaussCategory(np.zeros(2), np.full(2, 1e-3)), GaussCategory(np.ones(2), np.full(2, 1e-3))]
        s = ga_log_activation(cats, np.array([0.9, 0.9]))
        assert np.all(np.isfinite(s)) and s[1] > s[0]

    def test_vigilance_in_log_domain(self):
        m = GaussianART(rho=np.exp(-1.0))
        c = GaussCategory(np.zeros(2), np.full(2, 0.5))
        assert m.resonance(c, np.array([0.25, 0.25])).accepted
        assert not m.resonance(c, np.array([0.5, 0.75])).accepted
        # match far below float range still compares correctly
        tiny = GaussianART(rho=1e-300)
        assert not tiny.resonance(GaussCategory(np.zeros(1), np.array([1e-3])), np.ones(1)).accepted

    @pytest.mark.parametrize("kw", [{"rho": 0.0}, {"rho": 1.5}, {"sigma_init": 0.0}])
    def test_config(self, kw):
        with pytest.raises(ConfigError):
            GaussianART(**kw)

    def test_fit_blobs(self):
        X, y = datasets.blobs(0)
        s, labels, _ = fit(ArtState(GaussianART(rho=0.01, sigma_init=0.05), 2), X, 20)
        assert 2 <= s.n_categories <= 20
        assert sum(c.n for c in s.categories) == s.n_presented


class TestBayesian:
    def test_posteriors_against_direct_domain(self):
        rng = np.random.default_rng(1)
        cats = []
        for n in (2, 5, 3):
            A = rng.normal(size=(2, 2)) * 0.1
            cats.append(BayesCategory(rng.random(2), A @ A.T + 0.01 * np.eye(2), n))
        x = rng.random(2)
        got = ba_activation(cats, x)
        ref = oracles.bayes_posterior_direct(
            [c.mu.tolist() for c in cats], [c.cov.tolist() for c in cats], [c.n for c in cats], x.tolist()
        )
        np.testing.assert_allclose(got, [float(r) for r in ref], rtol=1e-10, atol=1e-300)

    def test_learn_full_and_diagonal(self):
        c = BayesCategory(np.zeros(2), 0.01 * np.eye(2), 1)
        full = ba_learn(c, np.array([0.2, 0.2]))
        diag = ba_learn(c, np.array([0.2, 0.2]), diagonal=True)
        assert full.cov[0, 1] != 0.0 and diag.cov[0, 1] == 0.0
        np.testing.assert_allclose(full.mu, [0.1, 0.1])
        # (1/2) 0.01 + (1/2) 0.1^2
        assert full.cov[0, 0] == pytest.approx(0.01)

    def test_variance_floor(self):
        c = BayesCategory(np.zeros(1), np.array([[1e-20]]), 1)
        out = ba_learn(c, np.zeros(1))
        assert out.cov[0, 0] == VARIANCE_FLOOR

    def test_sigma_constraint(self):
        with pytest.raises(ConfigError):
            ArtState(BayesianART(rho=1e-3, sigma_init=0.5), 2)
        ArtState(BayesianART(rho=1e-3, sigma_init=0.01), 2)

    def test_match_ignores_sample(self):
        c = BayesCategory(np.zeros(2), np.diag([0.01, 0.04]))
        m = BayesianART(rho=1e-3)
        assert m.match(c, np.zeros(2)) == m.match(c, np.ones(2))

    def test_volume_vigilance_saturates_category(self):
        # a fresh category absorbs any sample; once its volume exceeds rho it stops learning
        m = BayesianART(rho=1e-9, sigma_init=0.001)
        s = ArtState(m, 2)
        present(s, [0.1, 0.1])
        out = present(s, [0.9, 0.1])
        assert not out.created
        assert ba_match(s.categories[0]) > m.rho
        out = present(s, [0.1, 0.1])
        assert out.created and s.n_categories == 2

    def test_two_identical_samples_halve_covariance(self):
        model = BayesianART(rho=1e-3, sigma_init=0.01, diagonal=True)
        c = model.learn(model.init_category(np.array([0.3, 0.3])), np.array([0.3, 0.3]))
        np.testing.assert_allclose(c.cov, 0.5e-4 * np.eye(2), rtol=1e-15)
        assert ba_match(c) == pytest.approx(1e-8 / 4, rel=1e-12)

    def test_fit_blobs(self):
        X, _ = datasets.blobs(0, n=60)
        s, _, _ = fit(ArtState(BayesianART(rho=1e-4, sigma_init=0.01), 2), X, 3)
        assert sum(c.n for c in s.categories) == s.n_presented
        assert ba_activation(s.categories, X[0]).sum() == pytest.approx(1.0, abs=1e-9)
