import math

import numpy as np
import pytest

from hypercomm.errors import NumericalFailure
from hypercomm.hosvd import hosvd_init
from hypercomm.hypergraph import Hypergraph, phi
from hypercomm.metrics import hamming_error
from hypercomm.model import ModelParams, objective
from hypercomm.optimizer import AUTO, FitConfig, default_eta, default_lambdas, fit
from hypercomm.synth import generate_scenario2

from oracles import random_hypergraph


@pytest.fixture(scope="module")
def planted():
    return generate_scenario2(n=60, K=2, m=3, r=3, s_n=0.5, seed=2)


class TestConfig:
    def test_auto_lambdas(self):
        lam0, lam1 = default_lambdas(300, 3)
        assert lam0 == pytest.approx(1e-6 / 300)
        assert lam1 == pytest.approx(1e-6 * math.sqrt(300) * math.log(300))

    def test_resolve_expands_auto(self, planted):
        h, _ = planted
        cfg = FitConfig(K=2, r=3).resolve(h)
        assert cfg.s_n == pytest.approx(len(h.edges) / phi(60, 3))
        assert (cfg.lambda0, cfg.lambda1) == default_lambdas(60, 3)
        assert cfg.eta0 == pytest.approx(default_eta(60, 3, cfg.s_n))
        assert AUTO not in cfg.to_dict().values()

    def test_explicit_values_kept(self, planted):
        h, _ = planted
        cfg = FitConfig(K=2, r=3, s_n=0.3, lambda0=0.0, lambda1=2.0, eta0=1.0).resolve(h)
        assert (cfg.s_n, cfg.lambda0, cfg.lambda1, cfg.eta0) == (0.3, 0.0, 2.0, 1.0)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(K=1, r=2), dict(K=61, r=2), dict(K=2, r=0), dict(K=2, r=61), dict(K=2, r=2, eta0=-1.0),
         dict(K=2, r=2, tol=0.0), dict(K=2, r=2, s_n=1.5), dict(K=2, r=2, c0=0.0)],
    )
    def test_invalid(self, planted, kwargs):
        with pytest.raises(ValueError):
            FitConfig(**kwargs).resolve(planted[0])


class TestFit:
    def test_recovers_planted_partition(self, planted):
        h, truth = planted
        # precondition: a strongly separated draw
        c = truth.centers_star
        assert np.linalg.norm(c[0] - c[1]) > 2.0
        res = fit(h, FitConfig(K=2, r=3, s_n=0.5, seed=0))
        assert hamming_error(truth.labels_star, res.labels, 2) <= 0.05

    def test_contract(self, planted):
        h, _ = planted
        res = fit(h, FitConfig(K=2, r=3, s_n=0.5, max_outer=40, seed=2))
        assert res.alpha_hat.shape == (61, 3)
        assert np.all(res.alpha_hat[60] == 1.0)
        assert res.centers.shape == (3, 3) and np.all(res.centers[2] == 1.0)
        assert len(res.loss_trace) == res.outer_iters + 1 == len(res.eta_trace)
        assert np.all(np.diff(res.loss_trace) <= 0)
        assert np.all(np.diff(res.eta_trace) <= 0)
        assert set(res.labels) <= {1, 2}
        with pytest.raises(ValueError):
            res.alpha_hat[0, 0] = 5.0

    def test_trace_matches_objective(self, planted):
        h, _ = planted
        res = fit(h, FitConfig(K=2, r=3, s_n=0.5, max_outer=10, seed=0))
        Y = res.centers[np.append(res.labels - 1, 2)]
        value = objective(res.alpha_hat, h, res.config.params(), Y)
        assert res.loss_trace[-1] == pytest.approx(value, rel=1e-10)

    def test_bitwise_reproducible(self, planted):
        h, _ = planted
        cfg = FitConfig(K=2, r=3, s_n=0.5, max_outer=25, seed=7)
        a, b = fit(h, cfg), fit(h, cfg)
        assert np.array_equal(a.alpha_hat, b.alpha_hat)
        assert np.array_equal(a.labels, b.labels)
        assert a.loss_trace == b.loss_trace

    def test_starts_from_hosvd(self, planted):
        h, _ = planted
        res = fit(h, FitConfig(K=2, r=3, s_n=0.5, max_outer=1))
        np.testing.assert_array_equal(res.alpha_init, hosvd_init(h, 3, seed=0))

    def test_iteration_cap(self, planted):
        h, _ = planted
        res = fit(h, FitConfig(K=2, r=3, s_n=0.5, max_outer=3, tol=1e-300))
        assert res.outer_iters == 3 and not res.converged

    def test_zero_iterations(self, planted):
        h, _ = planted
        res = fit(h, FitConfig(K=2, r=3, s_n=0.5, max_outer=0))
        assert res.outer_iters == 0 and res.loss_trace == (res.loss_trace[0],)
        np.testing.assert_array_equal(res.alpha_hat, res.alpha_init)

    def test_huge_step_is_halved(self, planted):
        h, _ = planted
        res = fit(h, FitConfig(K=2, r=3, s_n=0.5, eta0=1e12, max_outer=5))
        assert res.final_eta < 1e12
        assert np.all(np.diff(res.loss_trace) <= 0)

    def test_row_norm_cap(self, planted):
        h, _ = planted
        res = fit(h, FitConfig(K=2, r=3, s_n=0.5, c0=0.5, max_outer=10))
        assert np.linalg.norm(res.alpha_hat[:-1], axis=1).max() <= 0.5 * (1 + 1e-12)

    def test_custom_start(self):
        h = random_hypergraph(np.random.default_rng(0), 8, 3, density=0.3)
        alpha0 = np.random.default_rng(1).normal(size=(9, 2))
        res = fit(h, FitConfig(K=2, r=2, max_outer=5), alpha0=alpha0)
        assert np.all(res.alpha_init[8] == 1.0)
        with pytest.raises(ValueError):
            fit(h, FitConfig(K=2, r=2), alpha0=np.zeros((8, 2)))

    def test_non_finite_start_raises(self):
        h = random_hypergraph(np.random.default_rng(0), 6, 3, density=0.3)
        alpha0 = np.full((7, 2), np.nan)
        with pytest.raises(NumericalFailure) as info:
            fit(h, FitConfig(K=2, r=2, s_n=0.5), alpha0=alpha0)
        assert info.value.iteration == 0

    def test_objective_decreases_from_start(self, planted):
        h, _ = planted
        res = fit(h, FitConfig(K=2, r=3, s_n=0.5, max_outer=30))
        assert res.loss_trace[-1] < res.loss_trace[0]
        params = ModelParams(0.5, *default_lambdas(60, 3))
        assert objective(res.alpha_hat, h, params) < objective(res.alpha_init, h, params)
