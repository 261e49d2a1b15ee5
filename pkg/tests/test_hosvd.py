import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypercomm.hosvd import hosvd_init, unfolding_gram
from hypercomm.hypergraph import Hypergraph

from oracles import dense_adjacency, random_hypergraph


class TestUnfoldingGram:
    @pytest.mark.parametrize("seed", range(12))
    def test_matches_dense_unfolding(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 7))
        m = int(rng.integers(2, min(4, n) + 1))
        h = random_hypergraph(rng, n, m, density=0.4)
        M = dense_adjacency(h).reshape(n + 1, -1)
        np.testing.assert_array_equal(unfolding_gram(h), M @ M.T)

    def test_symmetric_psd(self):
        h = random_hypergraph(np.random.default_rng(1), 6, 3)
        G = unfolding_gram(h)
        assert np.array_equal(G, G.T)
        assert np.linalg.eigvalsh(G).min() > -1e-9


class TestHosvdInit:
    def test_shape_null_row_and_scaling(self):
        rng = np.random.default_rng(2)
        h = random_hypergraph(rng, 6, 3, density=0.5)
        alpha = hosvd_init(h, 3)
        assert alpha.shape == (7, 3)
        assert np.all(alpha[6] == 1.0)
        # columns are eigenvectors of the unfolding Gram scaled by its singular values to the 1/m
        M = dense_adjacency(h).reshape(7, -1)
        U, S, _ = np.linalg.svd(M)
        for j in range(3):
            u = U[:, j] * np.sign(U[np.argmax(np.abs(U[:, j])), j])
            np.testing.assert_allclose(alpha[:6, j], (u * S[j] ** (1 / 3))[:6], atol=1e-10)

    def test_power_argument(self):
        h = random_hypergraph(np.random.default_rng(3), 6, 3, density=0.5)
        vals = np.sort(np.linalg.eigvalsh(unfolding_gram(h)))[::-1]
        a1 = hosvd_init(h, 2, power=1.0)
        a0 = hosvd_init(h, 2, power=0.0)
        # power 0 leaves unit eigenvectors (minus the overwritten null entry)
        assert np.all(np.linalg.norm(a0[:-1], axis=0) <= 1.0 + 1e-12)
        ratio = np.abs(a1[:-1]).sum(axis=0) / np.abs(a0[:-1]).sum(axis=0)
        np.testing.assert_allclose(ratio, vals[:2], rtol=1e-9)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_sign_convention(self, seed):
        h = random_hypergraph(np.random.default_rng(seed), 6, 3, density=0.4)
        if not h.edges:
            return
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            alpha = hosvd_init(h, 2)
        G = unfolding_gram(h)
        vals, vecs = np.linalg.eigh(G)
        top = vecs[:, np.argsort(vals)[::-1][:2]]
        for j in range(2):
            if vals.max() <= 0:
                continue
            col = top[:, j]
            # the largest-magnitude entry of the scaled eigenvector is positive
            k = np.argmax(np.abs(col))
            if k < 6:
                assert alpha[k, j] > 0

    def test_rank_deficient_pads_with_noise(self):
        h = Hypergraph(5, 2, frozenset({(1, 2)}))
        with pytest.warns(RuntimeWarning):
            alpha = hosvd_init(h, 5, seed=4)
        assert np.all(alpha[5] == 1.0)
        noisy = alpha[:5, -1]
        assert 0 < np.abs(noisy).max() < 0.01
        with pytest.warns(RuntimeWarning):
            again = hosvd_init(h, 5, seed=4)
        np.testing.assert_array_equal(alpha, again)

    def test_bad_rank(self):
        h = Hypergraph(3, 2, frozenset({(1, 2)}))
        with pytest.raises(ValueError):
            hosvd_init(h, 4)
        with pytest.raises(ValueError):
            hosvd_init(h, 0)
