import itertools

import numpy as np
import pytest

from hypercomm.baselines import (
    hypergraph_laplacian,
    incidence_matrix,
    projected_weights,
    shp_detect,
    wptg_detect,
)
from hypercomm.hypergraph import Hypergraph
from hypercomm.metrics import hamming_error


def _two_blocks(n_each=10, seed=0):
    """Dense triangles inside two blocks and a few across."""
    rng = np.random.default_rng(seed)
    blocks = [range(1, n_each + 1), range(n_each + 1, 2 * n_each + 1)]
    edges = set()
    for block in blocks:
        for tri in itertools.combinations(block, 3):
            if rng.random() < 0.5:
                edges.add(tri)
    for _ in range(5):
        edges.add(tuple(sorted((int(rng.integers(1, n_each + 1)), int(rng.integers(n_each + 1, 2 * n_each + 1))))))
    truth = np.repeat([1, 2], n_each)
    return Hypergraph(2 * n_each, 3, frozenset(edges)), truth


class TestConstructions:
    def test_projected_weights_by_hand(self):
        h = Hypergraph(4, 3, frozenset({(1, 2, 3), (1, 2), (4,)}))
        W = projected_weights(h)
        assert W[0, 1] == 1.5 and W[0, 2] == 0.5 and W[1, 2] == 0.5
        assert np.all(W[3] == 0) and np.array_equal(W, W.T)

    def test_incidence(self):
        h = Hypergraph(3, 2, frozenset({(1, 2), (3,)}))
        H = incidence_matrix(h).toarray()
        # columns in size-then-lex order: (3,), (1, 2)
        assert H.tolist() == [[0, 1], [0, 1], [1, 0]]

    def test_laplacian_against_dense_formula(self):
        h, _ = _two_blocks(5)
        H = incidence_matrix(h).toarray()
        dv, de = H.sum(axis=1), H.sum(axis=0)
        A = np.diag(dv**-0.5) @ H @ np.diag(1 / de) @ H.T @ np.diag(dv**-0.5)
        np.testing.assert_allclose(hypergraph_laplacian(h), np.eye(h.n) - A, atol=1e-12)
        vals = np.linalg.eigvalsh(hypergraph_laplacian(h))
        assert vals.min() > -1e-10 and vals.max() < 2 + 1e-10


class TestDetectors:
    @pytest.mark.parametrize("detect", [wptg_detect, shp_detect])
    def test_two_blocks(self, detect):
        h, truth = _two_blocks()
        assert hamming_error(truth, detect(h, 2, seed=0, debug=True), 2) == 0.0

    @pytest.mark.parametrize("detect", [wptg_detect, shp_detect])
    def test_isolated_vertices_get_label_one(self, detect):
        h, _ = _two_blocks(6)
        bigger = Hypergraph(h.n + 2, h.m, h.edges)
        labels = detect(bigger, 2)
        assert labels[-2:].tolist() == [1, 1]
        assert set(labels) <= {1, 2}

    @pytest.mark.parametrize("detect", [wptg_detect, shp_detect])
    def test_bad_k(self, detect):
        with pytest.raises(ValueError):
            detect(_two_blocks(4)[0], 1)

    @pytest.mark.parametrize("detect", [wptg_detect, shp_detect])
    def test_deterministic(self, detect):
        h, _ = _two_blocks(8, seed=3)
        assert np.array_equal(detect(h, 3, seed=4), detect(h, 3, seed=4))
