"""Matrix-reduction baselines: weighted projection to a graph, and spectral hypergraph partitioning.

Both finish with the same spectral step: take K eigenvectors of a normalized
operator, normalize rows, and run k-means. Vertices with no incident edge
(zero rows) are excluded from k-means and given label 1.
"""
from __future__ import annotations

import itertools
import logging

import numpy as np
import scipy.sparse as sp

from .hypergraph import Hypergraph
from .kmeans import kmeans

log = logging.getLogger(__name__)


def projected_weights(h: Hypergraph) -> np.ndarray:
    """Weighted clique projection: ``W[u, v] = sum over edges containing u, v of 1 / (|e| - 1)``.

    Returned as a dense ``(n, n)`` array indexed by 0-based vertex.
    """
    W = np.zeros((h.n, h.n))
    for e in h.edges:
        if len(e) < 2:
            continue
        w = 1.0 / (len(e) - 1)
        for u, v in itertools.combinations(e, 2):
            W[u - 1, v - 1] += w
            W[v - 1, u - 1] += w
    return W


def incidence_matrix(h: Hypergraph) -> sp.csr_matrix:
    """Sparse ``(n, |E|)`` vertex-edge incidence, columns in size-then-lex edge order."""
    rows, cols = [], []
    for j, e in enumerate(h.sorted_edges()):
        rows.extend(v - 1 for v in e)
        cols.extend([j] * len(e))
    data = np.ones(len(rows))
    return sp.csr_matrix((data, (rows, cols)), shape=(h.n, len(h.edges)))


def hypergraph_laplacian(h: Hypergraph) -> np.ndarray:
    """Normalized hypergraph Laplacian ``I - Dv^-1/2 H De^-1 H^T Dv^-1/2``.

    Rows and columns of zero-degree vertices are left as identity.
    """
    H = incidence_matrix(h)
    dv = np.asarray(H.sum(axis=1)).ravel()
    de = np.asarray(H.sum(axis=0)).ravel()
    inv_sqrt_dv = np.where(dv > 0, 1.0 / np.sqrt(np.maximum(dv, 1e-300)), 0.0)
    A = (H @ sp.diags(1.0 / de) @ H.T).toarray()
    A = inv_sqrt_dv[:, None] * A * inv_sqrt_dv[None, :]
    return np.eye(h.n) - A


def _spectral_labels(vectors, active, K, seed):
    n = vectors.shape[0]
    labels = np.ones(n, dtype=np.int64)
    X = vectors[active]
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    X = X / np.where(norms > 0, norms, 1.0)
    if X.shape[0] >= K:
        labels[active] = kmeans(X, K, seed=seed).labels
    elif X.shape[0]:
        labels[active] = np.arange(1, X.shape[0] + 1)
    if not active.all():
        log.info("%d isolated vertices assigned to community 1", int((~active).sum()))
    return labels


def wptg_detect(h: Hypergraph, K: int, seed=0, debug=False) -> np.ndarray:
    """Spectral clustering of the weighted clique projection. Returns 1-based labels."""
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    W = projected_weights(h)
    if debug:
        assert np.allclose(W, W.T) and np.all(W >= 0) and not np.any(np.diag(W))
    d = W.sum(axis=1)
    active = d > 0
    inv_sqrt = np.where(active, 1.0 / np.sqrt(np.where(active, d, 1.0)), 0.0)
    Nrm = inv_sqrt[:, None] * W * inv_sqrt[None, :]
    # top-K eigenvectors of the normalized adjacency = bottom-K of I - Nrm
    vals, vecs = np.linalg.eigh(Nrm)
    vecs = vecs[:, np.argsort(vals)[::-1][:K]]
    return _spectral_labels(vecs, active, K, seed)


def shp_detect(h: Hypergraph, K: int, seed=0, debug=False) -> np.ndarray:
    """Spectral clustering on the normalized hypergraph Laplacian. Returns 1-based labels."""
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    L = hypergraph_laplacian(h)
    vals, vecs = np.linalg.eigh(L)
    if debug:
        assert np.allclose(L, L.T) and vals.min() > -1e-9
    active = np.zeros(h.n, dtype=bool)
    for e in h.edges:
        active[np.asarray(e) - 1] = True
    # isolated vertices contribute eigenvalue-1 identity rows; rank among the rest
    order = np.argsort(vals, kind="stable")
    vecs = vecs[:, order[:K]]
    return _spectral_labels(vecs, active, K, seed)
