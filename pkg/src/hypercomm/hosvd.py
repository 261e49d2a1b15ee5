"""HOSVD warm start for the embedding.

The Gram matrix of the mode-1 unfolding of the augmented adjacency tensor is
accumulated directly from the edge list. An edge padded to the multiset ``t``
fills every distinct ordering of ``t`` in the tensor, so the mode-1 fiber of
vertex ``u`` along ``t`` is the set of orderings of ``t - {u}``. Two fibers
overlap exactly when they share that remainder multiset, and then in as many
positions as the remainder has distinct orderings.
"""
from __future__ import annotations

import logging
import math
import warnings
from collections import Counter, defaultdict

import numpy as np

from .hypergraph import Hypergraph, augment

log = logging.getLogger(__name__)


def _orderings(multiset):
    counts = Counter(multiset)
    total = math.factorial(len(multiset))
    for c in counts.values():
        total //= math.factorial(c)
    return total


def unfolding_gram(h: Hypergraph) -> np.ndarray:
    """``M @ M.T`` for the mode-1 unfolding ``M`` of the augmented adjacency tensor.

    Returned as an ``(n + 1, n + 1)`` array indexed by 0-based vertex, the null
    vertex last.
    """
    n, m = h.n, h.m
    groups = defaultdict(list)
    for e in h.edges:
        t = [v - 1 for v in augment(e, m, n)]
        for u in sorted(set(t)):
            rest = list(t)
            rest.remove(u)
            groups[tuple(rest)].append(u)
    G = np.zeros((n + 1, n + 1))
    for rest, members in groups.items():
        idx = np.asarray(members)
        G[np.ix_(idx, idx)] += _orderings(rest)
    return G


def hosvd_init(h: Hypergraph, r: int, seed=0, power=None) -> np.ndarray:
    """Initial ``(n + 1, r)`` embedding from the leading eigenvectors of the unfolding Gram.

    Eigenvector ``j`` is scaled by ``sigma_j ** (1 / m)``, where ``sigma_j``
    is the singular value of the unfolding (so the Gram eigenvalue to the
    power ``1 / (2m)``); pass ``power`` to use another exponent on the Gram
    eigenvalue. Each vector's largest-magnitude entry is made positive and the
    null row is then set to ones.
    Columns without a positive eigenvalue are filled with Gaussian noise of
    standard deviation 1e-3 drawn from ``seed``.
    """
    n, m = h.n, h.m
    if not 1 <= r <= n:
        raise ValueError(f"embedding dimension r must lie in [1, {n}], got {r}")
    if power is None:
        power = 1.0 / (2 * m)
    G = unfolding_gram(h)
    vals, vecs = np.linalg.eigh(G)
    order = np.argsort(vals)[::-1][:r]
    vals, vecs = vals[order], vecs[:, order]
    tol = max(vals[0], 0.0) * (n + 1) * np.finfo(float).eps
    good = vals > tol
    alpha = np.empty((n + 1, r))
    for j in range(r):
        v = vecs[:, j]
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        alpha[:, j] = v * vals[j] ** power if good[j] else 0.0
    if not good.all():
        missing = int((~good).sum())
        msg = f"unfolding Gram has only {r - missing} positive eigenvalues; padding {missing} columns with noise"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        log.warning(msg)
        rng = np.random.default_rng(seed)
        alpha[:, ~good] = rng.normal(0.0, 1e-3, size=(n + 1, missing))
    alpha[n] = 1.0
    return alpha
