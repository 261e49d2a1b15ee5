"""Community recovery error and probability-tensor distance."""
from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linear_sum_assignment

from .hypergraph import phi
from .model import iter_theta_blocks, link_prob


def _check_labels(truth, pred, K):
    truth = np.asarray(truth)
    pred = np.asarray(pred)
    if truth.shape != pred.shape or truth.ndim != 1:
        raise ValueError(f"label vectors differ in shape: {truth.shape} vs {pred.shape}")
    if truth.size == 0:
        raise ValueError("label vectors are empty")
    for name, lab in (("truth", truth), ("pred", pred)):
        if lab.min() < 1 or lab.max() > K:
            raise ValueError(f"{name} labels must lie in [1, {K}]")
    return truth - 1, pred - 1


def confusion(truth, pred, K) -> np.ndarray:
    t, p = _check_labels(truth, pred, K)
    C = np.zeros((K, K), dtype=np.int64)
    np.add.at(C, (t, p), 1)
    return C


def hamming_error(truth, pred, K) -> float:
    """Fraction of vertices misclassified under the best relabeling of ``pred``."""
    C = confusion(truth, pred, K)
    rows, cols = linear_sum_assignment(C, maximize=True)
    total = int(C.sum())
    return (total - int(C[rows, cols].sum())) / total


def hamming_error_exhaustive(truth, pred, K) -> float:
    """Same quantity by enumerating all K! relabelings."""
    t, p = _check_labels(truth, pred, K)
    best = t.size
    for perm in itertools.permutations(range(K)):
        best = min(best, int(np.sum(t != np.asarray(perm)[p])))
    return best / t.size


def hellinger(alpha_hat, truth, n, m, s_n) -> float:
    """Root mean squared Hellinger distance between edge laws over all candidate sets.

    ``truth`` is a planted embedding array or anything with an ``alpha``
    attribute (such as a theta oracle).
    """
    alpha_star = getattr(truth, "alpha", truth)
    total = 0.0
    blocks_hat = iter_theta_blocks(alpha_hat, n, m)
    blocks_star = iter_theta_blocks(alpha_star, n, m)
    for (_, t_hat), (_, t_star) in zip(blocks_hat, blocks_star):
        p_hat = link_prob(t_hat, s_n)
        p_star = link_prob(t_star, s_n)
        d2 = (np.sqrt(p_hat) - np.sqrt(p_star)) ** 2 + (
            np.sqrt(1.0 - p_hat) - np.sqrt(1.0 - p_star)
        ) ** 2
        total += d2.sum()
    return float(np.sqrt(total / phi(n, min(m, n))))
