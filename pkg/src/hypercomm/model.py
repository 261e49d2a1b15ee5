"""Hypergraph embedding likelihood, penalties and analytic gradient.

An embedding is an ``(n + 1, r)`` float array whose last row (the null vertex)
is all ones. For a vertex set ``S`` the natural parameter is
``theta_S = sum_j prod_{i in S} alpha[i, j]`` and the edge probability is
``s_n * logistic(theta_S)``.

Sums over candidate sets run block by block (see
:func:`hypercomm.hypergraph.prefix_blocks`): for a fixed prefix the thetas of
all pair completions form one matrix product, so nothing of size ``n ** m`` is
ever allocated and the accumulation order is fixed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph, phi, prefix_blocks


@dataclass(frozen=True)
class ModelParams:
    s_n: float
    lambda0: float = 0.0
    lambda1: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.s_n <= 1.0:
            raise ValueError(f"s_n must lie in (0, 1], got {self.s_n}")
        if self.lambda0 < 0 or self.lambda1 < 0:
            raise ValueError("penalty weights must be non-negative")


def make_embedding(rows) -> np.ndarray:
    """Append the all-ones null-vertex row to an ``(n, r)`` array."""
    rows = np.asarray(rows, dtype=float)
    return np.vstack([rows, np.ones((1, rows.shape[1]))])


def check_embedding(alpha, n=None, c0=None) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 2 or alpha.shape[0] < 2:
        raise ValueError(f"embedding must be a 2-d (n+1, r) array, got shape {alpha.shape}")
    if n is not None and alpha.shape[0] != n + 1:
        raise ValueError(f"embedding has {alpha.shape[0]} rows, expected {n + 1}")
    if not np.all(alpha[-1] == 1.0):
        raise ValueError("null-vertex row of the embedding must be all ones")
    if not np.all(np.isfinite(alpha)):
        raise ValueError("embedding has non-finite entries")
    if c0 is not None and np.any(np.linalg.norm(alpha[:-1], axis=1) > c0 * (1 + 1e-12)):
        raise ValueError(f"embedding row norm exceeds cap {c0}")
    return alpha


def theta(alpha, s) -> float:
    """Natural parameter of vertex set ``s`` (1-based ids)."""
    alpha = np.asarray(alpha, dtype=float)
    n = alpha.shape[0] - 1
    idx = sorted(set(s))
    if not idx:
        raise ValueError("vertex set must be non-empty")
    if idx[0] < 1 or idx[-1] > n:
        raise ValueError(f"vertex set {tuple(idx)} out of range [1, {n}]")
    return float(np.prod(alpha[np.asarray(idx) - 1], axis=0).sum())


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -x)


def _log1m_s(s_n):
    with np.errstate(divide="ignore"):
        return np.log1p(-s_n)


def link_prob(theta, s_n):
    """Edge probability ``s_n / (1 + exp(-theta))``, overflow-free."""
    t = np.asarray(theta, dtype=float)
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    out *= s_n
    return out if out.ndim else float(out)


def _log_p_and_1mp(t, s_n):
    log_p = np.log(s_n) + _log_sigmoid(t)
    # 1 - s*sigma(t) = (1 - s + e^-t) / (1 + e^-t)
    log_1mp = np.logaddexp(_log1m_s(s_n), -t) - np.logaddexp(0.0, -t)
    return log_p, log_1mp


def edge_loss(theta, a, s_n):
    """Bernoulli negative log-likelihood of indicator ``a`` under ``link_prob(theta, s_n)``."""
    t = np.asarray(theta, dtype=float)
    log_p, log_1mp = _log_p_and_1mp(t, s_n)
    a = np.asarray(a, dtype=float)
    out = -a * log_p - (1.0 - a) * log_1mp
    return out if out.ndim else float(out)


def _loss_terms(t, s_n, need_grad=True):
    """Per-set pieces of the loss and of dL/dtheta, evaluated with one exp and one log.

    Returns ``(loss0, log_1mp, d0, q)``: the loss at ``a = 0`` (which is
    ``-log(1 - p)``), ``log(1 - p)``, dL/dtheta at ``a = 0`` and the amount
    dL/dtheta drops by when ``a = 1``; dL/dtheta = (p - a) * q with
    q = sigma(-t) / (1 - p). ``1 - p`` is formed as
    ``(1 - s) * sigma(t) + sigma(-t)``, which has no cancellation.
    """
    with np.errstate(over="ignore"):
        e = np.exp(-np.abs(t))
    inv = 1.0 / (1.0 + e)
    pos = t >= 0
    sig = np.where(pos, inv, e * inv)
    sig_neg = np.where(pos, e * inv, inv)
    omp = (1.0 - s_n) * sig + sig_neg
    log_1mp = np.log(omp)
    if not need_grad:
        return -log_1mp, log_1mp, None, None
    q = sig_neg / omp
    return -log_1mp, log_1mp, s_n * sig * q, q


def _edge_shift(t, log_1mp, s_n):
    """Loss at ``a = 1`` minus loss at ``a = 0``: ``log(1 - p) - log(p)``."""
    return log_1mp - np.log(s_n) - _log_sigmoid(t)


def dloss_dtheta(theta, a, s_n):
    t = np.asarray(theta, dtype=float)
    _, _, d0, q = _loss_terms(t, s_n)
    out = d0 - np.asarray(a, dtype=float) * q
    return out if out.ndim else float(out)


def _likelihood(alpha, h: Hypergraph, s_n, want_grad):
    """Sum of per-set losses over all candidate sets and, optionally, its gradient."""
    n, m = h.n, h.m
    real = alpha[:n]
    r = real.shape[1]
    blocks = h.edge_blocks
    grad = np.zeros((n, r)) if want_grad else None
    upper = np.triu(np.ones((n, n)), k=1)
    total = 0.0

    for k, prefix, start in prefix_blocks(n, m):
        edge_rows, edge_cols = blocks.get((k, prefix), (None, None))
        if k == 1:
            t = real.sum(axis=1)
            loss0, log_1mp, d, q = _loss_terms(t, s_n, want_grad)
            block_sum = loss0.sum()
            if edge_rows is not None:
                block_sum += _edge_shift(t[edge_rows], log_1mp[edge_rows], s_n).sum()
                if want_grad:
                    d[edge_rows] -= q[edge_rows]
            total += block_sum
            if want_grad:
                grad += d[:, None]
            continue

        sub = real[start:]
        w = np.prod(real[list(prefix)], axis=0) if prefix else np.ones(r)
        t = (sub * w) @ sub.T
        mask = upper[start:, start:]
        loss0, log_1mp, d, q = _loss_terms(t, s_n, want_grad)
        block_sum = (loss0 * mask).sum()
        if edge_rows is not None:
            er, ec = edge_rows - start, edge_cols - start
            block_sum += _edge_shift(t[er, ec], log_1mp[er, ec], s_n).sum()
        total += block_sum
        if not want_grad:
            continue
        d *= mask
        if edge_rows is not None:
            d[er, ec] -= q[er, ec]
        d_sub = d @ sub
        grad[start:] += (d_sub + d.T @ sub) * w
        if prefix:
            pair_sum = (sub * d_sub).sum(axis=0)
            rows = real[list(prefix)]
            for pos, v in enumerate(prefix):
                others = np.prod(np.delete(rows, pos, axis=0), axis=0)
                grad[v] += pair_sum * others
    return total, grad


def _check_inputs(alpha, h, Y):
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 2 or alpha.shape[0] != h.n + 1:
        raise ValueError(f"embedding must have {h.n + 1} rows, got shape {alpha.shape}")
    if Y is None:
        Y = np.zeros_like(alpha)
        Y[-1] = 1.0
    Y = np.asarray(Y, dtype=float)
    if Y.shape != alpha.shape:
        raise ValueError(f"Y shape {Y.shape} does not match embedding shape {alpha.shape}")
    return alpha, Y


def objective(alpha, h: Hypergraph, params: ModelParams, Y=None) -> float:
    """Penalized average negative log-likelihood with the cluster penalty frozen at ``Y``."""
    alpha, Y = _check_inputs(alpha, h, Y)
    total, _ = _likelihood(alpha, h, params.s_n, want_grad=False)
    return float(
        total / phi(h.n, min(h.m, h.n))
        + params.lambda0 / h.n * np.sum(alpha**2)
        + params.lambda1 / h.n * np.sum((alpha - Y) ** 2)
    )


def objective_and_gradient(alpha, h: Hypergraph, params: ModelParams, Y=None):
    """Objective value and its gradient with respect to the first ``n`` embedding rows."""
    alpha, Y = _check_inputs(alpha, h, Y)
    total, grad = _likelihood(alpha, h, params.s_n, want_grad=True)
    count = phi(h.n, min(h.m, h.n))
    n = h.n
    value = (
        total / count
        + params.lambda0 / n * np.sum(alpha**2)
        + params.lambda1 / n * np.sum((alpha - Y) ** 2)
    )
    grad = (
        grad / count
        + 2.0 * params.lambda0 / n * alpha[:n]
        + 2.0 * params.lambda1 / n * (alpha[:n] - Y[:n])
    )
    return float(value), grad


def gradient(alpha, h: Hypergraph, params: ModelParams, Y=None) -> np.ndarray:
    return objective_and_gradient(alpha, h, params, Y)[1]


def iter_theta_blocks(alpha, n, m):
    """Yield ``(sets, theta)`` per block, ``sets`` as 0-based ``(count, k)`` arrays.

    Concatenating the blocks reproduces the size-then-lex candidate order.
    """
    alpha = np.asarray(alpha, dtype=float)
    real = alpha[:n]
    r = real.shape[1]
    for k, prefix, start in prefix_blocks(n, m):
        if k == 1:
            yield np.arange(n)[:, None], real.sum(axis=1)
            continue
        sub = real[start:]
        w = np.prod(real[list(prefix)], axis=0) if prefix else np.ones(r)
        iu, ju = np.triu_indices(sub.shape[0], k=1)
        t = ((sub[iu] * w) * sub[ju]).sum(axis=1)
        sets = np.empty((iu.size, k), dtype=np.intp)
        sets[:, : k - 2] = prefix
        sets[:, k - 2] = iu + start
        sets[:, k - 1] = ju + start
        yield sets, t
