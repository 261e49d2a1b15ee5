"""Alternating fit: a gradient step on the embedding, then k-means on its rows."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import NumericalFailure
from .hosvd import hosvd_init
from .hypergraph import Hypergraph, estimate_sparsity
from .kmeans import kmeans
from .model import ModelParams, _likelihood, phi

log = logging.getLogger(__name__)

AUTO = "auto"
MAX_HALVINGS = 30
ETA_SCALE = 4.0


def default_eta(n, m, s_n):
    """Learning rate ``4 * phi(n, m) / (C(n-1, m-1) * s_n)``.

    The averaged likelihood gradient of a row is a sum over the
    ``C(n-1, m-1)`` sets containing that vertex, each of weight about
    ``s_n / phi(n, m)``; this rate makes the first step of order one.
    """
    return ETA_SCALE * phi(n, m) / (math.comb(n - 1, m - 1) * s_n)


def default_lambdas(n, m):
    """Penalty weights ``1e-6 * n**((1 - m) / 2)`` and ``1e-6 * sqrt(n) * log(n)``."""
    return 1e-6 * n ** ((1 - m) / 2), 1e-6 * math.sqrt(n) * math.log(n)


@dataclass(frozen=True)
class FitConfig:
    K: int
    r: int
    s_n: float | str = AUTO
    lambda0: float | str = AUTO
    lambda1: float | str = AUTO
    eta0: float | str = AUTO
    tol: float = 1e-6
    max_outer: int = 500
    seed: int = 0
    c0: float | None = None
    kmeans_restarts: int = 10

    def resolve(self, h: Hypergraph, min_size: int = 1) -> "FitConfig":
        """Copy with every ``"auto"`` entry replaced by its value for ``h``, validated."""
        s_n = estimate_sparsity(h, min_size) if self.s_n == AUTO else float(self.s_n)
        lam0, lam1 = default_lambdas(h.n, h.m)
        cfg = FitConfig(
            K=self.K,
            r=self.r,
            s_n=s_n,
            lambda0=lam0 if self.lambda0 == AUTO else float(self.lambda0),
            lambda1=lam1 if self.lambda1 == AUTO else float(self.lambda1),
            eta0=default_eta(h.n, min(h.m, h.n), s_n) if self.eta0 == AUTO else float(self.eta0),
            tol=self.tol,
            max_outer=self.max_outer,
            seed=self.seed,
            c0=self.c0,
            kmeans_restarts=self.kmeans_restarts,
        )
        cfg.validate(h)
        return cfg

    def validate(self, h: Hypergraph):
        if not 2 <= self.K <= h.n:
            raise ValueError(f"K must lie in [2, n={h.n}], got {self.K}")
        if not 1 <= self.r <= h.n:
            raise ValueError(f"r must lie in [1, n={h.n}], got {self.r}")
        if not 0.0 < self.s_n <= 1.0:
            raise ValueError(f"s_n must lie in (0, 1], got {self.s_n}")
        if self.lambda0 < 0 or self.lambda1 < 0:
            raise ValueError("penalty weights must be non-negative")
        if self.eta0 <= 0 or self.tol <= 0 or self.max_outer < 0:
            raise ValueError("eta0 and tol must be positive and max_outer non-negative")
        if self.c0 is not None and self.c0 <= 0:
            raise ValueError("row-norm cap c0 must be positive")

    def params(self) -> ModelParams:
        return ModelParams(self.s_n, self.lambda0, self.lambda1)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class FitResult:
    alpha_hat: np.ndarray
    labels: np.ndarray
    centers: np.ndarray
    loss_trace: tuple
    eta_trace: tuple
    outer_iters: int
    converged: bool
    final_eta: float
    config: FitConfig
    alpha_init: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.alpha_hat, self.labels, self.centers, self.alpha_init):
            arr.setflags(write=False)


class _Objective:
    """Penalized objective for a fixed hypergraph, caching the likelihood part."""

    def __init__(self, h, params):
        self.h = h
        self.p = params
        self.count = phi(h.n, min(h.m, h.n))

    def likelihood(self, alpha, want_grad):
        total, grad = _likelihood(alpha, self.h, self.p.s_n, want_grad)
        return total / self.count, None if grad is None else grad / self.count

    def penalty(self, alpha, Y):
        n = self.h.n
        return self.p.lambda0 / n * np.sum(alpha**2) + self.p.lambda1 / n * np.sum((alpha - Y) ** 2)

    def penalty_grad(self, alpha, Y):
        n = self.h.n
        return 2.0 * self.p.lambda0 / n * alpha[:n] + 2.0 * self.p.lambda1 / n * (alpha[:n] - Y[:n])


def _project_rows(alpha, c0):
    norms = np.linalg.norm(alpha[:-1], axis=1)
    scale = np.minimum(1.0, c0 / np.maximum(norms, np.finfo(float).tiny))
    alpha[:-1] *= scale[:, None]


def _cluster(alpha, K, seed, restarts, init_centers=None):
    res = kmeans(alpha[:-1], K, seed=seed, n_init=restarts, init_centers=init_centers)
    centers = np.vstack([res.centers, np.ones(alpha.shape[1])])
    Y = np.vstack([res.centers[res.labels - 1], np.ones((1, alpha.shape[1]))])
    return res.labels, centers, Y


def fit(h: Hypergraph, config: FitConfig, min_size: int = 1, alpha0=None) -> FitResult:
    """Fit the embedding model and its community assignment to ``h``.

    Starts from the HOSVD embedding (or ``alpha0``) and alternates one
    gradient step on rows ``1..n`` with k-means on those rows. A step that
    raises the objective is retried with half the learning rate (the halved
    rate is kept afterwards); after 30 failed halvings the embedding is left
    unchanged for that iteration. The k-means step is warm-started from the
    previous centers so it never increases the objective. Stops when the
    relative change of the objective drops below ``tol`` or after
    ``max_outer`` iterations.
    """
    cfg = config.resolve(h, min_size)
    obj = _Objective(h, cfg.params())
    n, K = h.n, cfg.K

    alpha = hosvd_init(h, cfg.r, seed=cfg.seed) if alpha0 is None else np.array(alpha0, dtype=float)
    if alpha.shape != (n + 1, cfg.r):
        raise ValueError(f"initial embedding must have shape {(n + 1, cfg.r)}")
    alpha[n] = 1.0
    if cfg.c0 is not None:
        _project_rows(alpha, cfg.c0)
    if not np.all(np.isfinite(alpha)):
        raise NumericalFailure("non-finite initial embedding", 0)
    alpha_init = alpha.copy()

    labels, centers, Y = _cluster(alpha, K, [cfg.seed, 0], cfg.kmeans_restarts)
    lik, grad = obj.likelihood(alpha, want_grad=True)
    value = lik + obj.penalty(alpha, Y)
    if not np.isfinite(value) or not np.all(np.isfinite(grad)):
        raise NumericalFailure("non-finite objective or gradient at the initial embedding", 0)
    trace, etas = [value], [cfg.eta0]
    eta = cfg.eta0
    converged = False
    t = 0
    while t < cfg.max_outer:
        t += 1
        full_grad = grad + obj.penalty_grad(alpha, Y)
        if not np.all(np.isfinite(full_grad)):
            raise NumericalFailure("non-finite gradient", t)
        accepted = False
        for _ in range(MAX_HALVINGS + 1):
            trial = alpha.copy()
            trial[:n] -= eta * full_grad
            if cfg.c0 is not None:
                _project_rows(trial, cfg.c0)
            trial_lik, trial_grad = obj.likelihood(trial, want_grad=True)
            trial_value = trial_lik + obj.penalty(trial, Y)
            # a non-finite trial is treated as an overshoot
            if np.isfinite(trial_value) and trial_value <= value:
                accepted = True
                break
            eta *= 0.5
        if accepted:
            alpha, lik, grad = trial, trial_lik, trial_grad
            if not np.all(np.isfinite(grad)):
                raise NumericalFailure("non-finite gradient", t)
        else:
            log.info("step stalled after %d halvings at iteration %d", MAX_HALVINGS, t)

        labels_new, centers_new, Y_new = _cluster(
            alpha, K, [cfg.seed, t], cfg.kmeans_restarts, init_centers=centers[:-1]
        )
        new_value = lik + obj.penalty(alpha, Y_new)
        if new_value <= lik + obj.penalty(alpha, Y):
            labels, centers, Y = labels_new, centers_new, Y_new
        else:
            new_value = lik + obj.penalty(alpha, Y)
        if not np.isfinite(new_value):
            raise NumericalFailure("non-finite objective", t)
        change = abs(new_value - value) / max(1.0, abs(value))
        value = new_value
        trace.append(value)
        etas.append(eta)
        if change < cfg.tol:
            converged = True
            break

    return FitResult(
        alpha_hat=alpha,
        labels=np.asarray(labels),
        centers=centers,
        loss_trace=tuple(float(v) for v in trace),
        eta_trace=tuple(float(v) for v in etas),
        outer_iters=t,
        converged=converged,
        final_eta=float(eta),
        config=cfg,
        alpha_init=alpha_init,
    )
