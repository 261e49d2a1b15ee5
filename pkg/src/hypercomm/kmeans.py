"""Lloyd's k-means with k-means++ seeding and restarts."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np


class KMeansResult(NamedTuple):
    labels: np.ndarray  # 1-based
    centers: np.ndarray
    inertia: float


def _sq_dists(points, centers):
    d = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    return np.maximum(d, 0.0)


def _plusplus(points, K, rng):
    n = points.shape[0]
    centers = np.empty((K, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = np.sum((points - centers[0]) ** 2, axis=1)
    for k in range(1, K):
        total = closest.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=closest / total)
        centers[k] = points[idx]
        closest = np.minimum(closest, np.sum((points - centers[k]) ** 2, axis=1))
    return centers


def _lloyd(points, centers, max_iter):
    centers = centers.copy()
    K = centers.shape[0]
    labels = None
    for _ in range(max_iter):
        d = _sq_dists(points, centers)
        new = np.argmin(d, axis=1)
        counts = np.bincount(new, minlength=K)
        if np.any(counts == 0):
            own = d[np.arange(len(new)), new]
            for k in np.flatnonzero(counts == 0):
                # re-seed with the point farthest from its own center
                cand = np.where(counts[new] > 1, own, -np.inf)
                far = int(np.argmax(cand))
                counts[new[far]] -= 1
                counts[k] += 1
                new[far] = k
                own[far] = -np.inf
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for k in range(K):
            centers[k] = points[labels == k].mean(axis=0)
    inertia = float(np.sum((points - centers[labels]) ** 2))
    return labels, centers, inertia


def kmeans(points, K, seed=0, n_init=10, max_iter=300, init_centers=None) -> KMeansResult:
    """Partition the rows of ``points`` into ``K`` clusters.

    Runs ``n_init`` k-means++ restarts (plus one warm start from
    ``init_centers`` when given) and keeps the lowest within-cluster sum of
    squares; ties go to the earlier run. Labels are returned in ``1..K``.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if K < 1 or K > n:
        raise ValueError(f"K must lie in [1, {n}], got {K}")
    rng = np.random.default_rng(seed)
    starts = [] if init_centers is None else [np.asarray(init_centers, dtype=float)]
    starts += [None] * n_init
    best = None
    for start in starts:
        centers = _plusplus(points, K, rng) if start is None else start
        labels, centers, inertia = _lloyd(points, centers, max_iter)
        if best is None or inertia < best[2]:
            best = (labels, centers, inertia)
    labels, centers, inertia = best
    return KMeansResult(labels + 1, centers, inertia)
