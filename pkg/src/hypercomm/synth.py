"""Planted-partition hypergraph generators.

Scenario 1 draws every vertex embedding around its community mean
(heterogeneous embeddings); scenario 2 gives all members of a community one
shared center (a hypergraph stochastic block model). In both, each candidate
vertex set of size ``1..m`` becomes a hyperedge independently with
probability ``s_n * logistic(theta_S)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hypergraph import Hypergraph, save_hyperedge_list, save_labels
from .model import iter_theta_blocks, link_prob, make_embedding, theta


class ThetaOracle:
    """Exact ``theta*_S`` for the planted embedding."""

    def __init__(self, alpha_star):
        self.alpha = np.asarray(alpha_star, dtype=float)
        self.alpha.setflags(write=False)

    @property
    def n(self):
        return self.alpha.shape[0] - 1

    def __call__(self, s):
        return theta(self.alpha, s)


@dataclass(frozen=True)
class SyntheticTruth:
    alpha_star: np.ndarray
    labels_star: np.ndarray
    scenario: int
    params: dict
    centers_star: np.ndarray | None = None
    literal: bool = field(default=False)

    @property
    def oracle(self) -> ThetaOracle:
        return ThetaOracle(self.alpha_star)

    def prob(self, theta_values):
        """Edge probability for planted natural parameters."""
        if self.literal:
            return np.clip(theta_values, 0.0, 1.0)
        return link_prob(theta_values, self.params["s_n"])

    def edge_count_moments(self):
        """Mean and variance of the number of generated edges (Poisson-binomial)."""
        n, m = self.params["n"], self.params["m"]
        mean = var = 0.0
        for _, t in iter_theta_blocks(self.alpha_star, n, m):
            p = self.prob(t)
            mean += p.sum()
            var += (p * (1.0 - p)).sum()
        return float(mean), float(var)


def _check(n, K, m, r, s_n):
    if K < 1 or K > n:
        raise ValueError(f"K must lie in [1, n], got {K}")
    if r < 2:
        raise ValueError(f"embedding dimension r must be >= 2, got {r}")
    if m < 2:
        raise ValueError(f"range m must be >= 2, got {m}")
    if not 0.0 < s_n <= 1.0:
        raise ValueError(f"s_n must lie in (0, 1], got {s_n}")


def _balanced_groups(n, K):
    # position i (0-based) goes to community floor(i * K / n)
    return (np.arange(n) * K) // n


def _sample_edges(truth, rng):
    n, m = truth.params["n"], truth.params["m"]
    edges = set()
    for sets, t in iter_theta_blocks(truth.alpha_star, n, m):
        hit = rng.random(t.size) < truth.prob(t)
        edges.update(tuple(int(v) + 1 for v in row) for row in sets[hit])
    return Hypergraph(n, m, frozenset(edges))


def generate_scenario1(n=300, K=2, m=3, r=10, s_n=0.1, seed=0):
    """Heterogeneous embeddings: vertex rows scatter around a scalar community mean."""
    _check(n, K, m, r, s_n)
    rng = np.random.default_rng(seed)
    means = rng.normal(0.0, 0.5, size=K)
    perm = rng.permutation(n)
    groups = _balanced_groups(n, K)
    rows = np.empty((n, r))
    labels = np.empty(n, dtype=np.int64)
    rows[perm] = means[groups][:, None] + rng.normal(0.0, 0.5, size=(n, r))
    labels[perm] = groups + 1
    truth = SyntheticTruth(
        alpha_star=make_embedding(rows),
        labels_star=labels,
        scenario=1,
        params=dict(n=n, K=K, m=m, r=r, s_n=s_n, seed=seed),
    )
    return _sample_edges(truth, rng), truth


def generate_scenario2(n=300, K=2, m=3, r=10, s_n=0.1, seed=0, literal=False):
    """Block model: every vertex of community ``k`` carries the center ``c_k``.

    ``literal=True`` treats the CP tensor of ``Z C`` as probabilities clipped to
    [0, 1] instead of natural parameters; it exists for sensitivity checks only.
    """
    _check(n, K, m, r, s_n)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    groups = _balanced_groups(n, K)
    labels = np.empty(n, dtype=np.int64)
    labels[perm] = groups + 1
    center_means = rng.normal(0.0, 1.0, size=K)
    centers = center_means[:, None] + rng.normal(0.0, 0.5, size=(K, r))
    truth = SyntheticTruth(
        alpha_star=make_embedding(centers[labels - 1]),
        labels_star=labels,
        scenario=2,
        params=dict(n=n, K=K, m=m, r=r, s_n=s_n, seed=seed),
        centers_star=np.vstack([centers, np.ones(r)]),
        literal=literal,
    )
    return _sample_edges(truth, rng), truth


def generate(scenario, **kwargs):
    if scenario == 1:
        return generate_scenario1(**kwargs)
    if scenario == 2:
        return generate_scenario2(**kwargs)
    raise ValueError(f"unknown scenario {scenario!r}")


def save_embedding(alpha, path):
    """Write the real-vertex rows of an embedding as CSV at full precision."""
    np.savetxt(path, np.asarray(alpha)[:-1], delimiter=",", fmt="%.17g")


def load_embedding(path):
    rows = np.loadtxt(path, delimiter=",", ndmin=2)
    return make_embedding(rows)


def write_instance(prefix, h, truth):
    save_hyperedge_list(h, f"{prefix}.hg")
    save_labels(truth.labels_star, f"{prefix}.labels")
    save_embedding(truth.alpha_star, f"{prefix}.alpha.csv")
