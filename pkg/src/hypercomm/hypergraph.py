"""Hypergraph container, text IO, preprocessing and combinatorial helpers.

Vertex ids are 1-based at every public boundary. The adjacency tensor of the
augmented hypergraph is never built; edges are kept as a set of sorted tuples
and sums over candidate hyperedges walk :func:`enumerate_index_sets` (or the
block form used by the numerical code, :func:`prefix_blocks`).
"""
from __future__ import annotations

import io
import itertools
import logging
import math
import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .errors import EmptyNetworkError, ParseError

log = logging.getLogger(__name__)

INT64_MAX = 2**63 - 1
_HEADER = re.compile(r"^#\s*n\s+(\d+)\s+m\s+(\d+)\s*$")


@dataclass(frozen=True)
class Hypergraph:
    """Undirected hypergraph on vertices ``1..n`` with hyperedges of size ``1..m``."""

    n: int
    m: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.m < 2:
            raise ValueError(f"range m must be >= 2, got {self.m}")
        edges = frozenset(tuple(int(v) for v in e) for e in self.edges)
        for e in edges:
            if not 1 <= len(e) <= self.m:
                raise ValueError(f"edge {e} has size outside [1, {self.m}]")
            if any(b <= a for a, b in zip(e, e[1:])):
                raise ValueError(f"edge {e} is not strictly increasing")
            if e[0] < 1 or e[-1] > self.n:
                raise ValueError(f"edge {e} has a vertex outside [1, {self.n}]")
        object.__setattr__(self, "edges", edges)

    def __len__(self):
        return len(self.edges)

    def __contains__(self, edge):
        return tuple(sorted(edge)) in self.edges

    def sorted_edges(self):
        """Edges ordered by size, then lexicographically."""
        return sorted(self.edges, key=lambda e: (len(e), e))

    def degree(self, i):
        return degree(self, i)

    def degrees(self):
        """Degree of every vertex, as a length-n integer array (index 0 is vertex 1)."""
        deg = np.zeros(self.n, dtype=np.int64)
        for e in self.edges:
            for v in e:
                deg[v - 1] += 1
        return deg

    @cached_property
    def edge_blocks(self):
        """Edges grouped the way :func:`prefix_blocks` visits candidate sets.

        Maps ``(k, prefix)`` (0-based prefix of length ``k-2``, or ``()`` for
        k <= 2) to a pair of 0-based arrays holding the last two vertices of
        each edge; size-1 edges are stored under ``(1, ())`` in the first array.
        """
        groups: dict = {}
        for e in self.edges:
            z = tuple(v - 1 for v in e)
            if len(z) == 1:
                groups.setdefault((1, ()), ([], []))[0].append(z[0])
            else:
                rows, cols = groups.setdefault((len(z), z[:-2]), ([], []))
                rows.append(z[-2])
                cols.append(z[-1])
        return {
            key: (np.asarray(r, dtype=np.intp), np.asarray(c, dtype=np.intp))
            for key, (r, c) in groups.items()
        }


def _check_vertex(h, i):
    if not 1 <= i <= h.n:
        raise ValueError(f"vertex {i} outside [1, {h.n}]")


def degree(h: Hypergraph, i: int) -> int:
    """Number of hyperedges containing vertex ``i``."""
    _check_vertex(h, i)
    return sum(1 for e in h.edges if i in e)


def phi(n: int, m: int) -> int:
    """Number of non-empty vertex sets of size at most ``m``: sum of C(n, k), k=1..m."""
    if n < 1 or not 1 <= m <= n:
        raise ValueError(f"phi needs n >= 1 and 1 <= m <= n, got n={n}, m={m}")
    total = sum(math.comb(n, k) for k in range(1, m + 1))
    if total > INT64_MAX:
        raise OverflowError(f"phi({n}, {m}) exceeds the 64-bit count range")
    return total


def _candidate_count(n, m, min_size=1):
    return sum(math.comb(n, k) for k in range(min_size, min(m, n) + 1))


def enumerate_index_sets(n: int, m: int, shard: int = 0, shards: int = 1) -> Iterator[tuple]:
    """Yield every non-empty subset of ``1..n`` with at most ``m`` elements.

    Order is by size, then lexicographic. With ``shards > 1`` only the sets whose
    smallest vertex ``v`` satisfies ``(v - 1) % shards == shard`` are produced;
    the union over all shards is the full stream, each shard keeping the global
    order.
    """
    if not 0 <= shard < shards:
        raise ValueError("shard must lie in [0, shards)")
    m = min(m, n)
    for k in range(1, m + 1):
        if shards == 1:
            yield from itertools.combinations(range(1, n + 1), k)
            continue
        for lead in range(1 + shard, n - k + 2, shards):
            for rest in itertools.combinations(range(lead + 1, n + 1), k - 1):
                yield (lead, *rest)


def prefix_blocks(n: int, m: int) -> Iterator[tuple]:
    """Block decomposition of the candidate-set stream used by the numerical code.

    Yields ``(k, prefix, start)`` with 0-based vertex ids. For ``k == 1`` the
    block is all singletons. For ``k >= 2`` it is every set ``prefix + (j, l)``
    with ``start <= j < l < n``; ``prefix`` has ``k - 2`` entries and ``start``
    is one past its last entry. Visiting blocks in order and the pairs of a
    block in row-major upper-triangular order reproduces
    :func:`enumerate_index_sets` exactly.
    """
    m = min(m, n)
    if m >= 1:
        yield 1, (), 0
    for k in range(2, m + 1):
        for prefix in itertools.combinations(range(n - 2), k - 2):
            start = prefix[-1] + 1 if prefix else 0
            if n - start >= 2:
                yield k, prefix, start


def augment(edge: Iterable[int], m: int, n: int) -> tuple:
    """Pad a hyperedge with the null vertex ``n + 1`` up to length ``m``."""
    verts = list(edge)
    e = sorted(set(verts))
    if len(e) != len(verts):
        raise ValueError(f"edge {tuple(verts)} repeats a vertex")
    if not 1 <= len(e) <= m:
        raise ValueError(f"edge of size {len(e)} cannot be augmented to length {m}")
    if e[0] < 1 or e[-1] > n:
        raise ValueError(f"edge {tuple(e)} has a vertex outside [1, {n}]")
    return tuple(e) + (n + 1,) * (m - len(e))


def strip(tup: Iterable[int], n: int) -> tuple:
    """Inverse of :func:`augment`: drop null-vertex padding."""
    return tuple(v for v in tup if v != n + 1)


def clique_expand(h: Hypergraph, m_cap: int) -> Hypergraph:
    """Replace every edge larger than ``m_cap`` by all of its ``m_cap``-subsets."""
    if m_cap < 2:
        raise ValueError(f"m_cap must be >= 2, got {m_cap}")
    out = set()
    for e in h.edges:
        if len(e) > m_cap:
            out.update(itertools.combinations(e, m_cap))
        else:
            out.add(e)
    return Hypergraph(h.n, m_cap, frozenset(out))


def estimate_sparsity(h: Hypergraph, min_size: int = 1) -> float:
    """Hyperedge density: edge count over the number of candidate sets.

    ``min_size`` drops the sizes below it from the denominator, for hypergraphs
    whose small edges were filtered out at ingestion.
    """
    if not h.edges:
        raise EmptyNetworkError("cannot estimate sparsity of an empty hypergraph")
    total = _candidate_count(h.n, h.m, min_size)
    if len(h.edges) > total:
        raise AssertionError(
            f"{len(h.edges)} edges exceed the {total} available candidate sets"
        )
    return len(h.edges) / total


def parse_hyperedge_list(text, n=None, m=None, min_size=None, max_size=None, clique_m=None):
    """Build a :class:`Hypergraph` from ``.hg`` text.

    One edge per line as whitespace-separated 1-based vertex ids; ``#`` starts a
    comment, and an optional ``#n <n> m <m>`` line gives the vertex count and
    range. Repeated vertices within a line and repeated edges are collapsed.
    ``min_size``/``max_size`` filter by edge size before ``clique_m`` expansion.
    Explicit ``n``/``m`` arguments win over the header.
    """
    header_n = header_m = None
    raw = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            match = _HEADER.match(stripped)
            if match and not raw and header_n is None:
                header_n, header_m = int(match.group(1)), int(match.group(2))
            continue
        body = stripped.split("#", 1)[0].split()
        if not body:
            continue
        verts = []
        for tok in body:
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"non-integer vertex id {tok!r}", lineno) from None
            if v < 1:
                raise ParseError(f"vertex id {v} is below 1", lineno)
            verts.append(v)
        raw.append(tuple(sorted(set(verts))))

    edges = set(raw)
    if len(edges) < len(raw):
        log.info("collapsed %d duplicate hyperedges", len(raw) - len(edges))
    if min_size is not None:
        edges = {e for e in edges if len(e) >= min_size}
    if max_size is not None:
        edges = {e for e in edges if len(e) <= max_size}
    if clique_m is not None:
        if clique_m < 2:
            raise ValueError(f"clique expansion size must be >= 2, got {clique_m}")
        expanded = set()
        for e in edges:
            expanded.update(itertools.combinations(e, clique_m) if len(e) > clique_m else [e])
        edges = expanded
    if not edges:
        raise EmptyNetworkError("no hyperedges left after filtering")

    n = n if n is not None else header_n
    if n is None:
        n = max(e[-1] for e in edges)
    elif max(e[-1] for e in edges) > n:
        raise ParseError(f"vertex id above declared n={n}")
    if m is None:
        m = max(2, max(len(e) for e in edges))
        if header_m is not None:
            caps = [c for c in (max_size, clique_m) if c is not None]
            m = max(m, min([header_m, *caps]))
    return Hypergraph(n, m, frozenset(edges))


def load_hyperedge_list(source, **options) -> Hypergraph:
    """Read a ``.hg`` file from a path, a text stream or a binary stream.

    Keyword options are those of :func:`parse_hyperedge_list`.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    return parse_hyperedge_list(text, **options)


def dumps_hyperedge_list(h: Hypergraph) -> str:
    lines = [f"#n {h.n} m {h.m}"]
    lines.extend(" ".join(map(str, e)) for e in h.sorted_edges())
    return "\n".join(lines) + "\n"


def save_hyperedge_list(h: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_hyperedge_list(h))


def load_labels(path) -> np.ndarray:
    """Read a label file (line ``i`` holds the integer label of vertex ``i``)."""
    labels = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            tok = line.strip()
            if not tok or tok.startswith("#"):
                continue
            try:
                labels.append(int(tok))
            except ValueError:
                raise ParseError(f"non-integer label {tok!r}", lineno) from None
    return np.asarray(labels, dtype=np.int64)


def save_labels(labels, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(f"{int(v)}\n" for v in labels)
