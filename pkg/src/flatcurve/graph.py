"""Undirected simple graphs over dense integer node ids, plus BFS primitives."""

from __future__ import annotations

from bisect import bisect_left, insort
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from scipy import sparse

# Distance marker for nodes a BFS never reaches. Kept distinct from every int.
UNREACHABLE = None


class GraphError(ValueError):
    pass


class Graph:
    """Undirected simple graph on nodes ``0..n-1`` with sorted adjacency lists.

    Edges are added during construction with :meth:`add_edge`; after that the
    graph is treated as read-only by every consumer in the package.
    """

    __slots__ = ("_n", "_adj", "_m")

    def __init__(self, n: int):
        if int(n) != n or n < 1:
            raise GraphError(f"node count must be a positive integer, got {n!r}")
        self._n = int(n)
        self._adj: list[list[int]] = [[] for _ in range(self._n)]
        self._m = 0

    @property
    def n(self) -> int:
        return self._n

    @property
    def num_edges(self) -> int:
        return self._m

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self._n:
            raise GraphError(f"node {u} out of range for graph with {self._n} nodes")

    def add_edge(self, u: int, v: int) -> bool:
        """Insert edge ``{u, v}``; returns False if it was already present."""
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise GraphError(f"self-loop on node {u}")
        if self.has_edge(u, v):
            return False
        insort(self._adj[u], v)
        insort(self._adj[v], u)
        self._m += 1
        return True

    def remove_edge(self, u: int, v: int) -> None:
        au, av = self._adj[u], self._adj[v]
        i, j = bisect_left(au, v), bisect_left(av, u)
        if i == len(au) or au[i] != v:
            raise GraphError(f"edge ({u}, {v}) not present")
        del au[i]
        del av[j]
        self._m -= 1

    def has_edge(self, u: int, v: int) -> bool:
        a = self._adj[u]
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def neighbors(self, u: int) -> Sequence[int]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        for u, nbrs in enumerate(self._adj):
            for v in nbrs:
                if v > u:
                    yield u, v

    def copy(self) -> "Graph":
        g = Graph(self._n)
        g._adj = [list(a) for a in self._adj]
        g._m = self._m
        return g

    def adjacency_matrix(self) -> sparse.csr_matrix:
        rows = np.repeat(np.arange(self._n), self.degrees())
        cols = np.fromiter((v for a in self._adj for v in a), dtype=np.int64, count=2 * self._m)
        data = np.ones(len(cols), dtype=np.float64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self._n, self._n))

    def dense_adjacency(self) -> np.ndarray:
        return self.adjacency_matrix().toarray()

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, edges={self._m})"


def new_graph(n: int) -> Graph:
    return Graph(n)


@dataclass(frozen=True)
class DistanceVector:
    """Hop distances from ``source``; unreachable entries hold ``UNREACHABLE``."""

    source: int
    dist: tuple[Optional[int], ...]

    @property
    def reachable_count(self) -> int:
        return sum(d is not UNREACHABLE for d in self.dist)


def bfs_distances(g: Graph, source: int) -> DistanceVector:
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} out of range for graph with {g.n} nodes")
    dist: list[Optional[int]] = [UNREACHABLE] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in g.neighbors(u):
            if dist[v] is UNREACHABLE:
                dist[v] = du
                queue.append(v)
    return DistanceVector(source, tuple(dist))


def all_pairs_distances(g: Graph) -> np.ndarray:
    """Dense hop-distance matrix; unreachable pairs are ``-1``.

    Runs one BFS per source simultaneously: each level expands the whole
    frontier matrix with a single sparse product.
    """
    n = g.n
    adj = g.adjacency_matrix()
    dist = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    frontier = np.eye(n, dtype=np.float64)
    visited = np.eye(n, dtype=bool)
    level = 0
    while True:
        level += 1
        reached = (adj @ frontier.T).T > 0
        new = reached & ~visited
        if not new.any():
            break
        dist[new] = level
        visited |= new
        frontier = new.astype(np.float64)
    return dist


def connected_components(g: Graph) -> list[set[int]]:
    """Components ordered by their smallest node id."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    comp.add(v)
                    queue.append(v)
        comps.append(comp)
    return comps


def write_edgelist(g: Graph, path: str | Path) -> None:
    lines = [f"# nodes {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    Path(path).write_text("\n".join(lines) + "\n")


def read_edgelist(path: str | Path) -> Graph:
    """Read ``u v`` lines; an optional ``# nodes N`` header keeps isolated nodes.

    Self-loops and repeated edges (in either orientation) are rejected.
    """
    n_declared = None
    pairs = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "nodes":
                n_declared = int(parts[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"{path}:{lineno}: expected 'u v', got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if u < 0 or v < 0:
            raise GraphError(f"{path}:{lineno}: negative node id")
        pairs.append((lineno, u, v))
    n = n_declared
    if n is None:
        n = 1 + max((max(u, v) for _, u, v in pairs), default=0)
    g = Graph(n)
    for lineno, u, v in pairs:
        try:
            added = g.add_edge(u, v)
        except GraphError as exc:
            raise GraphError(f"{path}:{lineno}: {exc}") from None
        if not added:
            raise GraphError(f"{path}:{lineno}: edge ({u}, {v}) declared twice")
    return g
