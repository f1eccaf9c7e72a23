"""Ring lattices, Watts-Strogatz rewiring and Erdos-Renyi graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError
from .seeding import make_rng


@dataclass(frozen=True)
class WsParams:
    n: int
    k: int
    beta: float
    seed: int = 0

    def __post_init__(self):
        _check_lattice(self.n, self.k)
        if not 0.0 <= self.beta <= 1.0:
            raise GraphError(f"rewiring probability must lie in [0, 1], got {self.beta}")


def _check_lattice(n: int, k: int) -> None:
    if k % 2:
        raise GraphError(f"k must be even, got {k}")
    if not 2 <= k < n:
        raise GraphError(f"need 2 <= k < n, got k={k}, n={n}")


def ring_lattice(n: int, k: int) -> Graph:
    """Each node joined to its k/2 nearest neighbours on either side."""
    _check_lattice(n, k)
    g = Graph(n)
    for u in range(n):
        for j in range(1, k // 2 + 1):
            g.add_edge(u, (u + j) % n)
    return g


def watts_strogatz(params: WsParams, rng: np.random.Generator | None = None) -> Graph:
    """Rewire the ring lattice node by node, rightward edges in offset order.

    For each edge ``(u, u+j)`` a uniform draw below ``beta`` moves the far
    endpoint to a uniformly chosen node, redrawing on self-loops and existing
    neighbours. After ``n`` failed draws the original edge is kept. Edge count
    is therefore always ``n*k/2``.
    """
    if rng is None:
        rng = make_rng(params.seed)
    n, k, beta = params.n, params.k, params.beta
    g = ring_lattice(n, k)
    if beta == 0.0:
        return g
    for u in range(n):
        for j in range(1, k // 2 + 1):
            if rng.random() >= beta:
                continue
            v = (u + j) % n
            for _ in range(n):
                w = int(rng.integers(n))
                if w != u and not g.has_edge(u, w):
                    g.remove_edge(u, v)
                    g.add_edge(u, w)
                    break
    return g


def erdos_renyi(n: int, p: float, rng: np.random.Generator) -> Graph:
    """G(n, p); pairs ``(i, j), i < j`` consume draws in lexicographic order."""
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    g = Graph(n)
    if n < 2:
        return g
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    for u, v in zip(iu[keep].tolist(), ju[keep].tolist()):
        g.add_edge(u, v)
    return g
