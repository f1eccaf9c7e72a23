"""Node influence scores and the top-fraction ranking used to pick isolation targets."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .graph import Graph, GraphError, all_pairs_distances

MAX_ITER = 100_000


class ConvergenceError(RuntimeError):
    pass


class Measure(str, Enum):
    DEGREE = "degree"
    BETWEENNESS = "betweenness"
    CLOSENESS = "closeness"
    KATZ = "katz"
    PAGERANK = "pagerank"
    EXPECTED_FORCE = "exf"
    EIGENVECTOR = "eigenvector"
    NONE = "none"

    @classmethod
    def parse(cls, name: str) -> "Measure":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown centrality {name!r}; expected one of {valid}") from None


# column order used by the result tables
MEASURE_ORDER = (
    Measure.NONE,
    Measure.BETWEENNESS,
    Measure.CLOSENESS,
    Measure.DEGREE,
    Measure.KATZ,
    Measure.PAGERANK,
    Measure.EXPECTED_FORCE,
    Measure.EIGENVECTOR,
)


@dataclass(frozen=True)
class CentralityScores:
    measure: Measure
    scores: np.ndarray
    params: dict = field(default_factory=dict)


def degree_scores(g: Graph) -> CentralityScores:
    return CentralityScores(Measure.DEGREE, np.array(g.degrees(), dtype=np.float64))


def betweenness_scores(g: Graph) -> CentralityScores:
    """Unnormalized shortest-path betweenness, one BFS DAG per source.

    Dependencies are accumulated in reverse BFS order; each unordered pair is
    seen from both ends, hence the final halving.
    """
    n = g.n
    adj = [g.neighbors(u) for u in range(n)]
    bc = [0.0] * n
    for s in range(n):
        sigma = [0] * n
        dist = [-1] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma[s] = 1
        dist[s] = 0
        order = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v] + 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return CentralityScores(Measure.BETWEENNESS, np.array(bc) / 2.0)


def closeness_scores(g: Graph) -> CentralityScores:
    """Reciprocal distance sum over the targets each node can reach.

    Nodes that reach nobody score 0. ``params['reachable']`` holds the
    per-node reachable-target counts.
    """
    dist = all_pairs_distances(g)
    reach = dist > 0
    totals = np.where(reach, dist, 0).sum(axis=1)
    counts = reach.sum(axis=1)
    scores = np.zeros(g.n)
    ok = totals > 0
    scores[ok] = 1.0 / totals[ok]
    return CentralityScores(Measure.CLOSENESS, scores, {"reachable": counts})


def spectral_radius(g: Graph, tol: float = 1e-12, max_iter: int = MAX_ITER) -> float:
    """Largest adjacency eigenvalue via power iteration on ``A + I``.

    The shift keeps the Perron root strictly dominant in modulus, so bipartite
    graphs converge too.
    """
    if g.num_edges == 0:
        return 0.0
    A = g.dense_adjacency()
    x = np.full(g.n, 1.0 / math.sqrt(g.n))
    lam = 0.0
    for _ in range(max_iter):
        y = A @ x + x
        norm = np.linalg.norm(y)
        y /= norm
        new_lam = float(y @ (A @ y))
        if abs(new_lam - lam) <= tol * max(1.0, new_lam) and np.linalg.norm(y - x) < 1e-9:
            return new_lam
        x, lam = y, new_lam
    raise ConvergenceError(f"spectral radius did not converge within {max_iter} iterations")


def katz_scores(
    g: Graph,
    alpha: float | None = None,
    offset: float = 1.0,
    tol: float = 1e-10,
    max_iter: int = MAX_ITER,
) -> CentralityScores:
    """Fixed point of ``x = alpha*A@x + offset``.

    ``alpha`` defaults to ``0.9/lambda_max``.
    """
    lam = spectral_radius(g)
    if alpha is None:
        alpha = 0.9 / lam if lam > 0 else 0.0
    if alpha < 0:
        raise ValueError(f"attenuation must be non-negative, got {alpha}")
    if lam > 0 and alpha >= 1.0 / lam:
        raise ValueError(f"attenuation {alpha} must be below 1/lambda_max = {1.0 / lam:.6g}")
    A = g.dense_adjacency()
    b = np.full(g.n, float(offset))
    x = b.copy()
    for it in range(1, max_iter + 1):
        x = alpha * (A @ x) + b
        resid = np.abs(x - alpha * (A @ x) - b).max()
        if resid < tol:
            params = {"alpha": alpha, "offset": offset, "lambda_max": lam, "iterations": it}
            return CentralityScores(Measure.KATZ, x, params)
    raise ConvergenceError(f"Katz iteration did not converge within max_iter={max_iter}")


def pagerank_scores(
    g: Graph, damping: float = 0.85, tol: float = 1e-10, max_iter: int = MAX_ITER
) -> CentralityScores:
    if not 0.0 < damping < 1.0:
        raise ValueError(f"damping must lie in (0, 1), got {damping}")
    n = g.n
    A = g.dense_adjacency()
    deg = A.sum(axis=0)
    dangling = deg == 0
    inv = np.zeros(n)
    inv[~dangling] = 1.0 / deg[~dangling]
    P = A * inv  # column-stochastic on non-dangling columns
    x = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for it in range(1, max_iter + 1):
        new = damping * (P @ x + x[dangling].sum() / n) + teleport
        new /= new.sum()
        if np.abs(new - x).sum() < tol:
            return CentralityScores(
                Measure.PAGERANK, new, {"damping": damping, "iterations": it}
            )
        x = new
    raise ConvergenceError(f"PageRank did not converge within max_iter={max_iter}")


def expected_force_scores(g: Graph) -> CentralityScores:
    """deg(i) * sum of neighbour degrees, over the number of node pairs."""
    n = g.n
    if n < 2:
        raise GraphError("expected force needs at least two nodes")
    deg = g.degrees()
    pairs = n * (n - 1) / 2
    scores = np.array(
        [sum(deg[i] * deg[j] for j in g.neighbors(i)) / pairs for i in range(n)],
        dtype=np.float64,
    )
    return CentralityScores(Measure.EXPECTED_FORCE, scores)


def eigenvector_scores(
    g: Graph, tol: float = 1e-10, max_iter: int = MAX_ITER
) -> CentralityScores:
    """Perron vector of the adjacency matrix, unit L2 norm.

    Power iteration on ``A + I`` from the uniform vector; same eigenvectors as
    ``A`` but no oscillation on bipartite graphs.
    """
    if g.num_edges == 0:
        raise GraphError("eigenvector centrality is undefined on an edgeless graph")
    A = g.dense_adjacency()
    x = np.full(g.n, 1.0 / math.sqrt(g.n))
    for it in range(1, max_iter + 1):
        y = A @ x + x
        y /= np.linalg.norm(y)
        if np.linalg.norm(y - x) < tol:
            return CentralityScores(Measure.EIGENVECTOR, y, {"iterations": it})
        x = y
    raise ConvergenceError(
        f"eigenvector iteration did not converge within max_iter={max_iter}"
    )


SCORERS: dict[Measure, Callable[[Graph], CentralityScores]] = {
    Measure.DEGREE: degree_scores,
    Measure.BETWEENNESS: betweenness_scores,
    Measure.CLOSENESS: closeness_scores,
    Measure.KATZ: katz_scores,
    Measure.PAGERANK: pagerank_scores,
    Measure.EXPECTED_FORCE: expected_force_scores,
    Measure.EIGENVECTOR: eigenvector_scores,
}


def compute_scores(g: Graph, measure: Measure | str) -> CentralityScores:
    measure = Measure.parse(measure) if isinstance(measure, str) else measure
    if measure is Measure.NONE:
        raise ValueError("measure 'none' has no scores")
    return SCORERS[measure](g)


@dataclass(frozen=True)
class Ranking:
    order: tuple[int, ...]
    selected: frozenset[int]


def rank_top_fraction(scores: CentralityScores, fraction: float) -> Ranking:
    """Nodes by descending score, ties to the smaller id; top floor(fraction*n) selected."""
    if not 0.0 <= fraction < 1.0:
        raise ValueError(f"isolation fraction must lie in [0, 1), got {fraction}")
    values = np.asarray(scores.scores, dtype=np.float64)
    n = len(values)
    # lexsort: last key is primary
    order = tuple(int(i) for i in np.lexsort((np.arange(n), -values)))
    count = math.floor(fraction * n + 1e-9)
    return Ranking(order, frozenset(order[:count]))
