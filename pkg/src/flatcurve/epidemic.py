"""Hop-by-hop infection spread from a single seed after targeted isolation.

Every neighbour of an infected node is infected one iteration later, so the
number of new cases at iteration d is the number of nodes at hop distance d
from the seed. The distance histogram *is* the infection curve.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .centrality import CentralityScores, Measure, compute_scores, rank_top_fraction
from .generators import WsParams, watts_strogatz
from .graph import Graph, GraphError, bfs_distances


class EpidemicError(ValueError):
    pass


@dataclass(frozen=True)
class IsolatedGraph:
    graph: Graph
    kept: tuple[int, ...]  # new id -> old id
    old_to_new: dict[int, int]


def isolate(g: Graph, selected: Iterable[int]) -> IsolatedGraph:
    """Induced subgraph on the nodes not in ``selected``, relabelled densely."""
    removed = set(selected)
    for u in removed:
        if not 0 <= u < g.n:
            raise GraphError(f"node {u} out of range for graph with {g.n} nodes")
    if len(removed) == g.n:
        raise EpidemicError("cannot isolate every node")
    kept = tuple(u for u in range(g.n) if u not in removed)
    old_to_new = {old: new for new, old in enumerate(kept)}
    h = Graph(len(kept))
    for u, v in g.edges():
        if u in old_to_new and v in old_to_new:
            h.add_edge(old_to_new[u], old_to_new[v])
    return IsolatedGraph(h, kept, old_to_new)


def spread_from(g: Graph, source: int) -> list[int]:
    """New infections per iteration: ``result[d-1]`` nodes fall ill at step d."""
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} out of range for graph with {g.n} nodes")
    infected = [False] * g.n
    infected[source] = True
    wave = [source]
    counts = []
    while True:
        nxt = []
        for u in wave:
            for v in g.neighbors(u):
                if not infected[v]:
                    infected[v] = True
                    nxt.append(v)
        if not nxt:
            return counts
        counts.append(len(nxt))
        wave = nxt


@dataclass
class DistanceHistogram:
    """New-case counts keyed by hop distance (>= 1), pooled over trials."""

    counts: dict[int, int] = field(default_factory=dict)
    trials: int = 0
    unreachable_total: int = 0

    @classmethod
    def from_levels(cls, levels: list[int], unreachable: int, trials: int = 1):
        return cls({d: c for d, c in enumerate(levels, 1) if c}, trials, unreachable)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def max_distance(self) -> int:
        return max(self.counts, default=0)

    def dense(self) -> list[int]:
        """Counts for distances 1..max_distance, zero-filled."""
        return [self.counts.get(d, 0) for d in range(1, self.max_distance + 1)]

    def samples(self) -> tuple[np.ndarray, np.ndarray]:
        """(distances, weights) for weighted fitting."""
        ds = sorted(d for d, c in self.counts.items() if c)
        return (
            np.array(ds, dtype=np.float64),
            np.array([self.counts[d] for d in ds], dtype=np.float64),
        )


def histogram_of(g: Graph, source: int) -> DistanceHistogram:
    dv = bfs_distances(g, source)
    tally = Counter(d for d in dv.dist if d is not None and d > 0)
    return DistanceHistogram(dict(sorted(tally.items())), 1, g.n - dv.reachable_count)


def aggregate(histograms: Iterable[DistanceHistogram]) -> DistanceHistogram:
    histograms = list(histograms)
    if not histograms:
        raise EpidemicError("aggregate needs at least one histogram")
    total: Counter = Counter()
    trials = unreachable = 0
    for h in histograms:
        total.update(h.counts)
        trials += h.trials
        unreachable += h.unreachable_total
    return DistanceHistogram(dict(sorted(total.items())), trials, unreachable)


def peak(h: DistanceHistogram) -> tuple[int, int]:
    """(distance, count) of the tallest bin; ties go to the shorter distance."""
    if not h.counts or max(h.counts.values()) == 0:
        raise EpidemicError("peak of an empty histogram")
    best = max(h.counts.values())
    return min(d for d, c in h.counts.items() if c == best), best


def normalize(h: DistanceHistogram | Mapping[int, int]) -> dict[int, float]:
    counts = h.counts if isinstance(h, DistanceHistogram) else dict(h)
    total = sum(counts.values())
    if total <= 0:
        raise EpidemicError("cannot normalize an empty histogram")
    return {d: c / total for d, c in sorted(counts.items())}


@dataclass
class TrialOutcome:
    histogram: DistanceHistogram
    survivors: int
    source: int  # id in the original graph
    isolated: frozenset[int]


def check_isolation(measure: Measure, fraction: float) -> None:
    if not 0.0 <= fraction < 1.0:
        raise EpidemicError(f"isolation fraction must lie in [0, 1), got {fraction}")
    if measure is Measure.NONE and fraction > 0:
        raise EpidemicError("measure 'none' is only valid with isolation fraction 0")


def spread_after_isolation(
    g: Graph,
    measure: Measure,
    fraction: float,
    draw: float,
    scores: CentralityScores | None = None,
) -> TrialOutcome:
    """Isolate the top ``fraction`` of ``g`` under ``measure`` and spread.

    ``draw`` is a uniform [0, 1) variate selecting the seed among survivors.
    Scores are computed on the intact graph.
    """
    check_isolation(measure, fraction)
    if measure is Measure.NONE or fraction == 0:
        selected: frozenset[int] = frozenset()
    else:
        if scores is None:
            scores = compute_scores(g, measure)
        selected = rank_top_fraction(scores, fraction).selected
    iso = isolate(g, selected)
    m = iso.graph.n
    src = min(int(draw * m), m - 1)
    hist = histogram_of(iso.graph, src)
    return TrialOutcome(hist, m, iso.kept[src], selected)


def run_trial(
    params: WsParams,
    measure: Measure | str,
    fraction: float,
    rng: np.random.Generator,
) -> TrialOutcome:
    """Fresh WS graph from ``rng``, isolate, pick a uniform surviving seed, spread."""
    measure = Measure.parse(measure) if isinstance(measure, str) else measure
    check_isolation(measure, fraction)
    g = watts_strogatz(params, rng)
    return spread_after_isolation(g, measure, fraction, float(rng.random()))
