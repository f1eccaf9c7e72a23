"""Clustering, characteristic path length and small-worldness indices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .generators import _check_lattice, erdos_renyi, ring_lattice
from .graph import Graph, GraphError, all_pairs_distances
from .seeding import make_rng, mix


def triangle_and_triplet_counts(g: Graph) -> tuple[int, int]:
    """Return (#triangles, #connected triplets)."""
    triangles = 0
    triplets = 0
    adj = [set(g.neighbors(u)) for u in range(g.n)]
    for u in range(g.n):
        d = g.degree(u)
        triplets += d * (d - 1) // 2
        for v in g.neighbors(u):
            if v <= u:
                continue
            # count each triangle once via its smallest-to-largest ordering
            triangles += sum(1 for w in g.neighbors(v) if w > v and w in adj[u])
    return triangles, triplets


def global_clustering(g: Graph) -> float:
    triangles, triplets = triangle_and_triplet_counts(g)
    if triplets == 0:
        return 0.0
    return 3 * triangles / triplets


@dataclass(frozen=True)
class PathLength:
    """Mean hop distance over mutually reachable ordered pairs.

    ``value`` is None when no such pair exists. ``disconnected_fraction`` is
    the share of ordered pairs ``u != v`` with no path between them.
    """

    value: Optional[float]
    reachable_pairs: int
    disconnected_fraction: float

    @property
    def defined(self) -> bool:
        return self.value is not None


def path_length_from_distances(dist: np.ndarray) -> PathLength:
    n = dist.shape[0]
    total_pairs = n * (n - 1)
    finite = dist > 0
    pairs = int(finite.sum())
    if total_pairs == 0:
        return PathLength(None, 0, 0.0)
    frac = (total_pairs - pairs) / total_pairs
    if pairs == 0:
        return PathLength(None, 0, frac)
    return PathLength(int(dist[finite].sum()) / pairs, pairs, frac)


def characteristic_path_length(g: Graph) -> PathLength:
    return path_length_from_distances(all_pairs_distances(g))


@dataclass(frozen=True)
class References:
    c_rand: float
    l_rand: float
    c_latt: float
    l_latt: float


def reference_values(
    n: int, k: int, mode: str = "analytic", samples: int = 20, seed: int = 0
) -> References:
    """Random-graph and lattice reference values for a degree-k, n-node graph.

    ``analytic`` uses the closed forms k/(n-1), ln n/ln k, 3(k-2)/(4(k-1)) and
    n/(2k). ``empirical`` measures ``samples`` G(n, k/(n-1)) graphs and the
    ring lattice itself.
    """
    if k <= 1:
        raise GraphError(f"k must exceed 1 for a logarithmic reference, got {k}")
    _check_lattice(n, k)
    if n < 3:
        raise GraphError("reference values need n >= 3")
    if mode == "analytic":
        return References(
            c_rand=k / (n - 1),
            l_rand=math.log(n) / math.log(k),
            c_latt=3 * (k - 2) / (4 * (k - 1)),
            l_latt=n / (2 * k),
        )
    if mode != "empirical":
        raise ValueError(f"unknown reference mode {mode!r}")
    lattice = ring_lattice(n, k)
    cs, ls = [], []
    for i in range(samples):
        er = erdos_renyi(n, k / (n - 1), make_rng(mix(seed, i)))
        cs.append(global_clustering(er))
        pl = characteristic_path_length(er)
        if pl.defined:
            ls.append(pl.value)
    return References(
        c_rand=float(np.mean(cs)),
        l_rand=float(np.mean(ls)),
        c_latt=global_clustering(lattice),
        l_latt=characteristic_path_length(lattice).value,
    )


@dataclass(frozen=True)
class SmallWorldness:
    """The three indices; an entry is None where its denominator vanishes."""

    s1: Optional[float]
    s2: Optional[float]
    s3: Optional[float]


def _ratio(num: float, den: float) -> Optional[float]:
    if den == 0:
        return None
    return num / den


def small_worldness(C: float, L: float, refs: References) -> SmallWorldness:
    for name, x in (("C", C), ("L", L), *vars(refs).items()):
        if x is None or not math.isfinite(x):
            raise ValueError(f"{name} must be finite, got {x!r}")
    s1 = None
    if L != 0 and refs.c_rand != 0:
        s1 = (C / L) * (refs.l_rand / refs.c_rand)
    s2 = None
    if L != 0 and refs.c_latt != 0:
        s2 = refs.l_rand / L - C / refs.c_latt
    s3 = None
    lp = _ratio(L - refs.l_latt, refs.l_rand - refs.l_latt)
    cp = _ratio(C - refs.c_rand, refs.c_latt - refs.c_rand)
    if lp is not None and cp is not None:
        s3 = lp * cp
    return SmallWorldness(s1, s2, s3)


@dataclass(frozen=True)
class StructuralMetrics:
    clustering: float
    path_length: PathLength
    small_worldness: SmallWorldness
    refs: References


def structural_metrics(g: Graph, refs: References) -> StructuralMetrics:
    C = global_clustering(g)
    pl = characteristic_path_length(g)
    if pl.defined:
        sw = small_worldness(C, pl.value, refs)
    else:
        sw = SmallWorldness(None, None, None)
    return StructuralMetrics(C, pl, sw, refs)
