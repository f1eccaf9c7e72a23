import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatcurve.centrality import (
    CentralityScores,
    ConvergenceError,
    Measure,
    betweenness_scores,
    closeness_scores,
    compute_scores,
    degree_scores,
    eigenvector_scores,
    expected_force_scores,
    katz_scores,
    pagerank_scores,
    rank_top_fraction,
    spectral_radius,
)
from flatcurve.generators import WsParams, ring_lattice, watts_strogatz
from flatcurve.graph import Graph, GraphError
from flatcurve.seeding import make_rng

import oracles

K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
STAR3 = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
ALL = [m for m in Measure if m is not Measure.NONE]


def test_degree_examples(star4):
    assert list(degree_scores(star4).scores) == [4, 1, 1, 1, 1]
    assert set(degree_scores(ring_lattice(20, 6)).scores) == {6}
    assert list(degree_scores(Graph(3)).scores) == [0, 0, 0]


def test_betweenness_examples(path3, star4):
    assert list(betweenness_scores(path3).scores) == [0, 1, 0]
    assert list(betweenness_scores(star4).scores) == [6, 0, 0, 0, 0]


def test_betweenness_ws10_matches_enumeration():
    g = watts_strogatz(WsParams(10, 4, 0.2), make_rng(17))
    np.testing.assert_allclose(
        betweenness_scores(g).scores, oracles.betweenness_by_enumeration(g), atol=1e-9
    )


def test_closeness_examples(path3, k4):
    np.testing.assert_allclose(closeness_scores(k4).scores, [1 / 3] * 4, rtol=0, atol=1e-15)
    np.testing.assert_allclose(closeness_scores(path3).scores, [1 / 3, 1 / 2, 1 / 3], atol=1e-15)
    sc = closeness_scores(Graph.from_edges(4, [(0, 1)]))
    assert list(sc.scores) == [1.0, 1.0, 0.0, 0.0]
    assert list(sc.params["reachable"]) == [1, 1, 0, 0]


def test_katz_examples():
    np.testing.assert_allclose(katz_scores(Graph(4)).scores, [1.0] * 4)
    np.testing.assert_allclose(katz_scores(K3, alpha=0.1).scores, [1.25] * 3, atol=1e-10)


def test_katz_rejects_large_alpha():
    with pytest.raises(ValueError):
        katz_scores(K3, alpha=0.5)  # lambda_max = 2


def test_katz_reports_cap():
    with pytest.raises(ConvergenceError, match="max_iter=2"):
        katz_scores(ring_lattice(10, 4), max_iter=2)


def test_katz_default_alpha():
    g = watts_strogatz(WsParams(30, 4, 0.3), make_rng(2))
    sc = katz_scores(g)
    lam, _ = oracles.leading_eigvec(g)
    assert sc.params["alpha"] == pytest.approx(0.9 / lam, rel=1e-9)
    A = g.dense_adjacency()
    exact = np.linalg.solve(np.eye(g.n) - sc.params["alpha"] * A, np.ones(g.n))
    np.testing.assert_allclose(sc.scores, exact, atol=1e-8)


def test_pagerank_examples():
    k5 = Graph.from_edges(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])
    np.testing.assert_allclose(pagerank_scores(k5).scores, [0.2] * 5, atol=1e-12)
    assert pagerank_scores(Graph(1)).scores[0] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        pagerank_scores(k5, damping=1.0)


def test_pagerank_nine_node_solve():
    g = Graph.from_edges(9, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (6, 7)])
    np.testing.assert_allclose(pagerank_scores(g).scores, oracles.pagerank_by_solve(g, 0.85), atol=1e-8)


def test_expected_force_examples():
    np.testing.assert_allclose(expected_force_scores(K3).scores, [8 / 3] * 3)
    np.testing.assert_allclose(expected_force_scores(STAR3).scores, [1.5, 0.5, 0.5, 0.5])
    np.testing.assert_allclose(expected_force_scores(ring_lattice(10, 2)).scores, [8 / 45] * 10)
    with pytest.raises(GraphError):
        expected_force_scores(Graph(1))


def test_eigenvector_examples(k4, path3):
    np.testing.assert_allclose(eigenvector_scores(k4).scores, [0.5] * 4, atol=1e-10)
    x = eigenvector_scores(path3).scores
    assert x[1] / x[0] == pytest.approx(math.sqrt(2), abs=1e-9)
    with pytest.raises(GraphError):
        eigenvector_scores(Graph(3))


def test_eigenvector_bipartite_converges():
    x = eigenvector_scores(ring_lattice(8, 2)).scores
    np.testing.assert_allclose(x, [1 / math.sqrt(8)] * 8, atol=1e-9)


def _expected_force_oracle(g):
    n = g.n
    deg = [sum(1 for e in oracles.edge_set(g) if v in e) for v in range(n)]
    return np.array([sum(deg[i] * deg[j] for j in range(n) if g.has_edge(i, j)) for i in range(n)]) / (
        n * (n - 1) / 2
    )


def check_against_oracles(g):
    """Compare every measure with its brute-force counterpart; returns the measures checked."""
    checked = []
    deg = [sum(1 for e in oracles.edge_set(g) if v in e) for v in range(g.n)]
    np.testing.assert_array_equal(degree_scores(g).scores, deg)
    checked.append(Measure.DEGREE)
    np.testing.assert_allclose(betweenness_scores(g).scores, oracles.betweenness_by_enumeration(g), atol=1e-9)
    checked.append(Measure.BETWEENNESS)
    np.testing.assert_allclose(closeness_scores(g).scores, oracles.closeness_by_sums(g), atol=1e-12)
    checked.append(Measure.CLOSENESS)
    lam, vec = oracles.leading_eigvec(g)
    alpha = 0.4 / lam if lam > 0 else 0.3
    np.testing.assert_allclose(
        katz_scores(g, alpha=alpha).scores, oracles.katz_by_series(g, alpha), atol=1e-8
    )
    checked.append(Measure.KATZ)
    np.testing.assert_allclose(pagerank_scores(g).scores, oracles.pagerank_by_solve(g, 0.85), atol=1e-8)
    checked.append(Measure.PAGERANK)
    if g.n >= 2:
        np.testing.assert_allclose(expected_force_scores(g).scores, _expected_force_oracle(g), atol=1e-12)
        checked.append(Measure.EXPECTED_FORCE)
    if g.num_edges:
        x = eigenvector_scores(g).scores
        w = np.sort(np.linalg.eigvalsh(g.dense_adjacency()))
        A = g.dense_adjacency()
        assert np.linalg.norm(A @ x - lam * x) < 1e-6
        if w[-1] - w[-2] > 1e-3:
            np.testing.assert_allclose(x, vec, atol=1e-7)
        checked.append(Measure.EIGENVECTOR)
    return checked


def test_all_measures_match_oracles(rng):
    seen = set()
    for _ in range(200):
        seen.update(check_against_oracles(oracles.random_graph(rng, n_max=10)))
    assert seen == set(ALL)


def test_score_invariants(rng):
    for _ in range(50):
        g = oracles.random_graph(rng, n_max=10, n_min=2)
        pr = pagerank_scores(g).scores
        assert abs(pr.sum() - 1) <= 1e-9
        if g.num_edges:
            ev = eigenvector_scores(g).scores
            assert abs(np.linalg.norm(ev) - 1) <= 1e-9 and (ev >= 0).all()


@pytest.mark.parametrize("measure", ALL)
def test_relabeling_equivariance(measure, rng):
    g = watts_strogatz(WsParams(12, 4, 0.3), make_rng(5))
    perm = rng.permutation(12)
    h = Graph.from_edges(12, [(int(perm[u]), int(perm[v])) for u, v in g.edges()])
    a = compute_scores(g, measure).scores
    b = compute_scores(h, measure).scores
    np.testing.assert_allclose(b[perm], a, atol=1e-9)


def test_spectral_radius():
    assert spectral_radius(ring_lattice(12, 4)) == pytest.approx(4.0, abs=1e-9)
    assert spectral_radius(Graph(3)) == 0.0


def _scores(values):
    return CentralityScores(Measure.DEGREE, np.asarray(values, dtype=float))


def test_rank_examples():
    r = rank_top_fraction(_scores(np.arange(100)), 0.15)
    assert len(r.selected) == 15 and r.selected == frozenset(range(85, 100))
    assert rank_top_fraction(_scores([3, 1, 2]), 0.0).selected == frozenset()
    assert rank_top_fraction(_scores([1.0] * 10), 0.3).selected == frozenset({0, 1, 2})
    assert rank_top_fraction(_scores([1, 5, 5, 2]), 0.5).order == (1, 2, 3, 0)
    assert len(rank_top_fraction(_scores(np.ones(150)), 0.14).selected) == 21


@pytest.mark.parametrize("f", [1.0, -0.1, 1.5])
def test_rank_rejects(f):
    with pytest.raises(ValueError):
        rank_top_fraction(_scores([1, 2]), f)


@settings(max_examples=200, deadline=None)
@given(
    values=st.lists(st.integers(0, 50), min_size=1, max_size=40),
    fraction=st.floats(0, 0.99),
    exponent=st.integers(-20, 20),
)
def test_rank_scaling_invariance(values, fraction, exponent):
    base = rank_top_fraction(_scores(values), fraction)
    scaled = rank_top_fraction(_scores(np.asarray(values, float) * 2.0**exponent * 3.0), fraction)
    assert base == scaled
    assert len(base.selected) == math.floor(fraction * len(values) + 1e-9)
