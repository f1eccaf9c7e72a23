import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatcurve.generators import WsParams, erdos_renyi, ring_lattice, watts_strogatz
from flatcurve.graph import GraphError
from flatcurve.metrics import characteristic_path_length, global_clustering
from flatcurve.seeding import make_rng, mix


def test_ring_lattice_small():
    g = ring_lattice(6, 2)
    assert sorted(g.edges()) == [(0, 1), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5)]


def test_ring_lattice_counts():
    g = ring_lattice(500, 6)
    assert g.num_edges == 1500
    assert set(g.degrees()) == {6}
    assert global_clustering(g) == 0.6


@pytest.mark.parametrize("n,k", [(10, 3), (6, 6), (6, 8), (5, 0)])
def test_ring_lattice_rejects(n, k):
    with pytest.raises(GraphError):
        ring_lattice(n, k)


def test_ws_params_validation():
    with pytest.raises(GraphError):
        WsParams(10, 4, 1.5)
    with pytest.raises(GraphError):
        WsParams(10, 5, 0.1)


def test_beta_zero_is_lattice():
    assert watts_strogatz(WsParams(60, 4, 0.0), make_rng(1)) == ring_lattice(60, 4)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(5, 60),
    half_k=st.integers(1, 3),
    beta=st.floats(0, 1),
    seed=st.integers(0, 2**64 - 1),
)
def test_ws_conserves_edges_and_is_simple(n, half_k, beta, seed):
    k = 2 * half_k
    if k >= n:
        return
    g = watts_strogatz(WsParams(n, k, beta), make_rng(seed))
    assert g.num_edges == n * k // 2
    for u in range(n):
        nb = list(g.neighbors(u))
        assert u not in nb and nb == sorted(set(nb))
        assert all(g.has_edge(v, u) for v in nb)
    again = watts_strogatz(WsParams(n, k, beta), make_rng(seed))
    assert again == g


def test_ws_full_rewire_clustering_near_random():
    cs = [global_clustering(watts_strogatz(WsParams(500, 6, 1.0), make_rng(mix(3, s)))) for s in range(50)]
    assert abs(np.mean(cs) - 6 / 499) <= 0.01


def test_ws_path_length_beta_point_three():
    ls = [characteristic_path_length(watts_strogatz(WsParams(500, 6, 0.3), make_rng(mix(5, s)))).value
          for s in range(50)]
    assert abs(np.mean(ls) - 3.9) <= 0.1 * 3.9


@pytest.mark.xfail(strict=True, reason="degree-6 WS graphs give L ~5.4 at beta=0.1, not 4.7; see notes")
def test_ws_path_length_beta_point_one():
    ls = [characteristic_path_length(watts_strogatz(WsParams(500, 6, 0.1), make_rng(mix(5, s)))).value
          for s in range(50)]
    assert abs(np.mean(ls) - 4.7) <= 0.1 * 4.7


def test_erdos_renyi_extremes():
    assert erdos_renyi(20, 0.0, make_rng(0)).num_edges == 0
    assert erdos_renyi(20, 1.0, make_rng(0)).num_edges == 190
    with pytest.raises(GraphError):
        erdos_renyi(20, 1.2, make_rng(0))


def test_erdos_renyi_mean_degree():
    # binomial expectation: (n-1) p
    expected = 999 * 0.01
    means = [np.mean(erdos_renyi(1000, 0.01, make_rng(mix(9, s))).degrees()) for s in range(20)]
    assert abs(np.mean(means) - expected) <= 0.05 * expected
