import numpy as np
import pytest

from conftest import cycle_graph, path_graph, queue_bfs
from kreach.generators import random_digraph
from kreach.graph import Graph
from kreach.oracle import UNREACHED, all_pairs_bounded, khop_reachable_vec, oracle_khop


def test_self_zero_hops():
    g = random_digraph(5, 0.3, 0)
    assert all(oracle_khop(g, v, v, 0) for v in range(5))


def test_path():
    g = path_graph(4)
    assert not oracle_khop(g, 0, 3, 2)
    assert oracle_khop(g, 0, 3, 3)
    assert not oracle_khop(g, 3, 0, 10)


def test_errors():
    with pytest.raises(IndexError):
        oracle_khop(path_graph(2), 0, 5, 1)
    with pytest.raises(ValueError):
        oracle_khop(path_graph(2), 0, 1, -1)


@pytest.mark.parametrize("seed", range(8))
def test_classic_reachability_at_n_minus_1(seed):
    g = random_digraph(30, 0.05, seed)
    for s in range(g.n):
        reach = queue_bfs(g, s)
        for t in range(g.n):
            assert oracle_khop(g, s, t, g.n - 1) == (t in reach)


def test_all_pairs_edgeless():
    d = all_pairs_bounded(Graph.from_edges(3, []), 5)
    assert np.array_equal(np.diag(d), [0, 0, 0])
    assert (d[~np.eye(3, dtype=bool)] == UNREACHED).all()


def test_all_pairs_cycle():
    d = all_pairs_bounded(cycle_graph(3), 2)
    assert d.tolist() == [[0, 1, 2], [2, 0, 1], [1, 2, 0]]


@pytest.mark.parametrize("seed", range(8))
def test_all_pairs_consistent(seed):
    g = random_digraph(25, 0.08, seed)
    full = all_pairs_bounded(g, g.n - 1)
    for s in range(g.n):
        reach = queue_bfs(g, s)
        assert {t for t in range(g.n) if full[s, t] != UNREACHED} == set(reach)
    for k in (0, 1, 2, 4):
        d = all_pairs_bounded(g, k)
        for s in range(g.n):
            for t in range(g.n):
                assert (d[s, t] <= k) == oracle_khop(g, s, t, k)
                assert d[s, t] == (full[s, t] if full[s, t] <= k else UNREACHED)


def test_all_pairs_size_cap():
    with pytest.raises(ValueError):
        all_pairs_bounded(path_graph(501), 3)


@pytest.mark.parametrize("seed", range(6))
def test_vectorized_baseline_agrees(seed):
    g = random_digraph(40, 0.06, seed)
    scratch = np.zeros(g.n, dtype=bool)
    for s in range(g.n):
        for t in range(g.n):
            for k in (0, 1, 3, 6):
                assert khop_reachable_vec(g, s, t, k, scratch) == oracle_khop(g, s, t, k)
    assert not scratch.any()
