from itertools import permutations

import numpy as np
import pytest

from conftest import V, letter_graph, path_graph, queue_distances
from kreach.cover import DEGREE_PRIORITIZED, RANDOM_EDGE, Cover, approx_vertex_cover
from kreach.generators import random_digraph
from kreach.graph import Graph
from kreach.index import (
    CASE1,
    CASE2,
    CASE3,
    CASE4,
    K1_EDGE,
    SELF,
    BatchQueryError,
    IndexMismatchError,
    InvalidCoverError,
    build_kreach,
    batch_query,
    query,
    query_k1,
    weight_code_of,
)
from kreach.oracle import oracle_khop
from kreach.persist import dumps_index


@pytest.fixture
def letter_index():
    g = letter_graph()
    cover = Cover.from_members(g.n, [V[c] for c in "bdgi"])
    return g, build_kreach(g, 3, cover)


def ask(g, idx, s, t):
    return query(g, idx, V[s], V[t])


class TestWeightCode:
    def test_values(self):
        assert weight_code_of(1, 3) == 0
        assert weight_code_of(2, 3) == 1
        for k in range(2, 9):
            assert weight_code_of(k, k) == 2
            assert weight_code_of(k - 1, k) == 1

    def test_k2_has_no_code_zero(self):
        assert [weight_code_of(d, 2) for d in (1, 2)] == [1, 2]

    @pytest.mark.parametrize("dist,k", [(0, 3), (4, 3), (-1, 2)])
    def test_range(self, dist, k):
        with pytest.raises(ValueError):
            weight_code_of(dist, k)


class TestLetterGraph:
    def test_weights(self, letter_index):
        _, idx = letter_index
        assert idx.weight(V["b"], V["g"]) == 3
        assert idx.weight(V["b"], V["d"]) == 1
        assert idx.weight(V["d"], V["g"]) == 2
        assert idx.weight(V["d"], V["i"]) == 3
        assert idx.weight(V["b"], V["i"]) is None  # four hops apart
        assert idx.weight(V["g"], V["g"]) is None

    def test_case1(self, letter_index):
        g, idx = letter_index
        assert ask(g, idx, "b", "g") == (True, CASE1)
        assert ask(g, idx, "b", "i") == (False, CASE1)

    def test_case2(self, letter_index):
        g, idx = letter_index
        assert ask(g, idx, "d", "h") == (True, CASE2)
        assert ask(g, idx, "d", "j") == (False, CASE2)

    def test_case3(self, letter_index):
        g, idx = letter_index
        assert ask(g, idx, "a", "d") == (True, CASE3)
        assert ask(g, idx, "a", "g") == (False, CASE3)

    def test_case4(self, letter_index):
        g, idx = letter_index
        assert ask(g, idx, "c", "f") == (True, CASE4)
        assert ask(g, idx, "c", "h") == (False, CASE4)

    def test_self(self, letter_index):
        g, idx = letter_index
        for v in range(g.n):
            assert query(g, idx, v, v) == (True, SELF)

    def test_all_pairs(self, letter_index):
        g, idx = letter_index
        for s, t in permutations(range(g.n), 2):
            assert query(g, idx, s, t).reachable == oracle_khop(g, s, t, 3)


class TestBuild:
    def test_rejects_small_k(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            build_kreach(g, 1, approx_vertex_cover(g))

    def test_rejects_invalid_cover(self):
        g = path_graph(4)
        with pytest.raises(InvalidCoverError):
            build_kreach(g, 2, Cover.from_members(4, [1]))
        with pytest.raises(InvalidCoverError):
            build_kreach(g, 2, Cover.from_members(5, [1, 2]))

    def test_pair_beyond_k_has_no_edge(self):
        g = path_graph(5)
        idx = build_kreach(g, 3, Cover.from_members(5, [0, 1, 2, 3, 4]))
        assert idx.weight(0, 3) == 3 and idx.weight(0, 4) is None

    def test_empty_cover(self):
        g = Graph.from_edges(3, [])
        idx = build_kreach(g, 2, approx_vertex_cover(g))
        assert idx.edge_count == 0
        assert query(g, idx, 0, 1) == (False, CASE4)

    @pytest.mark.parametrize("seed", range(15))
    def test_edges_and_weights_against_distances(self, seed):
        g = random_digraph(int(np.random.default_rng(seed).integers(5, 60)),
                           [0.02, 0.06, 0.15][seed % 3], seed)
        cover = approx_vertex_cover(g, RANDOM_EDGE, seed)
        dist = queue_distances(g)
        members = cover.members.tolist()
        for k in (2, 3, 4, 7):
            idx = build_kreach(g, k, cover)
            assert idx.bfs_runs == len(cover)
            got = {(u, v): w for u, v, w in idx.edges()}
            want = {(u, v): max(k - 2, dist[u][v]) for u in members for v in members
                    if u != v and dist[u].get(v, k + 1) <= k}
            assert got == want
            for u in members:
                assert idx.in_edges(u) == sorted((a, w) for (a, b), w in got.items() if b == u)

    def test_idempotent(self):
        g = random_digraph(50, 0.07, 4)
        c = approx_vertex_cover(g, DEGREE_PRIORITIZED, 4)
        assert dumps_index(build_kreach(g, 4, c)) == dumps_index(build_kreach(g, 4, c))
        assert build_kreach(g, 4, c) == build_kreach(g, 4, c)

    def test_vectorized_build_path_agrees(self, monkeypatch):
        import kreach.index as mod
        g = random_digraph(80, 0.04, 8)
        c = approx_vertex_cover(g, RANDOM_EDGE, 8)
        plain = build_kreach(g, 3, c)
        monkeypatch.setattr(mod, "_PY_BFS_MAX_N", 0)
        assert build_kreach(g, 3, c) == plain


class TestQuery:
    @pytest.mark.parametrize("seed", range(20))
    def test_oracle_equivalence(self, seed):
        rng = np.random.default_rng(seed)
        g = random_digraph(int(rng.integers(2, 45)), [0.03, 0.08, 0.2][seed % 3], seed)
        cover = approx_vertex_cover(g, [RANDOM_EDGE, DEGREE_PRIORITIZED][seed % 2], seed)
        for k in (2, 3, 4, 6, g.n):
            if k < 2:
                continue
            idx = build_kreach(g, k, cover)
            for s in range(g.n):
                for t in range(g.n):
                    a = query(g, idx, s, t)
                    assert a.reachable == oracle_khop(g, s, t, k), (s, t, k)
                    if s != t:
                        want = {(1, 1): CASE1, (1, 0): CASE2, (0, 1): CASE3, (0, 0): CASE4}
                        assert a.resolved_by == want[(s in cover, t in cover)]

    @pytest.mark.parametrize("seed", range(6))
    def test_monotone_in_k(self, seed):
        g = random_digraph(30, 0.06, seed)
        cover = approx_vertex_cover(g, RANDOM_EDGE, seed)
        idxs = {k: build_kreach(g, k, cover) for k in range(2, 8)}
        for s in range(g.n):
            for t in range(g.n):
                for k in range(2, 7):
                    if query(g, idxs[k], s, t).reachable:
                        assert query(g, idxs[k + 1], s, t).reachable

    def test_scan_side_does_not_change_answer(self):
        # a dense hub makes index rows longer than graph rows and vice versa
        g = random_digraph(40, 0.25, 1)
        cover = approx_vertex_cover(g, RANDOM_EDGE, 1)
        idx = build_kreach(g, 3, cover)
        import kreach.index as mod
        tg, wt = idx._fast[3], idx._fast[4]
        ptr = idx._fast[2]
        for r in range(len(cover)):
            lo, hi = ptr[r], ptr[r + 1]
            for cand in (tuple(range(0, 40, 3)), tuple(range(40))):
                for limit in (0, 1, 2):
                    brute = any(tg[i] in cand and wt[i] <= limit for i in range(lo, hi))
                    assert mod._row_hit(tg, wt, lo, hi, cand, limit) == brute

    def test_errors(self, letter_index):
        g, idx = letter_index
        with pytest.raises(IndexError):
            query(g, idx, 0, 10)
        other = path_graph(4)
        with pytest.raises(IndexMismatchError):
            query(other, idx, 0, 1)


class TestQueryK1:
    def test_edge(self):
        g = Graph.from_edges(2, [(0, 1)])
        assert query_k1(g, 0, 1) == (True, K1_EDGE)
        assert query_k1(g, 1, 0) == (False, K1_EDGE)
        assert query_k1(g, 1, 1) == (True, SELF)

    def test_range(self):
        with pytest.raises(IndexError):
            query_k1(path_graph(2), 0, 2)


class TestBatch:
    def test_empty(self, letter_index):
        g, idx = letter_index
        answers, hist = batch_query(g, idx, [])
        assert answers == [] and sum(hist.values()) == 0
        assert set(hist) == {SELF, K1_EDGE, CASE1, CASE2, CASE3, CASE4}

    def test_order_and_histogram(self, letter_index):
        g, idx = letter_index
        pairs = [(V["b"], V["g"]), (V["d"], V["h"]), (V["c"], V["f"]), (V["a"], V["a"])]
        answers, hist = batch_query(g, idx, pairs)
        assert [a.resolved_by for a in answers] == [CASE1, CASE2, CASE4, SELF]
        assert hist[CASE1] == hist[CASE2] == hist[CASE4] == hist[SELF] == 1

    def test_cover_pairs_only_case1(self):
        g = random_digraph(40, 0.05, 2)
        cover = approx_vertex_cover(g, RANDOM_EDGE, 2)
        idx = build_kreach(g, 3, cover)
        m = cover.members.tolist()
        _, hist = batch_query(g, idx, [(u, v) for u in m for v in m])
        assert hist[CASE1] + hist[SELF] == len(m) ** 2

    def test_case4_dominates_with_small_cover(self):
        # a few hubs touching every edge
        rng = np.random.default_rng(0)
        n = 400
        edges = [(int(rng.integers(10, n)), int(rng.integers(0, 10))) for _ in range(800)]
        edges += [(int(rng.integers(0, 10)), int(rng.integers(10, n))) for _ in range(800)]
        g = Graph.from_edges(n, edges)
        cover = approx_vertex_cover(g, DEGREE_PRIORITIZED, 0)
        assert len(cover) < n / 3
        idx = build_kreach(g, 4, cover)
        pairs = rng.integers(0, n, size=(2000, 2)).tolist()
        _, hist = batch_query(g, idx, pairs)
        assert max(hist, key=hist.get) == CASE4

    def test_invalid_pair_reports_position(self, letter_index):
        g, idx = letter_index
        with pytest.raises(BatchQueryError) as ei:
            batch_query(g, idx, [(0, 1), (1, 2), (0, 99)])
        assert ei.value.position == 2

    def test_k1_mode(self):
        g = path_graph(3)
        answers, hist = batch_query(g, None, [(0, 1), (0, 2)], k=1)
        assert [a.reachable for a in answers] == [True, False]
        assert hist[K1_EDGE] == 2
