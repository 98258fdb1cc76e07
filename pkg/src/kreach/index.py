"""The k-reach index: k-hop reachability among the vertices of a vertex cover.

For every ordered pair of cover vertices ``(u, v)`` with ``dist(u, v) <= k``
the index stores an edge whose weight is ``max(k - 2, dist(u, v))``.  The
weight is kept as a 2-bit code ``weight - (k - 2)``.  Queries between
arbitrary vertices only ever look one hop outside the cover.
"""

from __future__ import annotations

import bisect
from array import array
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from kreach.cover import Cover, is_h_hop_cover
from kreach.graph import FORWARD, Graph, _Scratch, bfs_levels, bounded_bfs

__all__ = [
    "CoverIndex",
    "KReachIndex",
    "QueryAnswer",
    "IndexMismatchError",
    "InvalidCoverError",
    "CASES",
    "build_kreach",
    "weight_code_of",
    "query",
    "query_k1",
    "batch_query",
    "BatchQueryError",
]

SELF = "self"
K1_EDGE = "k1-edge"
CASE1, CASE2, CASE3, CASE4 = "case1", "case2", "case3", "case4"
CASES = (SELF, K1_EDGE, CASE1, CASE2, CASE3, CASE4)

# below this size a dict-based BFS beats the vectorized one
_PY_BFS_MAX_N = 4096


class IndexMismatchError(ValueError):
    """The index was not built over the graph it is queried with."""


class InvalidCoverError(ValueError):
    pass


class BatchQueryError(ValueError):
    def __init__(self, position: int, cause: Exception):
        super().__init__(f"query #{position}: {cause}")
        self.position = position


class QueryAnswer(NamedTuple):
    reachable: bool
    resolved_by: str


_SELF_TRUE = QueryAnswer(True, SELF)


def _reach_table(g: Graph, cover: Cover, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Cover-to-cover distances up to ``k``, one bounded BFS per cover vertex.

    Returns ``(ptr, targets, dists, bfs_runs)`` in CSR layout over cover
    ranks, each row sorted by target id.
    """
    members = cover.members.tolist()
    counts = np.zeros(len(members) + 1, dtype=np.int64)
    tgt_parts: list[np.ndarray] = []
    dist_parts: list[np.ndarray] = []
    runs = 0
    if g.n <= _PY_BFS_MAX_N:
        mask = cover.mask
        for r, u in enumerate(members):
            d = bounded_bfs(g, u, k, FORWARD)
            runs += 1
            row = sorted((v, dv) for v, dv in d.items() if mask[v] and v != u)
            counts[r + 1] = len(row)
            if row:
                a = np.array(row, dtype=np.int64)
                tgt_parts.append(a[:, 0])
                dist_parts.append(a[:, 1])
    else:
        member = np.frombuffer(cover.mask, dtype=np.uint8).astype(bool)
        scratch = _Scratch(g.n)
        for r, u in enumerate(members):
            verts, d = bfs_levels(g, u, k, FORWARD, scratch)
            runs += 1
            keep = member[verts]
            keep[0] = False  # verts[0] is u itself
            verts, d = verts[keep], d[keep]
            order = np.argsort(verts, kind="stable")
            counts[r + 1] = verts.size
            tgt_parts.append(verts[order])
            dist_parts.append(d[order])
    ptr = np.cumsum(counts)
    targets = np.concatenate(tgt_parts) if tgt_parts else np.empty(0, dtype=np.int64)
    dists = np.concatenate(dist_parts) if dist_parts else np.empty(0, dtype=np.int64)
    return ptr, targets, dists, runs


@dataclass(eq=False)
class CoverIndex:
    """Weighted digraph over cover vertices in forward and reverse CSR form.

    ``weights`` holds the per-edge small integer code; subclasses decide how
    a code maps back to an edge weight.
    """

    k: int
    h: int
    cover: Cover
    ptr: np.ndarray
    targets: np.ndarray
    weights: np.ndarray
    fingerprint: tuple[int, int, int]
    bfs_runs: int = field(default=0, compare=False)

    # subclasses: weight code -> edge weight
    def decode(self, code: int) -> int:
        raise NotImplementedError

    @property
    def n(self) -> int:
        return self.cover.n

    @property
    def edge_count(self) -> int:
        return int(self.targets.size)

    @cached_property
    def _reverse(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        sources = np.repeat(self.cover.members, np.diff(self.ptr))
        order = np.lexsort((sources, self.targets))
        rank = self.cover.rank
        counts = np.bincount(rank[self.targets], minlength=len(self.cover)) \
            if self.targets.size else np.zeros(len(self.cover), dtype=np.int64)
        rptr = np.zeros(len(self.cover) + 1, dtype=np.int64)
        np.cumsum(counts, out=rptr[1:])
        return rptr, sources[order], self.weights[order]

    @property
    def rptr(self) -> np.ndarray:
        return self._reverse[0]

    @property
    def rsources(self) -> np.ndarray:
        return self._reverse[1]

    @property
    def rweights(self) -> np.ndarray:
        return self._reverse[2]

    @cached_property
    def _fast(self):
        """Plain-Python views used on the query path."""
        rptr, rsrc, rw = self._reverse
        return (
            self.cover.mask,
            self.cover.rank.tolist(),
            self.ptr.tolist(),
            array("q", self.targets.tolist()),
            self.weights.astype(np.uint8).tobytes(),
            rptr.tolist(),
            array("q", rsrc.tolist()),
            rw.astype(np.uint8).tobytes(),
        )

    def materialize(self) -> "CoverIndex":
        """Build the reverse adjacency and query views eagerly."""
        self._fast
        return self

    def out_edges(self, u: int) -> list[tuple[int, int]]:
        """``(v, weight)`` pairs for index edges leaving cover vertex ``u``."""
        r = int(self.cover.rank[u])
        if r < 0:
            return []
        lo, hi = int(self.ptr[r]), int(self.ptr[r + 1])
        return [(int(v), self.decode(int(c)))
                for v, c in zip(self.targets[lo:hi], self.weights[lo:hi])]

    def in_edges(self, v: int) -> list[tuple[int, int]]:
        r = int(self.cover.rank[v])
        if r < 0:
            return []
        lo, hi = int(self.rptr[r]), int(self.rptr[r + 1])
        return [(int(u), self.decode(int(c)))
                for u, c in zip(self.rsources[lo:hi], self.rweights[lo:hi])]

    def weight(self, u: int, v: int) -> int | None:
        """Weight of index edge ``(u, v)``, or None when absent."""
        mask, rank, ptr, tg, wt = self._fast[:5]
        if not (0 <= u < self.n and mask[u]):
            return None
        r = rank[u]
        lo, hi = ptr[r], ptr[r + 1]
        i = bisect.bisect_left(tg, v, lo, hi)
        if i < hi and tg[i] == v:
            return self.decode(wt[i])
        return None

    def edges(self) -> Iterable[tuple[int, int, int]]:
        for r, u in enumerate(self.cover.members.tolist()):
            for i in range(int(self.ptr[r]), int(self.ptr[r + 1])):
                yield u, int(self.targets[i]), self.decode(int(self.weights[i]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoverIndex) or type(self) is not type(other):
            return NotImplemented
        return (
            self.k == other.k
            and self.h == other.h
            and self.fingerprint == other.fingerprint
            and self.cover.same_members(other.cover)
            and np.array_equal(self.ptr, other.ptr)
            and np.array_equal(self.targets, other.targets)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None  # type: ignore[assignment]


class KReachIndex(CoverIndex):
    """k-reach over a 1-hop cover; codes 0, 1, 2 mean weights k-2, k-1, k."""

    def decode(self, code: int) -> int:
        return self.k - 2 + code


def weight_code_of(dist: int, k: int) -> int:
    """2-bit code for a cover pair at shortest distance ``dist``."""
    if not 1 <= dist <= k:
        raise ValueError(f"distance {dist} outside [1, {k}]")
    return max(k - 2, dist) - (k - 2)


def _check_cover(g: Graph, cover: Cover) -> None:
    if cover.n != g.n:
        raise InvalidCoverError(f"cover is over {cover.n} vertices, graph has {g.n}")
    if not is_h_hop_cover(g, cover):
        raise InvalidCoverError(f"not a valid {cover.hop}-hop vertex cover")


def build_kreach(g: Graph, k: int, cover: Cover, validate: bool = True) -> KReachIndex:
    """Build the k-reach index of ``g`` over a (1-hop) vertex ``cover``."""
    if k < 2:
        raise ValueError(f"k-reach needs k >= 2 (got {k}); k = 1 is an edge test")
    if cover.hop != 1:
        raise InvalidCoverError("k-reach needs a 1-hop vertex cover")
    if validate:
        _check_cover(g, cover)
    ptr, targets, dists, runs = _reach_table(g, cover, k)
    codes = (np.maximum(dists, k - 2) - (k - 2)).astype(np.uint8)
    return KReachIndex(k, 1, cover, ptr, targets, codes, g.fingerprint, runs).materialize()


def _check_query(g: Graph, idx: CoverIndex, s: int, t: int) -> None:
    n = g.n
    if not (0 <= s < n and 0 <= t < n):
        raise IndexError(f"query vertex out of range [0, {n})")
    if idx.n != n:
        raise IndexMismatchError(f"index built for n={idx.n}, graph has n={n}")


def _row_hit(tg, wt, lo: int, hi: int, candidates: Sequence[int], limit: int) -> bool:
    """Does some candidate appear in row ``[lo, hi)`` with code <= limit?

    Iterates whichever side is shorter.
    """
    if not candidates or lo == hi:
        return False
    if len(candidates) <= hi - lo:
        for v in candidates:
            i = bisect.bisect_left(tg, v, lo, hi)
            if i < hi and tg[i] == v and wt[i] <= limit:
                return True
        return False
    nc = len(candidates)
    for i in range(lo, hi):
        if wt[i] <= limit:
            v = tg[i]
            j = bisect.bisect_left(candidates, v)
            if j < nc and candidates[j] == v:
                return True
    return False


def query(g: Graph, idx: KReachIndex, s: int, t: int) -> QueryAnswer:
    """Is there a directed path of at most ``idx.k`` edges from ``s`` to ``t``?"""
    _check_query(g, idx, s, t)
    if s == t:
        return _SELF_TRUE
    mask, rank, ptr, tg, wt, rptr, rsrc, rwt = idx._fast
    if mask[s]:
        r = rank[s]
        lo, hi = ptr[r], ptr[r + 1]
        if mask[t]:
            i = bisect.bisect_left(tg, t, lo, hi)
            return QueryAnswer(i < hi and tg[i] == t, CASE1)
        # every in-neighbor of t is in the cover; s itself counts at distance 0
        preds = g.in_adj[t]
        j = bisect.bisect_left(preds, s)
        if j < len(preds) and preds[j] == s:
            return QueryAnswer(True, CASE2)
        return QueryAnswer(_row_hit(tg, wt, lo, hi, preds, 1), CASE2)
    succs = g.out_adj[s]
    if mask[t]:
        r = rank[t]
        lo, hi = rptr[r], rptr[r + 1]
        j = bisect.bisect_left(succs, t)
        if j < len(succs) and succs[j] == t:
            return QueryAnswer(True, CASE3)
        return QueryAnswer(_row_hit(rsrc, rwt, lo, hi, succs, 1), CASE3)
    preds = g.in_adj[t]
    if not succs or not preds:
        return QueryAnswer(False, CASE4)
    if not set(succs).isdisjoint(preds):
        return QueryAnswer(True, CASE4)
    if idx.k == 2:  # code 0 would mean distance 0, so no row can hit
        return QueryAnswer(False, CASE4)
    for u in succs:
        r = rank[u]
        if _row_hit(tg, wt, ptr[r], ptr[r + 1], preds, 0):
            return QueryAnswer(True, CASE4)
    return QueryAnswer(False, CASE4)


def query_k1(g: Graph, s: int, t: int) -> QueryAnswer:
    """1-hop reachability: equal vertices or a direct edge."""
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise IndexError(f"query vertex out of range [0, {g.n})")
    if s == t:
        return _SELF_TRUE
    succs = g.out_adj[s]
    j = bisect.bisect_left(succs, t)
    return QueryAnswer(j < len(succs) and succs[j] == t, K1_EDGE)


def batch_query(g: Graph, idx, pairs: Iterable[tuple[int, int]],
                k: int | None = None) -> tuple[list[QueryAnswer], Counter]:
    """Answer ``pairs`` in order and count which case resolved each one.

    ``idx`` may be a :class:`KReachIndex`, an (h,k)-reach index, or None
    together with ``k = 1`` for plain edge tests.
    """
    from kreach.hk import HKReachIndex, query_hk

    if idx is None:
        if k != 1:
            raise ValueError("an index is required unless k = 1")
        fn = lambda s, t: query_k1(g, s, t)  # noqa: E731
    elif isinstance(idx, HKReachIndex):
        fn = lambda s, t: query_hk(g, idx, s, t)  # noqa: E731
    else:
        fn = lambda s, t: query(g, idx, s, t)  # noqa: E731
    hist: Counter = Counter({c: 0 for c in CASES})
    answers = []
    for pos, (s, t) in enumerate(pairs):
        try:
            a = fn(s, t)
        except (IndexError, ValueError) as exc:
            raise BatchQueryError(pos, exc) from exc
        hist[a.resolved_by] += 1
        answers.append(a)
    return answers, hist
