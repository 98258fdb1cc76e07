"""(h,k)-reach: the k-reach construction over an h-hop vertex cover.

A larger ``h`` gives a smaller cover and index at the price of looking up
to ``h`` hops around non-cover query vertices.  Edge weights are
``max(k - 2h, dist)``, stored as the offset ``k - weight`` in ``[0, 2h]``.
"""

from __future__ import annotations

import bisect

import numpy as np

from kreach.cover import Cover
from kreach.graph import BACKWARD, FORWARD, Graph, bounded_bfs
from kreach.index import (
    CASE1,
    CASE2,
    CASE3,
    CASE4,
    SELF,
    CoverIndex,
    QueryAnswer,
    _check_cover,
    _check_query,
    _reach_table,
)

__all__ = ["HKReachIndex", "build_hk", "query_hk", "offset_bits"]


def _case_of(s_in: int, t_in: int) -> str:
    if s_in:
        return CASE1 if t_in else CASE2
    return CASE3 if t_in else CASE4


def offset_bits(h: int) -> int:
    """Bits needed for a weight offset in ``[0, 2h]``."""
    return (2 * h).bit_length()


class HKReachIndex(CoverIndex):
    """(h,k)-reach index; a stored offset ``i`` means weight ``k - i``."""

    def decode(self, code: int) -> int:
        return self.k - code


def build_hk(g: Graph, h: int, k: int, cover: Cover, validate: bool = True) -> HKReachIndex:
    if h < 1:
        raise ValueError("h must be at least 1")
    if k <= 2 * h:
        raise ValueError(f"(h,k)-reach requires h < k/2, got h={h}, k={k}")
    if cover.hop > h:
        raise ValueError(f"a {cover.hop}-hop cover cannot serve h={h}")
    cover = cover if cover.hop == h else cover.with_hop(h)
    if validate:
        _check_cover(g, cover)
    ptr, targets, dists, runs = _reach_table(g, cover, k)
    offsets = np.clip(k - dists, 0, 2 * h).astype(np.uint8)
    return HKReachIndex(k, h, cover, ptr, targets, offsets, g.fingerprint, runs).materialize()


def _lookup(tg, wt, lo: int, hi: int, v: int) -> int:
    """Stored offset for ``v`` in row ``[lo, hi)``, or -1."""
    i = bisect.bisect_left(tg, v, lo, hi)
    if i < hi and tg[i] == v:
        return wt[i]
    return -1


def query_hk(g: Graph, idx: HKReachIndex, s: int, t: int,
             precheck: bool = True) -> QueryAnswer:
    """Exact k-hop reachability from ``s`` to ``t`` using an (h,k)-reach index.

    With ``h >= 2`` a path shorter than ``h`` can miss the cover entirely,
    so a BFS of depth ``h - 1`` from ``s`` runs first.  ``precheck=False``
    skips it and reproduces the bare four-case procedure.
    """
    _check_query(g, idx, s, t)
    if s == t:
        return QueryAnswer(True, SELF)
    k, h = idx.k, idx.h
    mask, rank, ptr, tg, wt, rptr, rsrc, rwt = idx._fast
    if precheck and h >= 2 and t in bounded_bfs(g, s, min(k, h - 1), FORWARD):
        # reported under the membership case so the case partition holds
        return QueryAnswer(True, _case_of(mask[s], mask[t]))
    if mask[s] and mask[t]:
        r = rank[s]
        return QueryAnswer(_lookup(tg, wt, ptr[r], ptr[r + 1], t) >= 0, CASE1)

    if mask[s]:
        r = rank[s]
        lo, hi = ptr[r], ptr[r + 1]
        for v, i in bounded_bfs(g, t, h, BACKWARD).items():
            if i == 0 or not mask[v]:
                continue
            # weight <= k - i  <=>  offset >= i
            if v == s or _lookup(tg, wt, lo, hi, v) >= i:
                return QueryAnswer(True, CASE2)
        return QueryAnswer(False, CASE2)

    if mask[t]:
        r = rank[t]
        lo, hi = rptr[r], rptr[r + 1]
        for u, i in bounded_bfs(g, s, h, FORWARD).items():
            if i == 0 or not mask[u]:
                continue
            if u == t or _lookup(rsrc, rwt, lo, hi, u) >= i:
                return QueryAnswer(True, CASE3)
        return QueryAnswer(False, CASE3)

    heads = [(u, i) for u, i in bounded_bfs(g, s, h, FORWARD).items() if i and mask[u]]
    if not heads:
        return QueryAnswer(False, CASE4)
    tails = {v: j for v, j in bounded_bfs(g, t, h, BACKWARD).items() if j and mask[v]}
    if not tails:
        return QueryAnswer(False, CASE4)
    for u, i in heads:
        j = tails.get(u)
        if j is not None and i + j <= k:
            return QueryAnswer(True, CASE4)
        r = rank[u]
        lo, hi = ptr[r], ptr[r + 1]
        if hi - lo < len(tails):
            for p in range(lo, hi):
                j = tails.get(tg[p])
                if j is not None and wt[p] >= i + j:
                    return QueryAnswer(True, CASE4)
        else:
            for v, j in tails.items():
                if _lookup(tg, wt, lo, hi, v) >= i + j:
                    return QueryAnswer(True, CASE4)
    return QueryAnswer(False, CASE4)
