"""Index-free ground truth for k-hop reachability."""

from __future__ import annotations

import numpy as np

from kreach.graph import Graph

__all__ = ["oracle_khop", "khop_reachable_vec", "all_pairs_bounded", "UNREACHED", "ALL_PAIRS_LIMIT"]

UNREACHED = np.iinfo(np.int64).max
ALL_PAIRS_LIMIT = 500


def oracle_khop(g: Graph, s: int, t: int, k: int) -> bool:
    """Bounded BFS from ``s`` that stops as soon as ``t`` is reached."""
    g.check_vertex(s)
    g.check_vertex(t)
    if k < 0:
        raise ValueError("hop bound must be non-negative")
    if s == t:
        return True
    adj = g.out_adj
    seen = {s}
    frontier = [s]
    for _ in range(k):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w == t:
                    return True
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return False


def all_pairs_bounded(g: Graph, k: int, limit: int = ALL_PAIRS_LIMIT) -> np.ndarray:
    """Dense ``n x n`` matrix of distances, ``UNREACHED`` beyond ``k`` hops."""
    if g.n > limit:
        raise ValueError(f"all-pairs matrix limited to n <= {limit}, got {g.n}")
    out = np.full((g.n, g.n), UNREACHED, dtype=np.int64)
    adj = g.out_adj
    for s in range(g.n):
        row = out[s]
        row[s] = 0
        frontier = [s]
        level = 0
        while frontier and level < k:
            level += 1
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if row[w] == UNREACHED:
                        row[w] = level
                        nxt.append(w)
            frontier = nxt
    return out


def khop_reachable_vec(g: Graph, s: int, t: int, k: int, scratch=None) -> bool:
    """Level-synchronous numpy BFS with the same answer as :func:`oracle_khop`.

    Cheaper per query on large graphs; used as the unindexed baseline.
    """
    g.check_vertex(s)
    g.check_vertex(t)
    if s == t:
        return True
    ptr, idx = g.out_ptr, g.out_idx
    seen = scratch if scratch is not None else np.zeros(g.n, dtype=bool)
    frontier = np.array([s], dtype=np.int64)
    seen[s] = True
    touched = [frontier]
    found = False
    for _ in range(k):
        starts = ptr[frontier]
        lens = ptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        offs = np.repeat(starts - np.cumsum(lens) + lens, lens) + np.arange(total)
        nbrs = idx[offs]
        nbrs = nbrs[~seen[nbrs]]
        if nbrs.size == 0:
            break
        seen[nbrs] = True
        touched.append(nbrs)
        if seen[t]:
            found = True
            break
        frontier = np.unique(nbrs)
    for a in touched:
        seen[a] = False
    return found
