"""Vertex covers and h-hop vertex covers of directed graphs.

An h-hop cover meets every directed simple path with exactly ``h`` edges;
``h = 1`` is the ordinary vertex cover.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from kreach.graph import Graph

__all__ = [
    "Cover",
    "CoverSizeError",
    "approx_vertex_cover",
    "approx_h_hop_cover",
    "exact_min_vertex_cover",
    "is_h_hop_cover",
    "format_cover",
    "RANDOM_EDGE",
    "DEGREE_PRIORITIZED",
    "PATH_BASED",
    "EXACT",
]

RANDOM_EDGE = "random-edge"
DEGREE_PRIORITIZED = "degree-prioritized"
PATH_BASED = "path-based"
EXACT = "exact"

EXACT_COVER_LIMIT = 20


class CoverSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Cover:
    """A vertex set together with the hop length it is meant to cover."""

    n: int
    hop: int
    members: np.ndarray
    strategy: str = EXACT
    seed: int | None = None

    @classmethod
    def from_members(cls, n: int, members, hop: int = 1,
                     strategy: str = EXACT, seed: int | None = None) -> "Cover":
        arr = np.unique(np.asarray(list(members) if not isinstance(members, np.ndarray)
                                   else members, dtype=np.int64))
        if arr.size and (arr[0] < 0 or arr[-1] >= n):
            raise ValueError(f"cover member outside [0, {n})")
        if hop < 1:
            raise ValueError("hop must be at least 1")
        return cls(n, hop, arr, strategy, seed)

    @cached_property
    def mask(self) -> bytes:
        """Membership bitmap indexed by vertex id."""
        m = np.zeros(self.n, dtype=np.uint8)
        m[self.members] = 1
        return m.tobytes()

    @cached_property
    def rank(self) -> np.ndarray:
        """Position of each vertex in ``members``, or -1 for non-members."""
        r = np.full(self.n, -1, dtype=np.int64)
        r[self.members] = np.arange(self.members.size)
        return r

    def __len__(self) -> int:
        return int(self.members.size)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and self.mask[v] == 1

    def with_hop(self, hop: int) -> "Cover":
        return Cover(self.n, hop, self.members, self.strategy, self.seed)

    def same_members(self, other: "Cover") -> bool:
        return self.n == other.n and np.array_equal(self.members, other.members)


def _edge_order(g: Graph, strategy: str, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    tie = rng.permutation(g.m)
    if strategy == RANDOM_EDGE:
        return tie
    if strategy == DEGREE_PRIORITIZED:
        e = g.edges()
        du, dv = g.degrees[e[:, 0]], g.degrees[e[:, 1]]
        # lexsort: last key is primary
        return np.lexsort((tie, -(du + dv), -np.maximum(du, dv)))
    raise ValueError(f"unknown cover strategy {strategy!r}")


def approx_vertex_cover(g: Graph, strategy: str = RANDOM_EDGE, seed: int = 0) -> Cover:
    """Matching-based 2-approximate vertex cover.

    Edges are visited in a seeded order (a random shuffle, or descending
    endpoint degree for ``degree-prioritized``); whenever an edge has
    neither endpoint chosen yet, both endpoints join the cover.  Edge
    direction plays no role.
    """
    if g.m == 0:
        return Cover.from_members(g.n, [], 1, strategy, seed)
    order = _edge_order(g, strategy, seed)
    e = g.edges()[order]
    taken = bytearray(g.n)
    for u, v in zip(e[:, 0].tolist(), e[:, 1].tolist()):
        if taken[u] or taken[v]:
            continue
        taken[u] = 1
        taken[v] = 1
    members = np.flatnonzero(np.frombuffer(bytes(taken), dtype=np.uint8))
    return Cover(g.n, 1, members.astype(np.int64), strategy, seed)


def _find_path(adj, start: int, h: int, alive) -> list[int] | None:
    """A simple directed path of exactly ``h`` edges from ``start`` through alive vertices."""
    if not alive[start]:
        return None
    path = [start]
    on_path = {start}
    iters = [iter(adj[start])]
    while iters:
        if len(path) == h + 1:
            return path
        for w in iters[-1]:
            if alive[w] and w not in on_path:
                path.append(w)
                on_path.add(w)
                iters.append(iter(adj[w]))
                break
        else:
            iters.pop()
            on_path.discard(path.pop())
    return None


def _path_cover(g: Graph, h: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    adj = g.out_adj
    alive = bytearray(b"\x01") * g.n
    chosen: list[int] = []
    # removals only destroy paths, so one pass over start vertices suffices
    for v in rng.permutation(g.n).tolist():
        path = _find_path(adj, v, h, alive)
        if path is None:
            continue
        for x in path:
            alive[x] = 0
        chosen.extend(path)
    return np.sort(np.array(chosen, dtype=np.int64))


def approx_h_hop_cover(g: Graph, h: int, seed: int = 0,
                       strategy: str = RANDOM_EDGE) -> Cover:
    """(h+1)-approximate h-hop vertex cover.

    Repeatedly takes a directed path of ``h`` edges among the remaining
    vertices and removes all of its vertices.  Any cover for a shorter hop
    length is also an h-hop cover, so the smallest of the candidates for
    hops ``1 .. h`` is returned; the 1-hop candidate is built with
    ``strategy``.
    """
    if h < 1:
        raise ValueError("hop must be at least 1")
    best = approx_vertex_cover(g, strategy, seed)
    if h == 1:
        return best
    best_members, best_tag = best.members, best.strategy
    for j in range(2, h + 1):
        members = _path_cover(g, j, seed)
        if members.size <= best_members.size:
            best_members, best_tag = members, PATH_BASED
    return Cover(g.n, h, best_members, best_tag, seed)


def _uncovered_path(g: Graph, h: int, alive) -> list[int] | None:
    if h == 1:
        for u in range(g.n):
            if alive[u]:
                for w in g.out_adj[u]:
                    if alive[w]:
                        return [u, w]
        return None
    for v in range(g.n):
        p = _find_path(g.out_adj, v, h, alive)
        if p is not None:
            return p
    return None


def is_h_hop_cover(g: Graph, s: Cover, hop: int | None = None) -> bool:
    """True iff every directed path of ``hop`` edges touches a member of ``s``.

    ``hop`` defaults to ``s.hop``.
    """
    h = s.hop if hop is None else hop
    if s.n != g.n:
        return False
    if h == 1:
        if g.m == 0:
            return True
        e = g.edges()
        member = np.frombuffer(s.mask, dtype=np.uint8).astype(bool)
        return bool(np.all(member[e[:, 0]] | member[e[:, 1]]))
    alive = bytearray(1 - b for b in s.mask)
    return _uncovered_path(g, h, alive) is None


def exact_min_vertex_cover(g: Graph, h: int = 1) -> Cover:
    """A minimum h-hop vertex cover by bounded branching (small graphs only).

    Each uncovered path must lose one of its ``h + 1`` vertices, which
    bounds the search tree by ``(h + 1) ** size``.
    """
    if g.n > EXACT_COVER_LIMIT:
        raise CoverSizeError(f"exact cover limited to n <= {EXACT_COVER_LIMIT}, got {g.n}")
    if h < 1:
        raise ValueError("hop must be at least 1")

    alive = bytearray(b"\x01") * g.n
    forbidden = bytearray(g.n)

    def search(budget: int) -> bool:
        path = _uncovered_path(g, h, alive)
        if path is None:
            return True
        if budget == 0:
            return False
        newly_forbidden = []
        found = False
        for x in path:
            if forbidden[x]:
                continue
            alive[x] = 0
            if search(budget - 1):
                found = True
                break
            alive[x] = 1
            # later branches need not consider x again
            forbidden[x] = 1
            newly_forbidden.append(x)
        for x in newly_forbidden:
            forbidden[x] = 0
        return found

    for budget in range(g.n + 1):
        if search(budget):
            break
    members = [v for v in range(g.n) if not alive[v]]
    return Cover.from_members(g.n, members, h, EXACT, None)


def format_cover(g: Graph, s: Cover) -> str:
    """Two-line text dump using original vertex ids."""
    ids = sorted(g.external_id(v) for v in s.members.tolist())
    return f"h={s.hop} size={len(s)}\n{' '.join(map(str, ids))}\n"
