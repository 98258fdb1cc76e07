"""Immutable directed graphs in compressed sparse row form.

Vertices are the integers ``0 .. n-1``.  Both the forward (out-edge) and
the reverse (in-edge) adjacency are stored, each row sorted ascending and
free of duplicates and self-loops.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable

import numpy as np

__all__ = [
    "Graph",
    "GraphStats",
    "EdgeListError",
    "load_edge_list",
    "read_edge_list",
    "bounded_bfs",
    "hop_neighbors",
    "bfs_levels",
    "graph_stats",
]

FORWARD = "forward"
BACKWARD = "backward"


class EdgeListError(ValueError):
    """Raised for a malformed line in an edge-list stream."""

    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line.rstrip()!r}")
        self.lineno = lineno


def _csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # src/dst must already be sorted by (src, dst)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    return ptr, dst.astype(np.int64, copy=True)


@dataclass(frozen=True, eq=False)
class Graph:
    """A simple directed graph with forward and reverse CSR adjacency.

    Build instances with :meth:`from_edges` or :func:`load_edge_list`;
    the raw constructor trusts its arguments.
    """

    n: int
    out_ptr: np.ndarray
    out_idx: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray
    id_map: np.ndarray | None = field(default=None)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]] | np.ndarray,
        id_map: np.ndarray | None = None,
    ) -> "Graph":
        """Build a graph on ``n`` vertices, dropping self-loops and duplicates."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"edge endpoint outside [0, {n})")
        src, dst = arr[:, 0], arr[:, 1]
        keep = src != dst
        width = max(n, 1)
        key = np.unique(src[keep] * width + dst[keep])
        src, dst = key // width, key % width
        out_ptr, out_idx = _csr(n, src, dst)
        order = np.lexsort((src, dst))
        in_ptr, in_idx = _csr(n, dst[order], src[order])
        if id_map is not None:
            id_map = np.asarray(id_map, dtype=np.int64)
        return cls(n, out_ptr, out_idx, in_ptr, in_idx, id_map)

    @property
    def m(self) -> int:
        return int(self.out_idx.shape[0])

    def edges(self) -> np.ndarray:
        """All edges as an ``(m, 2)`` array sorted by (source, target)."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.out_ptr))
        return np.column_stack([src, self.out_idx])

    @cached_property
    def out_adj(self) -> list[tuple[int, ...]]:
        return _rows(self.out_ptr, self.out_idx)

    @cached_property
    def in_adj(self) -> list[tuple[int, ...]]:
        return _rows(self.in_ptr, self.in_idx)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self.out_adj[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self.in_adj[v]

    def out_degree(self, v: int) -> int:
        return int(self.out_ptr[v + 1] - self.out_ptr[v])

    def in_degree(self, v: int) -> int:
        return int(self.in_ptr[v + 1] - self.in_ptr[v])

    @cached_property
    def degrees(self) -> np.ndarray:
        """``|inNei(v) ∪ outNei(v)|`` for every vertex."""
        if self.m == 0:
            return np.zeros(self.n, dtype=np.int64)
        e = self.edges()
        both = np.concatenate([e, e[:, ::-1]])
        key = np.unique(both[:, 0] * self.n + both[:, 1])
        return np.bincount(key // self.n, minlength=self.n).astype(np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        lo, hi = self.out_ptr[u], self.out_ptr[u + 1]
        i = np.searchsorted(self.out_idx[lo:hi], v)
        return bool(i < hi - lo and self.out_idx[lo + i] == v)

    @cached_property
    def fingerprint(self) -> tuple[int, int, int]:
        """``(n, m, h)`` with ``h`` a 64-bit hash of the canonical edge set."""
        h = hashlib.blake2b(digest_size=8)
        h.update(np.int64(self.n).tobytes())
        h.update(self.out_ptr.astype("<i8").tobytes())
        h.update(self.out_idx.astype("<i8").tobytes())
        return self.n, self.m, int.from_bytes(h.digest(), "little")

    def external_id(self, v: int) -> int:
        return int(self.id_map[v]) if self.id_map is not None else v

    def internal_id(self, ext: int) -> int:
        """Map an original vertex id to its internal id."""
        if self.id_map is None:
            if not 0 <= ext < self.n:
                raise KeyError(ext)
            return ext
        i = int(np.searchsorted(self.id_map, ext))
        if i >= self.n or self.id_map[i] != ext:
            raise KeyError(ext)
        return i

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range [0, {self.n})")


def _rows(ptr: np.ndarray, idx: np.ndarray) -> list[tuple[int, ...]]:
    flat = idx.tolist()
    bounds = ptr.tolist()
    return [tuple(flat[bounds[i]:bounds[i + 1]]) for i in range(len(bounds) - 1)]


def load_edge_list(stream: IO[str] | Iterable[str]) -> Graph:
    """Parse ``u v`` lines into a :class:`Graph`.

    External ids are remapped to ``0 .. n-1`` in ascending order; the
    ascending external ids are kept in ``Graph.id_map``.
    """
    src: list[int] = []
    dst: list[int] = []
    for lineno, line in enumerate(stream, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise EdgeListError(lineno, line, f"expected 2 tokens, got {len(parts)}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(lineno, line, "non-integer token") from None
        if u < 0 or v < 0:
            raise EdgeListError(lineno, line, "negative vertex id")
        src.append(u)
        dst.append(v)
    if not src:
        return Graph.from_edges(0, np.empty((0, 2), dtype=np.int64), np.empty(0, dtype=np.int64))
    raw = np.column_stack([np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)])
    ids, inverse = np.unique(raw, return_inverse=True)
    return Graph.from_edges(len(ids), inverse.reshape(-1, 2), id_map=ids)


def read_edge_list(path: str) -> Graph:
    with open(path) as fh:
        return load_edge_list(fh)


def _adj(g: Graph, direction: str) -> list[tuple[int, ...]]:
    if direction == FORWARD:
        return g.out_adj
    if direction == BACKWARD:
        return g.in_adj
    raise ValueError(f"direction must be 'forward' or 'backward', not {direction!r}")


def bounded_bfs(g: Graph, src: int, k: int, direction: str = FORWARD) -> dict[int, int]:
    """Vertices within ``k`` hops of ``src`` mapped to their exact distance.

    With ``direction="backward"`` distances are measured *to* ``src``.
    """
    g.check_vertex(src)
    if k < 0:
        raise ValueError("hop bound must be non-negative")
    adj = _adj(g, direction)
    dist = {src: 0}
    frontier = [src]
    level = 0
    while frontier and level < k:
        level += 1
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = level
                    nxt.append(w)
        frontier = nxt
    return dist


def hop_neighbors(g: Graph, v: int, h: int, direction: str = FORWARD) -> dict[int, int]:
    """The ``h``-hop neighborhood of ``v`` without ``v`` itself."""
    if h < 1:
        raise ValueError("hop bound must be at least 1")
    d = bounded_bfs(g, v, h, direction)
    del d[v]
    return d


class _Scratch:
    """Reusable distance buffer for repeated vectorized BFS on one graph."""

    def __init__(self, n: int):
        self.dist = np.full(n, -1, dtype=np.int64)
        self.stamp = np.zeros(n, dtype=np.int64)


def bfs_levels(
    g: Graph,
    src: int,
    k: int,
    direction: str = FORWARD,
    scratch: _Scratch | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized bounded BFS returning ``(vertices, distances)`` arrays.

    Vertices come out grouped by distance.  Same contract as
    :func:`bounded_bfs`; meant for large graphs where per-edge Python
    work dominates.
    """
    if direction == FORWARD:
        ptr, idx = g.out_ptr, g.out_idx
    elif direction == BACKWARD:
        ptr, idx = g.in_ptr, g.in_idx
    else:
        raise ValueError(f"direction must be 'forward' or 'backward', not {direction!r}")
    g.check_vertex(src)
    sc = scratch if scratch is not None else _Scratch(g.n)
    dist, stamp = sc.dist, sc.stamp
    frontier = np.array([src], dtype=np.int64)
    dist[src] = 0
    found = [frontier]
    level = 0
    while level < k:
        starts = ptr[frontier]
        lens = ptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        level += 1
        offs = np.repeat(starts - np.cumsum(lens) + lens, lens) + np.arange(total)
        nbrs = idx[offs]
        nbrs = nbrs[dist[nbrs] < 0]
        if nbrs.size == 0:
            break
        # keep one copy of each newly reached vertex
        pos = np.arange(nbrs.size)
        stamp[nbrs] = pos
        nbrs = nbrs[stamp[nbrs] == pos]
        dist[nbrs] = level
        found.append(nbrs)
        frontier = nbrs
    verts = np.concatenate(found)
    dists = dist[verts].copy()
    dist[verts] = -1
    return verts, dists


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    deg_max: int
    diameter: int
    median_sp: int
    estimated: bool = False

    def as_row(self) -> str:
        return f"{self.n}\t{self.m}\t{self.deg_max}\t{self.diameter}\t{self.median_sp}"


EXACT_STATS_LIMIT = 10_000
DEFAULT_STAT_SAMPLES = 256


def graph_stats(
    g: Graph,
    samples: int | None = None,
    seed: int = 0,
    exact_limit: int = EXACT_STATS_LIMIT,
) -> GraphStats:
    """Size, maximum degree, diameter and median shortest-path length.

    Distances are taken over ordered pairs ``s != t`` with ``t`` reachable
    from ``s``.  The median is the upper median of that multiset.  With
    ``samples`` set, or when ``n`` exceeds ``exact_limit``, BFS runs only
    from that many seeded random sources and the result is flagged as
    estimated.
    """
    if g.n == 0:
        return GraphStats(0, 0, 0, 0, 0)
    deg_max = int(g.degrees.max())
    if samples is None and g.n <= exact_limit:
        sources = range(g.n)
        estimated = False
    else:
        count = min(g.n, samples or DEFAULT_STAT_SAMPLES)
        rng = np.random.default_rng(seed)
        sources = np.sort(rng.choice(g.n, size=count, replace=False)).tolist()
        estimated = True
    hist = np.zeros(g.n, dtype=np.int64)
    sc = _Scratch(g.n)
    for s in sources:
        _, d = bfs_levels(g, s, g.n, FORWARD, sc)
        hist += np.bincount(d, minlength=g.n)[: g.n]
    hist[0] = 0
    total = int(hist.sum())
    if total == 0:
        return GraphStats(g.n, g.m, deg_max, 0, 0, estimated)
    diameter = int(np.flatnonzero(hist).max())
    cum = np.cumsum(hist)
    median = int(np.searchsorted(cum, total // 2, side="right"))
    return GraphStats(g.n, g.m, deg_max, diameter, median, estimated)

