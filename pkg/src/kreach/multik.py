"""Answering arbitrary hop bounds with a family of k-reach indexes.

``geometric`` mode keeps indexes for k = 2, 4, ..., 2^ceil(lg d) where d is
the diameter; a request for k is served by the index at the next power of
two and may come back only as an upper bound.  ``exact`` mode keeps one
index for every k in 2..d.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from typing import BinaryIO, NamedTuple

from kreach.cover import RANDOM_EDGE, Cover, approx_vertex_cover
from kreach.graph import Graph, graph_stats
from kreach.index import KReachIndex, build_kreach, query, query_k1
from kreach.persist import IndexFormatError, dumps_index, loads_index

__all__ = [
    "MultiKIndex",
    "GeneralAnswer",
    "YES",
    "NO",
    "APPROX",
    "GEOMETRIC",
    "EXACT",
    "family_keys",
    "build_family",
    "query_general",
    "dumps_family",
    "loads_family",
    "save_family",
    "load_family",
]

GEOMETRIC = "geometric"
EXACT = "exact"
YES = "yes-exact"
NO = "no-exact"
APPROX = "approx-within"


class GeneralAnswer(NamedTuple):
    verdict: str
    bound: int | None = None

    def __str__(self) -> str:
        if self.verdict == YES:
            return "yes"
        if self.verdict == NO:
            return "no"
        return f"approx:{self.bound}"


def _ceil_lg(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def family_keys(diameter: int, mode: str = GEOMETRIC) -> list[int]:
    if mode == GEOMETRIC:
        return [1 << i for i in range(1, _ceil_lg(diameter) + 1)]
    if mode == EXACT:
        return list(range(2, diameter + 1))
    raise ValueError(f"unknown family mode {mode!r}")


@dataclass(eq=False)
class MultiKIndex:
    diameter: int
    mode: str
    family: dict[int, KReachIndex]

    @property
    def keys(self) -> list[int]:
        return sorted(self.family)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiKIndex):
            return NotImplemented
        return (self.diameter == other.diameter and self.mode == other.mode
                and self.keys == other.keys
                and all(self.family[i] == other.family[i] for i in self.family))


def build_family(g: Graph, mode: str = GEOMETRIC, strategy: str = RANDOM_EDGE,
                 seed: int = 0, cover: Cover | None = None,
                 diameter: int | None = None) -> MultiKIndex:
    """Build every member index over one shared vertex cover.

    The diameter is computed exactly unless supplied.
    """
    if g.n == 0:
        raise ValueError("graph is empty")
    d = graph_stats(g).diameter if diameter is None else diameter
    if cover is None:
        cover = approx_vertex_cover(g, strategy, seed)
    family = {i: build_kreach(g, i, cover) for i in family_keys(d, mode)}
    return MultiKIndex(d, mode, family)


def _ask(g: Graph, m: MultiKIndex, key: int, s: int, t: int) -> bool:
    return query(g, m.family[key], s, t).reachable


def query_general(m: MultiKIndex, g: Graph, s: int, t: int, k: int) -> GeneralAnswer:
    """Answer ``s ->_k t`` exactly when the family allows, else give a bound."""
    if k < 0:
        raise ValueError("hop bound must be non-negative")
    g.check_vertex(s)
    g.check_vertex(t)
    if s == t:
        return GeneralAnswer(YES)
    if k == 0:
        return GeneralAnswer(NO)
    keys = m.keys
    if k == 1 or not keys:
        # with no members d <= 1, so any reachable pair is one hop apart
        return GeneralAnswer(YES if query_k1(g, s, t).reachable else NO)
    top = keys[-1]
    if k >= top or m.mode == EXACT or k in m.family:
        key = min(k, top)
        return GeneralAnswer(YES if _ask(g, m, key, s, t) else NO)
    upper = 1 << _ceil_lg(k)
    if not _ask(g, m, upper, s, t):
        return GeneralAnswer(NO)
    if _ask(g, m, upper // 2, s, t):
        return GeneralAnswer(YES)
    return GeneralAnswer(APPROX, upper)


_HEAD = re.compile(rb"KRFAM v1 mode=(\w+) count=(\d+)\n")
_DIAM = re.compile(rb"diameter=(\d+)\n")
_ENTRY = re.compile(rb"key=(\d+) bytes=(\d+)\n")


def dumps_family(m: MultiKIndex) -> bytes:
    out = io.BytesIO()
    blobs = [(i, dumps_index(m.family[i])) for i in m.keys]
    out.write(f"KRFAM v1 mode={m.mode} count={len(blobs)}\n".encode())
    out.write(f"diameter={m.diameter}\n".encode())
    for i, b in blobs:
        out.write(f"key={i} bytes={len(b)}\n".encode())
    for _, b in blobs:
        out.write(b)
    return out.getvalue()


def loads_family(data: bytes, graph: Graph | None = None) -> MultiKIndex:
    head = _HEAD.match(data)
    if head is None:
        raise IndexFormatError("not a KRFAM v1 family file")
    mode, count = head.group(1).decode(), int(head.group(2))
    pos = head.end()
    diam = _DIAM.match(data, pos)
    if diam is None:
        raise IndexFormatError("missing diameter line")
    pos = diam.end()
    table = []
    for _ in range(count):
        e = _ENTRY.match(data, pos)
        if e is None:
            raise IndexFormatError("bad key table")
        table.append((int(e.group(1)), int(e.group(2))))
        pos = e.end()
    family = {}
    for key, size in table:
        blob = data[pos: pos + size]
        pos += size
        idx = loads_index(blob, graph)
        if not isinstance(idx, KReachIndex) or idx.k != key:
            raise IndexFormatError(f"member for key {key} is not a {key}-reach index")
        family[key] = idx
    if pos != len(data):
        raise IndexFormatError("trailing bytes after family members")
    return MultiKIndex(int(diam.group(1)), mode, family)


def save_family(m: MultiKIndex, sink: str | BinaryIO) -> int:
    data = dumps_family(m)
    if isinstance(sink, str) or hasattr(sink, "__fspath__"):
        with open(sink, "wb") as fh:
            fh.write(data)
    else:
        sink.write(data)
    return len(data)


def load_family(source: str | BinaryIO, graph: Graph | None = None) -> MultiKIndex:
    if isinstance(source, str) or hasattr(source, "__fspath__"):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    return loads_family(data, graph)
