"""Binary serialization of k-reach and (h,k)-reach indexes.

Layout (little-endian)::

    magic "KRCH" | version u16 | flags u16 | k u32 | h u32
    n u64 | m u64 | edge hash u64 | cover size u64
    cover ids as ascending delta varints
    per cover vertex, in id order:
        edge count varint
        target cover ranks as delta varints (first one absolute)
        weight codes bit-packed LSB-first at bits(2h) bits, padded to a byte

Flag bit 0 marks an (h,k)-reach index, whose codes are offsets
``k - weight``; otherwise codes are ``weight - (k - 2)``.
"""

from __future__ import annotations

import io
import struct
from typing import BinaryIO

import numpy as np

from kreach.cover import Cover
from kreach.graph import Graph
from kreach.hk import HKReachIndex, offset_bits
from kreach.index import CoverIndex, KReachIndex

__all__ = [
    "IndexFormatError",
    "BadMagicError",
    "VersionError",
    "TruncatedError",
    "FingerprintMismatchError",
    "dumps_index",
    "loads_index",
    "save_index",
    "load_index",
]

MAGIC = b"KRCH"
VERSION = 1
FLAG_HK = 0x1
_HEADER = struct.Struct("<4sHHIIQQQQ")


class IndexFormatError(ValueError):
    code = 1


class BadMagicError(IndexFormatError):
    code = 2


class VersionError(IndexFormatError):
    code = 3


class TruncatedError(IndexFormatError):
    code = 4


class FingerprintMismatchError(IndexFormatError):
    code = 5


def _encode_varints(values: np.ndarray) -> bytes:
    v = np.asarray(values, dtype=np.uint64)
    if v.size == 0:
        return b""
    nbytes = np.ones(v.size, dtype=np.int64)
    for j in range(1, 10):
        nbytes += v >= np.uint64(1 << (7 * j))
    ends = np.cumsum(nbytes)
    starts = ends - nbytes
    out = np.zeros(int(ends[-1]), dtype=np.uint8)
    for j in range(int(nbytes.max())):
        sel = nbytes > j
        chunk = (v[sel] >> np.uint64(7 * j)) & np.uint64(0x7F)
        more = (nbytes[sel] > j + 1).astype(np.uint8) << 7
        out[starts[sel] + j] = chunk.astype(np.uint8) | more
    return out.tobytes()


def _decode_varints(buf: np.ndarray, pos: int, count: int) -> tuple[np.ndarray, int]:
    if count == 0:
        return np.empty(0, dtype=np.int64), pos
    window = buf[pos: pos + 10 * count]
    ends = np.flatnonzero(window < 0x80)
    if ends.size < count:
        raise TruncatedError("varint run cut short")
    last = int(ends[count - 1])
    body = window[: last + 1].astype(np.uint64)
    term = np.zeros(last + 1, dtype=np.int64)
    term[ends[:count]] = 1
    group = np.concatenate([[0], np.cumsum(term)[:-1]])
    first = np.concatenate([[0], ends[: count - 1] + 1])
    shift = (np.arange(last + 1) - first[group]) * 7
    if shift.max() > 63:
        raise IndexFormatError("varint too long")
    parts = (body & np.uint64(0x7F)) << shift.astype(np.uint64)
    values = np.zeros(count, dtype=np.uint64)
    np.add.at(values, group, parts)
    return values.astype(np.int64), pos + last + 1


def _read_varint(buf: np.ndarray, pos: int) -> tuple[int, int]:
    vals, pos = _decode_varints(buf, pos, 1)
    return int(vals[0]), pos


def _pack(codes: np.ndarray, bits: int) -> bytes:
    if codes.size == 0:
        return b""
    shifts = np.arange(bits, dtype=np.uint8)
    bitmat = (codes.astype(np.uint8)[:, None] >> shifts) & 1
    return np.packbits(bitmat.ravel(), bitorder="little").tobytes()


def _unpack(raw: np.ndarray, count: int, bits: int) -> np.ndarray:
    flat = np.unpackbits(raw, bitorder="little")[: count * bits].reshape(count, bits)
    return (flat.astype(np.uint8) << np.arange(bits, dtype=np.uint8)).sum(axis=1).astype(np.uint8)


def _bits_for(idx: CoverIndex) -> int:
    return offset_bits(idx.h)


def dumps_index(idx: CoverIndex) -> bytes:
    flags = FLAG_HK if isinstance(idx, HKReachIndex) else 0
    n, m, ehash = idx.fingerprint
    members = idx.cover.members
    out = io.BytesIO()
    out.write(_HEADER.pack(MAGIC, VERSION, flags, idx.k, idx.h, n, m, ehash, members.size))
    out.write(_encode_varints(np.diff(members, prepend=0)))
    ranks = idx.cover.rank[idx.targets] if idx.targets.size else idx.targets
    bits = _bits_for(idx)
    ptr = idx.ptr
    for r in range(members.size):
        lo, hi = int(ptr[r]), int(ptr[r + 1])
        out.write(_encode_varints(np.array([hi - lo])))
        if hi > lo:
            out.write(_encode_varints(np.diff(ranks[lo:hi], prepend=0)))
            out.write(_pack(idx.weights[lo:hi], bits))
    return out.getvalue()


def loads_index(data: bytes, graph: Graph | None = None) -> CoverIndex:
    """Decode an index; with ``graph`` given, its fingerprint must match."""
    if len(data) < _HEADER.size:
        if not data.startswith(MAGIC[: len(data)]):
            raise BadMagicError("not a k-reach index file")
        raise TruncatedError("file shorter than header")
    magic, version, flags, k, h, n, m, ehash, csize = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}")
    if version != VERSION:
        raise VersionError(f"unsupported version {version}")
    fingerprint = (n, m, ehash)
    if graph is not None and graph.fingerprint != fingerprint:
        raise FingerprintMismatchError(
            f"index built for graph (n={n}, m={m}), got (n={graph.n}, m={graph.m})")
    buf = np.frombuffer(data, dtype=np.uint8)
    pos = _HEADER.size
    deltas, pos = _decode_varints(buf, pos, csize)
    members = np.cumsum(deltas)
    bits = offset_bits(h)
    counts = np.zeros(csize + 1, dtype=np.int64)
    tparts, wparts = [], []
    for r in range(csize):
        cnt, pos = _read_varint(buf, pos)
        counts[r + 1] = cnt
        if cnt:
            d, pos = _decode_varints(buf, pos, cnt)
            nb = (cnt * bits + 7) // 8
            if pos + nb > len(buf):
                raise TruncatedError("weight block cut short")
            tparts.append(np.cumsum(d))
            wparts.append(_unpack(buf[pos: pos + nb], cnt, bits))
            pos += nb
    if pos != len(buf):
        raise IndexFormatError(f"{len(buf) - pos} trailing bytes")
    ranks = np.concatenate(tparts) if tparts else np.empty(0, dtype=np.int64)
    if ranks.size and ranks.max() >= csize:
        raise IndexFormatError("target rank out of range")
    targets = members[ranks] if ranks.size else ranks
    weights = np.concatenate(wparts) if wparts else np.empty(0, dtype=np.uint8)
    hop = h if flags & FLAG_HK else 1
    cover = Cover.from_members(n, members, hop, strategy="loaded")
    cls = HKReachIndex if flags & FLAG_HK else KReachIndex
    return cls(k, h, cover, np.cumsum(counts), targets.astype(np.int64), weights, fingerprint)


def save_index(idx: CoverIndex, sink: str | BinaryIO) -> int:
    """Write ``idx`` to a path or binary stream; returns the byte count."""
    data = dumps_index(idx)
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "wb") as fh:
            fh.write(data)
    else:
        sink.write(data)
    return len(data)


def load_index(source: str | BinaryIO, graph: Graph | None = None) -> CoverIndex:
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    return loads_index(data, graph)
