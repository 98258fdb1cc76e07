"""``kreach`` command line: stats, covers, index build, queries, verification, benchmarks.

All vertex ids on the command line and in files are the graph's original
ids.  Results go to stdout as tab-separated text, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

import numpy as np

from kreach.cover import DEGREE_PRIORITIZED, RANDOM_EDGE, approx_h_hop_cover, format_cover
from kreach.graph import EdgeListError, Graph, graph_stats, read_edge_list
from kreach.hk import HKReachIndex, build_hk, query_hk
from kreach.index import CASES, batch_query, build_kreach, query
from kreach.multik import EXACT, GEOMETRIC, build_family, load_family, query_general, save_family
from kreach.oracle import khop_reachable_vec, oracle_khop
from kreach.persist import IndexFormatError, load_index, save_index

EX_OK = 0
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_QUERY_ERROR = 2

STRATEGIES = {"random": RANDOM_EDGE, "degree": DEGREE_PRIORITIZED}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2
        raise UsageError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kreach", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("stats", help="n, m, max degree, diameter, median shortest path")
    s.add_argument("graph")
    s.add_argument("--sampled", type=int, metavar="N", help="BFS from N sampled sources")
    s.add_argument("--seed", type=int, default=0)

    def cover_opts(sp):
        sp.add_argument("--hop", type=int, default=1)
        sp.add_argument("--strategy", choices=sorted(STRATEGIES), default="random")
        sp.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("cover", help="print an approximate (h-hop) vertex cover")
    s.add_argument("graph")
    cover_opts(s)

    s = sub.add_parser("build", help="build a k-reach or (h,k)-reach index file")
    s.add_argument("graph")
    s.add_argument("-k", type=int, required=True)
    cover_opts(s)
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("query", help="single k-hop reachability query")
    s.add_argument("graph")
    s.add_argument("index")
    s.add_argument("s", type=int)
    s.add_argument("t", type=int)

    s = sub.add_parser("batch", help="answer every 's t' line of a pairs file")
    s.add_argument("graph")
    s.add_argument("index")
    s.add_argument("pairs")
    s.add_argument("--hist", action="store_true", help="print the case histogram")

    s = sub.add_parser("verify", help="cross-check an index against bounded BFS")
    s.add_argument("graph")
    s.add_argument("index")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true")
    g.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("bench", help="time random queries, optionally against BFS")
    s.add_argument("graph")
    s.add_argument("index")
    s.add_argument("--queries", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--baseline", choices=["bfs"])

    s = sub.add_parser("genk", help="build a family of i-reach indexes")
    s.add_argument("graph")
    s.add_argument("--mode", choices=[GEOMETRIC, EXACT], default=GEOMETRIC)
    cover_opts(s)
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("askk", help="query a family for an arbitrary hop bound")
    s.add_argument("graph")
    s.add_argument("family")
    s.add_argument("s", type=int)
    s.add_argument("t", type=int)
    s.add_argument("k", type=int)
    return p


def _err(msg: str) -> None:
    print(f"kreach: {msg}", file=sys.stderr)


def _load_graph(path: str) -> Graph:
    return read_edge_list(path)


def _vertex(g: Graph, ext: int) -> int:
    try:
        return g.internal_id(ext)
    except KeyError:
        raise ValueError(f"vertex {ext} not in graph") from None


def _answer(g: Graph, idx, s: int, t: int):
    if isinstance(idx, HKReachIndex):
        return query_hk(g, idx, s, t)
    return query(g, idx, s, t)


def _read_pairs(g: Graph, path: str) -> list[tuple[int, int]]:
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListError(lineno, line, "expected 's t'")
            try:
                pairs.append((_vertex(g, int(parts[0])), _vertex(g, int(parts[1]))))
            except ValueError as exc:
                raise EdgeListError(lineno, line, str(exc)) from None
    return pairs


def cmd_stats(a) -> int:
    g = _load_graph(a.graph)
    st = graph_stats(g, samples=a.sampled, seed=a.seed)
    print(st.as_row())
    if st.estimated:
        _err("diameter and median are estimates from sampled sources")
    return EX_OK


def _cover(g: Graph, a):
    return approx_h_hop_cover(g, a.hop, a.seed, STRATEGIES[a.strategy])


def cmd_cover(a) -> int:
    g = _load_graph(a.graph)
    sys.stdout.write(format_cover(g, _cover(g, a)))
    return EX_OK


def cmd_build(a) -> int:
    g = _load_graph(a.graph)
    t0 = time.perf_counter()
    c = _cover(g, a)
    idx = build_kreach(g, a.k, c) if a.hop == 1 else build_hk(g, a.hop, a.k, c)
    ms = (time.perf_counter() - t0) * 1000
    size = save_index(idx, a.output)
    print(f"cover={len(c)}\tedges={idx.edge_count}\tbytes={size}\tbuild_ms={ms:.1f}")
    return EX_OK


def cmd_query(a) -> int:
    try:
        g = _load_graph(a.graph)
        idx = load_index(a.index, g)
        ans = _answer(g, idx, _vertex(g, a.s), _vertex(g, a.t))
    except (OSError, ValueError, IndexError) as exc:
        _err(str(exc))
        return EX_QUERY_ERROR
    print("true" if ans.reachable else "false")
    return EX_OK if ans.reachable else 1


def cmd_batch(a) -> int:
    g = _load_graph(a.graph)
    idx = load_index(a.index, g)
    pairs = _read_pairs(g, a.pairs)
    answers, hist = batch_query(g, idx, pairs)
    out = []
    for (s, t), ans in zip(pairs, answers):
        out.append(f"{g.external_id(s)}\t{g.external_id(t)}\t"
                   f"{'true' if ans.reachable else 'false'}\t{ans.resolved_by}\n")
    sys.stdout.write("".join(out))
    if a.hist:
        total = max(len(pairs), 1)
        for case in CASES:
            print(f"{case}\t{hist[case]}\t{100.0 * hist[case] / total:.2f}%", file=sys.stderr)
    return EX_OK


def cmd_verify(a) -> int:
    g = _load_graph(a.graph)
    idx = load_index(a.index, g)
    if a.samples is not None:
        rng = np.random.default_rng(a.seed)
        pairs = rng.integers(0, g.n, size=(a.samples, 2)).tolist() if g.n else []
    else:
        pairs = ((s, t) for s in range(g.n) for t in range(g.n))
    checked = mismatches = 0
    for s, t in pairs:
        checked += 1
        if _answer(g, idx, s, t).reachable != oracle_khop(g, s, t, idx.k):
            mismatches += 1
            if mismatches <= 10:
                _err(f"mismatch {g.external_id(s)} -> {g.external_id(t)}")
    print(f"checked={checked}\tmismatches={mismatches}")
    return EX_OK if mismatches == 0 else 1


def cmd_bench(a) -> int:
    g = _load_graph(a.graph)
    idx = load_index(a.index, g)
    if g.n == 0:
        raise ValueError("cannot benchmark an empty graph")
    pairs = np.random.default_rng(a.seed).integers(0, g.n, size=(a.queries, 2)).tolist()
    t0 = time.perf_counter()
    answers, hist = batch_query(g, idx, pairs)
    index_s = time.perf_counter() - t0
    fields = [f"queries={a.queries}", f"k={idx.k}", f"h={idx.h}",
              f"index_total_ms={index_s * 1000:.3f}",
              f"index_per_query_us={index_s * 1e6 / max(a.queries, 1):.3f}"]
    if a.baseline == "bfs":
        scratch = np.zeros(g.n, dtype=bool)
        t0 = time.perf_counter()
        base = [khop_reachable_vec(g, s, t, idx.k, scratch) for s, t in pairs]
        bfs_s = time.perf_counter() - t0
        agree = sum(x.reachable == y for x, y in zip(answers, base))
        fields += [f"bfs_total_ms={bfs_s * 1000:.3f}",
                   f"bfs_per_query_us={bfs_s * 1e6 / max(a.queries, 1):.3f}",
                   f"speedup={bfs_s / index_s if index_s else float('inf'):.1f}",
                   f"agree={agree}"]
    print("\t".join(fields))
    print("\t".join(f"{c}={hist[c]}" for c in CASES), file=sys.stderr)
    return EX_OK


def cmd_genk(a) -> int:
    g = _load_graph(a.graph)
    fam = build_family(g, a.mode, STRATEGIES[a.strategy], a.seed)
    size = save_family(fam, a.output)
    print(f"diameter={fam.diameter}\tkeys={','.join(map(str, fam.keys))}\tbytes={size}")
    return EX_OK


def cmd_askk(a) -> int:
    g = _load_graph(a.graph)
    fam = load_family(a.family, g)
    print(query_general(fam, g, _vertex(g, a.s), _vertex(g, a.t), a.k))
    return EX_OK


COMMANDS = {
    "stats": cmd_stats,
    "cover": cmd_cover,
    "build": cmd_build,
    "query": cmd_query,
    "batch": cmd_batch,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "genk": cmd_genk,
    "askk": cmd_askk,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        a = parser.parse_args(argv)
    except UsageError as exc:
        _err(str(exc))
        print(parser.format_usage(), file=sys.stderr, end="")
        return EX_USAGE
    try:
        return COMMANDS[a.cmd](a)
    except OSError as exc:
        _err(str(exc))
        return EX_NOINPUT
    except (IndexFormatError, EdgeListError, ValueError, IndexError) as exc:
        _err(str(exc))
        return EX_DATAERR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
