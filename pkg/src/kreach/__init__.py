"""Vertex-cover based indexes for k-hop reachability in directed graphs."""

from kreach.cover import (
    Cover,
    approx_h_hop_cover,
    approx_vertex_cover,
    exact_min_vertex_cover,
    is_h_hop_cover,
)
from kreach.graph import (
    Graph,
    GraphStats,
    bounded_bfs,
    graph_stats,
    hop_neighbors,
    load_edge_list,
    read_edge_list,
)
from kreach.hk import HKReachIndex, build_hk, query_hk
from kreach.index import (
    KReachIndex,
    QueryAnswer,
    batch_query,
    build_kreach,
    query,
    query_k1,
    weight_code_of,
)
from kreach.oracle import all_pairs_bounded, oracle_khop

__version__ = "0.1.0"
