"""Seeded synthetic digraphs for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from kreach.graph import Graph

__all__ = ["random_digraph", "powerlaw_digraph", "random_pairs"]


def random_digraph(n: int, p: float, seed: int) -> Graph:
    """Directed G(n, p): each ordered pair ``u != v`` is an edge with probability ``p``."""
    rng = np.random.default_rng(seed)
    if n == 0:
        return Graph.from_edges(0, np.empty((0, 2), dtype=np.int64))
    a = rng.random((n, n)) < p
    np.fill_diagonal(a, False)
    return Graph.from_edges(n, np.argwhere(a))


def powerlaw_digraph(n: int, m: int, seed: int, hub_fraction: float = 0.02,
                     exponent: float = 2.1, hub_share: float = 0.02) -> Graph:
    """Core-periphery digraph with power-law hub degrees.

    A small set of hubs carries a Zipf-like degree distribution.  The
    remaining vertices are split into sources (edges into hubs) and sinks
    (edges out of hubs); about ``hub_share * m`` further edges link hubs
    to each other in both directions.  Endpoints on the hub side are
    drawn proportionally to hub weight, so hub degrees follow a power law
    with the given exponent while reachability stays bounded through the
    hub core.
    """
    rng = np.random.default_rng(seed)
    hubs = max(2, int(n * hub_fraction))
    weights = np.arange(1, hubs + 1, dtype=float) ** (-1.0 / (exponent - 1.0))
    weights /= weights.sum()
    periphery = rng.permutation(np.arange(hubs, n))
    half = periphery.size * 3 // 5
    sources, sinks = periphery[:half], periphery[half:]

    core = int(m * hub_share)
    rest = m - core
    n_in = rest * sources.size // max(periphery.size, 1)
    n_out = rest - n_in
    parts = [
        np.column_stack([rng.choice(sources, n_in), rng.choice(hubs, n_in, p=weights)]),
        np.column_stack([rng.choice(hubs, n_out, p=weights), rng.choice(sinks, n_out)]),
        np.column_stack([rng.choice(hubs, core, p=weights), rng.choice(hubs, core, p=weights)]),
    ]
    return Graph.from_edges(n, np.concatenate(parts))


def random_pairs(n: int, count: int, seed: int) -> np.ndarray:
    """Uniform ordered pairs with replacement, shape ``(count, 2)``."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, n, size=(count, 2), dtype=np.int64)
