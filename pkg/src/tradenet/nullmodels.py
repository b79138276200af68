"""Degree-preserving randomisation of directed graphs by double-edge swaps."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigError
from .graph import TradeGraph
from .streams import check_seed, default_threads, stream

STAGE = "degree_null"


@dataclass(frozen=True)
class RewireConfig:
    swaps_per_edge: int = 100
    seed: int = 0
    samples: int = 1000

    def __post_init__(self):
        for name in ("swaps_per_edge", "samples"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        check_seed(self.seed)


@njit(cache=True, nogil=True)
def _swap_chain(src, dst, adj, picks):
    accepted = 0
    for t in range(picks.shape[0]):
        e1 = picks[t, 0]
        e2 = picks[t, 1]
        if e1 == e2:
            continue
        a = src[e1]
        b = dst[e1]
        c = src[e2]
        d = dst[e2]
        if a == c or b == d or a == d or c == b:
            continue
        if adj[a, d] or adj[c, b]:
            continue
        adj[a, b] = False
        adj[c, d] = False
        adj[a, d] = True
        adj[c, b] = True
        dst[e1] = d
        dst[e2] = b
        accepted += 1
    return accepted


def rewire_arrays(graph: TradeGraph, swaps_per_edge: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, int]:
    """Run one swap chain from ``graph``; return ``(src, dst, accepted_swaps)``."""
    src0, dst0, _ = graph.edge_arrays()
    src, dst = src0.copy(), dst0.copy()
    m = len(src)
    if m < 2:
        return src, dst, 0
    adj = np.zeros((graph.n, graph.n), dtype=np.bool_)
    adj[src, dst] = True
    picks = rng.integers(0, m, size=(swaps_per_edge * m, 2))
    accepted = _swap_chain(src, dst, adj, picks)
    return src, dst, int(accepted)


def _to_graph(graph: TradeGraph, src: np.ndarray, dst: np.ndarray) -> TradeGraph:
    nodes = graph.nodes
    return TradeGraph(nodes, ((nodes[i], nodes[j], 1.0) for i, j in zip(src.tolist(), dst.tolist())))


def degree_preserving_arrays(graph: TradeGraph, config: RewireConfig, threads: int | None = None) -> list:
    """Edge arrays ``(src, dst)`` of every sample, in sample order."""
    threads = threads or default_threads()

    def one(k):
        src, dst, _ = rewire_arrays(graph, config.swaps_per_edge, stream(config.seed, STAGE, k))
        return src, dst

    if threads == 1 or config.samples == 1:
        return [one(k) for k in range(config.samples)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(config.samples)))


def degree_preserving_sample(graph: TradeGraph, config: RewireConfig | None = None,
                             threads: int | None = None) -> list[TradeGraph]:
    """Simulate simple digraphs with ``graph``'s exact in- and out-degree sequences.

    Each sample starts from ``graph`` and attempts ``swaps_per_edge * |E|``
    swaps of two edges ``a->b, c->d`` into ``a->d, c->b``; swaps that would
    create a loop or a parallel edge are rejected. Sample ``k`` draws from
    the stream derived from ``(seed, k)``, so output does not depend on the
    thread count. Samples carry unit weights.
    """
    config = config or RewireConfig()
    return [_to_graph(graph, s, d) for s, d in degree_preserving_arrays(graph, config, threads)]
