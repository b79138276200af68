"""Disparity-filter backbone for directed weighted graphs.

Each edge is scored twice: against its source's outgoing weight split and
against its target's incoming weight split. The score at an endpoint with
``k`` edges in that direction, carrying fraction ``p`` of the endpoint's
strength, is ``(1 - p) ** (k - 1)``: the probability that a uniform random
split of the strength gives one edge at least that share. An edge is kept
when either score is strictly below ``alpha``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, UndefinedStatisticError
from .graph import TradeGraph, drop_isolates

ENDPOINTS = ("source", "target")


@dataclass(frozen=True)
class BackboneResult:
    backbone: TradeGraph
    retained: frozenset
    edge_scores: dict  # (source, target) -> (alpha_out, alpha_in)
    alpha: float
    removed_nodes: tuple[str, ...]


def _endpoint_alpha(weight, node_strength, k):
    # k == 1 gives 0**0 from the formula; a sole edge is treated as not significant.
    if k <= 1:
        return 1.0
    p = weight / node_strength
    return float(max(0.0, 1.0 - p) ** (k - 1))


def edge_alpha(graph: TradeGraph, edge: tuple[str, str], endpoint: str = "source") -> float:
    """Disparity score of ``edge`` at one endpoint (``"source"`` or ``"target"``)."""
    if endpoint not in ENDPOINTS:
        raise ValueError(f"endpoint must be one of {ENDPOINTS}, got {endpoint!r}")
    u, v = edge
    w = graph.weight(u, v)
    if endpoint == "source":
        nbrs = graph.out_weights(u)
    else:
        nbrs = graph.in_weights(v)
    return _endpoint_alpha(w, sum(nbrs.values()), len(nbrs))


def edge_alpha_arrays(graph: TradeGraph) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(alpha_out, alpha_in)`` for every edge in ``graph.edge_arrays()`` order."""
    src, dst, w = graph.edge_arrays()
    n = graph.n
    k_out = np.bincount(src, minlength=n)
    k_in = np.bincount(dst, minlength=n)
    s_out = np.bincount(src, weights=w, minlength=n)
    s_in = np.bincount(dst, weights=w, minlength=n)

    def score(k, s):
        p = w / s
        base = np.clip(1.0 - p, 0.0, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            a = np.power(base, k - 1)
        return np.where(k <= 1, 1.0, a)

    return score(k_out[src], s_out[src]), score(k_in[dst], s_in[dst])


def disparity_filter(graph: TradeGraph, alpha: float = 0.05) -> BackboneResult:
    """Keep edges significant at level ``alpha`` from either endpoint.

    Weights are preserved and nodes left isolated by the filter are dropped;
    their labels are reported in ``removed_nodes``.
    """
    if not (isinstance(alpha, (int, float)) and 0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha!r}")
    if graph.n == 0:
        raise UndefinedStatisticError("disparity filter needs a non-empty graph")
    a_out, a_in = edge_alpha_arrays(graph)
    keep = np.minimum(a_out, a_in) < alpha
    nodes = graph.nodes
    src, dst, w = graph.edge_arrays()
    scores = {}
    retained = []
    kept_edges = []
    for e in range(len(src)):
        u, v = nodes[src[e]], nodes[dst[e]]
        scores[(u, v)] = (float(a_out[e]), float(a_in[e]))
        if keep[e]:
            retained.append((u, v))
            kept_edges.append((u, v, w[e]))
    filtered = TradeGraph(nodes, kept_edges)
    backbone = drop_isolates(filtered)
    removed = tuple(v for v in nodes if v not in backbone)
    return BackboneResult(backbone, frozenset(retained), scores, float(alpha), removed)


def write_scores_csv(graph: TradeGraph, result: BackboneResult, path) -> Path:
    """Write ``source,target,weight,alpha_out,alpha_in,retained`` for every input edge."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["source", "target", "weight", "alpha_out", "alpha_in", "retained"])
        for u, v, w in graph.edges():
            a_out, a_in = result.edge_scores[(u, v)]
            out.writerow([u, v, repr(w), repr(a_out), repr(a_in), int((u, v) in result.retained)])
    return path
