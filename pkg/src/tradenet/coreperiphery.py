"""Rich-core split of a weighted graph into core and periphery."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import UndefinedStatisticError
from .graph import TradeGraph


@dataclass(frozen=True)
class CoreAssignment:
    ranking: tuple[str, ...]
    strength: tuple[float, ...]
    sigma_plus: tuple[float, ...]
    r_star: int  # 1-based
    core: frozenset
    periphery: frozenset
    tie_groups: tuple[tuple[str, ...], ...]  # runs of equal strength, length > 1

    def rank_of(self, node: str) -> int:
        return self.ranking.index(node) + 1


def rich_core(graph: TradeGraph, direction: str = "total") -> CoreAssignment:
    """Rank nodes by decreasing strength and cut at the peak of sigma-plus.

    ``sigma_plus[r]`` is the total weight (both directions) between the node
    at rank ``r`` and all higher-ranked nodes. The core is every rank up to
    the first rank where it peaks. Equal strengths keep node order.
    """
    n = graph.n
    if n == 0:
        raise UndefinedStatisticError("rich core needs a non-empty graph")
    s = graph.strengths(direction)
    order = np.argsort(-s, kind="stable")
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    src, dst, w = graph.edge_arrays()
    # each edge adds its weight to the lower-ranked endpoint
    lower = np.where(rank[src] > rank[dst], rank[src], rank[dst])
    sigma = np.zeros(n, dtype=np.float64)
    np.add.at(sigma, lower, w)
    r_star = int(np.argmax(sigma)) + 1
    ranking = tuple(graph.nodes[k] for k in order)
    sorted_s = s[order]
    ties = []
    start = 0
    for k in range(1, n + 1):
        if k == n or sorted_s[k] != sorted_s[start]:
            if k - start > 1:
                ties.append(ranking[start:k])
            start = k
    return CoreAssignment(
        ranking=ranking,
        strength=tuple(float(x) for x in sorted_s),
        sigma_plus=tuple(float(x) for x in sigma),
        r_star=r_star,
        core=frozenset(ranking[:r_star]),
        periphery=frozenset(ranking[r_star:]),
        tie_groups=tuple(ties),
    )


def write_core_csv(result: CoreAssignment, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["node", "rank", "strength", "sigma_plus", "is_core"])
        for r, (v, s, sp) in enumerate(zip(result.ranking, result.strength, result.sigma_plus), start=1):
            out.writerow([v, r, repr(s), repr(sp), int(r <= result.r_star)])
    return path
