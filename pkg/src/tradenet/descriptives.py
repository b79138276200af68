"""Binary-topology descriptive statistics and the E-I index."""
from __future__ import annotations

import csv
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import UndefinedStatisticError
from .graph import Partition, TradeGraph


@dataclass(frozen=True)
class DescriptiveReport:
    size: int
    density: float
    reciprocity: float
    in_centralisation: float
    out_centralisation: float
    regional_assortativity: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class EiScores:
    """Per-node E-I scores (``None`` for isolates) plus the network-level index."""

    per_node: dict
    internal: dict
    external: dict
    global_score: float | None

    def is_defined(self, node: str) -> bool:
        return self.per_node[node] is not None


def density(graph: TradeGraph) -> float:
    n = graph.n
    if n < 2:
        raise UndefinedStatisticError(f"density needs at least 2 nodes, got {n}")
    return graph.number_of_edges() / (n * (n - 1))


def _mutual_mask(graph: TradeGraph) -> np.ndarray:
    src, dst, _ = graph.edge_arrays()
    a = np.zeros((graph.n, graph.n), dtype=bool)
    a[src, dst] = True
    return a[dst, src]


def reciprocity(graph: TradeGraph) -> float:
    """Fraction of edges whose reverse edge is also present."""
    m = graph.number_of_edges()
    if m == 0:
        raise UndefinedStatisticError("reciprocity is undefined for an empty edge set")
    return int(_mutual_mask(graph).sum()) / m


def dyad_census(graph: TradeGraph) -> dict:
    """Counts of mutual, asymmetric and null unordered dyads."""
    n = graph.n
    mutual = int(_mutual_mask(graph).sum()) // 2
    asym = graph.number_of_edges() - 2 * mutual
    return {"mutual": mutual, "asymmetric": asym, "null": n * (n - 1) // 2 - mutual - asym}


def degree_centralisation(graph: TradeGraph, direction: str = "out") -> float:
    """Freeman centralisation of in- or out-degree, normalised by ``(n - 1) ** 2``."""
    if direction not in ("in", "out"):
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
    n = graph.n
    if n < 2:
        raise UndefinedStatisticError(f"centralisation needs at least 2 nodes, got {n}")
    d = graph.degrees(direction)
    return int((d.max() - d).sum()) / (n - 1) ** 2


def mixing_matrix(graph: TradeGraph, partition: Partition) -> tuple[np.ndarray, tuple[str, ...]]:
    """Normalised group-to-group edge fractions, rows = source group."""
    codes = partition.codes(graph.nodes)
    src, dst, _ = graph.edge_arrays()
    g = len(partition.labels)
    e = np.zeros((g, g), dtype=np.float64)
    np.add.at(e, (codes[src], codes[dst]), 1.0)
    m = graph.number_of_edges()
    if m:
        e /= m
    return e, partition.labels


def categorical_assortativity(graph: TradeGraph, partition: Partition) -> float:
    if graph.number_of_edges() == 0:
        raise UndefinedStatisticError("assortativity is undefined for an empty edge set")
    e, _ = mixing_matrix(graph, partition)
    a = e.sum(axis=1)
    b = e.sum(axis=0)
    ab = float(a @ b)
    denom = 1.0 - ab
    if denom <= 1e-15:
        raise UndefinedStatisticError("assortativity is undefined when all edges lie in one group")
    return (float(np.trace(e)) - ab) / denom


def ei_index(graph: TradeGraph, partition: Partition) -> EiScores:
    """E-I index per node and for the whole network.

    Every directed edge incident to a node counts as one tie, so a
    reciprocated dyad contributes two.
    """
    codes = partition.codes(graph.nodes)
    src, dst, _ = graph.edge_arrays()
    same = codes[src] == codes[dst]
    n = graph.n
    internal = np.bincount(src[same], minlength=n) + np.bincount(dst[same], minlength=n)
    external = np.bincount(src[~same], minlength=n) + np.bincount(dst[~same], minlength=n)
    per_node, ints, exts = {}, {}, {}
    for k, v in enumerate(graph.nodes):
        i, e = int(internal[k]), int(external[k])
        ints[v], exts[v] = i, e
        per_node[v] = (e - i) / (e + i) if e + i else None
    tot_i, tot_e = int(same.sum()), int((~same).sum())
    global_score = (tot_e - tot_i) / (tot_e + tot_i) if tot_e + tot_i else None
    return EiScores(per_node, ints, exts, global_score)


def describe(graph: TradeGraph, partition: Partition) -> DescriptiveReport:
    return DescriptiveReport(
        size=graph.n,
        density=density(graph),
        reciprocity=reciprocity(graph),
        in_centralisation=degree_centralisation(graph, "in"),
        out_centralisation=degree_centralisation(graph, "out"),
        regional_assortativity=categorical_assortativity(graph, partition),
    )


def write_ei_csv(graph: TradeGraph, partition: Partition, scores: EiScores, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["node", "region", "internal", "external", "ei"])
        for v in graph.nodes:
            s = scores.per_node[v]
            out.writerow([v, partition[v], scores.internal[v], scores.external[v], "" if s is None else repr(s)])
    return path
