"""Directed weighted simple graphs and categorical node partitions.

``TradeGraph`` is immutable once built. Node order is fixed at construction
(first appearance when loaded from records) and every algorithm in the
package iterates nodes in that order, which keeps outputs deterministic.
"""
from __future__ import annotations

import csv
import math
import warnings
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType

import numpy as np

from .errors import (
    DataError,
    DuplicateEdgeWarning,
    ParseError,
    PartitionError,
    SelfLoopWarning,
    UnknownNodeWarning,
)

DIRECTIONS = ("in", "out", "total")


class TradeGraph:
    """Directed, weighted, loop-free graph without parallel edges.

    Parameters
    ----------
    nodes : sequence of str
        Node labels, in the order used for all downstream iteration.
    edges : iterable of (source, target, weight)
        Each ordered pair may appear once; weights must be positive and finite.
    """

    __slots__ = ("_nodes", "_index", "_succ", "_pred", "_m", "_cache")

    def __init__(self, nodes: Sequence[str], edges: Iterable[tuple[str, str, float]] = ()):
        nodes = tuple(nodes)
        index: dict[str, int] = {}
        for v in nodes:
            if not isinstance(v, str) or not v:
                raise DataError(f"node labels must be non-empty strings, got {v!r}")
            if v in index:
                raise DataError(f"duplicate node {v!r}")
            index[v] = len(index)
        succ: list[dict[int, float]] = [{} for _ in nodes]
        pred: list[dict[int, float]] = [{} for _ in nodes]
        m = 0
        for u, v, w in edges:
            try:
                i, j = index[u], index[v]
            except KeyError as exc:
                raise DataError(f"edge ({u!r}, {v!r}) references unknown node {exc.args[0]!r}") from None
            if i == j:
                raise DataError(f"self-loop on {u!r}")
            w = float(w)
            if not (math.isfinite(w) and w > 0):
                raise DataError(f"edge ({u!r}, {v!r}) has non-positive or non-finite weight {w!r}")
            if j in succ[i]:
                raise DataError(f"parallel edge ({u!r}, {v!r})")
            succ[i][j] = w
            pred[j][i] = w
            m += 1
        # Neighbour dicts are re-keyed in node order so iteration never depends on input order.
        self._nodes = nodes
        self._index = MappingProxyType(index)
        self._succ = tuple(MappingProxyType(dict(sorted(d.items()))) for d in succ)
        self._pred = tuple(MappingProxyType(dict(sorted(d.items()))) for d in pred)
        self._m = m
        self._cache: dict = {}

    # -- basic accessors -------------------------------------------------
    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def n(self) -> int:
        return len(self._nodes)

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, node) -> bool:
        return node in self._index

    def __iter__(self):
        return iter(self._nodes)

    def number_of_edges(self) -> int:
        return self._m

    def index(self, node: str) -> int:
        try:
            return self._index[node]
        except KeyError:
            raise KeyError(f"unknown node {node!r}") from None

    def has_edge(self, u: str, v: str) -> bool:
        i, j = self._index.get(u), self._index.get(v)
        return i is not None and j is not None and j in self._succ[i]

    def weight(self, u: str, v: str) -> float:
        try:
            return self._succ[self.index(u)][self.index(v)]
        except KeyError:
            raise KeyError(f"no edge ({u!r}, {v!r})") from None

    def successors(self, node: str) -> tuple[str, ...]:
        return tuple(self._nodes[j] for j in self._succ[self.index(node)])

    def predecessors(self, node: str) -> tuple[str, ...]:
        return tuple(self._nodes[i] for i in self._pred[self.index(node)])

    def out_weights(self, node: str) -> dict[str, float]:
        return {self._nodes[j]: w for j, w in self._succ[self.index(node)].items()}

    def in_weights(self, node: str) -> dict[str, float]:
        return {self._nodes[i]: w for i, w in self._pred[self.index(node)].items()}

    def edges(self):
        """Yield ``(source, target, weight)`` ordered by source then target node order."""
        for i, nbrs in enumerate(self._succ):
            u = self._nodes[i]
            for j, w in nbrs.items():
                yield u, self._nodes[j], w

    # -- array views -----------------------------------------------------
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return read-only ``(src, dst, weight)`` arrays of node indices in edge order."""
        if "edge_arrays" not in self._cache:
            src = np.fromiter((i for i, d in enumerate(self._succ) for _ in d), dtype=np.int64, count=self._m)
            dst = np.fromiter((j for d in self._succ for j in d), dtype=np.int64, count=self._m)
            w = np.fromiter((x for d in self._succ for x in d.values()), dtype=np.float64, count=self._m)
            for a in (src, dst, w):
                a.flags.writeable = False
            self._cache["edge_arrays"] = (src, dst, w)
        return self._cache["edge_arrays"]

    def adjacency(self, weighted: bool = False) -> np.ndarray:
        """Dense ``n x n`` adjacency matrix in node order (a fresh copy)."""
        src, dst, w = self.edge_arrays()
        a = np.zeros((self.n, self.n), dtype=np.float64 if weighted else np.int64)
        a[src, dst] = w if weighted else 1
        return a

    def degrees(self, direction: str = "total") -> np.ndarray:
        _check_direction(direction)
        src, dst, _ = self.edge_arrays()
        out = np.bincount(src, minlength=self.n)
        inn = np.bincount(dst, minlength=self.n)
        return {"out": out, "in": inn, "total": out + inn}[direction]

    def strengths(self, direction: str = "total") -> np.ndarray:
        _check_direction(direction)
        src, dst, w = self.edge_arrays()
        out = np.bincount(src, weights=w, minlength=self.n)
        inn = np.bincount(dst, weights=w, minlength=self.n)
        return {"out": out, "in": inn, "total": out + inn}[direction]

    # -- derived graphs --------------------------------------------------
    def subgraph(self, nodes: Iterable[str]) -> "TradeGraph":
        """Induced subgraph; keeps this graph's node order."""
        keep = set(nodes)
        unknown = keep.difference(self._index)
        if unknown:
            raise KeyError(f"unknown node(s): {sorted(unknown)}")
        order = [v for v in self._nodes if v in keep]
        return TradeGraph(order, ((u, v, w) for u, v, w in self.edges() if u in keep and v in keep))

    def reversed(self) -> "TradeGraph":
        return TradeGraph(self._nodes, ((v, u, w) for u, v, w in self.edges()))

    def with_unit_weights(self) -> "TradeGraph":
        return TradeGraph(self._nodes, ((u, v, 1.0) for u, v, _ in self.edges()))

    def to_records(self) -> list[tuple[str, str, float]]:
        return list(self.edges())

    # -- comparisons -----------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, TradeGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._succ == other._succ

    def same_structure(self, other: "TradeGraph") -> bool:
        """Equal node *sets* and weighted edge sets, ignoring node order."""
        return set(self._nodes) == set(other._nodes) and set(self.edges()) == set(other.edges())

    __hash__ = None

    def __repr__(self) -> str:
        return f"TradeGraph(n={self.n}, m={self._m})"


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def degree(graph: TradeGraph, node: str, direction: str = "total") -> int:
    _check_direction(direction)
    i = graph.index(node)
    k_out, k_in = len(graph._succ[i]), len(graph._pred[i])
    return {"out": k_out, "in": k_in, "total": k_out + k_in}[direction]


def strength(graph: TradeGraph, node: str, direction: str = "total") -> float:
    _check_direction(direction)
    i = graph.index(node)
    s_out = math.fsum(graph._succ[i].values())
    s_in = math.fsum(graph._pred[i].values())
    return {"out": s_out, "in": s_in, "total": s_out + s_in}[direction]


def isolates(graph: TradeGraph) -> list[str]:
    deg = graph.degrees("total")
    return [v for v, d in zip(graph.nodes, deg) if d == 0]


def drop_isolates(graph: TradeGraph) -> TradeGraph:
    deg = graph.degrees("total")
    keep = [v for v, d in zip(graph.nodes, deg) if d > 0]
    if len(keep) == graph.n:
        return graph
    return graph.subgraph(keep)


def load_edge_list(records: Iterable[Sequence], start_line: int = 1) -> TradeGraph:
    """Build a graph from ``(source, target, weight)`` records.

    Duplicate ordered pairs are summed, self-loops dropped (with a
    ``SelfLoopWarning``), and node order follows first appearance.
    ``start_line`` is the line number reported for the first record.
    """
    order: dict[str, None] = {}
    weights: dict[tuple[str, str], float] = {}
    loops = dups = 0
    for lineno, rec in enumerate(records, start=start_line):
        if isinstance(rec, (str, bytes)) or len(rec) != 3:
            raise ParseError(f"expected 3 fields (source, target, weight), got {rec!r}", lineno)
        u, v, raw = rec
        u, v = str(u), str(v)
        if not u or not v:
            raise ParseError("empty node label", lineno)
        try:
            w = float(raw)
        except (TypeError, ValueError):
            raise ParseError(f"non-numeric weight {raw!r}", lineno) from None
        if not math.isfinite(w):
            raise ParseError(f"non-finite weight {raw!r}", lineno)
        if w <= 0:
            raise ParseError(f"weight must be positive, got {raw!r}", lineno)
        order.setdefault(u)
        order.setdefault(v)
        if u == v:
            loops += 1
            continue
        if (u, v) in weights:
            dups += 1
            weights[(u, v)] += w
        else:
            weights[(u, v)] = w
    if loops:
        warnings.warn(SelfLoopWarning(loops), stacklevel=2)
    if dups:
        warnings.warn(DuplicateEdgeWarning(dups), stacklevel=2)
    return TradeGraph(list(order), ((u, v, w) for (u, v), w in weights.items()))


def read_edge_csv(path) -> TradeGraph:
    """Read a ``source,target,weight`` CSV file (header required)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:3]] != ["source", "target", "weight"]:
            raise ParseError(f"{path}: expected header 'source,target,weight', got {header!r}", 1)
        rows = ([c.strip() for c in row] for row in reader if row)
        return load_edge_list(rows, start_line=2)


def write_edge_csv(graph: TradeGraph, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["source", "target", "weight"])
        for u, v, x in graph.edges():
            w.writerow([u, v, repr(x)])
    return path


@dataclass(frozen=True)
class Partition:
    """Assignment of nodes to categorical group labels.

    ``labels`` keeps the order in which groups were first seen; ``baseline``
    is the reference category for ERGM factor terms.
    """

    assignment: Mapping[str, str]
    labels: tuple[str, ...]
    baseline: str
    _code: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise PartitionError("partition labels must be distinct")
        if self.baseline not in self.labels:
            raise PartitionError(f"baseline {self.baseline!r} is not among labels {list(self.labels)}")
        stray = set(self.assignment.values()).difference(self.labels)
        if stray:
            raise PartitionError(f"assignment uses undeclared labels {sorted(stray)}")
        object.__setattr__(self, "_code", MappingProxyType({g: k for k, g in enumerate(self.labels)}))

    def __getitem__(self, node: str) -> str:
        try:
            return self.assignment[node]
        except KeyError:
            raise PartitionError(f"node {node!r} has no group label") from None

    def __contains__(self, node) -> bool:
        return node in self.assignment

    def non_baseline(self) -> tuple[str, ...]:
        return tuple(g for g in self.labels if g != self.baseline)

    def check_covers(self, graph: TradeGraph) -> None:
        missing = [v for v in graph.nodes if v not in self.assignment]
        if missing:
            raise PartitionError(f"{len(missing)} node(s) have no group label: {', '.join(missing[:20])}")

    def codes(self, nodes: Iterable[str]) -> np.ndarray:
        """Integer label index (position in ``labels``) for each node."""
        return np.array([self._code[self[v]] for v in nodes], dtype=np.int64)

    def restrict(self, graph: TradeGraph, drop_empty_labels: bool = False) -> "Partition":
        """Partition over ``graph``'s nodes only, keeping label order and baseline.

        With ``drop_empty_labels`` labels no remaining node carries are removed;
        losing the baseline that way is an error.
        """
        self.check_covers(graph)
        assignment = {v: self.assignment[v] for v in graph.nodes}
        labels = self.labels
        if drop_empty_labels:
            used = set(assignment.values())
            labels = tuple(g for g in labels if g in used)
            if self.baseline not in used:
                raise PartitionError(f"no remaining node carries the baseline label {self.baseline!r}")
        return Partition(assignment, labels, self.baseline)

    def relabel(self, mapping: Mapping[str, str]) -> "Partition":
        return Partition(
            {v: mapping[g] for v, g in self.assignment.items()},
            [mapping[g] for g in self.labels],
            mapping[self.baseline],
        )

    def to_records(self) -> list[tuple[str, str]]:
        return list(self.assignment.items())


def load_partition(records: Iterable[Sequence], graph: TradeGraph, baseline: str | None = None,
                   start_line: int = 1) -> Partition:
    """Label every node of ``graph`` from ``(node, label)`` records.

    Records for nodes outside the graph are ignored with an
    ``UnknownNodeWarning``. Labels are ordered by first appearance among the
    graph's own records; ``baseline`` defaults to the first of them.
    """
    assignment: dict[str, str] = {}
    unknown: list[str] = []
    for lineno, rec in enumerate(records, start=start_line):
        if isinstance(rec, (str, bytes)) or len(rec) != 2:
            raise ParseError(f"expected 2 fields (node, label), got {rec!r}", lineno)
        node, label = str(rec[0]), str(rec[1])
        if not label:
            raise ParseError(f"empty group label for node {node!r}", lineno)
        if node not in graph:
            unknown.append(node)
            continue
        if node in assignment and assignment[node] != label:
            raise PartitionError(f"line {lineno}: node {node!r} labelled both {assignment[node]!r} and {label!r}")
        assignment[node] = label
    missing = [v for v in graph.nodes if v not in assignment]
    if missing:
        raise PartitionError(f"{len(missing)} node(s) have no group label: {', '.join(missing[:20])}")
    if unknown:
        warnings.warn(UnknownNodeWarning(unknown), stacklevel=2)
    labels = list(dict.fromkeys(assignment.values()))
    if baseline is None:
        if not labels:
            raise PartitionError("no labels available to choose a baseline")
        baseline = labels[0]
    elif baseline not in labels:
        raise PartitionError(f"baseline {baseline!r} not among observed labels {labels}")
    ordered = {v: assignment[v] for v in graph.nodes}
    return Partition(ordered, labels, baseline)


def read_partition_csv(path, graph: TradeGraph, baseline: str | None = None) -> Partition:
    """Read a ``node,region`` CSV file (header required)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["node", "region"]:
            raise ParseError(f"{path}: expected header 'node,region', got {header!r}", 1)
        rows = ([c.strip() for c in row] for row in reader if row)
        return load_partition(rows, graph, baseline, start_line=2)


def write_partition_csv(partition: Partition, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node", "region"])
        w.writerows(partition.to_records())
    return path
