"""Gould-Fernandez brokerage census.

For every ordered two-path ``i -> v -> j`` with ``i != j`` the broker ``v``
earns one role, decided by the groups of ``i``, ``v`` and ``j``:

=================  ==============================
coordinator        g(i) == g(v) == g(j)
gatekeeper         g(i) != g(v) == g(j)
representative     g(i) == g(v) != g(j)
consultant         g(i) == g(j) != g(v)
liaison            all three groups distinct
=================  ==============================

Two-paths are counted whether or not ``i -> j`` is itself an edge.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import PartitionError
from .graph import Partition, TradeGraph

ROLES = ("coordinator", "gatekeeper", "representative", "consultant", "liaison")


@dataclass(frozen=True)
class BrokerageCensus:
    nodes: tuple[str, ...]
    counts: np.ndarray  # shape (n, 5), columns in ROLES order

    @property
    def per_node(self) -> dict:
        out = {}
        for v, row in zip(self.nodes, self.counts):
            d = {r: int(c) for r, c in zip(ROLES, row)}
            d["total"] = int(row.sum())
            out[v] = d
        return out

    @property
    def network_totals(self) -> dict:
        return dict(zip(ROLES, (int(x) for x in self.counts.sum(axis=0))))

    def node_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)


def role_counts_dense(adj: np.ndarray, codes: np.ndarray, n_groups: int) -> np.ndarray:
    """Role counts ``(n, 5)`` from a 0/1 adjacency matrix and integer group codes.

    Works per broker from group-wise in/out neighbour counts rather than
    enumerating two-paths; ``i -> v -> i`` returns are subtracted through the
    reciprocated-neighbour counts.
    """
    a = np.asarray(adj, dtype=np.int64)
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 5), dtype=np.int64)
    member = np.zeros((n, n_groups), dtype=np.int64)
    member[np.arange(n), codes] = 1
    c_in = a.T @ member            # [v, g] predecessors of v in group g
    c_out = a @ member             # [v, g] successors of v in group g
    r_grp = (a * a.T) @ member     # [v, g] reciprocated neighbours of v in group g
    rows = np.arange(n)
    d_in = c_in.sum(axis=1)
    d_out = c_out.sum(axis=1)
    same_in = c_in[rows, codes]
    same_out = c_out[rows, codes]
    r_same = r_grp[rows, codes]
    coordinator = same_in * same_out - r_same
    gatekeeper = (d_in - same_in) * same_out
    representative = same_in * (d_out - same_out)
    same_pair = (c_in * c_out).sum(axis=1) - r_grp.sum(axis=1)
    consultant = same_pair - coordinator
    r_other = r_grp.sum(axis=1) - r_same
    liaison = (d_in - same_in) * (d_out - same_out) - consultant - r_other
    return np.stack([coordinator, gatekeeper, representative, consultant, liaison], axis=1)


def _codes(graph: TradeGraph, partition: Partition) -> np.ndarray:
    try:
        return partition.codes(graph.nodes)
    except KeyError as exc:
        raise PartitionError(f"node {exc.args[0]!r} has no group label") from None


def brokerage_census(graph: TradeGraph, partition: Partition) -> BrokerageCensus:
    codes = _codes(graph, partition)
    counts = role_counts_dense(graph.adjacency(), codes, len(partition.labels))
    return BrokerageCensus(graph.nodes, counts)


def role_totals(census: BrokerageCensus) -> dict:
    return census.network_totals


def degree_role_table(graph: TradeGraph, partition: Partition) -> list[tuple]:
    """Rows ``(node, region, total_degree, *role counts)`` in node order."""
    census = brokerage_census(graph, partition)
    deg = graph.degrees("total")
    return [
        (v, partition[v], int(deg[k]), *(int(c) for c in census.counts[k]))
        for k, v in enumerate(graph.nodes)
    ]


def write_census_csv(graph: TradeGraph, partition: Partition, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["node", "region", *ROLES, "total", "degree"])
        for v, region, deg, *roles in degree_role_table(graph, partition):
            out.writerow([v, region, *roles, sum(roles), deg])
    return path
