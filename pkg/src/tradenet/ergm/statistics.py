"""Global and change statistics for ERGM terms."""
from __future__ import annotations

import numpy as np

from ..errors import ModelError
from ..graph import TradeGraph
from . import _kernels
from .terms import (
    EDGES, GWDSP, GWESP, GWID, GWOD, LIT_DSP, LIT_ESP, LIT_ID, LIT_OD, MUTUAL, RECEIVER, SENDER,
    ModelSpec,
)


def _gw_weight(k: np.ndarray, decay: float) -> np.ndarray:
    """``e^decay * (1 - (1 - e^-decay)^k)``, zero at ``k == 0``."""
    r = 1.0 - np.exp(-decay)
    return np.exp(decay) * (1.0 - np.power(r, k.astype(np.float64)))


def statistics_from_adjacency(adj: np.ndarray, model: ModelSpec) -> np.ndarray:
    """Full recomputation of ``g(y)`` from a 0/1 adjacency matrix."""
    a = np.asarray(adj, dtype=np.int64)
    n = a.shape[0]
    if n != len(model.nodes):
        raise ModelError(f"adjacency has {n} nodes, model is bound to {len(model.nodes)}")
    outdeg = a.sum(axis=1)
    indeg = a.sum(axis=0)
    two_paths = a @ a
    off = ~np.eye(n, dtype=bool)
    edge = a.astype(bool)
    stats = np.empty(model.n_stats, dtype=np.float64)
    for t, (code, p, g) in enumerate(zip(model.codes, model.params, model.label_index)):
        if code == EDGES:
            v = a.sum()
        elif code == MUTUAL:
            v = (a * a.T).sum() / 2
        elif code == GWOD:
            v = _gw_weight(outdeg, p).sum()
        elif code == GWID:
            v = _gw_weight(indeg, p).sum()
        elif code == GWESP:
            v = _gw_weight(two_paths[edge], p).sum()
        elif code == GWDSP:
            v = _gw_weight(two_paths[off], p).sum()
        elif code == SENDER:
            v = outdeg[model.labels == g].sum()
        elif code == RECEIVER:
            v = indeg[model.labels == g].sum()
        elif code == LIT_OD:
            v = np.exp(-p * outdeg).sum()
        elif code == LIT_ID:
            v = np.exp(-p * indeg).sum()
        elif code == LIT_ESP:
            v = (two_paths * a).sum()
        elif code == LIT_DSP:
            v = (outdeg * (outdeg - 1)).sum()
        else:  # pragma: no cover
            raise ModelError(f"unknown statistic code {code}")
        stats[t] = v
    return stats


def global_statistics(graph: TradeGraph, model: ModelSpec) -> np.ndarray:
    """The model's statistic vector ``g(y)`` for ``graph`` (weights ignored)."""
    model.check_graph(graph)
    return statistics_from_adjacency(graph.adjacency(), model)


class ToggleState:
    """Mutable dense state for repeated change-statistic evaluation and toggling."""

    def __init__(self, graph: TradeGraph, model: ModelSpec):
        model.check_graph(graph)
        n = graph.n
        self.model = model
        self.n = n
        self.adj = np.ascontiguousarray(graph.adjacency().astype(np.uint8))
        a = self.adj.astype(np.int64)
        self.sp = np.ascontiguousarray(a @ a)
        self.outdeg = a.sum(axis=1)
        self.indeg = a.sum(axis=0)
        cap = max(n * (n - 1), 1)
        self.es = np.zeros(cap, dtype=np.int64)
        self.ed = np.zeros(cap, dtype=np.int64)
        self.pos = np.full((n, n), -1, dtype=np.int64)
        src, dst, _ = graph.edge_arrays()
        self.m = len(src)
        self.es[: self.m] = src
        self.ed[: self.m] = dst
        self.pos[src, dst] = np.arange(self.m)
        self._buf = np.empty(model.n_stats, dtype=np.float64)

    def change(self, i: int, j: int) -> np.ndarray:
        if i == j:
            raise ModelError(f"dyad ({i}, {j}) is a self-loop")
        m = self.model
        _kernels.change_stats(self.adj, self.sp, self.outdeg, self.indeg, m.labels, m.codes, m.params,
                              m.label_index, i, j, self._buf)
        return self._buf.copy()

    def toggle(self, i: int, j: int) -> None:
        if i == j:
            raise ModelError(f"dyad ({i}, {j}) is a self-loop")
        self.m = int(_kernels.toggle(self.adj, self.sp, self.outdeg, self.indeg, self.es, self.ed, self.pos,
                                     self.m, i, j))

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self.es[: self.m].copy(), self.ed[: self.m].copy()

    def statistics(self) -> np.ndarray:
        return statistics_from_adjacency(self.adj, self.model)


def change_statistics(graph: TradeGraph, dyad: tuple[str, str], model: ModelSpec) -> np.ndarray:
    """``g(y with y_ij = 1) - g(y with y_ij = 0)`` for the dyad ``(i, j)``, other ties fixed."""
    i, j = dyad
    if i == j:
        raise ModelError(f"dyad ({i!r}, {j!r}) is a self-loop")
    state = ToggleState(graph, model)
    return state.change(graph.index(i), graph.index(j))
