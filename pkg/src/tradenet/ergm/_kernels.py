"""Numba kernels for change statistics and dyad-toggle Metropolis sampling.

State shared by the kernels, for an ``n``-node graph:

adj     uint8 (n, n)   adjacency
sp      int64 (n, n)   two-path counts, ``sp == adj @ adj`` including the diagonal
outdeg  int64 (n,)
indeg   int64 (n,)
es, ed  int64 (n*(n-1),)  unordered list of present edges, first ``m`` slots used
pos     int64 (n, n)   slot of edge (i, j) in ``es``/``ed``
"""
import math

import numpy as np
from numba import njit

from .terms import (
    EDGES, GWDSP, GWESP, GWID, GWOD, LIT_DSP, LIT_ESP, LIT_ID, LIT_OD, MUTUAL, RECEIVER, SENDER,
)


@njit(cache=True, nogil=True)
def change_stats(adj, sp, outdeg, indeg, labels, codes, params, label_index, i, j, out):
    """Write ``g(y, y_ij = 1) - g(y, y_ij = 0)`` into ``out``.

    Counts that include the dyad itself are corrected by ``y = adj[i, j]``
    so the result is the same whichever state the dyad is in.
    """
    n = adj.shape[0]
    y = np.int64(adj[i, j])
    for t in range(codes.shape[0]):
        c = codes[t]
        if c == EDGES:
            out[t] = 1.0
        elif c == MUTUAL:
            out[t] = float(adj[j, i])
        elif c == GWOD:
            r = 1.0 - math.exp(-params[t])
            out[t] = r ** (outdeg[i] - y)
        elif c == GWID:
            r = 1.0 - math.exp(-params[t])
            out[t] = r ** (indeg[j] - y)
        elif c == GWESP:
            r = 1.0 - math.exp(-params[t])
            s = math.exp(params[t]) * (1.0 - r ** sp[i, j])
            for b in range(n):
                if adj[i, b] and adj[j, b]:
                    s += r ** (sp[i, b] - y)
            for a in range(n):
                if adj[a, i] and adj[a, j]:
                    s += r ** (sp[a, j] - y)
            out[t] = s
        elif c == GWDSP:
            r = 1.0 - math.exp(-params[t])
            s = 0.0
            for b in range(n):
                if b != i and adj[j, b]:
                    s += r ** (sp[i, b] - y)
            for a in range(n):
                if a != j and adj[a, i]:
                    s += r ** (sp[a, j] - y)
            out[t] = s
        elif c == SENDER:
            out[t] = 1.0 if labels[i] == label_index[t] else 0.0
        elif c == RECEIVER:
            out[t] = 1.0 if labels[j] == label_index[t] else 0.0
        elif c == LIT_OD:
            d = outdeg[i] - y
            out[t] = math.exp(-params[t] * (d + 1)) - math.exp(-params[t] * d)
        elif c == LIT_ID:
            d = indeg[j] - y
            out[t] = math.exp(-params[t] * (d + 1)) - math.exp(-params[t] * d)
        elif c == LIT_ESP:
            s = sp[i, j]
            for k in range(n):
                s += adj[i, k] * adj[j, k] + adj[k, i] * adj[k, j]
            out[t] = float(s)
        elif c == LIT_DSP:
            out[t] = 2.0 * (outdeg[i] - y)
        else:
            out[t] = np.nan


@njit(cache=True, nogil=True)
def toggle(adj, sp, outdeg, indeg, es, ed, pos, m, i, j):
    """Flip dyad ``(i, j)`` and update every cache; returns the new edge count."""
    n = adj.shape[0]
    if adj[i, j]:
        delta = -1
        k = pos[i, j]
        last = m - 1
        es[k] = es[last]
        ed[k] = ed[last]
        pos[es[k], ed[k]] = k
        pos[i, j] = -1
        m -= 1
        adj[i, j] = 0
    else:
        delta = 1
        es[m] = i
        ed[m] = j
        pos[i, j] = m
        m += 1
        adj[i, j] = 1
    outdeg[i] += delta
    indeg[j] += delta
    for b in range(n):
        if adj[j, b]:
            sp[i, b] += delta
    for a in range(n):
        if adj[a, i]:
            sp[a, j] += delta
    return m


@njit(cache=True, nogil=True)
def design_matrix(adj, sp, outdeg, indeg, labels, codes, params, label_index, x, y):
    """Fill one row of change statistics per ordered dyad ``i != j`` (row-major)."""
    n = adj.shape[0]
    row = 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            change_stats(adj, sp, outdeg, indeg, labels, codes, params, label_index, i, j, x[row])
            y[row] = adj[i, j]
            row += 1


@njit(cache=True)
def _log_q_remove(m, n_dyads):
    return math.log(0.5 / m + 0.5 / n_dyads)


@njit(cache=True)
def _log_q_add(m, n_dyads):
    if m == 0:
        return -math.log(n_dyads)
    return math.log(0.5 / n_dyads)


@njit(cache=True, nogil=True)
def metropolis(adj, sp, outdeg, indeg, es, ed, pos, m, labels, codes, params, label_index, theta, u, buf):
    """Run ``u.shape[0]`` tie/no-tie proposals; ``u`` holds 3 uniforms per step.

    With probability 1/2 (always, if the graph is empty) a uniform dyad is
    toggled; otherwise a uniform existing edge is proposed for deletion.
    Proposal probabilities enter the acceptance ratio exactly.
    Returns ``(m, accepted)``.
    """
    n = adj.shape[0]
    n_dyads = n * (n - 1)
    accepted = 0
    for t in range(u.shape[0]):
        if m > 0 and u[t, 0] < 0.5:
            k = min(int(u[t, 1] * m), m - 1)
            i = es[k]
            j = ed[k]
        else:
            d = min(int(u[t, 1] * n_dyads), n_dyads - 1)
            i = d // (n - 1)
            jj = d % (n - 1)
            j = jj if jj < i else jj + 1
        change_stats(adj, sp, outdeg, indeg, labels, codes, params, label_index, i, j, buf)
        dot = 0.0
        for s in range(buf.shape[0]):
            dot += theta[s] * buf[s]
        if adj[i, j]:
            log_ratio = -dot + _log_q_add(m - 1, n_dyads) - _log_q_remove(m, n_dyads)
        else:
            log_ratio = dot + _log_q_remove(m + 1, n_dyads) - _log_q_add(m, n_dyads)
        if log_ratio >= 0.0 or u[t, 2] < math.exp(log_ratio):
            m = toggle(adj, sp, outdeg, indeg, es, ed, pos, m, i, j)
            accepted += 1
    return m, accepted
