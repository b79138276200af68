import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tradenet.graph import Partition, TradeGraph  # noqa: E402


def random_digraph(rng, n, p, weighted=False, integer_weights=False, prefix="v"):
    nodes = [f"{prefix}{k}" for k in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < p:
                if integer_weights:
                    w = float(rng.integers(1, 20))
                elif weighted:
                    w = float(rng.lognormal(0.0, 1.0))
                else:
                    w = 1.0
                edges.append((nodes[i], nodes[j], w))
    return TradeGraph(nodes, edges)


def random_partition(rng, graph, n_groups):
    labels = [f"g{k}" for k in range(n_groups)]
    assignment = {v: labels[int(rng.integers(n_groups))] for v in graph.nodes}
    return Partition(assignment, labels, labels[0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def graph_from_pairs(pairs, nodes=None, weight=1.0):
    pairs = list(pairs)
    if nodes is None:
        nodes = list(dict.fromkeys(v for e in pairs for v in e[:2]))
    return TradeGraph(nodes, [(e[0], e[1], e[2] if len(e) > 2 else weight) for e in pairs])


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
