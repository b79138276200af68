"""Synthetic planted-region trade network used by tests and the demo pipeline."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .graph import Partition, TradeGraph, load_edge_list, load_partition, write_edge_csv, write_partition_csv


def planted_region_records(n_nodes: int = 60, n_regions: int = 5, p_in: float = 0.3, p_out: float = 0.02,
                           seed: int = 7, size_sigma: float = 1.5, intra_boost: float = 5.0,
                           noise_sigma: float = 1.0):
    """Edge and partition records of a planted-partition digraph with gravity-like weights.

    Node ``k`` belongs to region ``k % n_regions``. Each ordered pair is an
    edge with probability ``p_in`` inside a region and ``p_out`` across
    regions. Weights are ``size_i * size_j * noise`` with lognormal sizes,
    multiplied by ``intra_boost`` inside a region, so the strongest flows of
    most nodes stay regional.
    """
    rng = np.random.default_rng(seed)
    nodes = [f"C{k:02d}" for k in range(n_nodes)]
    regions = [f"R{k % n_regions + 1}" for k in range(n_nodes)]
    size = rng.lognormal(0.0, size_sigma, n_nodes)
    edges = []
    for i in range(n_nodes):
        for j in range(n_nodes):
            if i == j:
                continue
            same = regions[i] == regions[j]
            if rng.random() < (p_in if same else p_out):
                w = size[i] * size[j] * (intra_boost if same else 1.0) * rng.lognormal(0.0, noise_sigma)
                edges.append((nodes[i], nodes[j], float(w)))
    return edges, list(zip(nodes, regions))


def planted_region_fixture(**kwargs) -> tuple[TradeGraph, Partition]:
    edges, part = planted_region_records(**kwargs)
    graph = load_edge_list(edges)
    return graph, load_partition(part, graph, baseline="R1")


def write_fixture(out_dir, **kwargs) -> tuple[Path, Path]:
    """Write ``edges.csv`` and ``partition.csv`` for the planted fixture."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, part = planted_region_fixture(**kwargs)
    return write_edge_csv(graph, out_dir / "edges.csv"), write_partition_csv(part, out_dir / "partition.csv")


def bundled_fixture_paths() -> tuple[Path, Path]:
    """Paths of the shipped seed-7 fixture (``edges``, ``partition``)."""
    root = resources.files("tradenet") / "data"
    return Path(str(root / "planted_edges.csv")), Path(str(root / "planted_partition.csv"))
