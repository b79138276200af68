"""JSON persistence of fitted models."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import DataError
from ..graph import Partition, TradeGraph
from .mple import ErgmFit
from .terms import ModelSpec, TermSpec

FORMAT = "tradenet.ergm_fit/1"


def fit_to_dict(fit: ErgmFit, model: ModelSpec, graph: TradeGraph) -> dict:
    part = model.partition
    return {
        "format": FORMAT,
        "terms": [t.to_dict() for t in model.terms],
        "statistics": [
            {"name": name, "coefficient": coef, "std_error": se} for name, coef, se in fit.table()
        ],
        "pseudo_loglik": fit.pseudo_loglik,
        "aic": fit.aic,
        "converged": fit.converged,
        "iterations": fit.iterations,
        "n_dyads": fit.n_dyads,
        "se_method": fit.se_method,
        "graph": {"nodes": list(graph.nodes), "edges": [[u, v] for u, v, _ in graph.edges()]},
        "partition": None if part is None else {
            "baseline": part.baseline,
            "labels": list(part.labels),
            "assignment": {v: part[v] for v in graph.nodes},
        },
    }


def write_fit_json(fit: ErgmFit, model: ModelSpec, graph: TradeGraph, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(fit_to_dict(fit, model, graph), indent=2) + "\n", encoding="utf-8")
    return path


def read_fit_json(path) -> tuple[ModelSpec, ErgmFit, TradeGraph]:
    """Rebuild the model, fit and observed (binary) graph from a fit file."""
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from None
    if d.get("format") != FORMAT:
        raise DataError(f"{path}: not a fit file (format {d.get('format')!r})")
    g = d["graph"]
    graph = TradeGraph(g["nodes"], ((u, v, 1.0) for u, v in g["edges"]))
    part = None
    if d.get("partition"):
        p = d["partition"]
        part = Partition(p["assignment"], p["labels"], p["baseline"])
    model = ModelSpec([TermSpec.from_dict(t) for t in d["terms"]], graph.nodes, part)
    stats = d["statistics"]
    names = tuple(s["name"] for s in stats)
    if names != model.names:
        raise DataError(f"{path}: statistic names {names} do not match terms {model.names}")
    fit = ErgmFit(
        names=names,
        coefficients=np.array([s["coefficient"] for s in stats], dtype=float),
        standard_errors=np.array([s["std_error"] for s in stats], dtype=float),
        pseudo_loglik=d["pseudo_loglik"],
        aic=d["aic"],
        converged=d["converged"],
        iterations=d["iterations"],
        n_dyads=d["n_dyads"],
        se_method=d.get("se_method", ""),
    )
    return model, fit, graph


def read_terms_json(path) -> list[TermSpec]:
    """Terms file: a JSON list of kinds or ``{"kind", "decay", "form"}`` objects."""
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from None
    if isinstance(d, dict):
        d = d.get("terms")
    if not isinstance(d, list):
        raise DataError(f"{path}: expected a list of terms")
    return [TermSpec.from_dict(t) for t in d]
