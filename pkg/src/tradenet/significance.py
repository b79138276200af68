"""Z-scores of brokerage role totals against null ensembles."""
from __future__ import annotations

import csv
import json
import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .brokerage import ROLES, BrokerageCensus, role_counts_dense
from .errors import ConfigError, DataError
from .graph import Partition, TradeGraph

MOTIF, ANTI_MOTIF, NOT_SIGNIFICANT, DEGENERATE = "motif", "anti_motif", "not_significant", "degenerate"
NULL_KINDS = ("ergm", "degree")
STD_METHOD = "sample standard deviation (n - 1 denominator)"


def z_score(f_real: float, null_counts: Sequence[float]) -> float | None:
    """``(f_real - mean) / std`` with the n-1 standard deviation; ``None`` if std is 0."""
    counts = np.asarray(null_counts, dtype=np.float64)
    if counts.ndim != 1 or counts.size < 2:
        raise ConfigError(f"z_score needs at least 2 null counts, got {counts.size}")
    std = float(np.std(counts, ddof=1))
    if std == 0.0:
        return None
    return (float(f_real) - float(np.mean(counts))) / std


def classify(z: float | None, threshold: float = 2.0) -> str:
    if z is None or (isinstance(z, float) and math.isnan(z)):
        return DEGENERATE
    if z < -threshold:
        return ANTI_MOTIF
    if z > threshold:
        return MOTIF
    return NOT_SIGNIFICANT


@dataclass(frozen=True)
class RoleZ:
    f_real: int
    null_mean: float
    null_std: float
    z: float | None
    classification: str


@dataclass(frozen=True)
class ZScoreReport:
    per_role: dict  # role -> RoleZ
    ensemble_size: int
    null_kind: str
    threshold: float
    nodes: tuple[str, ...]
    observed_counts: np.ndarray  # (n, 5)
    null_mean_counts: np.ndarray  # (n, 5), per-country ensemble means
    null_totals: np.ndarray  # (ensemble_size, 5)

    def to_dict(self) -> dict:
        return {
            "null_kind": self.null_kind,
            "ensemble_size": self.ensemble_size,
            "threshold": self.threshold,
            "std_method": STD_METHOD,
            "roles": {
                r: {
                    "f_real": rz.f_real,
                    "null_mean": rz.null_mean,
                    "null_std": rz.null_std,
                    "z": rz.z,
                    "classification": rz.classification,
                }
                for r, rz in self.per_role.items()
            },
        }


def ensemble_role_counts(ensemble, nodes: Sequence[str], partition: Partition):
    """Per-member node-by-role counts for graphs or ``(src, dst)`` index arrays over ``nodes``."""
    codes = partition.codes(nodes)
    n = len(nodes)
    g = len(partition.labels)
    for member in ensemble:
        if isinstance(member, TradeGraph):
            if member.nodes != tuple(nodes):
                if set(member.nodes) != set(nodes):
                    raise DataError("ensemble member node set differs from the observed graph")
                member = TradeGraph(nodes, member.edges())
            adj = member.adjacency()
        else:
            src, dst = member
            adj = np.zeros((n, n), dtype=np.int64)
            adj[src, dst] = 1
        yield role_counts_dense(adj, codes, g)


def role_significance_profile(observed: BrokerageCensus, ensemble, partition: Partition, null_kind: str,
                              threshold: float = 2.0) -> ZScoreReport:
    """Compare observed role totals with their distribution over ``ensemble``."""
    if null_kind not in NULL_KINDS:
        raise ConfigError(f"null_kind must be one of {NULL_KINDS}, got {null_kind!r}")
    nodes = observed.nodes
    totals = []
    count_sum = np.zeros((len(nodes), len(ROLES)), dtype=np.float64)
    for counts in ensemble_role_counts(ensemble, nodes, partition):
        totals.append(counts.sum(axis=0))
        count_sum += counts
    if len(totals) < 2:
        raise ConfigError(f"ensemble must contain at least 2 graphs, got {len(totals)}")
    totals = np.array(totals, dtype=np.int64)
    obs = observed.counts.sum(axis=0)
    per_role = {}
    for k, role in enumerate(ROLES):
        col = totals[:, k]
        z = z_score(obs[k], col)
        per_role[role] = RoleZ(
            f_real=int(obs[k]),
            null_mean=float(np.mean(col)),
            null_std=float(np.std(col, ddof=1)),
            z=z,
            classification=classify(z, threshold),
        )
    return ZScoreReport(
        per_role=per_role,
        ensemble_size=len(totals),
        null_kind=null_kind,
        threshold=float(threshold),
        nodes=tuple(nodes),
        observed_counts=observed.counts.copy(),
        null_mean_counts=count_sum / len(totals),
        null_totals=totals,
    )


def write_report_json(report: ZScoreReport, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    return path


PLOTDATA_COLUMNS = ["role", "null_kind", "f_real", "null_mean", "null_std", "z"]


def write_plotdata_csv(reports: Sequence[ZScoreReport], path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(PLOTDATA_COLUMNS)
        for rep in reports:
            for role, rz in rep.per_role.items():
                out.writerow([role, rep.null_kind, rz.f_real, repr(rz.null_mean), repr(rz.null_std),
                              "" if rz.z is None else repr(rz.z)])
    return path


def write_country_csv(reports: Sequence[ZScoreReport], partition: Partition, path) -> Path:
    """Per-country observed role counts next to each null's ensemble mean."""
    path = Path(path)
    nodes = reports[0].nodes
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["node", "region", "role", "observed", *(f"{r.null_kind}_null_mean" for r in reports)])
        for i, v in enumerate(nodes):
            for k, role in enumerate(ROLES):
                out.writerow([v, partition[v], int(reports[0].observed_counts[i, k]),
                              *(repr(float(r.null_mean_counts[i, k])) for r in reports)])
    return path
