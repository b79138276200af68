"""Model terms and their expansion into statistics."""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import ModelError
from ..graph import Partition, TradeGraph

KINDS = ("edges", "mutual", "gwodegree", "gwidegree", "gwesp", "gwdsp", "sender_factor", "receiver_factor")
GW_KINDS = frozenset({"gwodegree", "gwidegree", "gwesp", "gwdsp"})
FACTOR_KINDS = frozenset({"sender_factor", "receiver_factor"})
FORMS = ("standard", "literal")
DEFAULT_DECAY = 0.5

# Integer codes understood by the numba kernels.
EDGES, MUTUAL, GWOD, GWID, GWESP, GWDSP, SENDER, RECEIVER = range(8)
LIT_OD, LIT_ID, LIT_ESP, LIT_DSP = range(8, 12)

_STANDARD_CODE = {
    "edges": EDGES, "mutual": MUTUAL, "gwodegree": GWOD, "gwidegree": GWID,
    "gwesp": GWESP, "gwdsp": GWDSP, "sender_factor": SENDER, "receiver_factor": RECEIVER,
}
_LITERAL_CODE = {"gwodegree": LIT_OD, "gwidegree": LIT_ID, "gwesp": LIT_ESP, "gwdsp": LIT_DSP}


@dataclass(frozen=True)
class TermSpec:
    """One model term.

    ``decay`` applies to the four geometrically weighted kinds only (default
    0.5). ``form="literal"`` swaps them for simplified variants: the sum of
    ``exp(-decay * degree)`` over nodes for the degree terms, the number of
    transitive triples for ``gwesp`` and the number of ordered out-two-stars
    for ``gwdsp``.
    """

    kind: str
    decay: float | None = None
    form: str = "standard"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelError(f"unknown term kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in GW_KINDS:
            decay = DEFAULT_DECAY if self.decay is None else self.decay
            if isinstance(decay, bool) or not isinstance(decay, (int, float)) or not math.isfinite(decay) or decay < 0:
                raise ModelError(f"{self.kind}: decay must be a finite non-negative number, got {decay!r}")
            object.__setattr__(self, "decay", float(decay))
        elif self.decay is not None:
            raise ModelError(f"{self.kind} takes no decay parameter")
        if self.form not in FORMS:
            raise ModelError(f"{self.kind}: form must be one of {FORMS}, got {self.form!r}")
        if self.form == "literal" and self.kind not in GW_KINDS:
            raise ModelError(f"{self.kind} has no literal form")

    @classmethod
    def from_dict(cls, d) -> "TermSpec":
        if isinstance(d, str):
            return cls(d)
        unknown = set(d) - {"kind", "decay", "form"}
        if unknown:
            raise ModelError(f"unknown term field(s) {sorted(unknown)}")
        if "kind" not in d:
            raise ModelError(f"term {d!r} has no 'kind'")
        return cls(d["kind"], d.get("decay"), d.get("form", "standard"))

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.decay is not None:
            d["decay"] = self.decay
        if self.form != "standard":
            d["form"] = self.form
        return d


def default_terms(decay: float = DEFAULT_DECAY) -> list[TermSpec]:
    """All eight term kinds with a common decay."""
    return [TermSpec(k, decay if k in GW_KINDS else None) for k in KINDS]


class ModelSpec:
    """An ordered term list bound to a node set (and partition, for factor terms)."""

    def __init__(self, terms: Sequence[TermSpec], nodes: Sequence[str], partition: Partition | None = None):
        terms = [t if isinstance(t, TermSpec) else TermSpec.from_dict(t) for t in terms]
        if not terms:
            raise ModelError("model needs at least one term")
        kinds = [t.kind for t in terms]
        dup = sorted({k for k in kinds if kinds.count(k) > 1})
        if dup:
            raise ModelError(f"duplicate term kind(s): {dup}")
        self.terms = tuple(terms)
        self.nodes = tuple(nodes)
        needs_partition = any(t.kind in FACTOR_KINDS for t in terms)
        if needs_partition:
            if partition is None:
                raise ModelError("factor terms need a partition")
            missing = [v for v in self.nodes if v not in partition]
            if missing:
                raise ModelError(f"partition does not cover node(s): {missing[:20]}")
        self.partition = partition
        if partition is not None and all(v in partition for v in self.nodes):
            self.labels = partition.codes(self.nodes)
        else:
            self.labels = np.zeros(len(self.nodes), dtype=np.int64)

        names, codes, params, label_idx = [], [], [], []
        for t in terms:
            if t.kind in FACTOR_KINDS:
                prefix = "sender" if t.kind == "sender_factor" else "receiver"
                for g in partition.non_baseline():
                    names.append(f"{prefix}.{g}")
                    codes.append(_STANDARD_CODE[t.kind])
                    params.append(0.0)
                    label_idx.append(partition.labels.index(g))
                continue
            name = t.kind if t.form == "standard" else f"{t.kind}.literal"
            names.append(name)
            codes.append(_STANDARD_CODE[t.kind] if t.form == "standard" else _LITERAL_CODE[t.kind])
            params.append(t.decay if t.decay is not None else 0.0)
            label_idx.append(-1)
        self.names = tuple(names)
        self.codes = np.array(codes, dtype=np.int64)
        self.params = np.array(params, dtype=np.float64)
        self.label_index = np.array(label_idx, dtype=np.int64)

    @classmethod
    def for_graph(cls, terms, graph: TradeGraph, partition: Partition | None = None) -> "ModelSpec":
        return cls(terms, graph.nodes, partition)

    @property
    def n_stats(self) -> int:
        return len(self.names)

    def check_graph(self, graph: TradeGraph) -> None:
        if graph.nodes != self.nodes:
            raise ModelError("graph node set/order does not match the model binding")

    def __repr__(self) -> str:
        return f"ModelSpec({', '.join(self.names)})"
