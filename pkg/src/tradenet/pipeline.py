"""End-to-end analysis run driven by a JSON configuration file."""
from __future__ import annotations

import hashlib
import json
import logging
import platform
import time
import warnings
import xml.etree.ElementTree as ET
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

import jsonschema

from . import __version__
from . import backbone as bb
from .brokerage import brokerage_census, write_census_csv
from .coreperiphery import rich_core, write_core_csv
from .descriptives import describe, dyad_census, ei_index, write_ei_csv
from .errors import ConfigError, TradenetError
from .ergm import ModelSpec, TermSpec, default_terms, fit_mple, run_chains, write_fit_json
from .graph import Partition, TradeGraph, read_edge_csv, read_partition_csv, write_edge_csv, write_partition_csv
from .nullmodels import RewireConfig, degree_preserving_arrays
from .significance import role_significance_profile, write_country_csv, write_plotdata_csv
from .streams import MAX_SEED, default_threads

log = logging.getLogger(__name__)

_TERM_SCHEMA = {
    "anyOf": [
        {"type": "string"},
        {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"type": "string"},
                "decay": {"type": ["number", "null"], "minimum": 0},
                "form": {"enum": ["standard", "literal"]},
            },
        },
    ]
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["edges", "partition", "output_dir"],
    "additionalProperties": False,
    "properties": {
        "edges": {"type": "string", "minLength": 1},
        "partition": {"type": "string", "minLength": 1},
        "baseline": {"type": ["string", "null"]},
        "output_dir": {"type": "string", "minLength": 1},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "seed": {"type": "integer", "minimum": 0, "maximum": MAX_SEED},
        "threads": {"type": ["integer", "null"], "minimum": 1},
        "strength_direction": {"enum": ["in", "out", "total"]},
        "z_threshold": {"type": "number", "exclusiveMinimum": 0},
        "export_graphml": {"type": "boolean"},
        "ergm": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "enabled": {"type": "boolean"},
                "terms": {"type": "array", "minItems": 1, "items": _TERM_SCHEMA},
                "samples": {"type": "integer", "minimum": 2},
                "burnin": {"type": ["integer", "null"], "minimum": 0},
                "interval": {"type": ["integer", "null"], "minimum": 1},
                "chains": {"type": "integer", "minimum": 1},
            },
        },
        "degree_null": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "enabled": {"type": "boolean"},
                "samples": {"type": "integer", "minimum": 2},
                "swaps_per_edge": {"type": "integer", "minimum": 1},
            },
        },
    },
}


@dataclass
class ErgmStageConfig:
    enabled: bool = True
    terms: list = field(default_factory=lambda: [t.to_dict() for t in default_terms()])
    samples: int = 1000
    burnin: int | None = None
    interval: int | None = None
    chains: int = 4


@dataclass
class DegreeNullConfig:
    enabled: bool = True
    samples: int = 1000
    swaps_per_edge: int = 100


@dataclass
class PipelineConfig:
    edges: Path
    partition: Path
    output_dir: Path
    baseline: str | None = None
    alpha: float = 0.05
    seed: int = 0
    threads: int | None = None
    strength_direction: str = "total"
    z_threshold: float = 2.0
    export_graphml: bool = False
    ergm: ErgmStageConfig = field(default_factory=ErgmStageConfig)
    degree_null: DegreeNullConfig = field(default_factory=DegreeNullConfig)

    @classmethod
    def from_dict(cls, d: dict, base_dir=None) -> "PipelineConfig":
        validate_config(d)
        base = Path(base_dir) if base_dir is not None else Path.cwd()
        d = dict(d)
        for key in ("edges", "partition", "output_dir"):
            p = Path(d[key])
            d[key] = p if p.is_absolute() else base / p
        d["ergm"] = ErgmStageConfig(**d.get("ergm", {}))
        d["degree_null"] = DegreeNullConfig(**d.get("degree_null", {}))
        cfg = cls(**d)
        try:
            cfg.term_specs()
        except TradenetError as exc:
            raise ConfigError(f"$.ergm.terms: {exc}") from None
        return cfg

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        path = Path(path)
        try:
            d = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        return cls.from_dict(d, base_dir=path.parent)

    def term_specs(self) -> list[TermSpec]:
        return [TermSpec.from_dict(t) for t in self.ergm.terms]

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("edges", "partition", "output_dir"):
            d[key] = str(d[key])
        return d


def validate_config(d) -> None:
    """Schema-check a raw config mapping; errors name the offending JSON path."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(d), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"{e.json_path}: {e.message}" for e in errors]
        raise ConfigError("invalid pipeline config:\n  " + "\n  ".join(lines))


class StageError(TradenetError):
    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 5 if isinstance(cause, OSError) else 1)
        super().__init__(f"stage {stage!r} failed: {type(cause).__name__}: {cause}")


ARTIFACTS = {
    "backbone": "backbone.csv",
    "backbone_scores": "backbone_scores.csv",
    "descriptives": "descriptives.json",
    "ei": "ei.csv",
    "core": "core.csv",
    "brokerage": "brokerage.csv",
    "ergm_fit": "ergm_fit.json",
    "zscores": "zscores.json",
    "z_plotdata": "z_plotdata.csv",
    "country_roles": "country_roles.csv",
}
MANIFEST = "manifest.json"
PARTIAL_MARKER = ".partial"


def _write_json(obj, path: Path) -> Path:
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
    return path


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _versions() -> dict:
    out = {"python": platform.python_version(), "tradenet": __version__}
    for pkg in ("numpy", "scipy", "numba", "jsonschema"):
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            out[pkg] = None
    return out


def emit_graph_export(graph: TradeGraph, partition: Partition, path, fmt: str = "graphml") -> Path:
    """Export nodes (with region) and weighted edges as GraphML or edge CSV.

    The edge-CSV form writes the edge list to ``path`` and the node regions
    to a sibling ``<stem>.nodes.csv``.
    """
    path = Path(path)
    if fmt == "edge-csv":
        write_edge_csv(graph, path)
        write_partition_csv(partition.restrict(graph), path.with_name(path.stem + ".nodes.csv"))
        return path
    if fmt != "graphml":
        raise ConfigError(f"unknown export format {fmt!r}; expected 'graphml' or 'edge-csv'")
    ns = "http://graphml.graphdrawing.org/xmlns"
    ET.register_namespace("", ns)
    root = ET.Element(f"{{{ns}}}graphml")
    ET.SubElement(root, f"{{{ns}}}key", id="region", attrib={"for": "node", "attr.name": "region", "attr.type": "string"})
    ET.SubElement(root, f"{{{ns}}}key", id="weight", attrib={"for": "edge", "attr.name": "weight", "attr.type": "double"})
    g = ET.SubElement(root, f"{{{ns}}}graph", id="G", edgedefault="directed")
    for v in graph.nodes:
        node = ET.SubElement(g, f"{{{ns}}}node", id=v)
        ET.SubElement(node, f"{{{ns}}}data", key="region").text = partition[v]
    for u, v, w in graph.edges():
        edge = ET.SubElement(g, f"{{{ns}}}edge", source=u, target=v)
        ET.SubElement(edge, f"{{{ns}}}data", key="weight").text = repr(w)
    ET.indent(root)
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)
    return path


class _Run:
    """Bookkeeping for one pipeline execution: stages, timings, files, warnings."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.out = Path(config.output_dir)
        self.files: dict[str, Path] = {}
        self.timings: dict[str, float] = {}
        self.warnings: list[dict] = []
        self.info: dict = {}

    @contextmanager
    def stage(self, name: str):
        log.info("stage %s", name)
        t0 = time.perf_counter()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                yield
            except Exception as exc:
                self._record_warnings(name, caught)
                raise StageError(name, exc) from exc
            finally:
                self.timings[name] = round(self.timings.get(name, 0.0) + time.perf_counter() - t0, 6)
        self._record_warnings(name, caught)

    def _record_warnings(self, stage, caught):
        for w in caught:
            self.warnings.append({"stage": stage, "category": w.category.__name__, "message": str(w.message)})
            log.warning("%s: %s", stage, w.message)

    def add(self, key: str, path: Path):
        self.files[key] = path

    def manifest(self, status: str, error: str | None = None) -> dict:
        cfg = self.config
        return {
            "status": status,
            "error": error,
            "config": cfg.to_dict(),
            "seeds": {
                "master": cfg.seed,
                "derivation": "SeedSequence(master, spawn_key=(crc32(stage), index))",
                "streams": {"ergm_chain": "index = chain", "degree_null": "index = sample"},
            },
            "versions": _versions(),
            "timings_seconds": self.timings,
            "warnings": self.warnings,
            "info": self.info,
            "files": {
                key: {"path": path.name, "sha256": _sha256(path)} for key, path in self.files.items()
            },
        }


def run_pipeline(config: PipelineConfig) -> dict:
    """Run every enabled stage in order and write artifacts plus ``manifest.json``.

    On failure the files written so far are kept, a ``.partial`` marker
    describing the failed stage is written, and ``StageError`` is raised.
    """
    if not (0 < config.alpha < 1):
        raise ConfigError(f"alpha must lie in (0, 1), got {config.alpha!r}")
    for key in ("edges", "partition"):
        p = Path(getattr(config, key))
        if not p.is_file():
            raise FileNotFoundError(f"{key} file not found: {p}")
    run = _Run(config)
    run.out.mkdir(parents=True, exist_ok=True)
    marker = run.out / PARTIAL_MARKER
    marker.unlink(missing_ok=True)
    (run.out / MANIFEST).unlink(missing_ok=True)
    try:
        _execute(run)
    except StageError as exc:
        _write_json(run.manifest("failed", str(exc)), marker)
        raise
    manifest = run.manifest("ok")
    _write_json(manifest, run.out / MANIFEST)
    return manifest


def _execute(run: _Run) -> None:
    cfg = run.config
    out = run.out
    threads = cfg.threads or default_threads()
    run.info["threads"] = threads

    with run.stage("load"):
        graph = read_edge_csv(cfg.edges)
        partition = read_partition_csv(cfg.partition, graph, cfg.baseline)
        run.info["input"] = {"nodes": graph.n, "edges": graph.number_of_edges()}

    with run.stage("backbone"):
        result = bb.disparity_filter(graph, cfg.alpha)
        backbone = result.backbone
        run.add("backbone", write_edge_csv(backbone, out / ARTIFACTS["backbone"]))
        run.add("backbone_scores", bb.write_scores_csv(graph, result, out / ARTIFACTS["backbone_scores"]))
        run.info["backbone"] = {
            "alpha": cfg.alpha,
            "nodes": backbone.n,
            "edges": backbone.number_of_edges(),
            "removed_nodes": list(result.removed_nodes),
        }
        part = partition.restrict(backbone, drop_empty_labels=True)
        run.info["backbone"]["dropped_labels"] = [g for g in partition.labels if g not in part.labels]

    with run.stage("describe"):
        report = describe(backbone, part)
        run.add("descriptives", _write_json(report.to_dict(), out / ARTIFACTS["descriptives"]))
        run.info["dyad_census"] = dyad_census(backbone)

    with run.stage("ei"):
        ei = ei_index(backbone, part)
        run.add("ei", write_ei_csv(backbone, part, ei, out / ARTIFACTS["ei"]))
        run.info["ei_global"] = ei.global_score

    with run.stage("core"):
        core = rich_core(backbone, cfg.strength_direction)
        run.add("core", write_core_csv(core, out / ARTIFACTS["core"]))
        run.info["core"] = {"r_star": core.r_star, "size": len(core.core), "strength": cfg.strength_direction}

    with run.stage("brokerage"):
        census = brokerage_census(backbone, part)
        run.add("brokerage", write_census_csv(backbone, part, out / ARTIFACTS["brokerage"]))

    reports = []
    binary = backbone.with_unit_weights()
    if cfg.ergm.enabled:
        with run.stage("ergm_fit"):
            model = ModelSpec(cfg.term_specs(), backbone.nodes, part)
            fit = fit_mple(binary, model)
            run.add("ergm_fit", write_fit_json(fit, model, binary, out / ARTIFACTS["ergm_fit"]))
        with run.stage("ergm_null"):
            sim = run_chains(model, fit.coefficients, cfg.ergm.samples, burnin=cfg.ergm.burnin,
                             interval=cfg.ergm.interval, seed=cfg.seed, initial=binary, chains=cfg.ergm.chains,
                             threads=threads)
            run.info["ergm_simulation"] = sim.metadata()
            reports.append(role_significance_profile(census, sim.samples, part, "ergm", cfg.z_threshold))
    if cfg.degree_null.enabled:
        with run.stage("degree_null"):
            rcfg = RewireConfig(cfg.degree_null.swaps_per_edge, cfg.seed, cfg.degree_null.samples)
            samples = degree_preserving_arrays(binary, rcfg, threads)
            run.info["degree_null"] = {"samples": rcfg.samples, "swaps_per_edge": rcfg.swaps_per_edge}
            reports.append(role_significance_profile(census, samples, part, "degree", cfg.z_threshold))
    if reports:
        with run.stage("zscore"):
            zs = {r.null_kind: r.to_dict() for r in reports}
            run.add("zscores", _write_json(zs, out / ARTIFACTS["zscores"]))
            run.add("z_plotdata", write_plotdata_csv(reports, out / ARTIFACTS["z_plotdata"]))
            run.add("country_roles", write_country_csv(reports, part, out / ARTIFACTS["country_roles"]))
    if cfg.export_graphml:
        with run.stage("export"):
            run.add("graphml", emit_graph_export(backbone, part, out / "backbone.graphml"))
