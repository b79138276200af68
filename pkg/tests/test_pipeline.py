import hashlib
import json
import shutil
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from tradenet.errors import ConfigError
from tradenet.fixtures import bundled_fixture_paths, planted_region_fixture, write_fixture
from tradenet.graph import Partition, TradeGraph, read_edge_csv, read_partition_csv
from tradenet.pipeline import ARTIFACTS, MANIFEST, PARTIAL_MARKER, PipelineConfig, StageError, emit_graph_export, run_pipeline


@pytest.fixture
def fixture_dir(tmp_path):
    edges, part = bundled_fixture_paths()
    shutil.copy(edges, tmp_path / "edges.csv")
    shutil.copy(part, tmp_path / "partition.csv")
    return tmp_path


def config(base, out="out", **overrides):
    d = {"edges": "edges.csv", "partition": "partition.csv", "output_dir": out, "baseline": "R1", "seed": 3,
         "threads": 1, "ergm": {"samples": 20, "chains": 2}, "degree_null": {"samples": 20, "swaps_per_edge": 10}}
    d.update(overrides)
    return PipelineConfig.from_dict(d, base_dir=base)


def test_bundled_fixture_matches_generator(tmp_path):
    edges, part = bundled_fixture_paths()
    write_fixture(tmp_path, seed=7)
    assert (tmp_path / "edges.csv").read_bytes() == edges.read_bytes()
    assert (tmp_path / "partition.csv").read_bytes() == part.read_bytes()


def test_fixture_planted_densities():
    g, p = planted_region_fixture()
    assert g.n == 60 and len(p.labels) == 5
    same = sum(1 for u, v, _ in g.edges() if p[u] == p[v])
    cross = g.number_of_edges() - same
    assert abs(same / (5 * 12 * 11) - 0.3) < 0.05
    assert abs(cross / (60 * 59 - 5 * 12 * 11) - 0.02) < 0.01


def test_full_run_writes_manifest(fixture_dir):
    manifest = run_pipeline(config(fixture_dir))
    out = fixture_dir / "out"
    assert manifest["status"] == "ok"
    assert set(manifest["files"]) == set(ARTIFACTS)
    for key, entry in manifest["files"].items():
        path = out / entry["path"]
        assert path.name == ARTIFACTS[key]
        assert hashlib.sha256(path.read_bytes()).hexdigest() == entry["sha256"]
    on_disk = json.loads((out / MANIFEST).read_text())
    assert on_disk["files"] == manifest["files"]
    assert {"load", "backbone", "describe", "ei", "core", "brokerage", "ergm_fit", "ergm_null", "degree_null",
            "zscore"} <= set(on_disk["timings_seconds"])
    assert on_disk["seeds"]["master"] == 3
    assert on_disk["versions"]["tradenet"]
    assert not (out / PARTIAL_MARKER).exists()
    written = {p.name for p in out.iterdir()} - {MANIFEST}
    assert written == set(ARTIFACTS.values())


def test_rerun_is_byte_identical(fixture_dir):
    run_pipeline(config(fixture_dir, out="a"))
    run_pipeline(config(fixture_dir, out="b", threads=2))
    for name in ARTIFACTS.values():
        assert (fixture_dir / "a" / name).read_bytes() == (fixture_dir / "b" / name).read_bytes(), name


def test_ergm_disabled_still_runs_degree_null(fixture_dir):
    manifest = run_pipeline(config(fixture_dir, ergm={"enabled": False}))
    out = fixture_dir / "out"
    assert "ergm_fit" not in manifest["files"]
    assert not (out / "ergm_fit.json").exists()
    z = json.loads((out / "zscores.json").read_text())
    assert list(z) == ["degree"]
    assert {"z_plotdata", "country_roles", "zscores"} <= set(manifest["files"])


def test_alpha_out_of_range_fails_before_work(fixture_dir):
    with pytest.raises(ConfigError, match=r"\$\.alpha"):
        config(fixture_dir, alpha=1.5)
    assert not (fixture_dir / "out").exists()


def test_schema_errors_name_paths(fixture_dir):
    with pytest.raises(ConfigError, match=r"\$\.ergm\.samples"):
        config(fixture_dir, ergm={"samples": 0})
    with pytest.raises(ConfigError, match="bogus"):
        config(fixture_dir, bogus=1)
    with pytest.raises(ConfigError, match="ergm.terms"):
        config(fixture_dir, ergm={"terms": ["edges", "triangles"]})


def test_missing_input(tmp_path):
    cfg = config(tmp_path)
    with pytest.raises(FileNotFoundError):
        run_pipeline(cfg)


def test_failing_stage_leaves_partial_marker(fixture_dir):
    cfg = config(fixture_dir, ergm={"terms": ["edges", {"kind": "gwodegree", "decay": 0, "form": "literal"}]})
    with pytest.raises(StageError) as err:
        run_pipeline(cfg)
    assert err.value.stage == "ergm_fit" and err.value.exit_code == 2
    out = fixture_dir / "out"
    marker = json.loads((out / PARTIAL_MARKER).read_text())
    assert marker["status"] == "failed" and "ergm_fit" in marker["error"]
    assert "brokerage" in marker["files"]
    assert not (out / MANIFEST).exists()
    assert (out / "brokerage.csv").exists()


def test_from_file_resolves_relative_paths(fixture_dir):
    (fixture_dir / "cfg.json").write_text(json.dumps({"edges": "edges.csv", "partition": "partition.csv",
                                                      "output_dir": "res"}))
    cfg = PipelineConfig.from_file(fixture_dir / "cfg.json")
    assert cfg.edges == fixture_dir / "edges.csv" and cfg.output_dir == fixture_dir / "res"
    assert cfg.alpha == 0.05 and cfg.ergm.samples == 1000 and cfg.degree_null.swaps_per_edge == 100


def test_export_formats(tmp_path):
    g = TradeGraph(["A", "B"], [("A", "B", 2.5)])
    p = Partition({"A": "x", "B": "y"}, ("x", "y"), "x")
    path = emit_graph_export(g, p, tmp_path / "g.graphml")
    root = ET.parse(path).getroot()
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    assert len(root.findall(".//g:node", ns)) == 2
    edges = root.findall(".//g:edge", ns)
    assert len(edges) == 1 and edges[0].find("g:data", ns).text == "2.5"
    path = emit_graph_export(g, p, tmp_path / "g.csv", fmt="edge-csv")
    h = read_edge_csv(path)
    assert h == g
    assert read_partition_csv(tmp_path / "g.nodes.csv", h)["B"] == "y"
    with pytest.raises(ConfigError):
        emit_graph_export(g, p, tmp_path / "g.x", fmt="gexf")
    with pytest.raises(OSError):
        emit_graph_export(g, p, tmp_path / "missing" / "g.graphml")


def test_fixture_export_node_count(tmp_path):
    g, p = planted_region_fixture()
    root = ET.parse(emit_graph_export(g, p, tmp_path / "f.graphml")).getroot()
    assert len(root.findall(".//{http://graphml.graphdrawing.org/xmlns}node")) == g.n == 60


def test_graphml_flag(fixture_dir):
    manifest = run_pipeline(config(fixture_dir, export_graphml=True, ergm={"enabled": False},
                                   degree_null={"samples": 5}))
    assert manifest["files"]["graphml"]["path"] == "backbone.graphml"
