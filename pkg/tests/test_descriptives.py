import math

import numpy as np
import pytest
from conftest import graph_from_pairs, random_digraph, random_partition
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import descriptives_oracle

from tradenet.descriptives import (
    categorical_assortativity,
    degree_centralisation,
    density,
    describe,
    dyad_census,
    ei_index,
    mixing_matrix,
    reciprocity,
    write_ei_csv,
)
from tradenet.errors import UndefinedStatisticError
from tradenet.graph import Partition, TradeGraph


def part(mapping, baseline=None):
    labels = tuple(dict.fromkeys(mapping.values()))
    return Partition(dict(mapping), labels, baseline or labels[0])


def complete(n):
    nodes = [str(k) for k in range(n)]
    return TradeGraph(nodes, [(u, v, 1.0) for u in nodes for v in nodes if u != v])


def test_density_examples():
    assert math.isclose(density(graph_from_pairs([("A", "B"), ("B", "C")])), 1 / 3, rel_tol=1e-15)
    assert density(complete(3)) == 1.0
    with pytest.raises(UndefinedStatisticError):
        density(TradeGraph(["A"]))


def test_reciprocity_examples():
    assert math.isclose(reciprocity(graph_from_pairs([("A", "B"), ("B", "A"), ("B", "C")])), 2 / 3, rel_tol=1e-15)
    tournament = graph_from_pairs([("A", "B"), ("B", "C"), ("A", "C")])
    assert reciprocity(tournament) == 0.0
    assert reciprocity(complete(4)) == 1.0
    with pytest.raises(UndefinedStatisticError):
        reciprocity(TradeGraph(["A", "B"]))


def test_centralisation_examples():
    in_star = graph_from_pairs([("A", "H"), ("B", "H"), ("C", "H")])
    assert degree_centralisation(in_star, "in") == 1.0
    cycle = graph_from_pairs([("A", "B"), ("B", "C"), ("C", "A")])
    assert degree_centralisation(cycle, "in") == 0.0
    assert degree_centralisation(cycle, "out") == 0.0
    assert degree_centralisation(graph_from_pairs([("A", "B"), ("A", "C")]), "out") == 1.0
    with pytest.raises(UndefinedStatisticError):
        degree_centralisation(TradeGraph(["A"]), "in")


def test_assortativity_examples():
    g = graph_from_pairs([("A", "B"), ("B", "A"), ("C", "D"), ("D", "C")])
    assert categorical_assortativity(g, part({"A": "x", "B": "x", "C": "y", "D": "y"})) == 1.0
    cross = graph_from_pairs([("A", "C"), ("D", "B"), ("B", "C"), ("C", "A")])
    assert categorical_assortativity(cross, part({"A": "x", "B": "x", "C": "y", "D": "y"})) == -1.0
    with pytest.raises(UndefinedStatisticError):
        categorical_assortativity(g, part({"A": "x", "B": "x", "C": "x", "D": "x"}))


def test_mixing_matrix_sums_to_one(rng):
    g = random_digraph(rng, 20, 0.2)
    e, labels = mixing_matrix(g, random_partition(rng, g, 4))
    assert len(labels) == 4
    assert math.isclose(e.sum(), 1.0, rel_tol=1e-12)


def test_ei_examples():
    # hub H: 3 external, 1 internal
    g = graph_from_pairs([("H", "X1"), ("X2", "H"), ("H", "X3"), ("H", "I")])
    p = part({"H": "a", "I": "a", "X1": "b", "X2": "b", "X3": "b"})
    ei = ei_index(g, p)
    assert ei.per_node["H"] == 0.5
    assert ei.per_node["I"] == -1.0
    assert ei.per_node["X1"] == 1.0
    assert ei.global_score == 0.5
    g2 = graph_from_pairs([("H", "X1"), ("X2", "H"), ("H", "I1"), ("I2", "H")])
    p2 = part({"H": "a", "I1": "a", "I2": "a", "X1": "b", "X2": "b"})
    assert ei_index(g2, p2).per_node["H"] == 0.0


def test_ei_isolate_undefined_and_reciprocated_counts_twice():
    g = TradeGraph(["A", "B", "Z"], [("A", "B", 1.0), ("B", "A", 1.0)])
    ei = ei_index(g, part({"A": "x", "B": "y", "Z": "x"}))
    assert ei.per_node["Z"] is None and not ei.is_defined("Z")
    assert ei.external["A"] == 2 and ei.internal["A"] == 0


def test_ei_sign_flip_when_internal_and_external_swap():
    # two groups; moving B across the partition turns each of A's ties from internal to external
    g = graph_from_pairs([("A", "B"), ("B", "A"), ("A", "C"), ("D", "A"), ("A", "E")])
    p1 = part({"A": "x", "B": "x", "C": "y", "D": "y", "E": "y"})
    p2 = part({"A": "x", "B": "y", "C": "x", "D": "x", "E": "x"})
    s1, s2 = ei_index(g, p1), ei_index(g, p2)
    assert s1.per_node["A"] == -s2.per_node["A"] != 0


def test_dyad_census():
    g = graph_from_pairs([("A", "B"), ("B", "A"), ("B", "C")], nodes=["A", "B", "C", "D"])
    assert dyad_census(g) == {"mutual": 1, "asymmetric": 1, "null": 4}


def test_describe_has_six_fields(rng):
    g = random_digraph(rng, 12, 0.3)
    d = describe(g, random_partition(rng, g, 3)).to_dict()
    assert list(d) == ["size", "density", "reciprocity", "in_centralisation", "out_centralisation",
                       "regional_assortativity"]
    assert d["size"] == 12


@pytest.mark.parametrize("seed", range(25))
def test_matches_oracle(seed):
    rng = np.random.default_rng(1000 + seed)
    g = random_digraph(rng, int(rng.integers(4, 31)), float(rng.uniform(0.1, 0.5)))
    p = random_partition(rng, g, int(rng.integers(2, 5)))
    if g.number_of_edges() == 0:
        pytest.skip("empty draw")
    ref = descriptives_oracle(g, p)
    assert abs(density(g) - ref["density"]) <= 1e-12
    assert abs(reciprocity(g) - ref["reciprocity"]) <= 1e-12
    assert abs(degree_centralisation(g, "in") - ref["in_centralisation"]) <= 1e-12
    assert abs(degree_centralisation(g, "out") - ref["out_centralisation"]) <= 1e-12
    assert abs(categorical_assortativity(g, p) - ref["assortativity"]) <= 1e-12
    ei = ei_index(g, p)
    for v, want in ref["ei"].items():
        assert (ei.per_node[v] is None) if want is None else abs(ei.per_node[v] - want) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 20), st.floats(0.1, 0.6))
def test_ranges_and_symmetries(seed, n, p):
    rng = np.random.default_rng(seed)
    g = random_digraph(rng, n, p)
    if g.number_of_edges() == 0:
        return
    part_ = random_partition(rng, g, 3)
    assert 0.0 <= density(g) <= 1.0
    assert 0.0 <= reciprocity(g) <= 1.0
    assert reciprocity(g) == reciprocity(g.reversed())
    for d in ("in", "out"):
        assert 0.0 <= degree_centralisation(g, d) <= 1.0
    for v in ei_index(g, part_).per_node.values():
        assert v is None or -1.0 <= v <= 1.0
    try:
        r = categorical_assortativity(g, part_)
    except UndefinedStatisticError:
        return
    assert -1.0 - 1e-12 <= r <= 1.0 + 1e-12
    perm = {"g0": "g2", "g1": "g0", "g2": "g1"}
    assert math.isclose(categorical_assortativity(g, part_.relabel(perm)), r, rel_tol=1e-12, abs_tol=1e-12)


def test_write_ei_csv(tmp_path):
    g = TradeGraph(["A", "B", "Z"], [("A", "B", 1.0)])
    p = part({"A": "x", "B": "y", "Z": "x"})
    path = write_ei_csv(g, p, ei_index(g, p), tmp_path / "ei.csv")
    assert path.read_text().splitlines() == ["node,region,internal,external,ei", "A,x,0,1,1.0", "B,y,0,1,1.0",
                                             "Z,x,0,0,"]
