import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tradenet.errors import DataError, DuplicateEdgeWarning, ParseError, SelfLoopWarning, UnknownNodeWarning
from tradenet.graph import (
    Partition,
    TradeGraph,
    degree,
    drop_isolates,
    isolates,
    load_edge_list,
    load_partition,
    read_edge_csv,
    read_partition_csv,
    strength,
    write_edge_csv,
    write_partition_csv,
)

records_strategy = st.lists(
    st.tuples(st.sampled_from("ABCDEF"), st.sampled_from("ABCDEF"),
              st.integers(1, 100).map(float)),
    min_size=0, max_size=30,
)


def test_duplicates_are_summed():
    with pytest.warns(DuplicateEdgeWarning):
        g = load_edge_list([("USA", "DEU", 5.0), ("USA", "DEU", 3.0)])
    assert g.number_of_edges() == 1
    assert g.weight("USA", "DEU") == 8.0


def test_self_loop_dropped_with_warning():
    with pytest.warns(SelfLoopWarning) as rec:
        g = load_edge_list([("USA", "USA", 1.0)])
    assert g.number_of_edges() == 0
    assert len([w for w in rec if issubclass(w.category, SelfLoopWarning)]) == 1


def test_parse_error_has_line_number():
    with pytest.raises(ParseError, match="line 1"):
        load_edge_list([("A", "B", "x")])
    with pytest.raises(ParseError, match="line 3"):
        load_edge_list([("A", "B", 1.0), ("B", "C", 2.0), ("C", "D")])


@pytest.mark.parametrize("bad", [("A", "B", -1.0), ("A", "B", 0.0), ("A", "B", "nan"), ("", "B", 1.0)])
def test_invalid_records_rejected(bad):
    with pytest.raises(DataError):
        load_edge_list([bad])


def test_degree_and_strength_examples():
    g = load_edge_list([("A", "B", 2.0), ("C", "B", 3.0)])
    assert degree(g, "B", "in") == 2
    assert degree(g, "B", "out") == 0
    assert degree(g, "B", "total") == 2
    assert strength(g, "B", "in") == 5.0
    assert strength(g, "B", "out") == 0.0
    assert strength(g, "B", "total") == 5.0
    with pytest.raises(KeyError):
        degree(g, "Z")
    with pytest.raises(KeyError):
        strength(g, "Z")


def test_drop_isolates():
    g = TradeGraph(["A", "B", "C"], [("A", "B", 1.0)])
    assert isolates(g) == ["C"]
    assert drop_isolates(g).nodes == ("A", "B")
    assert drop_isolates(TradeGraph(["A", "B"])).n == 0
    h = TradeGraph(["A", "B"], [("A", "B", 1.0)])
    assert drop_isolates(h) == h


def test_node_order_is_first_appearance():
    g = load_edge_list([("C", "A", 1.0), ("B", "C", 1.0)])
    assert g.nodes == ("C", "A", "B")


def test_node_ids_case_sensitive():
    g = load_edge_list([("usa", "USA", 1.0)])
    assert g.n == 2 and g.has_edge("usa", "USA") and not g.has_edge("USA", "usa")


def test_immutable_views():
    g = load_edge_list([("A", "B", 1.0)])
    src, dst, w = g.edge_arrays()
    with pytest.raises(ValueError):
        w[0] = 5.0


@settings(max_examples=60, deadline=None)
@given(records_strategy, st.randoms(use_true_random=False))
def test_load_is_order_insensitive(records, rnd):
    shuffled = list(records)
    rnd.shuffle(shuffled)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a = load_edge_list(records)
        b = load_edge_list(shuffled)
    assert set(a.nodes) == set(b.nodes)
    assert {(u, v): w for u, v, w in a.edges()} == {(u, v): w for u, v, w in b.edges()}


@settings(max_examples=60, deadline=None)
@given(records_strategy)
def test_degree_sums_and_adjacency_consistency(records):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = load_edge_list(records)
    m = g.number_of_edges()
    assert g.degrees("in").sum() == g.degrees("out").sum() == m
    for u, v, _ in g.edges():
        assert v in g.successors(u) and u in g.predecessors(v)
    assert sum(len(g.successors(v)) for v in g.nodes) == m
    assert sum(len(g.predecessors(v)) for v in g.nodes) == m


@settings(max_examples=30, deadline=None)
@given(records_strategy)
def test_csv_round_trip(tmp_path_factory, records):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = drop_isolates(load_edge_list(records))
    path = tmp_path_factory.mktemp("rt") / "g.csv"
    write_edge_csv(g, path)
    h = read_edge_csv(path)
    assert h.same_structure(g)
    assert load_edge_list(g.to_records()).same_structure(g)


def test_csv_parse_error_line(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("source,target,weight\nA,B,1\nB,C,oops\n")
    with pytest.raises(ParseError, match="line 3"):
        read_edge_csv(p)


def test_partition_examples():
    g = TradeGraph(["A", "B"])
    p = load_partition([("A", "EAP"), ("B", "ECA")], g, baseline="EAP")
    assert p.labels == ("EAP", "ECA") and p.baseline == "EAP"
    with pytest.raises(DataError, match="B"):
        load_partition([("A", "EAP")], g)
    with pytest.warns(UnknownNodeWarning):
        p = load_partition([("A", "EAP"), ("B", "ECA"), ("C", "SSA")], g)
    assert len(p.labels) >= 2
    with pytest.raises(DataError):
        load_partition([("A", "EAP"), ("B", "ECA")], g, baseline="MENA")


def test_partition_csv_round_trip(tmp_path):
    g = TradeGraph(["A", "B", "C"])
    p = load_partition([("A", "X"), ("B", "Y"), ("C", "X")], g, baseline="Y")
    write_partition_csv(p, tmp_path / "p.csv")
    q = read_partition_csv(tmp_path / "p.csv", g, baseline="Y")
    assert q.baseline == "Y"
    assert all(q[v] == p[v] for v in g.nodes)


def test_partition_restrict_drops_empty_labels():
    g = TradeGraph(["A", "B", "C"], [("A", "B", 1.0)])
    p = Partition({"A": "X", "B": "Y", "C": "Z"}, ("X", "Y", "Z"), "X")
    sub = drop_isolates(g)
    q = p.restrict(sub, drop_empty_labels=True)
    assert q.labels == ("X", "Y")


def test_adjacency_matches_edges(rng):
    from conftest import random_digraph

    g = random_digraph(rng, 15, 0.2, weighted=True)
    a = g.adjacency(weighted=True)
    for u, v, w in g.edges():
        assert a[g.index(u), g.index(v)] == w
    assert np.count_nonzero(a) == g.number_of_edges()
