import numpy as np
import pytest
from conftest import graph_from_pairs, random_digraph
from hypothesis import given, settings
from hypothesis import strategies as st

from tradenet.errors import ConfigError
from tradenet.nullmodels import RewireConfig, degree_preserving_arrays, degree_preserving_sample, rewire_arrays
from tradenet.streams import seed_sequence, stream


def check_sample(observed, sample):
    assert sample.nodes == observed.nodes
    assert np.array_equal(sample.degrees("in"), observed.degrees("in"))
    assert np.array_equal(sample.degrees("out"), observed.degrees("out"))
    assert sample.number_of_edges() == observed.number_of_edges()
    assert all(u != v for u, v, _ in sample.edges())


def test_three_cycle():
    g = graph_from_pairs([("A", "B"), ("B", "C"), ("C", "A")])
    for s in degree_preserving_sample(g, RewireConfig(10, 1, 20), threads=1):
        assert list(s.degrees("in")) == [1, 1, 1] and list(s.degrees("out")) == [1, 1, 1]


def test_single_edge_unchanged():
    g = graph_from_pairs([("A", "B")])
    for s in degree_preserving_sample(g, RewireConfig(10, 1, 5)):
        assert s.same_structure(g)


def test_swaps_actually_happen(rng):
    g = random_digraph(rng, 30, 0.15)
    src, dst, accepted = rewire_arrays(g, 10, stream(3, "degree_null", 0))
    assert accepted > 0
    s0, d0, _ = g.edge_arrays()
    assert set(zip(src.tolist(), dst.tolist())) != set(zip(s0.tolist(), d0.tolist()))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 25), st.floats(0.05, 0.6))
def test_invariants(seed, n, p):
    g = random_digraph(np.random.default_rng(seed), n, p)
    for s in degree_preserving_sample(g, RewireConfig(5, seed % 1000, 4), threads=1):
        check_sample(g, s)


def test_determinism_and_thread_independence(rng):
    g = random_digraph(rng, 25, 0.2)
    cfg = RewireConfig(20, 99, 12)
    a = degree_preserving_arrays(g, cfg, threads=1)
    b = degree_preserving_arrays(g, cfg, threads=3)
    assert len(a) == 12
    for (s1, d1), (s2, d2) in zip(a, b):
        assert np.array_equal(s1, s2) and np.array_equal(d1, d2)
    other = degree_preserving_arrays(g, RewireConfig(20, 100, 12), threads=1)
    assert any(not np.array_equal(x[1], y[1]) for x, y in zip(a, other))


def test_streams_are_distinct_per_stage_and_index():
    keys = {tuple(seed_sequence(1, s, k).generate_state(2)) for s in ("degree_null", "ergm_chain") for k in range(3)}
    assert len(keys) == 6


@pytest.mark.parametrize("kwargs", [{"swaps_per_edge": 0}, {"samples": 0}, {"seed": -1}, {"samples": 1.5}])
def test_bad_config(kwargs):
    with pytest.raises(ConfigError):
        RewireConfig(**kwargs)
