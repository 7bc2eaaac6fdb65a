"""Tests for hypergraph construction, generators, and file I/O."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperavg import (
    DegenerateTripleError,
    OutOfRangeError,
    TooSmallTorusError,
    from_edge_list,
    generate_complete,
    generate_erdos_renyi,
    generate_torus,
    load_hypergraph,
    load_state,
    rademacher_init,
    save_hypergraph,
    save_state,
)
from hyperavg.hypergraph import StateVector


class TestFromEdgeList:
    def test_single_hyperedge_neighborhoods(self):
        h = from_edge_list(3, [(0, 1, 2)])
        assert h.neighbor_pairs(0) == [(1, 2)]
        assert h.neighbor_pairs(1) == [(0, 2)]
        assert h.neighbor_pairs(2) == [(0, 1)]

    def test_unordered_set_semantics(self):
        h = from_edge_list(4, [(0, 1, 2), (2, 1, 0)])
        assert h.m == 1
        assert h.duplicates_collapsed == 1

    def test_degenerate_triple(self):
        with pytest.raises(DegenerateTripleError):
            from_edge_list(4, [(0, 1, 1)])

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            from_edge_list(4, [(0, 1, 4)])
        with pytest.raises(OutOfRangeError):
            from_edge_list(4, [(-1, 1, 2)])

    def test_degree_accounting(self):
        h = from_edge_list(6, [(0, 1, 2), (1, 2, 3), (3, 4, 5)])
        deg = h.degrees()
        assert deg.sum() == 3 * h.m
        for i in range(6):
            assert deg[i] == sum(1 for t in h.triples if i in t)


class TestGenerators:
    def test_er_p_one_is_complete(self):
        h = generate_erdos_renyi(10, 1.0, 0)
        assert h.m == math.comb(10, 3)

    def test_er_p_zero_is_empty(self):
        h = generate_erdos_renyi(10, 0.0, 0)
        assert h.m == 0

    def test_er_count_and_min_degree_within_four_sigma(self):
        n, p = 200, 0.05
        h = generate_erdos_renyi(n, p, 42)
        total = math.comb(n, 3)
        assert abs(h.m - p * total) <= 4 * math.sqrt(total * p * (1 - p))
        per_vertex = math.comb(n - 1, 2)
        sigma = math.sqrt(per_vertex * p * (1 - p))
        assert h.degrees().min() >= p * per_vertex - 4 * sigma

    def test_er_determinism(self):
        a = generate_erdos_renyi(50, 0.1, 7)
        b = generate_erdos_renyi(50, 0.1, 7)
        assert np.array_equal(a.triples, b.triples)

    def test_er_triples_valid(self):
        h = generate_erdos_renyi(30, 0.2, 3)
        t = h.triples
        assert (t[:, 0] < t[:, 1]).all() and (t[:, 1] < t[:, 2]).all()
        assert t.min() >= 0 and t.max() < 30
        assert np.unique(t, axis=0).shape[0] == h.m

    @pytest.mark.parametrize("n,m_expected", [(3, 1), (4, 4), (6, 20)])
    def test_complete_counts(self, n, m_expected):
        h = generate_complete(n)
        assert h.m == m_expected

    def test_complete_degrees(self):
        h = generate_complete(6)
        assert (h.degrees() == math.comb(5, 2)).all()

    def test_torus_cycle(self):
        h = generate_torus(5, 1)
        assert h.n == 5
        assert h.m == 5
        assert (h.degrees() == 3).all()

    def test_torus_l6(self):
        h = generate_torus(6, 1)
        assert h.m == 6

    def test_torus_2d(self):
        h = generate_torus(5, 2)
        assert h.n == 25
        assert h.m == 50

    def test_torus_too_small(self):
        with pytest.raises(TooSmallTorusError):
            generate_torus(4, 1)


class TestRademacherInit:
    def test_extremes(self):
        assert (rademacher_init(5, 1.0, 0).values == 1.0).all()
        assert (rademacher_init(5, 0.0, 0).values == -1.0).all()

    def test_balanced_mean(self):
        x = rademacher_init(10000, 0.5, 7)
        assert abs(x.values.mean()) <= 0.04

    def test_determinism(self):
        a = rademacher_init(100, 0.3, 5)
        b = rademacher_init(100, 0.3, 5)
        assert np.array_equal(a.values, b.values)


class TestSerialization:
    def test_hypergraph_roundtrip(self, tmp_path):
        h = generate_erdos_renyi(20, 0.2, 1)
        path = tmp_path / "h.txt"
        save_hypergraph(h, path)
        h2 = load_hypergraph(path)
        assert h2.n == h.n
        assert np.array_equal(h2.triples, h.triples)
        assert np.array_equal(h2.offsets, h.offsets)

    def test_hypergraph_header(self, tmp_path):
        h = generate_complete(4)
        path = tmp_path / "h.txt"
        save_hypergraph(h, path)
        assert path.read_text().splitlines()[0] == "4 4"

    def test_state_roundtrip_17_digits(self, tmp_path):
        rng = np.random.default_rng(0)
        s = StateVector(values=rng.standard_normal(50), time=3)
        path = tmp_path / "s.txt"
        save_state(s, path)
        s2 = load_state(path)
        assert s2.time == 3
        assert np.array_equal(s2.values, s.values)


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(min_value=5, max_value=25),
    seed=st.integers(min_value=0, max_value=10_000),
    p=st.floats(min_value=0.05, max_value=0.6),
)
def test_roundtrip_and_incidence_invariants(tmp_path_factory, n, seed, p):
    h = generate_erdos_renyi(n, p, seed)
    # incidence bookkeeping
    assert h.degrees().sum() == 3 * h.m
    # serialization is the identity on the canonical form
    path = tmp_path_factory.mktemp("hg") / "h.txt"
    save_hypergraph(h, path)
    h2 = load_hypergraph(path)
    assert np.array_equal(h2.triples, h.triples)
    assert np.array_equal(h2.pair_owner, h.pair_owner)
    assert np.array_equal(h2.pair_u, h.pair_u)
    assert np.array_equal(h2.pair_v, h.pair_v)
