import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramsey_lab import (
    GraphParams,
    LayeredGraph,
    ParameterError,
    UnknownVertexError,
    canonical_params,
    complete_layered,
    neighbors,
)
from conftest import random_graph


class TestParams:
    def test_rejects_bad_domains(self):
        with pytest.raises(ParameterError):
            GraphParams(k=2, part_size=5, edge_prob=0.5, seed=0)
        with pytest.raises(ParameterError):
            GraphParams(k=3, part_size=0, edge_prob=0.5, seed=0)
        with pytest.raises(ParameterError):
            GraphParams(k=3, part_size=5, edge_prob=1.5, seed=0)
        with pytest.raises(ParameterError):
            GraphParams(k=3, part_size=5, edge_prob=0.5, seed=2**64)

    def test_canonical_example_k3_r2_n100(self):
        params = canonical_params(3, 2, 100)
        assert params.c == 288
        assert params.part_size == 28800
        # direct arithmetic on the closed form
        assert params.p == pytest.approx(math.sqrt(math.log(100) / 100), abs=1e-15)
        assert round(params.p, 5) == 0.21460

    def test_canonical_example_k4_r3_n50(self):
        assert canonical_params(4, 3, 50).c == 16 * 16 * 3 == 768

    def test_canonical_p_squared_times_n_is_log_n(self):
        for n in (10, 100, 1234):
            params = canonical_params(3, 2, n)
            assert params.p**2 * n == pytest.approx(math.log(n), rel=1e-12)

    def test_canonical_rejects_bad_domains(self):
        with pytest.raises(ParameterError):
            canonical_params(2, 2, 100)
        with pytest.raises(ParameterError):
            canonical_params(3, 1, 100)
        with pytest.raises(ParameterError):
            canonical_params(3, 2, 2)


class TestGeneration:
    def test_p_zero_gives_empty_graph(self):
        g = random_graph(3, 5, 0.0, seed=42)
        assert g.edge_count() == 0

    def test_p_one_gives_complete_layered(self):
        g = random_graph(3, 5, 1.0, seed=42)
        assert g.edge_count() == 3 * 25
        assert g == complete_layered(3, 5)

    def test_same_seed_same_graph(self):
        a = random_graph(4, 7, 0.3, seed=99)
        b = random_graph(4, 7, 0.3, seed=99)
        assert a == b

    def test_different_seed_differs(self):
        a = random_graph(4, 20, 0.5, seed=1)
        b = random_graph(4, 20, 0.5, seed=2)
        assert a != b

    def test_stream_regression(self):
        # frozen draw of the documented Philox stream; a failure here means
        # the seed-to-graph mapping changed and stored seeds are stale
        g = random_graph(3, 4, 0.5, seed=123)
        assert g.edges() == [
            (0, 6), (0, 8), (0, 9), (0, 10), (1, 4), (1, 6), (1, 7), (1, 9),
            (2, 5), (2, 6), (2, 7), (3, 4), (3, 7), (3, 8), (3, 10), (3, 11),
            (4, 8), (4, 9), (4, 10), (4, 11), (5, 9), (6, 9), (7, 10),
        ]

    def test_edge_count_mean_near_binomial_mean(self):
        # k*m^2*p = 3000; the mean over 200 seeds must land within 5%
        counts = [random_graph(3, 100, 0.1, seed=s).edge_count() for s in range(200)]
        mean = sum(counts) / len(counts)
        assert abs(mean - 3000) < 0.05 * 3000

    def test_edge_count_variance_sane(self):
        counts = np.array(
            [random_graph(3, 100, 0.1, seed=s).edge_count() for s in range(200)],
            dtype=float,
        )
        expected_var = 3 * 100 * 100 * 0.1 * 0.9
        assert 0.6 * expected_var < counts.var(ddof=1) < 1.4 * expected_var


class TestCompleteLayered:
    @pytest.mark.parametrize(
        "k,m,edges", [(3, 1, 3), (3, 2, 12), (5, 2, 20)]
    )
    def test_edge_counts(self, k, m, edges):
        assert complete_layered(k, m).edge_count() == edges

    def test_rejects_bad_domains(self):
        with pytest.raises(ParameterError):
            complete_layered(2, 3)
        with pytest.raises(ParameterError):
            complete_layered(3, 0)


class TestNeighbors:
    def test_complete_forward(self, tiny_complete):
        assert list(neighbors(tiny_complete, 0, "forward")) == [2, 3]
        assert list(neighbors(tiny_complete, 0, "backward")) == [4, 5]

    def test_empty_graph(self):
        g = random_graph(3, 4, 0.0, seed=0)
        assert neighbors(g, 5, "forward").size == 0

    def test_single_edge_symmetry(self):
        g = LayeredGraph.from_edges(3, 2, [(0, 2)])
        assert list(neighbors(g, 0, "forward")) == [2]
        assert list(neighbors(g, 2, "backward")) == [0]
        assert neighbors(g, 1, "forward").size == 0

    def test_unknown_vertex(self, tiny_complete):
        with pytest.raises(UnknownVertexError):
            neighbors(tiny_complete, 6)

    def test_bad_direction(self, tiny_complete):
        with pytest.raises(ParameterError):
            neighbors(tiny_complete, 0, "sideways")


class TestStructure:
    def test_part_of_and_vertex_roundtrip(self):
        g = complete_layered(4, 3)
        for v in range(12):
            assert g.vertex(g.part_of(v), g.local(v)) == v

    def test_adjacency_symmetric(self):
        g = random_graph(4, 5, 0.4, seed=5)
        for u in range(g.num_vertices):
            for v in range(g.num_vertices):
                assert g.adjacent(u, v) == g.adjacent(v, u)

    @settings(max_examples=30, deadline=None)
    @given(
        k=st.integers(3, 5),
        m=st.integers(1, 6),
        p=st.floats(0, 1),
        seed=st.integers(0, 2**32),
    )
    def test_partition_soundness(self, k, m, p, seed):
        g = random_graph(k, m, p, seed)
        for u, v in g.edges():
            assert (g.part_of(v) - g.part_of(u)) % k in (1, k - 1)

    @settings(max_examples=20, deadline=None)
    @given(
        k=st.integers(3, 5),
        m=st.integers(1, 5),
        p=st.floats(0, 1),
        seed=st.integers(0, 2**32),
    )
    def test_serialization_roundtrip(self, k, m, p, seed):
        g = random_graph(k, m, p, seed)
        doc = json.loads(json.dumps(g.to_json()))
        assert LayeredGraph.from_json(doc) == g

    def test_edges_sorted_and_normalized(self):
        g = random_graph(3, 6, 0.5, seed=11)
        edges = g.edges()
        assert all(u < v for u, v in edges)
        assert edges == sorted(edges)

    def test_from_edges_rejects_nonconsecutive(self):
        # parts 0 and 2 are non-consecutive for k=4
        with pytest.raises(ParameterError):
            LayeredGraph.from_edges(4, 2, [(0, 4)])

    def test_from_edges_rejects_out_of_range(self):
        with pytest.raises(ParameterError):
            LayeredGraph.from_edges(3, 2, [(0, 9)])

    def test_blocks_immutable(self, tiny_complete):
        with pytest.raises(ValueError):
            tiny_complete.blocks[0][0, 0] = False

    def test_save_load(self, tmp_path):
        g = random_graph(3, 4, 0.6, seed=3)
        path = tmp_path / "g.json"
        g.save(path)
        assert LayeredGraph.load(path) == g
