import numpy as np
import pytest
from hypothesis import given, strategies as st

from graph_denoise_core.exceptions import (
    DatasetFormatError,
    DimensionMismatchError,
    GraphValidationError,
    IsolatedNodeError,
)
from graph_denoise_core.graph import (
    build_graph,
    edge_pairs,
    normalized_ops,
    path_graph,
    read_edge_list,
    smooth_eigenvector,
    spmm,
    total_variation,
    write_edge_list,
)


class TestBuildGraph:
    def test_path_graph_degrees(self):
        g = build_graph(2, [(0, 1, 1.0)])
        np.testing.assert_array_equal(g.degrees(), [1.0, 1.0])
        assert g.num_edges == 1

    def test_triangle_degrees(self, triangle):
        np.testing.assert_array_equal(triangle.degrees(), [2.0, 2.0, 2.0])

    def test_reverse_duplicate_merges_weights(self):
        g = build_graph(2, [(0, 1, 1.0), (1, 0, 1.0)])
        assert g.edges == [(0, 1, 2.0)]

    def test_unweighted_edges_default_to_one(self):
        g = build_graph(3, [(2, 0), (1, 2)])
        assert g.edges == [(0, 2, 1.0), (1, 2, 1.0)]

    @pytest.mark.parametrize(
        "edges",
        [
            [(0, 2, 1.0)],
            [(-1, 0, 1.0)],
            [(0, 1, 0.0)],
            [(0, 1, -2.0)],
            [(0, 1, float("nan"))],
            [(0, 1), (0, 1, 1.0)],
        ],
    )
    def test_invalid_edges_rejected(self, edges):
        with pytest.raises(GraphValidationError):
            build_graph(2, edges)

    def test_self_loop_requires_flag(self):
        with pytest.raises(GraphValidationError):
            build_graph(2, [(0, 0, 1.0), (0, 1, 1.0)])
        g = build_graph(2, [(0, 0, 1.0), (0, 1, 1.0)], allow_self_loops=True)
        assert g.num_self_loops == 1
        assert g.num_edges == 1

    def test_empty_graph(self):
        g = build_graph(3, [])
        assert g.num_edges == 0
        assert g.adjacency().shape == (3, 3)

    def test_stored_arrays_are_readonly(self, triangle):
        with pytest.raises(ValueError):
            triangle.weight[0] = 5.0

    @given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=30))
    def test_adjacency_is_symmetric(self, pairs):
        edges = [(i, j) for i, j in pairs if i != j]
        g = build_graph(8, edges)
        a = g.adjacency().toarray()
        np.testing.assert_array_equal(a, a.T)
        assert np.all(g.src <= g.dst)

    def test_edge_pairs_skip_self_loops(self):
        g = build_graph(3, [(0, 0, 1.0), (0, 1, 1.0), (1, 2, 1.0)], allow_self_loops=True)
        assert list(edge_pairs(g)) == [(0, 1), (1, 2)]


class TestNormalizedOps:
    def test_p2_operators(self, p2_ops):
        np.testing.assert_allclose(p2_ops.a_norm.toarray(), [[0, 1], [1, 0]])
        np.testing.assert_allclose(p2_ops.lap_norm.toarray(), [[1, -1], [-1, 1]])
        np.testing.assert_allclose(p2_ops.a_renorm.toarray(), [[0.5, 0.5], [0.5, 0.5]])

    def test_triangle_is_half_adjacency(self, triangle):
        ops = normalized_ops(triangle)
        np.testing.assert_allclose(ops.a_norm.toarray(), triangle.adjacency().toarray() / 2.0)

    def test_isolated_node_raises(self):
        g = build_graph(3, [(0, 1)])
        with pytest.raises(IsolatedNodeError) as err:
            normalized_ops(g)
        assert err.value.node == 2

    def test_isolated_node_allowed_gives_zero_row(self):
        g = build_graph(3, [(0, 1)])
        ops = normalized_ops(g, allow_isolated=True)
        np.testing.assert_array_equal(ops.a_norm.toarray()[2], [0.0, 0.0, 0.0])

    def test_operators_bitwise_symmetric(self, connected_graph, rng):
        base = connected_graph(15, rng)
        weights = rng.uniform(0.5, 3.0, size=base.num_edges)
        g = build_graph(15, [(i, j, float(w)) for (i, j, _), w in zip(base.edges, weights)])
        ops = normalized_ops(g)
        for op in (ops.a_norm, ops.a_renorm, ops.lap_norm):
            dense = op.toarray()
            np.testing.assert_array_equal(dense, dense.T)

    def test_spectral_radius_at_most_one(self, connected_graph, rng):
        base = connected_graph(20, rng)
        weights = rng.uniform(0.5, 3.0, size=base.num_edges)
        weighted = build_graph(20, [(i, j, float(w)) for (i, j, _), w in zip(base.edges, weights)])
        for g in (base, weighted):
            ops = normalized_ops(g)
            for op in (ops.a_norm, ops.a_renorm):
                radius = np.max(np.abs(np.linalg.eigvalsh(op.toarray())))
                assert radius <= 1.0 + 1e-12
            assert np.max(np.abs(np.linalg.eigvalsh(ops.a_norm.toarray()))) == pytest.approx(1.0)

    def test_smooth_eigenvector_is_fixed_by_a_norm(self, connected_graph, rng):
        ops = normalized_ops(connected_graph(20, rng))
        v = smooth_eigenvector(ops)
        np.testing.assert_allclose(ops.a_norm @ v, v, atol=1e-12)
        assert np.linalg.norm(v) == pytest.approx(1.0)


class TestTotalVariation:
    def test_p2_hand_values(self, p2_ops):
        assert total_variation(p2_ops, [1.0, 0.0]) == pytest.approx(1.0)
        assert total_variation(p2_ops, [1.0, 1.0]) == pytest.approx(0.0, abs=1e-15)

    def test_smooth_eigenvector_has_zero_tv(self, connected_graph, rng):
        ops = normalized_ops(connected_graph(25, rng))
        assert total_variation(ops, smooth_eigenvector(ops)) == pytest.approx(0.0, abs=1e-12)

    def test_invariant_along_smooth_eigenvector(self, connected_graph, rng):
        ops = normalized_ops(connected_graph(25, rng))
        v = smooth_eigenvector(ops)
        x = rng.normal(size=(25, 3))
        base = total_variation(ops, x)
        for c in (-2.0, 0.5, 3.0):
            assert total_variation(ops, x + c * v[:, None]) == pytest.approx(base, rel=1e-10)
        assert total_variation(ops, x[:, 0] + 4.0 * v) == pytest.approx(total_variation(ops, x[:, 0]), rel=1e-10)

    def test_never_negative(self, connected_graph, rng):
        ops = normalized_ops(connected_graph(25, rng))
        for _ in range(10):
            assert total_variation(ops, rng.normal(size=(25, 3))) >= 0.0

    def test_sums_over_columns(self, connected_graph, rng):
        ops = normalized_ops(connected_graph(12, rng))
        x = rng.normal(size=(12, 4))
        total = sum(total_variation(ops, x[:, k]) for k in range(4))
        assert total_variation(ops, x) == pytest.approx(total, rel=1e-12)

    def test_row_mismatch(self, p2_ops):
        with pytest.raises(DimensionMismatchError):
            total_variation(p2_ops, [1.0, 2.0, 3.0])


class TestSpmm:
    def test_p2_products(self, p2_ops):
        np.testing.assert_allclose(spmm(p2_ops.a_norm, np.array([1.0, 0.0])), [0.0, 1.0])
        np.testing.assert_allclose(spmm(p2_ops.a_renorm, np.array([1.0, 0.0])), [0.5, 0.5])

    def test_shape_mismatch(self, p2_ops):
        with pytest.raises(DimensionMismatchError):
            spmm(p2_ops.a_norm, np.ones((3, 2)))


class TestEdgeListIO:
    def test_write_then_read_keeps_trailing_isolated_nodes(self, tmp_path):
        g = build_graph(5, [(0, 1, 2.5), (1, 2, 1.0)])
        path = write_edge_list(g, tmp_path / "g.edges")
        assert read_edge_list(path) == g

    def test_comments_and_default_weight(self, tmp_path):
        path = tmp_path / "p.edges"
        path.write_text("# a path\n0 1  # first edge\n\n1 2 3.0\n", encoding="utf-8")
        g = read_edge_list(path)
        assert g.edges == [(0, 1, 1.0), (1, 2, 3.0)]

    def test_bad_row_reports_line(self, tmp_path):
        path = tmp_path / "bad.edges"
        path.write_text("0 1\n0 x\n", encoding="utf-8")
        with pytest.raises(DatasetFormatError) as err:
            read_edge_list(path)
        assert err.value.line == 2

    def test_path_graph_helper(self):
        assert path_graph(3).edges == [(0, 1, 1.0), (1, 2, 1.0)]
