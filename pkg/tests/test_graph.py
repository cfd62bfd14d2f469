import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcluster.graph import (
    AugmentedUnionFind,
    InputError,
    PointCloud,
    WeightedGraph,
    mst_supergraph,
    parse_mode,
    point_cloud_to_graph,
    read_edge_list,
    read_point_cloud,
    sort_edges,
    sorted_chunks,
    sorted_edges,
    write_edge_list,
)

from conftest import random_graph


def _norm(edges):
    return sorted((min(a, b), max(a, b), w) for a, b, w in edges)


class TestWeightedGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(InputError, match="self-loop"):
            WeightedGraph.from_edges(3, [(1, 1, 0.5)])

    def test_rejects_duplicate_either_orientation(self):
        with pytest.raises(InputError, match="duplicate"):
            WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 0, 2.0)])

    @pytest.mark.parametrize("w", [-1.0, np.inf, np.nan])
    def test_rejects_bad_weight(self, w):
        with pytest.raises(InputError):
            WeightedGraph.from_edges(2, [(0, 1, w)])

    def test_rejects_out_of_range(self):
        with pytest.raises(InputError, match="range"):
            WeightedGraph.from_edges(2, [(0, 2, 1.0)])

    def test_empty(self):
        g = WeightedGraph.from_edges(3, [])
        assert g.n_edges == 0
        assert sorted_edges(g) == []


class TestSortEdges:
    def test_two_elements(self):
        g = WeightedGraph.from_edges(3, [(0, 1, 3.0), (1, 2, 1.0)])
        assert sorted_edges(g) == [(1, 2, 1.0), (0, 1, 3.0)]

    def test_tie_break_on_endpoints(self):
        g = WeightedGraph.from_edges(3, [(0, 2, 2.0), (0, 1, 2.0)])
        assert sorted_edges(g) == [(0, 1, 2.0), (0, 2, 2.0)]

    def test_tie_break_uses_min_max_not_orientation(self):
        g = WeightedGraph.from_edges(4, [(3, 1, 1.0), (2, 0, 1.0), (1, 2, 1.0)])
        order = sort_edges(g)
        assert [(min(g.u[i], g.v[i]), max(g.u[i], g.v[i])) for i in order] == [(0, 2), (1, 2), (1, 3)]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.booleans())
    def test_permutation_and_total_order(self, seed, ints):
        g = random_graph(np.random.default_rng(seed), integer_weights=ints, n_max=25)
        order = sort_edges(g)
        assert sorted(order.tolist()) == list(range(g.n_edges))
        keys = [(g.w[i], min(g.u[i], g.v[i]), max(g.u[i], g.v[i])) for i in order]
        assert keys == sorted(keys)
        assert np.array_equal(order, sort_edges(g))

    @pytest.mark.parametrize("first", [1, 3, 17])
    def test_chunks_concatenate_to_full_order(self, first):
        g = random_graph(np.random.default_rng(5), n=40, density=0.7, integer_weights=True)
        chunks = list(sorted_chunks(g, first=first))
        idx = np.concatenate(chunks)
        assert np.array_equal(idx, sort_edges(g))


class TestPointCloud:
    def test_two_points_complete(self):
        g = point_cloud_to_graph(PointCloud(np.array([[0.0, 0.0], [3.0, 4.0]])))
        assert g.edges == [(0, 1, 5.0)]

    def test_torus_minimal_image(self):
        pc = PointCloud(np.array([[0.1], [0.9]]), metric="torus", side=1.0)
        (_, _, w), = point_cloud_to_graph(pc).edges
        assert w == pytest.approx(0.2)

    def test_torus_requires_coordinates_in_box(self):
        with pytest.raises(InputError):
            PointCloud(np.array([[1.0]]), metric="torus", side=1.0)

    def test_knn_line(self):
        pc = PointCloud(np.array([[0.0], [1.0], [2.0], [4.0]]))
        g = point_cloud_to_graph(pc, "knn", 1)
        assert _norm(g.edges) == [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 2.0)]

    def test_knn_m_too_large(self):
        pc = PointCloud(np.zeros((3, 1)) + np.arange(3)[:, None])
        with pytest.raises((InputError, ValueError)):
            point_cloud_to_graph(pc, "knn", 3)

    def test_parse_mode(self):
        assert parse_mode("complete") == ("complete", None)
        assert parse_mode("knn=7") == ("knn", 7)
        with pytest.raises(InputError):
            parse_mode("knn=0")

    def test_complete_is_connected(self):
        pc = PointCloud(np.random.default_rng(0).random((30, 3)))
        g = point_cloud_to_graph(pc)
        assert g.n_edges == 30 * 29 // 2
        assert len(set(g.component_labels().tolist())) == 1

    @pytest.mark.parametrize("d,metric", [(1, "euclidean"), (2, "euclidean"), (3, "euclidean"), (2, "torus")])
    def test_mst_supergraph_preserves_mst(self, d, metric):
        from kcluster.oracle import naive_msf

        pc = PointCloud(np.random.default_rng(d).random((60, d)), metric=metric)
        full, sparse = point_cloud_to_graph(pc), mst_supergraph(pc)
        assert naive_msf(sparse).total_weight == pytest.approx(naive_msf(full).total_weight, rel=1e-12)


class TestUnionFind:
    def test_fresh(self):
        uf = AugmentedUnionFind(5)
        assert [uf.component_size(v) for v in range(5)] == [1] * 5

    def test_single_union(self):
        uf = AugmentedUnionFind(3)
        uf.merge(0, 1)
        assert uf.component_size(0) == 2
        assert uf.root(0) == uf.root(1)

    def test_transitive_component(self):
        uf = AugmentedUnionFind(5)
        uf.merge(0, 1)
        uf.merge(2, 3)
        uf.merge(1, 2)
        assert sorted(uf.component(0)) == [0, 1, 2, 3]
        assert uf.component(4) == [4]

    def test_tie_goes_to_smaller_id(self):
        uf = AugmentedUnionFind(4)
        assert uf.merge(3, 2) == 2

    @settings(max_examples=80, deadline=None)
    @given(st.integers(2, 30).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=60))))
    def test_invariants(self, case):
        n, ops = case
        uf = AugmentedUnionFind(n)
        for a, b in ops:
            uf.merge(a, b)
        assert sum(uf.size[r] for r in uf.roots()) == n
        for v in range(n):
            members = uf.component(v)
            assert len(members) == len(set(members)) == uf.component_size(v)
            assert {uf.root(x) for x in members} == {uf.root(v)}


class TestIO:
    def test_round_trip(self, tmp_path):
        g = random_graph(np.random.default_rng(1), n=12)
        p = tmp_path / "g.csv"
        write_edge_list(p, g)
        h = read_edge_list(p, n_vertices=12)
        assert h.edges == g.edges

    @pytest.mark.parametrize(
        "body,line,msg",
        [
            ("0,1,1\n1,1,2\n", 2, "self-loop"),
            ("# c\n0,1,1\n1,0,2\n", 3, "duplicate"),
            ("0,1,-1\n", 1, "non-negative"),
            ("0,1\n", 1, "expected"),
            ("0,1,x\n", 1, "parse"),
        ],
    )
    def test_errors_name_line(self, tmp_path, body, line, msg):
        p = tmp_path / "bad.csv"
        p.write_text(body)
        with pytest.raises(InputError, match=rf"line {line}: .*{msg}"):
            read_edge_list(p)

    def test_point_cloud_ragged(self, tmp_path):
        p = tmp_path / "pts.csv"
        p.write_text("0,0\n1,2,3\n")
        with pytest.raises(InputError, match="line 2"):
            read_point_cloud(p)
