import pytest

from congestds.cds import (
    bfs_clustering,
    build_cds,
    connector_paths,
    default_ruling_params,
    gs_graph,
    is_dominating,
    ruling_subset,
)
from congestds.errors import PreconditionError, StructuralError
from congestds.generators import generate_graph, petersen
from congestds.graph import Graph
from congestds.oracles import brute_force_cds


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


class TestGsGraph:
    def test_p7_spine(self):
        g = path(7)
        gs = gs_graph(g, [0, 3, 6])
        assert sorted(gs.witness) == [(0, 3), (3, 6)]
        assert gs.witness[(0, 3)] == [0, 1, 2, 3]
        assert gs.is_connected()

    def test_witnesses_are_lex_smallest(self):
        # two shortest 0..3 paths: via 1 or via 2; lex order picks via 1
        g = Graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        gs = gs_graph(g, [0, 3])
        assert gs.witness[(0, 3)] == [0, 1, 3]

    def test_non_dominating_rejected(self):
        with pytest.raises(PreconditionError):
            gs_graph(path(7), [0])

    def test_distant_pairs_get_no_edge(self):
        g = path(9)
        gs = gs_graph(g, [1, 4, 7])
        assert gs.is_connected()
        # 1 and 7 are 6 hops apart: connected only through 4
        assert (1, 7) not in gs.witness
        assert gs.neighbors(4) == [1, 7]


class TestRulingSubset:
    def test_p5_greedy(self):
        g = path(5)
        assert ruling_subset(g, range(5), alpha=3, beta=3) == [0, 3]

    def test_all_when_alpha_one(self):
        g = path(4)
        assert ruling_subset(g, range(4), alpha=1, beta=1) == [0, 1, 2, 3]

    def test_pairwise_separation_and_coverage(self):
        g = generate_graph("grid", {"rows": 3, "cols": 5})
        chosen = ruling_subset(g, range(g.n), alpha=2, beta=4)
        for i, u in enumerate(chosen):
            for v in chosen[i + 1 :]:
                assert g.distance(u, v) >= 2
        for v in range(g.n):
            assert min(g.distance(v, u) for u in chosen) <= 4

    def test_alpha_beta_order(self):
        with pytest.raises(PreconditionError):
            ruling_subset(path(3), range(3), alpha=4, beta=2)


class TestBfsClustering:
    def test_single_center_p7(self):
        g = path(7)
        S = [0, 3, 6]
        cl = bfs_clustering(g, S, [0])
        assert cl.membership == {0: 0, 3: 0, 6: 0}
        # the pruned tree keeps the whole spine up to node 6
        assert cl.tree_nodes(0) == list(range(7))

    def test_pruning_drops_dead_branches(self):
        # star with an S-leaf and plain leaves: plain leaves are pruned
        g = Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
        cl = bfs_clustering(g, [0, 4], [0])
        assert cl.tree_nodes(0) == [0, 4]

    def test_two_centers_partition(self):
        g = path(10)
        S = [1, 4, 8]
        cl = bfs_clustering(g, S, [1, 8])
        assert cl.membership[4] in (1, 8)
        assert set(cl.membership) == set(S)

    def test_centers_must_be_in_s(self):
        with pytest.raises(PreconditionError):
            bfs_clustering(path(3), [1], [0])

    def test_disconnected_stalls(self):
        g = Graph(4, [(0, 1), (2, 3)])
        with pytest.raises(StructuralError):
            bfs_clustering(g, [0, 2], [0])


class TestConnectorPaths:
    def test_direct_edge_rule(self):
        g = path(4)
        S = [1, 2]
        cl = bfs_clustering(g, S, [1, 2])
        paths = connector_paths(g, S, cl)
        assert len(paths) == 1
        assert paths[0].rule == 1 and paths[0].path == [1, 2]

    def test_two_hop_rule(self):
        g = path(5)
        S = [1, 3]
        cl = bfs_clustering(g, S, [1, 3])
        paths = connector_paths(g, S, cl)
        assert len(paths) == 1
        assert paths[0].rule == 2 and paths[0].path == [1, 2, 3]

    def test_three_hop_rule(self):
        g = path(6)
        S = [1, 4]
        cl = bfs_clustering(g, S, [1, 4])
        paths = connector_paths(g, S, cl)
        assert len(paths) == 1
        assert paths[0].rule == 3
        assert paths[0].path == [1, 2, 3, 4]

    def test_merging_only(self):
        g = generate_graph("cycle", {"n": 6})
        S = [0, 2, 4]
        cl = bfs_clustering(g, S, [0, 2, 4])
        paths = connector_paths(g, S, cl)
        # three clusters need exactly two merges
        assert len(paths) == 2


class TestBuildCds:
    def test_p7(self):
        g = path(7)
        res = build_cds(g, [1, 3, 5])
        assert is_dominating(g, res.sbar)
        assert g.subgraph_is_connected(res.sbar)
        assert len(res.sbar) <= 3 * 3 + 2 * len(res.paths)
        opt, _ = brute_force_cds(g)
        assert opt == 5

    def test_c6(self):
        g = generate_graph("cycle", {"n": 6})
        res = build_cds(g, [0, 3])
        assert is_dominating(g, res.sbar)
        assert g.subgraph_is_connected(res.sbar)

    def test_star(self):
        g = generate_graph("star", {"m": 6})
        res = build_cds(g, [0])
        assert res.sbar == [0]

    def test_petersen(self):
        g = petersen()
        from congestds.oracles import brute_force_mds

        _, S = brute_force_mds(g)
        res = build_cds(g, S)
        assert is_dominating(g, res.sbar)
        assert g.subgraph_is_connected(res.sbar)
        opt, _ = brute_force_cds(g)
        assert len(res.sbar) <= 3 * len(S) + 2 * len(res.paths)
        assert len(res.sbar) >= opt

    def test_single_node(self):
        res = build_cds(Graph(1, []), [0])
        assert res.sbar == [0]

    def test_disconnected_rejected(self):
        with pytest.raises(PreconditionError):
            build_cds(Graph(2, []), [0, 1])

    def test_non_dominating_rejected(self):
        with pytest.raises(PreconditionError):
            build_cds(path(5), [0])

    def test_default_params_grow(self):
        a1, b1 = default_ruling_params(16)
        a2, b2 = default_ruling_params(1024)
        assert a1 <= a2 and b1 <= b2 and a1 <= b1 and a2 <= b2
