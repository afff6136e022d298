import random
from itertools import combinations

import pytest

from corpus import saturated_corpus
from turanstab.constructions import FinalParams, build_G_rs, build_H_rst
from turanstab.graph import Graph, PartitionedGraph, has_clique, iter_bits, r_partite_complement
from turanstab.oracles import definition_level_saturation
from turanstab.stability import peel_to_r_partite
from turanstab.turan import (
    ClassificationError,
    ColoringBudgetExceeded,
    ContractViolation,
    classify_nonedge_types,
    is_complete_multipartite,
    is_r_partite,
    is_saturated,
    r_coloring,
    saturating_edges,
    turan_class_sizes,
    turan_graph,
    turan_min_degree,
    turan_number,
    turan_shift_check,
)


class TestTuranGraph:
    @pytest.mark.parametrize("r,n,sizes,edges", [(2, 4, [2, 2], 4), (3, 6, [2, 2, 2], 12), (3, 7, [3, 2, 2], 16)])
    def test_examples(self, r, n, sizes, edges):
        pg = turan_graph(r, n)
        assert [c.bit_count() for c in pg.classes] == sizes
        assert pg.graph.m == edges == turan_number(r, n)
        assert is_complete_multipartite(pg.graph, r)

    def test_edge_count_grid(self):
        for r in range(1, 9):
            for n in range(0, 501, 7):
                assert turan_graph(r, n).graph.m == turan_number(r, n)

    def test_lower_bound_and_degree_step(self):
        for r in range(1, 7):
            for n in range(1, 201):
                assert r * turan_number(r, n) >= (r - 1) * n * (n - 1) // 2
                assert turan_number(r, n) - turan_number(r, n - 1) == turan_min_degree(r, n)

    def test_class_sizes(self):
        assert turan_class_sizes(4, 10) == [3, 3, 2, 2]


class TestShiftCheck:
    def test_examples(self):
        assert turan_shift_check(2, 10, 0)
        assert turan_number(2, 10) == turan_number(2, 10 - 0)
        assert turan_shift_check(3, 30, 5)

    def test_range_errors(self):
        with pytest.raises(ValueError):
            turan_shift_check(2, 5, 6)


class TestSaturation:
    def test_examples(self):
        assert is_saturated(Graph.cycle(5), 2)
        assert not is_saturated(Graph.path(4), 2)
        for r in (2, 3, 4):
            assert is_saturated(turan_graph(r, 3 * r).graph, r)

    def test_agrees_with_definition_on_corpus(self):
        for name, r, g in saturated_corpus():
            assert is_saturated(g, r), name
            if g.n <= 30:
                assert definition_level_saturation(g, r), name

    def test_agrees_on_random_graphs(self):
        rng = random.Random(5)
        for _ in range(300):
            n = rng.randint(1, 10)
            g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < 0.6])
            for r in (2, 3):
                assert is_saturated(g, r) == definition_level_saturation(g, r)


class TestSaturatingEdges:
    def test_complete_multipartite_has_none(self):
        pg = turan_graph(3, 9)
        assert saturating_edges(pg, 4, 0, 1) == []

    def test_G32_complement(self):
        # in the r-partite complement of G_{3,2}, every cross-class edge of G_{3,2} is 3-saturating
        pg = build_G_rs(3, 2)
        comp = PartitionedGraph(r_partite_complement(pg), pg.classes)
        for x, y in combinations(range(3), 2):
            found = set(saturating_edges(comp, 3, x, y))
            want = {(u, v) for u in iter_bits(pg.classes[x]) for v in iter_bits(pg.classes[y] & pg.graph.adj[u])}
            assert found == want

    def test_definition_level(self):
        # C5 with T = {0}: classes {1,3}, {2,4}
        g = Graph.cycle(5)
        pg = PartitionedGraph.from_sets(g, [[1, 3], [2, 4], [0]])
        got = set(saturating_edges(pg, 3, 0, 1))
        brute = set()
        for u in (1, 3):
            for v in (2, 4):
                if not g.has_edge(u, v) and has_clique(g.with_edges([(u, v)]), 3):
                    brute.add((u, v))
        assert got == brute == {(1, 4)}


class TestColoring:
    def test_bipartite_and_odd_cycle(self):
        assert is_r_partite(Graph.cycle(6), 2)
        assert not is_r_partite(Graph.cycle(5), 2)
        assert is_r_partite(Graph.cycle(5), 3)

    def test_coloring_is_proper(self):
        g = build_H_rst(FinalParams(3, 2, 1, 49)).graph
        assert r_coloring(g, 3) is None
        T, col = peel_to_r_partite(g, 3)
        assert all(g.edge_count(c) == 0 for c in col)

    def test_budget(self):
        # K_5 minus an edge needs 4 colours; the greedy pass fails and backtracking starts
        with pytest.raises(ColoringBudgetExceeded):
            r_coloring(Graph.complete(5).without_edges([(0, 1)]), 3, budget=0)

    def test_aes_threshold(self):
        rng = random.Random(9)
        seen = 0
        for _ in range(3000):
            n = rng.randint(5, 14)
            r = rng.choice((2, 3))
            g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < 0.45])
            if has_clique(g, r + 1) or is_r_partite(g, r):
                continue
            seen += 1
            assert min(g.degree(v) for v in range(n)) * (3 * r - 1) <= (3 * r - 4) * n
        assert seen > 50


class TestMultipartite:
    def test_brouwer_consistency(self):
        for name, r, g in saturated_corpus():
            if g.n >= 2 * r + 1 and g.m >= turan_number(r, g.n) - g.n // r + 2:
                assert is_complete_multipartite(g, r), name

    def test_not_multipartite(self):
        assert not is_complete_multipartite(Graph.path(4))
        assert is_complete_multipartite(Graph.empty(3), 1)


class TestTypes:
    def test_complete_multipartite_empty(self):
        pg = turan_graph(3, 6)
        assert classify_nonedge_types(pg.graph, 3, pg.classes, 0) == []

    def test_H321_all_type_one(self):
        g = build_H_rst(FinalParams(3, 2, 1, 49)).graph
        T, col = peel_to_r_partite(g, 3)
        types = classify_nonedge_types(g, 3, col, T)
        assert types and all(e.types == {1} for e in types)

    def test_eight_vertex_fixture(self):
        # 4-saturated on 8 vertices; peeling {1, 2} leaves classes {0,4}, {3,6}, {5,7}
        g = Graph.from_edges(8, [(0, 1), (0, 3), (0, 6), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7),
                                 (2, 4), (2, 6), (3, 4), (4, 5), (4, 7), (5, 6), (6, 7)])
        part, tset = [[0, 4], [3, 6], [5, 7]], [1, 2]
        assert is_saturated(g, 3)
        types = {(e.u, e.v): set(e.types) for e in classify_nonedge_types(g, 3, part, tset)}
        brute = {}
        for i, j in combinations(range(3), 2):
            for u in part[i]:
                for v in part[j]:
                    if g.has_edge(u, v):
                        continue
                    h = g.with_edges([(u, v)])
                    brute[(min(u, v), max(u, v))] = {
                        sum(x in tset for x in K)
                        for K in combinations(range(8), 4)
                        if u in K and v in K and all(h.has_edge(a, b) for a, b in combinations(K, 2))
                    }
        assert types == brute
        assert types[(4, 6)] == {1, 2}

    def test_unsaturated_pair_reported(self):
        g = Graph.path(4)  # classes {0,2}, {1,3}; pair (0,3) completes nothing
        with pytest.raises(ClassificationError) as exc:
            classify_nonedge_types(g, 2, [[0, 2], [1, 3]], [])
        assert exc.value.pair == (0, 3)

    def test_bad_partition(self):
        with pytest.raises(ContractViolation):
            classify_nonedge_types(Graph.path(3), 2, [[0, 1], [2]], [])
