import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from turanstab.constructions import build_G_rs
from turanstab.graph import (
    CapExceeded,
    CliqueOverflow,
    Graph,
    GraphError,
    PartitionError,
    PartitionedGraph,
    covered_edge_count,
    enumerate_cliques,
    find_clique,
    greedy_clique_matching,
    has_clique,
    max_independent_set,
    r_partite_complement,
)
from turanstab.turan import turan_graph


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(0, max_n))
    pairs = list(combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, k in zip(pairs, keep) if k])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


class TestGraph:
    def test_rejects_asymmetric_and_loops(self):
        with pytest.raises(GraphError):
            Graph(2, (0b10, 0))
        with pytest.raises(GraphError):
            Graph(1, (0b1,))
        with pytest.raises(GraphError):
            Graph.from_edges(3, [(0, 3)])

    def test_basic_queries(self):
        g = Graph.cycle(5)
        assert g.m == 5
        assert g.degree(0) == 2
        assert sorted(g.non_edges()) == [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]
        assert g.complement().m == 5
        h, labels = g.induced([0, 1, 2])
        assert labels == (0, 1, 2) and h.m == 2

    def test_with_without_edges(self):
        g = Graph.path(4).with_edges([(0, 3)])
        assert g == Graph.cycle(4)
        assert g.without_edges([(0, 3)]) == Graph.path(4)


class TestCliques:
    def test_k0_always_true(self):
        assert has_clique(Graph.empty(0), 0)
        assert has_clique(Graph.cycle(5), 0)

    def test_c5_triangle_free(self):
        assert not has_clique(Graph.cycle(5), 3)

    def test_turan_3_6(self):
        g = turan_graph(3, 6).graph
        assert has_clique(g, 3) and not has_clique(g, 4)
        # brute force over all triples and quadruples
        triples = [c for c in combinations(range(6), 3) if all(g.has_edge(a, b) for a, b in combinations(c, 2))]
        assert len(triples) == 8
        assert enumerate_cliques(g, 3) == sorted(triples)

    def test_counts(self):
        assert len(enumerate_cliques(Graph.complete(4), 2)) == 6
        assert len(enumerate_cliques(Graph.cycle(5), 2)) == 5

    def test_witness_is_clique(self):
        g = turan_graph(3, 7).graph
        w = find_clique(g, 3)
        assert len(w) == 3 and all(g.has_edge(a, b) for a, b in combinations(w, 2))

    def test_overflow(self):
        with pytest.raises(CliqueOverflow) as exc:
            enumerate_cliques(Graph.complete(6), 2, cap=5)
        assert len(exc.value.found) == 5

    @settings(max_examples=500, deadline=None)
    @given(graphs())
    def test_agrees_with_enumeration_and_networkx(self, g):
        omega = max((len(c) for c in nx.find_cliques(to_nx(g))), default=0)
        for k in range(1, 6):
            assert has_clique(g, k) == bool(enumerate_cliques(g, k)) == (k <= omega)


class TestIndependentSet:
    def test_examples(self):
        assert max_independent_set(Graph.complete(7))[0] == 1
        assert max_independent_set(Graph.cycle(5))[0] == 2
        assert max_independent_set(build_G_rs(2, 2).graph)[0] == 4

    def test_cap(self):
        with pytest.raises(CapExceeded, match="41"):
            max_independent_set(Graph.empty(41))

    @settings(max_examples=200, deadline=None)
    @given(graphs())
    def test_complement_clique_number(self, g):
        size, witness = max_independent_set(g)
        assert len(witness) == size
        assert all(not g.has_edge(a, b) for a, b in combinations(witness, 2))
        comp = to_nx(g.complement())
        omega = max((len(c) for c in nx.find_cliques(comp)), default=0)
        assert size == omega
        # the rest is a vertex cover of g
        rest = set(range(g.n)) - set(witness)
        assert all(u in rest or v in rest for u, v in g.edges())


class TestPartitions:
    def test_overlap_rejected(self):
        with pytest.raises(PartitionError):
            PartitionedGraph.from_sets(Graph.empty(3), [[0, 1], [1, 2]])

    def test_complement_examples(self):
        pg = turan_graph(3, 9)
        assert r_partite_complement(pg).m == 0
        pg = PartitionedGraph.from_sets(Graph.empty(5), [[0, 1], [2, 3, 4]])
        assert r_partite_complement(pg).m == 6

    def test_G32_complement_triangle_free(self):
        assert not has_clique(r_partite_complement(build_G_rs(3, 2)), 3)

    def test_complement_twice(self):
        rng = random.Random(3)
        for _ in range(50):
            n = rng.randint(2, 14)
            g = Graph.from_edges(n, [p for p in combinations(range(n), 2) if rng.random() < 0.5])
            labels = [rng.randrange(3) for _ in range(n)]
            pg = PartitionedGraph.from_sets(g, [[v for v in range(n) if labels[v] == c] for c in range(3)])
            twice = r_partite_complement(PartitionedGraph(r_partite_complement(pg), pg.classes))
            cross = {(u, v) for u, v in g.edges() if labels[u] != labels[v]}
            assert set(twice.edges()) == cross


class TestMatching:
    def test_empty(self):
        pg = PartitionedGraph.from_sets(Graph.empty(4), [[0, 1], [2, 3]])
        assert len(greedy_clique_matching(pg, 2)) == 0

    def test_two_triangles(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        pg = PartitionedGraph.from_sets(g, [[0, 3], [1, 4], [2, 5]])
        assert len(greedy_clique_matching(pg, 3)) == 2

    def test_maximal_on_turan(self):
        pg = turan_graph(3, 6)
        m = greedy_clique_matching(pg, 3)
        rest = pg.graph.vertex_mask & ~m.vertex_mask
        assert not has_clique(pg.graph, 3, rest)
        used = set()
        for c in m.cliques:
            assert len(c) == 3 and not used & set(c)
            used |= set(c)


class TestCoveredEdges:
    def test_examples(self):
        g = Graph.cycle(5)
        assert covered_edge_count(g, []) == 0
        assert covered_edge_count(g, range(5)) == 5
        assert covered_edge_count(g, [2]) == 2

    @settings(max_examples=100, deadline=None)
    @given(graphs(), st.data())
    def test_subadditive(self, g, data):
        verts = list(range(g.n))
        s1 = set(data.draw(st.lists(st.sampled_from(verts), unique=True) if verts else st.just([])))
        s2 = set(data.draw(st.lists(st.sampled_from(verts), unique=True) if verts else st.just([]))) - s1
        both = covered_edge_count(g, s1 | s2)
        split = covered_edge_count(g, s1) + covered_edge_count(g, s2)
        assert both <= split
        assert (both == split) == (not any(g.has_edge(a, b) for a in s1 for b in s2))
