import random
from itertools import combinations

import pytest

from corpus import random_saturated
from turanstab.constructions import FinalParams, build_H_rst
from turanstab.graph import Graph
from turanstab.oracles import (
    brute_g_r,
    brute_g_star,
    definition_level_saturation,
    max_multipartite_bb,
    turan_admissible_size,
)
from turanstab.turan import turan_graph


def _naive_classes(g: Graph, keep: tuple[int, ...]):
    """Classes of the induced graph if it is complete multipartite, else None."""
    classes: list[list[int]] = []
    for v in keep:
        home = [c for c in classes if not g.has_edge(v, c[0])]
        if len(home) > 1:
            return None
        if home:
            home[0].append(v)
        else:
            classes.append([v])
    for c in classes:
        if any(g.has_edge(a, b) for a, b in combinations(c, 2)):
            return None
    for c, d in combinations(classes, 2):
        if not all(g.has_edge(a, b) for a in c for b in d):
            return None
    return classes


def naive(g: Graph, r: int, balanced: bool) -> int:
    for size in range(g.n, -1, -1):
        for keep in combinations(range(g.n), size):
            cl = _naive_classes(g, keep)
            if cl is None or len(cl) > r:
                continue
            sizes = [len(c) for c in cl] + [0] * (r - len(cl))
            if not balanced or max(sizes) - min(sizes) <= 1:
                return g.n - size
    raise AssertionError("unreachable")


def _random_graphs(count, seed, max_n=9):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(0, max_n)
        p = rng.random()
        yield Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


class TestExamples:
    def test_c5(self):
        assert brute_g_r(Graph.cycle(5), 2).g_value == 2
        assert brute_g_star(Graph.cycle(5), 2).g_value == 2

    def test_star(self):
        star = Graph.from_edges(6, [(0, i) for i in range(1, 6)])
        assert brute_g_r(star, 2).g_value == 0
        assert brute_g_star(star, 2).g_value == 3

    def test_turan_graphs(self):
        for r in (2, 3, 4):
            g = turan_graph(r, 11).graph
            assert brute_g_r(g, r).g_value == 0 == brute_g_star(g, r).g_value

    def test_H221_20(self):
        rep = brute_g_r(build_H_rst(FinalParams(2, 2, 1, 20)).graph, 2)
        assert rep.g_value == 5 and not rep.capped

    def test_H321_49(self):
        rep = brute_g_r(build_H_rst(FinalParams(3, 2, 1, 49)).graph, 3, cap=60)
        assert rep.g_value == 11 and not rep.capped

    def test_witness_is_complete_multipartite(self):
        g = build_H_rst(FinalParams(2, 2, 1, 20)).graph
        rep = brute_g_r(g, 2)
        keep = tuple(sorted(v for c in rep.witness for v in c))
        assert len(keep) == rep.retained == 20 - rep.g_value
        assert len(_naive_classes(g, keep)) <= 2

    def test_cap(self):
        rep = brute_g_r(Graph.cycle(30), 2, cap=20)
        assert rep.capped and rep.g_value >= 15
        star = brute_g_star(Graph.cycle(30), 2, cap=20)
        assert star.capped and star.g_value == 30
        assert "capped = true" in rep.to_text()

    def test_admissible_size(self):
        assert turan_admissible_size([5, 1], 2) == 3
        assert turan_admissible_size([3, 3, 3], 3) == 9
        assert turan_admissible_size([4], 2) == 1
        assert turan_admissible_size([], 3) == 0


class TestCrossChecks:
    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_against_naive_enumeration(self, r):
        for g in _random_graphs(150, 10 + r):
            assert brute_g_r(g, r).g_value == naive(g, r, balanced=False)
            assert brute_g_star(g, r).g_value == naive(g, r, balanced=True)

    def test_sum_objective_matches_branching_oracle(self):
        # two independent search routes for g_r
        for g in _random_graphs(150, 21, max_n=12):
            for r in (2, 3):
                value, classes, _, capped = max_multipartite_bb(g, r, sum)
                assert not capped
                assert g.n - value == brute_g_r(g, r).g_value

    def test_saturated_instances(self):
        for seed in range(20):
            g = random_saturated(16, 2, seed)
            value, _, _, _ = max_multipartite_bb(g, 2, sum)
            assert g.n - value == brute_g_r(g, 2).g_value


class TestMonotonicity:
    def test_vertex_deletion_and_ordering(self):
        rng = random.Random(7)
        checked = 0
        for g in _random_graphs(200, 33, max_n=11):
            r = rng.choice((2, 3))
            gr = brute_g_r(g, r).g_value
            assert gr <= brute_g_star(g, r).g_value
            if g.n:
                v = rng.randrange(g.n)
                h, _ = g.induced([u for u in range(g.n) if u != v])
                gh = brute_g_r(h, r).g_value
                assert gr - 1 <= gh <= gr
            checked += 1
        assert checked == 200


def test_definition_level_refuses_large():
    with pytest.raises(ValueError):
        definition_level_saturation(Graph.empty(70), 2)
