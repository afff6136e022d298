"""Turán graphs, saturation predicates and partite-structure tests."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .graph import (
    Graph,
    GraphError,
    PartitionedGraph,
    as_mask,
    has_clique,
    iter_bits,
    _all_cliques,
)

__all__ = [
    "ContractViolation",
    "ClassificationError",
    "ColoringBudgetExceeded",
    "NonEdgeType",
    "turan_class_sizes",
    "turan_graph",
    "turan_number",
    "turan_min_degree",
    "turan_shift_check",
    "is_saturated",
    "unsaturated_pair",
    "saturating_edges",
    "r_coloring",
    "is_r_partite",
    "multipartite_classes",
    "is_complete_multipartite",
    "classify_nonedge_types",
    "DEFAULT_COLORING_BUDGET",
]

DEFAULT_COLORING_BUDGET = 2_000_000


class ContractViolation(GraphError):
    pass


class ClassificationError(ContractViolation):
    def __init__(self, pair: tuple[int, int]):
        super().__init__(f"cross-class non-edge {pair} is not saturating")
        self.pair = pair


class ColoringBudgetExceeded(RuntimeError):
    pass


def turan_class_sizes(r: int, n: int) -> list[int]:
    if r < 1 or n < 0:
        raise ValueError("need r >= 1 and n >= 0")
    q, rem = divmod(n, r)
    return [q + 1] * rem + [q] * (r - rem)


def turan_graph(r: int, n: int) -> PartitionedGraph:
    """T_r(n) with contiguous classes, larger classes first."""
    classes = []
    start = 0
    for size in turan_class_sizes(r, n):
        classes.append(((1 << size) - 1) << start)
        start += size
    full = (1 << n) - 1
    adj = [0] * n
    for c in classes:
        for v in iter_bits(c):
            adj[v] = full & ~c
    return PartitionedGraph(Graph(n, tuple(adj)), tuple(classes))


def turan_number(r: int, n: int) -> int:
    sizes = turan_class_sizes(r, n)
    return comb(n, 2) - sum(comb(s, 2) for s in sizes)


def turan_min_degree(r: int, n: int) -> int:
    return n - -(-n // r) if n else 0


def turan_shift_check(r: int, n: int, t: int) -> bool:
    """t_r(n-t) >= t_r(n) - (1 - 1/r) t n, compared after multiplying by r."""
    if r < 2 or not 0 <= t <= n:
        raise ValueError("need r >= 2 and 0 <= t <= n")
    return r * turan_number(r, n - t) >= r * turan_number(r, n) - (r - 1) * t * n


def unsaturated_pair(g: Graph, r: int) -> tuple[int, int] | None:
    """First non-edge whose addition creates no K_{r+1}, or None."""
    for u, v in g.non_edges():
        if not has_clique(g, r - 1, g.adj[u] & g.adj[v]):
            return u, v
    return None


def is_saturated(g: Graph, r: int) -> bool:
    """True iff ``g`` is K_{r+1}-free and every non-edge closes a K_{r+1}."""
    if has_clique(g, r + 1):
        return False
    return unsaturated_pair(g, r) is None


def saturating_edges(pg: PartitionedGraph, k: int, x: int, y: int) -> list[tuple[int, int]]:
    """Non-edges ``(u, v)``, u in class x and v in class y, whose addition creates a K_k.

    Only vertices inside the classes of ``pg`` count as the host graph.
    """
    if x == y:
        raise ValueError("classes must differ")
    g = pg.graph
    u_all = pg.vertex_mask
    cx, cy = pg.classes[x], pg.classes[y]
    out = []
    for u in iter_bits(cx):
        for v in iter_bits(cy & ~g.adj[u]):
            if has_clique(g, k - 2, g.adj[u] & g.adj[v] & u_all):
                out.append((u, v))
    return out


# partite structure -----------------------------------------------------------

def _two_coloring(g: Graph, verts: int) -> list[int] | None:
    color: dict[int, int] = {}
    for s in iter_bits(verts):
        if s in color:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in iter_bits(g.adj[v] & verts):
                if u not in color:
                    color[u] = 1 - color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    return None
    classes = [0, 0]
    for v, c in color.items():
        classes[c] |= 1 << v
    return classes


def r_coloring(
    g: Graph, r: int, within: int | Iterable[int] | None = None, budget: int = DEFAULT_COLORING_BUDGET
) -> list[int] | None:
    """Proper colouring of ``g[within]`` with at most ``r`` colours, as class masks.

    Returns ``None`` when none exists.  Classes are ordered by their smallest
    vertex.  Raises :class:`ColoringBudgetExceeded` if the backtracking search
    visits more than ``budget`` nodes.
    """
    verts = g.vertex_mask if within is None else as_mask(within) & g.vertex_mask
    if r < 1:
        return [] if verts == 0 else None
    if r == 1:
        return [verts] if g.edge_count(verts) == 0 else None
    if r == 2:
        col = _two_coloring(g, verts)
    else:
        col = _dsatur_coloring(g, r, verts, budget)
    if col is None:
        return None
    col = [c for c in col if c]
    col.sort(key=lambda c: c & -c)
    return col + [0] * (r - len(col))


def _dsatur_coloring(g: Graph, r: int, verts: int, budget: int) -> list[int] | None:
    adj = g.adj
    classes = [0] * r
    nodes = 0

    def pick(uncolored: int) -> tuple[int, int]:
        best, best_key = -1, None
        for v in iter_bits(uncolored):
            sat = sum(1 for c in classes if adj[v] & c)
            key = (sat, (adj[v] & uncolored).bit_count(), -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        return best, best_key[0]

    def greedy() -> bool:
        uncolored = verts
        while uncolored:
            v, sat = pick(uncolored)
            for c in range(r):
                if not adj[v] & classes[c]:
                    classes[c] |= 1 << v
                    break
            else:
                return False
            uncolored &= ~(1 << v)
        return True

    if greedy():
        return list(classes)
    classes = [0] * r

    def search(uncolored: int, used: int) -> bool:
        nonlocal nodes
        if not uncolored:
            return True
        nodes += 1
        if nodes > budget:
            raise ColoringBudgetExceeded(f"r-colouring search exceeded {budget} nodes")
        v, sat = pick(uncolored)
        if sat == r:
            return False
        for c in range(min(used + 1, r)):
            if adj[v] & classes[c]:
                continue
            classes[c] |= 1 << v
            if search(uncolored & ~(1 << v), max(used, c + 1)):
                return True
            classes[c] &= ~(1 << v)
        return False

    if search(verts, 0):
        return list(classes)
    return None


def is_r_partite(g: Graph, r: int, within: int | Iterable[int] | None = None, budget: int = DEFAULT_COLORING_BUDGET) -> bool:
    return r_coloring(g, r, within, budget) is not None


def multipartite_classes(g: Graph, within: int | Iterable[int] | None = None) -> list[int] | None:
    """Classes of ``g[within]`` if it is complete multipartite, else None.

    Complete multipartite means non-adjacency is an equivalence relation, so the
    classes are the components of the complement and each must be a clique there.
    """
    verts = g.vertex_mask if within is None else as_mask(within) & g.vertex_mask
    classes = []
    rest = verts
    while rest:
        v = (rest & -rest).bit_length() - 1
        cls = verts & ~g.adj[v]
        for u in iter_bits(cls):
            if (verts & ~g.adj[u]) != cls:
                return None
        classes.append(cls)
        rest &= ~cls
    return classes


def is_complete_multipartite(g: Graph, r: int | None = None, within: int | Iterable[int] | None = None) -> bool:
    classes = multipartite_classes(g, within)
    if classes is None:
        return False
    return r is None or len(classes) <= r


# non-edge types ----------------------------------------------------------------

@dataclass(frozen=True)
class NonEdgeType:
    u: int
    v: int
    types: frozenset[int]

    @property
    def primary(self) -> int:
        return min(self.types)


def classify_nonedge_types(
    g: Graph, r: int, partition: Sequence[Iterable[int] | int], t_set: Iterable[int] | int
) -> list[NonEdgeType]:
    """Types of every cross-class non-edge with respect to the set ``t_set``.

    A non-edge has type ``t`` when adding it creates a K_{r+1} with exactly
    ``t`` vertices in ``t_set``.  All achievable types are recorded.
    """
    tm = as_mask(t_set)
    classes = [as_mask(c) for c in partition]
    vm = 0
    for i, c in enumerate(classes):
        if c & vm or c & tm:
            raise ContractViolation(f"class {i} overlaps another class or the peel set")
        if g.edge_count(c):
            raise ContractViolation(f"class {i} is not independent")
        vm |= c
    if vm | tm != g.vertex_mask:
        raise ContractViolation("classes and peel set do not cover the vertex set")

    out = []
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            for u in iter_bits(classes[i]):
                for v in iter_bits(classes[j] & ~g.adj[u]):
                    types = _pair_types(g, r, u, v, tm, vm)
                    if 0 in types:
                        raise ContractViolation(f"non-edge {(u, v)} completes outside the peel set")
                    if not types:
                        raise ClassificationError((min(u, v), max(u, v)))
                    out.append(NonEdgeType(min(u, v), max(u, v), frozenset(types)))
    out.sort(key=lambda e: (e.u, e.v))
    return out


def _pair_types(g: Graph, r: int, u: int, v: int, tm: int, vm: int) -> set[int]:
    cn = g.adj[u] & g.adj[v]
    cn_t, cn_v = cn & tm, cn & vm
    found = set()
    for t in range(0, r):
        for k in _all_cliques(g.adj, cn_t, t):
            rest = cn_v
            for w in k:
                rest &= g.adj[w]
            if has_clique(g, r - 1 - t, rest):
                found.add(t)
                break
    return found
