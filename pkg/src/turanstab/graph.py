"""Bitset-backed simple graphs and the clique / independent-set searches on them.

Vertex sets are passed around internally as Python ints used as bitmasks
(bit ``v`` set means vertex ``v`` is present).  Public helpers accept either a
mask or any iterable of vertex indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

__all__ = [
    "GraphError",
    "PartitionError",
    "CliqueOverflow",
    "CapExceeded",
    "Graph",
    "PartitionedGraph",
    "CliqueMatching",
    "as_mask",
    "iter_bits",
    "to_tuple",
    "find_clique",
    "has_clique",
    "enumerate_cliques",
    "max_independent_set",
    "greedy_clique_matching",
    "r_partite_complement",
    "covered_edge_count",
    "DEFAULT_MIS_CAP",
    "DEFAULT_CLIQUE_CAP",
]

DEFAULT_MIS_CAP = 40
DEFAULT_CLIQUE_CAP = 10**6


class GraphError(ValueError):
    pass


class PartitionError(GraphError):
    pass


class CliqueOverflow(RuntimeError):
    """More cliques exist than the caller allowed; ``found`` holds the first ``cap``."""

    def __init__(self, cap: int, found: list[tuple[int, ...]]):
        super().__init__(f"more than {cap} cliques")
        self.cap = cap
        self.found = found


class CapExceeded(RuntimeError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def as_mask(vertices: int | Iterable[int]) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def to_tuple(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``; ``adj[v]`` is a neighbour mask."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise GraphError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adj):
            if nb & ~full:
                raise GraphError(f"vertex {v} has a neighbour >= n")
            if nb >> v & 1:
                raise GraphError(f"self-loop at {v}")
            for u in iter_bits(nb):
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")

    # construction -------------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    # queries -------------------------------------------------------------
    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int, within: int | None = None) -> int:
        nb = self.adj[v]
        if within is not None:
            nb &= within
        return nb.bit_count()

    def edges(self, within: int | None = None) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        verts = self.vertex_mask if within is None else within
        for u in iter_bits(verts):
            for v in iter_bits(self.adj[u] & verts & ~((2 << u) - 1)):
                yield u, v

    def non_edges(self, within: int | None = None) -> Iterator[tuple[int, int]]:
        verts = self.vertex_mask if within is None else within
        for u in iter_bits(verts):
            for v in iter_bits(verts & ~self.adj[u] & ~((2 << u) - 1)):
                yield u, v

    def edge_count(self, within: int | None = None) -> int:
        if within is None:
            return sum(nb.bit_count() for nb in self.adj) // 2
        return sum((self.adj[v] & within).bit_count() for v in iter_bits(within)) // 2

    @property
    def m(self) -> int:
        return self.edge_count()

    def common_neighbors(self, vertices: Iterable[int], within: int | None = None) -> int:
        cn = self.vertex_mask if within is None else within
        for v in vertices:
            cn &= self.adj[v]
        return cn

    # derived graphs -------------------------------------------------------
    def with_edges(self, pairs: Iterable[tuple[int, int]]) -> "Graph":
        adj = list(self.adj)
        for u, v in pairs:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def without_edges(self, pairs: Iterable[tuple[int, int]]) -> "Graph":
        adj = list(self.adj)
        for u, v in pairs:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        return Graph(self.n, tuple(adj))

    def complement(self) -> "Graph":
        full = self.vertex_mask
        return Graph(self.n, tuple(full & ~nb & ~(1 << v) for v, nb in enumerate(self.adj)))

    def induced(self, vertices: int | Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Relabelled induced subgraph plus the old label of each new vertex."""
        old = to_tuple(as_mask(vertices))
        pos = {v: i for i, v in enumerate(old)}
        adj = []
        for v in old:
            m = 0
            for u in iter_bits(self.adj[v] & as_mask(old)):
                m |= 1 << pos[u]
            adj.append(m)
        return Graph(len(old), tuple(adj)), old


@dataclass(frozen=True)
class PartitionedGraph:
    """A graph with an ordered list of disjoint vertex classes (stored as masks)."""

    graph: Graph
    classes: tuple[int, ...]

    def __post_init__(self):
        seen = 0
        for i, c in enumerate(self.classes):
            if c & ~self.graph.vertex_mask:
                raise PartitionError(f"class {i} contains a vertex outside the graph")
            if c & seen:
                raise PartitionError(f"class {i} overlaps an earlier class at {to_tuple(c & seen)}")
            seen |= c

    @classmethod
    def from_sets(cls, graph: Graph, classes: Sequence[Iterable[int]]) -> "PartitionedGraph":
        return cls(graph, tuple(as_mask(c) for c in classes))

    @property
    def vertex_mask(self) -> int:
        u = 0
        for c in self.classes:
            u |= c
        return u

    @property
    def class_sets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(to_tuple(c) for c in self.classes)

    def class_of(self, v: int) -> int:
        for i, c in enumerate(self.classes):
            if c >> v & 1:
                return i
        raise KeyError(v)

    def restrict(self, mask: int) -> "PartitionedGraph":
        return PartitionedGraph(self.graph, tuple(c & mask for c in self.classes))

    def cross_adjacency(self) -> list[int]:
        """Per-vertex neighbour masks keeping only cross-class neighbours inside the classes."""
        g, u = self.graph, self.vertex_mask
        xadj = [0] * g.n
        for c in self.classes:
            for v in iter_bits(c):
                xadj[v] = g.adj[v] & u & ~c
        return xadj

    def is_independent_classes(self) -> bool:
        return all(self.graph.adj[v] & c == 0 for c in self.classes for v in iter_bits(c))


@dataclass(frozen=True)
class CliqueMatching:
    k: int
    cliques: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    @property
    def vertex_mask(self) -> int:
        m = 0
        for c in self.cliques:
            m |= as_mask(c)
        return m

    def __len__(self) -> int:
        return len(self.cliques)


# clique search --------------------------------------------------------------

def _first_clique(adj: Sequence[int], cand: int, k: int) -> tuple[int, ...] | None:
    if k == 0:
        return ()
    if cand.bit_count() < k:
        return None
    if k == 1:
        return ((cand & -cand).bit_length() - 1,)
    for v in iter_bits(cand):
        rest = cand & adj[v] & ~((2 << v) - 1)
        if rest.bit_count() >= k - 1:
            found = _first_clique(adj, rest, k - 1)
            if found is not None:
                return (v,) + found
    return None


def _all_cliques(adj: Sequence[int], cand: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    if cand.bit_count() < k:
        return
    for v in iter_bits(cand):
        rest = cand & adj[v] & ~((2 << v) - 1)
        if rest.bit_count() >= k - 1:
            for tail in _all_cliques(adj, rest, k - 1):
                yield (v,) + tail


def find_clique(g: Graph, k: int, within: int | Iterable[int] | None = None) -> tuple[int, ...] | None:
    """Lexicographically first ``k``-clique inside ``within`` (default: all of ``g``)."""
    if k < 0:
        raise ValueError("clique order must be non-negative")
    cand = g.vertex_mask if within is None else as_mask(within) & g.vertex_mask
    return _first_clique(g.adj, cand, k)


def has_clique(g: Graph, k: int, within: int | Iterable[int] | None = None) -> bool:
    return find_clique(g, k, within) is not None


def enumerate_cliques(
    g: Graph,
    k: int,
    cap: int = DEFAULT_CLIQUE_CAP,
    within: int | Iterable[int] | None = None,
) -> list[tuple[int, ...]]:
    """All ``k``-cliques in lexicographic order.

    Raises :class:`CliqueOverflow` (carrying the first ``cap`` cliques) when
    there are more than ``cap`` of them.
    """
    if k < 1:
        raise ValueError("clique order must be at least 1")
    cand = g.vertex_mask if within is None else as_mask(within) & g.vertex_mask
    out: list[tuple[int, ...]] = []
    for c in _all_cliques(g.adj, cand, k):
        if len(out) == cap:
            raise CliqueOverflow(cap, out)
        out.append(c)
    return out


# independent sets -----------------------------------------------------------

def max_independent_set(
    g: Graph, cap: int = DEFAULT_MIS_CAP, within: int | Iterable[int] | None = None
) -> tuple[int, tuple[int, ...]]:
    """Exact maximum independent set as ``(size, witness)``.

    Uses degree-0/1 reductions, connected-component splitting and
    max-degree branching with memoisation.  Refuses inputs larger than ``cap``.
    """
    verts = g.vertex_mask if within is None else as_mask(within) & g.vertex_mask
    size = verts.bit_count()
    if size > cap:
        raise CapExceeded(f"independent set search on {size} vertices needs cap >= {size} (cap={cap})")
    adj = g.adj
    memo: dict[int, int] = {}

    def component(mask: int) -> int:
        low = mask & -mask
        comp, frontier = low, low
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            frontier = nxt & mask & ~comp
            comp |= frontier
        return comp

    def solve(mask: int) -> int:
        taken = 0
        changed = True
        while changed and mask:
            changed = False
            for v in iter_bits(mask):
                if not mask >> v & 1:
                    continue
                if (adj[v] & mask).bit_count() <= 1:
                    taken |= 1 << v
                    mask &= ~(adj[v] | (1 << v))
                    changed = True
        if not mask:
            return taken
        if mask in memo:
            return taken | memo[mask]
        key = mask
        comp = component(mask)
        if comp != mask:
            best = solve(comp) | solve(mask & ~comp)
        else:
            v = max(iter_bits(mask), key=lambda x: ((adj[x] & mask).bit_count(), -x))
            with_v = (1 << v) | solve(mask & ~(adj[v] | (1 << v)))
            without_v = solve(mask & ~(1 << v))
            best = with_v if with_v.bit_count() >= without_v.bit_count() else without_v
        memo[key] = best
        return taken | best

    witness = solve(verts)
    return witness.bit_count(), to_tuple(witness)


# partite structure ----------------------------------------------------------

def greedy_clique_matching(pg: PartitionedGraph, k: int) -> CliqueMatching:
    """Greedy maximal collection of disjoint cross-class ``k``-cliques.

    Cliques only use edges between different classes, so each clique takes at
    most one vertex per class.  Lowest-index-first, hence deterministic; the
    result is maximal (no further disjoint clique exists), not maximum.
    """
    if k < 1:
        raise ValueError("clique order must be at least 1")
    xadj = pg.cross_adjacency()
    cand = pg.vertex_mask
    cliques = []
    while True:
        c = _first_clique(xadj, cand, k)
        if c is None:
            break
        cliques.append(c)
        cand &= ~as_mask(c)
    return CliqueMatching(k, tuple(cliques))


def r_partite_complement(pg: PartitionedGraph) -> Graph:
    """Graph whose edges are the cross-class non-edges of ``pg.graph``.

    Vertices outside every class are left isolated.
    """
    g, u = pg.graph, pg.vertex_mask
    adj = [0] * g.n
    for c in pg.classes:
        for v in iter_bits(c):
            adj[v] = u & ~c & ~g.adj[v]
    return Graph(g.n, tuple(adj))


def covered_edge_count(g: Graph, s: int | Iterable[int]) -> int:
    """Number of edges of ``g`` with at least one endpoint in ``s``."""
    s = as_mask(s) & g.vertex_mask
    deg = sum(g.adj[v].bit_count() for v in iter_bits(s))
    return deg - g.edge_count(within=s)
