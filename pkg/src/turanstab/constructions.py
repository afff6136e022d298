"""Deterministic extremal families: the recursive auxiliary graphs and the final
saturated graphs built by deleting copies of them from a Turán graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import (
    Graph,
    PartitionedGraph,
    as_mask,
    find_clique,
    iter_bits,
    max_independent_set,
    r_partite_complement,
    to_tuple,
    _first_clique,
)
from .turan import ContractViolation, turan_class_sizes, turan_number

__all__ = [
    "ParameterError",
    "AuxParams",
    "FinalParams",
    "FinalGraph",
    "PartResult",
    "AuxPropertyReport",
    "build_aux",
    "build_G_rs",
    "aux_vertex_count",
    "aux_edge_count",
    "verify_aux_properties",
    "build_H_rst",
    "h_edge_lower_bound_holds",
    "tightness_params",
    "maximal_completion",
    "bipartite_perfect_matching",
]


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class AuxParams:
    r: int
    s_list: tuple[int, ...]

    def __post_init__(self):
        if self.r < 2:
            raise ParameterError("r must be at least 2")
        if len(self.s_list) != self.r - 1:
            raise ParameterError(f"need r-1={self.r - 1} multiplicities, got {len(self.s_list)}")
        if any(s < 2 for s in self.s_list):
            raise ParameterError("all multiplicities must be at least 2")


@dataclass(frozen=True)
class FinalParams:
    r: int
    s: int
    t: int
    n: int

    def __post_init__(self):
        if self.r < 2 or self.s < 2 or self.t < 1:
            raise ParameterError("need r >= 2, s >= 2, t >= 1")
        need = 4 * self.s ** (self.r - 1) * self.t * self.r + self.t
        if self.n < need:
            raise ParameterError(f"n >= 4 s^(r-1) t r + t violated: n={self.n} < {need}")


def maximal_completion(g: Graph, k: int, candidate_pairs=None) -> Graph:
    """Add candidate pairs in lexicographic order whenever no K_k appears.

    The result contains ``g``, is K_k-free, and every candidate pair is either
    an edge or would create a K_k.  ``candidate_pairs`` defaults to all pairs.
    """
    if find_clique(g, k) is not None:
        raise ContractViolation(f"input already contains K_{k}")
    adj = list(g.adj)
    pairs = g.non_edges() if candidate_pairs is None else sorted((min(p), max(p)) for p in candidate_pairs)
    for u, v in pairs:
        if u == v or adj[u] >> v & 1:
            continue
        if _first_clique(adj, adj[u] & adj[v], k - 2) is not None:
            continue
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(g.n, tuple(adj))


# auxiliary family ----------------------------------------------------------

def build_aux(p: AuxParams | tuple[int, Sequence[int]]) -> PartitionedGraph:
    """G_{r, s_1..s_{r-1}}: K_{s1,s1}, then repeatedly s copies plus a new class.

    Vertex numbering: the copies occupy consecutive blocks in order, the new
    class comes last.
    """
    if not isinstance(p, AuxParams):
        p = AuxParams(p[0], tuple(p[1]))
    s1 = p.s_list[0]
    edges = [(u, s1 + v) for u in range(s1) for v in range(s1)]
    n = 2 * s1
    classes = [list(range(s1)), list(range(s1, 2 * s1))]
    for s in p.s_list[1:]:
        new_edges = []
        new_classes = [[] for _ in range(len(classes) + 1)]
        for q in range(s):
            off = q * n
            new_edges.extend((u + off, v + off) for u, v in edges)
            for i, c in enumerate(classes):
                new_classes[i].extend(v + off for v in c)
        xs = [s * n + p_ for p_ in range(s)]
        new_classes[-1] = xs
        for p_, x in enumerate(xs):
            for q in range(s):
                if q != p_:
                    new_edges.extend((q * n + y, x) for y in range(n))
        edges, classes, n = new_edges, new_classes, s * n + s
    g = Graph.from_edges(n, edges)
    return PartitionedGraph.from_sets(g, classes)


def build_G_rs(r: int, s: int) -> PartitionedGraph:
    if r < 2 or s < 2:
        raise ParameterError("need r >= 2 and s >= 2")
    return build_aux(AuxParams(r, (2 * s,) + (s,) * (r - 2)))


def aux_vertex_count(r: int, s: int) -> int:
    """Closed form s/(s-1) (4 s^(r-1) - 3 s^(r-2) - 1)."""
    num = s * (4 * s ** (r - 1) - 3 * s ** (r - 2) - 1)
    assert num % (s - 1) == 0
    return num // (s - 1)


def aux_edge_count(r: int, s: int) -> int:
    """Edge count from e(G_{2,s}) = 4s^2 and e(G_{r+1}) = s e(G_r) + s(s-1)|G_r|."""
    e, v = 4 * s * s, 4 * s
    for _ in range(2, r):
        e, v = s * e + s * (s - 1) * v, s + s * v
    return e


# structural audit of G_{r,s} -------------------------------------------

@dataclass
class PartResult:
    part: int
    name: str
    passed: bool
    detail: str = ""
    witness: object = None


@dataclass
class AuxPropertyReport:
    r: int
    s: int
    parts: list[PartResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return len(self.parts) == 10 and all(p.passed for p in self.parts)

    def summary(self) -> str:
        ok = sum(p.passed for p in self.parts)
        return f"G_{{{self.r},{self.s}}}: {ok}/{len(self.parts)} parts pass"


def bipartite_perfect_matching(g: Graph, left: Sequence[int], right: Sequence[int]) -> dict[int, int] | None:
    """Perfect matching between equal-size ``left`` and ``right`` (Kuhn's algorithm)."""
    if len(left) != len(right):
        return None
    rmask = as_mask(right)
    match_r: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for v in iter_bits(g.adj[u] & rmask):
            if v in seen:
                continue
            seen.add(v)
            if v not in match_r or augment(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    for u in left:
        if not augment(u, set()):
            return None
    return {u: v for v, u in match_r.items()}


def verify_aux_properties(r: int, s: int, pg: PartitionedGraph | None = None) -> AuxPropertyReport:
    """Check the ten listed properties of G_{r,s} exactly."""
    pg = pg or build_G_rs(r, s)
    g = pg.graph
    comp = r_partite_complement(pg)
    rep = AuxPropertyReport(r, s)
    add = rep.parts.append

    # 1. r-partite with the recorded partition
    cover = pg.vertex_mask == g.vertex_mask
    indep = pg.is_independent_classes()
    add(PartResult(1, "r-partite partition", cover and indep and len(pg.classes) == r,
                   f"classes={len(pg.classes)} cover={cover} independent={indep}"))

    # 2. complement is K_r-free
    kr = find_clique(comp, r)
    add(PartResult(2, "complement K_r-free", kr is None, witness=kr))

    # 3. complement minus each class contains K_{r-1}
    missing = []
    for i, c in enumerate(pg.classes):
        if find_clique(comp, r - 1, g.vertex_mask & ~c) is None:
            missing.append(i)
    add(PartResult(3, "complement minus A_i has K_{r-1}", not missing, witness=missing or None))

    # 4. each cross-class edge of G is r-saturating in the complement
    bad = None
    for u, v in g.edges():
        if find_clique(comp, r - 2, comp.adj[u] & comp.adj[v]) is None:
            bad = (u, v)
            break
    add(PartResult(4, "cross edges r-saturating in complement", bad is None, witness=bad))

    # 5. vertex count
    closed = aux_vertex_count(r, s)
    series = sum(s**i for i in range(1, r - 1)) + 4 * s ** (r - 1)
    ok5 = g.n == closed == series and g.n * (s - 1) <= 4 * s**r
    add(PartResult(5, "vertex count", ok5, f"|G|={g.n} formula={closed} series={series}"))

    # 6. edge count bound
    e = g.m
    add(PartResult(6, "e <= 4(r-1)s^r", e <= 4 * (r - 1) * s**r, f"e={e} bound={4 * (r - 1) * s**r}"))

    # 7-8. class sizes
    sizes = sorted((c.bit_count() for c in pg.classes), reverse=True)
    big = 2 * s ** (r - 1)
    add(PartResult(7, "two largest classes have size 2s^(r-1)", sizes[:2] == [big, big], f"sizes={sizes}"))
    add(PartResult(8, "other classes <= s^(r-2)", all(x <= s ** (r - 2) for x in sizes[2:]), f"sizes={sizes}"))

    # 9. perfect matching between the two largest classes
    order = sorted(range(len(pg.classes)), key=lambda i: (-pg.classes[i].bit_count(), i))
    left, right = to_tuple(pg.classes[order[0]]), to_tuple(pg.classes[order[1]])
    mt = bipartite_perfect_matching(g, left, right)
    add(PartResult(9, "perfect matching between largest classes", mt is not None, witness=mt))

    # 10. independence number
    alpha, wit = max_independent_set(g, cap=g.n)
    add(PartResult(10, "alpha <= |G| - 2s^(r-1)", alpha <= g.n - big, f"alpha={alpha} bound={g.n - big}", wit))
    return rep


# final construction ----------------------------------------------------------

@dataclass(frozen=True)
class FinalGraph:
    """H_{r,s,t}(n) plus the bookkeeping needed to audit it."""

    params: FinalParams
    pg: PartitionedGraph  # classes A_1..A_r, A_{r+1}
    copies: tuple[int, ...]  # vertex mask of each embedded copy H_p
    copy_classes: tuple[tuple[int, ...], ...]
    extra: tuple[int, ...]  # Y_i masks
    apex: tuple[int, ...]  # x_1..x_t

    @property
    def graph(self) -> Graph:
        return self.pg.graph


def build_H_rst(p: FinalParams | tuple[int, int, int, int]) -> FinalGraph:
    """Balanced r-partite graph minus t disjoint copies of G_{r,s}, one apex per copy.

    Numbering: copies H_1..H_t in consecutive blocks, then Y_1..Y_r, then
    x_1..x_t.  Ceil-sized classes go to the lowest class indices.
    """
    if not isinstance(p, FinalParams):
        p = FinalParams(*p)
    r, s, t, n = p.r, p.s, p.t, p.n
    aux = build_G_rs(r, s)
    h = aux.graph.n
    targets = turan_class_sizes(r, n - t)
    per_copy = [c.bit_count() for c in aux.classes]
    ells = [targets[i] - t * per_copy[i] for i in range(r)]
    if any(x <= 0 for x in ells):
        raise ParameterError(f"padding sizes must be positive, got {ells}")

    classes = [0] * (r + 1)
    copies, copy_classes = [], []
    removed = []
    for q in range(t):
        off = q * h
        copies.append(((1 << h) - 1) << off)
        copy_classes.append(tuple(c << off for c in aux.classes))
        for i, c in enumerate(aux.classes):
            classes[i] |= c << off
        removed.extend((u + off, v + off) for u, v in aux.graph.edges())
    nxt = t * h
    extra = []
    for i, ell in enumerate(ells):
        m = ((1 << ell) - 1) << nxt
        extra.append(m)
        classes[i] |= m
        nxt += ell
    apex = tuple(range(nxt, nxt + t))
    classes[r] = as_mask(apex)
    assert nxt + t == n

    adj = [0] * n
    core = 0
    for c in classes[:r]:
        core |= c
    for c in classes[:r]:
        for v in iter_bits(c):
            adj[v] = core & ~c
    for u, v in removed:
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
    for q, x in enumerate(apex):
        adj[x] |= copies[q]
        for v in iter_bits(copies[q]):
            adj[v] |= 1 << x
    g = Graph(n, tuple(adj))
    inner = [(apex[a], apex[b]) for a in range(t) for b in range(a + 1, t)]
    g = maximal_completion(g, r + 1, inner)
    return FinalGraph(p, PartitionedGraph(g, tuple(classes)), tuple(copies), tuple(copy_classes),
                      tuple(extra), apex)


def h_edge_lower_bound_holds(r: int, s: int, t: int, n: int, e: int) -> bool:
    """e >= t_r(n) - (r-1) t n / r - 4 (r-1) t s^r, multiplied through by r."""
    return r * e >= r * turan_number(r, n) - (r - 1) * t * n - 4 * r * (r - 1) * t * s**r


# parameter selection ------------------------------------------------------------

def _iroot_floor(x: Fraction, r: int) -> int:
    """Largest integer s with s**r <= x (x >= 0)."""
    if x < 0:
        raise ValueError("negative radicand")
    lo, hi = 0, 1
    while Fraction(hi) ** r <= x:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if Fraction(mid) ** r <= x:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class TightnessChoice:
    s: int
    t: int
    c: Fraction
    c_prime: Fraction
    n0: Fraction


def tightness_params(r: int, eps, n: int, m) -> tuple[int, int]:
    """(s, t) = (floor((c n)^(1/r)), floor(c' m / n)) with c = eps/(4(r-1)), c' = 1/((r-1)/r + eps).

    Raises :class:`ParameterError` naming the first violated inequality.
    """
    return _tightness(r, eps, n, m)[:2]


def _tightness(r: int, eps, n: int, m):
    eps, m = Fraction(eps), Fraction(m)
    if r < 2:
        raise ParameterError("r >= 2 violated")
    if eps <= 0:
        raise ParameterError("eps > 0 violated")
    c = eps / (4 * (r - 1))
    c_prime = 1 / (Fraction(r - 1, r) + eps)
    n0 = Fraction(2**r) / c
    if n < n0:
        raise ParameterError(f"n >= n0 = 2^r / c = {n0} violated (n={n})")
    if m < (Fraction(r - 1, r) + eps) * n:
        raise ParameterError(f"m >= ((r-1)/r + eps) n = {(Fraction(r - 1, r) + eps) * n} violated (m={m})")
    # m <= b0 n^((r+1)/r) with b0 = 1/(8 c' c^((r-1)/r) r), raised to the r-th power
    if (8 * c_prime * r * m) ** r * c ** (r - 1) > Fraction(n) ** (r + 1):
        raise ParameterError("m <= b0 n^((r+1)/r) with b0 = (8 c' c^((r-1)/r) r)^-1 violated")
    s = _iroot_floor(c * n, r)
    t = int(c_prime * m // n)
    if s < 2:
        raise ParameterError(f"s >= 2 violated (s={s})")
    if t < 1:
        raise ParameterError(f"t >= 1 violated (t={t})")
    if n < 4 * s ** (r - 1) * t * r + t:
        raise ParameterError("n >= 4 s^(r-1) t r + t violated")
    return s, t, TightnessChoice(s, t, c, c_prime, n0)
