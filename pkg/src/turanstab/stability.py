"""Decompose a K_{r+1}-saturated graph into a large complete r-partite part.

Pipeline: peel minimum-degree vertices until the rest is r-partite (set T),
classify every cross-class non-edge by how many vertices of T its completing
clique uses, then cover each type with the recursive covering-set routines
``cover_saturating_pairs`` / ``cover_typed_pairs``.  Removing T and the covers
leaves a complete r-partite graph, recorded in a :class:`StabilityCertificate`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .graph import (
    Graph,
    PartitionedGraph,
    as_mask,
    enumerate_cliques,
    greedy_clique_matching,
    has_clique,
    iter_bits,
    to_tuple,
)
from .turan import (
    ContractViolation,
    classify_nonedge_types,
    multipartite_classes,
    r_coloring,
    saturating_edges,
    turan_number,
    unsaturated_pair,
)

__all__ = [
    "CoverageAuditError",
    "LedgerEntry",
    "StabilityCertificate",
    "CertificateCheck",
    "peel_to_r_partite",
    "averaging_subset",
    "cover_saturating_pairs",
    "cover_typed_pairs",
    "stability_decompose",
    "validate_certificate",
    "format_certificate",
    "parse_certificate",
    "peel_bound_holds",
]


class CoverageAuditError(AssertionError):
    """An internal audit failed; this means a bug, never bad input."""


@dataclass(frozen=True)
class LedgerEntry:
    label: str
    R: tuple[int, ...]
    covered: int
    bound_exponent: Fraction

    @property
    def empirical_constant(self) -> float:
        if not self.R:
            return 0.0
        return self.covered / len(self.R) ** float(self.bound_exponent)


@dataclass
class _Audit:
    enabled: bool = True
    count: int = 0

    def check(self, ok: bool, message: str) -> None:
        if not self.enabled:
            return
        self.count += 1
        if not ok:
            raise CoverageAuditError(message)


# peeling ------------------------------------------------------------------------

def peel_to_r_partite(g: Graph, r: int, budget: int | None = None) -> tuple[tuple[int, ...], list[int]]:
    """Remove minimum-degree vertices (lowest index on ties) until the rest is r-partite.

    Returns the removed vertices in order and the proper r-colouring of the
    rest as class masks.  Each removal from a non-r-partite residual is
    checked against the Andrásfai-Erdős-Sós degree threshold.
    """
    if has_clique(g, r + 1):
        raise ContractViolation(f"graph contains K_{r + 1}")
    kw = {} if budget is None else {"budget": budget}
    alive = g.vertex_mask
    removed = []
    while True:
        col = r_coloring(g, r, alive, **kw)
        if col is not None:
            return tuple(removed), col
        size = alive.bit_count()
        v = min(iter_bits(alive), key=lambda x: ((g.adj[x] & alive).bit_count(), x))
        d = (g.adj[v] & alive).bit_count()
        if d * (3 * r - 1) > (3 * r - 4) * size:
            raise CoverageAuditError(f"minimum degree {d} exceeds the threshold on {size} vertices")
        removed.append(v)
        alive &= ~(1 << v)


def peel_bound_holds(r: int, n: int, m: int, peeled: int) -> bool | None:
    """|T| < 10 r^2 (3r-1) (m / n^2) n, cross-multiplied; None outside the range it applies to.

    With m = 0 the graph is r-partite and nothing may be peeled.
    """
    if n < 4 * r or 30 * r ** 3 * m > n * n or m < 0:
        return None
    if m == 0:
        return peeled == 0
    return peeled * n < 10 * r * r * (3 * r - 1) * m


# averaging -------------------------------------------------------------------------

def averaging_subset(g: Graph, v1, v2, t: int, complement: bool = False) -> tuple[int, ...]:
    """The t vertices of v2 with most neighbours in v1 (ties by index).

    Any such W satisfies e(v1, W) |v2| >= e(v1, v2) t.  With ``complement``
    the count is of non-neighbours instead.
    """
    m1, m2 = as_mask(v1), as_mask(v2)
    size = m2.bit_count()
    if not 1 <= t <= size:
        raise ValueError(f"t must lie in [1, {size}]")

    def deg(v: int) -> int:
        nb = g.adj[v] & m1
        return (m1 & ~nb & ~(1 << v)).bit_count() if complement else nb.bit_count()

    ranked = sorted(iter_bits(m2), key=lambda v: (-deg(v), v))
    return tuple(sorted(ranked[:t]))


# covering sets -----------------------------------------------------------------------

def _covered_in(pg: PartitionedGraph, R: int) -> int:
    """Cross-class non-edges of pg touching R."""
    g, u = pg.graph, pg.vertex_mask
    total = 0
    inner = 0
    for c in pg.classes:
        for v in iter_bits(c & R):
            miss = u & ~c & ~g.adj[v]
            total += miss.bit_count()
            inner += (miss & R).bit_count()
    return total - inner // 2


def _nonedges_between(g: Graph, Y: int, S: int) -> int:
    return sum((S & ~g.adj[y]).bit_count() for y in iter_bits(Y))


def _covers(R: int, pairs: Iterable[tuple[int, int]]) -> tuple[int, int] | None:
    for u, v in pairs:
        if not (R >> u & 1 or R >> v & 1):
            return u, v
    return None


def _cover_pairs(pg: PartitionedGraph, a: int, b: int, k: int, audit: _Audit, ledger: list) -> int:
    g = pg.graph
    A, B = pg.classes[a], pg.classes[b]
    sat = saturating_edges(pg, k, a, b)
    if not sat:
        return 0
    smaller = A if A.bit_count() <= B.bit_count() else B
    if k == 2:
        return smaller

    xs = [i for i in range(len(pg.classes)) if i not in (a, b)]
    x_pg = PartitionedGraph(g, tuple(pg.classes[i] for i in xs))
    match = greedy_clique_matching(x_pg, k - 2)
    Y = match.vertex_mask
    L = len(match)
    audit.check(L > 0, "saturating edge present but the clique matching is empty")

    for K in match.cliques:
        common = pg.vertex_mask
        for w in K:
            common &= g.adj[w]
        if 2 * (common & A).bit_count() > A.bit_count() and 2 * (common & B).bit_count() > B.bit_count():
            R = smaller
            audit.check(_covers(R, sat) is None, "smaller side fails to cover")
            return R

    na, nb = _nonedges_between(g, Y, A), _nonedges_between(g, Y, B)
    side = A if na * B.bit_count() >= nb * A.bit_count() else B
    n_side = na if side == A else nb
    audit.check(
        n_side * 4 * (k - 2) >= side.bit_count() * Y.bit_count(),
        f"chosen side has {n_side} non-edges to Y, below |side||Y|/(4(k-2))",
    )

    u = pg.vertex_mask
    family = [g.adj[y] & u for y in iter_bits(Y)]
    R0 = _cover_typed(pg, a, b, sat, family, 1, k, audit, [])
    size0, size_side = R0.bit_count(), side.bit_count()
    if size0 > size_side:
        R = side if L ** (k - 1) >= size_side else R0
    elif size0 == 0:
        R = R0
    else:
        R0p = as_mask(averaging_subset(g, Y, side, size0, complement=True))
        audit.check(
            _nonedges_between(g, Y, R0p) * size_side >= n_side * size0,
            "averaging subset below the mean",
        )
        R = R0 | R0p
    miss = _covers(R, sat)
    audit.check(miss is None, f"part-1 cover misses saturating non-edge {miss}")
    return R


def _cover_typed(
    pg: PartitionedGraph,
    a: int,
    b: int,
    E: Sequence[tuple[int, int]],
    family: Sequence[int],
    t: int,
    k: int,
    audit: _Audit,
    ledger: list,
    label: str = "",
) -> int:
    g = pg.graph
    q = k - t
    if q < 2:
        raise ValueError("need k - t >= 2")
    for h in family:
        audit.check(not has_clique(g, q, h), f"family member is not K_{q}-free")
    if not E:
        return 0
    if audit.enabled:
        for u, v in E:
            if not any(h >> u & 1 and h >> v & 1 and has_clique(g, q - 2, g.adj[u] & g.adj[v] & h) for h in family):
                raise ContractViolation(f"non-edge {(u, v)} is not {q}-saturating in any family member")

    xs = [i for i in range(len(pg.classes)) if i not in (a, b)]
    A, B = pg.classes[a], pg.classes[b]
    exponent = Fraction(q, q - 1)
    covered = 0
    stage = 0
    for h in family:
        for chosen in combinations(xs, q - 2):
            stage += 1
            classes = (A & h & ~covered, B & h & ~covered) + tuple(pg.classes[i] & h for i in chosen)
            sub = PartitionedGraph(g, classes)
            R = _cover_pairs(sub, 0, 1, q, audit, [])
            if R:
                live = pg.restrict(~covered)
                ledger.append(LedgerEntry(f"{label}stage{stage}", to_tuple(R), _covered_in(live, R), exponent))
            covered |= R
    miss = _covers(covered, E)
    audit.check(miss is None, f"part-2 cover misses {miss}")
    return covered


def cover_saturating_pairs(pg: PartitionedGraph, a: int, b: int, k: int, audit: bool = True) -> tuple[tuple[int, ...], list[LedgerEntry]]:
    """Vertices of classes a, b covering every k-saturating (a, b) non-edge.

    ``pg`` must be k-partite (empty classes allowed) and K_k-free.
    """
    if len(pg.classes) != k:
        raise ValueError(f"expected {k} classes, got {len(pg.classes)}")
    if not pg.is_independent_classes() or has_clique(pg.graph, k, pg.vertex_mask):
        raise ContractViolation(f"graph is not a K_{k}-free {k}-partite graph")
    R = _cover_pairs(pg, a, b, k, _Audit(audit), [])
    entry = LedgerEntry("pairs", to_tuple(R), _covered_in(pg, R), Fraction(k, k - 1))
    return to_tuple(R), [entry] if R else []


def cover_typed_pairs(
    pg: PartitionedGraph,
    a: int,
    b: int,
    E: Iterable[tuple[int, int]],
    family: Iterable[int | Iterable[int]],
    t: int,
    audit: bool = True,
) -> tuple[tuple[int, ...], list[LedgerEntry]]:
    """Cover the non-edges E by covering saturating pairs inside each family member, one class choice at a time.

    Family members are vertex sets; each induces a K_{k-t}-free subgraph in
    which every element of E must be (k-t)-saturating.
    """
    k = len(pg.classes)
    if not pg.is_independent_classes():
        raise ContractViolation("classes are not independent")
    ledger: list[LedgerEntry] = []
    E = [(min(e), max(e)) for e in E]
    R = _cover_typed(pg, a, b, E, [as_mask(h) & pg.vertex_mask for h in family], t, k, _Audit(audit), ledger)
    return to_tuple(R), ledger


# the full decomposition ---------------------------------------------------------------

@dataclass
class StabilityCertificate:
    r: int
    n: int
    edges: int
    T: tuple[int, ...]
    partition: tuple[tuple[int, ...], ...]
    S: dict[tuple[int, int, int], tuple[int, ...]]
    ledger: list[LedgerEntry] = field(default_factory=list)
    audits: int = 0

    @property
    def removed_total(self) -> int:
        return len(self.T) + sum(len(s) for s in self.S.values())

    @property
    def m(self) -> int:
        return turan_number(self.r, self.n) - self.edges

    @property
    def eps(self) -> Fraction:
        return Fraction(self.m, self.n * self.n) if self.n else Fraction(0)

    @property
    def outside_regime(self) -> bool:
        """True when eps > n^(-(r-1)/r), where the guarantee is trivial."""
        return self.m ** self.r > self.n ** (self.r + 1)

    @property
    def c_ratio(self) -> float | None:
        """removed_total / (eps n^((r-1)/r) n)."""
        if self.m <= 0:
            return None
        return self.removed_total / (float(self.eps) * self.n ** ((self.r - 1) / self.r) * self.n)

    @property
    def peel_ratio(self) -> float | None:
        if self.m <= 0:
            return None
        return len(self.T) / (float(self.eps) * self.n)

    def removed_mask(self) -> int:
        out = as_mask(self.T)
        for s in self.S.values():
            out |= as_mask(s)
        return out


def stability_decompose(g: Graph, r: int, audit: bool = True, budget: int | None = None) -> StabilityCertificate:
    if r < 2:
        raise ValueError("need r >= 2")
    if has_clique(g, r + 1):
        raise ContractViolation(f"graph contains K_{r + 1}")
    bad = unsaturated_pair(g, r)
    if bad is not None:
        raise ContractViolation(f"graph is not {r + 1}-saturated: adding {bad} creates no K_{r + 1}")
    aud = _Audit(audit)

    T, col = peel_to_r_partite(g, r, budget)
    tmask = as_mask(T)
    types = classify_nonedge_types(g, r, col, tmask)
    cliques = {t: [as_mask(K) for K in enumerate_cliques(g, t, within=tmask)] for t in range(1, r)}

    residual = g.vertex_mask & ~tmask
    ledger: list[LedgerEntry] = []
    S: dict[tuple[int, int, int], tuple[int, ...]] = {}
    for i, j in combinations(range(r), 2):
        for t in range(1, r):
            A, B = col[i] & residual, col[j] & residual
            E = [
                (e.u, e.v) for e in types
                if t in e.types and residual >> e.u & 1 and residual >> e.v & 1
                and (col[i] >> e.u & 1 and col[j] >> e.v & 1 or col[j] >> e.u & 1 and col[i] >> e.v & 1)
            ]
            if not E:
                continue
            others = tuple(col[l] for l in range(r) if l not in (i, j))
            local = PartitionedGraph(g, (A, B) + others + (0,))
            host = local.vertex_mask
            family = [host & _common(g, K) for K in cliques[t]]
            stages: list[LedgerEntry] = []
            R = _cover_typed(local, 0, 1, E, family, t, r + 1, aud, stages, label=f"t{t}:{i}-{j}:")
            # charge each stage against the global residual complement at its removal time
            for st in stages:
                live = PartitionedGraph(g, tuple(c & residual for c in col))
                rm = as_mask(st.R) & residual
                ledger.append(LedgerEntry(st.label, to_tuple(rm), _covered_in(live, rm), st.bound_exponent))
                residual &= ~rm
            aud.check(R & ~(A | B) == 0, "cover leaves the pair's classes")
            S[(t, i, j)] = to_tuple(R)

    classes = multipartite_classes(g, residual)
    aud.check(classes is not None and len(classes) <= r, "residual is not complete r-partite")
    return StabilityCertificate(
        r, g.n, g.m, T, tuple(to_tuple(c) for c in col), S, ledger, aud.count,
    )


def _common(g: Graph, K: int) -> int:
    out = g.vertex_mask
    for w in iter_bits(K):
        out &= g.adj[w]
    return out


# validation and serialization ---------------------------------------------------------

@dataclass
class CertificateCheck:
    reasons: list[str]

    @property
    def ok(self) -> bool:
        return not self.reasons

    def __bool__(self) -> bool:
        return self.ok


def validate_certificate(g: Graph, c: StabilityCertificate) -> CertificateCheck:
    """Independent re-check of a certificate against its graph."""
    reasons = []
    if c.n != g.n:
        reasons.append(f"certificate is for n={c.n}, graph has n={g.n}")
        return CertificateCheck(reasons)
    seen = 0
    sets = [("T", c.T)] + [(f"S{key}", s) for key, s in sorted(c.S.items())]
    for name, s in sets:
        m = as_mask(s)
        if m & ~g.vertex_mask:
            reasons.append(f"{name} contains vertices outside the graph")
        if m & seen:
            reasons.append(f"{name} overlaps an earlier removal set at {to_tuple(m & seen)}")
        seen |= m
    removed = seen & g.vertex_mask

    part = [as_mask(p) for p in c.partition]
    if len(part) > c.r:
        reasons.append(f"partition has {len(part)} classes, more than r={c.r}")
    cover = 0
    for i, p in enumerate(part):
        if p & cover:
            reasons.append(f"partition class {i} overlaps another")
        cover |= p
        if g.edge_count(p):
            reasons.append(f"partition class {i} is not independent")
    if cover | as_mask(c.T) != g.vertex_mask or cover & as_mask(c.T):
        reasons.append("partition and T do not split the vertex set")
    for (t, i, j), s in c.S.items():
        if not 0 <= i < len(part) or not 0 <= j < len(part):
            reasons.append(f"S{(t, i, j)} names a missing class")
        elif as_mask(s) & ~(part[i] | part[j]):
            reasons.append(f"S{(t, i, j)} leaves classes {i} and {j}")

    rest = g.vertex_mask & ~removed
    for i, j in combinations(range(len(part)), 2):
        for u in iter_bits(part[i] & rest):
            for v in iter_bits(part[j] & rest & ~g.adj[u]):
                reasons.append(f"uncovered non-edge ({min(u, v)}, {max(u, v)}) between classes {i} and {j}")
    classes = multipartite_classes(g, rest)
    if classes is None:
        reasons.append("residual is not complete multipartite")
    elif len(classes) > c.r:
        reasons.append(f"residual has {len(classes)} classes, more than r={c.r}")
    return CertificateCheck(reasons)


def _verts(vs) -> str:
    return " ".join(map(str, vs))


def format_certificate(c: StabilityCertificate) -> str:
    lines = [
        "certificate v1",
        f"r = {c.r}",
        f"n = {c.n}",
        f"edges = {c.edges}",
        f"m = {c.m}",
        f"eps = {c.eps}",
        f"outside_regime = {str(c.outside_regime).lower()}",
        f"removed_total = {c.removed_total}",
        f"c_ratio = {'-' if c.c_ratio is None else format(c.c_ratio, '.6f')}",
        f"audits = {c.audits}",
        f"T = {_verts(c.T)}",
    ]
    lines += [f"class {i} = {_verts(p)}" for i, p in enumerate(c.partition)]
    lines += [f"S {t} {i} {j} = {_verts(s)}" for (t, i, j), s in sorted(c.S.items())]
    lines += [f"ledger {e.label} {e.covered} {e.bound_exponent} = {_verts(e.R)}" for e in c.ledger]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> StabilityCertificate:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "certificate v1":
        raise ValueError("missing 'certificate v1' header")
    scalars: dict[str, str] = {}
    partition: list[tuple[int, ...]] = []
    S: dict[tuple[int, int, int], tuple[int, ...]] = {}
    ledger: list[LedgerEntry] = []
    for lineno, ln in enumerate(lines[1:], start=2):
        key, sep, val = ln.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        head = key.split()
        try:
            verts = tuple(int(x) for x in val.split()) if head[0] in ("T", "class", "S", "ledger") else ()
            if head[0] == "class":
                if int(head[1]) != len(partition):
                    raise ValueError("classes out of order")
                partition.append(verts)
            elif head[0] == "S":
                S[(int(head[1]), int(head[2]), int(head[3]))] = verts
            elif head[0] == "ledger":
                ledger.append(LedgerEntry(head[1], verts, int(head[2]), Fraction(head[3])))
            elif head[0] == "T":
                scalars["T"] = val
            else:
                scalars[head[0]] = val.strip()
        except (ValueError, IndexError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    try:
        return StabilityCertificate(
            int(scalars["r"]), int(scalars["n"]), int(scalars["edges"]),
            tuple(int(x) for x in scalars.get("T", "").split()),
            tuple(partition), S, ledger, int(scalars.get("audits", 0)),
        )
    except KeyError as exc:
        raise ValueError(f"missing field {exc}") from None
