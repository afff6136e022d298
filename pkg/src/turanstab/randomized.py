"""Random embedding of G_{r,s} copies into a Turán graph, then maximal completion.

Stage I is T_r(n - t) plus t isolated apex vertices.  Stage II deletes the
edges of t randomly placed copies of G_{r,s} and joins apex x_p to the image of
copy p.  Stage III adds every pair that keeps the graph K_{r+1}-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .constructions import ParameterError, bipartite_perfect_matching, build_G_rs, maximal_completion
from .graph import CapExceeded, Graph, PartitionedGraph, as_mask, has_clique, iter_bits
from .turan import is_saturated, saturating_edges, turan_class_sizes, turan_number

__all__ = [
    "RandomBuildParams",
    "ResolvedParams",
    "EmbeddingTuple",
    "RandomBuild",
    "resolve_params",
    "build_random",
    "has_biclique",
    "biclique_monte_carlo",
    "maximal_completion",
    "format_report",
    "B_const",
    "C_const",
    "EXACT_BICLIQUE_CAP",
]

EXACT_BICLIQUE_CAP = 8


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def B_const(r: int, delta) -> float:
    d = float(delta)
    return 16 / (r * r * d) * math.log(2 * math.e / d)


def C_const(r: int, delta) -> float:
    return 4 * r * B_const(r, delta)


def _iroot(n: int, r: int) -> int:
    x = int(round(n ** (1 / r)))
    while x ** r > n:
        x -= 1
    while (x + 1) ** r <= n:
        x += 1
    return x


@dataclass(frozen=True)
class RandomBuildParams:
    r: int
    delta: Fraction
    n: int
    seed: int = 0
    rounding: str = "ceil"  # how s = n^(1/r) and t = B n^(1/r) are rounded
    s: int | None = None
    t: int | None = None
    clamp: bool = True
    max_resamples: int = 8
    mc_samples: int = 2000

    def __post_init__(self):
        object.__setattr__(self, "delta", _as_fraction(self.delta))
        if self.r < 2:
            raise ParameterError("need r >= 2")
        if not 0 < self.delta < 1:
            raise ParameterError("need 0 < delta < 1")
        if self.rounding not in ("ceil", "floor"):
            raise ParameterError("rounding must be 'ceil' or 'floor'")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ParameterError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class ResolvedParams:
    r: int
    delta: Fraction
    n: int
    s: int
    t: int
    s_formula: int
    t_formula: int
    formula_regime: bool
    class_sizes: tuple[int, ...]  # of T_r(n - t)
    copy_sizes: tuple[int, ...]  # classes of G_{r,s}


def _violations(r: int, delta: Fraction, n: int, s: int, t: int) -> list[str]:
    """Every inequality the build needs, as exact integer or rational checks."""
    out = []
    if s < 2:
        out.append("s >= 2")
    if t < 1:
        out.append("t >= 1")
    if t >= n:
        out.append("t < n")
        return out
    if not delta * n > 8 * s ** (r - 1):
        out.append("delta*n/4 > 2*s^(r-1)")
    if not r * s ** (r - 2) * t < n - 1 - t:
        out.append("s^(r-2)*t < (n-1-t)/r")
    if s < 2:
        return out
    sizes = turan_class_sizes(r, n - t)
    copy = _copy_sizes(r, s)
    for i in range(r):
        room = sizes[i] - 1
        need = copy[i] if i < 2 else copy[i] * t
        if need > room:
            out.append(f"embedding fits class {i + 1} ({need} > {room})")
    return out


def _copy_sizes(r: int, s: int) -> tuple[int, ...]:
    # each recursion step multiplies every class by s and appends a class of size s
    cur = [2 * s, 2 * s]
    for _ in range(2, r):
        cur = [c * s for c in cur] + [s]
    return tuple(cur)


def resolve_params(p: RandomBuildParams) -> ResolvedParams:
    """Pick (s, t); reject or clamp when the small-n inequalities fail."""
    r, n, delta = p.r, p.n, p.delta
    root = _iroot(n, r)
    s_f = root if p.rounding == "floor" or root ** r == n else root + 1
    bt = B_const(r, delta) * n ** (1 / r)
    t_f = math.ceil(bt) if p.rounding == "ceil" else math.floor(bt)

    if p.s is not None or p.t is not None:
        s = p.s if p.s is not None else s_f
        t = p.t if p.t is not None else t_f
        bad = _violations(r, delta, n, s, t)
        if bad:
            raise ParameterError("parameters violate: " + "; ".join(bad))
        return _resolved(p, s, t, s_f, t_f)

    bad = _violations(r, delta, n, s_f, t_f)
    if not bad:
        return _resolved(p, s_f, t_f, s_f, t_f)
    if not p.clamp:
        raise ParameterError("parameters violate: " + "; ".join(bad))

    # clamp: largest s <= s_f with delta n > 8 s^(r-1), then largest feasible t <= t_f
    for s in range(max(s_f, 2), 1, -1):
        if delta * n <= 8 * s ** (r - 1):
            continue
        for t in range(min(t_f, n - 1), 0, -1):
            if not _violations(r, delta, n, s, t):
                return _resolved(p, s, t, s_f, t_f)
    raise ParameterError(f"no feasible (s, t) for r={r}, delta={delta}, n={n}: " + "; ".join(bad))


def _resolved(p, s, t, s_f, t_f) -> ResolvedParams:
    return ResolvedParams(
        p.r, p.delta, p.n, s, t, s_f, t_f, (s, t) == (s_f, t_f),
        tuple(turan_class_sizes(p.r, p.n - t)), _copy_sizes(p.r, s),
    )


@dataclass(frozen=True)
class EmbeddingTuple:
    """``maps[p][v]`` is the image of vertex v of copy p."""

    maps: tuple[tuple[int, ...], ...]
    copy: PartitionedGraph

    def image(self, p: int) -> int:
        return as_mask(self.maps[p])

    def class_image(self, p: int, i: int) -> int:
        return as_mask(self.maps[p][v] for v in iter_bits(self.copy.classes[i]))


@dataclass
class RandomBuild:
    params: ResolvedParams
    seed: int
    graph: Graph
    stage2: Graph
    classes: tuple[int, ...]  # V_1..V_r as masks, then V_{r+1}
    anchors: tuple[int, ...]
    embedding: EmbeddingTuple
    attempts: int
    checks: dict[str, bool] = field(default_factory=dict)
    report: dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _partial_shuffle(items: list[int], k: int, rng: np.random.Generator) -> list[int]:
    """First k entries of a Fisher-Yates shuffle: a uniform ordered k-subset."""
    a = list(items)
    for i in range(k):
        j = int(rng.integers(i, len(a)))
        a[i], a[j] = a[j], a[i]
    return a[:k]


def _embed(rp: ResolvedParams, copy: PartitionedGraph, free: list[list[int]], streams) -> EmbeddingTuple:
    maps = []
    for p in range(rp.t):
        f = [0] * copy.graph.n
        for i, cls in enumerate(copy.classes):
            verts = list(iter_bits(cls))
            if i < 2:
                image = _partial_shuffle(free[i], len(verts), streams[p])
            else:
                image = free[i][p * len(verts):(p + 1) * len(verts)]
            for v, x in zip(verts, image):
                f[v] = x
        maps.append(tuple(f))
    return EmbeddingTuple(tuple(maps), copy)


def _stage2(rp: ResolvedParams, base: Graph, emb: EmbeddingTuple, apex0: int) -> Graph:
    deleted = []
    added = []
    for p, f in enumerate(emb.maps):
        deleted.extend((f[u], f[v]) for u, v in emb.copy.graph.edges())
        added.extend((apex0 + p, x) for x in f)
    return base.without_edges(deleted).with_edges(added)


def build_random(p: RandomBuildParams) -> RandomBuild:
    rp = resolve_params(p)
    r, n, t = rp.r, rp.n, rp.t
    sizes = rp.class_sizes
    starts = [sum(sizes[:i]) for i in range(r)]
    classes = [((1 << sizes[i]) - 1) << starts[i] for i in range(r)]
    apex0 = n - t
    classes.append(((1 << t) - 1) << apex0)
    anchors = tuple(starts)
    free = [list(range(starts[i] + 1, starts[i] + sizes[i])) for i in range(r)]

    full = (1 << apex0) - 1
    adj = [0] * n
    for c in classes[:r]:
        for v in iter_bits(c):
            adj[v] = full & ~c
    base = Graph(n, tuple(adj))
    copy = build_G_rs(r, rp.s)

    a = int(rp.delta * n / 2)
    exact_biclique = 1 <= a <= EXACT_BICLIQUE_CAP and a <= min(len(free[0]), len(free[1]))
    root = np.random.SeedSequence(p.seed)
    attempts = 0
    for attempt_seq in root.spawn(p.max_resamples + 1):
        attempts += 1
        streams = [np.random.Generator(np.random.PCG64(ss)) for ss in attempt_seq.spawn(t + 1)]
        emb = _embed(rp, copy, free, streams)
        g2 = _stage2(rp, base, emb, apex0)
        if not exact_biclique or not has_biclique(g2, classes[0], classes[1], a):
            break
    g = maximal_completion(g2, r + 1)

    build = RandomBuild(rp, p.seed, g, g2, tuple(classes), anchors, emb, attempts)
    _run_checks(build)
    build.report.update(_summary(build, p, a, exact_biclique, streams[t]))
    return build


def _run_checks(b: RandomBuild) -> None:
    r = b.params.r
    g2, g = b.stage2, b.graph
    v1, v2 = b.classes[0], b.classes[1]
    b.checks["stage2_clique_free"] = not has_clique(g2, r + 1)

    pg2 = PartitionedGraph(g2, b.classes)
    sat = set(saturating_edges(pg2, r + 1, 0, 1))
    missing = {(u, v) for u in iter_bits(v1) for v in iter_bits(v2 & ~g2.adj[u])}
    b.checks["deleted_pairs_saturating"] = sat == missing

    anchor_mask = as_mask(b.anchors)
    ok = has_clique(g2, r, anchor_mask)
    for i in range(r):
        others = anchor_mask & ~(1 << b.anchors[i])
        ok = ok and all(g2.adj[u] & g2.adj[v] & others == others for u, v in combinations(iter_bits(b.classes[i]), 2))
    b.checks["anchor_property"] = ok

    same = all((g.adj[u] & v2) == (g2.adj[u] & v2) for u in iter_bits(v1))
    b.checks["stage2_v1v2_preserved"] = same
    b.checks["classes_independent_after_completion"] = all(g.edge_count(c) == 0 for c in b.classes[:r])
    b.checks["final_saturated"] = is_saturated(g, r)
    b.checks["edge_bound"] = _edge_bound_holds(r, b.params.delta, b.params.n, g.m)


def _edge_bound_holds(r: int, delta: Fraction, n: int, e: int) -> bool:
    """t_r(n) - e <= C(delta) n^((r+1)/r), using rational lower bounds for the right side."""
    deficit = turan_number(r, n) - e
    if deficit <= 0:
        return True
    slack = Fraction(1) - Fraction(1, 10 ** 9)
    log_lo = (1 + Fraction(math.log(2 / delta))) * slack
    c_lo = Fraction(64) / (r * delta) * log_lo
    root_lo = Fraction(n ** (1 / r)) * slack
    return deficit <= c_lo * n * root_lo


def has_biclique(g: Graph, v1, v2, a: int, cap: int = EXACT_BICLIQUE_CAP) -> bool:
    """Exact: are there A in v1, B in v2 with |A| = |B| = a and every A-B pair an edge?"""
    if a < 1:
        raise ValueError("need a >= 1")
    if a > cap:
        raise CapExceeded(f"exact biclique search limited to a <= {cap}")
    m1, m2 = as_mask(v1), as_mask(v2)
    if m1.bit_count() < a or m2.bit_count() < a:
        return False
    order = [u for u in iter_bits(m1) if (g.adj[u] & m2).bit_count() >= a]

    def search(start: int, chosen: int, common: int) -> bool:
        if chosen == a:
            return True
        for idx in range(start, len(order) - (a - chosen) + 1):
            c = common & g.adj[order[idx]]
            if c.bit_count() >= a and search(idx + 1, chosen + 1, c):
                return True
        return False

    return search(0, 0, m2)


def biclique_monte_carlo(
    g: Graph, v1, v2, a: int, samples: int, rng: np.random.Generator, matchings=None
) -> dict[str, float]:
    """Sample random a-subsets A, B and record how often G[A, B] is complete.

    ``matchings`` is an optional list of per-copy matching pairs (y, z); for each
    sample the number of pairs with y in A and z in B is accumulated.
    """
    l1, l2 = list(iter_bits(as_mask(v1))), list(iter_bits(as_mask(v2)))
    complete = 0
    zero_hit_copies = 0
    total_hits = 0
    for _ in range(samples):
        A = _partial_shuffle(l1, a, rng)
        B = as_mask(_partial_shuffle(l2, a, rng))
        if all(g.adj[u] & B == B for u in A):
            complete += 1
        if matchings:
            am = as_mask(A)
            for pairs in matchings:
                hits = sum(1 for y, z in pairs if am >> y & 1 and B >> z & 1)
                total_hits += hits
                zero_hit_copies += hits == 0
    out = {
        "samples": samples,
        "complete_fraction": complete / samples if samples else 0.0,
        "complete_upper95": min(1.0, complete / samples + math.sqrt(math.log(20) / (2 * samples))) if samples else 1.0,
    }
    if matchings:
        copies = samples * len(matchings)
        out["mean_hits_per_copy"] = total_hits / copies
        out["zero_hit_copy_fraction"] = zero_hit_copies / copies
    return out


def _summary(b: RandomBuild, p: RandomBuildParams, a: int, exact_biclique: bool, mc_rng) -> dict[str, object]:
    rp = b.params
    r, n = rp.r, rp.n
    out: dict[str, object] = {
        "r": r,
        "delta": str(rp.delta),
        "n": n,
        "seed": p.seed,
        "rounding": p.rounding,
        "s": rp.s,
        "t": rp.t,
        "s_formula": rp.s_formula,
        "t_formula": rp.t_formula,
        "formula_regime": rp.formula_regime,
        "B_delta": f"{B_const(r, rp.delta):.12g}",
        "C_delta": f"{C_const(r, rp.delta):.12g}",
        "edges": b.graph.m,
        "edges_stage2": b.stage2.m,
        "turan_number": turan_number(r, n),
        "edge_target": f"{turan_number(r, n) - C_const(r, rp.delta) * n ** ((r + 1) / r):.6f}",
        "attempts": b.attempts,
        "biclique_a": a,
    }
    for k, v in b.checks.items():
        out[f"check_{k}"] = v
    if exact_biclique:
        out["biclique_free_exact"] = not has_biclique(b.stage2, b.classes[0], b.classes[1], a)
    elif p.mc_samples and 1 <= a <= min(b.classes[0].bit_count(), b.classes[1].bit_count()):
        copy = b.embedding.copy
        match = bipartite_perfect_matching(copy.graph, list(iter_bits(copy.classes[0])), list(iter_bits(copy.classes[1])))
        pairs = [[(f[y], f[z]) for y, z in match.items()] for f in b.embedding.maps] if match else None
        est = biclique_monte_carlo(b.stage2, b.classes[0], b.classes[1], a, p.mc_samples, mc_rng, pairs)
        for k, v in est.items():
            out[f"mc_{k}"] = v if isinstance(v, int) else f"{v:.6f}"
        per_pair = math.exp(-float(rp.delta) ** 2 * r * r / 16)
        out["mc_pair_miss_bound"] = f"{per_pair:.6f}"
        out["mc_copy_miss_bound"] = f"{per_pair ** (2 * rp.s ** (r - 1)):.6f}"
        out["mc_seed_stream"] = rp.t
    return out


def format_report(report: dict[str, object]) -> str:
    lines = []
    for k, v in report.items():
        if isinstance(v, bool):
            v = str(v).lower()
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"
