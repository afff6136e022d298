"""Exhaustive ground truth for g_r, g*_r and saturation on small graphs.

Nothing here calls into the decomposition engine; the clique search used for
the definition-level saturation check is a separate, set-based one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import Graph, iter_bits, to_tuple

__all__ = [
    "OracleReport",
    "brute_g_r",
    "brute_g_star",
    "max_multipartite_bb",
    "definition_level_saturation",
    "turan_admissible_size",
    "DEFAULT_ORACLE_CAP",
    "DEFAULT_NODE_BUDGET",
]

DEFAULT_ORACLE_CAP = 26
DEFAULT_NODE_BUDGET = 5_000_000


@dataclass(frozen=True)
class OracleReport:
    """Result of an exact (or, when ``capped``, best-found) deletion search."""

    kind: str  # "g_r" or "g_star"
    r: int
    n: int
    g_value: int
    witness: tuple[tuple[int, ...], ...]  # classes of the retained subgraph
    search_nodes: int
    capped: bool
    instance: str = ""

    @property
    def retained(self) -> int:
        return sum(len(c) for c in self.witness)

    def to_text(self) -> str:
        lines = [
            f"kind = {self.kind}",
            f"instance = {self.instance}",
            f"r = {self.r}",
            f"n = {self.n}",
            f"value = {self.g_value}",
            f"capped = {str(self.capped).lower()}",
            f"search_nodes = {self.search_nodes}",
        ]
        lines += [f"class {i} = {' '.join(map(str, c))}" for i, c in enumerate(self.witness)]
        return "\n".join(lines) + "\n"


# g_r: deletion branching on obstructions -----------------------------------------

def _triple_obstruction(adj, alive: int, fixed: int):
    """An induced one-edge triple (u ~ w, v adjacent to neither), preferring few deletable vertices."""
    best = None
    best_free = 4
    for v in iter_bits(alive):
        far = alive & ~adj[v] & ~(1 << v)
        for u in iter_bits(far):
            hit = adj[u] & far & ~((2 << u) - 1)
            for w in iter_bits(hit):
                free = sum(1 for x in (v, u, w) if not fixed >> x & 1)
                if free < best_free:
                    best, best_free = (v, u, w), free
                    if free <= 1:
                        return best
    return best


def _classes_of(adj, alive: int) -> list[int]:
    classes = []
    rest = alive
    while rest:
        v = (rest & -rest).bit_length() - 1
        c = alive & ~adj[v]
        classes.append(c)
        rest &= ~c
    return classes


def _packing_bound(adj, alive: int, fixed: int) -> int:
    """Greedy count of obstructions pairwise disjoint on deletable vertices."""
    used = 0
    count = 0
    for v in iter_bits(alive):
        if used >> v & 1:
            continue
        far = alive & ~adj[v] & ~(1 << v) & ~used
        done = False
        for u in iter_bits(far):
            hit = adj[u] & far & ~((2 << u) - 1)
            if hit:
                w = (hit & -hit).bit_length() - 1
                tri = (1 << v) | (1 << u) | (1 << w)
                used |= tri & ~fixed
                count += 1
                done = True
                break
        if done:
            continue
    return count


def _greedy_deletion(g: Graph, r: int) -> int:
    adj = g.adj
    alive = g.vertex_mask
    while True:
        ob = _triple_obstruction(adj, alive, 0)
        if ob is None:
            break
        v = min(ob, key=lambda x: ((adj[x] & alive).bit_count(), x))
        alive &= ~(1 << v)
    classes = sorted(_classes_of(adj, alive), key=lambda c: (-c.bit_count(), c & -c))
    for c in classes[r:]:
        alive &= ~c
    return alive


def brute_g_r(
    g: Graph, r: int, cap: int = DEFAULT_ORACLE_CAP, node_budget: int = DEFAULT_NODE_BUDGET, instance: str = ""
) -> OracleReport:
    """Minimum deletion leaving a complete r-partite graph (empty classes allowed).

    A graph is complete multipartite iff it has no induced three-vertex graph
    with exactly one edge; the branching deletes one vertex of such a triple,
    marking earlier alternatives as kept.  Once no triple remains the survivors
    form complete multipartite classes and the smallest deletable classes go.
    Above ``cap`` vertices only a greedy upper bound is returned.
    """
    adj = g.adj
    best_alive = _greedy_deletion(g, r)
    if g.n > cap:
        return _report("g_r", g, r, best_alive, 0, True, instance)
    best = g.n - best_alive.bit_count()
    nodes = 0
    capped = False

    def finish(alive: int, fixed: int) -> tuple[int, int] | None:
        classes = _classes_of(adj, alive)
        if len(classes) <= r:
            return 0, alive
        keep = [c for c in classes if c & fixed]
        if len(keep) > r:
            return None
        free = sorted((c for c in classes if not c & fixed), key=lambda c: (-c.bit_count(), c & -c))
        drop = free[r - len(keep):]
        cost = sum(c.bit_count() for c in drop)
        for c in drop:
            alive &= ~c
        return cost, alive

    def search(alive: int, fixed: int, deleted: int) -> None:
        nonlocal best, best_alive, nodes, capped
        nodes += 1
        if nodes > node_budget:
            capped = True
            return
        if deleted + _packing_bound(adj, alive, fixed) >= best:
            return
        ob = _triple_obstruction(adj, alive, fixed)
        if ob is None:
            res = finish(alive, fixed)
            if res is not None and deleted + res[0] < best:
                best, best_alive = deleted + res[0], res[1]
            return
        kept = 0
        for x in sorted(ob):
            if fixed >> x & 1:
                continue
            search(alive & ~(1 << x), fixed | kept, deleted + 1)
            kept |= 1 << x
            if capped:
                return

    search(g.vertex_mask, 0, 0)
    return _report("g_r", g, r, best_alive, nodes, capped, instance)


# generic include/exclude search over complete multipartite induced subgraphs ------

def turan_admissible_size(sizes: list[int], r: int) -> int:
    """Largest k such that T_r(k) fits class-wise inside classes of the given sizes."""
    a = sorted(sizes + [0] * (r - len(sizes)), reverse=True)[:r]
    if not a:
        return 0
    low = min(a)
    return sum(min(x, low + 1) for x in a)


def max_multipartite_bb(
    g: Graph,
    r: int,
    objective,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[int, list[int], int, bool]:
    """Maximise ``objective(class sizes)`` over induced complete multipartite
    subgraphs with at most ``r`` classes.

    ``objective`` must be monotone in every class size.  Returns
    ``(value, class masks, nodes, capped)``.
    """
    adj = g.adj
    best = objective([])
    best_classes: list[int] = []
    nodes = 0
    capped = False

    def search(cand: int, classes: list[int], common: list[int], union: list[int]) -> None:
        nonlocal best, best_classes, nodes, capped
        nodes += 1
        if nodes > node_budget:
            capped = True
            return
        k = len(classes)
        all_common = cand
        for c in common:
            all_common &= c
        per = []
        for i in range(k):
            p = cand & ~union[i]
            for j in range(k):
                if j != i:
                    p &= common[j]
            per.append(p)
        p_new = all_common if k < r else 0
        live = p_new
        for p in per:
            live |= p
        cur = [c.bit_count() for c in classes]
        val = objective(cur)
        if val > best:
            best, best_classes = val, list(classes)
        ub = [cur[i] + per[i].bit_count() for i in range(k)] + [p_new.bit_count()] * (r - k)
        if not live or objective(ub) <= best:
            return
        v = (live & -live).bit_length() - 1
        bit = 1 << v
        rest = live & ~bit
        for i in range(k):
            if per[i] & bit:
                nc = classes[:]
                nc[i] |= bit
                ncom = common[:]
                ncom[i] &= adj[v]
                nun = union[:]
                nun[i] |= adj[v]
                search(rest, nc, ncom, nun)
                break
        else:
            search(rest, classes + [bit], common + [adj[v]], union + [adj[v]])
        if capped:
            return
        search(rest, classes, common, union)

    search(g.vertex_mask, [], [], [])
    return best, best_classes, nodes, capped


def _report(kind, g, r, alive, nodes, capped, instance, classes=None) -> OracleReport:
    if classes is None:
        classes = _classes_of(g.adj, alive)
    classes = sorted(classes, key=lambda c: c & -c)
    witness = tuple(to_tuple(c) for c in classes)
    retained = sum(len(c) for c in witness)
    return OracleReport(kind, r, g.n, g.n - retained, witness, nodes, capped, instance)


def _balanced_witness(classes: list[int], r: int) -> list[int]:
    sizes = [c.bit_count() for c in classes] + [0] * (r - len(classes))
    low = min(sizes) if sizes else 0
    out = []
    for c in classes:
        keep = 0
        for v in list(iter_bits(c))[: low + 1]:
            keep |= 1 << v
        out.append(keep)
    return [c for c in out if c]


def brute_g_star(
    g: Graph, r: int, cap: int = DEFAULT_ORACLE_CAP, node_budget: int = DEFAULT_NODE_BUDGET, instance: str = ""
) -> OracleReport:
    """Minimum deletion leaving some T_r(k), k >= 0 (class sizes differ by at most one).

    Above ``cap`` vertices the search is skipped and the empty residual
    (value n) is reported as the trivial bound.
    """
    if g.n > cap:
        return OracleReport("g_star", r, g.n, g.n, (), 0, True, instance)
    obj = lambda sizes: turan_admissible_size(sizes, r)
    _, classes, nodes, capped = max_multipartite_bb(g, r, obj, node_budget)
    return _report("g_star", g, r, 0, nodes, capped, instance, _balanced_witness(classes, r))


# saturation by definition ------------------------------------------------------------

def _set_clique(nbrs: list[set[int]], cand: set[int], k: int) -> bool:
    if k == 0:
        return True
    for v in sorted(cand):
        if _set_clique(nbrs, {u for u in cand if u > v and u in nbrs[v]}, k - 1):
            return True
    return False


def definition_level_saturation(g: Graph, r: int, cap: int = 64) -> bool:
    """Literal check: K_{r+1}-free, and inserting any missing edge yields a K_{r+1} somewhere."""
    if g.n > cap:
        raise ValueError(f"definition-level check limited to n <= {cap}")
    nbrs = [set(iter_bits(a)) for a in g.adj]
    everything = set(range(g.n))
    if _set_clique(nbrs, everything, r + 1):
        return False
    for u, v in combinations(range(g.n), 2):
        if v in nbrs[u]:
            continue
        nbrs[u].add(v)
        nbrs[v].add(u)
        created = _set_clique(nbrs, everything, r + 1)
        nbrs[u].discard(v)
        nbrs[v].discard(u)
        if not created:
            return False
    return True
