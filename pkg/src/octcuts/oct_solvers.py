"""Exact odd cycle transversal solvers.

An odd cycle transversal (OCT) of a graph is a vertex set whose deletion
leaves the graph bipartite.  `oct_brute` enumerates subsets and is the
ground truth at small scale; `oct_compress` grows the graph one vertex at a
time and compresses the running solution through two-coloring separation,
staying exact while only paying for the solution size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from octcuts.flows_separators import BOT, min_vertex_separator
from octcuts.graph_core import Graph, TwoColoring, ids_of, mask_of, two_coloring


@dataclass(frozen=True)
class OctSolution:
    size: int
    vertices: frozenset[int]


class OctBudgetExceeded(Exception):
    """oct_brute exhausted its explicit budget without finding a solution."""

    def __init__(self, ub: int):
        super().__init__(f"no odd cycle transversal of size <= {ub}")
        self.ub = ub


def odd_cycle_free(g: Graph, removed: Iterable[int] | int = 0) -> bool:
    """Bipartiteness of ``g − removed`` via layered BFS over bitmasks.

    `removed` may be a vertex iterable or a pre-packed bitmask.
    """
    rm = removed if isinstance(removed, int) else mask_of(removed)
    alive = g.vertex_mask & ~rm
    seen = 0
    for root in g.sorted_vertices:
        rbit = 1 << root
        if not alive & rbit or seen & rbit:
            continue
        layer = rbit
        comp = rbit
        while layer:
            nxt = 0
            for v in ids_of(layer):
                a = g.adj_mask(v)
                if a & layer:
                    return False  # edge inside a BFS layer closes an odd cycle
                nxt |= a
            layer = nxt & alive & ~comp
            comp |= layer
        seen |= comp
    return True


def oct_brute(g: Graph, ub: int | None = None) -> OctSolution:
    """Exact OCT by subset enumeration, smallest size first.

    Within a size, candidates are tried in lexicographic order and the
    first hit is returned, so the result is deterministic.

    Raises
    ------
    OctBudgetExceeded
        If `ub` is given and no transversal of size <= ub exists.
    """
    vs = g.sorted_vertices
    top = g.n if ub is None else min(ub, g.n)
    for size in range(top + 1):
        for cand in itertools.combinations(vs, size):
            if odd_cycle_free(g, mask_of(cand)):
                return OctSolution(size, frozenset(cand))
    raise OctBudgetExceeded(top)


def ar_sets(g: Graph, w: Iterable[int], w0: Iterable[int], w1: Iterable[int],
            c: TwoColoring) -> tuple[frozenset[int], frozenset[int]]:
    """The two forcing sets of the two-coloring separation argument.

    Given an OCT `w` split into independent halves `w0`, `w1` (to be kept
    and colored 0 resp. 1) and a proper 2-coloring `c` of ``g − w``:

    * A collects neighbors of w0 colored 0 and neighbors of w1 colored 1
      (vertices whose current color already clashes with the target),
    * R collects neighbors of w0 colored 1 and neighbors of w1 colored 0.

    Deleting a set X ⊆ V∖w makes ``g − X`` 2-colorable with w0 -> 0 and
    w1 -> 1 exactly when X separates A from R in ``g − w``.  A and R may
    overlap; overlapping vertices are forced into every separator.
    """
    wset = frozenset(w)
    w0set, w1set = frozenset(w0), frozenset(w1)
    if w0set | w1set != wset or w0set & w1set:
        raise ValueError("w0, w1 must partition w")
    for part, name in ((w0set, "w0"), (w1set, "w1")):
        pm = mask_of(part)
        for u in part:
            if g.adj_mask(u) & pm:
                raise ValueError(f"{name} is not an independent set")
    rest = g.vertices - wset
    if c.domain != rest:
        raise ValueError("coloring domain must be exactly V(g) - w")
    for u in rest:
        cu = c[u]
        for v in g.neighbors(u):
            if v in rest and v > u and c[v] == cu:
                raise ValueError(f"coloring not proper: edge {u}-{v} "
                                 f"monochromatic (so w is not an OCT or c is bad)")
    a_set: set[int] = set()
    r_set: set[int] = set()
    for x in w0set:
        for u in g.neighbors(x):
            if u in rest:
                (a_set if c[u] == 0 else r_set).add(u)
    for x in w1set:
        for u in g.neighbors(x):
            if u in rest:
                (a_set if c[u] == 1 else r_set).add(u)
    return frozenset(a_set), frozenset(r_set)


def _assignments(wprime: tuple[int, ...]):
    """(deleted, w0, w1) splits of wprime, skipping the w0/w1 mirror image
    (the first surviving vertex is pinned to w0)."""
    for code in itertools.product((0, 1, 2), repeat=len(wprime)):
        first = next((c for c in code if c != 0), None)
        if first == 2:
            continue
        d = tuple(v for v, c in zip(wprime, code) if c == 0)
        a0 = tuple(v for v, c in zip(wprime, code) if c == 1)
        a1 = tuple(v for v, c in zip(wprime, code) if c == 2)
        yield d, a0, a1


def oct_compress(g: Graph, k: int) -> OctSolution | object:
    """OCT of size <= k by iterative compression, or `BOT` if none exists.

    Vertices are added in ascending id order; after each addition the
    current solution plus the new vertex is compressed by enumerating its
    3^|W'| (deleted, keep-as-0, keep-as-1) assignments and solving a
    minimum A-R separation in the fixed remainder graph.  The per-prefix
    optimum is exact, so a prefix exceeding the budget proves oct(g) > k.
    """
    if k < 0:
        raise ValueError("budget must be non-negative")
    vs = g.sorted_vertices
    sol: frozenset[int] = frozenset()
    active: list[int] = []
    for v in vs:
        active.append(v)
        gp = g.subgraph(active)
        wprime = tuple(sorted(sol | {v}))
        rest = gp.vertices - set(wprime)
        grest = gp.subgraph(rest)
        col = two_coloring(grest)
        assert isinstance(col, TwoColoring), "remainder of an OCT must be bipartite"
        best_size = None
        best: tuple[int, ...] | None = None
        for d, a0, a1 in _assignments(wprime):
            ok = True
            for half in (a0, a1):
                hm = mask_of(half)
                if any(gp.adj_mask(u) & hm for u in half):
                    ok = False
                    break
            if not ok:
                continue
            a_set: set[int] = set()
            r_set: set[int] = set()
            for x in a0:
                for u in gp.neighbors(x):
                    if u in rest:
                        (a_set if col[u] == 0 else r_set).add(u)
            for x in a1:
                for u in gp.neighbors(x):
                    if u in rest:
                        (a_set if col[u] == 1 else r_set).add(u)
            sep = min_vertex_separator(grest, a_set, r_set)
            cand = tuple(sorted(d + tuple(sep.cut)))
            if best_size is None or len(cand) < best_size or \
                    (len(cand) == best_size and cand < best):
                best_size = len(cand)
                best = cand
        assert best is not None  # the all-deleted assignment always qualifies
        if best_size > k:
            return BOT
        sol = frozenset(best)
        assert odd_cycle_free(gp, mask_of(sol))
    return OctSolution(len(sol), sol)


def oct_exact(g: Graph) -> OctSolution:
    """Exact OCT with no budget: compression with an escalating budget."""
    for k in range(g.n + 1):
        res = oct_compress(g, k)
        if res is not BOT:
            return res
    raise AssertionError("deleting every vertex is always a transversal")


def is_subset_of_optimal(g: Graph, s: Iterable[int]) -> bool:
    """Does some minimum OCT of g contain all of s?

    True exactly when oct(g) = |s| + oct(g − s): the deleted set can then
    be completed to a minimum transversal, and conversely.
    """
    sset = frozenset(s)
    if not sset <= g.vertices:
        raise ValueError("query set outside the graph")
    whole = oct_exact(g).size
    rest = oct_exact(g.without(sset)).size
    return whole == len(sset) + rest
