"""Minimum vertex separators and small multiway cuts.

All cuts here are vertex cuts.  A set X separates vertex sets A and B when
no connected component of G - X contains a vertex of A and a vertex of B;
X may intersect A and B (a shared vertex is then forced into X).

Flow problems run on a vertex-split digraph (unit capacity through each
deletable vertex), solved with Edmonds-Karp; witnesses come from flow
decomposition.  Multiway cuts are restricted: they must avoid the terminal
vertices entirely, and ``BOT`` is returned when no cut fits the budget,
including when it is outright infeasible (adjacent terminals of different
parts).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from octcuts.graph_core import Graph, components, ids_of, mask_of


class _BotType:
    """Sentinel for "no solution within budget"."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOT"

    def __bool__(self) -> bool:
        return False


BOT = _BotType()

_BRUTE_LIMIT = 20


@dataclass(frozen=True)
class SeparatorResult:
    """A minimum separator with an optional disjoint-path witness.

    `witness_paths`, when present, is a maximum family of fully
    vertex-disjoint A-B paths; its cardinality equals `size`, certifying
    minimality.  A vertex lying in both A and B appears as a one-vertex
    path.
    """

    cut: frozenset[int]
    size: int
    witness_paths: tuple[tuple[int, ...], ...] | None = None


@dataclass(frozen=True)
class GeneralizedPartition:
    """Terminal layout for the generalized multiway cut.

    `parts` must stay pairwise connected-apart; `t0` vertices are terminals
    with no side (the cut may delete them); `tx` vertices are deleted before
    anything else.  All three groups are pairwise disjoint.
    """

    t0: frozenset[int] = frozenset()
    parts: tuple[frozenset[int], ...] = ()
    tx: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "t0", frozenset(self.t0))
        object.__setattr__(self, "parts", tuple(frozenset(p) for p in self.parts))
        object.__setattr__(self, "tx", frozenset(self.tx))
        groups = [self.t0, *self.parts, self.tx]
        seen: set[int] = set()
        for grp in groups:
            if grp & seen:
                raise ValueError("terminal groups overlap")
            seen |= grp

    @property
    def terminals(self) -> frozenset[int]:
        out = self.t0 | self.tx
        for p in self.parts:
            out |= p
        return out


def _flow_cut(g: Graph, a: Iterable[int], b: Iterable[int],
              undeletable: Iterable[int] = ()
              ) -> tuple[frozenset[int], int, tuple[tuple[int, ...], ...]]:
    """Min vertex cut between a and b with some vertices undeletable.

    Returns (cut, size, witness_paths).  Raises if the cut would have to
    delete an undeletable vertex (a and b share one, or flow is unbounded
    through them) -- callers guarantee that cannot happen, and the flow
    value staying <= n certifies it.
    """
    aset = frozenset(a) & g.vertices
    bset = frozenset(b) & g.vertices
    undel = frozenset(undeletable)
    inf = 4 * g.n + 8
    src = 2 * g.id_bound
    dst = src + 1
    cap: dict[int, dict[int, int]] = {src: {}, dst: {}}

    def arc(u: int, v: int, c: int) -> None:
        cap.setdefault(u, {})
        cap.setdefault(v, {})
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)

    for v in g.sorted_vertices:
        arc(2 * v, 2 * v + 1, inf if v in undel else 1)
    for u, v in g.edges():
        arc(2 * u + 1, 2 * v, inf)
        arc(2 * v + 1, 2 * u, inf)
    for v in sorted(aset):
        arc(src, 2 * v, inf)
    for v in sorted(bset):
        arc(2 * v + 1, dst, inf)

    orig = {u: dict(d) for u, d in cap.items()}
    value = 0
    while True:
        parent: dict[int, int] = {src: src}
        queue = deque([src])
        while queue and dst not in parent:
            u = queue.popleft()
            for v in sorted(cap[u]):
                if v not in parent and cap[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if dst not in parent:
            break
        bottleneck = inf
        v = dst
        while v != src:
            u = parent[v]
            bottleneck = min(bottleneck, cap[u][v])
            v = u
        v = dst
        while v != src:
            u = parent[v]
            cap[u][v] -= bottleneck
            cap[v][u] += bottleneck
            v = u
        value += bottleneck
        if value > g.n:
            raise RuntimeError("cut forced through undeletable vertices")

    reach = {src}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v, c in cap[u].items():
            if c > 0 and v not in reach:
                reach.add(v)
                queue.append(v)
    cut = frozenset(v for v in g.vertices
                    if 2 * v in reach and 2 * v + 1 not in reach
                    and v not in undel)
    if len(cut) != value:
        raise RuntimeError("cut/flow mismatch")

    # decompose the flow into witness paths
    flow: dict[int, dict[int, int]] = {}
    for u, d in orig.items():
        for v, c in d.items():
            f = c - cap[u][v]
            if f > 0:
                flow.setdefault(u, {})[v] = f
    paths = []
    for _ in range(value):
        node = src
        trail = []
        while node != dst:
            nxt = min(v for v, f in flow[node].items() if f > 0)
            flow[node][nxt] -= 1
            trail.append(nxt)
            node = nxt
        verts = tuple(w // 2 for w in trail[:-1] if w % 2 == 0)
        paths.append(verts)
    return cut, value, tuple(paths)


def min_vertex_separator(g: Graph, a: Iterable[int], b: Iterable[int]
                         ) -> SeparatorResult:
    """Minimum vertex set separating `a` from `b`, with a Menger witness.

    The cut may use vertices of `a` and `b` themselves; a vertex in both
    sets is always part of the cut (and shows up as a one-vertex witness
    path).  Empty sides give the empty cut.
    """
    cut, size, paths = _flow_cut(g, a, b)
    return SeparatorResult(cut=cut, size=size, witness_paths=paths)


def vertex_cut_with_undeletable(g: Graph, a: Iterable[int], b: Iterable[int],
                                undeletable: Iterable[int]) -> SeparatorResult:
    """Like min_vertex_separator but some vertices may not be deleted.

    Callers must ensure a finite cut exists (the undeletable set must not
    wire `a` to `b` on its own).  Witness paths are internally disjoint
    outside the undeletable set only, so they are not returned.
    """
    cut, size, _ = _flow_cut(g, a, b, undeletable)
    return SeparatorResult(cut=cut, size=size, witness_paths=None)


def _separates_parts(g: Graph, deleted_mask: int, label: dict[int, int]) -> bool:
    alive = g.vertex_mask & ~deleted_mask
    seen = 0
    for root in g.sorted_vertices:
        rbit = 1 << root
        if not alive & rbit or seen & rbit:
            continue
        comp = rbit
        frontier = rbit
        while frontier:
            nxt = 0
            for v in ids_of(frontier):
                nxt |= g.adj_mask(v)
            frontier = nxt & alive & ~comp
            comp |= frontier
        seen |= comp
        first = -1
        for t, lab in label.items():
            if comp >> t & 1:
                if first == -1:
                    first = lab
                elif lab != first:
                    return False
    return True


def _rmwc_brute(g: Graph, parts: Sequence[frozenset[int]], budget: int):
    label: dict[int, int] = {}
    for i, part in enumerate(parts):
        for t in part:
            label[t] = i
    free = sorted(g.vertices - set(label))
    for size in range(min(budget, len(free)) + 1):
        for cand in itertools.combinations(free, size):
            if _separates_parts(g, mask_of(cand), label):
                return size, frozenset(cand)
    return BOT


def _violating_path(g: Graph, label: dict[int, int]) -> list[int] | None:
    """Shortest path between two terminals of different parts, or None."""
    best: list[int] | None = None
    for s in sorted(label):
        if s not in g.vertices:
            continue
        parent = {s: s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if u != s and u in label and label[u] != label[s]:
                path = [u]
                while path[-1] != s:
                    path.append(parent[path[-1]])
                path.reverse()
                if best is None or len(path) < len(best):
                    best = path
                break
            for v in g.neighbors(u):
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
    return best


def _rmwc_branch(g: Graph, label: dict[int, int], budget: int,
                 memo: dict[frozenset[int], object], deleted: frozenset[int]):
    if deleted in memo:
        return memo[deleted]
    path = _violating_path(g, label)
    if path is None:
        result: object = (len(deleted), deleted)
    else:
        candidates = [w for w in path[1:-1] if w not in label]
        result = BOT
        if len(deleted) < budget:
            for w in sorted(candidates):
                sub = _rmwc_branch(g.without({w}), label, budget, memo,
                                   deleted | {w})
                if sub is BOT:
                    continue
                if (result is BOT or sub[0] < result[0]
                        or (sub[0] == result[0]
                            and sorted(sub[1]) < sorted(result[1]))):
                    result = sub
    memo[deleted] = result
    return result


def restricted_multiway_cut(g: Graph, parts: Sequence[Iterable[int]],
                            budget: int, backend: str = "auto"):
    """Smallest vertex set, disjoint from all terminals, whose removal
    leaves no component containing terminals of two different parts.

    Returns ``(size, cut)`` with the lexicographically first minimum cut
    under the brute backend, or `BOT` if no such cut has size <= budget
    (in particular when terminals of different parts are adjacent).
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    psets = [frozenset(p) for p in parts]
    seen: set[int] = set()
    for p in psets:
        if not p <= g.vertices:
            raise ValueError("terminal outside the graph")
        if p & seen:
            raise ValueError("terminal parts overlap")
        seen |= p
    psets = [p for p in psets if p]
    if backend == "auto":
        backend = "brute" if g.n <= _BRUTE_LIMIT else "branch"
    if backend == "brute":
        return _rmwc_brute(g, psets, budget)
    if backend == "branch":
        label = {t: i for i, p in enumerate(psets) for t in p}
        res = _rmwc_branch(g, label, budget, {}, frozenset())
        return res if res is BOT else (res[0], res[1])
    raise ValueError(f"unknown backend {backend!r}")


def generalized_rmwc(g: Graph, gp: GeneralizedPartition, budget: int,
                     backend: str = "auto"):
    """Generalized variant: `gp.tx` is deleted up front (for free), `gp.t0`
    terminals are deletable, and the cut must avoid only the sided parts."""
    for grp in (gp.t0, gp.tx, *gp.parts):
        if not grp <= g.vertices:
            raise ValueError("terminal outside the graph")
    return restricted_multiway_cut(g.without(gp.tx), gp.parts, budget,
                                   backend=backend)


def min_arn_separator(g: Graph, a: Iterable[int], r: Iterable[int],
                      n: Iterable[int]) -> SeparatorResult:
    """Minimum vertex set separating three sets pairwise.

    With `n` empty this is exactly min_vertex_separator(g, a, r).  The
    three-way case is solved through a star transform: one fresh super
    terminal per set wired to its members, then a restricted multiway cut.
    A vertex shared by two sets is forced into every separator.
    """
    aset, rset, nset = frozenset(a), frozenset(r), frozenset(n)
    for s in (aset, rset, nset):
        if not s <= g.vertices:
            raise ValueError("separation set outside the graph")
    if not nset:
        return min_vertex_separator(g, aset, rset)
    sa, sr, sn = g.id_bound, g.id_bound + 1, g.id_bound + 2
    edges = list(g.edges())
    edges += [(sa, v) for v in sorted(aset)]
    edges += [(sr, v) for v in sorted(rset)]
    edges += [(sn, v) for v in sorted(nset)]
    aug = Graph(g.vertices | {sa, sr, sn}, edges, id_bound=sn + 1)
    parts = [frozenset({sa}), frozenset({sr}), frozenset({sn})]
    if aug.n <= _BRUTE_LIMIT:
        res = restricted_multiway_cut(aug, parts, aug.n, backend="brute")
    else:
        res = BOT
        for budget in range(aug.n + 1):
            res = restricted_multiway_cut(aug, parts, budget, backend="branch")
            if res is not BOT:
                break
    assert res is not BOT, "deleting all of V always separates"
    size, cut = res
    return SeparatorResult(cut=cut, size=size, witness_paths=None)
