"""Deterministic cut covering sets.

Given terminals T in a graph, a cut covering set Z is a vertex set that
contains, for every generalized sided split of T that admits a small
restricted multiway cut, at least one minimum such cut.  The point is that
downstream marking only ever needs cuts against splits of T, so everything
outside Z is disposable.

Construction: walk the non-terminals in ascending id order and test each one
for essentiality.  A vertex is redundant when, for every split, bypassing it
leaves the minimum cut size unchanged (infeasible-over-budget on both sides
also counts as unchanged).  Redundant vertices accumulate into a set R that
is bypassed in all later queries; Z is everything that survives.
"""

from __future__ import annotations

from itertools import product

from .flows_separators import BOT, restricted_multiway_cut
from .graph_core import Graph, bypass


def sided_splits(terminals, s: int):
    """Enumerate the (s+2)^|T| generalized splits of `terminals`.

    Each terminal gets a digit: 0 keeps it around but deletable, 1..s pins
    it to a side, s+1 deletes it up front.  Yields (tx, parts) pairs with
    empty sides dropped.  Splits with fewer than two populated sides are
    skipped: the empty cut solves them on any graph, so they can never
    witness essentiality.  Label-permuted duplicates are emitted once.
    """
    terms = sorted(terminals)
    seen = set()
    for digits in product(range(s + 2), repeat=len(terms)):
        if len({d for d in digits if 1 <= d <= s}) < 2:
            continue
        tx = frozenset(t for t, d in zip(terms, digits) if d == s + 1)
        parts = tuple(sorted(
            (frozenset(t for t, d in zip(terms, digits) if d == i)
             for i in range(1, s + 1) if i in digits),
            key=sorted))
        key = (tx, frozenset(parts))
        if key in seen:
            continue
        seen.add(key)
        yield tx, parts


def cut_covering_set(g: Graph, t, s: int, backend: str = "auto") -> frozenset[int]:
    """Covering set for terminals `t` with up to `s` sides per split.

    Always contains `t`.  The budget per query is |t| + 1, one more than
    any cut the covering property has to account for, so a genuine change
    in the optimum is never masked by both queries maxing out.

    Bypassing a vertex preserves every cut that avoids it and removes every
    cut through it, so the optimum can only grow.  That gives two shortcuts
    over the literal two-queries-per-split loop: an infeasible split stays
    infeasible, and a split whose cached minimum cut avoids v cannot change.
    Only splits whose cached cut uses v need the second query, and when v
    turns out redundant the fresh answers simply replace the cached ones
    (they are computed on exactly the next epoch's base graph).
    """
    terms = frozenset(t)
    if not terms <= g.vertices:
        raise ValueError("terminals outside the graph")
    if s < 1:
        raise ValueError("need at least one side")
    budget = len(terms) + 1
    splits = list(sided_splits(terms, s))
    redundant: set[int] = set()
    base_cache: dict[frozenset, Graph] = {}
    x_state: dict[int, object] = {}

    def query(graph, parts):
        res = restricted_multiway_cut(graph, parts, budget, backend=backend)
        return res if res is BOT else (res[0], res[1])

    for v in sorted(g.vertices - terms):
        essential = False
        pending: dict[int, object] = {}
        for idx, (tx, parts) in enumerate(splits):
            base = base_cache.get(tx)
            if base is None:
                base = bypass(g.without(tx), redundant)
                base_cache[tx] = base
            xs = x_state.get(idx)
            if xs is None:
                xs = query(base, parts)
                x_state[idx] = xs
            if xs is BOT or v not in xs[1]:
                continue
            ys = query(bypass(base, (v,)), parts)
            if ys is BOT or ys[0] != xs[0]:
                essential = True
                break
            pending[idx] = ys
        if not essential:
            redundant.add(v)
            x_state.update(pending)
            for tx, base in base_cache.items():
                base_cache[tx] = bypass(base, (v,))
    return g.vertices - redundant
