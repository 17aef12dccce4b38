"""Locate odd cycle cuts worth shrinking.

The entry point is ``find_reducible_occ``: it walks a universal family of
{B, C} colorings, and for each coloring scans the B-side components for one
that can be split off as the bipartite part of a cut of width at most 2k.
Any hit is large enough (relative to the configured threshold g_r) for the
reduction in :mod:`octcuts.occ_reduction` to shrink the graph.

Splitting off a component is delegated to ``bipartite_separation``, a
2-approximation: success certifies a separator of size at most 2k, failure
certifies that none of size at most k exists.  An exact backend covers the
small budgets where the gap matters.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping

from .color_coding import B, occ_coloring_from_set, universal_set
from .flows_separators import vertex_cut_with_undeletable
from .graph_core import Graph, TwoColoring, components, two_coloring
from .occ_model import OCC, validate_occ
from .occ_reduction import ReductionConfig, g_r_value

Separation = tuple[frozenset[int], frozenset[int]]


def _checked_seed_part(g: Graph, z: frozenset[int]) -> TwoColoring:
    if not z:
        raise ValueError("z must be non-empty")
    if not z <= g.vertices:
        raise ValueError("z contains unknown vertices")
    if len(components(g, z)) != 1:
        raise ValueError("g[z] must be connected")
    col = two_coloring(g, z)
    if not isinstance(col, TwoColoring):
        raise ValueError("g[z] must be bipartite")
    return col


def _product_separation(g: Graph, k: int, z: frozenset[int],
                        col: TwoColoring) -> Separation | None:
    # Parity-tracking product: vertex v becomes 2v and 2v+1, an edge uv
    # connects opposite parities.  A path from the z-copy on its proper
    # side to the copy on the wrong side projects onto an odd closed walk,
    # so a vertex cut between the two copy sets is exactly what breaks
    # every odd cycle reachable from z.
    nodes = [2 * v + b for v in g.sorted_vertices for b in (0, 1)]
    prod_edges = []
    for u, v in g.edges():
        prod_edges.append((2 * u, 2 * v + 1))
        prod_edges.append((2 * u + 1, 2 * v))
    prod = Graph(nodes, prod_edges, id_bound=2 * g.id_bound)
    sources = [2 * v + col[v] for v in z]
    sinks = [2 * v + 1 - col[v] for v in z]
    shielded = [2 * v + b for v in z for b in (0, 1)]
    res = vertex_cut_with_undeletable(prod, sources, sinks, shielded)
    if res.size > 2 * k:
        return None
    s = frozenset(w // 2 for w in res.cut)
    c = next(comp for comp in components(g, g.vertices - s) if z <= comp)
    return c, s


def _exact_separation(g: Graph, k: int, z: frozenset[int]) -> Separation | None:
    # Any valid (C', S') can be trimmed to the component of z in g - S',
    # so scanning components of candidate separators is exhaustive.
    free = sorted(g.vertices - z)
    for size in range(min(k, len(free)) + 1):
        for cand in itertools.combinations(free, size):
            s = frozenset(cand)
            comp = next(c for c in components(g, g.vertices - s) if z <= c)
            if isinstance(two_coloring(g, comp), TwoColoring):
                return comp, s
    return None


def bipartite_separation(g: Graph, k: int, z: Iterable[int],
                         backend: str = "product") -> Separation | None:
    """Split a bipartite piece `C ⊇ z` off `g` with a small boundary.

    Returns `(C, S)` with `g[C]` bipartite, `N(C) ⊆ S`, `C ∩ S = ∅` and
    `|S| ≤ 2k`, or None.  None certifies that no such pair with `|S| ≤ k`
    exists; budgets strictly between k and 2k are resolved conservatively
    (the "product" backend may return None even though a separator of
    size ≤ 2k exists).  The "exact" backend enumerates separators up to
    size k and is intended for small graphs and cross-checks.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    zs = frozenset(z)
    col = _checked_seed_part(g, zs)
    if backend == "product":
        return _product_separation(g, k, zs, col)
    if backend == "exact":
        return _exact_separation(g, k, zs)
    raise ValueError(f"unknown backend {backend!r}")


def find_occ_colored(g: Graph, k: int, ell: int, chi: Mapping[int, str],
                     backend: str = "product") -> OCC | None:
    """First cut whose bipartite part is a large B-colored component.

    Scans the components of the B class of `chi` in ascending order of
    their smallest vertex, skipping those smaller than `ell` or odd.  The
    first component that bipartite_separation can split off yields the
    cut (component, separator, rest).  None means `chi` does not witness
    a qualifying cut at this budget.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    b_class = [v for v in g.sorted_vertices if chi.get(v) == B]
    comps = sorted(components(g, b_class), key=min)
    for z in comps:
        if len(z) < ell:
            continue
        if not isinstance(two_coloring(g, z), TwoColoring):
            continue
        hit = bipartite_separation(g, k, z, backend=backend)
        if hit is None:
            continue
        c, s = hit
        occ = validate_occ(g, (c, s, g.vertices - c - s))
        assert isinstance(occ, OCC), occ
        return occ
    return None


def find_reducible_occ(g: Graph, k: int, cfg: ReductionConfig | None = None,
                       backend: str = "product",
                       family_backend: str = "auto",
                       seed: int = 0) -> OCC | None:
    """Search all colorings of a universal family for a reducible cut.

    A returned cut has width at most 2k and a bipartite part larger than
    g_r(width), which is what reduce_occ needs to make progress.  None
    after the whole family certifies that no single-component cut of
    width ≤ k with more than g_r(2k) bipartite vertices exists: the
    family is (n, s)-universal for s = k + g_r(2k) + 1, so some member
    C-colors exactly the head of any such cut while leaving a connected
    ell-vertex chunk of its bipartite part B-colored.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if cfg is None:
        cfg = ReductionConfig()
    if not g.vertices:
        return None
    threshold = g_r_value(cfg, 2 * k)
    ell = threshold + 1
    s = min(k + threshold + 1, g.n)
    fam = universal_set(g.sorted_vertices, s, backend=family_backend,
                        seed=seed)
    for member in fam.members:
        chi = occ_coloring_from_set(g, member)
        occ = find_occ_colored(g, k, ell, chi, backend=backend)
        if occ is None:
            continue
        assert len(occ.part_b) > g_r_value(cfg, len(occ.part_c))
        return occ
    return None
