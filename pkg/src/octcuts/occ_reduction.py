"""Marking and shrinking around an OCC.

Given a valid cut (X_B, X_C, X_R), the marking scheme builds an auxiliary
graph that encodes every separation problem the cut part could impose on
the kept part, and keeps a cut covering set B* of it.  Everything in
X_B ∖ B* can then be discarded, provided the parities of connections it
offered between the surviving anchors are preserved; the reduction re-wires
those with fresh degree-2 replacement paths.

The progress threshold g_r is configuration.  Paper mode is the closed
form with the covering constant; it is astronomically large and exists for
fidelity.  Custom mode takes polynomial coefficients and is what tests and
desk-scale runs use.  Every safety property holds for any valid OCC no
matter the threshold; g_r only decides which cuts are worth reducing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .cut_covering import cut_covering_set
from .graph_core import Graph, TwoColoring, components, two_coloring
from .occ_model import OCC, OccViolation, validate_occ


@dataclass(frozen=True)
class ReductionConfig:
    covering_constant_c: int = 1
    g_r_mode: str = "custom"
    custom_coeffs: tuple = (4,)

    def __post_init__(self):
        if self.g_r_mode not in ("paper", "custom"):
            raise ValueError(f"unknown g_r mode {self.g_r_mode!r}")
        if self.covering_constant_c < 1:
            raise ValueError("covering constant must be positive")
        if self.g_r_mode == "custom":
            if not self.custom_coeffs:
                raise ValueError("custom mode needs coefficients")
            if any(c < 0 for c in self.custom_coeffs):
                raise ValueError("negative coefficients break monotonicity")


def g_r_value(cfg: ReductionConfig, x: int) -> int:
    """Progress threshold at width x (monotone in x)."""
    if cfg.g_r_mode == "paper":
        c = cfg.covering_constant_c
        return (6 * (2 ** 8 * c + 1) ** 2 + 2 ** 8 * c) * x ** 16
    return sum(co * x ** i for i, co in enumerate(cfg.custom_coeffs))


def parse_gr(text: str) -> ReductionConfig:
    """CLI shorthand: "paper" or "custom:c0,c1,..." (constant term first)."""
    if text == "paper":
        return ReductionConfig(g_r_mode="paper")
    if text.startswith("custom:"):
        try:
            coeffs = tuple(int(t) for t in text[len("custom:"):].split(","))
        except ValueError:
            raise ValueError(f"bad coefficient list in {text!r}") from None
        return ReductionConfig(g_r_mode="custom", custom_coeffs=coeffs)
    raise ValueError(f"cannot parse threshold spec {text!r}")


@dataclass(frozen=True)
class ReductionOutcome:
    reduced: Graph
    b_star: frozenset[int]
    replacement_paths: Mapping[tuple[int, int, int], tuple[int, ...]]
    common_vertices: frozenset[int]


def _checked(g: Graph, occ) -> OCC:
    res = validate_occ(g, occ)
    if isinstance(res, OccViolation):
        raise ValueError(f"invalid occ: {res}")
    return res


def mark_b_star(g: Graph, occ) -> tuple[frozenset[int], TwoColoring]:
    """Covering-marked subset of the kept part, plus the coloring used.

    The auxiliary graph is a copy of g[X_B] with two terminals per cut
    vertex v; the copy with superscript b collects v's kept neighbors of
    color b, so cutting terminal pairs apart realizes every (A, R, N)
    problem the cut part can impose.
    """
    occ = _checked(g, occ)
    f_x = two_coloring(g, occ.part_b)
    assert isinstance(f_x, TwoColoring)
    base = g.id_bound
    aux_vertices = set(occ.part_b)
    aux_edges = [e for e in g.edges()
                 if e[0] in occ.part_b and e[1] in occ.part_b]
    terminals = []
    for i, v in enumerate(sorted(occ.part_c)):
        copies = (base + 2 * i, base + 2 * i + 1)
        terminals.extend(copies)
        aux_vertices.update(copies)
        for u in g.neighbors(v):
            if u in occ.part_b:
                aux_edges.append((copies[f_x[u]], u))
    aux = Graph(aux_vertices, aux_edges, id_bound=base + 2 * len(occ.part_c))
    covered = cut_covering_set(aux, terminals, s=3)
    return covered & occ.part_b, f_x


def parity_connection(g: Graph, interior, u: int, v: int, p: int) -> bool:
    """Is there a (u,v)-path with at least one internal vertex, all
    internals inside `interior`, of edge-parity p?

    Decided per component of g[interior] from the partite sides of the
    endpoints' neighborhoods; a direct u-v edge never counts.
    """
    interior = frozenset(interior)
    if u in interior or v in interior:
        raise ValueError("endpoints must lie outside the interior")
    if p not in (0, 1):
        raise ValueError("parity is 0 or 1")
    for comp in components(g, interior):
        col = two_coloring(g, comp)
        assert isinstance(col, TwoColoring), "interior must be bipartite"
        side_u = {col[w] for w in g.neighbors(u) if w in comp}
        if not side_u:
            continue
        side_v = {col[w] for w in g.neighbors(v) if w in comp}
        if u == v:
            if p == 1:
                if len(side_u) == 2:
                    return True
            else:
                counts = [0, 0]
                for w in g.neighbors(u):
                    if w in comp:
                        counts[col[w]] += 1
                if max(counts) >= 2:
                    return True
        elif p == 0:
            if side_u & side_v:
                return True
        else:
            if (0 in side_u and 1 in side_v) or (1 in side_u and 0 in side_v):
                return True
    return False


def reduce_occ(g: Graph, occ) -> ReductionOutcome:
    """Shrink g around the marked part of an OCC.

    Unmarked kept vertices disappear; each (anchor, anchor, parity)
    connection they provided is replaced by two fresh internally-disjoint
    paths with two (even) or four (odd) new vertices, allocated
    contiguously above g.id_bound in loop order.
    """
    occ = _checked(g, occ)
    b_star, _ = mark_b_star(g, occ)
    interior = occ.part_b - b_star
    anchors = sorted(occ.part_c | b_star)
    keep = g.vertices - interior
    edges = [e for e in g.edges() if e[0] in keep and e[1] in keep]
    paths: dict[tuple[int, int, int], tuple[int, ...]] = {}
    nxt = g.id_bound
    new_vertices = []
    for i, u in enumerate(anchors):
        for v in anchors[i:]:
            for p in (0, 1):
                if not parity_connection(g, interior, u, v, p):
                    continue
                if p == 0:
                    x, xp = nxt, nxt + 1
                    nxt += 2
                    ids = (x, xp)
                    edges += [(u, x), (x, v), (u, xp), (xp, v)]
                else:
                    x, y, xp, yp = nxt, nxt + 1, nxt + 2, nxt + 3
                    nxt += 4
                    ids = (x, y, xp, yp)
                    edges += [(u, x), (x, y), (y, v), (u, xp), (xp, yp), (yp, v)]
                paths[(u, v, p)] = ids
                new_vertices.extend(ids)
    reduced = Graph(keep | set(new_vertices), edges, id_bound=nxt)
    return ReductionOutcome(reduced, b_star, paths, frozenset(keep))


def replacement_interiors(outcome: ReductionOutcome) -> frozenset[int]:
    """All fresh vertices added by the reduction."""
    out: set[int] = set()
    for ids in outcome.replacement_paths.values():
        out.update(ids)
    return frozenset(out)


# -- sidecar ----------------------------------------------------------------

def sidecar_to_lines(outcome: ReductionOutcome) -> list[str]:
    lines = []
    for (u, v, p), ids in sorted(outcome.replacement_paths.items()):
        lines.append(f"q {u} {v} {p} " + " ".join(str(i) for i in ids))
    return lines


def sidecar_from_lines(lines: Iterable[str]) -> dict[tuple[int, int, int], tuple[int, ...]]:
    out: dict[tuple[int, int, int], tuple[int, ...]] = {}
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] != "q" or len(toks) < 5:
            raise ValueError(f"line {ln}: expected 'q u v p ids...'")
        u, v, p = int(toks[1]), int(toks[2]), int(toks[3])
        if p not in (0, 1):
            raise ValueError(f"line {ln}: parity must be 0 or 1")
        key = (u, v, p)
        if key in out:
            raise ValueError(f"line {ln}: duplicate entry for {key}")
        out[key] = tuple(int(t) for t in toks[4:])
    return out
