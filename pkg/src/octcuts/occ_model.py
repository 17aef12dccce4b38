"""Odd cycle cut partitions, tightness, certificates, and their validators.

An OCC splits the vertices into a kept part B (must induce a bipartite
graph), a cut part C, and a rest R that must not touch B.  Deleting C then
either leaves B's side bipartite on its own, or C must be paid for; the cut
is *tight* when C is exactly as large as a minimum odd cycle transversal of
``g[B ∪ C]``.  A certificate pins the tightness to small pieces: an edge
subgraph whose components each carry at most z vertices of C, with C an
optimal transversal of it.

Text form (one block per cut)::

    occ B: 1 2 3 / C: 0 / R: 4 5
    cert-v: 0 1 2
    cert-e: 0-1 1-2 0-2

The two ``cert-`` lines are optional and may repeat; ids accumulate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import IO, Iterable

from octcuts.graph_core import Graph, TwoColoring, components, two_coloring
from octcuts.oct_solvers import oct_exact, odd_cycle_free

_OCT_EXACT_LIMIT = 64


@dataclass(frozen=True)
class OCC:
    part_b: frozenset[int]
    part_c: frozenset[int]
    part_r: frozenset[int]

    @property
    def width(self) -> int:
        return len(self.part_c)


@dataclass(frozen=True)
class Certificate:
    """An edge subgraph (not necessarily induced) witnessing tightness."""

    vertices: frozenset[int]
    cert_edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(
            self, "cert_edges",
            frozenset((min(u, v), max(u, v)) for u, v in self.cert_edges))

    def as_graph(self, id_bound: int | None = None) -> Graph:
        return Graph(self.vertices, self.cert_edges, id_bound=id_bound)


@dataclass(frozen=True)
class TightOCC:
    occ: OCC
    order_z: int
    certificate: Certificate | None = None


@dataclass(frozen=True)
class OccViolation:
    """Why a partition fails to be an OCC, with a concrete witness."""

    condition: str
    witness: tuple

    def __str__(self) -> str:
        if self.witness:
            return f"{self.condition}: {self.witness}"
        return self.condition


class CertificateError(ValueError):
    """A supplied certificate is malformed or does not certify."""


class TightVerdict(enum.Enum):
    TIGHT_CERTIFIED = "tight, certificate verified"
    TIGHT_NO_CERTIFICATE = "tight, no certificate supplied"
    NOT_TIGHT = "not tight"


@dataclass(frozen=True)
class ImposedSeparationInput:
    """Head-side data imposing a separation problem on the kept part.

    `c1` and `c2` are disjoint subsets of the cut part; `f_c` colors c1
    (arbitrarily, not necessarily properly); `f_b` properly 2-colors the
    kept part.  Extra assignments outside those domains are ignored.
    """

    c1: frozenset[int]
    c2: frozenset[int]
    f_c: TwoColoring
    f_b: TwoColoring

    def __post_init__(self):
        object.__setattr__(self, "c1", frozenset(self.c1))
        object.__setattr__(self, "c2", frozenset(self.c2))


def _as_parts(p) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    if isinstance(p, OCC):
        return p.part_b, p.part_c, p.part_r
    b, c, r = p
    return frozenset(b), frozenset(c), frozenset(r)


def validate_occ(g: Graph, p) -> OCC | OccViolation:
    """Check the three cut conditions; return the OCC or a violation.

    `p` is an OCC or a (B, C, R) triple.  The triple must partition V(g)
    (anything else is a usage error, not a violation).  Violations name
    the failed condition with a witness: an odd cycle inside B, an edge
    between B and R, or the emptiness of B ∪ C.
    """
    part_b, part_c, part_r = _as_parts(p)
    union = part_b | part_c | part_r
    if union != g.vertices or len(part_b) + len(part_c) + len(part_r) != len(union):
        raise ValueError("parts must partition the vertex set")
    col = two_coloring(g, part_b)
    if not isinstance(col, TwoColoring):
        return OccViolation("kept part induces an odd cycle", col)
    for u in sorted(part_b):
        for v in g.neighbors(u):
            if v in part_r:
                return OccViolation("edge between kept part and rest", (u, v))
    if not part_b and not part_c:
        return OccViolation("kept and cut parts both empty", ())
    return OCC(part_b, part_c, part_r)


def _certificate_violation(g: Graph, part_b: frozenset[int],
                           part_c: frozenset[int], cert: Certificate,
                           z: int) -> str | None:
    if not cert.vertices <= part_b | part_c:
        return "certificate leaves B ∪ C"
    if not part_c <= cert.vertices:
        return "certificate misses head vertices"
    for u, v in cert.cert_edges:
        if u not in cert.vertices or v not in cert.vertices:
            return f"certificate edge {u}-{v} misses its endpoints"
        if not g.has_edge(u, v):
            return f"certificate edge {u}-{v} not in the graph"
    h = cert.as_graph()
    for comp in components(h):
        head = part_c & comp
        if len(head) > z:
            return f"component with {len(head)} head vertices exceeds order {z}"
        sub = h.subgraph(comp)
        if not odd_cycle_free(sub, head):
            return "head is not a transversal of its certificate component"
        if oct_exact(sub).size != len(head):
            return "head is not optimal on its certificate component"
    return None


def validate_tight_occ(g: Graph, t: TightOCC) -> TightVerdict:
    """Decide tightness and, when a certificate is supplied, verify it.

    The underlying partition must be a valid OCC and the order must be
    non-negative (usage errors otherwise).  A supplied certificate that
    fails verification raises CertificateError rather than producing a
    verdict: it is bad input, not evidence against tightness.
    """
    res = validate_occ(g, t.occ)
    if isinstance(res, OccViolation):
        raise ValueError(f"underlying cut invalid ({res})")
    if t.order_z < 0:
        raise ValueError("certificate order must be non-negative")
    core = t.occ.part_b | t.occ.part_c
    if len(core) > _OCT_EXACT_LIMIT:
        raise ValueError("kept-plus-cut part too large for the exact oracle")
    if oct_exact(g.subgraph(core)).size != t.occ.width:
        return TightVerdict.NOT_TIGHT
    if t.certificate is None:
        return TightVerdict.TIGHT_NO_CERTIFICATE
    why = _certificate_violation(g, t.occ.part_b, t.occ.part_c,
                                 t.certificate, t.order_z)
    if why is not None:
        raise CertificateError(why)
    return TightVerdict.TIGHT_CERTIFIED


def imposed_separation(g: Graph, occ: OCC, inp: ImposedSeparationInput
                       ) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """Evaluate the imposed separation sets (A, R, N) inside the kept part.

    A: kept vertices with a c1-neighbor of matching color; R: with a
    c1-neighbor of the opposite color; N: kept neighbors of c2.  The sets
    may overlap (overlaps force vertices into any separator downstream).
    """
    if not inp.c1 <= occ.part_c or not inp.c2 <= occ.part_c:
        raise ValueError("c1, c2 must lie in the cut part")
    if inp.c1 & inp.c2:
        raise ValueError("c1 and c2 must be disjoint")
    if not inp.c1 <= inp.f_c.domain:
        raise ValueError("f_c must color all of c1")
    if not occ.part_b <= inp.f_b.domain:
        raise ValueError("f_b must color all of the kept part")
    for u in occ.part_b:
        for v in g.neighbors(u):
            if v in occ.part_b and v > u and inp.f_b[u] == inp.f_b[v]:
                raise ValueError(f"f_b not proper: edge {u}-{v} monochromatic")
    a_set: set[int] = set()
    r_set: set[int] = set()
    for vb in occ.part_b:
        for vc in g.neighbors(vb):
            if vc in inp.c1:
                if inp.f_b[vb] == inp.f_c[vc]:
                    a_set.add(vb)
                else:
                    r_set.add(vb)
    n_set = g.neighborhood(inp.c2) & occ.part_b
    return frozenset(a_set), frozenset(r_set), frozenset(n_set)


def _component_profiles(h: Graph, x_c: frozenset[int]):
    """For each component D of h − x_c: (D, per-head neighbor side sets)."""
    profiles = []
    for d in components(h, h.vertices - x_c):
        col = two_coloring(h, d)
        assert isinstance(col, TwoColoring)
        sides: dict[int, set[int]] = {}
        for x in x_c:
            sides[x] = {col[v] for v in h.neighbors(x) if v in d}
        profiles.append((d, sides))
    return profiles


def _pair_path(sides_x: set[int], sides_y: set[int], parity: int,
               direct_edge: bool) -> bool:
    if parity == 0:
        return bool(sides_x & sides_y)
    if direct_edge:
        return True
    return (0 in sides_x and 1 in sides_y) or (1 in sides_x and 0 in sides_y)


def prune_certificate(g: Graph, x_c: Iterable[int], h: Certificate,
                      z: int) -> Certificate:
    """Drop certificate components that at least z siblings can stand in for.

    A component D of H − x_c is removable when (1) every head vertex that
    closes an odd cycle through D closes one through at least z other
    components, and (2) every head pair connected through D with some
    parity is so connected through at least z other components.  Removal
    repeats (rescanning from the lowest component) until stable; the
    optimal transversal size of the certificate is preserved throughout.
    """
    head = frozenset(x_c)
    why = _certificate_violation(g, h.vertices - head, head, h, z)
    if why is not None:
        raise CertificateError(why)
    verts = set(h.vertices)
    edges = set(h.cert_edges)

    while True:
        hg = Graph(verts, edges, id_bound=g.id_bound)
        full_comps = components(hg)
        profiles = _component_profiles(hg, head)
        removed = None
        for d, sides in profiles:
            hcomp = next(c for c in full_comps if d <= c)
            local_heads = head & hcomp
            ok = True
            for x in local_heads:
                if sides[x] == {0, 1}:  # odd cycle through x via d
                    others = sum(
                        1 for d2, s2 in profiles
                        if d2 is not d and s2[x] == {0, 1})
                    if others < z:
                        ok = False
                        break
            if ok:
                for x in sorted(local_heads):
                    for y in sorted(local_heads):
                        if y <= x:
                            continue
                        direct = hg.has_edge(x, y)
                        for parity in (0, 1):
                            if not _pair_path(sides[x], sides[y], parity, direct):
                                continue
                            others = sum(
                                1 for d2, s2 in profiles
                                if d2 is not d
                                and _pair_path(s2[x], s2[y], parity, direct))
                            if others < z:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        break
            if ok:
                removed = d
                break
        if removed is None:
            break
        verts -= removed
        edges = {(u, v) for u, v in edges if u in verts and v in verts}
    return Certificate(frozenset(verts), frozenset(edges))


def shrink_bipartite_part(g: Graph, t: TightOCC) -> TightOCC:
    """Rebuild a tight cut around its pruned certificate.

    Kept-part components the pruned certificate never touches move to the
    rest part; the head and order stay.  Requires a certificate.
    """
    if t.certificate is None:
        raise ValueError("shrinking needs a certificate")
    verdict = validate_tight_occ(g, t)
    if verdict is not TightVerdict.TIGHT_CERTIFIED:
        raise ValueError(f"input cut must be tight and certified ({verdict.value})")
    pruned = prune_certificate(g, t.occ.part_c, t.certificate, t.order_z)
    keep: set[int] = set()
    for comp in components(g, t.occ.part_b):
        if comp & pruned.vertices:
            keep |= comp
    new_b = frozenset(keep)
    if not new_b and not t.occ.part_c:
        # width 0 prunes the certificate to nothing; dropping every kept
        # component would leave no cut at all, so keep the input
        return t
    new_r = t.occ.part_r | (t.occ.part_b - new_b)
    return TightOCC(OCC(new_b, t.occ.part_c, new_r), t.order_z, pruned)


# -- text blocks ----------------------------------------------------------

def occ_to_lines(occ_or_tight) -> list[str]:
    if isinstance(occ_or_tight, TightOCC):
        occ = occ_or_tight.occ
        cert = occ_or_tight.certificate
    else:
        occ = occ_or_tight
        cert = None
    def ids(s):
        return " ".join(str(v) for v in sorted(s))
    lines = [f"occ B: {ids(occ.part_b)} / C: {ids(occ.part_c)} / R: {ids(occ.part_r)}"]
    if cert is not None:
        lines.append(f"cert-v: {ids(cert.vertices)}")
        lines.append("cert-e: " + " ".join(f"{u}-{v}"
                                           for u, v in sorted(cert.cert_edges)))
    return lines


def occ_from_lines(lines: Iterable[str]
                   ) -> tuple[tuple[frozenset[int], frozenset[int], frozenset[int]],
                              Certificate | None]:
    """Parse an occ block; returns the raw parts and an optional certificate.

    Validation against a graph is a separate step (validate_occ), so this
    returns plain sets rather than an OCC.
    """
    parts = None
    cert_v: set[int] = set()
    cert_e: set[tuple[int, int]] = set()
    saw_cert = False
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("occ"):
            if parts is not None:
                raise ValueError(f"line {ln}: second occ line")
            body = line[3:].strip()
            segs = [s.strip() for s in body.split("/")]
            if len(segs) != 3 or not segs[0].startswith("B:") \
                    or not segs[1].startswith("C:") or not segs[2].startswith("R:"):
                raise ValueError(f"line {ln}: malformed occ line")
            parts = tuple(frozenset(int(t) for t in seg[2:].split())
                          for seg in segs)
        elif line.startswith("cert-v:"):
            saw_cert = True
            cert_v.update(int(t) for t in line[7:].split())
        elif line.startswith("cert-e:"):
            saw_cert = True
            for tok in line[7:].split():
                u, _, v = tok.partition("-")
                cert_e.add((int(u), int(v)))
        else:
            raise ValueError(f"line {ln}: unknown record")
    if parts is None:
        raise ValueError("missing occ line")
    cert = Certificate(frozenset(cert_v), frozenset(cert_e)) if saw_cert else None
    return parts, cert


def write_occ(occ_or_tight, dst: str | IO[str]) -> None:
    text = "\n".join(occ_to_lines(occ_or_tight)) + "\n"
    if isinstance(dst, str):
        with open(dst, "w") as fh:
            fh.write(text)
    else:
        dst.write(text)


def read_occ(src: str | IO[str]):
    if isinstance(src, str):
        with open(src) as fh:
            return occ_from_lines(fh)
    return occ_from_lines(src)
