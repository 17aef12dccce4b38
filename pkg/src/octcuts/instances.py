"""Instance generators: planted tight cuts, hardness gadgets, random corpora.

Every generator is a pure function of its parameters and an explicit seed,
so a corpus can be regenerated byte-identically from its manifest line.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

from .graph_core import Graph
from .occ_model import OCC, Certificate, TightOCC


def gen_random(n: int, p: float, seed: int = 0) -> Graph:
    """Erdős-Rényi sample G(n, p) on vertex ids 0..n-1."""
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2)
             if rng.random() < p]
    return Graph.from_order(n, edges)


def _rest_params(rest_spec) -> tuple[int, float]:
    if rest_spec is None:
        return 0, 0.0
    try:
        n_rest, p = rest_spec
    except (TypeError, ValueError):
        raise ValueError("rest_spec must be None or an (n_rest, p) pair") from None
    if not isinstance(n_rest, int) or n_rest < 0:
        raise ValueError("rest size must be a non-negative integer")
    if not 0.0 <= p <= 1.0:
        raise ValueError("rest edge probability must lie in [0, 1]")
    return n_rest, float(p)


def gen_planted(k: int, z: int, rest_spec=None, seed: int = 0,
                cycle_len: int = 3) -> tuple[Graph, TightOCC]:
    """Plant a width-k tight cut of order z with a known certificate.

    Head vertices take ids 0..k-1.  Each head carries z vertex-disjoint odd
    cycles of ``cycle_len`` vertices (head included); the cycle bodies form
    the kept part, and the k*z cycles are returned as the certificate.

    ``rest_spec`` is None or an (n_rest, p) pair: n_rest extra vertices
    holding G(n_rest, p) noise among themselves, each attached to each head
    independently with probability p.  Noise never touches the kept part,
    so the planted partition survives whatever the rest looks like.
    """
    if not (isinstance(k, int) and isinstance(z, int)):
        raise ValueError("k and z must be integers")
    if not k >= z >= 1:
        raise ValueError("need k >= z >= 1")
    if not isinstance(cycle_len, int) or cycle_len < 3 or cycle_len % 2 == 0:
        raise ValueError("cycle_len must be an odd integer >= 3")
    n_rest, p = _rest_params(rest_spec)
    rng = random.Random(seed)

    heads = list(range(k))
    cert_edges: list[tuple[int, int]] = []
    bodies: list[int] = []
    nxt = k
    for h in heads:
        for _ in range(z):
            ring = [h] + list(range(nxt, nxt + cycle_len - 1))
            nxt += cycle_len - 1
            bodies.extend(ring[1:])
            cert_edges.extend((ring[i], ring[(i + 1) % cycle_len])
                              for i in range(cycle_len))

    edges = list(cert_edges)
    rest = list(range(nxt, nxt + n_rest))
    edges.extend((u, v) for u, v in itertools.combinations(rest, 2)
                 if rng.random() < p)
    edges.extend((u, h) for u in rest for h in heads if rng.random() < p)

    g = Graph.from_order(nxt + n_rest, edges)
    occ = OCC(frozenset(bodies), frozenset(heads), frozenset(rest))
    cert = Certificate(frozenset(heads) | frozenset(bodies),
                       frozenset(cert_edges))
    return g, TightOCC(occ, z, cert)


# --- 3-CNF handling (DIMACS) -------------------------------------------------

def cnf_from_lines(lines: Iterable[str]) -> tuple[int, list[tuple[int, ...]]]:
    """Parse DIMACS CNF text into (num_vars, clauses).

    Accepts `c` comment lines, one `p cnf <vars> <clauses>` problem line,
    and 0-terminated clauses that may span lines.  Clause arity is not
    checked here; gen_sat_reduction insists on exactly three literals.
    """
    num_vars = None
    num_clauses = None
    tokens: list[int] = []
    for ln, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None or len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {ln}: malformed problem line")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            if num_vars < 0 or num_clauses < 0:
                raise ValueError(f"line {ln}: negative counts")
            continue
        if num_vars is None:
            raise ValueError(f"line {ln}: clause before problem line")
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError:
            raise ValueError(f"line {ln}: non-integer literal") from None
    if num_vars is None:
        raise ValueError("missing problem line")
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for lit in tokens:
        if lit == 0:
            clauses.append(tuple(cur))
            cur = []
            continue
        if abs(lit) > num_vars:
            raise ValueError(f"literal {lit} out of range")
        cur.append(lit)
    if cur:
        raise ValueError("unterminated clause (missing trailing 0)")
    if len(clauses) != num_clauses:
        raise ValueError(f"problem line declares {num_clauses} clauses, "
                         f"found {len(clauses)}")
    return num_vars, clauses


def read_cnf(src: str | IO[str]) -> tuple[int, list[tuple[int, ...]]]:
    if isinstance(src, str):
        with open(src) as fh:
            return cnf_from_lines(fh)
    return cnf_from_lines(src)


def cnf_to_lines(num_vars: int, clauses: Sequence[Sequence[int]],
                 comments: Iterable[str] = ()) -> list[str]:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {num_vars} {len(clauses)}")
    lines.extend(" ".join(str(l) for l in clause) + " 0" for clause in clauses)
    return lines


def _checked_formula(formula) -> tuple[int, list[tuple[int, int, int]]]:
    try:
        num_vars, clauses = formula
    except (TypeError, ValueError):
        raise ValueError("formula must be a (num_vars, clauses) pair") from None
    if not isinstance(num_vars, int) or num_vars < 0:
        raise ValueError("variable count must be a non-negative integer")
    out = []
    for clause in clauses:
        lits = tuple(clause)
        if len(lits) != 3:
            raise ValueError(f"clause {lits} must have exactly 3 literals")
        for lit in lits:
            if not isinstance(lit, int) or lit == 0 or abs(lit) > num_vars:
                raise ValueError(f"bad literal {lit!r} in clause {lits}")
        out.append(lits)
    return num_vars, out


def gen_sat_reduction(formula) -> tuple[Graph, int, list[tuple[int, int, int]]]:
    """Encode a 3-CNF formula as a lower-bounded transversal instance.

    ``formula`` is a (num_vars, clauses) pair, each clause exactly three
    nonzero literals in the DIMACS sign convention.  Returns (graph, k,
    triangles) with k = num_vars + 2*len(clauses): the formula is
    satisfiable exactly when the graph has a transversal of size k, and
    ``triangles`` lists k pairwise disjoint triangles witnessing that no
    smaller transversal exists.

    Variable i (1-based) owns vertices 3(i-1) (positive literal),
    3(i-1)+1 (negated literal) and 3(i-1)+2 (apex), wired as a triangle.
    Clause j (0-based) owns the 8 vertices 3n+8j .. 3n+8j+7: a ladder of
    six rung vertices a1..a6 whose consecutive pairs close triangles
    through the clause's literal vertices (a1-a2 via literal 1, a3-a4 via
    literal 2, a5-a6 via literal 3) and two cap vertices closing the
    (a2,a3) and (a4,a5) triangles.
    """
    num_vars, clauses = _checked_formula(formula)

    def literal_vertex(lit: int) -> int:
        return 3 * (abs(lit) - 1) + (0 if lit > 0 else 1)

    edges: list[tuple[int, int]] = []
    triangles: list[tuple[int, int, int]] = []
    for i in range(num_vars):
        a = 3 * i
        edges += [(a, a + 1), (a, a + 2), (a + 1, a + 2)]
        triangles.append((a, a + 1, a + 2))
    for j, clause in enumerate(clauses):
        s1, s2, s3 = (literal_vertex(lit) for lit in clause)
        base = 3 * num_vars + 8 * j
        a1, a2, a3, a4, a5, a6, b1, b2 = range(base, base + 8)
        edges += [(a1, a2), (a2, a3), (a3, a4), (a4, a5), (a5, a6)]
        edges += [(a1, s1), (s1, a2), (a3, s2), (s2, a4), (a5, s3), (s3, a6)]
        edges += [(a2, b1), (b1, a3), (a4, b2), (b2, a5)]
        triangles += [(a2, a3, b1), (a4, a5, b2)]
    g = Graph.from_order(3 * num_vars + 8 * len(clauses), edges)
    return g, num_vars + 2 * len(clauses), triangles


# --- multicolored clique encoding --------------------------------------------

@dataclass(frozen=True)
class MccLayout:
    """Vertex id assignment for the clique-encoding construction.

    ``u_ids`` maps (original vertex, missing color) pairs to ids of the
    clique block; ``edge_ids`` maps each original edge (as a sorted pair)
    to its (x, x', y, y') quadruple.  ``order`` is the total vertex count.
    """

    k: int
    k_prime: int
    order: int
    u_ids: Mapping[tuple[int, int], int]
    edge_ids: Mapping[tuple[int, int], tuple[int, int, int, int]]

    def u_block(self, i: int) -> list[int]:
        return sorted(uid for (orig, _), uid in self.u_ids.items()
                      if orig == i)


def _check_mcc_inputs(g: Graph, color: Mapping[int, int], k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise ValueError("need k >= 2")
    if set(color) != set(g.vertices):
        raise ValueError("color map must cover exactly the vertex set")
    for v, c in color.items():
        if not isinstance(c, int) or not 1 <= c <= k:
            raise ValueError(f"vertex {v} has color {c!r} outside 1..{k}")
    for u, v in g.edges():
        if color[u] == color[v]:
            raise ValueError(f"edge {u}-{v} joins two color-{color[u]} vertices")


def mcc_layout(g: Graph, color: Mapping[int, int], k: int) -> MccLayout:
    """Assign ids for gen_mcc_reduction: clique block first, then one
    (x, x', y, y') quadruple per original edge in lexicographic order."""
    _check_mcc_inputs(g, color, k)
    u_ids: dict[tuple[int, int], int] = {}
    nxt = 0
    for i in g.sorted_vertices:
        for ell in range(1, k + 1):
            if ell == color[i]:
                continue
            u_ids[(i, ell)] = nxt
            nxt += 1
    edge_ids: dict[tuple[int, int], tuple[int, int, int, int]] = {}
    for u, v in g.edges():
        edge_ids[(u, v)] = (nxt, nxt + 1, nxt + 2, nxt + 3)
        nxt += 4
    return MccLayout(k, k * (k - 1), nxt, u_ids, edge_ids)


def gen_mcc_reduction(g: Graph, color: Mapping[int, int],
                      k: int) -> tuple[Graph, int]:
    """Encode multicolored-clique detection as width-bounded tight-cut
    detection at order 1.

    ``color`` assigns each vertex of g a class in 1..k; edges inside one
    class are rejected (such edges can never join a multicolored clique,
    and the construction has no vertex to anchor them to).  The returned
    width budget is k' = k(k-1): g has a clique with one vertex per class
    exactly when the output graph has a non-empty 1-tight cut of width k'.

    Each original vertex i becomes a block of k-1 clique vertices, one per
    color it does not carry; all blocks together form one big clique.
    Each original edge ij gets two pendant triangles-in-waiting: a pair
    x, x' commonly adjacent to the blocks of i and j with x' tied back to
    i's copy of j's color, and a symmetric pair y, y' tied to j's copy of
    i's color.
    """
    lay = mcc_layout(g, color, k)
    edges: list[tuple[int, int]] = list(
        itertools.combinations(sorted(lay.u_ids.values()), 2))
    for (i, j), (x, xp, y, yp) in sorted(lay.edge_ids.items()):
        block = sorted(set(lay.u_block(i)) | set(lay.u_block(j)))
        edges.extend((u, x) for u in block)
        edges.extend((u, y) for u in block)
        edges += [(x, xp), (xp, lay.u_ids[(i, color[j])]),
                  (y, yp), (yp, lay.u_ids[(j, color[i])])]
    return Graph.from_order(lay.order, edges), lay.k_prime
