"""Coloring refinement that recovers tight cuts, and the selection pipeline.

``extract_tight_occ`` takes a three-way coloring of vertices and edges and
strips it down to the largest tight cut it supports: elements that cannot
take part in one are recolored to R until the B and C classes stabilize.
The expensive step checks, for every small subset of C-colored vertices,
that the subset is an optimal transversal of the B-colored material hanging
off it; the marked subsets double as the tightness certificate.

``pipeline`` chains everything: shrink the graph to a reduction fixed
point, then sweep a universal coloring family and return the head of the
first tight cut of width at least k.  Such a head is part of an optimal
transversal of the input graph, by the safety of the reductions.
"""

from __future__ import annotations

import concurrent.futures
import itertools
import time
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import IO

from .color_coding import B, C, R, universal_function_family
from .graph_core import Graph, TwoColoring, components, two_coloring
from .occ_discovery import find_reducible_occ
from .occ_model import OCC, Certificate, TightOCC, validate_occ
from .occ_reduction import ReductionConfig, g_r_value, reduce_occ
from .oct_solvers import BOT, oct_compress

_COLORS = (B, C, R)


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class TriColoring:
    """Total three-way coloring of a graph's vertices and edges."""

    vertex_colors: Mapping[int, str]
    edge_colors: Mapping[tuple[int, int], str]

    def __post_init__(self):
        vc = dict(self.vertex_colors)
        ec = {_edge_key(*e): c for e, c in dict(self.edge_colors).items()}
        if len(ec) != len(dict(self.edge_colors)):
            raise ValueError("duplicate edge keys")
        for c in itertools.chain(vc.values(), ec.values()):
            if c not in _COLORS:
                raise ValueError(f"unknown color {c!r}")
        object.__setattr__(self, "vertex_colors", vc)
        object.__setattr__(self, "edge_colors", ec)

    def check_total(self, g: Graph) -> None:
        if set(self.vertex_colors) != set(g.vertices):
            raise ValueError("vertex coloring does not match the graph")
        if set(self.edge_colors) != set(g.edges()):
            raise ValueError("edge coloring does not match the graph")

    @classmethod
    def constant(cls, g: Graph, color: str) -> "TriColoring":
        return cls({v: color for v in g.vertices},
                   {e: color for e in g.edges()})

    @classmethod
    def from_occ(cls, g: Graph, occ: OCC) -> "TriColoring":
        """Color parts by membership; core edges B, the rest R."""
        vc = {}
        for v in g.vertices:
            vc[v] = B if v in occ.part_b else C if v in occ.part_c else R
        core = occ.part_b | occ.part_c
        ec = {e: B if e[0] in core and e[1] in core else R
              for e in g.edges()}
        return cls(vc, ec)


def tricoloring_to_lines(chi: TriColoring) -> list[str]:
    lines = [f"v {v} {c}" for v, c in sorted(chi.vertex_colors.items())]
    lines += [f"e {u} {v} {c}" for (u, v), c in sorted(chi.edge_colors.items())]
    return lines


def tricoloring_from_lines(lines: Iterable[str]) -> TriColoring:
    """Parse `v <id> <B|C|R>` / `e <u> <v> <B|C|R>` records (# comments)."""
    vc: dict[int, str] = {}
    ec: dict[tuple[int, int], str] = {}
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "v" and len(parts) == 3:
                vc[int(parts[1])] = parts[2]
            elif parts[0] == "e" and len(parts) == 4:
                ec[_edge_key(int(parts[1]), int(parts[2]))] = parts[3]
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {ln}: malformed coloring record") from None
    return TriColoring(vc, ec)


def read_tricoloring(src: str | IO[str]) -> TriColoring:
    if isinstance(src, str):
        with open(src) as fh:
            return tricoloring_from_lines(fh)
    return tricoloring_from_lines(src)


def write_tricoloring(chi: TriColoring, dst: str | IO[str]) -> None:
    text = "\n".join(tricoloring_to_lines(chi)) + "\n"
    if isinstance(dst, str):
        with open(dst, "w") as fh:
            fh.write(text)
    else:
        dst.write(text)


@dataclass(frozen=True)
class PipelineResult:
    """`conclusive` is False only when a coloring budget cut the sweep
    short: an empty `selected` then certifies nothing."""

    selected: frozenset[int] | None
    width: int
    reduction_iterations: int
    colorings_tried: int
    reduced_order: int
    wall_time_s: float
    conclusive: bool


def _assemble_certificate(gchi: Graph, bcomps, family) -> Certificate:
    # Prefix-union construction: process the marked subsets in marking
    # order; each contributes its not-yet-seen head vertices plus the
    # B-components newly absorbed by the grown prefix.  The pieces are
    # vertex-disjoint, and each keeps its heads optimal.
    covered_c: set[int] = set()
    taken = [False] * len(bcomps)
    cert_v: set[int] = set()
    cert_e: set[tuple[int, int]] = set()
    for ci in family:
        fresh = ci - covered_c
        prefix = covered_c | ci
        grown: set[int] = set(fresh)
        for idx, (comp, nbhd) in enumerate(bcomps):
            if not taken[idx] and nbhd <= prefix:
                taken[idx] = True
                grown |= comp
        if grown:
            sub = gchi.subgraph(grown)
            cert_v |= grown
            cert_e.update(sub.edges())
        covered_c = prefix
    return Certificate(frozenset(cert_v), frozenset(cert_e))


def _extract_with_stats(g: Graph, z: int, chi: TriColoring
                        ) -> tuple[TightOCC | None, int]:
    if z < 0:
        raise ValueError("certificate order must be non-negative")
    chi.check_total(g)
    vcol = dict(chi.vertex_colors)
    ecol = dict(chi.edge_colors)
    iterations = 0
    while True:
        iterations += 1
        assert iterations <= g.n + 2, "refinement failed to terminate"
        for e in ecol:
            if ecol[e] != R and (vcol[e[0]] == R or vcol[e[1]] == R):
                ecol[e] = R
        b_class = [v for v in g.sorted_vertices if vcol[v] == B]
        for comp in components(g, b_class):
            ok = isinstance(two_coloring(g, comp), TwoColoring) and \
                all(vcol[u] == C for u in g.neighborhood(comp))
            if ok:
                continue
            for v in comp:
                vcol[v] = R
                for u in g.neighbors(v):
                    ecol[_edge_key(u, v)] = R
        kept_v = [v for v in g.sorted_vertices if vcol[v] != R]
        kept_e = [e for e, c in ecol.items()
                  if c != R and vcol[e[0]] != R and vcol[e[1]] != R]
        gchi = Graph(kept_v, kept_e, id_bound=g.id_bound)
        c_class = frozenset(v for v in kept_v if vcol[v] == C)
        bcomps = [(comp, gchi.neighborhood(comp))
                  for comp in sorted(components(gchi, gchi.vertices - c_class),
                                     key=min)]
        marked: set[int] = set()
        family: list[frozenset[int]] = []
        for comp in sorted(components(gchi), key=min):
            local_c = sorted(comp & c_class)
            if not local_c:
                continue
            local_b = [(bc, nb) for bc, nb in bcomps if bc <= comp]
            for size in range(1, min(z, len(local_c)) + 1):
                for tpl in itertools.combinations(local_c, size):
                    csub = frozenset(tpl)
                    if csub <= marked:
                        continue
                    pool: set[int] = set(csub)
                    for bc, nb in local_b:
                        if nb <= csub:
                            pool |= bc
                    res = oct_compress(gchi.subgraph(pool), size)
                    assert res is not BOT  # deleting csub is always enough
                    if res.size == size:
                        marked |= csub
                        family.append(csub)
        unmarked = c_class - marked
        if unmarked:
            for v in unmarked:
                vcol[v] = R
            continue
        part_b = frozenset(v for v in kept_v if vcol[v] == B)
        if not part_b and not c_class:
            return None, iterations
        occ = validate_occ(g, (part_b, c_class, g.vertices - part_b - c_class))
        assert isinstance(occ, OCC), occ
        cert = _assemble_certificate(gchi, bcomps, family)
        return TightOCC(occ, z, cert), iterations


def extract_tight_occ(g: Graph, z: int, chi: TriColoring) -> TightOCC | None:
    """Largest tight cut of order z that the coloring supports, or None.

    The B and C classes of the output contain, respectively, the bipartite
    part and head of every z-tight cut that `chi` properly colors; None
    means it colors none.  The result carries a verified certificate built
    from the marked head subsets.
    """
    return _extract_with_stats(g, z, chi)[0]


def _reduce_to_fixpoint(g: Graph, k: int, cfg: ReductionConfig,
                        sep_backend: str, family_backend: str, seed: int
                        ) -> tuple[Graph, int]:
    cur = g
    rounds = 0
    for _ in range(max(g.n, 1)):
        occ = find_reducible_occ(cur, k, cfg, backend=sep_backend,
                                 family_backend=family_backend, seed=seed)
        if occ is None:
            break
        out = reduce_occ(cur, occ)
        if out.reduced.n >= cur.n:
            # replacement paths outweigh the removed interior; the
            # configured threshold is too small for net progress
            break
        cur = out.reduced
        rounds += 1
    return cur, rounds


_WORKER_TASK: tuple[Graph, int] | None = None


def _init_sweep_worker(gp: Graph, z: int) -> None:
    global _WORKER_TASK
    _WORKER_TASK = (gp, z)


def _sweep_job(payload: tuple[int, TriColoring]
               ) -> tuple[int, frozenset[int] | None, int]:
    idx, chi = payload
    gp, z = _WORKER_TASK
    t, _ = _extract_with_stats(gp, z, chi)
    if t is None:
        return idx, None, 0
    return idx, t.occ.part_c, t.occ.width


def _sweep_parallel(gp: Graph, k: int, z: int, colorings, jobs: int,
                    rounds: int, start: float,
                    max_colorings: int | None) -> PipelineResult:
    """Windowed scan: each window is evaluated concurrently and the lowest
    qualifying index wins, so the outcome (and the reported trial count)
    matches the sequential sweep exactly."""
    window = jobs * 4
    it = iter(colorings)
    consumed = 0
    with concurrent.futures.ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_sweep_worker,
            initargs=(gp, z)) as pool:
        while True:
            batch: list[tuple[int, TriColoring]] = []
            capped = False
            while len(batch) < window:
                if max_colorings is not None and consumed >= max_colorings:
                    capped = True
                    break
                chi = next(it, None)
                if chi is None:
                    break
                batch.append((consumed, chi))
                consumed += 1
            if not batch:
                if capped and next(it, None) is not None:
                    return PipelineResult(None, 0, rounds, consumed, gp.n,
                                          time.perf_counter() - start, False)
                return PipelineResult(None, 0, rounds, consumed, gp.n,
                                      time.perf_counter() - start, True)
            hits = [(idx, sel, width)
                    for idx, sel, width in pool.map(_sweep_job, batch)
                    if sel is not None and width >= k]
            if hits:
                idx, sel, width = min(hits)
                return PipelineResult(sel, width, rounds, idx + 1, gp.n,
                                      time.perf_counter() - start, True)


def _family_sweep(gp: Graph, k: int, z: int, cfg: ReductionConfig,
                  family_backend: str, seed: int, rounds: int,
                  start: float, max_colorings: int | None,
                  jobs: int = 1) -> PipelineResult:
    domain = list(gp.sorted_vertices) + sorted(gp.edges())
    if not domain:
        return PipelineResult(None, 0, rounds, 0, gp.n,
                              time.perf_counter() - start, True)
    target = 2 * k * z * z * g_r_value(cfg, 2 * k) ** 2
    fam = universal_function_family(domain, _COLORS,
                                    min(target, len(domain)),
                                    backend=family_backend, seed=seed)
    colorings = (TriColoring({v: member[v] for v in gp.vertices},
                             {e: member[e] for e in gp.edges()})
                 for member in fam.members)
    if jobs > 1:
        return _sweep_parallel(gp, k, z, colorings, jobs, rounds, start,
                               max_colorings)
    tried = 0
    for chi in colorings:
        if max_colorings is not None and tried >= max_colorings:
            return PipelineResult(None, 0, rounds, tried, gp.n,
                                  time.perf_counter() - start, False)
        tried += 1
        t, _ = _extract_with_stats(gp, z, chi)
        if t is not None and t.occ.width >= k:
            return PipelineResult(t.occ.part_c, t.occ.width, rounds,
                                  tried, gp.n,
                                  time.perf_counter() - start, True)
    return PipelineResult(None, 0, rounds, tried, gp.n,
                          time.perf_counter() - start, True)


def run_pipeline(g: Graph, k: int, z: int,
                 cfg: ReductionConfig | None = None,
                 hint: TriColoring | OCC | None = None,
                 sep_backend: str = "product",
                 family_backend: str = "auto",
                 seed: int = 0,
                 max_colorings: int | None = None,
                 jobs: int = 1) -> PipelineResult:
    """Full pipeline with counters; see `pipeline` for the contract.

    ``jobs`` > 1 evaluates coloring trials in a process pool; selection
    stays deterministic (lowest qualifying family index), so the result
    fields do not depend on the job count.
    """
    if not 0 <= z <= k:
        raise ValueError("need k >= z >= 0")
    if not isinstance(jobs, int) or jobs < 1:
        raise ValueError("jobs must be a positive integer")
    if cfg is None:
        cfg = ReductionConfig()
    start = time.perf_counter()
    if isinstance(hint, TriColoring):
        t, _ = _extract_with_stats(g, z, hint)
        found = t is not None and t.occ.width >= k
        return PipelineResult(t.occ.part_c if found else None,
                              t.occ.width if found else 0, 0, 1, g.n,
                              time.perf_counter() - start, True)
    if isinstance(hint, OCC):
        res = validate_occ(g, hint)
        if not isinstance(res, OCC):
            raise ValueError(f"invalid hint: {res}")
        out = reduce_occ(g, hint)
        reduced = out.reduced if out.reduced.n < g.n else g
        rounds = 1 if reduced is not g else 0
        return _family_sweep(reduced, k, z, cfg, family_backend, seed,
                             rounds, start, max_colorings, jobs)
    if hint is not None:
        raise ValueError("hint must be a TriColoring or an OCC")
    reduced, rounds = _reduce_to_fixpoint(g, k, cfg, sep_backend,
                                          family_backend, seed)
    return _family_sweep(reduced, k, z, cfg, family_backend, seed, rounds,
                         start, max_colorings, jobs)


def pipeline(g: Graph, k: int, z: int, cfg: ReductionConfig | None = None,
             **kw) -> frozenset[int] | None:
    """At least k vertices of some minimum odd cycle transversal, or None.

    None certifies that no graph reachable by the safe reductions carries
    a tight cut of width at least k and order z.  Success returns the head
    of the first such cut found; headship survives the reductions, so the
    vertices belong to a minimum transversal of the input graph itself.
    """
    return run_pipeline(g, k, z, cfg, **kw).selected


def pipeline_hinted(g: Graph, k: int, z: int, hint: TriColoring | OCC,
                    cfg: ReductionConfig | None = None,
                    **kw) -> frozenset[int] | None:
    """`pipeline`, but steered: a TriColoring hint is used as the single
    coloring (no reduction, no family); an OCC hint replaces discovery
    with one reduction step before the usual family sweep."""
    if hint is None:
        raise ValueError("hint required; use pipeline() instead")
    return run_pipeline(g, k, z, cfg, hint=hint, **kw).selected
