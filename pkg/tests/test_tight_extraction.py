import random

import pytest

import oracles
from octcuts.color_coding import B, C, R
from octcuts.graph_core import Graph
from octcuts.occ_model import OCC, TightVerdict, validate_tight_occ
from octcuts.oct_solvers import is_subset_of_optimal
from octcuts.tight_extraction import (
    PipelineResult,
    TriColoring,
    _extract_with_stats,
    extract_tight_occ,
    pipeline,
    pipeline_hinted,
    run_pipeline,
    tricoloring_from_lines,
    tricoloring_to_lines,
)


def triangle_with_tail():
    g = Graph.from_order(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
    chi = TriColoring({0: C, 1: B, 2: B, 3: R},
                      {(0, 1): B, (1, 2): B, (0, 2): B, (0, 3): R})
    return g, chi


def flowers(heads, petals_each, blob_edges=()):
    """Disjoint odd petals per head plus an optional blob on the heads."""
    edges = []
    nxt = heads
    for h in range(heads):
        for _ in range(petals_each):
            a, b = nxt, nxt + 1
            nxt += 2
            edges += [(h, a), (a, b), (b, h)]
    base = nxt
    for u, v in blob_edges:
        edges.append((u + base if u >= 0 else -u - 1, v + base))
        nxt = max(nxt, max(u, v) + base + 1)
    return Graph.from_order(nxt, edges), base


def planted_coloring(g, part_b, part_c):
    return TriColoring.from_occ(
        g, OCC(part_b, part_c, g.vertices - part_b - part_c))


def random_tricoloring(rng, g):
    return TriColoring(
        {v: rng.choice((B, B, C, R)) for v in g.vertices},
        {e: rng.choice((B, B, R)) for e in g.edges()})


class TestTriColoring:
    def test_edge_key_normalized(self):
        chi = TriColoring({0: B, 1: B}, {(1, 0): C})
        assert chi.edge_colors == {(0, 1): C}

    def test_duplicate_edge_keys(self):
        with pytest.raises(ValueError):
            TriColoring({}, {(0, 1): B, (1, 0): C})

    def test_unknown_color(self):
        with pytest.raises(ValueError):
            TriColoring({0: "X"}, {})

    def test_check_total(self):
        g = Graph.from_order(3, [(0, 1), (1, 2)])
        TriColoring.constant(g, R).check_total(g)
        with pytest.raises(ValueError):
            TriColoring({0: B, 1: B}, {(0, 1): B, (1, 2): B}).check_total(g)
        with pytest.raises(ValueError):
            TriColoring({0: B, 1: B, 2: B}, {(0, 1): B}).check_total(g)

    def test_from_occ(self):
        g = Graph.from_order(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
        chi = TriColoring.from_occ(
            g, OCC(frozenset({1, 2}), frozenset({0}), frozenset({3})))
        assert chi.vertex_colors == {0: C, 1: B, 2: B, 3: R}
        assert chi.edge_colors[(0, 1)] == B
        assert chi.edge_colors[(0, 3)] == R


class TestExtract:
    def test_triangle(self):
        g, chi = triangle_with_tail()
        t = extract_tight_occ(g, 1, chi)
        assert t.occ.part_c == frozenset({0})
        assert t.occ.part_b == frozenset({1, 2})
        assert validate_tight_occ(g, t) is TightVerdict.TIGHT_CERTIFIED

    def test_all_r(self):
        g, _ = triangle_with_tail()
        assert extract_tight_occ(g, 1, TriColoring.constant(g, R)) is None

    def test_head_without_structure_dies(self):
        g = Graph.from_order(3, [(0, 1), (1, 2)])
        chi = TriColoring({0: B, 1: C, 2: B}, {(0, 1): B, (1, 2): B})
        t, iters = _extract_with_stats(g, 1, chi)
        assert t is None
        assert iters >= 2

    def test_recoloring_cascades(self):
        # second head hangs off the only petal; its removal starves the
        # petal component, which then starves the first head
        g = Graph.from_order(4, [(0, 1), (1, 2), (0, 2), (1, 3)])
        chi = TriColoring({0: C, 3: C, 1: B, 2: B},
                          {(0, 1): B, (1, 2): B, (0, 2): B, (1, 3): B})
        t, iters = _extract_with_stats(g, 1, chi)
        assert t is None
        assert iters >= 2

    def test_width_zero_kept(self):
        g = Graph.from_order(4, [(0, 1), (2, 3)])
        t = extract_tight_occ(g, 0, TriColoring.constant(g, B))
        assert t is not None
        assert t.occ.part_b == g.vertices
        assert validate_tight_occ(g, t) is TightVerdict.TIGHT_CERTIFIED

    def test_order_zero_on_odd_graph(self):
        g = Graph.from_order(3, [(0, 1), (1, 2), (0, 2)])
        assert extract_tight_occ(g, 0, TriColoring.constant(g, B)) is None

    def test_superset_of_planted(self):
        g, base = flowers(2, 2, [(-1, 0), (0, 1), (-2, 1)])
        part_c = frozenset({0, 1})
        part_b = frozenset(range(2, 2 + 8))
        chi = planted_coloring(g, part_b, part_c)
        t = extract_tight_occ(g, 2, chi)
        assert part_c <= t.occ.part_c
        assert part_b <= t.occ.part_b
        assert validate_tight_occ(g, t) is TightVerdict.TIGHT_CERTIFIED

    def test_random_outputs_certified(self):
        rng = random.Random(2024)
        produced = 0
        for _ in range(160):
            n = rng.randint(3, 8)
            g = Graph.from_order(n, oracles.random_edges(rng, n, 0.35))
            z = rng.randint(0, 2)
            chi = random_tricoloring(rng, g)
            t, iters = _extract_with_stats(g, z, chi)
            assert iters <= g.n + 1
            again, _ = _extract_with_stats(g, z, chi)
            assert again == t
            if t is None:
                continue
            produced += 1
            assert validate_tight_occ(g, t) is TightVerdict.TIGHT_CERTIFIED
        assert produced >= 20

    def test_rejects(self):
        g, chi = triangle_with_tail()
        with pytest.raises(ValueError):
            extract_tight_occ(g, -1, chi)
        with pytest.raises(ValueError):
            extract_tight_occ(Graph.from_order(2, [(0, 1)]), 1, chi)


class TestPipeline:
    def test_triangle_plus_square(self):
        g = Graph.from_order(7, [(0, 1), (1, 2), (0, 2),
                                 (3, 4), (4, 5), (5, 6), (3, 6)])
        got = pipeline(g, 1, 1)
        assert got is not None and len(got) >= 1
        assert got <= frozenset({0, 1, 2})
        assert is_subset_of_optimal(g, got)

    def test_bipartite_no_zocc(self):
        g = Graph.from_order(3, [(0, 1), (1, 2)])
        res = run_pipeline(g, 1, 1)
        assert res.selected is None and res.conclusive

    def test_planted_two_heads(self):
        g, _ = flowers(2, 1, [(-1, 0), (0, 1), (-2, 1)])
        res = run_pipeline(g, 2, 1)
        assert res.selected == frozenset({0, 1})
        assert is_subset_of_optimal(g, res.selected)

    def test_reduction_engages(self):
        g = Graph.from_order(9, [(i, (i + 1) % 9) for i in range(9)])
        res = run_pipeline(g, 1, 1)
        assert res.reduction_iterations >= 1
        assert res.reduced_order < g.n
        assert res.selected is not None
        assert res.selected <= g.vertices
        assert is_subset_of_optimal(g, res.selected)

    def test_hint_coloring_matches_plain(self):
        g, base = flowers(2, 1, [(-1, 0), (0, 1), (-2, 1)])
        part_c = frozenset({0, 1})
        part_b = frozenset(range(2, 6))
        chi = planted_coloring(g, part_b, part_c)
        assert pipeline_hinted(g, 2, 1, chi) == pipeline(g, 2, 1)

    def test_hint_empty_coloring(self):
        g, _ = flowers(1, 1)
        assert pipeline_hinted(g, 1, 1, TriColoring.constant(g, R)) is None

    def test_hint_occ(self):
        g, base = flowers(1, 1, [(-1, 0), (0, 1)])
        occ = OCC(frozenset({1, 2}), frozenset({0}), g.vertices - {0, 1, 2})
        assert pipeline_hinted(g, 1, 1, occ) == pipeline(g, 1, 1)

    def test_hint_rejected(self):
        g, _ = flowers(1, 1)
        with pytest.raises(ValueError):
            pipeline_hinted(g, 1, 1, None)
        with pytest.raises(ValueError):
            pipeline_hinted(g, 1, 1, (frozenset(), frozenset(), g.vertices))
        bad = OCC(frozenset({0, 1, 2}), frozenset(), g.vertices - {0, 1, 2})
        with pytest.raises(ValueError):
            pipeline_hinted(g, 1, 1, bad)

    def test_budget_inconclusive(self):
        g = Graph.from_order(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        res = run_pipeline(g, 2, 1, max_colorings=1)
        assert res.selected is None
        assert not res.conclusive
        assert res.colorings_tried == 1

    def test_precondition(self):
        g, _ = flowers(1, 1)
        with pytest.raises(ValueError):
            pipeline(g, 1, 2)
        with pytest.raises(ValueError):
            pipeline(g, -1, -1)

    def test_random_soundness(self):
        rng = random.Random(4096)
        successes = 0
        for trial in range(40):
            n = rng.randint(4, 7)
            g = Graph.from_order(n, oracles.random_edges(rng, n, 0.5))
            k = 2 if trial % 4 == 0 else 1
            res = run_pipeline(g, k, 1, max_colorings=800)
            if res.selected is None:
                continue
            successes += 1
            assert len(res.selected) >= k
            assert is_subset_of_optimal(g, res.selected)
        assert successes >= 15


class TestColoringIO:
    def test_round_trip(self):
        rng = random.Random(7)
        g = Graph.from_order(6, oracles.random_edges(rng, 6, 0.5))
        chi = random_tricoloring(rng, g)
        back = tricoloring_from_lines(tricoloring_to_lines(chi))
        assert back == chi

    def test_comments_and_ordering(self):
        chi = tricoloring_from_lines([
            "# a remark",
            "e 2 0 R   # trailing note",
            "v 0 B",
            "v 2 C",
            "",
        ])
        assert chi.vertex_colors == {0: "B", 2: "C"}
        assert chi.edge_colors == {(0, 2): "R"}

    @pytest.mark.parametrize("line", ["v 0", "e 1 2", "v x B", "w 0 B",
                                      "v 0 B C"])
    def test_rejects(self, line):
        with pytest.raises(ValueError):
            tricoloring_from_lines([line])


class TestParallelSweep:
    def test_jobs_match_sequential_hit(self):
        g, base = flowers(2, 1, [(0, 1), (1, 2), (-1, 0)])
        seq = run_pipeline(g, 2, 1)
        par = run_pipeline(g, 2, 1, jobs=2)
        assert seq.selected is not None
        assert par.selected == seq.selected
        assert par.width == seq.width
        assert par.colorings_tried == seq.colorings_tried
        assert par.conclusive and seq.conclusive
        assert is_subset_of_optimal(g, par.selected)

    def test_jobs_match_sequential_none(self):
        g = Graph.from_order(3, [(0, 1), (1, 2)])
        seq = run_pipeline(g, 1, 1)
        par = run_pipeline(g, 1, 1, jobs=3)
        assert seq.selected is None and par.selected is None
        assert seq.conclusive and par.conclusive
        assert par.colorings_tried == seq.colorings_tried

    def test_jobs_match_sequential_capped(self):
        g = Graph.from_order(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        seq = run_pipeline(g, 2, 1, max_colorings=7)
        par = run_pipeline(g, 2, 1, max_colorings=7, jobs=2)
        assert not seq.conclusive and not par.conclusive
        assert par.colorings_tried == seq.colorings_tried == 7

    def test_rejects_bad_jobs(self):
        g = Graph.from_order(3, [(0, 1), (1, 2)])
        with pytest.raises(ValueError):
            run_pipeline(g, 1, 1, jobs=0)
