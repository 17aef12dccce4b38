import itertools
import random

import pytest

import oracles
from octcuts.color_coding import B, C
from octcuts.graph_core import Graph, TwoColoring, components, two_coloring
from octcuts.occ_discovery import (
    bipartite_separation,
    find_occ_colored,
    find_reducible_occ,
)
from octcuts.occ_model import OCC, validate_occ
from octcuts.occ_reduction import ReductionConfig, g_r_value


def check_separation(g, k, z, pair):
    c, s = pair
    assert z <= c
    assert not (c & s)
    assert len(s) <= 2 * k
    assert isinstance(two_coloring(g, c), TwoColoring)
    assert g.neighborhood(c) <= s


def grow_bipartite_seed(rng, g):
    v = rng.choice(g.sorted_vertices)
    z = {v}
    for _ in range(rng.randint(0, 4)):
        fringe = sorted(g.neighborhood(z))
        if not fringe:
            break
        w = rng.choice(fringe)
        if isinstance(two_coloring(g, z | {w}), TwoColoring):
            z.add(w)
    return frozenset(z)


class TestBipartiteSeparation:
    def test_triangle(self):
        g = Graph.from_order(3, [(0, 1), (1, 2), (0, 2)])
        assert bipartite_separation(g, 1, {0}) == \
            (frozenset({0}), frozenset({1, 2}))
        exact = bipartite_separation(g, 1, {0}, backend="exact")
        check_separation(g, 1, frozenset({0}), exact)

    def test_bipartite_component(self):
        g = Graph.from_order(5, [(0, 1), (1, 2), (3, 4)])
        for backend in ("product", "exact"):
            got = bipartite_separation(g, 2, {0, 1, 2}, backend=backend)
            assert got == (frozenset({0, 1, 2}), frozenset())

    def test_k5_none(self):
        g = Graph.from_order(5, [(i, j) for i in range(5)
                                 for j in range(i + 1, 5)])
        assert bipartite_separation(g, 1, {0}) is None
        assert bipartite_separation(g, 1, {0}, backend="exact") is None

    def test_rejects(self):
        g = Graph.from_order(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
        with pytest.raises(ValueError):
            bipartite_separation(g, 1, set())
        with pytest.raises(ValueError):
            bipartite_separation(g, 1, {0, 9})
        with pytest.raises(ValueError):
            bipartite_separation(g, 1, {1, 3})  # not connected
        with pytest.raises(ValueError):
            bipartite_separation(g, 1, {0, 2, 3})  # odd triangle
        with pytest.raises(ValueError):
            bipartite_separation(g, -1, {0})
        with pytest.raises(ValueError):
            bipartite_separation(g, 1, {0}, backend="magic")

    def test_random_postconditions_and_dichotomy(self):
        rng = random.Random(5150)
        for _ in range(120):
            n = rng.randint(3, 8)
            g = Graph.from_order(n, oracles.random_edges(rng, n, 0.35))
            z = grow_bipartite_seed(rng, g)
            k = rng.randint(0, 3)
            prod = bipartite_separation(g, k, z)
            exact = bipartite_separation(g, k, z, backend="exact")
            if prod is not None:
                check_separation(g, k, z, prod)
            if exact is not None:
                check_separation(g, k, z, exact)
                assert len(exact[1]) <= k
                assert prod is not None  # None would deny this witness
            if prod is None:
                assert exact is None


class TestFindOccColored:
    def test_planted(self):
        g = Graph.from_order(7, [(i, (i + 1) % 7) for i in range(7)])
        chi = {v: B for v in range(1, 7)}
        chi[0] = C
        occ = find_occ_colored(g, 1, 3, chi)
        assert isinstance(occ, OCC)
        assert len(occ.part_b) >= 3 and len(occ.part_c) <= 2

    def test_all_c(self):
        g = Graph.from_order(3, [(0, 1), (1, 2), (0, 2)])
        assert find_occ_colored(g, 1, 1, {v: C for v in range(3)}) is None

    def test_odd_b_class(self):
        g = Graph.from_order(3, [(0, 1), (1, 2), (0, 2)])
        assert find_occ_colored(g, 1, 1, {v: B for v in range(3)}) is None

    def test_lowest_component_wins(self):
        g = Graph.from_order(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
        chi = {v: B for v in range(6)}
        occ = find_occ_colored(g, 1, 2, chi)
        assert occ.part_b == frozenset({0, 1, 2})
        assert find_occ_colored(g, 1, 4, chi) is None

    def test_ell_validated(self):
        g = Graph.from_order(2, [(0, 1)])
        with pytest.raises(ValueError):
            find_occ_colored(g, 1, 0, {0: B, 1: B})


class TestFindReducibleOcc:
    def test_triangle_too_small(self):
        g = Graph.from_order(3, [(0, 1), (1, 2), (0, 2)])
        assert find_reducible_occ(g, 1, ReductionConfig(custom_coeffs=(2,))) \
            is None

    def test_seven_cycle(self):
        g = Graph.from_order(7, [(i, (i + 1) % 7) for i in range(7)])
        occ = find_reducible_occ(g, 1, ReductionConfig(custom_coeffs=(2,)))
        assert isinstance(occ, OCC)
        assert len(occ.part_c) <= 2
        assert len(occ.part_b) > 2

    def test_bipartite_empty_head(self):
        g = Graph.from_order(4, [(0, 1), (1, 2), (2, 3)])
        occ = find_reducible_occ(g, 0, ReductionConfig(custom_coeffs=(0,)))
        assert isinstance(occ, OCC)
        assert occ.part_c == frozenset()
        assert occ.part_b

    def test_planted_round_trip(self):
        cfg = ReductionConfig()  # g_r == 4
        g = Graph.from_order(9, [(i, (i + 1) % 9) for i in range(9)])
        occ = find_reducible_occ(g, 1, cfg)
        assert isinstance(occ, OCC)
        assert len(occ.part_b) > g_r_value(cfg, len(occ.part_c))

    def test_deterministic(self):
        g = Graph.from_order(9, [(i, (i + 1) % 9) for i in range(9)])
        a = find_reducible_occ(g, 1, seed=3)
        b = find_reducible_occ(g, 1, seed=3)
        assert a == b

    def test_greedy_family_backend(self):
        g = Graph.from_order(9, [(i, (i + 1) % 9) for i in range(9)])
        occ = find_reducible_occ(g, 1, ReductionConfig(custom_coeffs=(2,)),
                                 family_backend="greedy")
        assert isinstance(occ, OCC)

    def test_none_soundness(self):
        # a miss must mean no connected wide cut of width <= k exists
        rng = random.Random(77)
        cfg = ReductionConfig(custom_coeffs=(1,))
        checked = misses = 0
        while checked < 12:
            n = rng.randint(4, 7)
            g = Graph.from_order(n, oracles.random_edges(rng, n,
                                                         rng.choice((.4, .8))))
            k = rng.randint(0, 1)
            got = find_reducible_occ(g, k, cfg)
            checked += 1
            if got is not None:
                assert len(got.part_b) > g_r_value(cfg, len(got.part_c))
                continue
            misses += 1
            for assign in itertools.product((0, 1, 2), repeat=n):
                parts = tuple(frozenset(v for v in range(n)
                                        if assign[v] == i) for i in range(3))
                occ = validate_occ(g, parts)
                if not isinstance(occ, OCC):
                    continue
                if occ.width > k or not occ.part_b:
                    continue
                if len(components(g, occ.part_b)) != 1:
                    continue
                assert len(occ.part_b) <= g_r_value(cfg, 2 * k), \
                    (g.edges(), k, occ)
        assert misses >= 3
