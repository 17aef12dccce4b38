from __future__ import annotations

import io
import itertools
import random

import pytest

import oracles
from checks import assert_certificate, assert_is_occ, assert_odd_cycle_witness
from octcuts.graph_core import Graph, TwoColoring, components, two_coloring
from octcuts.occ_model import (
    OCC,
    Certificate,
    CertificateError,
    ImposedSeparationInput,
    OccViolation,
    TightOCC,
    TightVerdict,
    imposed_separation,
    occ_from_lines,
    occ_to_lines,
    prune_certificate,
    shrink_bipartite_part,
    validate_occ,
    validate_tight_occ,
)


def triangle_plus_isolated():
    return Graph.from_order(4, [(0, 1), (1, 2), (0, 2)])


def flower(petals, head=0, petal_len=2):
    """One head vertex on `petals` odd cycles (default triangles)."""
    edges = []
    nxt = head + 1
    for _ in range(petals):
        path = list(range(nxt, nxt + petal_len))
        nxt += petal_len
        edges.append((head, path[0]))
        edges += list(zip(path, path[1:]))
        edges.append((path[-1], head))
    return Graph.from_order(nxt, edges)


class TestValidateOcc:
    def test_valid_triangle_cut(self):
        g = triangle_plus_isolated()
        occ = validate_occ(g, ({1, 2}, {0}, {3}))
        assert isinstance(occ, OCC)
        assert occ.width == 1
        assert occ.part_b == {1, 2}

    def test_odd_kept_part(self):
        g = triangle_plus_isolated()
        v = validate_occ(g, ({0, 1, 2}, set(), {3}))
        assert isinstance(v, OccViolation)
        assert "odd" in v.condition
        assert_odd_cycle_witness(g, v.witness)

    def test_crossing_edge(self):
        g = triangle_plus_isolated()
        v = validate_occ(g, ({1}, {2}, {0, 3}))
        assert isinstance(v, OccViolation)
        assert set(v.witness) == {0, 1}
        assert "rest" in v.condition

    def test_emptiness(self):
        g = Graph.from_order(2, [])
        v = validate_occ(g, (set(), set(), {0, 1}))
        assert isinstance(v, OccViolation)
        assert v.witness == ()

    def test_non_partition_is_usage_error(self):
        g = triangle_plus_isolated()
        with pytest.raises(ValueError):
            validate_occ(g, ({0, 1}, {1, 2}, {3}))
        with pytest.raises(ValueError):
            validate_occ(g, ({0}, {1}, {3}))

    def test_matches_first_principles(self):
        rng = random.Random(42)
        for _ in range(40):
            n = rng.randint(2, 7)
            g = Graph.from_order(n, oracles.random_edges(rng, n, 0.45))
            parts = ([], [], [])
            for v in range(n):
                parts[rng.randint(0, 2)].append(v)
            res = validate_occ(g, tuple(map(set, parts)))
            try:
                assert_is_occ(g, *parts)
                valid = True
            except AssertionError:
                valid = False
            assert isinstance(res, OCC) == valid


class TestValidateTightOcc:
    def test_triangle_certified(self):
        g = triangle_plus_isolated()
        cert = Certificate({0, 1, 2}, {(0, 1), (1, 2), (0, 2)})
        t = TightOCC(OCC(frozenset({1, 2}), frozenset({0}), frozenset({3})),
                     1, cert)
        assert validate_tight_occ(g, t) is TightVerdict.TIGHT_CERTIFIED

    def test_not_tight_two_heads(self):
        g = triangle_plus_isolated()
        t = TightOCC(OCC(frozenset({2}), frozenset({0, 1}), frozenset({3})), 1)
        assert validate_tight_occ(g, t) is TightVerdict.NOT_TIGHT

    def test_no_certificate(self):
        g = triangle_plus_isolated()
        t = TightOCC(OCC(frozenset({1, 2}), frozenset({0}), frozenset({3})), 1)
        assert validate_tight_occ(g, t) is TightVerdict.TIGHT_NO_CERTIFICATE

    def test_bad_certificates_raise(self):
        g = triangle_plus_isolated()
        occ = OCC(frozenset({1, 2}), frozenset({0}), frozenset({3}))
        bad = [
            Certificate({1, 2}, {(1, 2)}),            # head missing
            Certificate({0, 1, 2}, {(0, 3)}),          # edge leaves B ∪ C... 3 in R
            Certificate({0, 1, 2}, {(1, 2)}),          # head not needed: oct=0
        ]
        for cert in bad:
            with pytest.raises((CertificateError, ValueError)):
                validate_tight_occ(g, TightOCC(occ, 1, cert))

    def test_order_bound_enforced(self):
        # two disjoint triangles joined by an edge: both heads land in a
        # single certificate component
        edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
        g = Graph.from_order(6, edges)
        occ = validate_occ(g, ({1, 2, 4, 5}, {0, 3}, set()))
        assert isinstance(occ, OCC)
        cert = Certificate(g.vertices, frozenset(edges))
        t = TightOCC(occ, 1, cert)
        with pytest.raises(CertificateError, match="order"):
            validate_tight_occ(g, t)
        assert validate_tight_occ(g, TightOCC(occ, 2, cert)) is \
            TightVerdict.TIGHT_CERTIFIED

    def test_invalid_occ_rejected(self):
        g = triangle_plus_isolated()
        t = TightOCC(OCC(frozenset({0, 1, 2}), frozenset(), frozenset({3})), 1)
        with pytest.raises(ValueError):
            validate_tight_occ(g, t)

    def test_oct_split_identity(self):
        # for every valid tight cut: oct(g) = width + oct(g[rest])
        rng = random.Random(8)
        hits = 0
        for _ in range(12):
            n = rng.randint(3, 6)
            g = Graph.from_order(n, oracles.random_edges(rng, n, 0.5))
            ev = list(g.edges())
            whole = oracles.oct_size(g.vertices, ev)
            for assign in itertools.product((0, 1, 2), repeat=n):
                parts = (frozenset(v for v in range(n) if assign[v] == 0),
                         frozenset(v for v in range(n) if assign[v] == 1),
                         frozenset(v for v in range(n) if assign[v] == 2))
                occ = validate_occ(g, parts)
                if isinstance(occ, OccViolation):
                    continue
                verdict = validate_tight_occ(g, TightOCC(occ, n))
                kv, ke = oracles.induced(g.vertices, ev, occ.part_r)
                rest = oracles.oct_size(kv, ke)
                if verdict is not TightVerdict.NOT_TIGHT:
                    hits += 1
                    assert whole == occ.width + rest
        assert hits > 0

    def test_head_overlap_bound(self):
        # any tight cut's head meets any other cut's kept part in at most
        # that cut's width many vertices
        rng = random.Random(15)
        for _ in range(6):
            n = rng.randint(3, 6)
            g = Graph.from_order(n, oracles.random_edges(rng, n, 0.5))
            partitions = []
            for assign in itertools.product((0, 1, 2), repeat=n):
                parts = (frozenset(v for v in range(n) if assign[v] == 0),
                         frozenset(v for v in range(n) if assign[v] == 1),
                         frozenset(v for v in range(n) if assign[v] == 2))
                occ = validate_occ(g, parts)
                if isinstance(occ, OCC):
                    partitions.append(occ)
            tight = [occ for occ in partitions
                     if validate_tight_occ(g, TightOCC(occ, n))
                     is not TightVerdict.NOT_TIGHT]
            for t in tight:
                for x in partitions:
                    assert len(t.part_c & x.part_b) <= x.width


class TestImposedSeparation:
    def star(self):
        return Graph.from_order(2, [(0, 1)])

    def test_star_match(self):
        g = self.star()
        occ = OCC(frozenset({0}), frozenset({1}), frozenset())
        inp = ImposedSeparationInput(frozenset({1}), frozenset(),
                                     TwoColoring({1: 0}), TwoColoring({0: 0}))
        a, r, n = imposed_separation(g, occ, inp)
        assert (a, r, n) == ({0}, frozenset(), frozenset())

    def test_mismatch_goes_to_r(self):
        g = self.star()
        occ = OCC(frozenset({0}), frozenset({1}), frozenset())
        inp = ImposedSeparationInput(frozenset({1}), frozenset(),
                                     TwoColoring({1: 1}), TwoColoring({0: 0}))
        a, r, n = imposed_separation(g, occ, inp)
        assert (a, r, n) == (frozenset(), {0}, frozenset())

    def test_empty_imposition(self):
        g = self.star()
        occ = OCC(frozenset({0}), frozenset({1}), frozenset())
        inp = ImposedSeparationInput(frozenset(), frozenset(),
                                     TwoColoring({}), TwoColoring({0: 0}))
        assert imposed_separation(g, occ, inp) == (frozenset(),) * 3

    def test_c2_neighbors(self):
        g = Graph.from_order(4, [(0, 1), (0, 2), (3, 1)])
        occ = OCC(frozenset({1, 2}), frozenset({0, 3}), frozenset())
        inp = ImposedSeparationInput(frozenset(), frozenset({3}),
                                     TwoColoring({}), TwoColoring({1: 0, 2: 0}))
        a, r, n = imposed_separation(g, occ, inp)
        assert (a, r) == (frozenset(), frozenset())
        assert n == {1}

    def test_overlap_possible(self):
        # one kept vertex between two differently-colored heads
        g = Graph.from_order(3, [(0, 1), (0, 2)])
        occ = OCC(frozenset({0}), frozenset({1, 2}), frozenset())
        inp = ImposedSeparationInput(frozenset({1, 2}), frozenset(),
                                     TwoColoring({1: 0, 2: 1}),
                                     TwoColoring({0: 0}))
        a, r, n = imposed_separation(g, occ, inp)
        assert a == {0} and r == {0}

    def test_validation(self):
        g = self.star()
        occ = OCC(frozenset({0}), frozenset({1}), frozenset())
        with pytest.raises(ValueError, match="cut part"):
            imposed_separation(g, occ, ImposedSeparationInput(
                frozenset({0}), frozenset(), TwoColoring({0: 0}),
                TwoColoring({0: 0})))
        with pytest.raises(ValueError, match="disjoint"):
            imposed_separation(g, occ, ImposedSeparationInput(
                frozenset({1}), frozenset({1}), TwoColoring({1: 0}),
                TwoColoring({0: 0})))
        with pytest.raises(ValueError, match="f_c"):
            imposed_separation(g, occ, ImposedSeparationInput(
                frozenset({1}), frozenset(), TwoColoring({}),
                TwoColoring({0: 0})))
        g2 = Graph.from_order(3, [(0, 1), (1, 2), (0, 2)])
        occ2 = OCC(frozenset({0, 1}), frozenset({2}), frozenset())
        with pytest.raises(ValueError, match="proper"):
            imposed_separation(g2, occ2, ImposedSeparationInput(
                frozenset(), frozenset(), TwoColoring({}),
                TwoColoring({0: 0, 1: 0})))

    def test_head_is_minimum_imposed_separator(self):
        # the overlap of a tight head with another cut's kept part solves
        # the separation problem that cut imposes, optimally
        rng = random.Random(33)
        checked = 0
        for _ in range(8):
            n = rng.randint(3, 6)
            g = Graph.from_order(n, oracles.random_edges(rng, n, 0.5))
            ev = list(g.edges())
            occs = []
            for assign in itertools.product((0, 1, 2), repeat=n):
                parts = (frozenset(v for v in range(n) if assign[v] == 0),
                         frozenset(v for v in range(n) if assign[v] == 1),
                         frozenset(v for v in range(n) if assign[v] == 2))
                occ = validate_occ(g, parts)
                if isinstance(occ, OCC):
                    occs.append(occ)
            tight = [occ for occ in occs
                     if validate_tight_occ(g, TightOCC(occ, n))
                     is not TightVerdict.NOT_TIGHT]
            for a_occ in tight[:40]:
                f_a = two_coloring(g, a_occ.part_b)
                assert isinstance(f_a, TwoColoring)
                for x_occ in occs[:60]:
                    c1 = x_occ.part_c & a_occ.part_b
                    c2 = x_occ.part_c & a_occ.part_r
                    f_x = two_coloring(g, x_occ.part_b)
                    assert isinstance(f_x, TwoColoring)
                    inp = ImposedSeparationInput(
                        c1, c2, f_a.restrict(c1), f_x)
                    a, r, nn = imposed_separation(g, x_occ, inp)
                    cut = a_occ.part_c & x_occ.part_b
                    bv = x_occ.part_b
                    be = [e for e in ev if e[0] in bv and e[1] in bv]
                    # it separates all pairs
                    for s, t in ((a, r), (a, nn), (r, nn)):
                        assert oracles.separates(bv, be, cut, s, t)
                    # and it is minimum, even ignoring N
                    want2 = oracles.min_separator_size(bv, be, a, r)
                    want3 = oracles.min_arn_separator_size(bv, be, a, r, nn)
                    assert len(cut) == want2 == want3
                    checked += 1
        assert checked > 0


class TestPruneCertificate:
    def cert_of(self, g, head):
        return Certificate(g.vertices, frozenset(g.edges())), frozenset(head)

    def test_flower_prunes_to_one_petal(self):
        g = flower(3)
        cert, head = self.cert_of(g, {0})
        pruned = prune_certificate(g, head, cert, 1)
        assert 0 in pruned.vertices
        inner = components(pruned.as_graph(g.id_bound),
                           pruned.vertices - head)
        assert len(inner) == 1  # z² · |head| = 1
        assert oracles.oct_size(pruned.vertices, list(pruned.cert_edges)) == 1

    def test_exactly_z_petals_untouched(self):
        g = flower(2)
        cert, head = self.cert_of(g, {0})
        pruned = prune_certificate(g, head, cert, 2)
        assert pruned == cert

    def test_single_component_untouched(self):
        g = flower(1)
        cert, head = self.cert_of(g, {0})
        assert prune_certificate(g, head, cert, 1) == cert

    def test_pair_criterion(self):
        # heads 0 and 1 each keep a private triangle; three length-2
        # connectors between them are interchangeable beyond z = 2
        edges = [(0, 2), (2, 3), (3, 0), (1, 4), (4, 5), (5, 1),
                 (0, 6), (6, 1), (0, 7), (7, 1), (0, 8), (8, 1)]
        g = Graph.from_order(9, edges)
        cert = Certificate(g.vertices, frozenset(edges))
        pruned = prune_certificate(g, {0, 1}, cert, 2)
        kept_connectors = {6, 7, 8} & pruned.vertices
        assert len(kept_connectors) == 2
        assert {2, 3, 4, 5} <= pruned.vertices  # private petals stay
        assert oracles.oct_size(pruned.vertices, list(pruned.cert_edges)) == 2

    def test_oct_preserved_random(self):
        rng = random.Random(58)
        for _ in range(20):
            petals = rng.randint(1, 4)
            g = flower(petals, petal_len=rng.choice((2, 4)))
            z = rng.randint(1, 3)
            cert = Certificate(g.vertices, frozenset(g.edges()))
            pruned = prune_certificate(g, {0}, cert, z)
            assert 0 in pruned.vertices
            assert oracles.oct_size(pruned.vertices, list(pruned.cert_edges)) \
                == oracles.oct_size(g.vertices, list(g.edges()))
            assert_certificate(g, pruned.vertices, pruned.cert_edges, {0}, z)

    def test_invalid_input_rejected(self):
        g = flower(2)
        with pytest.raises((CertificateError, ValueError)):
            prune_certificate(g, {0}, Certificate({0, 1}, {(0, 9)}), 1)
        # a certificate whose head is not optimal
        bip = Certificate({0, 1, 2}, {(0, 1), (1, 2)})
        with pytest.raises(CertificateError):
            prune_certificate(g, {0}, bip, 1)


class TestShrinkBipartitePart:
    def build(self):
        # head 0 with two triangle petals, a stray kept component {5,6},
        # and an isolated rest vertex 7
        edges = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (5, 6)]
        g = Graph.from_order(8, edges)
        occ = OCC(frozenset({1, 2, 3, 4, 5, 6}), frozenset({0}), frozenset({7}))
        cert = Certificate({0, 1, 2, 3, 4},
                           {(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)})
        return g, TightOCC(occ, 1, cert)

    def test_untouched_components_move_to_rest(self):
        g, t = self.build()
        out = shrink_bipartite_part(g, t)
        assert out.occ.part_c == {0}
        assert {5, 6} <= out.occ.part_r
        assert len(components(g, out.occ.part_b)) == 1  # z²·|C| = 1
        assert validate_tight_occ(g, out) is TightVerdict.TIGHT_CERTIFIED

    def test_identity_when_cert_touches_all(self):
        g = flower(2)
        occ = OCC(g.vertices - {0}, frozenset({0}), frozenset())
        t = TightOCC(occ, 2, Certificate(g.vertices, frozenset(g.edges())))
        out = shrink_bipartite_part(g, t)
        assert out.occ == occ

    def test_zero_width_identity(self):
        # with no heads every certificate component is prunable; shrinking
        # must not produce an all-rest partition
        g = Graph.from_order(4, [(0, 1), (2, 3)])
        occ = OCC(frozenset({0, 1, 2, 3}), frozenset(), frozenset())
        t = TightOCC(occ, 1, Certificate({0, 1}, {(0, 1)}))
        out = shrink_bipartite_part(g, t)
        assert out.occ == occ

    def test_requires_certificate(self):
        g = flower(1)
        t = TightOCC(OCC(g.vertices - {0}, frozenset({0}), frozenset()), 1)
        with pytest.raises(ValueError):
            shrink_bipartite_part(g, t)


class TestTextBlocks:
    def test_round_trip_plain(self):
        occ = OCC(frozenset({1, 2}), frozenset({0}), frozenset({3}))
        parts, cert = occ_from_lines(occ_to_lines(occ))
        assert parts == ({1, 2}, {0}, {3})
        assert cert is None

    def test_round_trip_with_certificate(self):
        t = TightOCC(OCC(frozenset({1, 2}), frozenset({0}), frozenset()),
                     1, Certificate({0, 1, 2}, {(1, 2), (0, 1), (0, 2)}))
        lines = occ_to_lines(t)
        parts, cert = occ_from_lines(lines)
        assert parts == ({1, 2}, {0}, frozenset())
        assert cert == t.certificate

    def test_empty_classes(self):
        occ = OCC(frozenset(), frozenset({0}), frozenset())
        assert occ_to_lines(occ) == ["occ B:  / C: 0 / R: "]
        parts, _ = occ_from_lines(["occ B: / C: 0 / R:"])
        assert parts == (frozenset(), {0}, frozenset())

    def test_parse_errors(self):
        for lines in (["occ B: 1 / C: 2"], ["cert-v: 1"],
                      ["occ B: 1 / C: 2 / R: 3", "occ B: / C: 1 / R:"],
                      ["junk"]):
            with pytest.raises(ValueError):
                occ_from_lines(lines)

    def test_io_helpers(self):
        from octcuts.occ_model import read_occ, write_occ
        occ = OCC(frozenset({1}), frozenset({0}), frozenset({2}))
        buf = io.StringIO()
        write_occ(occ, buf)
        parts, cert = read_occ(io.StringIO(buf.getvalue()))
        assert parts == ({1}, {0}, {2})
