from __future__ import annotations

import math

import numpy as np
import pytest

from pbranch.collapse import (
    CERTIFICATE_LABEL,
    build_pieces,
    disjointness_check,
    expected_rank,
    extended_chain,
    increasing_trees,
    lhs_fixed_homology,
    piece_cocycles_local,
    piece_count,
    piece_star,
    piece_top_faces,
    rhs_fixed_homology,
    verify_collapse_iso,
    verify_main_theorem,
)
from pbranch.errors import ResourceError, UsageError
from pbranch.freelie import parse_monomial, witt
from pbranch.homology import reduced_homology, relative_homology
from pbranch.partitions import SetPartition, enumerate_partitions
from pbranch.permgroups import PermGroup, parse_group, young

SP = SetPartition.parse
COMPOSITIONS = [(1, 2), (2, 2), (1, 1, 2), (2, 3), (3, 3), (2, 4), (2, 2, 2), (1, 1, 1, 1)]


class TestPieces:
    def test_two_two_example(self):
        pieces = build_pieces((2, 2))
        d1 = [p for p in pieces if p.d == 1]
        d2 = [p for p in pieces if p.d == 2]
        assert len(d1) == 4 and len(d2) == 2
        assert d1[0].chain == [SP("123|4"), SP("13|2|4")]
        P4 = enumerate_partitions(4)
        assert d2[0].chain == [SP("13|24")]
        tops = piece_top_faces(d2[0], P4)
        members = {P4.elements[i] for row in tops.tolist() for i in row}
        assert members == {SP("1|3|24"), SP("13|24"), SP("13|2|4")}

    def test_extended_chain_d2(self):
        w = parse_monomial("[x2,x1]")
        assert extended_chain(2, w, 2) == [SP("13|24")]

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_hook_counts(self, n):
        ns = (n - 1, 1)
        assert piece_count(ns) == len(build_pieces(ns)) == math.factorial(n - 1)

    @pytest.mark.parametrize("ns", COMPOSITIONS)
    def test_expected_rank(self, ns):
        assert expected_rank(ns) == math.factorial(sum(ns) - 1)

    @pytest.mark.parametrize("ns", [(2, 2), (2, 3), (3, 3), (2, 2, 2), (2, 4), (1, 1, 1, 1)])
    def test_disjoint(self, ns):
        P = enumerate_partitions(sum(ns))
        assert disjointness_check(build_pieces(ns), P)

    def test_duplicate_piece_not_disjoint(self):
        P = enumerate_partitions(4)
        pieces = build_pieces((2, 2))
        assert not disjointness_check(pieces + pieces[:1], P)

    @pytest.mark.parametrize("ns", [(2, 2), (2, 4), (3, 3), (2, 2, 2)])
    def test_star_shape(self, ns):
        n = sum(ns)
        for piece in build_pieces(ns)[:: max(1, len(build_pieces(ns)) // 12)]:
            star, bd = piece_star(piece, n)
            d = piece.d
            assert reduced_homology(star).is_zero()
            # boundary is S^(n-d-2) * |Pi_d|, relative homology is one sphere pattern
            expect = {n - 3: math.factorial(d - 1)}
            assert relative_homology(star, bd).betti == expect

    @pytest.mark.parametrize("ns", [(2, 2), (3, 3), (2, 4)])
    def test_local_cocycle_counts(self, ns):
        P = enumerate_partitions(sum(ns))
        for piece in build_pieces(ns):
            assert len(piece_cocycles_local(piece, P)) == math.factorial(piece.d - 1)

    def test_increasing_trees(self):
        for n in range(2, 7):
            assert len(increasing_trees(n)) == math.factorial(n - 1)

    def test_size_cap(self):
        with pytest.raises(ResourceError):
            build_pieces((5, 4))
        with pytest.raises(UsageError):
            build_pieces((2, 0))


class TestCollapseIso:
    @pytest.mark.parametrize("ns", COMPOSITIONS)
    def test_routes_agree(self, ns):
        direct = verify_collapse_iso(ns, method="direct")
        pairing = verify_collapse_iso(ns, method="pairing")
        assert direct.isomorphism and pairing.isomorphism
        assert direct.size == pairing.size == (expected_rank(ns),) * 2
        assert pairing.rational_rank == expected_rank(ns)

    def test_two_two_matrix(self):
        rep = verify_collapse_iso((2, 2), method="direct")
        assert rep.size == (6, 6) and rep.invariant_factors == [1] * 6
        assert rep.label == CERTIFICATE_LABEL

    def test_direct_cap(self):
        with pytest.raises(ResourceError):
            verify_collapse_iso((4, 4), method="direct")


class TestMainTheorem:
    def test_two_two(self):
        rep = verify_main_theorem((2, 2))
        assert rep.passed
        assert all(c.quotient_lhs is not None for c in rep.comparisons)

    def test_double_transposition(self):
        K = parse_group("perm:(1 2)(3 4)@4")
        P = enumerate_partitions(4)
        assert lhs_fixed_homology(P, K).betti == {0: 2}
        assert rhs_fixed_homology((2, 2), K).betti == {0: 2}

    def test_non_isotypical(self):
        K = young([1, 1, 2])
        P = enumerate_partitions(4)
        assert lhs_fixed_homology(P, K).is_zero()
        assert rhs_fixed_homology((2, 2), K).is_zero()

    def test_trivial_subgroup_rank(self):
        rep = verify_main_theorem((3, 3), subgroups=[PermGroup(6)], quotients=False)
        c = rep.comparisons[0]
        assert c.fixed_lhs.betti == c.fixed_rhs.betti == {3: 120}
        assert rep.passed

    def test_report_json(self):
        js = verify_main_theorem((2, 2)).to_json()
        assert js["passed"] and js["label"] == CERTIFICATE_LABEL
        assert js["collapse"]["isomorphism"]
