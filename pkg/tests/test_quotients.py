from __future__ import annotations

import pytest

from pbranch.equivariant import poset_quotient_homology
from pbranch.errors import ResourceError, UsageError
from pbranch.freelie import witt
from pbranch.homology import HomologySummary
from pbranch.partitions import enumerate_partitions
from pbranch.permgroups import symmetric
import pbranch.quotients as Q
from pbranch.quotients import (
    classify_wedge_of_spheres,
    expected_free_rank,
    nakaoka_dimensions,
    block_mod_p_dimensions,
    projective_space_homology,
    quotient_block,
    suspended_projective_homology,
    torsion_and_rational_checks,
    young_quotient_homology,
)


class TestBlocks:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_single_suspension_acyclic(self, d):
        assert quotient_block(d, 1).homology.is_zero()

    @pytest.mark.parametrize("l", range(1, 6))
    def test_binary_blocks_are_projective(self, l):
        assert quotient_block(2, l).homology == suspended_projective_homology(l)

    def test_trivial_factor_agrees(self):
        # keeping the dDelta^l factor replaces the explicit shift
        for d, l in [(2, 2), (2, 3), (3, 1), (3, 2)]:
            assert quotient_block(d, l, trivial_factor=True).homology == quotient_block(d, l).homology

    def test_three_two_regression(self):
        # frozen from the orbit chain complex; cofiber of a degree 3 map S^3 -> S^3, shifted by 2
        assert quotient_block(3, 2).homology == HomologySummary({}, {5: [3]})

    def test_three_three_regression(self):
        assert block_mod_p_dimensions(3, 3, 3) == {6: 1, 7: 1}

    def test_cap(self, monkeypatch):
        monkeypatch.setattr(Q, "MAX_BLOCK_FACES", 10)
        with pytest.raises(ResourceError):
            Q.quotient_block.__wrapped__(3, 2)

    def test_bad_arguments(self):
        with pytest.raises(UsageError):
            quotient_block(0, 1)


class TestNakaoka:
    def test_strict_examples(self):
        assert nakaoka_dimensions(3, 2) == {}
        assert nakaoka_dimensions(3, 3) == {6: 1, 7: 1}
        assert nakaoka_dimensions(3, 4) == {7: 1, 8: 1}
        assert nakaoka_dimensions(5, 2) == {}

    def test_relaxed_examples(self):
        assert nakaoka_dimensions(3, 2, include_top=True) == {5: 1, 6: 1}
        assert nakaoka_dimensions(3, 3, include_top=True) == {6: 1, 7: 1}
        assert nakaoka_dimensions(3, 4, include_top=True) == {7: 1, 8: 1, 11: 1, 12: 1}

    @pytest.mark.parametrize("l", [2, 3])
    def test_relaxed_matches_blocks(self, l):
        assert block_mod_p_dimensions(3, l, 3) == nakaoka_dimensions(3, l, include_top=True)

    def test_odd_l_variants_agree(self):
        for p in (3, 5, 7):
            for l in (1, 3, 5):
                assert nakaoka_dimensions(p, l) == nakaoka_dimensions(p, l, include_top=True)

    def test_not_odd_prime(self):
        for p in (2, 4, 9):
            with pytest.raises(UsageError):
                nakaoka_dimensions(p, 2)


class TestProjective:
    def test_rp(self):
        assert projective_space_homology(0).is_zero()
        assert projective_space_homology(2) == HomologySummary({}, {1: [2]})
        assert projective_space_homology(3) == HomologySummary({3: 1}, {1: [2]})

    def test_suspended(self):
        assert suspended_projective_homology(1).is_zero()
        assert suspended_projective_homology(4) == HomologySummary({7: 1}, {5: [2]})


class TestYoungQuotients:
    @pytest.mark.parametrize("ns", [(2, 2), (1, 3), (3, 1), (2, 1, 1), (3, 3), (2, 4), (2, 2, 2), (4, 1), (5, 1), (3, 2), (2, 2, 1)])
    def test_direct_matches_prediction(self, ns):
        rep = young_quotient_homology(ns)
        assert rep.match, rep.to_json()

    def test_two_two(self):
        rep = young_quotient_homology((2, 2))
        assert rep.direct == HomologySummary({1: 1})
        assert [t["copies"] for t in rep.trace] == [1, 1]

    def test_two_four(self):
        assert young_quotient_homology((2, 4)).direct == HomologySummary({3: 3})

    def test_small_n_rejected(self):
        with pytest.raises(UsageError):
            young_quotient_homology((1, 1))


class TestClassification:
    @pytest.mark.parametrize(
        "ns,expected",
        [((3, 4), True), ((3, 3), True), ((2, 2), True), ((2, 4), True), ((3, 6), True), ((4, 4), False), ((6, 6), False), ((2, 2, 2, 2), False), ((7,), True)],
    )
    def test_examples(self, ns, expected):
        assert classify_wedge_of_spheres(ns).wedge_of_spheres is expected

    def test_free_rank(self):
        assert expected_free_rank((2, 4)) == 3
        assert expected_free_rank((2, 2)) == 1
        # n/2 odd adds the d = 2 summand
        assert expected_free_rank((2, 4, 4)) == witt([2, 4, 4]) + witt([1, 2, 2])
        assert expected_free_rank((4, 4)) == 8


class TestTorsion:
    @pytest.mark.parametrize("ns", [(2, 2), (3, 3), (2, 4), (2, 6)])
    def test_checks(self, ns):
        rep = torsion_and_rational_checks(ns)
        assert rep.passed, rep.to_json()


class TestKozlov:
    @pytest.mark.parametrize("n", range(3, 7))
    def test_symmetric_quotient_acyclic(self, n):
        assert poset_quotient_homology(enumerate_partitions(n), symmetric(n)).is_zero()
