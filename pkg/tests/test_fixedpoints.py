from __future__ import annotations

import math

import pytest

from pbranch.equivariant import fixed_subposet
from pbranch.fixedpoints import (
    DEFAULT_CORPUS,
    block_partition,
    classify_action,
    cone_point,
    diagonal_form,
    elementary_abelian_prediction,
    fixed_homology,
    isotypical_classes,
    partition_homology,
    predicted_fixed_homology,
    tits_building_prediction,
    transitive_fixed_poset,
    verify_fixed_predictions,
    verify_group,
)
from pbranch.homology import HomologySummary
from pbranch.partitions import enumerate_partitions
from pbranch.permgroups import (
    PermGroup,
    diagonal,
    elementary_abelian,
    parse_group,
    subgroup_classes,
    symmetric,
    transitive_subgroups,
    wreath,
    young,
)


def young_compositions(n):
    """Partitions of n (as Young types), excluding the full symmetric group."""

    def parts(m, cap):
        if m == 0:
            yield ()
            return
        for k in range(min(m, cap), 0, -1):
            for rest in parts(m - k, k):
                yield (k,) + rest

    return [p for p in parts(n, n) if len(p) > 1]


class TestClassify:
    def test_young_not_isotypical(self):
        assert not classify_action(young([2, 2])).isotypical

    def test_diagonal(self):
        prof = classify_action(parse_group("diag:2@8"))
        assert prof.isotypical and prof.d == 2 and len(prof.orbits) == 4

    def test_transitive(self):
        prof = classify_action(symmetric(4))
        assert prof.isotypical and prof.d == 4

    @pytest.mark.parametrize("spec", ["diag:2@6", "cyclic:3@6", "elab:2,1,3", "elab:2,2,2", "perm:(1 3)(2 4)@4", "perm:(1 4 2 5 3 6)@6"])
    def test_conjugator(self, spec):
        G = parse_group(spec)
        prof = classify_action(G)
        assert prof.isotypical
        D = diagonal(prof.model.generators, prof.d, G.n)
        assert diagonal_form(prof).same_as(D)


class TestPredictions:
    def test_double_transposition(self):
        prof = classify_action(parse_group("perm:(1 2)(3 4)@4"))
        assert predicted_fixed_homology(prof).betti == {0: 2}

    def test_elementary_abelian_closed_form(self):
        assert elementary_abelian_prediction(2, 2, 1).betti == {0: 2}
        assert elementary_abelian_prediction(2, 1, 2).betti == {0: 2}
        assert tits_building_prediction(2, 2).betti == {0: 2}

    @pytest.mark.parametrize("p,k,m", [(2, 1, 2), (2, 2, 1), (2, 1, 3), (3, 1, 2), (2, 2, 2), (2, 3, 1), (3, 1, 1)])
    def test_elementary_abelian_direct(self, p, k, m):
        G = elementary_abelian(p, k, m)
        direct = fixed_homology(G)
        assert direct == elementary_abelian_prediction(p, k, m)
        assert direct == predicted_fixed_homology(classify_action(G))

    def test_wreath_acyclic(self):
        assert fixed_homology(wreath([2, 2], 4)).is_zero()
        assert predicted_fixed_homology(classify_action(wreath([2, 2], 4))).is_zero()

    @pytest.mark.parametrize("ds", [[2, 2], [2, 3], [3, 2], [2, 2, 2], [2, 4], [4, 2]])
    def test_wreath_products(self, ds):
        G = wreath(ds, math.prod(ds))
        assert fixed_homology(G).is_zero()
        assert cone_point(G) is not None

    def test_partition_homology(self):
        assert partition_homology(1).betti == {-2: 1}
        assert partition_homology(2).betti == {-1: 1}
        for m in range(3, 7):
            assert partition_homology(m) == HomologySummary({m - 3: math.factorial(m - 1)})


class TestCorpus:
    def test_default(self):
        reps = verify_fixed_predictions(DEFAULT_CORPUS)
        assert [r.spec for r in reps] == list(DEFAULT_CORPUS)
        assert all(r.match for r in reps)

    def test_elab_reports_closed_form(self):
        rep = verify_group(parse_group("elab:2,1,3"), "elab:2,1,3")
        assert rep.closed_form == rep.direct == HomologySummary({1: 8})

    def test_non_isotypical_spot(self):
        rep = verify_group(young([2, 2]))
        assert rep.direct.is_zero() and rep.predicted.is_zero() and rep.match

    @pytest.mark.parametrize("n", range(2, 7))
    def test_all_isotypical_classes(self, n):
        for G in isotypical_classes(n):
            prof = classify_action(G)
            assert prof.isotypical
            assert fixed_homology(G) == predicted_fixed_homology(prof), G.label


class TestTransitive:
    def test_cyclic_four(self):
        I = transitive_fixed_poset(parse_group("cyclic:4@4"))
        assert len(I.subgroups) == 1 and str(I.partitions[0]) == "1 3|2 4"

    def test_symmetric(self):
        for d in range(3, 6):
            assert transitive_fixed_poset(symmetric(d)).subgroups == []

    def test_klein(self):
        I = transitive_fixed_poset(elementary_abelian(2, 2, 1))
        assert sorted(str(x) for x in I.partitions) == ["1 2|3 4", "1 3|2 4", "1 4|2 3"]

    @pytest.mark.parametrize("d", range(2, 7))
    def test_matches_fixed_subposet(self, d):
        P = enumerate_partitions(d)
        for G in transitive_subgroups(d):
            I = transitive_fixed_poset(G)
            fixed = {P.elements[i] for i in fixed_subposet(P, G)} if d > 2 else set()
            assert set(I.partitions) == fixed
            assert len(I.partitions) == len(I.subgroups)
            # order reversing: bigger subgroup, coarser partition
            for a, A in enumerate(I.subgroups):
                for b, B in enumerate(I.subgroups):
                    if I.less[a, b]:
                        assert I.partitions[a] < I.partitions[b] or I.partitions[b].refines(I.partitions[a])

    def test_block_partition(self):
        G = parse_group("cyclic:4@4")
        K = parse_group("perm:(1 3)(2 4)@4")
        assert str(block_partition(G, K)) == "1 3|2 4"


class TestNonIsotypical:
    @pytest.mark.parametrize("n", range(3, 7))
    def test_acyclic(self, n):
        checked = 0
        for parts in young_compositions(n):
            for K in subgroup_classes(young(parts)):
                if classify_action(K).isotypical:
                    continue
                checked += 1
                assert fixed_homology(K).is_zero(), K.label
        assert checked > 0

    @pytest.mark.parametrize("spec", ["young:2,2", "young:3,3", "young:2,1,1", "young:4,2"])
    def test_cone_points(self, spec):
        G = parse_group(spec)
        x = cone_point(G)
        assert x is not None
        assert fixed_homology(G).is_zero()

    def test_no_cone_point_for_spheres(self):
        assert cone_point(parse_group("perm:(1 2)(3 4)@4")) is None

    def test_trivial_group_isotypical(self):
        prof = classify_action(PermGroup(4))
        assert prof.isotypical and prof.d == 1
