from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbranch.equivariant import (
    ActionOnComplex,
    condition_A_check,
    fixed_subposet,
    induced_space_fixed_points,
    orbit_chain_complex,
    poset_quotient_homology,
    quotient_homology,
    quotient_homology_oracle,
    subdivide_action,
)
from pbranch.errors import UsageError
from pbranch.homology import reduced_homology
from pbranch.partitions import SetPartition, enumerate_partitions
from pbranch.permgroups import PermGroup, diagonal_sigma_d, parse_group, symmetric, young
from pbranch.simplicial import EquivariantComplex, SimplicialComplex, order_complex, sphere_model

CORPUS = {
    3: ["young:2,1", "cyclic:3@3", "perm:(1 2)@3", "young:3"],
    4: ["young:2,2", "young:3,1", "diag:2@4", "cyclic:4@4", "elab:2,2,1", "wreath:2,2@4", "perm:(1 2)@4", "young:4"],
    5: ["young:3,2", "young:4,1", "cyclic:5@5", "perm:(1 2)(3 4)@5", "young:2,2,1"],
}


def labels(P, idx):
    return {str(P.elements[i]) for i in idx}


class TestFixedSubposet:
    def test_double_transposition(self):
        P4 = enumerate_partitions(4)
        sub = fixed_subposet(P4, parse_group("perm:(1 2)(3 4)@4"))
        assert labels(P4, sub) == {"1 2|3 4", "1|2|3 4", "1 2|3|4", "1 3|2 4", "1 4|2 3"}
        H = reduced_homology(order_complex(P4, subset=sub))
        assert H.betti == {0: 2}

    def test_full_group(self):
        assert len(fixed_subposet(enumerate_partitions(4), symmetric(4))) == 0

    def test_four_cycle(self):
        P4 = enumerate_partitions(4)
        assert labels(P4, fixed_subposet(P4, parse_group("cyclic:4@4"))) == {"1 3|2 4"}

    @pytest.mark.parametrize("n", [4, 5])
    def test_fixed_complex_is_order_complex_of_fixed_poset(self, n):
        P = enumerate_partitions(n)
        for spec in CORPUS[n]:
            G = parse_group(spec)
            A = ActionOnComplex.from_poset(P, G)
            fixed = A.fixed_subcomplex(G)
            direct = order_complex(P, subset=fixed_subposet(P, G))
            assert fixed.f_vector() == direct.f_vector()


class TestConditionA:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_rank_preserving_actions(self, n):
        P = enumerate_partitions(n)
        for spec in CORPUS[n]:
            assert condition_A_check(ActionOnComplex.from_poset(P, parse_group(spec)))[0]

    @pytest.mark.parametrize("spec", ["young:3,2,1", "diag:2@6", "cyclic:6@6", "wreath:2,3@6", "young:5,2"])
    def test_rank_preserving_larger(self, spec):
        G = parse_group(spec)
        P = enumerate_partitions(G.n)
        A = ActionOnComplex.from_poset(P, G, with_complex=False)
        A = ActionOnComplex(order_complex(P), G, A.elements, A.table)
        assert condition_A_check(A)[0]

    def test_swap_fails(self):
        G = symmetric(2)
        E = EquivariantComplex(SimplicialComplex.simplex(1, labels=[1, 2]), G, {g: np.asarray(g) - 1 for g in G.generators})
        ok, witness = condition_A_check(ActionOnComplex.from_equivariant(E))
        assert not ok
        assert witness == ((2, 1), (1, 2))

    def test_subdivision_repairs(self):
        E = sphere_model(3, 1)
        A = ActionOnComplex.from_equivariant(E)
        assert not condition_A_check(A)[0]
        assert condition_A_check(subdivide_action(A))[0]


class TestQuotients:
    def test_kozlov_four(self):
        A = ActionOnComplex.from_poset(enumerate_partitions(4), symmetric(4))
        assert quotient_homology(A).is_zero()

    def test_young_two_two(self):
        A = ActionOnComplex.from_poset(enumerate_partitions(4), young([2, 2]))
        assert quotient_homology(A).betti == {1: 1}

    def test_requires_condition_a(self):
        A = ActionOnComplex.from_equivariant(sphere_model(3, 1))
        with pytest.raises(UsageError):
            quotient_homology(A)
        assert quotient_homology(A, subdivide=True) == quotient_homology_oracle(A)

    def test_orbit_builder_matches_full_complex(self):
        for n in (4, 5):
            P = enumerate_partitions(n)
            for spec in CORPUS[n]:
                G = parse_group(spec)
                assert poset_quotient_homology(P, G) == quotient_homology(ActionOnComplex.from_poset(P, G))

    @pytest.mark.parametrize("n", [4, 5])
    def test_oracle(self, n):
        P = enumerate_partitions(n)
        specs = CORPUS[n] if n == 4 else ["young:4,1", "young:3,2", "young:5"]
        for spec in specs:
            A = ActionOnComplex.from_poset(P, parse_group(spec))
            assert quotient_homology(A) == quotient_homology_oracle(A), spec

    def test_orbit_complex_dd(self):
        A = ActionOnComplex.from_poset(enumerate_partitions(5), young([3, 2]))
        C = orbit_chain_complex(A)
        C.check_dd()

    @given(st.sampled_from(CORPUS[4] + CORPUS[3]), st.sampled_from(["Z", 2, 3]))
    def test_oracle_property(self, spec, coeffs):
        G = parse_group(spec)
        A = ActionOnComplex.from_poset(enumerate_partitions(G.n), G)
        assert quotient_homology(A, coeffs) == quotient_homology_oracle(A, coeffs)


class TestInducedSpace:
    def _sphere_join(self):
        E = sphere_model(2, 1)
        return ActionOnComplex.from_equivariant(E)

    def test_trivial_K(self):
        X = self._sphere_join()
        G, H = young([2, 2]), diagonal_sigma_d(2, 4)
        # X carries an action of Sigma_2; induce along the diagonal copy in W
        XH = ActionOnComplex(X.complex, H, list(H.sorted_elements), X.table[[0, 1]])
        W = induced_space_fixed_points(G, H, XH, PermGroup(4))
        assert len(W) == 2
        assert W.reduced_homology().betti == {1: 2}

    def test_not_subconjugate(self):
        X = self._sphere_join()
        G, H = young([2, 2]), diagonal_sigma_d(2, 4)
        XH = ActionOnComplex(X.complex, H, list(H.sorted_elements), X.table[[0, 1]])
        W = induced_space_fixed_points(G, H, XH, young([2, 1, 1]))
        assert len(W) == 0 and W.reduced_homology().is_zero()

    def test_K_equals_H(self):
        X = self._sphere_join()
        G, H = young([2, 2]), diagonal_sigma_d(2, 4)
        XH = ActionOnComplex(X.complex, H, list(H.sorted_elements), X.table[[0, 1]])
        W = induced_space_fixed_points(G, H, XH, H)
        # C_W(H) / C_(Sigma_2)(H) has order 4 / 2
        assert len(W) == 2
