from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbranch.errors import ResourceError, UsageError
from pbranch.freelie import (
    HallBasis,
    all_monomials,
    branching_matrix,
    branching_size,
    hall_basis,
    is_multilinear,
    leaves,
    mobius,
    multidegree,
    multilinear_basis,
    operad_substitute,
    parse_monomial,
    phi_w,
    relabel,
    resolution,
    to_string,
    verify_branching,
    witt,
)
from pbranch.homology import eliminate, smith_normal_form

M = parse_monomial


def compositions(n: int, max_parts: int = 4):
    for k in range(1, max_parts + 1):
        for c in itertools.product(range(1, n + 1), repeat=k):
            if sum(c) == n:
                yield c


def necklace_witt(ns) -> int:
    """Witt number as the count of aperiodic necklaces (Lyndon words) with content ``ns``."""
    word = [i for i, c in enumerate(ns) for _ in range(c)]
    seen = set()
    count = 0
    for p in set(itertools.permutations(word)):
        rots = {p[i:] + p[:i] for i in range(len(p))}
        key = min(rots)
        if key in seen:
            continue
        seen.add(key)
        if len(rots) == len(p):
            count += 1
    return count


def span_rank(ns) -> int:
    """Rank of the span of normal forms of every bracketing with multidegree ``ns``."""
    B = HallBasis(len(ns), bound=list(ns))
    rows = {i: B.normal_form(t) for i, t in enumerate(all_monomials(ns))}
    return eliminate(rows, "Q").rank


class TestWitt:
    def test_known_values(self):
        assert witt([2, 2]) == 1
        assert witt([4, 4]) == 8
        for n in range(2, 9):
            assert witt([n - 1, 1]) == 1
            assert witt([1] * n) == math.factorial(n - 1)

    @pytest.mark.parametrize("ns", [c for n in range(1, 7) for c in compositions(n, 3)])
    def test_lyndon_count(self, ns):
        assert witt(ns) == necklace_witt(ns)

    def test_mobius(self):
        assert [mobius(k) for k in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


class TestHallBasis:
    def test_weight_two(self):
        assert [to_string(t) for t in hall_basis(2, 2).elements] == ["x1", "x2", "[x2,x1]"]

    def test_b22(self):
        assert [to_string(t) for t in HallBasis(2, bound=[2, 2]).filter([2, 2])] == ["[[[x2,x1],x1],x2]"]

    @pytest.mark.parametrize("ns", [(2, 1), (1, 2), (2, 2), (3, 1), (2, 1, 1), (3, 2), (2, 2, 1)])
    def test_span_rank_equals_witt(self, ns):
        assert span_rank(ns) == witt(ns) == len(HallBasis(len(ns), bound=list(ns)).filter(list(ns)))

    def test_basic_elements_are_normal(self):
        B = HallBasis(3, bound=[2, 2, 1])
        for i, t in enumerate(B.elements):
            assert B.normal_form(t) == {i: 1}

    def test_cap(self):
        with pytest.raises(ResourceError):
            HallBasis(2, max_weight=30, cap=100)


class TestNormalForm:
    def test_anticommutativity(self):
        B = hall_basis(2, 2)
        i = B.index[M("[x2,x1]")]
        assert B.normal_form(M("[x1,x2]")) == {i: -1}
        assert B.normal_form(M("[x1,x1]")) == {}

    @given(st.sampled_from(all_monomials([2, 1]) + all_monomials([1, 1, 1]) + all_monomials([2, 2])))
    def test_idempotent(self, t):
        k = max(leaves(t))
        B = HallBasis(k, bound=[sum(1 for x in leaves(t) if x == i) for i in range(1, k + 1)])
        nf = B.normal_form(t)
        assert B.normal_form(B.to_trees(nf)) == nf

    def test_weight_three_span(self):
        assert span_rank([2, 1]) + span_rank([1, 2]) == 2


class TestResolution:
    def test_two_two_monomial(self):
        assert to_string(resolution(M("[[[x2,x1],x1],x2]"), 2)) == "[[[x3,x1],x2],x4]"

    def test_multilinear_fixed(self):
        w = M("[[x3,x1],x2]")
        assert resolution(w) == w

    def test_leaf(self):
        assert resolution(M("x1")) == M("x1")

    @given(st.sampled_from(all_monomials([2, 2]) + all_monomials([3, 1, 1])))
    def test_multilinear_output(self, w):
        r = resolution(w, 3 if len(leaves(w)) == 5 else 2)
        assert is_multilinear(r) and sorted(leaves(r)) == list(range(1, len(leaves(w)) + 1))


class TestSubstitution:
    def test_unit(self):
        w = M("[[x3,x1],x2]")
        assert operad_substitute(M("x1"), [w]) == w

    def test_interleaved(self):
        r = resolution(M("[[[x2,x1],x1],x2]"), 2)
        phi = [[1, 3, 5, 7], [2, 4, 6, 8]]
        assert to_string(operad_substitute(M("[x2,x1]"), [r, r], phi)) == "[[[[x6,x2],x4],x8],[[[x5,x1],x3],x7]]"
        assert to_string(operad_substitute(M("[x1,x2]"), [r, r], phi)) == "[[[[x5,x1],x3],x7],[[[x6,x2],x4],x8]]"

    def test_arity_mismatch(self):
        with pytest.raises(UsageError):
            operad_substitute(M("[x2,x1]"), [M("x1")])

    def test_phi_w(self):
        w = M("[[[x2,x1],x1],x2]")
        assert to_string(phi_w(2, w, M("[x2,x1]"), 2)) == "[[[[x6,x2],x4],x8],[[[x5,x1],x3],x7]]"
        assert phi_w(1, w, M("x1"), 2) == resolution(w, 2)

    def test_phi_w_equivariant(self):
        # swapping the two interleaved blocks agrees with swapping the inner variables
        w = M("[[[x2,x1],x1],x2]")
        swap = [2, 1, 4, 3, 6, 5, 8, 7]
        assert relabel(phi_w(2, w, M("[x2,x1]"), 2), swap) == phi_w(2, w, M("[x1,x2]"), 2)


class TestBranching:
    def test_sizes(self):
        assert branching_size([2, 2]) == 6
        assert branching_size([1, 1]) == 1

    @pytest.mark.parametrize("ns", [(1, 1), (2, 2), (3, 1), (2, 1, 1), (3, 2), (2, 2, 1)])
    def test_square_unimodular(self, ns):
        B = branching_matrix(ns)
        n = sum(ns)
        assert B.shape == (math.factorial(n - 1), math.factorial(n - 1))
        assert smith_normal_form(B.as_rows()) == [1] * B.shape[0]

    def test_alternate_order(self):
        # a different Hall order gives a different basis but the same verdict
        B = branching_matrix((2, 2), alternate_order=True)
        assert smith_normal_form(B.as_rows()) == [1] * 6

    def test_modular_report(self):
        rep = verify_branching((2, 2), "modular")
        assert rep.unimodular and rep.modular_ranks == {2: 6, 3: 6, 5: 6, 7: 6}

    def test_cap(self):
        with pytest.raises(ResourceError):
            branching_matrix((4, 4), cap=10)
