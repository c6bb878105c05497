from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbranch.errors import UsageError
from pbranch.permgroups import (
    PermGroup,
    centralizer,
    compose,
    conjugate,
    cyclic,
    diagonal_sigma_d,
    elementary_abelian,
    invert,
    left_coset_representatives,
    orbits,
    parse_cycles,
    parse_group,
    subconjugators,
    subgroups_between,
    symmetric,
    wreath,
    young,
)

perms = st.integers(1, 6).flatmap(lambda n: st.permutations(list(range(1, n + 1))).map(tuple))


class TestBasics:
    @given(perms)
    def test_inverse(self, p):
        e = tuple(range(1, len(p) + 1))
        assert compose(p, invert(p)) == e == compose(invert(p), p)

    def test_compose_convention(self):
        a, b = parse_cycles("(1 2)", 3), parse_cycles("(2 3)", 3)
        # (a b)(i) = a(b(i))
        assert compose(a, b) == tuple(a[b[i] - 1] for i in range(3))

    def test_conjugate(self):
        g, k = parse_cycles("(1 2 3)", 3), parse_cycles("(1 2)", 3)
        assert conjugate(g, k) == compose(invert(g), compose(k, g))


class TestConstructions:
    @pytest.mark.parametrize("parts,order", [([2, 2], 4), ([3, 1], 6), ([4, 4], 576)])
    def test_young_order(self, parts, order):
        assert young(parts).order == order

    def test_diagonal(self):
        G = diagonal_sigma_d(2, 8)
        assert G.order == 2
        assert G.generators == (parse_cycles("(1 2)(3 4)(5 6)(7 8)", 8),)
        assert diagonal_sigma_d(3, 3).same_as(symmetric(3))
        assert diagonal_sigma_d(2, 4).same_as(parse_group("perm:(1 2)(3 4)@4"))

    def test_wreath(self):
        assert wreath([2, 2], 4).order == 8
        assert wreath([3], 3).same_as(symmetric(3))
        assert wreath([2], 6).same_as(diagonal_sigma_d(2, 6))

    @pytest.mark.parametrize("ds", [[2, 2], [2, 3], [3, 2], [2, 2, 2], [2, 4], [4, 2], [2, 2, 3], [2, 2, 2, 2]])
    def test_wreath_order_recursion(self, ds):
        def order(ds):
            if len(ds) == 1:
                return math.factorial(ds[0])
            return math.factorial(ds[0]) ** math.prod(ds[1:]) * order(ds[1:])

        assert wreath(ds, math.prod(ds)).order == order(ds)

    def test_elementary_abelian(self):
        assert elementary_abelian(2, 1, 2).same_as(parse_group("perm:(1 2)(3 4)@4"))
        V = elementary_abelian(2, 2, 1)
        assert V.order == 4 and V.is_transitive()
        assert elementary_abelian(3, 1, 1).same_as(parse_group("perm:(1 2 3)@3"))

    @given(st.sampled_from(["young:2,2", "wreath:2,2@4", "diag:2@6", "elab:2,2,1", "cyclic:4@4", "perm:(1 2)(3 4);(1 3)(2 4)@4", "young:3,2"]))
    def test_orders_divide_factorial(self, spec):
        G = parse_group(spec)
        assert math.factorial(G.n) % G.order == 0
        els = G.elements
        assert all(compose(a, b) in els for a in els for b in els)

    @pytest.mark.parametrize("spec", ["young", "wreath:2,2", "diag:x@4", "perm:(1 5)@4", "bogus:1"])
    def test_bad_specs(self, spec):
        with pytest.raises(UsageError):
            parse_group(spec)


class TestOrbitsAndCentralizers:
    def test_orbits(self):
        assert orbits(young([2, 2])) == [(1, 2), (3, 4)]
        assert orbits(diagonal_sigma_d(2, 4)) == [(1, 2), (3, 4)]
        assert orbits(PermGroup(3)) == [(1,), (2,), (3,)]

    def test_centralizer(self):
        assert centralizer(symmetric(2), symmetric(2)).order == 2
        assert centralizer(symmetric(3), symmetric(3)).order == 1
        W = young([2, 2])
        assert centralizer(PermGroup(4), W).same_as(W)

    @pytest.mark.parametrize("d,n", [(2, 4), (2, 6), (3, 6), (2, 8), (3, 9)])
    def test_centralizer_of_diagonal(self, d, n):
        m = n // d
        C = centralizer(diagonal_sigma_d(d, n), young([d] * m))
        zd = centralizer(symmetric(d), symmetric(d)).order
        # brute force inside the Young group gives the elements commuting with the diagonal copy
        Y = young([d] * m)
        gens = diagonal_sigma_d(d, n).generators
        brute = sum(1 for y in Y.elements if all(compose(y, g) == compose(g, y) for g in gens))
        assert C.order == brute == zd**m

    @pytest.mark.parametrize("d,n", [(2, 4), (2, 6), (3, 6)])
    def test_centralizer_in_symmetric(self, d, n):
        m = n // d
        zd = centralizer(symmetric(d), symmetric(d)).order
        C = centralizer(diagonal_sigma_d(d, n), symmetric(n))
        assert C.order == math.factorial(m) * zd**m


class TestCosets:
    def test_subconjugators_trivial_K(self):
        G, H = symmetric(4), young([2, 2])
        assert len(subconjugators(G, PermGroup(4), H)) == G.order // H.order

    def test_subconjugators_all_equal(self):
        G = young([2, 2])
        assert len(subconjugators(G, G, G)) == 1

    def test_subconjugators_nonempty(self):
        K = parse_group("perm:(1 2)(3 4)@4")
        reps = subconjugators(symmetric(4), K, diagonal_sigma_d(2, 4))
        assert reps
        H = diagonal_sigma_d(2, 4)
        for g in reps:
            assert all(conjugate(g, k) in H.elements for k in K.generators)

    def test_left_cosets_partition(self):
        G, H = young([2, 2]), diagonal_sigma_d(2, 4)
        reps = left_coset_representatives(G, H)
        cosets = [frozenset(compose(g, h) for h in H.elements) for g in reps]
        assert len(set(cosets)) == len(reps) == 2
        assert frozenset().union(*cosets) == G.elements


class TestSubgroupsBetween:
    def test_cyclic_four(self):
        assert len(subgroups_between(PermGroup(4), cyclic(4, 4))) == 3

    def test_klein(self):
        assert len(subgroups_between(PermGroup(4), elementary_abelian(2, 2, 1))) == 5

    def test_equal(self):
        G = young([2, 1])
        assert len(subgroups_between(G, G)) == 1

    def test_brute_force_s3(self):
        G = symmetric(3)
        brute = set()
        for r in range(0, 7):
            for S in itertools.combinations(sorted(G.elements), r):
                S = frozenset(S)
                if S and all(compose(a, invert(b)) in S for a in S for b in S):
                    brute.add(S)
        assert len(subgroups_between(PermGroup(3), G)) == len(brute) == 6
