"""Permutation groups on {1..n}: constructions, orbits, cosets and subgroup search.

Permutations are tuples of images, ``p[i-1] = p(i)``; products compose right
to left, ``(a * b)(i) = a(b(i))``.  Element sets are materialized by plain
closure, which is all the desk-scale groups here need.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import ResourceError, UsageError

MAX_GROUP_ORDER = 10**6
MAX_BETWEEN_ORDER = 10**4

Perm = tuple[int, ...]


def compose(a: Perm, b: Perm) -> Perm:
    """``a * b``: apply ``b`` first."""
    return tuple(a[x - 1] for x in b)


def invert(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x - 1] = i + 1
    return tuple(out)


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def conjugate(g: Perm, k: Perm) -> Perm:
    """``g^-1 k g``."""
    return compose(invert(g), compose(k, g))


@dataclass(frozen=True)
class Permutation:
    images: Perm

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise UsageError(f"{self.images!r} is not a permutation of 1..{len(self.images)}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(compose(self.images, other.images))

    def inverse(self) -> "Permutation":
        return Permutation(invert(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        return cycles(self.images)

    def __str__(self) -> str:
        return format_cycles(self.images)

    @classmethod
    def parse(cls, text: str, n: int) -> "Permutation":
        return cls(parse_cycles(text, n))


def cycles(p: Perm) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for i in range(1, len(p) + 1):
        if i in seen or p[i - 1] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i - 1]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j - 1]
        out.append(tuple(cyc))
    return out


def format_cycles(p: Perm) -> str:
    cs = cycles(p)
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs) if cs else "()"


def parse_cycles(text: str, n: int) -> Perm:
    img = list(range(1, n + 1))
    for body in re.findall(r"\(([^()]*)\)", text):
        pts = [int(t) for t in body.replace(",", " ").split()]
        if any(not 1 <= x <= n for x in pts) or len(set(pts)) != len(pts):
            raise UsageError(f"bad cycle ({body}) for n={n}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise UsageError(f"cannot parse permutation {text!r}")
    return tuple(img)


def cycle_type(p: Perm) -> tuple[int, ...]:
    lens = [len(c) for c in cycles(p)]
    lens += [1] * (len(p) - sum(lens))
    return tuple(sorted(lens, reverse=True))


class PermGroup:
    """Subgroup of the symmetric group on ``{1..n}`` given by generators."""

    def __init__(self, n: int, generators: Iterable[Sequence[int]] = (), label: str = "", cap: int = MAX_GROUP_ORDER):
        self.n = n
        gens = []
        for g in generators:
            g = tuple(g.images if isinstance(g, Permutation) else g)
            if len(g) != n or sorted(g) != list(range(1, n + 1)):
                raise UsageError(f"{g!r} is not a permutation of 1..{n}")
            if g != identity(n) and g not in gens:
                gens.append(g)
        self.generators: tuple[Perm, ...] = tuple(gens)
        self.label = label or ("<" + ", ".join(format_cycles(g) for g in gens) + ">" if gens else "1")
        self.cap = cap
        self._elements: frozenset[Perm] | None = None

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[Perm], label: str = "") -> "PermGroup":
        elems = frozenset(elements)
        G = cls(n, _small_generating_set(n, elems), label=label)
        G._elements = elems
        return G

    def __repr__(self) -> str:
        return f"PermGroup({self.label}, n={self.n})"

    @property
    def elements(self) -> frozenset[Perm]:
        if self._elements is None:
            self._elements = closure(self.n, self.generators, cap=self.cap)
        return self._elements

    @cached_property
    def sorted_elements(self) -> tuple[Perm, ...]:
        return tuple(sorted(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, p) -> bool:
        p = tuple(p.images if isinstance(p, Permutation) else p)
        return p in self.elements

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.n == other.n and all(g in other.elements for g in self.generators)

    def same_as(self, other: "PermGroup") -> bool:
        return self.n == other.n and self.elements == other.elements

    def is_trivial(self) -> bool:
        return not self.generators

    def orbits(self, points: Iterable[int] | None = None) -> list[tuple[int, ...]]:
        return orbits(self, points)

    def stabilizer(self, point: int) -> "PermGroup":
        return PermGroup.from_elements(self.n, (g for g in self.elements if g[point - 1] == point), label=f"Stab({point})")

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def conjugated(self, g: Perm) -> "PermGroup":
        """``g^-1 G g``."""
        return PermGroup.from_elements(self.n, (conjugate(g, x) for x in self.elements), label=f"{self.label}^g")


def closure(n: int, generators: Sequence[Perm], cap: int = MAX_GROUP_ORDER, start: Iterable[Perm] = ()) -> frozenset[Perm]:
    """Element set of the group generated by ``generators`` (and ``start``)."""
    e = identity(n)
    seen = {e}
    seen.update(start)
    frontier = list(seen)
    gens = [g for g in generators if g != e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i - 1] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > cap:
            raise ResourceError(f"group order exceeds cap {cap}", cap="max_group_order", estimate=len(seen))
        frontier = nxt
    return frozenset(seen)


def _small_generating_set(n: int, elements: frozenset[Perm]) -> list[Perm]:
    gens: list[Perm] = []
    current = frozenset([identity(n)])
    for g in sorted(elements, key=lambda p: (-_perm_order(p), p)):
        if g not in current:
            gens.append(g)
            current = closure(n, gens)
            if len(current) == len(elements):
                break
    return gens


def _perm_order(p: Perm) -> int:
    return math.lcm(*[len(c) for c in cycles(p)]) if cycles(p) else 1


# constructions -------------------------------------------------------------


def symmetric(n: int) -> PermGroup:
    return young([n])


def young(parts: Sequence[int]) -> PermGroup:
    """Permutations preserving consecutive blocks of the given sizes."""
    if not parts or any(p < 1 for p in parts):
        raise UsageError(f"young needs positive parts, got {parts!r}")
    n = sum(parts)
    gens = []
    start = 1
    for p in parts:
        for i in range(start, start + p - 1):
            img = list(range(1, n + 1))
            img[i - 1], img[i] = i + 1, i
            gens.append(tuple(img))
        start += p
    return PermGroup(n, gens, label="young:" + ",".join(map(str, parts)))


def diagonal(gens_on_d: Iterable[Perm], d: int, n: int, label: str = "") -> PermGroup:
    """Embed permutations of ``{1..d}`` diagonally: ``s(i + jd) = s(i) + jd``."""
    if d < 1 or n % d:
        raise UsageError(f"diagonal embedding needs d | n, got d={d}, n={n}")
    out = []
    for g in gens_on_d:
        out.append(tuple(g[(x - 1) % d] + ((x - 1) // d) * d for x in range(1, n + 1)))
    return PermGroup(n, out, label=label)


def diagonal_sigma_d(d: int, n: int) -> PermGroup:
    """The symmetric group on d letters acting the same way on each consecutive d-block."""
    if d < 1 or n % d:
        raise UsageError(f"diag needs d | n, got d={d}, n={n}")
    return diagonal(young([d]).generators, d, n, label=f"diag:{d}@{n}")


def wreath(ds: Sequence[int], n: int) -> PermGroup:
    """Iterated wreath product on blocks of size prod(ds), repeated diagonally.

    The innermost factor ``ds[0]`` permutes inside consecutive blocks of size
    ``ds[0]``; factor ``ds[j]`` permutes the sub-blocks of size
    ``ds[0]*...*ds[j-1]`` inside blocks of size ``ds[0]*...*ds[j]``.
    """
    if not ds or any(d < 1 for d in ds):
        raise UsageError(f"wreath needs positive factors, got {ds!r}")
    size = math.prod(ds)
    if n % size:
        raise UsageError(f"wreath: {size} does not divide {n}")
    gens = []
    sub = 1
    for d in ds:
        for i in range(d - 1):
            img = list(range(1, size + 1))
            for t in range(sub):
                a, b = i * sub + t, (i + 1) * sub + t
                img[a], img[b] = b + 1, a + 1
            gens.append(tuple(img))
        sub *= d
    return diagonal(gens, size, n, label="wreath:" + ",".join(map(str, ds)) + f"@{n}")


def elementary_abelian(p: int, k: int, m: int) -> PermGroup:
    """``(Z/p)^k`` acting freely with ``m`` regular orbits on ``m p^k`` points."""
    if not _is_prime(p):
        raise UsageError(f"{p} is not prime")
    if k < 1 or m < 1:
        raise UsageError("elementary_abelian needs k, m >= 1")
    size = p**k
    gens = []
    for i in range(k):
        img = []
        for x in range(size):
            digits = [(x // p**j) % p for j in range(k)]
            digits[i] = (digits[i] + 1) % p
            img.append(sum(dg * p**j for j, dg in enumerate(digits)) + 1)
        gens.append(tuple(img))
    G = diagonal(gens, size, size * m)
    G.label = f"elab:{p},{k},{m}"
    return G


def cyclic(k: int, n: int) -> PermGroup:
    """``Z/k`` generated by the k-cycle ``(1 .. k)`` repeated on each consecutive k-block."""
    if k < 1 or n % k:
        raise UsageError(f"cyclic needs k | n, got k={k}, n={n}")
    gen = tuple(list(range(2, k + 1)) + [1])
    return diagonal([gen], k, n, label=f"cyclic:{k}@{n}")


_SPEC_RE = re.compile(r"^\s*(\w+)\s*:\s*(.*?)\s*$")


def parse_group(spec: str) -> PermGroup:
    """Parse the group spec mini-language.

    ``young:2,2`` | ``wreath:2,2@8`` | ``diag:2@8`` | ``elab:2,2,1`` |
    ``cyclic:4@4`` | ``perm:(1 2)(3 4);(1 3)(2 4)@4``
    """
    m = _SPEC_RE.match(spec)
    if not m:
        raise UsageError(f"cannot parse group spec {spec!r}")
    kind, body = m.group(1).lower(), m.group(2)
    try:
        if kind == "young":
            return young(_ints(body))
        if kind == "elab":
            p, k, mm = _ints(body)
            return elementary_abelian(p, k, mm)
        args, _, at = body.rpartition("@")
        if not _:
            raise UsageError(f"group spec {spec!r} needs '@n'")
        n = int(at)
        if kind == "wreath":
            return wreath(_ints(args), n)
        if kind == "diag":
            (d,) = _ints(args)
            return diagonal_sigma_d(d, n)
        if kind == "cyclic":
            (k,) = _ints(args)
            return cyclic(k, n)
        if kind == "perm":
            gens = [parse_cycles(t, n) for t in args.split(";") if t.strip()]
            return PermGroup(n, gens, label=f"perm:{args}@{n}")
    except (ValueError, TypeError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"cannot parse group spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown group kind {kind!r} in {spec!r}")


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


# orbits, cosets, centralizers ---------------------------------------------


def orbits(G: PermGroup, points: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    pts = sorted(set(points)) if points is not None else list(range(1, G.n + 1))
    remaining = set(pts)
    out = []
    for x in pts:
        if x not in remaining:
            continue
        orb = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for g in G.generators:
                z = g[y - 1]
                if z not in orb:
                    orb.add(z)
                    stack.append(z)
        remaining -= orb
        out.append(tuple(sorted(orb)))
    return out


def centralizer(G: PermGroup, ambient: PermGroup) -> PermGroup:
    """Elements of ``ambient`` commuting with every generator of ``G``."""
    if not G.is_subgroup_of(ambient):
        raise UsageError(f"{G.label} is not a subgroup of {ambient.label}")
    gens = G.generators
    elems = [w for w in ambient.elements if all(compose(w, g) == compose(g, w) for g in gens)]
    return PermGroup.from_elements(G.n, elems, label=f"C({G.label})")


def subconjugators(G: PermGroup, K: PermGroup, H: PermGroup) -> list[Perm]:
    """Representatives of ``N_G(K;H)/H`` where ``N_G(K;H) = {g : g^-1 K g <= H}``.

    Each coset ``gH`` is represented by its lexicographically least element.
    """
    Hel = H.elements
    reps = set()
    for g in G.sorted_elements:
        ginv = invert(g)
        if all(compose(ginv, compose(k, g)) in Hel for k in K.generators):
            reps.add(min(compose(g, h) for h in Hel))
    return sorted(reps)


def left_coset_representatives(G: PermGroup, H: PermGroup) -> list[Perm]:
    """Least element of each coset ``gH``."""
    return subconjugators(G, PermGroup(G.n), H)


def right_coset_representatives(H: PermGroup, G: PermGroup) -> list[Perm]:
    """Least element of each coset ``Hg``."""
    Hel = H.elements
    seen: set[Perm] = set()
    reps = []
    for g in G.sorted_elements:
        if g in seen:
            continue
        coset = {compose(h, g) for h in Hel}
        seen |= coset
        reps.append(min(coset))
    return sorted(reps)


def double_coset_representatives(K: PermGroup, G: PermGroup, H: PermGroup) -> list[Perm]:
    """Least element of each double coset ``KgH``."""
    seen: set[Perm] = set()
    reps = []
    for g in G.sorted_elements:
        if g in seen:
            continue
        dc = {compose(k, compose(g, h)) for k in K.elements for h in H.elements}
        seen |= dc
        reps.append(min(dc))
    return reps


def subgroups_between(H: PermGroup, G: PermGroup, cap: int = MAX_BETWEEN_ORDER) -> list[PermGroup]:
    """All ``K`` with ``H <= K <= G``, sorted by order then elements."""
    if G.order > cap:
        raise ResourceError(f"|G| = {G.order} exceeds subgroup search cap {cap}", cap="max_group_order", estimate=G.order)
    if not H.is_subgroup_of(G):
        raise UsageError(f"{H.label} is not a subgroup of {G.label}")
    found = {H.elements}
    frontier = [(H.elements, list(H.generators))]
    Gel = G.sorted_elements
    while frontier:
        nxt = []
        for K, kgens in frontier:
            covered = set(K)
            for g in Gel:
                if g in covered:
                    continue
                J = closure(G.n, kgens + [g])
                covered |= {compose(k, g) for k in K}
                if J not in found:
                    found.add(J)
                    nxt.append((J, kgens + [g]))
        frontier = nxt
    out = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [PermGroup.from_elements(G.n, s) for s in out]


def _cyclic_with_generators(G: PermGroup) -> list[tuple[Perm, frozenset[Perm]]]:
    seen = set()
    out = []
    for g in G.sorted_elements:
        C = closure(G.n, [g])
        if C not in seen:
            seen.add(C)
            out.append((g, C))
    return out


def cyclic_subgroups(G: PermGroup) -> list[frozenset[Perm]]:
    return [C for _, C in _cyclic_with_generators(G)]


def all_subgroups(G: PermGroup, cap: int = 2000) -> list[PermGroup]:
    """Every subgroup of ``G``, built by joining cyclic subgroups."""
    if G.order > cap:
        raise ResourceError(f"|G| = {G.order} exceeds full subgroup enumeration cap {cap}", cap="max_group_order", estimate=G.order)
    cyc = [(C, g) for g, C in _cyclic_with_generators(G)]
    found = {C for C, _ in cyc}
    frontier = [(C, [g]) for C, g in cyc]
    while frontier:
        nxt = []
        for K, kgens in frontier:
            for C, c in cyc:
                if c in K:
                    continue
                J = closure(G.n, kgens + [c])
                if J not in found:
                    found.add(J)
                    nxt.append((J, kgens + [c]))
        frontier = nxt
    out = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [PermGroup.from_elements(G.n, s) for s in out]


def subgroup_conjugacy_key(K: PermGroup, ambient: PermGroup) -> tuple[Perm, ...]:
    """Lexicographically least sorted element list over all ``ambient``-conjugates."""
    best = None
    for g in ambient.elements:
        key = tuple(sorted(conjugate(g, k) for k in K.elements))
        if best is None or key < best:
            best = key
    return best


def subgroup_classes(G: PermGroup, cap: int = 2000) -> list[PermGroup]:
    """One representative per ``G``-conjugacy class of subgroups of ``G``."""
    reps: dict[tuple[Perm, ...], PermGroup] = {}
    for K in all_subgroups(G, cap=cap):
        key = subgroup_conjugacy_key(K, G)
        if key not in reps:
            reps[key] = PermGroup.from_elements(G.n, key)
    return sorted(reps.values(), key=lambda K: (K.order, K.sorted_elements))


def are_conjugate(A: PermGroup, B: PermGroup, ambient: PermGroup) -> bool:
    if A.order != B.order:
        return False
    Bel = B.elements
    return any(all(conjugate(g, a) in Bel for a in A.generators) for g in ambient.elements)


@lru_cache(maxsize=None)
def _transitive_classes(d: int) -> tuple[tuple[Perm, ...], ...]:
    if d == 1:
        return ((identity(1),),)
    Sd = sorted(itertools.permutations(range(1, d + 1)))
    by_type: dict[tuple[int, ...], Perm] = {}
    for p in Sd:
        by_type.setdefault(cycle_type(p), p)
    groups: dict[tuple, frozenset[Perm]] = {}
    found_sets: set[frozenset[Perm]] = set()
    # A transitive group of prime degree contains a d-cycle, so one
    # generator can be taken to be (1 .. d).
    first = [tuple(list(range(2, d + 1)) + [1])] if _is_prime(d) else list(by_type.values())
    for a in first:
        if a == identity(d):
            continue
        Ca = [c for c in Sd if compose(c, a) == compose(a, c)]
        Ca_inv = [(c, invert(c)) for c in Ca]
        seen_b: set[Perm] = set()
        for b in Sd:
            if b in seen_b:
                continue
            orbit_b = {compose(c, compose(b, ci)) for c, ci in Ca_inv}
            seen_b |= orbit_b
            if not _generates_transitive(d, a, b):
                continue
            G = closure(d, [a, b])
            if G in found_sets:
                continue
            found_sets.add(G)
            key = _conj_invariant(G)
            groups.setdefault(key, [])
            if not any(_conjugate_sets(G, H, Sd) for H in groups[key]):
                groups[key].append(G)
    reps = [G for lst in groups.values() for G in lst]
    reps.sort(key=lambda s: (len(s), sorted(s)))
    return tuple(tuple(sorted(s)) for s in reps)


def _is_prime(d: int) -> bool:
    return d > 1 and all(d % q for q in range(2, int(d**0.5) + 1))


def _generates_transitive(d: int, a: Perm, b: Perm) -> bool:
    orb = {1}
    stack = [1]
    while stack:
        x = stack.pop()
        for g in (a, b):
            y = g[x - 1]
            if y not in orb:
                orb.add(y)
                stack.append(y)
    return len(orb) == d


def _conj_invariant(G: frozenset[Perm]) -> tuple:
    types: dict[tuple[int, ...], int] = {}
    for g in G:
        t = cycle_type(g)
        types[t] = types.get(t, 0) + 1
    return (len(G), tuple(sorted(types.items())))


def _conjugate_sets(A: frozenset[Perm], B: frozenset[Perm], Sd: Sequence[Perm]) -> bool:
    gens = _small_generating_set(len(next(iter(A))), A)
    return any(all(conjugate(g, a) in B for a in gens) for g in Sd)


def transitive_subgroups(d: int) -> list[PermGroup]:
    """Conjugacy class representatives of transitive subgroups of ``Sigma_d``.

    Found as groups generated by two elements, which covers every transitive
    group of degree at most 7.  For prime degree one generator is the full
    cycle.
    """
    if d > 7:
        raise ResourceError("transitive subgroup search is limited to degree <= 7", cap="degree", estimate=d)
    return [PermGroup.from_elements(d, els) for els in _transitive_classes(d)]
