"""Fixed points of subgroups of ``Sigma_n`` acting on ``|Pi_n|``.

An action is isotypical when all its orbits are isomorphic ``G``-sets.  For
isotypical ``G`` with orbits of size ``d`` the fixed points are a wedge of
``|C_{Sigma_d}(G)|^(n/d - 1)`` copies of ``Sigma(|Pi_d|^G * |Pi_(n/d)|)``; in
the non-isotypical case they are contractible.  Predictions here are compared
with the homology of the fixed subposet computed directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .equivariant import fixed_subposet
from .errors import UsageError
from .homology import HomologySummary, join_homology, reduced_homology
from .partitions import SetPartition, enumerate_partitions
from .permgroups import (
    Perm,
    PermGroup,
    are_conjugate,
    centralizer,
    compose,
    diagonal,
    invert,
    parse_group,
    subgroups_between,
    symmetric,
    transitive_subgroups,
)
from .simplicial import SimplicialComplex, order_complex

DEFAULT_CORPUS = ("diag:2@6", "cyclic:3@6", "elab:2,1,3")
DIRECT_HOMOLOGY_MAX_N = 6


@dataclass
class ActionProfile:
    group: PermGroup
    n: int
    orbits: list[tuple[int, ...]]
    isotypical: bool
    d: int | None = None
    model: PermGroup | None = None
    conjugator: Perm | None = None

    def to_json(self) -> dict:
        return {
            "group": self.group.label,
            "order": self.group.order,
            "n": self.n,
            "orbits": [list(o) for o in self.orbits],
            "isotypical": self.isotypical,
            "d": self.d,
        }


def _point_with_stabilizer(G: PermGroup, orbit: Sequence[int], H: frozenset[Perm]) -> int | None:
    for y in orbit:
        if frozenset(g for g in G.elements if g[y - 1] == y) == H:
            return y
    return None


def classify_action(G: PermGroup, n: int | None = None) -> ActionProfile:
    """Orbits, isotypicality, and for isotypical actions the transitive model on ``{1..d}``.

    Orbits are compared through conjugacy of point stabilizers inside ``G``.
    ``conjugator`` is a permutation ``c`` with ``c^-1 G c`` equal to the
    diagonal copy of ``model``.
    """
    n = G.n if n is None else n
    if n != G.n:
        raise UsageError(f"group acts on {G.n} points, not {n}")
    orbs = G.orbits()
    x = orbs[0][0]
    H = G.stabilizer(x)
    sizes = {len(o) for o in orbs}
    iso = len(sizes) == 1 and all(are_conjugate(H, G.stabilizer(o[0]), G) for o in orbs[1:])
    prof = ActionProfile(G, n, orbs, iso)
    if not iso:
        return prof
    d = len(orbs[0])
    Hel = H.elements
    # transport the orbit of x to every other orbit through a point with stabilizer exactly H
    cosets: list[Perm] = []
    seen = set()
    for g in G.sorted_elements:
        y = g[x - 1]
        if y not in seen:
            seen.add(y)
            cosets.append(g)
    cosets.sort(key=lambda g: g[x - 1])
    pos = {g[x - 1]: i for i, g in enumerate(cosets)}
    conj = [0] * n
    for j, o in enumerate(orbs):
        y = _point_with_stabilizer(G, o, Hel)
        if y is None:
            raise AssertionError("conjugate stabilizers without a matching point")
        for i, g in enumerate(cosets):
            conj[j * d + i] = g[y - 1]
    model_gens = [tuple(pos[g[c[x - 1] - 1]] + 1 for c in cosets) for g in G.generators]
    prof.d = d
    prof.model = PermGroup(d, model_gens, label=f"model({G.label})")
    prof.conjugator = tuple(conj)
    return prof


def diagonal_form(profile: ActionProfile) -> PermGroup:
    """``c^-1 G c``, which equals the diagonal copy of the transitive model."""
    c = profile.conjugator
    return PermGroup.from_elements(profile.n, (compose(invert(c), compose(g, c)) for g in profile.group.elements))


# homology inputs -----------------------------------------------------------------


@lru_cache(maxsize=None)
def partition_homology(m: int) -> HomologySummary:
    """Reduced homology of ``|Pi_m|``; virtual ``S^-2`` for ``m = 1``.

    Computed directly up to ``DIRECT_HOMOLOGY_MAX_N``; beyond that the wedge
    of ``(m-1)!`` spheres, which the acceptance suite checks up to ``m = 7``.
    """
    if m == 1:
        return reduced_homology(SimplicialComplex.virtual())
    if m == 2:
        return reduced_homology(SimplicialComplex.empty())
    if m <= DIRECT_HOMOLOGY_MAX_N:
        return reduced_homology(order_complex(enumerate_partitions(m)))
    return HomologySummary({m - 3: math.factorial(m - 1)}, evidence="integral")


def fixed_homology(G: PermGroup) -> HomologySummary:
    """``H(|Pi_n|^G)`` from the fixed subposet (virtual for ``n = 1``)."""
    n = G.n
    if n == 1:
        return partition_homology(1)
    P = enumerate_partitions(n)
    sub = fixed_subposet(P, G)
    if not len(sub):
        return reduced_homology(SimplicialComplex.empty())
    return reduced_homology(order_complex(P, subset=sub))


def predicted_fixed_homology(profile: ActionProfile, model_fixed: HomologySummary | None = None, quotient_part: HomologySummary | None = None) -> HomologySummary:
    """Homology predicted by the centralizer wedge formula; zero off the isotypical case."""
    if not profile.isotypical:
        return HomologySummary.zero()
    d = profile.d
    m = profile.n // d
    C = centralizer(profile.model, symmetric(d))
    copies = C.order ** (m - 1)
    a = model_fixed if model_fixed is not None else fixed_homology(profile.model)
    b = quotient_part if quotient_part is not None else partition_homology(m)
    return join_homology(a, b).shifted(1).times(copies)


def elementary_abelian_prediction(p: int, k: int, m: int) -> HomologySummary:
    """Wedge of ``p^(k(m-1) + C(k,2)) (m-1)!`` spheres of dimension ``m + k - 3``."""
    return HomologySummary({m + k - 3: p ** (k * (m - 1) + math.comb(k, 2)) * math.factorial(m - 1)})


def tits_building_prediction(p: int, k: int) -> HomologySummary:
    """Wedge of ``p^C(k,2)`` spheres of dimension ``k - 2``."""
    return elementary_abelian_prediction(p, k, 1)


def cone_point(G: PermGroup) -> SetPartition | None:
    """A fixed partition ``x`` whose join with every fixed partition stays proper.

    Then ``theta <= theta v x >= x`` contracts the fixed poset, a stronger
    certificate than acyclicity.  Candidates are tried coarsest first.
    """
    n = G.n
    if n < 3:
        return None
    P = enumerate_partitions(n)
    sub = fixed_subposet(P, G)
    if not len(sub):
        return None
    labels = np.array([P.elements[i].labels for i in sub], dtype=np.int64)
    for i in sub:
        x = np.array(P.elements[i].labels, dtype=np.int64)
        # the join (common refinement) is discrete iff the pair of labels is injective
        pairs = labels * (n + 1) + x[None, :]
        distinct = np.array([len(np.unique(row)) for row in pairs])
        if (distinct < n).all():
            return P.elements[i]
    return None


# transitive case -----------------------------------------------------------------


@dataclass
class IntermediatePoset:
    subgroups: list[PermGroup]
    less: np.ndarray
    partitions: list[SetPartition]


def block_partition(G: PermGroup, K: PermGroup, point: int = 1) -> SetPartition:
    """The ``G``-invariant partition with blocks ``g (K . point)``."""
    base = set(K.orbits([point])[0]) if K.order > 1 else {point}
    blocks = {tuple(sorted(g[x - 1] for x in base)) for g in G.elements}
    return SetPartition(G.n, tuple(sorted(blocks)))


def transitive_fixed_poset(G: PermGroup, H: PermGroup | None = None) -> IntermediatePoset:
    """Subgroups strictly between the point stabilizer and ``G``, by reverse inclusion.

    ``less[i, j]`` when subgroup ``i`` strictly contains ``j``, matching the
    order of the corresponding block partitions (bigger subgroup, coarser
    partition).
    """
    if not G.is_transitive():
        raise UsageError(f"{G.label} is not transitive")
    H = H or G.stabilizer(1)
    between = [K for K in subgroups_between(H, G) if K.order not in (H.order, G.order)]
    m = len(between)
    less = np.zeros((m, m), dtype=bool)
    for i, A in enumerate(between):
        for j, B in enumerate(between):
            if i != j and B.is_subgroup_of(A):
                less[i, j] = True
    return IntermediatePoset(between, less, [block_partition(G, K) for K in between])


# verification --------------------------------------------------------------------


@dataclass
class FixedReport:
    spec: str
    profile: ActionProfile
    direct: HomologySummary
    predicted: HomologySummary
    closed_form: HomologySummary | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return self.direct == self.predicted and (self.closed_form is None or self.closed_form == self.direct)

    def to_json(self) -> dict:
        out = {
            "spec": self.spec,
            "profile": self.profile.to_json(),
            "direct": self.direct.to_json(),
            "predicted": self.predicted.to_json(),
            "match": self.match,
        }
        if self.closed_form is not None:
            out["closed_form"] = self.closed_form.to_json()
        return out


def verify_group(G: PermGroup, spec: str | None = None) -> FixedReport:
    prof = classify_action(G)
    rep = FixedReport(spec or G.label, prof, fixed_homology(G), predicted_fixed_homology(prof))
    if (spec or G.label).startswith("elab:"):
        p, k, m = (int(x) for x in (spec or G.label).split(":", 1)[1].split(","))
        rep.closed_form = elementary_abelian_prediction(p, k, m)
    return rep


def verify_fixed_predictions(corpus: Sequence[str] = DEFAULT_CORPUS) -> list[FixedReport]:
    return [verify_group(parse_group(spec), spec) for spec in corpus]


def isotypical_classes(n: int) -> list[PermGroup]:
    """One isotypical subgroup of ``Sigma_n`` per conjugacy class.

    Every isotypical group is conjugate to a diagonal copy of a transitive
    group of degree ``d | n``; distinct transitive classes stay distinct.
    """
    out = [PermGroup(n, label=f"trivial@{n}")]
    for d in range(2, n + 1):
        if n % d:
            continue
        for T in transitive_subgroups(d):
            out.append(diagonal(T.generators, d, n, label=f"diag({T.label})@{n}"))
    return out
