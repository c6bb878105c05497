"""Orbit spaces of ``|Pi_n|`` under Young subgroups.

``Young \\ Pi_n`` splits, up to homology, as a wedge over ``d | gcd(ns)`` of
``witt(ns/d)`` copies of the block ``Sigma_d \\ (S^(ld-1) * |Pi_d|)`` with
``l = n/d - 1``.  Blocks are computed from the equivariant join model; the
trivial ``dDelta^l`` factor is dropped and contributes a degree shift of
``l``, since the orbit space of ``S^(l-1) * Y`` is ``S^(l-1) * (Y/G)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .equivariant import ActionOnComplex, orbit_chain_complex, poset_quotient_homology
from .errors import ResourceError, UsageError
from .freelie import witt
from .homology import HomologySummary
from .partitions import enumerate_partitions
from .permgroups import symmetric, young
from .simplicial import EquivariantComplex, SimplicialComplex, barycentric_equivariant, join_equivariant, order_complex

MAX_BLOCK_FACES = 2_000_000


@dataclass
class QuotientBlock:
    d: int
    l: int
    complex: EquivariantComplex
    homology: HomologySummary
    shift: int

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "l": self.l,
            "faces": self.complex.complex.n_faces(),
            "degree_shift": self.shift,
            "homology": self.homology.to_json(),
            "evidence": self.homology.evidence,
        }


def _face_count(d: int, l: int, trivial_factor: bool) -> int:
    sphere = {1: 1, 2: 3}.get(d) or _sd_boundary_faces(d)
    poset = {1: 1, 2: 1}.get(d)
    if poset is None:
        poset = order_complex(enumerate_partitions(d)).n_faces()
    triv = 2 ** (l + 1) - 1 if trivial_factor else 1
    return triv * sphere**l * poset


def _surjections_count(m: int, k: int) -> int:
    return sum((-1) ** i * math.comb(k, i) * (k - i) ** m for i in range(k + 1))


def _sd_boundary_faces(d: int) -> int:
    """Faces (with the empty one) of the subdivided boundary of a (d-1)-simplex."""
    # a j-face is a chain of j+1 proper nonempty subsets: ordered set partitions
    # of {1..d} into j+2 blocks, the last one nonempty
    return 1 + sum(_surjections_count(d, j + 2) for j in range(0, d - 1))


def block_equivariant(d: int, l: int, trivial_factor: bool = False) -> EquivariantComplex:
    """``Sigma_d`` acting on ``(dDelta^l) * (dDelta^(d-1))^(*l) * |Pi_d|``.

    The ``dDelta^(d-1)`` factors are subdivided for ``d >= 3`` so that the
    action satisfies condition A; for ``d = 2`` the swap of two points
    already does.  Without ``trivial_factor`` the ``dDelta^l`` factor is
    omitted.  For ``d = 1`` the virtual ``|Pi_1|`` appears as shift ``-1``.
    """
    if d < 1 or l < 1:
        raise UsageError("blocks need d, l >= 1")
    G = symmetric(d)
    parts = []
    if trivial_factor:
        parts.append(EquivariantComplex(SimplicialComplex.boundary_simplex(l), G, {g: np.arange(l + 1) for g in G.generators}))
    for _ in range(l):
        X = SimplicialComplex.boundary_simplex(d - 1, labels=list(range(1, d + 1)))
        E = EquivariantComplex(X, G, {g: np.asarray(g, dtype=np.int64) - 1 for g in G.generators})
        parts.append(barycentric_equivariant(E) if d >= 3 else E)
    if d >= 3:
        P = enumerate_partitions(d)
        parts.append(EquivariantComplex(order_complex(P), G, {g: P.action(g) for g in G.generators}))
    E = join_equivariant(parts)
    if d == 1:
        E = EquivariantComplex(E.complex.with_shift(E.complex.shift - 1), G, E.action)
    return E


@lru_cache(maxsize=None)
def quotient_block(d: int, l: int, coeffs="Z", trivial_factor: bool = False) -> QuotientBlock:
    """Homology of ``Sigma_d \\ (S^(ld-1) * |Pi_d|)``."""
    est = _face_count(d, l, trivial_factor)
    if est > MAX_BLOCK_FACES:
        raise ResourceError(f"block ({d},{l}) has about {est} faces", cap="max_faces", estimate=est)
    E = block_equivariant(d, l, trivial_factor)
    A = ActionOnComplex.from_equivariant(E)
    h = orbit_chain_complex(A).homology(coeffs)
    shift = 0 if trivial_factor else l
    return QuotientBlock(d, l, E, h.shifted(shift), shift)


def projective_space_homology(m: int) -> HomologySummary:
    """Reduced integral homology of ``RP^m``."""
    betti, tors = {}, {}
    for i in range(1, m + 1):
        if i % 2 == 1 and i < m:
            tors[i] = [2]
        if i == m and m % 2 == 1:
            betti[i] = 1
    return HomologySummary(betti, tors)


def suspended_projective_homology(l: int) -> HomologySummary:
    """``Sigma^l RP^(l-1)``; contractible for ``l = 1``."""
    return projective_space_homology(l - 1).shifted(l)


def nakaoka_dimensions(p: int, l: int, include_top: bool = False) -> dict[int, int]:
    """Mod-``p`` dimensions: one class in degree ``l + i - 1`` for each admissible ``i``.

    ``i`` is admissible when ``1 < i < (p - 1) l`` and ``i`` is ``0`` or ``1``
    modulo ``2(p - 1)``.  With ``include_top`` the bound is relaxed to
    ``i <= (p - 1) l + 1``, which adds the top pair of classes for even ``l``;
    this is the variant the computed blocks agree with.
    """
    if p < 3 or not _is_prime(p):
        raise UsageError(f"{p} is not an odd prime")
    hi = (p - 1) * l + 2 if include_top else (p - 1) * l
    out: dict[int, int] = {}
    for i in range(2, hi):
        if i % (2 * (p - 1)) in (0, 1):
            out[l + i - 1] = out.get(l + i - 1, 0) + 1
    return out


def block_mod_p_dimensions(d: int, l: int, p: int) -> dict[int, int]:
    """Mod-``p`` dimensions of ``quotient_block(d, l)`` from its integral homology."""
    return dict(quotient_block(d, l).homology.mod_p(p).betti)


# Young quotients -------------------------------------------------------------------


@dataclass
class YoungQuotientReport:
    ns: tuple[int, ...]
    direct: HomologySummary
    predicted: HomologySummary
    trace: list[dict] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return self.direct == self.predicted

    def to_json(self) -> dict:
        return {
            "ns": list(self.ns),
            "direct": self.direct.to_json(),
            "predicted": self.predicted.to_json(),
            "trace": self.trace,
            "match": self.match,
        }


def direct_young_quotient(ns: Sequence[int], coeffs="Z") -> HomologySummary:
    n = sum(ns)
    if n < 3:
        raise UsageError("Young quotients need n >= 3")
    return poset_quotient_homology(enumerate_partitions(n), young(ns), coeffs)


def predicted_young_quotient(ns: Sequence[int]) -> tuple[HomologySummary, list[dict]]:
    n = sum(ns)
    g = math.gcd(*ns)
    total = HomologySummary.zero()
    trace = []
    for d in range(1, g + 1):
        if g % d:
            continue
        copies = witt([x // d for x in ns])
        B = quotient_block(d, n // d - 1)
        total = total + B.homology.times(copies)
        trace.append({"d": d, "l": n // d - 1, "copies": copies, "block": B.homology.to_json()})
    return total, trace


def young_quotient_homology(ns: Sequence[int]) -> YoungQuotientReport:
    ns = tuple(int(x) for x in ns)
    pred, trace = predicted_young_quotient(ns)
    return YoungQuotientReport(ns, direct_young_quotient(ns), pred, trace)


@dataclass
class WedgeVerdict:
    ns: tuple[int, ...]
    wedge_of_spheres: bool
    reason: str

    def to_json(self) -> dict:
        return {"ns": list(self.ns), "wedge_of_spheres": self.wedge_of_spheres, "reason": self.reason}


def _is_prime(m: int) -> bool:
    return m >= 2 and all(m % q for q in range(2, int(m**0.5) + 1))


def classify_wedge_of_spheres(ns: Sequence[int]) -> WedgeVerdict:
    """Whether ``Young \\ Pi_n`` is a wedge of spheres: gcd 1, or gcd a prime ``p`` with ``n`` in ``{2p, 3p}``."""
    ns = tuple(int(x) for x in ns)
    n, g = sum(ns), math.gcd(*ns)
    if len(ns) == 1:
        return WedgeVerdict(ns, True, "single block: the quotient is contractible")
    if g == 1:
        return WedgeVerdict(ns, True, "gcd 1: wedge of witt(ns) spheres of dimension n-3")
    if _is_prime(g) and n in (2 * g, 3 * g):
        return WedgeVerdict(ns, True, f"gcd {g} prime and n = {n // g}*{g}: blocks are spheres or contractible")
    p = min(q for q in range(2, g + 1) if g % q == 0 and _is_prime(q))
    return WedgeVerdict(ns, False, f"summand Sigma_{p} \\ (S^({n // p - 1}*{p}-1) * |Pi_{p}|) with l = {n // p - 1} > 2 carries torsion")


@dataclass
class TorsionReport:
    ns: tuple[int, ...]
    homology: HomologySummary
    torsion_primes: list[int]
    torsion_bound_ok: bool
    free_degree_ok: bool
    free_rank: int
    expected_free_rank: int

    @property
    def passed(self) -> bool:
        return self.torsion_bound_ok and self.free_degree_ok and self.free_rank == self.expected_free_rank

    def to_json(self) -> dict:
        return {
            "ns": list(self.ns),
            "homology": self.homology.to_json(),
            "torsion_primes": self.torsion_primes,
            "torsion_bound_ok": self.torsion_bound_ok,
            "free_degree_ok": self.free_degree_ok,
            "free_rank": self.free_rank,
            "expected_free_rank": self.expected_free_rank,
            "passed": self.passed,
        }


def expected_free_rank(ns: Sequence[int]) -> int:
    """``witt(ns)``, plus ``witt(ns/2)`` when 2 divides the gcd and ``n/2`` is odd."""
    n, g = sum(ns), math.gcd(*ns)
    r = witt(list(ns))
    if g % 2 == 0 and (n // 2) % 2 == 1:
        r += witt([x // 2 for x in ns])
    return r


def torsion_and_rational_checks(ns: Sequence[int], homology: HomologySummary | None = None) -> TorsionReport:
    ns = tuple(int(x) for x in ns)
    n, g = sum(ns), math.gcd(*ns)
    H = homology if homology is not None else direct_young_quotient(ns)
    primes = sorted({min(q for q in range(2, t + 1) if t % q == 0) for ts in H.torsion.values() for t in ts})
    return TorsionReport(
        ns,
        H,
        primes,
        all(p <= g for p in primes),
        set(H.betti) <= {n - 3},
        H.rank(n - 3),
        expected_free_rank(ns),
    )
