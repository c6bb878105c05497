"""Branching pieces of the partition complex and the certificates built on them.

For a composition ``ns`` of ``n``, each divisor ``d`` of ``gcd(ns)``, Hall
monomial ``w`` in ``B(ns/d)`` and coset ``sigma Sigma_d`` of the diagonal
``Sigma_d`` in the Young subgroup gives a piece: the star of the chain
``sigma (d x Lambda_w)``.  Collapsing everything outside the pieces induces a
map on top cohomology; it is certified to be an isomorphism here, together
with fixed-point and orbit-space homology comparisons for subgroups of the
Young subgroup.  All certificates are homology-level statements.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .barcelo import LabeledBinaryTree, _components_labels, _signed_permutations, chain_of_linearization, tree_of_chain
from .equivariant import ActionOnComplex, fixed_subposet, orbit_chain_complex
from .errors import ResourceError, UsageError
from .freelie import HallBasis, Tree, resolution, to_string, witt
from .homology import HomologySummary, eliminate, induced_on_top_cohomology, join_homology, reduced_homology, smith_normal_form
from .partitions import PartitionPoset, SetPartition, canonical_labels, d_times, enumerate_partitions, rho
from .permgroups import (
    PermGroup,
    conjugate,
    diagonal_sigma_d,
    double_coset_representatives,
    format_cycles,
    left_coset_representatives,
    subconjugators,
    subgroup_classes,
    young,
)
from .simplicial import EquivariantComplex, SimplicialComplex, face_index, join_equivariant, order_complex, sphere_model, star_boundary

CERTIFICATE_LABEL = "homology-level certificate (not a proof of the space-level equivalence)"
MAX_PIECE_N = 8
DIRECT_ROUTE_MAX_N = 7


@dataclass
class CollapsePiece:
    d: int
    w: Tree
    coset: tuple[int, ...]
    chain: list[SetPartition]

    @property
    def label(self) -> str:
        return f"d={self.d} w={to_string(self.w)} g={format_cycles(self.coset)}"


def extended_chain(d: int, w: Tree, k: int) -> list[SetPartition]:
    """``d x Lambda_w`` with ``rho_d`` in front when ``d > 1``, coarsest first."""
    wt = resolution(w, k)
    T = LabeledBinaryTree(wt)
    m = T.n
    base = chain_of_linearization(T) if m >= 2 else []
    chain = [d_times(d, lam) for lam in base]
    if d > 1:
        chain = [rho(d, d * m)] + chain
    return chain


def piece_count(ns: Sequence[int]) -> int:
    g = math.gcd(*ns)
    order = math.prod(math.factorial(x) for x in ns)
    return sum(witt([x // d for x in ns]) * order // math.factorial(d) for d in range(1, g + 1) if g % d == 0)


def expected_rank(ns: Sequence[int]) -> int:
    """Sum over d of witt(ns/d) (d-1)! [Young : Sigma_d]; equals (n-1)!."""
    g = math.gcd(*ns)
    order = math.prod(math.factorial(x) for x in ns)
    return sum(witt([x // d for x in ns]) * math.factorial(d - 1) * order // math.factorial(d) for d in range(1, g + 1) if g % d == 0)


def build_pieces(ns: Sequence[int]) -> list[CollapsePiece]:
    ns = tuple(int(x) for x in ns)
    if not ns or any(x < 1 for x in ns):
        raise UsageError("composition entries must be positive")
    n = sum(ns)
    if n > MAX_PIECE_N:
        raise ResourceError(f"pieces limited to n <= {MAX_PIECE_N}", cap="n", estimate=n)
    k = len(ns)
    g = math.gcd(*ns)
    Y = young(ns)
    out = []
    for d in range(1, g + 1):
        if g % d:
            continue
        sub = [x // d for x in ns]
        reps = left_coset_representatives(Y, diagonal_sigma_d(d, n))
        for w in HallBasis(k, bound=sub).filter(sub):
            base = extended_chain(d, w, k)
            for sigma in reps:
                out.append(CollapsePiece(d, w, sigma, [lam.permuted(sigma) for lam in base]))
    return out


# piece geometry ---------------------------------------------------------------


def piece_top_faces(piece: CollapsePiece, P: PartitionPoset) -> np.ndarray:
    """Top faces of the piece (sorted vertex rows of ``P``): maximal chains through its chain."""
    from .simplicial import star_and_link

    chain_idx = sorted(P.index(lam) for lam in piece.chain)
    if len(chain_idx) == P.n - 2:
        return np.array([chain_idx], dtype=np.int64)
    star_idx, _ = star_and_link(P, chain_idx)
    S = order_complex(P, subset=star_idx)
    tops = np.asarray(star_idx)[S.faces[S.dim]]
    if S.dim != P.n - 3:
        raise AssertionError("star is not pure of top dimension")
    return np.sort(tops, axis=1)


def piece_cocycles_local(piece: CollapsePiece, P: PartitionPoset, tops: np.ndarray | None = None) -> list[tuple[int, ...]]:
    """Top faces whose indicators form a basis of the piece's relative top cohomology.

    Rows are the piece's top faces; columns the codimension-one faces that
    still contain the chain, i.e. a completing vertex deleted.
    """
    if tops is None:
        tops = piece_top_faces(piece, P)
    if len(tops) == 1:
        return [tuple(tops[0].tolist())]
    keep = set(P.index(lam) for lam in piece.chain)
    col_ids: dict[tuple[int, ...], int] = {}
    rows = {}
    for r, row in enumerate(tops.tolist()):
        entries = {}
        for i, v in enumerate(row):
            if v in keep:
                continue
            key = tuple(row[:i] + row[i + 1 :])
            c = col_ids.setdefault(key, len(col_ids))
            entries[c] = 1 if i % 2 == 0 else -1
        rows[r] = entries
    el = eliminate(rows, "Z", record=True)
    if el.core:
        raise AssertionError("piece coboundary needs non-unit pivots")
    dropped = {r for r, _ in el.record}
    return [tuple(tops[r].tolist()) for r in range(len(tops)) if r not in dropped]


def disjointness_check(pieces: Sequence[CollapsePiece], P: PartitionPoset, tops: Sequence[np.ndarray] | None = None) -> bool:
    """True iff no maximal simplex belongs to two pieces."""
    if tops is None:
        tops = [piece_top_faces(piece, P) for piece in pieces]
    seen: set[tuple[int, ...]] = set()
    for T in tops:
        for row in T.tolist():
            t = tuple(row)
            if t in seen:
                return False
            seen.add(t)
    return True


def piece_star(piece: CollapsePiece, n: int) -> tuple[SimplicialComplex, SimplicialComplex]:
    """Star of the piece's chain in ``Pi_n`` and its boundary (chains not containing it)."""
    return star_boundary(n, piece.chain)


# collapse isomorphism -----------------------------------------------------------


@dataclass
class CollapseReport:
    ns: tuple[int, ...]
    pieces: int
    expected: int
    size: tuple[int, int]
    disjoint: bool
    method: str
    evidence: str
    invariant_factors: list[int] | None = None
    modular_ranks: dict[int, int] = field(default_factory=dict)
    rational_rank: int | None = None
    label: str = CERTIFICATE_LABEL

    @property
    def isomorphism(self) -> bool:
        if not self.disjoint or self.size != (self.expected, self.expected):
            return False
        if self.invariant_factors is not None:
            return len(self.invariant_factors) == self.expected and all(d == 1 for d in self.invariant_factors)
        return self.rational_rank == self.expected and all(r == self.expected for r in self.modular_ranks.values())

    def to_json(self) -> dict:
        out = {
            "ns": list(self.ns),
            "pieces": self.pieces,
            "expected_rank": self.expected,
            "matrix_shape": list(self.size),
            "disjoint": self.disjoint,
            "method": self.method,
            "evidence": self.evidence,
            "isomorphism": self.isomorphism,
            "label": self.label,
        }
        if self.invariant_factors is not None:
            out["snf_all_ones"] = all(d == 1 for d in self.invariant_factors) and len(self.invariant_factors) == self.expected
            out["snf_rank"] = len(self.invariant_factors)
        if self.modular_ranks:
            out["modular_ranks"] = {str(p): r for p, r in self.modular_ranks.items()}
        if self.rational_rank is not None:
            out["rational_rank"] = self.rational_rank
        return out


def _chain_keys(rows: np.ndarray, base: int) -> np.ndarray:
    """Exact complex keys for rows of at most 6 vertex indices."""
    w = rows.shape[1]
    h = (w + 1) // 2
    wa = base ** np.arange(h - 1, -1, -1, dtype=np.int64)
    wb = base ** np.arange(w - h - 1, -1, -1, dtype=np.int64)
    hi = rows[:, :h] @ wa
    lo = rows[:, h:] @ wb if w > h else np.zeros(len(rows), dtype=np.int64)
    if base**h >= 2**52:
        raise ResourceError("chain keys would lose precision", cap="key_width")
    return hi.astype(np.float64) + 1j * lo.astype(np.float64)


def tree_cycle_arrays(n: int, edges: Sequence[tuple[int, int]], P: PartitionPoset) -> tuple[np.ndarray, np.ndarray]:
    """Chains (rows of sorted vertex indices) and signs of the tree cycle; no repeats."""
    m = n - 1
    masks = np.arange(1, 2**m - 1)
    labels = np.array([_components_labels(n, [edges[i] for i in range(m) if (s >> i) & 1]) for s in masks.tolist()], dtype=np.int64)
    vidx = np.full(2**m, -1, dtype=np.int64)
    vidx[masks] = P.indices_of_labels(labels)
    perms, signs = _signed_permutations(m)
    cum = np.cumsum(1 << perms, axis=1)[:, : m - 1]
    return vidx[cum[:, ::-1]], signs


def increasing_trees(n: int) -> list[list[tuple[int, int]]]:
    """Spanning trees in which every vertex ``j > 1`` has exactly one smaller neighbour."""
    return [[(p, j) for j, p in enumerate(parents, start=2)] for parents in itertools.product(*[range(1, j) for j in range(2, n + 1)])]


def pairing_matrix(cocycles: Sequence[tuple[int, ...]], trees: Sequence[Sequence[tuple[int, int]]], n: int, P: PartitionPoset) -> dict[int, dict[int, int]]:
    """Column ``j`` holds the coefficients of the cocycle chains in the cycle of tree ``j``."""
    C = np.array(cocycles, dtype=np.int64)
    keys = _chain_keys(C, len(P))
    order = np.argsort(keys)
    skeys = keys[order]
    cols: dict[int, dict[int, int]] = {}
    for j, edges in enumerate(trees):
        chains, signs = tree_cycle_arrays(n, edges, P)
        ck = _chain_keys(chains, len(P))
        pos = np.minimum(np.searchsorted(skeys, ck), len(skeys) - 1)
        hit = skeys[pos] == ck
        cols[j] = {int(order[p]): int(s) for p, s in zip(pos[hit].tolist(), signs[hit].tolist())}
    return cols


def verify_collapse_iso(ns: Sequence[int], method: str = "auto", primes: Sequence[int] = (2, 3, 5, 7), integral: bool = True) -> CollapseReport:
    """Certify that collapsing onto the pieces is an isomorphism on top cohomology.

    ``direct``: project every piece cocycle into the cokernel of the top
    coboundary of ``Pi_n`` and take the Smith form.  ``pairing``: evaluate
    the piece cocycles on the cycles of the increasing spanning trees.  The
    top cohomology is free of rank ``(n-1)!``, so a unimodular square
    pairing matrix shows the cocycle classes form a basis.  ``auto``
    uses ``direct`` up to n = 6.
    """
    ns = tuple(int(x) for x in ns)
    n = sum(ns)
    if n < 3:
        raise UsageError("collapse certificate needs n >= 3")
    if method == "auto":
        method = "direct" if n <= 6 else "pairing"
    if method == "direct" and n > DIRECT_ROUTE_MAX_N:
        raise ResourceError(f"direct route limited to n <= {DIRECT_ROUTE_MAX_N}", cap="n", estimate=n)
    P = enumerate_partitions(n)
    pieces = build_pieces(ns)
    expected = expected_rank(ns)
    tops = [piece_top_faces(p, P) for p in pieces]
    disjoint = disjointness_check(pieces, P, tops)
    if method == "direct":
        X = order_complex(P)
        F = X.faces[X.dim]
        selected = [(p.label, face_index(F, T).tolist()) for p, T in zip(pieces, tops)]
        M, _ = induced_on_top_cohomology(X, selected)
        rows = {j: {i: int(M[i, j]) for i in range(M.shape[0]) if M[i, j]} for j in range(M.shape[1])}
        snf = smith_normal_form(rows)
        return CollapseReport(ns, len(pieces), expected, M.shape, disjoint, "direct", "integral", invariant_factors=snf)
    if method != "pairing":
        raise UsageError(f"unknown method {method!r}")
    cocycles = [c for p, T in zip(pieces, tops) for c in piece_cocycles_local(p, P, T)]
    cols = pairing_matrix(cocycles, increasing_trees(n), n, P)
    size = (len(cocycles), len(cocycles))
    report = CollapseReport(ns, len(pieces), expected, size, disjoint, "pairing", "modular+rational")
    for p in primes:
        report.modular_ranks[p] = eliminate(cols, "p", p).rank
    report.rational_rank = eliminate(cols, "Q").rank
    if integral:
        el = eliminate(cols, "Z")
        if not el.core:
            report.invariant_factors = [1] * el.rank
            report.evidence = "integral"
    return report


# main theorem certificate ---------------------------------------------------------


@dataclass
class SubgroupComparison:
    subgroup: str
    order: int
    fixed_lhs: HomologySummary
    fixed_rhs: HomologySummary
    quotient_lhs: HomologySummary | None = None
    quotient_rhs: HomologySummary | None = None

    @property
    def fixed_match(self) -> bool:
        return self.fixed_lhs == self.fixed_rhs

    @property
    def quotient_match(self) -> bool:
        return self.quotient_lhs is None or self.quotient_lhs == self.quotient_rhs

    def to_json(self) -> dict:
        out = {
            "subgroup": self.subgroup,
            "order": self.order,
            "fixed_lhs": self.fixed_lhs.to_json(),
            "fixed_rhs": self.fixed_rhs.to_json(),
            "fixed_match": self.fixed_match,
        }
        if self.quotient_lhs is not None:
            out.update(quotient_lhs=self.quotient_lhs.to_json(), quotient_rhs=self.quotient_rhs.to_json(), quotient_match=self.quotient_match)
        return out


@dataclass
class MainTheoremReport:
    ns: tuple[int, ...]
    collapse: CollapseReport
    comparisons: list[SubgroupComparison]
    label: str = CERTIFICATE_LABEL

    @property
    def passed(self) -> bool:
        return self.collapse.isomorphism and all(c.fixed_match and c.quotient_match for c in self.comparisons)

    def to_json(self) -> dict:
        return {
            "ns": list(self.ns),
            "label": self.label,
            "collapse": self.collapse.to_json(),
            "subgroups": [c.to_json() for c in self.comparisons],
            "passed": self.passed,
        }


def _restrict_to_first_block(perms: Sequence[tuple[int, ...]], d: int) -> list[tuple[int, ...]]:
    return [tuple(p[:d]) for p in perms]


@lru_cache(maxsize=None)
def _summand_action(d: int, l: int) -> ActionOnComplex:
    """Sigma_d acting on sphere_model(d, l) * |Pi_d| (sphere factors subdivided for d >= 3)."""
    E = sphere_model(d, l, subdivide=True)
    if d >= 3:
        P = enumerate_partitions(d)
        Xd = order_complex(P)
        G = E.group
        Pd = EquivariantComplex(Xd, G, {g: P.action(g) for g in G.generators})
        E = join_equivariant([E, Pd])
        return ActionOnComplex.from_equivariant(E)
    A = ActionOnComplex.from_equivariant(E)
    if d == 1:
        A = ActionOnComplex(A.complex.with_shift(-1), A.group, A.elements, A.table)
    return A


def _fixed_summand_homology(d: int, l: int, Kd: Sequence[tuple[int, ...]]) -> HomologySummary:
    """H of (sphere model)^K * |Pi_d|^K, joined through the Kunneth formula."""
    E = sphere_model(d, l, subdivide=True)
    A = ActionOnComplex.from_equivariant(E)
    sphere_fixed = reduced_homology(A.fixed_subcomplex(Kd))
    if d == 1:
        poset_h = reduced_homology(SimplicialComplex.virtual())
    else:
        P = enumerate_partitions(d)
        H = PermGroup(d, Kd)
        poset_h = reduced_homology(order_complex(P, subset=fixed_subposet(P, H)))
    return join_homology(sphere_fixed, poset_h)


def rhs_fixed_homology(ns: Sequence[int], K: PermGroup) -> HomologySummary:
    """Fixed points of the wedge of induced spaces under ``K``, by the double coset formula."""
    n = sum(ns)
    g = math.gcd(*ns)
    Y = young(ns)
    total = HomologySummary.zero()
    for d in range(1, g + 1):
        if g % d:
            continue
        copies = witt([x // d for x in ns])
        Sd = diagonal_sigma_d(d, n)
        l = n // d - 1
        for gg in subconjugators(Y, K, Sd):
            Kd = _restrict_to_first_block([conjugate(gg, k) for k in K.generators], d)
            total = total + _fixed_summand_homology(d, l, Kd).times(copies)
    return total


def rhs_quotient_homology(ns: Sequence[int], K: PermGroup) -> HomologySummary:
    """Orbit space of the wedge of induced spaces: one summand per double coset ``K g Sigma_d``."""
    n = sum(ns)
    g = math.gcd(*ns)
    Y = young(ns)
    total = HomologySummary.zero()
    for d in range(1, g + 1):
        if g % d:
            continue
        copies = witt([x // d for x in ns])
        Sd = diagonal_sigma_d(d, n)
        l = n // d - 1
        A = _summand_action(d, l)
        for gg in double_coset_representatives(K, Y, Sd):
            Sd_el = Sd.elements
            inter = [x for x in (conjugate(gg, k) for k in K.elements) if x in Sd_el]
            L = PermGroup.from_elements(d, _restrict_to_first_block(inter, d))
            h = orbit_chain_complex(A.restricted(L)).homology()
            total = total + h.times(copies)
    return total


def lhs_fixed_homology(P: PartitionPoset, K: PermGroup) -> HomologySummary:
    return reduced_homology(order_complex(P, subset=fixed_subposet(P, K)))


def lhs_quotient_homology(P: PartitionPoset, K: PermGroup) -> HomologySummary:
    return orbit_chain_complex(ActionOnComplex.from_poset(P, K)).homology()


def verify_main_theorem(ns: Sequence[int], subgroups: Sequence[PermGroup] | None = None, quotients: bool = True, collapse_method: str = "auto") -> MainTheoremReport:
    """Collapse isomorphism, plus fixed-point and orbit homology for each subgroup
    of the Young subgroup (all conjugacy classes by default)."""
    ns = tuple(int(x) for x in ns)
    n = sum(ns)
    collapse = verify_collapse_iso(ns, method=collapse_method)
    Y = young(ns)
    if subgroups is None:
        subgroups = subgroup_classes(Y)
    P = enumerate_partitions(n)
    comps = []
    for K in subgroups:
        if not K.is_subgroup_of(Y):
            raise UsageError(f"{K.label} is not a subgroup of {Y.label}")
        c = SubgroupComparison(_describe(K), K.order, lhs_fixed_homology(P, K), rhs_fixed_homology(ns, K))
        if quotients:
            c.quotient_lhs = lhs_quotient_homology(P, K)
            c.quotient_rhs = rhs_quotient_homology(ns, K)
        comps.append(c)
    return MainTheoremReport(ns, collapse, comps)


def _describe(K: PermGroup) -> str:
    return "<" + ", ".join(format_cycles(g) for g in K.generators) + ">" if K.generators else "1"
