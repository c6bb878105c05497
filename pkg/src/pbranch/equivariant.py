"""Group actions on simplicial complexes: fixed points, orbit chains and quotient homology.

An action is stored as a table ``table[g, v]`` of vertex images, one row per
group element.  When every face stabilizer fixes its face pointwise
(condition A), the coinvariant chain complex computes the homology of the
orbit space; each face orbit is represented by its lexicographically least
member.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ResourceError, UsageError
from .homology import HomologySummary, SparseRows, _core_snf, _parse_coeffs, eliminate
from .partitions import PartitionPoset
from .permgroups import PermGroup, compose, conjugate, format_cycles, invert, subconjugators
from .simplicial import EquivariantComplex, SimplicialComplex, barycentric, face_index, order_complex

CANON_CHUNK_ENTRIES = 4 * 10**6
MAX_ORACLE_FACES = 2000


@dataclass
class ActionOnComplex:
    """A complex with an action of ``group`` given by a vertex table."""

    complex: SimplicialComplex
    group: PermGroup
    elements: list[tuple[int, ...]]
    table: np.ndarray
    _orbit_faces: dict[int, np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.table = np.asarray(self.table, dtype=np.int64)
        if self.table.shape != (len(self.elements), self.complex.n_vertices):
            raise UsageError("action table has the wrong shape")
        self._pos = {g: i for i, g in enumerate(self.elements)}

    # constructors -----------------------------------------------------------

    @classmethod
    def from_poset(cls, P: PartitionPoset, G: PermGroup, subset: Sequence[int] | None = None, with_complex: bool = True) -> "ActionOnComplex":
        """Action of ``G`` on the order complex of ``P`` (or of a ``G``-stable subposet)."""
        if G.n != P.n:
            raise UsageError(f"group acts on {G.n} points, poset on {P.n}")
        elems = list(G.sorted_elements)
        table = P.action_table(elems)
        if subset is not None:
            sub = np.asarray(sorted(subset), dtype=np.int64)
            newidx = np.full(len(P), -1, dtype=np.int64)
            newidx[sub] = np.arange(len(sub))
            table = newidx[table[:, sub]]
            if (table < 0).any():
                raise UsageError("subset is not stable under the group")
            X = order_complex(P, subset=sub) if with_complex else _vertex_only(len(sub))
        else:
            X = order_complex(P) if with_complex else _vertex_only(len(P))
        return cls(X, G, elems, table)

    @classmethod
    def from_equivariant(cls, E: EquivariantComplex) -> "ActionOnComplex":
        elems, table = E.vertex_table()
        return cls(E.complex, E.group, elems, table)

    def element_row(self, g: Sequence[int]) -> np.ndarray:
        return self.table[self._pos[tuple(g)]]

    def restricted(self, H: PermGroup) -> "ActionOnComplex":
        """The same complex with the action restricted to a subgroup."""
        elems = list(H.sorted_elements)
        try:
            rows = [self._pos[g] for g in elems]
        except KeyError as exc:
            raise UsageError(f"{H.label} is not a subgroup of {self.group.label}") from exc
        return ActionOnComplex(self.complex, H, elems, self.table[rows])

    # structure --------------------------------------------------------------

    def vertex_orbits(self) -> np.ndarray:
        """Orbit id (least vertex of the orbit) for each vertex."""
        return self.table.min(axis=0)

    def check_action(self) -> None:
        for i in range(len(self.elements)):
            vp = self.table[i]
            for k, F in self.complex.faces.items():
                if k <= 0 or not len(F):
                    continue
                img = np.sort(vp[F], axis=1)
                if (face_index(F, img, missing_ok=True) < 0).any():
                    raise UsageError(f"{format_cycles(self.elements[i])} does not map faces to faces")

    def condition_A(self) -> tuple[bool, tuple | None]:
        """Whether every setwise face stabilizer fixes the face pointwise.

        Returns ``(True, None)`` or ``(False, (g, face_labels))``.  Faces whose
        vertices lie in distinct vertex orbits pass automatically.
        """
        orb = self.vertex_orbits()
        suspicious = []
        for k, F in self.complex.faces.items():
            if k <= 0 or not len(F):
                continue
            o = np.sort(orb[F], axis=1)
            bad = (o[:, 1:] == o[:, :-1]).any(axis=1)
            if bad.any():
                suspicious.append(F[bad])
        for F in suspicious:
            for i, g in enumerate(self.elements):
                img = self.table[i][F]
                setwise = (np.sort(img, axis=1) == F).all(axis=1)
                moved = (img != F).any(axis=1)
                hit = np.flatnonzero(setwise & moved)
                if len(hit):
                    face = tuple(self.complex.labels[v] for v in F[hit[0]])
                    return False, (g, face)
        return True, None

    # orbits -----------------------------------------------------------------

    def canonicalize(self, F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Least image of each face over the group, and the orientation sign."""
        return canonicalize_faces(self.table, F)

    def orbit_faces(self) -> dict[int, np.ndarray]:
        """Representatives of face orbits by dimension (sorted, unique)."""
        if self._orbit_faces is None:
            out = {}
            for k, F in self.complex.faces.items():
                if k < 0:
                    out[k] = F
                    continue
                reps, _ = self.canonicalize(F)
                out[k] = np.unique(reps, axis=0)
            self._orbit_faces = out
        return self._orbit_faces

    def fixed_vertices(self, H: PermGroup | Sequence[Sequence[int]]) -> np.ndarray:
        gens = H.generators if isinstance(H, PermGroup) else [tuple(g) for g in H]
        mask = np.ones(self.complex.n_vertices, dtype=bool)
        for g in gens:
            row = self.element_row(g)
            mask &= row == np.arange(len(row))
        return np.flatnonzero(mask)

    def fixed_subcomplex(self, H: PermGroup | Sequence[Sequence[int]]) -> SimplicialComplex:
        """Full subcomplex on the vertices fixed by ``H`` (the fixed points under condition A)."""
        return self.complex.induced(self.fixed_vertices(H).tolist())


def _vertex_only(n: int) -> SimplicialComplex:
    return SimplicialComplex([(i,) for i in range(n)] or [()], n_vertices=n)


def canonicalize_faces(table: np.ndarray, F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lexicographically least sorted image of each row of ``F`` over all rows of ``table``.

    Also returns the sign of the vertex reordering for the chosen image.
    """
    F = np.asarray(F, dtype=np.int64)
    m, w = F.shape
    if w == 0 or m == 0:
        return F.copy(), np.ones(m, dtype=np.int64)
    G = table.shape[0]
    chunk = max(1, CANON_CHUNK_ENTRIES // (G * w))
    reps = np.empty_like(F)
    signs = np.empty(m, dtype=np.int64)
    big = np.iinfo(np.int64).max
    for s in range(0, m, chunk):
        block = F[s : s + chunk]
        raw = table[:, block]  # (G, b, w)
        imgs = np.sort(raw, axis=2)
        mask = np.ones(imgs.shape[:2], dtype=bool)
        for j in range(w):
            col = np.where(mask, imgs[:, :, j], big)
            mn = col.min(axis=0)
            mask &= col == mn[None, :]
        best = mask.argmax(axis=0)
        ar = np.arange(len(block))
        reps[s : s + chunk] = imgs[best, ar]
        chosen = raw[best, ar]
        inv = np.zeros(len(block), dtype=np.int64)
        for a in range(w):
            for b in range(a + 1, w):
                inv += chosen[:, a] > chosen[:, b]
        signs[s : s + chunk] = 1 - 2 * (inv % 2)
    return reps, signs


# orbit chain complex -----------------------------------------------------------


@dataclass
class OrbitChainComplex:
    """Coinvariant chains: one generator per face orbit."""

    reps: dict[int, np.ndarray]
    boundaries: dict[int, SparseRows]
    shift: int = 0

    def sizes(self) -> dict[int, int]:
        return {k: len(v) for k, v in self.reps.items()}

    def check_dd(self) -> None:
        for k in self.boundaries:
            if k - 1 not in self.boundaries:
                continue
            for row in self.boundaries[k].values():
                acc: dict[int, int] = {}
                for c, v in row.items():
                    for c2, v2 in self.boundaries[k - 1].get(c, {}).items():
                        acc[c2] = acc.get(c2, 0) + v * v2
                if any(acc.values()):
                    raise AssertionError(f"boundary squared is nonzero in degree {k}")

    def homology(self, coeffs="Z") -> HomologySummary:
        mode, p, label = _parse_coeffs(coeffs)
        ranks: dict[int, int] = {}
        factors: dict[int, list[int]] = {}
        for k, rows in self.boundaries.items():
            el = eliminate(rows, mode, p)
            if mode == "Z":
                core = _core_snf(el.core)
                ranks[k] = el.rank + len(core)
                factors[k] = [d for d in core if d > 1]
            else:
                ranks[k] = el.rank
        sizes = self.sizes()
        betti, torsion = {}, {}
        for k in sizes:
            b = sizes[k] - ranks.get(k, 0) - ranks.get(k + 1, 0)
            if b:
                betti[k + self.shift] = b
            if factors.get(k + 1):
                torsion[k + self.shift] = factors[k + 1]
        evidence = {"Z": "integral", "Q": "rational", "p": f"mod {p}"}[mode]
        out = HomologySummary(betti, torsion, "Z" if mode == "Z" else label, evidence)
        chi = sum((-1) ** (k + self.shift) * n for k, n in sizes.items())
        if out.euler() != chi:
            raise AssertionError("Euler characteristic mismatch in orbit homology")
        return out


def orbit_boundaries(table: np.ndarray, reps: dict[int, np.ndarray]) -> dict[int, SparseRows]:
    out: dict[int, SparseRows] = {}
    for k in sorted(reps):
        if k < 0:
            continue
        R = reps[k]
        if not len(R):
            out[k] = {}
            continue
        if k == 0:
            out[k] = {i: {0: 1} for i in range(len(R))}
            continue
        prev = reps[k - 1]
        rows: SparseRows = {i: {} for i in range(len(R))}
        for i in range(k + 1):
            sub = np.delete(R, i, axis=1)
            crep, sgn = canonicalize_faces(table, sub)
            idx = face_index(prev, crep)
            base = 1 if i % 2 == 0 else -1
            for r, (c, s) in enumerate(zip(idx.tolist(), sgn.tolist())):
                row = rows[r]
                v = row.get(c, 0) + base * s
                if v:
                    row[c] = v
                else:
                    row.pop(c, None)
        out[k] = rows
    return out


def orbit_chain_complex(A: ActionOnComplex, check: bool = True) -> OrbitChainComplex:
    if check:
        ok, witness = A.condition_A()
        if not ok:
            raise UsageError(f"condition A fails: {format_cycles(witness[0])} flips {witness[1]}")
    reps = A.orbit_faces()
    occ = OrbitChainComplex(reps, orbit_boundaries(A.table, reps), A.complex.shift)
    return occ


def poset_orbit_faces(P: PartitionPoset, G: PermGroup, cap: int = 2_000_000) -> tuple[dict[int, np.ndarray], np.ndarray]:
    """Canonical chain representatives of ``G``-orbits in the order complex of ``P``.

    Chains are grown one finer element at a time.  A canonical chain ``r``
    with stabilizer ``S`` extends to a canonical chain by ``v`` exactly when
    ``v`` is the least point of its ``S``-orbit, so the full complex is never
    built.  Returns the representatives by dimension and the action table.
    """
    if G.n != P.n:
        raise UsageError(f"group acts on {G.n} points, poset on {P.n}")
    table = P.action_table(G.sorted_elements)
    up = P.up_sets
    allrows = np.arange(table.shape[0])
    verts = np.flatnonzero(table.min(axis=0) == np.arange(len(P)))
    level = [((int(v),), allrows[table[:, v] == v]) for v in verts]
    reps: dict[int, np.ndarray] = {-1: np.zeros((1, 0), dtype=np.int64)}
    total = 0
    k = 0
    while level:
        arr = np.array([r for r, _ in level], dtype=np.int64).reshape(len(level), k + 1)
        order = np.lexsort(arr.T[::-1]) if len(arr) else np.zeros(0, dtype=np.int64)
        reps[k] = arr[order]
        total += len(level)
        if total > cap:
            raise ResourceError(f"more than {cap} orbit representatives", cap="max_faces", estimate=total)
        nxt = []
        for r, S in level:
            V = up[r[-1]]
            if not len(V):
                continue
            if len(S) > 1:
                V = V[table[np.ix_(S, V)].min(axis=0) == V]
                for v in V.tolist():
                    nxt.append((r + (v,), S[table[S, v] == v]))
            else:
                nxt.extend((r + (v,), S) for v in V.tolist())
        level = nxt
        k += 1
    return reps, table


def poset_quotient_homology(P: PartitionPoset, G: PermGroup, coeffs="Z") -> HomologySummary:
    """Orbit-space homology of ``|P|`` under ``G`` via :func:`poset_orbit_faces`.

    The action on chains of partitions preserves rank, so it satisfies
    condition A and the coinvariant chains compute the quotient.
    """
    reps, table = poset_orbit_faces(P, G)
    return OrbitChainComplex(reps, orbit_boundaries(table, reps)).homology(coeffs)


def quotient_homology(A: ActionOnComplex, coeffs="Z", subdivide: bool = False) -> HomologySummary:
    """Reduced homology of the orbit space.

    With ``subdivide`` the complex is barycentrically subdivided first when
    condition A fails.
    """
    ok, witness = A.condition_A()
    if not ok:
        if not subdivide:
            raise UsageError(f"condition A fails: {format_cycles(witness[0])} flips {witness[1]}")
        A = subdivide_action(A)
    return orbit_chain_complex(A, check=False).homology(coeffs)


def subdivide_action(A: ActionOnComplex) -> ActionOnComplex:
    """Barycentric subdivision with the action transported to faces."""
    Y = barycentric(A.complex)
    faces = A.complex.faces
    offsets = {}
    off = 0
    for k in sorted(faces):
        if k < 0:
            continue
        offsets[k] = off
        off += len(faces[k])
    table = np.empty((len(A.elements), off), dtype=np.int64)
    for k in sorted(faces):
        if k < 0:
            continue
        F = faces[k]
        for i in range(len(A.elements)):
            img = np.sort(A.table[i][F], axis=1)
            table[i, offsets[k] : offsets[k] + len(F)] = face_index(F, img) + offsets[k]
    return ActionOnComplex(Y, A.group, A.elements, table)


def explicit_quotient(A: ActionOnComplex) -> SimplicialComplex:
    """Orbit space as a simplicial complex; valid when the action is regular."""
    orb = A.vertex_orbits()
    ids = np.unique(orb)
    relabel = np.searchsorted(ids, orb)
    facets = set()
    for k, F in A.complex.faces.items():
        if k < 0:
            continue
        img = np.sort(relabel[F], axis=1)
        if (img[:, 1:] == img[:, :-1]).any():
            raise UsageError("action is not regular: a face meets an orbit twice")
        facets.update(map(tuple, img.tolist()))
    return SimplicialComplex(sorted(facets) or [()], n_vertices=len(ids), shift=A.complex.shift)


def quotient_homology_oracle(A: ActionOnComplex, coeffs="Z", max_faces: int = MAX_ORACLE_FACES) -> HomologySummary:
    """Homology of the explicit quotient of the second barycentric subdivision."""
    from .homology import reduced_homology

    if A.complex.n_faces() > max_faces:
        raise ResourceError(f"oracle limited to {max_faces} faces", cap="oracle_faces", estimate=A.complex.n_faces())
    B = subdivide_action(subdivide_action(A))
    return reduced_homology(explicit_quotient(B), coeffs)


# fixed points ---------------------------------------------------------------------


def fixed_subposet(P: PartitionPoset, G: PermGroup) -> np.ndarray:
    """Indices of the elements of ``P`` fixed by every generator of ``G``."""
    if not G.generators:
        return np.arange(len(P))
    table = P.action_table(G.generators)
    return np.flatnonzero((table == np.arange(len(P))[None, :]).all(axis=0))


def condition_A_check(A: ActionOnComplex) -> tuple[bool, tuple | None]:
    return A.condition_A()


@dataclass
class Wedge:
    """Wedge of based complexes; reduced homology is the direct sum."""

    summands: list[tuple[object, SimplicialComplex]]

    def reduced_homology(self, coeffs="Z") -> HomologySummary:
        from .homology import reduced_homology

        total = HomologySummary.zero()
        for _, X in self.summands:
            total = total + reduced_homology(X, coeffs)
        return total

    def __len__(self) -> int:
        return len(self.summands)


def induced_space_fixed_points(G: PermGroup, H: PermGroup, X: ActionOnComplex, K: PermGroup) -> Wedge:
    """Fixed points of ``G_+ smash_H X`` under ``K``: a wedge of ``X^(g^-1 K g)``.

    One summand per representative ``g`` of ``N_G(K; H)/H``; empty (a point)
    when ``K`` is not subconjugate to ``H``.
    """
    if not H.is_subgroup_of(G) or not K.is_subgroup_of(G):
        raise UsageError("H and K must be subgroups of G")
    out = []
    for g in subconjugators(G, K, H):
        conj = [conjugate(g, k) for k in K.generators]
        out.append((g, X.fixed_subcomplex(conj)))
    return Wedge(out)
