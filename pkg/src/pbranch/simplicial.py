"""Finite abstract simplicial complexes and the constructions used on partition posets.

Faces are sorted tuples of vertex indices.  Every nonvoid complex contains the
empty face, which plays the role of the augmentation in reduced homology, so
the empty complex is ``{()}`` and models ``S^-1``.  A complex also carries an
integer ``shift``: its reduced homology in degree ``k`` is that of the
underlying faces in degree ``k - shift``.  The virtual ``S^-2`` is the empty
complex with shift ``-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ResourceError, UsageError
from .partitions import PartitionPoset, SetPartition, enumerate_partitions, is_binary_chain

MAX_FACES = 2 * 10**7

Face = tuple[int, ...]


def _face_array(faces: Iterable[Sequence[int]], k: int) -> np.ndarray:
    arr = np.array(sorted(set(tuple(sorted(f)) for f in faces)), dtype=np.int64)
    return arr.reshape(-1, k + 1)


def _unique_rows(arr: np.ndarray) -> np.ndarray:
    if arr.shape[0] == 0:
        return arr
    return np.unique(arr, axis=0)


class SimplicialComplex:
    """Abstract simplicial complex on vertices ``0..n_vertices-1``.

    Build it from ``facets`` (maximal faces, or any generating faces) or from
    a full ``faces`` dictionary ``dim -> (m, dim+1) int array`` with sorted,
    lexicographically ordered rows.
    """

    def __init__(
        self,
        facets: Iterable[Sequence[int]] | None = None,
        n_vertices: int | None = None,
        labels: Sequence | None = None,
        shift: int = 0,
        *,
        faces: Mapping[int, np.ndarray] | None = None,
    ):
        if faces is None:
            fl = [tuple(sorted(int(v) for v in f)) for f in (facets if facets is not None else [()])]
            if not fl:
                fl = [()]
            self._generators: list[Face] | None = fl
            self._faces: dict[int, np.ndarray] | None = None
            top = max((max(f) for f in fl if f), default=-1)
        else:
            self._generators = None
            self._faces = {k: np.asarray(v, dtype=np.int64).reshape(-1, k + 1) for k, v in faces.items() if k >= 0 and len(v)}
            self._faces[-1] = np.zeros((1, 0), dtype=np.int64)
            top = max((int(v.max()) for k, v in self._faces.items() if k >= 0 and len(v)), default=-1)
        if n_vertices is None:
            n_vertices = len(labels) if labels is not None else top + 1
        if top >= n_vertices:
            raise UsageError(f"vertex {top} out of range for {n_vertices} vertices")
        self.n_vertices = int(n_vertices)
        self.labels = tuple(labels) if labels is not None else tuple(range(self.n_vertices))
        if len(self.labels) != self.n_vertices:
            raise UsageError("label count does not match vertex count")
        self.shift = int(shift)
        self._facets: list[Face] | None = None

    # constructors ---------------------------------------------------------

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        """``{()}``, the model of ``S^-1``."""
        return cls([()], n_vertices=0)

    @classmethod
    def virtual(cls) -> "SimplicialComplex":
        """The formal ``S^-2``: empty faces, shift -1."""
        return cls([()], n_vertices=0, shift=-1)

    @classmethod
    def simplex(cls, m: int, labels: Sequence | None = None) -> "SimplicialComplex":
        return cls([tuple(range(m + 1))], n_vertices=m + 1, labels=labels)

    @classmethod
    def boundary_simplex(cls, m: int, labels: Sequence | None = None) -> "SimplicialComplex":
        """``dDelta^m`` on ``m+1`` vertices, a model of ``S^(m-1)``."""
        if m < 0:
            raise UsageError("boundary of a simplex needs m >= 0")
        facets = [tuple(v for v in range(m + 1) if v != i) for i in range(m + 1)]
        return cls(facets, n_vertices=m + 1, labels=labels)

    @classmethod
    def points(cls, k: int) -> "SimplicialComplex":
        return cls([(i,) for i in range(k)] or [()], n_vertices=k)

    # basic data -----------------------------------------------------------

    @property
    def faces(self) -> dict[int, np.ndarray]:
        """All faces by dimension, including the empty face in dimension -1."""
        if self._faces is None:
            self._faces = self._expand(self._generators)
        return self._faces

    all_faces = faces

    def _expand(self, gens: list[Face], cap: int = MAX_FACES) -> dict[int, np.ndarray]:
        estimate = sum(2 ** len(f) for f in gens)
        if estimate > 4 * cap:
            raise ResourceError(f"face expansion of ~{estimate} subsets exceeds cap", cap="max_faces", estimate=estimate)
        by_dim: dict[int, list[Face]] = {}
        for f in gens:
            by_dim.setdefault(len(f) - 1, []).append(f)
        out: dict[int, list[np.ndarray]] = {-1: [np.zeros((1, 0), dtype=np.int64)]}
        for d, fs in by_dim.items():
            if d < 0:
                continue
            F = _unique_rows(np.array(fs, dtype=np.int64).reshape(-1, d + 1))
            for k in range(d + 1):
                for cols in itertools.combinations(range(d + 1), k + 1):
                    out.setdefault(k, []).append(F[:, cols])
        faces = {k: _unique_rows(np.concatenate(v, axis=0)) for k, v in out.items()}
        faces[-1] = np.zeros((1, 0), dtype=np.int64)
        total = sum(len(v) for v in faces.values())
        if total > cap:
            raise ResourceError(f"{total} faces exceed cap {cap}", cap="max_faces", estimate=total)
        return faces

    @property
    def facets(self) -> list[Face]:
        if self._facets is None:
            self._facets = self._maximal_faces()
        return self._facets

    def _maximal_faces(self) -> list[Face]:
        faces = self.faces
        top = self.dim
        out: list[Face] = []
        for k in range(top, -2, -1):
            F = faces.get(k)
            if F is None or not len(F):
                continue
            if k == top:
                out.extend(map(tuple, F.tolist()))
                continue
            upper = faces.get(k + 1)
            covered = np.zeros(len(F), dtype=bool)
            if upper is not None and len(upper):
                for i in range(k + 2):
                    sub = np.delete(upper, i, axis=1)
                    idx = face_index(F, sub)
                    covered[idx] = True
            out.extend(map(tuple, F[~covered].tolist()))
        return sorted(out, key=lambda f: (len(f), f))

    @property
    def dim(self) -> int:
        """Dimension of the underlying faces (-1 for the empty complex)."""
        if self._faces is not None:
            return max(k for k, v in self._faces.items() if len(v))
        return max(len(f) for f in self._generators) - 1

    @property
    def formal_dimension(self) -> int:
        return self.dim + self.shift

    def is_empty(self) -> bool:
        return self.dim < 0

    def is_virtual(self) -> bool:
        return self.is_empty() and self.shift < 0

    def f_vector(self) -> dict[int, int]:
        return {k: len(v) for k, v in sorted(self.faces.items())}

    def n_faces(self) -> int:
        """Number of nonempty faces."""
        return sum(len(v) for k, v in self.faces.items() if k >= 0)

    def reduced_euler_characteristic(self) -> int:
        """Alternating sum of reduced Betti numbers, shift included."""
        chi = sum((-1) ** k * len(v) for k, v in self.faces.items())
        return chi * (-1) ** self.shift

    def face_set(self) -> set[Face]:
        return {tuple(r) for k, v in self.faces.items() for r in v.tolist()}

    def __contains__(self, face: Sequence[int]) -> bool:
        f = np.array(sorted(face), dtype=np.int64)[None, :]
        F = self.faces.get(len(face) - 1)
        return F is not None and len(F) > 0 and face_index(F, f, missing_ok=True)[0] >= 0

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        for k, F in self.faces.items():
            if k < 0 or not len(F):
                continue
            G = other.faces.get(k)
            if G is None or (face_index(G, F, missing_ok=True) < 0).any():
                return False
        return True

    def __repr__(self) -> str:
        return f"SimplicialComplex(n_vertices={self.n_vertices}, dim={self.dim}, shift={self.shift})"

    # serialization --------------------------------------------------------

    def serialize(self) -> str:
        lines = [f"{self.n_vertices} {self.dim} {self.shift}"]
        lines += [" ".join(map(str, f)) for f in self.facets]
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "SimplicialComplex":
        rows = text.splitlines()
        nv, _dim, shift = (int(t) for t in rows[0].split())
        facets = [tuple(int(t) for t in r.split()) for r in rows[1:]]
        return cls(facets or [()], n_vertices=nv, shift=shift)

    # derived complexes ----------------------------------------------------

    def with_shift(self, shift: int) -> "SimplicialComplex":
        X = SimplicialComplex(faces=self.faces, n_vertices=self.n_vertices, labels=self.labels, shift=shift)
        X._facets = self._facets
        return X

    def subcomplex(self, keep) -> "SimplicialComplex":
        """Faces for which ``keep(face_array) -> bool mask`` holds; must be closed downward."""
        faces = {k: v[keep(v)] if k >= 0 else v for k, v in self.faces.items()}
        return SimplicialComplex(faces=faces, n_vertices=self.n_vertices, labels=self.labels, shift=self.shift)

    def induced(self, vertices: Sequence[int]) -> "SimplicialComplex":
        """Full subcomplex on ``vertices``, reindexed in the given (sorted) order."""
        vertices = sorted(vertices)
        newidx = np.full(self.n_vertices, -1, dtype=np.int64)
        newidx[np.asarray(vertices, dtype=np.int64)] = np.arange(len(vertices))
        faces = {}
        for k, v in self.faces.items():
            if k < 0:
                faces[k] = v
                continue
            mapped = newidx[v]
            faces[k] = mapped[(mapped >= 0).all(axis=1)]
        return SimplicialComplex(faces=faces, n_vertices=len(vertices), labels=[self.labels[v] for v in vertices], shift=self.shift)


def face_index(F: np.ndarray, rows: np.ndarray, missing_ok: bool = False) -> np.ndarray:
    """Positions of ``rows`` in the lexicographically sorted face array ``F``."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.ndim != 2:
        rows = rows.reshape(-1, F.shape[1])
    if F.shape[1] == 0:
        return np.zeros(len(rows), dtype=np.int64)
    base = int(max(F.max(initial=0), rows.max(initial=0))) + 1
    if F.shape[1] * np.log2(max(base, 2)) < 62:
        w = base ** np.arange(F.shape[1] - 1, -1, -1, dtype=np.int64)
        kf, kr = F @ w, rows @ w
        pos = np.searchsorted(kf, kr)
        pos_c = np.minimum(pos, len(kf) - 1)
        ok = (len(kf) > 0) & (kf[pos_c] == kr) if len(kf) else np.zeros(len(kr), dtype=bool)
        res = np.where(ok, pos_c, -1)
    else:
        lookup = {tuple(r): i for i, r in enumerate(F.tolist())}
        res = np.array([lookup.get(tuple(r), -1) for r in rows.tolist()], dtype=np.int64)
    if not missing_ok and (res < 0).any():
        raise UsageError("face lookup failed: not a subcomplex")
    return res


# order complexes ------------------------------------------------------------


def _linear_extension(less: np.ndarray) -> np.ndarray:
    below = less.sum(axis=0)
    return np.argsort(below, kind="stable")


def chains_from_up_sets(up: Sequence[np.ndarray], n: int, cap: int = MAX_FACES) -> dict[int, np.ndarray]:
    """All chains of a poset whose vertex order is a linear extension.

    ``up[i]`` lists the indices greater than ``i`` (all of them larger than ``i``).
    """
    counts = np.array([len(u) for u in up], dtype=np.int64)
    indptr = np.concatenate([[0], np.cumsum(counts)])
    indices = np.concatenate([np.asarray(u, dtype=np.int64) for u in up]) if n else np.zeros(0, dtype=np.int64)
    faces = {-1: np.zeros((1, 0), dtype=np.int64)}
    cur = np.arange(n, dtype=np.int64)[:, None]
    total = n
    k = 0
    while len(cur):
        faces[k] = cur
        last = cur[:, -1]
        c = counts[last]
        m = int(c.sum())
        if not m:
            break
        total += m
        if total > cap:
            raise ResourceError(f"order complex exceeds {cap} faces", cap="max_faces", estimate=total)
        rep = np.repeat(np.arange(len(cur)), c)
        starts = np.repeat(indptr[last], c)
        offs = np.arange(m) - np.repeat(np.cumsum(c) - c, c)
        nxt = indices[starts + offs]
        cur = np.concatenate([cur[rep], nxt[:, None]], axis=1)
        k += 1
    return faces


def order_complex(P, subset: Sequence[int] | None = None, labels: Sequence | None = None, cap: int = MAX_FACES) -> SimplicialComplex:
    """Order complex of a poset: vertices are elements, faces are strict chains.

    ``P`` is a :class:`PartitionPoset` or a boolean matrix ``less[i, j]``.
    ``subset`` restricts to an induced subposet (vertices renumbered in
    increasing order).
    """
    if isinstance(P, PartitionPoset):
        n_all = len(P)
        if subset is None:
            up = P.up_sets
            lab = [str(x) for x in P.elements] if labels is None else labels
            return SimplicialComplex(faces=chains_from_up_sets(up, n_all, cap), n_vertices=n_all, labels=lab)
        sub = np.asarray(sorted(subset), dtype=np.int64)
        less = P.less_matrix()[np.ix_(sub, sub)] if len(sub) else np.zeros((0, 0), dtype=bool)
        lab = [str(P.elements[i]) for i in sub] if labels is None else labels
        return _order_complex_from_matrix(less, lab, cap, already_sorted=True)
    less = np.asarray(P, dtype=bool)
    if subset is not None:
        sub = np.asarray(sorted(subset), dtype=np.int64)
        less = less[np.ix_(sub, sub)]
        labels = [labels[i] for i in sub] if labels is not None else list(sub.tolist())
    return _order_complex_from_matrix(less, labels, cap)


def partition_complex(n: int) -> SimplicialComplex:
    """``|Pi_n|``: the virtual sphere for ``n = 1``, the empty complex for ``n = 2``."""
    if n < 1:
        raise UsageError("partition_complex needs n >= 1")
    if n == 1:
        return SimplicialComplex.virtual()
    return order_complex(enumerate_partitions(n))


def _order_complex_from_matrix(less: np.ndarray, labels, cap: int, already_sorted: bool = False) -> SimplicialComplex:
    n = len(less)
    if labels is None:
        labels = list(range(n))
    if n and (less & less.T).any():
        raise UsageError("relation is not antisymmetric")
    order = np.arange(n) if already_sorted else _linear_extension(less)
    less = less[np.ix_(order, order)]
    if n and np.tril(less).any():
        raise UsageError("relation is not a strict partial order")
    up = [np.flatnonzero(row) for row in less]
    faces = chains_from_up_sets(up, n, cap)
    return SimplicialComplex(faces=faces, n_vertices=n, labels=[labels[i] for i in order])


def chain_poset(m: int) -> np.ndarray:
    """Strict order matrix of the chain ``0 < 1 < ... < m-1``."""
    return np.triu(np.ones((m, m), dtype=bool), 1)


def face_poset(X: SimplicialComplex) -> tuple[list[Face], np.ndarray]:
    """Nonempty faces of ``X`` ordered by dimension, and their strict inclusion matrix."""
    faces = [tuple(r) for k in sorted(X.faces) if k >= 0 for r in X.faces[k].tolist()]
    sets = [frozenset(f) for f in faces]
    less = np.array([[a < b for b in sets] for a in sets], dtype=bool).reshape(len(faces), len(faces))
    return faces, less


# joins, suspensions, subdivision -------------------------------------------


def join(A: SimplicialComplex, B: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join; vertex labels become ``(0, a)`` and ``(1, b)``; shifts add."""
    off = A.n_vertices
    fa = A.facets
    fb = [tuple(v + off for v in f) for f in B.facets]
    facets = [a + b for a in fa for b in fb]
    labels = [(0, x) for x in A.labels] + [(1, y) for y in B.labels]
    return SimplicialComplex(facets, n_vertices=off + B.n_vertices, labels=labels, shift=A.shift + B.shift)


def join_many(parts: Sequence[SimplicialComplex]) -> SimplicialComplex:
    """Iterated join with flat labels ``(i, label)`` for the i-th factor."""
    facets: list[Face] = [()]
    labels: list = []
    off = 0
    shift = 0
    for i, X in enumerate(parts):
        fx = [tuple(v + off for v in f) for f in X.facets]
        facets = [a + b for a in facets for b in fx]
        labels += [(i, x) for x in X.labels]
        off += X.n_vertices
        shift += X.shift
    return SimplicialComplex(facets, n_vertices=off, labels=labels, shift=shift)


def unreduced_suspension(X: SimplicialComplex) -> SimplicialComplex:
    """``S^0 * X``; on the virtual ``S^-2`` this gives the empty complex."""
    if X.is_empty() and X.shift < 0:
        return SimplicialComplex.empty().with_shift(X.shift + 1)
    return join(SimplicialComplex.points(2), X)


def barycentric(X: SimplicialComplex, cap: int = MAX_FACES) -> SimplicialComplex:
    """Barycentric subdivision: vertices are nonempty faces, faces are flags."""
    faces = [tuple(r) for k in sorted(X.faces) if k >= 0 for r in X.faces[k].tolist()]
    index = {f: i for i, f in enumerate(faces)}
    estimate = sum(_factorial(len(f)) for f in X.facets)
    if estimate > cap:
        raise ResourceError(f"subdivision has ~{estimate} top faces", cap="max_faces", estimate=estimate)
    flags = set()
    for f in X.facets:
        for perm in itertools.permutations(f):
            flags.add(tuple(sorted(index[tuple(sorted(perm[: i + 1]))] for i in range(len(perm)))))
    return SimplicialComplex(sorted(flags) or [()], n_vertices=len(faces), labels=faces, shift=X.shift)


def _factorial(m: int) -> int:
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


# stars, links, binary chains -------------------------------------------------


def _chain_indices(P: PartitionPoset, chain: Sequence) -> list[int]:
    idx = [c if isinstance(c, (int, np.integer)) else P.index(c) for c in chain]
    idx = sorted(int(i) for i in idx)
    less = P.less_matrix()
    if not idx or any(not less[a, b] for a, b in zip(idx, idx[1:])):
        raise UsageError("not a nonempty chain of the poset")
    return idx


def star_and_link(P: PartitionPoset, chain: Sequence) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the star (comparable with every chain member) and of the link."""
    idx = _chain_indices(P, chain)
    less = P.less_matrix()
    comp = less[idx] | less[:, idx].T
    comp[np.arange(len(idx)), idx] = True
    star = np.flatnonzero(comp.all(axis=0))
    link = np.setdiff1d(star, idx)
    return star, link


def star_boundary(n: int, chain: Sequence[SetPartition]) -> tuple[SimplicialComplex, SimplicialComplex]:
    """Star of a binary chain in ``Pi_n`` and the subcomplex of chains not containing it."""
    chain = sorted(chain, key=lambda lam: lam.rank)
    if not is_binary_chain(chain):
        raise UsageError("chain is not binary")
    P = enumerate_partitions(n)
    idx = _chain_indices(P, chain)
    star_idx, _ = star_and_link(P, idx)
    star = order_complex(P, subset=star_idx)
    pos = np.searchsorted(star_idx, idx)

    boundary = star.subcomplex(lambda F: ~_contains_all(F, pos))
    return star, boundary


def _contains_all(F: np.ndarray, verts: np.ndarray) -> np.ndarray:
    return np.all([(F == v).any(axis=1) for v in verts], axis=0)


# equivariant complexes -----------------------------------------------------


@dataclass
class EquivariantComplex:
    """A complex with a group acting through vertex permutations.

    ``action`` maps each generator of ``group`` (a tuple of images) to a
    0-based vertex permutation.
    """

    complex: SimplicialComplex
    group: object
    action: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for g in self.group.generators:
            if g not in self.action:
                raise UsageError(f"no vertex action given for generator {g}")
        self.check()

    def check(self) -> None:
        for g, vp in self.action.items():
            vp = np.asarray(vp, dtype=np.int64)
            for k, F in self.complex.faces.items():
                if k <= 0 or not len(F):
                    continue
                img = np.sort(vp[F], axis=1)
                if (face_index(F, img, missing_ok=True) < 0).any():
                    raise UsageError("generator does not map faces to faces")

    def vertex_table(self) -> tuple[list[tuple[int, ...]], np.ndarray]:
        """All group elements and their vertex permutations, by closure over generators."""
        n = self.group.n
        e = tuple(range(1, n + 1))
        nv = self.complex.n_vertices
        table = {e: np.arange(nv, dtype=np.int64)}
        frontier = [e]
        gens = [(g, np.asarray(self.action[g], dtype=np.int64)) for g in self.group.generators]
        while frontier:
            nxt = []
            for x in frontier:
                vx = table[x]
                for g, vg in gens:
                    y = tuple(g[i - 1] for i in x)
                    if y not in table:
                        table[y] = vg[vx]
                        nxt.append(y)
            frontier = nxt
        elems = sorted(table)
        return elems, np.stack([table[x] for x in elems]) if elems else np.zeros((0, nv), dtype=np.int64)


def join_equivariant(parts: Sequence[EquivariantComplex]) -> EquivariantComplex:
    """Join of complexes with actions of one common group."""
    if not parts:
        raise UsageError("join_equivariant needs at least one factor")
    G = parts[0].group
    X = join_many([p.complex for p in parts])
    action = {}
    for g in G.generators:
        pieces, off = [], 0
        for p in parts:
            pieces.append(np.asarray(p.action[g], dtype=np.int64) + off)
            off += p.complex.n_vertices
        action[g] = np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.int64)
    return EquivariantComplex(X, G, action)


def barycentric_equivariant(E: EquivariantComplex) -> EquivariantComplex:
    """Subdivision with the action transported to faces."""
    Y = barycentric(E.complex)
    index = {f: i for i, f in enumerate(Y.labels)}
    action = {}
    for g, vp in E.action.items():
        vp = list(np.asarray(vp).tolist())
        action[g] = np.array([index[tuple(sorted(vp[v] for v in f))] for f in Y.labels], dtype=np.int64)
    return EquivariantComplex(Y, E.group, action)


def sphere_model(d: int, l: int, subdivide: bool = False) -> EquivariantComplex:
    """``S^(ld-1)`` with the symmetric group on ``d`` letters acting.

    Join of ``dDelta^l`` (trivial action) with ``l`` copies of
    ``dDelta^(d-1)`` on vertices ``1..d`` (permutation action).  With
    ``subdivide`` the permuted factors are barycentrically subdivided, which
    makes the action regular for ``d >= 3``.
    """
    from .permgroups import symmetric

    if d < 1 or l < 1:
        raise UsageError("sphere_model needs d, l >= 1")
    G = symmetric(d)
    trivial = EquivariantComplex(SimplicialComplex.boundary_simplex(l), G, {g: np.arange(l + 1) for g in G.generators})
    parts = [trivial]
    for _ in range(l):
        X = SimplicialComplex.boundary_simplex(d - 1, labels=list(range(1, d + 1)))
        E = EquivariantComplex(X, G, {g: np.asarray(g, dtype=np.int64) - 1 for g in G.generators})
        parts.append(barycentric_equivariant(E) if subdivide and d >= 3 else E)
    return join_equivariant(parts)
