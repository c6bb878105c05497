"""Exact reduced homology over Z, Q and Z/p.

Boundary matrices are reduced by sparse elimination with unit pivots chosen
Markowitz style (shortest column, then shortest row).  Whatever cannot be
cleared with unit pivots over Z is handed to a dense Smith normal form on
Python integers.  The same pivot loop computes ranks mod p and, fraction
free, ranks over Q.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ResourceError, UsageError
from .simplicial import SimplicialComplex, face_index

MAX_FACES_Z = 10**6
MAX_FACES_P = 10**7
MAX_DENSE_CORE = 500

SparseRows = dict[int, dict[int, int]]


# summaries ------------------------------------------------------------------


def prime_power_factors(m: int) -> list[int]:
    """Prime-power decomposition of ``m > 1``, sorted."""
    out = []
    q = 2
    while q * q <= m:
        if m % q == 0:
            pk = 1
            while m % q == 0:
                m //= q
                pk *= q
            out.append(pk)
        q += 1
    if m > 1:
        out.append(m)
    return sorted(out)


@dataclass
class HomologySummary:
    """Reduced homology by degree: Betti numbers and torsion as prime powers.

    Over a field only ``betti`` is populated (it holds dimensions).
    """

    betti: dict[int, int] = field(default_factory=dict)
    torsion: dict[int, list[int]] = field(default_factory=dict)
    coeffs: str = "Z"
    evidence: str = "integral"

    def __post_init__(self) -> None:
        self.betti = {int(k): int(v) for k, v in self.betti.items() if v}
        tors = {}
        for k, ts in self.torsion.items():
            flat = sorted(q for t in ts if t > 1 for q in prime_power_factors(int(t)))
            if flat:
                tors[int(k)] = flat
        self.torsion = tors

    @classmethod
    def zero(cls, coeffs: str = "Z", evidence: str = "integral") -> "HomologySummary":
        return cls({}, {}, coeffs, evidence)

    @classmethod
    def sphere(cls, k: int, copies: int = 1) -> "HomologySummary":
        return cls({k: copies})

    def degrees(self) -> list[int]:
        return sorted(set(self.betti) | set(self.torsion))

    def rank(self, k: int) -> int:
        return self.betti.get(k, 0)

    def torsion_at(self, k: int) -> list[int]:
        return list(self.torsion.get(k, []))

    def is_zero(self) -> bool:
        return not self.betti and not self.torsion

    def total_rank(self) -> int:
        return sum(self.betti.values())

    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in self.betti.items())

    def shifted(self, s: int) -> "HomologySummary":
        return HomologySummary({k + s: v for k, v in self.betti.items()}, {k + s: v for k, v in self.torsion.items()}, self.coeffs, self.evidence)

    def __add__(self, other: "HomologySummary") -> "HomologySummary":
        betti = dict(self.betti)
        for k, v in other.betti.items():
            betti[k] = betti.get(k, 0) + v
        tors = {k: list(v) for k, v in self.torsion.items()}
        for k, v in other.torsion.items():
            tors.setdefault(k, []).extend(v)
        return HomologySummary(betti, tors, self.coeffs, _weaker(self.evidence, other.evidence))

    def times(self, m: int) -> "HomologySummary":
        return HomologySummary({k: v * m for k, v in self.betti.items()}, {k: v * m for k, v in self.torsion.items()}, self.coeffs, self.evidence)

    def key(self) -> tuple:
        return (tuple(sorted(self.betti.items())), tuple(sorted((k, tuple(v)) for k, v in self.torsion.items())))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HomologySummary) and self.key() == other.key()

    def mod_p(self, p: int) -> "HomologySummary":
        """Dimensions over Z/p predicted by universal coefficients."""
        dims = dict(self.betti)
        for k, ts in self.torsion.items():
            c = sum(1 for t in ts if t % p == 0)
            dims[k] = dims.get(k, 0) + c
            dims[k + 1] = dims.get(k + 1, 0) + c
        return HomologySummary(dims, {}, f"Z/{p}", self.evidence)

    def rational(self) -> "HomologySummary":
        return HomologySummary(dict(self.betti), {}, "Q", self.evidence)

    def to_json(self) -> dict:
        return {str(k): {"betti": self.betti.get(k, 0), "torsion": self.torsion.get(k, [])} for k in self.degrees()}

    @classmethod
    def from_json(cls, data: Mapping, coeffs: str = "Z", evidence: str = "integral") -> "HomologySummary":
        return cls({int(k): v["betti"] for k, v in data.items()}, {int(k): v.get("torsion", []) for k, v in data.items()}, coeffs, evidence)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in self.degrees():
            terms = []
            b = self.betti.get(k, 0)
            if b:
                base = "Z" if self.coeffs == "Z" else self.coeffs
                terms.append(base if b == 1 else f"{base}^{b}")
            counts: dict[int, int] = {}
            for t in self.torsion.get(k, []):
                counts[t] = counts.get(t, 0) + 1
            terms += [f"Z/{t}" if c == 1 else f"(Z/{t})^{c}" for t, c in sorted(counts.items())]
            parts.append(f"H{k}=" + "+".join(terms))
        return ", ".join(parts)


_EVIDENCE_ORDER = ["integral", "rational", "modular+rational", "modular"]


def join_homology(A: HomologySummary, B: HomologySummary) -> HomologySummary:
    """Reduced homology of a join from the factors, by the Kunneth formula.

    ``H_(m+1)(A*B)`` is the sum of ``H_i(A) (x) H_j(B)`` over ``i+j = m`` and
    ``Tor(H_i(A), H_j(B))`` over ``i+j = m-1``.
    """
    betti: dict[int, int] = {}
    tors: dict[int, list[int]] = {}
    for i in set(A.betti) | set(A.torsion):
        fa, ta = A.betti.get(i, 0), A.torsion.get(i, [])
        for j in set(B.betti) | set(B.torsion):
            fb, tb = B.betti.get(j, 0), B.torsion.get(j, [])
            m = i + j + 1
            if fa * fb:
                betti[m] = betti.get(m, 0) + fa * fb
            t = [x for x in tb for _ in range(fa)] + [x for x in ta for _ in range(fb)]
            t += [math.gcd(x, y) for x in ta for y in tb]
            tors.setdefault(m, []).extend(t)
            tors.setdefault(m + 1, []).extend(math.gcd(x, y) for x in ta for y in tb)
    return HomologySummary(betti, tors, A.coeffs, _weaker(A.evidence, B.evidence))


def _weaker(a: str, b: str) -> str:
    ia = _EVIDENCE_ORDER.index(a) if a in _EVIDENCE_ORDER else len(_EVIDENCE_ORDER)
    ib = _EVIDENCE_ORDER.index(b) if b in _EVIDENCE_ORDER else len(_EVIDENCE_ORDER)
    return a if ia >= ib else b


# sparse elimination ---------------------------------------------------------


@dataclass
class Elimination:
    """Outcome of unit-pivot elimination.

    ``rank`` counts pivots removed; ``core`` holds the rows left with entries
    (over Z these still need a dense Smith form); ``empty_rows`` are rows that
    ended with no entries.  ``record`` lists ``(pivot_row, {row: factor})``
    meaning ``row -= factor * pivot_row`` followed by dropping ``pivot_row``.
    """

    rank: int
    core: SparseRows
    empty_rows: list[int]
    record: list[tuple[int, dict[int, int]]] | None = None


def eliminate(rows: Mapping[int, Mapping[int, int]], mode: str = "Z", p: int | None = None, record: bool = False) -> Elimination:
    """Sparse elimination of a matrix given as ``{row: {col: value}}``.

    ``mode`` is ``"Z"`` (pivots must be units), ``"p"`` (mod ``p``) or ``"Q"``
    (fraction free, with row contents divided out).
    """
    if mode not in ("Z", "p", "Q"):
        raise UsageError(f"unknown elimination mode {mode!r}")
    if mode == "p" and (p is None or p < 2):
        raise UsageError("mode 'p' needs a prime p")
    R: SparseRows = {}
    for r, row in rows.items():
        if mode == "p":
            d = {c: v % p for c, v in row.items() if v % p}
        else:
            d = {c: v for c, v in row.items() if v}
        R[r] = d
    all_rows = list(R)
    C: dict[int, set[int]] = {}
    for r, row in R.items():
        for c in row:
            C.setdefault(c, set()).add(r)
    rec: list | None = [] if record else None
    rank = 0
    heap = [(len(s), c) for c, s in C.items()]
    heapq.heapify(heap)
    deferred: set[int] = set()

    def pick(c: int) -> int | None:
        best = None
        for r in C[c]:
            v = R[r][c]
            if mode == "Z" and v not in (1, -1):
                continue
            if mode == "Q":
                key = (abs(v) != 1, len(R[r]), abs(v), r)
            else:
                key = (False, len(R[r]), 0, r)
            if best is None or key < best[0]:
                best = (key, r)
        return None if best is None else best[1]

    def pivot(r: int, c: int) -> None:
        prow = R.pop(r)
        a = prow[c]
        for cc in prow:
            C[cc].discard(r)
        others = list(C[c])
        factors = {}
        for r2 in others:
            row2 = R[r2]
            b = row2[c]
            if mode == "Z":
                f = b * a
                factors[r2] = f
                _axpy(row2, prow, -f, C, r2)
            elif mode == "p":
                f = b * pow(a, -1, p) % p
                factors[r2] = f
                _axpy_mod(row2, prow, f, C, r2, p)
            else:
                g = math.gcd(a, b)
                sa, sb = a // g, b // g
                for cc in list(row2):
                    row2[cc] *= sa
                _axpy(row2, prow, -sb, C, r2)
                if row2:
                    cont = 0
                    for v in row2.values():
                        cont = math.gcd(cont, v)
                        if cont == 1:
                            break
                    if cont > 1:
                        for cc in row2:
                            row2[cc] //= cont
        del C[c]
        if rec is not None:
            rec.append((r, factors))

    while True:
        progressed = False
        while heap:
            cnt, c = heapq.heappop(heap)
            s = C.get(c)
            if not s:
                continue
            if len(s) != cnt:
                heapq.heappush(heap, (len(s), c))
                continue
            r = pick(c)
            if r is None:
                deferred.add(c)
                continue
            pivot(r, c)
            rank += 1
            progressed = True
        if not deferred or not progressed:
            break
        heap = [(len(C[c]), c) for c in deferred if C.get(c)]
        heapq.heapify(heap)
        deferred = set()
    core = {r: row for r, row in R.items() if row}
    empty = [r for r in all_rows if r in R and not R[r]]
    return Elimination(rank, core, empty, rec)


def _axpy(row: dict[int, int], prow: dict[int, int], f: int, C: dict[int, set[int]], r: int) -> None:
    for cc, v in prow.items():
        nv = row.get(cc, 0) + f * v
        if nv:
            if cc not in row:
                C.setdefault(cc, set()).add(r)
            row[cc] = nv
        elif cc in row:
            del row[cc]
            C[cc].discard(r)


def _axpy_mod(row: dict[int, int], prow: dict[int, int], f: int, C: dict[int, set[int]], r: int, p: int) -> None:
    for cc, v in prow.items():
        nv = (row.get(cc, 0) - f * v) % p
        if nv:
            if cc not in row:
                C.setdefault(cc, set()).add(r)
            row[cc] = nv
        elif cc in row:
            del row[cc]
            C[cc].discard(r)


# Smith normal form ------------------------------------------------------------


def _as_rows(M) -> tuple[SparseRows, int, int]:
    if isinstance(M, Mapping):
        rows = {int(r): {int(c): int(v) for c, v in row.items() if v} for r, row in M.items()}
        nr = max(rows, default=-1) + 1
        nc = max((c for row in rows.values() for c in row), default=-1) + 1
        return rows, nr, nc
    A = np.asarray(M, dtype=object) if not isinstance(M, np.ndarray) else M
    if A.ndim != 2:
        A = np.asarray(M, dtype=object).reshape(len(M), -1) if len(M) else np.zeros((0, 0), dtype=object)
    rows = {}
    for i in range(A.shape[0]):
        rows[i] = {j: int(A[i, j]) for j in range(A.shape[1]) if A[i, j]}
    return rows, A.shape[0], A.shape[1]


def dense_snf(A: list[list[int]], transforms: bool = False):
    """Smith normal form of a dense integer matrix (lists of Python ints).

    Returns the nonzero invariant factors, and with ``transforms`` also
    unimodular ``U, V`` with ``U A V`` diagonal.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    A = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row dst += f * row src
        if f:
            A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
            if U is not None:
                U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, f):  # col dst += f * col src
        if f:
            for row in A:
                row[dst] += f * row[src]
            if V is not None:
                for row in V:
                    row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        # choose smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: fold in any entry not divisible by the pivot
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            # move the smallest entry of row/col t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]] + [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    diag = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    if transforms:
        return diag, U, V
    return diag


def smith_normal_form(M, transforms: bool = False):
    """Nonzero invariant factors ``d1 | d2 | ...`` of an integer matrix.

    ``M`` may be a dense array, nested lists or ``{row: {col: value}}``.  With
    ``transforms`` the dense algorithm runs on the whole matrix and ``(diag,
    U, V)`` is returned with ``U M V`` diagonal.
    """
    rows, nr, nc = _as_rows(M)
    if transforms:
        A = [[rows.get(i, {}).get(j, 0) for j in range(nc)] for i in range(nr)]
        return dense_snf(A, transforms=True)
    el = eliminate(rows, "Z")
    return [1] * el.rank + _core_snf(el.core)


def _core_snf(core: SparseRows) -> list[int]:
    if not core:
        return []
    cols = sorted({c for row in core.values() for c in row})
    if len(core) > MAX_DENSE_CORE and len(cols) > MAX_DENSE_CORE:
        raise ResourceError(f"dense Smith core {len(core)}x{len(cols)} exceeds {MAX_DENSE_CORE}", cap="dense_core", estimate=len(core) * len(cols))
    cidx = {c: j for j, c in enumerate(cols)}
    A = []
    for r in sorted(core):
        row = [0] * len(cols)
        for c, v in core[r].items():
            row[cidx[c]] = v
        A.append(row)
    if len(A) > len(cols):
        A = [list(col) for col in zip(*A)]
    return dense_snf(A)


# chain complexes ---------------------------------------------------------------


def boundary_rows(X: SimplicialComplex, k: int, keep: Mapping[int, np.ndarray] | None = None) -> SparseRows:
    """Coboundary ``delta_{k-1}`` as rows: row = k-face, col = (k-1)-face.

    ``keep`` optionally restricts each dimension to a boolean mask (for
    relative chains); columns outside the mask are dropped.
    """
    faces = X.faces
    F = faces.get(k)
    if F is None or not len(F):
        return {}
    if k == 0:
        rows_idx = np.arange(len(F))
        if keep is not None:
            rows_idx = rows_idx[keep[0]]
            if not keep[-1][0]:
                return {int(r): {} for r in rows_idx}
        return {int(r): {0: 1} for r in rows_idx}
    G = faces[k - 1]
    idx = np.empty((len(F), k + 1), dtype=np.int64)
    for i in range(k + 1):
        idx[:, i] = face_index(G, np.delete(F, i, axis=1))
    signs = [1 if i % 2 == 0 else -1 for i in range(k + 1)]
    rsel = np.flatnonzero(keep[k]) if keep is not None else np.arange(len(F))
    colmask = keep[k - 1] if keep is not None else None
    out: SparseRows = {}
    for r in rsel.tolist():
        row = {}
        for i, c in enumerate(idx[r].tolist()):
            if colmask is None or colmask[c]:
                row[c] = signs[i]
        out[r] = row
    return out


def _check_caps(X: SimplicialComplex, mode: str) -> None:
    total = sum(len(v) for v in X.faces.values())
    cap = MAX_FACES_Z if mode == "Z" else MAX_FACES_P
    if total > cap:
        raise ResourceError(f"{total} faces exceed the {mode} homology cap {cap}", cap="max_faces", estimate=total)


def _parse_coeffs(coeffs) -> tuple[str, int | None, str]:
    if coeffs in ("Z", None):
        return "Z", None, "Z"
    if coeffs == "Q":
        return "Q", None, "Q"
    if isinstance(coeffs, int):
        return "p", coeffs, f"Z/{coeffs}"
    if isinstance(coeffs, str) and coeffs.startswith("Z/"):
        p = int(coeffs[2:])
        return "p", p, f"Z/{p}"
    raise UsageError(f"unknown coefficients {coeffs!r}")


def _homology(X: SimplicialComplex, coeffs, keep: Mapping[int, np.ndarray] | None = None) -> HomologySummary:
    mode, p, label = _parse_coeffs(coeffs)
    _check_caps(X, mode)
    dims = sorted(X.faces)
    sizes = {k: int(keep[k].sum()) if keep is not None else len(X.faces[k]) for k in dims}
    ranks: dict[int, int] = {}
    factors: dict[int, list[int]] = {}
    for k in dims:
        if k < 0:
            continue
        rows = boundary_rows(X, k, keep)
        el = eliminate(rows, mode, p)
        if mode == "Z":
            core = _core_snf(el.core)
            ranks[k] = el.rank + len(core)
            factors[k] = [d for d in core if d > 1]
        elif mode == "p":
            if el.core:
                raise AssertionError("modular elimination left a core")
            ranks[k] = el.rank
        else:
            ranks[k] = el.rank
    betti = {}
    torsion = {}
    for k in dims:
        b = sizes[k] - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if b:
            betti[k + X.shift] = b
        if factors.get(k + 1):
            torsion[k + X.shift] = factors[k + 1]
    evidence = {"Z": "integral", "Q": "rational", "p": f"mod {p}"}[mode]
    out = HomologySummary(betti, torsion, label if mode != "Z" else "Z", evidence)
    chi = sum((-1) ** (k + X.shift) * sizes[k] for k in dims)
    if out.euler() != chi:
        raise AssertionError("Euler characteristic mismatch in homology computation")
    return out


def reduced_homology(X: SimplicialComplex, coeffs="Z") -> HomologySummary:
    """Reduced homology of ``X`` (shift applied) over ``Z``, ``Q`` or ``Z/p``."""
    return _homology(X, coeffs)


def relative_homology(X: SimplicialComplex, A: SimplicialComplex, coeffs="Z") -> HomologySummary:
    """Homology of ``C(X)/C(A)`` with ``A`` a subcomplex on the same vertex set."""
    if A.n_vertices != X.n_vertices or not A.is_subcomplex_of(X):
        raise UsageError("A is not a subcomplex of X")
    keep = {}
    for k, F in X.faces.items():
        G = A.faces.get(k)
        mask = np.ones(len(F), dtype=bool)
        if G is not None and len(G):
            mask[face_index(F, G)] = False
        keep[k] = mask
    return _homology(X.with_shift(0), coeffs, keep).shifted(X.shift)


def homology_auto(X: SimplicialComplex, primes: Sequence[int] = (2, 3, 5, 7)) -> HomologySummary:
    """Integral homology when within caps, else modular and rational ranks.

    In the fallback the result is labelled ``modular+rational``: Betti numbers
    are rational, and torsion is reported only as absent when every listed
    prime gives the rational answer.
    """
    try:
        return reduced_homology(X, "Z")
    except ResourceError:
        pass
    q = reduced_homology(X, "Q")
    for p in primes:
        if reduced_homology(X, p).betti != q.betti:
            raise ResourceError(f"torsion at {p} present but integral computation exceeds caps", cap="max_faces")
    return HomologySummary(q.betti, {}, "Z", "modular+rational")


# top cohomology ----------------------------------------------------------------


def cokernel_coordinates(rows: Mapping[int, Mapping[int, int]], row_ids: Sequence[int]):
    """Coordinate map of ``Z^{rows} / image`` for a matrix whose rows index the target.

    Returns ``(basis, project)``: ``basis`` lists the surviving rows, and
    ``project(vector)`` maps ``{row: value}`` to coordinates on ``basis``.
    Needs every pivot to be a unit; otherwise a usage error is raised.
    """
    el = eliminate(rows, "Z", record=True)
    if el.core:
        raise UsageError("cokernel has torsion or needs non-unit pivots")
    dropped = {r for r, _ in el.record}
    basis = [r for r in row_ids if r not in dropped]
    pos = {r: i for i, r in enumerate(basis)}
    record = el.record

    def project(vec: Mapping[int, int]) -> list[int]:
        v = dict(vec)
        for r, factors in record:
            x = v.pop(r, 0)
            if x:
                for r2, f in factors.items():
                    v[r2] = v.get(r2, 0) - f * x
        out = [0] * len(basis)
        for r, x in v.items():
            if x:
                out[pos[r]] = x
        return out

    return basis, project


def top_cohomology_basis(X: SimplicialComplex):
    """Basis of ``H^D(X)`` (``D`` = top dimension) as surviving top faces, and the projection."""
    D = X.dim
    rows = boundary_rows(X, D)
    return cokernel_coordinates(rows, list(range(len(X.faces[D]))))


def piece_cocycles(X: SimplicialComplex, tops: Sequence[int]) -> list[int]:
    """Top faces whose indicators give a basis of the relative top cohomology of a piece.

    The piece is the set ``tops`` of top faces; its interior codimension-one
    faces are those whose every top coface lies in ``tops``.
    """
    D = X.dim
    rows = boundary_rows(X, D)
    tops = set(int(t) for t in tops)
    cof: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cof.setdefault(c, set()).add(r)
    interior = {c for c, rs in cof.items() if rs <= tops}
    sub = {t: {c: v for c, v in rows[t].items() if c in interior} for t in sorted(tops)}
    el = eliminate(sub, "Z", record=True)
    if el.core:
        raise UsageError("piece cohomology needs non-unit pivots")
    dropped = {r for r, _ in el.record}
    return [t for t in sorted(tops) if t not in dropped]


def induced_on_top_cohomology(X: SimplicialComplex, selected: Sequence[tuple[object, Sequence[int]]]) -> tuple[np.ndarray, list]:
    """Matrix of ``sum_pieces H^D(piece rel boundary) -> H^D(X)``.

    ``selected`` is a list of ``(label, top face indices)``.  Columns are the
    piece cocycles (labelled ``(label, top face)``), rows a basis of
    ``H^D(X)``.  Entries are Python ints in an object array.
    """
    seen: set[int] = set()
    for _, tops in selected:
        ts = set(int(t) for t in tops)
        if ts & seen:
            raise UsageError("selected top-face sets overlap")
        seen |= ts
    basis, project = top_cohomology_basis(X)
    cols = []
    labels = []
    for label, tops in selected:
        for t in piece_cocycles(X, tops):
            cols.append(project({t: 1}))
            labels.append((label, t))
    M = np.zeros((len(basis), len(cols)), dtype=object)
    for j, col in enumerate(cols):
        M[:, j] = col
    return M, labels
