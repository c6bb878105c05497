"""Free Lie algebras over Z: Hall bases, normal forms and the branching matrix.

Monomials are binary trees: a leaf is a positive int ``i`` (the generator
``x_i``) and a bracket ``[a, b]`` is the pair ``(a, b)``.  Elements are
integer combinations, kept as ``{basis index: coefficient}`` once in normal
form.
"""

from __future__ import annotations

import bisect
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ResourceError, UsageError
from .partitions import multinomial
from .permgroups import diagonal_sigma_d, left_coset_representatives, young

Tree = object  # int | tuple[Tree, Tree]

MAX_BASIS = 2 * 10**5
MAX_BRANCHING = 6000


# monomials -------------------------------------------------------------------


def is_leaf(t: Tree) -> bool:
    return isinstance(t, int)


def leaves(t: Tree) -> list[int]:
    if is_leaf(t):
        return [t]
    return leaves(t[0]) + leaves(t[1])


def weight(t: Tree) -> int:
    return 1 if is_leaf(t) else weight(t[0]) + weight(t[1])


def multidegree(t: Tree, k: int) -> tuple[int, ...]:
    out = [0] * k
    for x in leaves(t):
        if x > k:
            raise UsageError(f"x{x} exceeds {k} generators")
        out[x - 1] += 1
    return tuple(out)


def to_string(t: Tree) -> str:
    if is_leaf(t):
        return f"x{t}"
    return f"[{to_string(t[0])},{to_string(t[1])}]"


_TOKEN = re.compile(r"\s*(\[|\]|,|x\d+)")


def parse_monomial(text: str) -> Tree:
    """Parse the literal syntax ``[[x2,x1],x2]``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise UsageError(f"cannot parse monomial at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    it = iter(tokens)

    def parse():
        tok = next(it, None)
        if tok is None:
            raise UsageError(f"unexpected end of monomial {text!r}")
        if tok.startswith("x"):
            v = int(tok[1:])
            if v < 1:
                raise UsageError("generator indices start at 1")
            return v
        if tok != "[":
            raise UsageError(f"unexpected {tok!r} in {text!r}")
        a = parse()
        if next(it, None) != ",":
            raise UsageError(f"expected ',' in {text!r}")
        b = parse()
        if next(it, None) != "]":
            raise UsageError(f"expected ']' in {text!r}")
        return (a, b)

    t = parse()
    if next(it, None) is not None:
        raise UsageError(f"trailing input in {text!r}")
    return t


def relabel(t: Tree, f: Callable[[int], int] | Sequence[int]) -> Tree:
    """Replace each leaf ``i`` by ``f(i)`` (or ``f[i-1]`` for a sequence)."""
    g = f if callable(f) else (lambda i: f[i - 1])
    if is_leaf(t):
        return g(t)
    return (relabel(t[0], g), relabel(t[1], g))


def is_multilinear(t: Tree) -> bool:
    ls = leaves(t)
    return sorted(ls) == list(range(1, len(ls) + 1))


def resolution(w: Tree, k: int | None = None) -> Tree:
    """Multilinear monomial: the occurrences of ``x_i`` are renamed in order of occurrence,
    ``x_1``'s first, then ``x_2``'s, and so on."""
    ls = leaves(w)
    k = k or max(ls)
    md = [0] * k
    for x in ls:
        md[x - 1] += 1
    start = [sum(md[:i]) for i in range(k)]
    seen = [0] * k

    def go(t):
        if is_leaf(t):
            seen[t - 1] += 1
            return start[t - 1] + seen[t - 1]
        a = go(t[0])
        return (a, go(t[1]))

    return go(w)


def operad_substitute(outer: Tree, inners: Sequence[Tree], phi: Sequence[Sequence[int]] | None = None) -> Tree:
    """Substitute ``inners[j-1]`` for ``x_j`` in ``outer``, renaming the variables
    of inner ``j`` by ``phi[j-1]``.  The default ``phi`` uses consecutive blocks."""
    arity = len(leaves(outer))
    if not is_multilinear(outer) or len(inners) != arity:
        raise UsageError(f"outer monomial needs {arity} multilinear inners")
    sizes = []
    for w in inners:
        if not is_multilinear(w):
            raise UsageError(f"inner {to_string(w)} is not multilinear")
        sizes.append(weight(w))
    if phi is None:
        phi, off = [], 0
        for s in sizes:
            phi.append(list(range(off + 1, off + s + 1)))
            off += s
    if [len(p) for p in phi] != sizes or sorted(x for p in phi for x in p) != list(range(1, sum(sizes) + 1)):
        raise UsageError("phi must be a bijection onto 1..n matching the inner arities")
    renamed = [relabel(w, list(p)) for w, p in zip(inners, phi)]
    return _graft(outer, renamed)


def _graft(outer: Tree, pieces: Sequence[Tree]) -> Tree:
    if is_leaf(outer):
        return pieces[outer - 1]
    return (_graft(outer[0], pieces), _graft(outer[1], pieces))


def phi_w(d: int, w: Tree, v: Tree, k: int | None = None) -> Tree:
    """Image of the multilinear ``v`` in ``d`` variables: ``v(w~(x_1, x_(1+d), ...), ..., w~(x_d, ..., x_n))``."""
    wt = resolution(w, k)
    m = weight(wt)
    if not is_multilinear(v) or weight(v) != d:
        raise UsageError(f"v must be multilinear in {d} variables")
    phi = [[i + j * d for j in range(m)] for i in range(1, d + 1)]
    return operad_substitute(v, [wt] * d, phi)


# Witt formula --------------------------------------------------------------------


def mobius(n: int) -> int:
    out = 1
    q = 2
    while q * q <= n:
        if n % q == 0:
            n //= q
            if n % q == 0:
                return 0
            out = -out
        q += 1
    return -out if n > 1 else out


def witt(ns: Sequence[int]) -> int:
    """Rank of the multidegree ``ns`` part of the free Lie algebra."""
    ns = [int(x) for x in ns]
    if any(x < 0 for x in ns) or not any(ns):
        raise UsageError("witt needs nonnegative entries, not all zero")
    n = sum(ns)
    g = math.gcd(*ns)
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            total += mobius(d) * multinomial([x // d for x in ns])
    assert total % n == 0
    return total // n


# Hall bases --------------------------------------------------------------------------


def serialize(t: Tree) -> tuple[int, ...]:
    """Preorder tokens with 0 marking a bracket."""
    if is_leaf(t):
        return (t,)
    return (0,) + serialize(t[0]) + serialize(t[1])


def default_order_key(t: Tree) -> tuple:
    return (weight(t), serialize(t))


def alternate_order_key(t: Tree) -> tuple:
    """Weight first, then reversed serialization order (still a Hall order)."""
    return (weight(t), tuple(-x for x in serialize(t)))


class HallBasis:
    """Basic monomials in ``k`` generators with multidegree at most ``bound``.

    Elements are sorted by ``order_key``; ``index[tree]`` is the position.
    """

    def __init__(self, k: int, bound: Sequence[int] | None = None, max_weight: int | None = None, order_key=default_order_key, cap: int = MAX_BASIS):
        if bound is None and max_weight is None:
            raise UsageError("HallBasis needs a multidegree bound or a maximal weight")
        self.k = k
        self.bound = tuple(bound) if bound is not None else None
        self.max_weight = max_weight if max_weight is not None else sum(self.bound)
        self.order_key = order_key
        by_weight: dict[int, list[tuple[Tree, tuple[int, ...]]]] = {1: []}
        for i in range(1, k + 1):
            md = tuple(int(j == i - 1) for j in range(k))
            if self._fits(md):
                by_weight[1].append((i, md))
        rank: dict[Tree, tuple] = {t: order_key(t) for t, _ in by_weight[1]}
        bound_arr = np.array(self.bound if self.bound is not None else [self.max_weight] * k, dtype=np.int64)
        # per weight: items sorted by key, their keys and multidegree array
        layers: dict[int, tuple[list, list, np.ndarray]] = {}

        def layer(wt: int):
            if wt not in layers:
                items = sorted(by_weight.get(wt, []), key=lambda x: rank[x[0]])
                mds = np.array([md for _, md in items], dtype=np.int64).reshape(-1, k)
                layers[wt] = ([t for t, _ in items], [rank[t] for t, _ in items], mds)
            return layers[wt]

        total = len(by_weight[1])
        for n in range(2, self.max_weight + 1):
            new = []
            for wa in range(1, n):
                ta, ka, mda = layer(wa)
                tb, kb, mdb = layer(n - wa)
                if not ta or not tb:
                    continue
                for a, key_a, md_a in zip(ta, ka, mda):
                    lo = 0 if is_leaf(a) else bisect.bisect_left(kb, rank[a[1]])
                    hi = bisect.bisect_left(kb, key_a)
                    if lo >= hi:
                        continue
                    sums = mdb[lo:hi] + md_a
                    ok = np.flatnonzero((sums <= bound_arr).all(axis=1))
                    for j in ok.tolist():
                        new.append(((a, tb[lo + j]), tuple(sums[j].tolist())))
            for t, _ in new:
                rank[t] = order_key(t)
            by_weight[n] = new
            total += len(new)
            if total > cap:
                raise ResourceError(f"Hall basis exceeds {cap} elements", cap="max_basis", estimate=total)
        items = [x for n in sorted(by_weight) for x in by_weight[n]]
        items.sort(key=lambda x: order_key(x[0]))
        self.elements: list[Tree] = [t for t, _ in items]
        self.multidegrees: list[tuple[int, ...]] = [md for _, md in items]
        self.index: dict[Tree, int] = {t: i for i, t in enumerate(self.elements)}
        self._bracket_cache: dict[tuple[int, int], dict[int, int]] = {}

    def _fits(self, md: tuple[int, ...]) -> bool:
        if self.bound is None:
            return True
        return all(x <= y for x, y in zip(md, self.bound))

    def __len__(self) -> int:
        return len(self.elements)

    def filter(self, multideg: Sequence[int]) -> list[Tree]:
        md = tuple(multideg)
        return [t for t, m in zip(self.elements, self.multidegrees) if m == md]

    def filter_indices(self, multideg: Sequence[int]) -> list[int]:
        md = tuple(multideg)
        return [i for i, m in enumerate(self.multidegrees) if m == md]

    def is_basic(self, t: Tree) -> bool:
        return t in self.index

    # rewriting --------------------------------------------------------------

    def bracket(self, i: int, j: int) -> dict[int, int]:
        """Normal form of ``[u_i, u_j]`` for basic ``u_i, u_j``."""
        key = (i, j)
        cached = self._bracket_cache.get(key)
        if cached is not None:
            return cached
        if i == j:
            out: dict[int, int] = {}
        elif i < j:
            out = {b: -c for b, c in self.bracket(j, i).items()}
        else:
            a = self.elements[i]
            t = (a, self.elements[j])
            if is_leaf(a) or self.index[a[1]] <= j:
                if t not in self.index:
                    raise ResourceError("bracket leaves the multidegree bound", cap="bound")
                out = {self.index[t]: 1}
            else:
                s, tt = self.index[a[0]], self.index[a[1]]
                # [[s,t],u] = [[s,u],t] + [s,[t,u]]
                out = {}
                for b, c in self.bracket(s, j).items():
                    for b2, c2 in self.bracket(b, tt).items():
                        out[b2] = out.get(b2, 0) + c * c2
                for b, c in self.bracket(tt, j).items():
                    for b2, c2 in self.bracket(s, b).items():
                        out[b2] = out.get(b2, 0) + c * c2
                out = {b: c for b, c in out.items() if c}
        self._bracket_cache[key] = out
        return out

    def normal_form(self, e) -> dict[int, int]:
        """Normal form of a tree or of ``{tree: coeff}``; result ``{basis index: coeff}``."""
        if isinstance(e, dict):
            out: dict[int, int] = {}
            for t, c in e.items():
                for b, v in self._nf_tree(t).items():
                    out[b] = out.get(b, 0) + c * v
            return {b: c for b, c in out.items() if c}
        return dict(self._nf_tree(e))

    def _nf_tree(self, t: Tree) -> dict[int, int]:
        if is_leaf(t):
            if t not in self.index:
                raise UsageError(f"x{t} is not a generator within the bound")
            return {self.index[t]: 1}
        hit = self.index.get(t)
        if hit is not None:
            return {hit: 1}
        left = self._nf_tree(t[0])
        right = self._nf_tree(t[1])
        out: dict[int, int] = {}
        for a, ca in left.items():
            for b, cb in right.items():
                for r, cr in self.bracket(a, b).items():
                    out[r] = out.get(r, 0) + ca * cb * cr
        return {b: c for b, c in out.items() if c}

    def to_trees(self, nf: dict[int, int]) -> dict[Tree, int]:
        return {self.elements[b]: c for b, c in nf.items()}


def hall_basis(k: int, max_weight: int, order_key=default_order_key) -> HallBasis:
    return HallBasis(k, max_weight=max_weight, order_key=order_key)


@lru_cache(maxsize=None)
def multilinear_basis(n: int, alternate: bool = False) -> HallBasis:
    key = alternate_order_key if alternate else default_order_key
    return HallBasis(n, bound=[1] * n, order_key=key)


def all_monomials(ns: Sequence[int]) -> list[Tree]:
    """Every bracketing of every arrangement of the multiset with multidegree ``ns``."""
    word = [i + 1 for i, c in enumerate(ns) for _ in range(c)]
    arrangements = sorted(set(permutations(word)))
    out = []
    for arr in arrangements:
        out.extend(_bracketings(tuple(arr)))
    return out


@lru_cache(maxsize=None)
def _bracketings(word: tuple[int, ...]) -> tuple[Tree, ...]:
    if len(word) == 1:
        return (word[0],)
    out = []
    for s in range(1, len(word)):
        for a in _bracketings(word[:s]):
            for b in _bracketings(word[s:]):
                out.append((a, b))
    return tuple(out)


# branching matrix ----------------------------------------------------------------------


@dataclass
class BranchingMatrix:
    """Sparse columns ``{row: value}``; rows index the multilinear Hall basis of ``Lie_n``."""

    ns: tuple[int, ...]
    n_rows: int
    entries: list[dict[int, int]] = field(repr=False)
    columns: list[tuple[int, Tree, Tree, tuple[int, ...]]] = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, len(self.entries))

    def dense(self) -> np.ndarray:
        M = np.zeros(self.shape, dtype=object)
        for j, col in enumerate(self.entries):
            for i, c in col.items():
                M[i, j] = c
        return M

    def as_rows(self) -> dict[int, dict[int, int]]:
        """Columns as rows of the transpose (Smith form is unchanged)."""
        return {j: dict(col) for j, col in enumerate(self.entries)}


def branching_size(ns: Sequence[int]) -> int:
    n = sum(ns)
    g = math.gcd(*ns)
    order = math.prod(math.factorial(x) for x in ns)
    return sum(witt([x // d for x in ns]) * math.factorial(d - 1) * order // math.factorial(d) for d in range(1, g + 1) if g % d == 0)


def branching_matrix(ns: Sequence[int], alternate_order: bool = False, cap: int = MAX_BRANCHING) -> BranchingMatrix:
    """Matrix of the sum over ``d | gcd(ns)`` and ``w`` in ``B(ns/d)`` of
    ``Lie_d (x)_{Sigma_d} Z[Young] -> Lie_n``.

    Columns are indexed by ``(d, w, b, sigma)`` with ``b`` a Hall basis element
    of ``Lie_d`` and ``sigma`` a least representative of ``sigma Sigma_d``;
    the column is the normal form of ``sigma . phi_w(b)``.
    """
    ns = tuple(int(x) for x in ns)
    if not ns or any(x < 1 for x in ns):
        raise UsageError("composition entries must be positive")
    size = branching_size(ns)
    if size > cap:
        raise ResourceError(f"branching matrix of size {size} exceeds cap {cap}", cap="max_branching", estimate=size)
    n = sum(ns)
    k = len(ns)
    g = math.gcd(*ns)
    target = multilinear_basis(n, alternate_order)
    rows_idx = target.filter_indices([1] * n)
    row_pos = {b: i for i, b in enumerate(rows_idx)}
    Y = young(ns)
    cols: list[tuple[int, Tree, Tree, tuple[int, ...]]] = []
    entries: list[dict[int, int]] = []
    key = alternate_order_key if alternate_order else default_order_key
    for d in range(1, g + 1):
        if g % d:
            continue
        sub = [x // d for x in ns]
        ws = HallBasis(k, bound=sub, order_key=key).filter(sub)
        inner = multilinear_basis(d, alternate_order).filter([1] * d)
        reps = left_coset_representatives(Y, diagonal_sigma_d(d, n))
        for w in ws:
            for b in inner:
                base = phi_w(d, w, b, k)
                for sigma in reps:
                    t = relabel(base, sigma)
                    nf = target.normal_form(t)
                    entries.append({row_pos[r]: c for r, c in nf.items()})
                    cols.append((d, w, b, sigma))
    return BranchingMatrix(ns, len(rows_idx), entries, cols)


@dataclass
class BranchingReport:
    ns: tuple[int, ...]
    shape: tuple[int, int]
    evidence: str
    invariant_factors: list[int] | None = None
    modular_ranks: dict[int, int] = field(default_factory=dict)

    @property
    def unimodular(self) -> bool:
        m, k = self.shape
        if m != k:
            return False
        if self.invariant_factors is not None:
            return len(self.invariant_factors) == m and all(d == 1 for d in self.invariant_factors)
        return bool(self.modular_ranks) and all(r == m for r in self.modular_ranks.values())

    def to_json(self) -> dict:
        out = {"ns": list(self.ns), "shape": list(self.shape), "evidence": self.evidence, "unimodular": self.unimodular}
        if self.invariant_factors is not None:
            out["snf_rank"] = len(self.invariant_factors)
        if self.modular_ranks:
            out["modular_ranks"] = {str(p): r for p, r in self.modular_ranks.items()}
        return out


def verify_branching(ns: Sequence[int], evidence: str = "integral", primes: Sequence[int] = (2, 3, 5, 7)) -> BranchingReport:
    """Smith form of the branching matrix, or its ranks modulo ``primes``.

    Full rank modulo every prime would be needed for unimodularity; the
    modular report only certifies full rank at the listed primes.
    """
    from .homology import eliminate, smith_normal_form

    M = branching_matrix(ns)
    rows = M.as_rows()
    rep = BranchingReport(M.ns, M.shape, evidence)
    if evidence == "integral":
        rep.invariant_factors = smith_normal_form(rows)
    elif evidence == "modular":
        rep.modular_ranks = {p: eliminate(rows, "p", p).rank for p in primes}
    else:
        raise UsageError(f"unknown evidence level {evidence!r}")
    return rep
