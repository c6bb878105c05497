"""Set partitions of {1..n} and the partition posets.

Order convention: ``a < b`` when ``b`` strictly refines ``a``, so the one-block
partition is the minimum and the partition into singletons the maximum.
``Pi_n`` (mode ``"proper"``) drops both of these.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache, cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ResourceError, UsageError

MAX_ENUMERATION_N = 12


@dataclass(frozen=True)
class SetPartition:
    """A partition of ``{1..n}`` in canonical form.

    Blocks are sorted internally and ordered by their minimum, so two
    partitions are equal exactly when their representations are equal.
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise UsageError(f"ground set size must be positive, got {self.n}")
        canon = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        seen = [x for b in canon for x in b]
        if any(len(b) == 0 for b in canon) or sorted(seen) != list(range(1, self.n + 1)):
            raise UsageError(f"blocks {self.blocks!r} do not partition 1..{self.n}")
        object.__setattr__(self, "blocks", canon)

    # construction -----------------------------------------------------------

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "SetPartition":
        """Build from a block label per element (position i holds the label of i+1)."""
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(i + 1)
        return cls(len(labels), tuple(tuple(g) for g in groups.values()))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "SetPartition":
        """Parse ``"1 3|2 4"``.  ``/`` is accepted as block separator, and a block
        written as one run of digits (``"13|24"``) is read digit by digit."""
        parts = [p.strip() for p in re.split(r"[|/]", text.strip())]
        if not parts or any(not p for p in parts):
            raise UsageError(f"cannot parse partition literal {text!r}")
        blocks = []
        for p in parts:
            toks = p.split()
            if len(toks) == 1 and len(toks[0]) > 1 and (n is None or n <= 9):
                toks = list(toks[0])
            try:
                blocks.append(tuple(int(t) for t in toks))
            except ValueError as exc:
                raise UsageError(f"cannot parse partition literal {text!r}") from exc
        size = sum(len(b) for b in blocks)
        if n is not None and n != size:
            raise UsageError(f"literal {text!r} has {size} elements, expected {n}")
        return cls(size, tuple(blocks))

    @classmethod
    def bottom(cls, n: int) -> "SetPartition":
        """The one-block partition, minimum of ``Part_n``."""
        return cls(n, (tuple(range(1, n + 1)),))

    @classmethod
    def top(cls, n: int) -> "SetPartition":
        """The partition into singletons, maximum of ``Part_n``."""
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    # views ------------------------------------------------------------------

    def __str__(self) -> str:
        return "|".join(" ".join(map(str, b)) for b in self.blocks)

    def __repr__(self) -> str:
        return f"SetPartition({str(self)!r})"

    @property
    def rank(self) -> int:
        return len(self.blocks)

    @cached_property
    def labels(self) -> tuple[int, ...]:
        """Restricted growth labels: position i holds the index of the block of i+1."""
        out = [0] * self.n
        for k, b in enumerate(self.blocks):
            for x in b:
                out[x - 1] = k
        return tuple(out)

    def block_of(self, x: int) -> tuple[int, ...]:
        return self.blocks[self.labels[x - 1]]

    def permuted(self, images: Sequence[int]) -> "SetPartition":
        """Image under the permutation with ``images[i-1] = sigma(i)``."""
        return SetPartition(self.n, tuple(tuple(images[x - 1] for x in b) for b in self.blocks))

    def refines(self, other: "SetPartition") -> bool:
        """True when every block of ``self`` lies inside a block of ``other``."""
        return leq(other, self)


def rank(lam: SetPartition) -> int:
    return lam.rank


def leq(a: SetPartition, b: SetPartition) -> bool:
    """``a <= b``: every block of ``b`` is contained in a block of ``a``."""
    if a.n != b.n:
        raise UsageError(f"partitions of different ground sets ({a.n} vs {b.n})")
    la = a.labels
    return all(len({la[x - 1] for x in blk}) == 1 for blk in b.blocks)


def less(a: SetPartition, b: SetPartition) -> bool:
    return a != b and leq(a, b)


def join_meet(a: SetPartition, b: SetPartition) -> tuple[SetPartition, SetPartition]:
    """Return ``(join, meet)``.

    The join is the coarsest common refinement (nonempty blockwise
    intersections); the meet is the finest common coarsening.
    """
    if a.n != b.n:
        raise UsageError(f"partitions of different ground sets ({a.n} vs {b.n})")
    join_blocks = [tuple(sorted(set(x) & set(y))) for x in a.blocks for y in b.blocks]
    join = SetPartition(a.n, tuple(blk for blk in join_blocks if blk))

    parent = list(range(a.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for blk in a.blocks + b.blocks:
        for x in blk[1:]:
            rx, ry = find(x), find(blk[0])
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    groups: dict[int, list[int]] = {}
    for x in range(1, a.n + 1):
        groups.setdefault(find(x), []).append(x)
    meet = SetPartition(a.n, tuple(tuple(g) for g in groups.values()))
    return join, meet


def rho(d: int, n: int) -> SetPartition:
    """The partition of ``{1..n}`` into the ``d`` residue classes mod ``d``."""
    if d < 1 or n % d:
        raise UsageError(f"rho needs d | n, got d={d}, n={n}")
    return SetPartition(n, tuple(tuple(range(i, n + 1, d)) for i in range(1, d + 1)))


def d_times(d: int, lam: SetPartition, n: int | None = None) -> SetPartition:
    """Copy ``lam`` onto each block of ``rho(d, n)``.

    Element ``j`` of ``lam``'s ground set corresponds to the j-th smallest
    element ``i + (j-1)d`` of the block through ``i``.
    """
    m = lam.n
    if n is None:
        n = d * m
    if n != d * m:
        raise UsageError(f"d_times: n={n} is not d*{m}")
    blocks = []
    for i in range(1, d + 1):
        for blk in lam.blocks:
            blocks.append(tuple(i + (j - 1) * d for j in blk))
    return SetPartition(n, tuple(blocks))


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def interval(a: SetPartition, b: SetPartition, closed: bool = True) -> list[SetPartition]:
    """All partitions between ``a`` and ``b`` (inclusive when ``closed``).

    The closed interval is a product of full partition lattices, one factor
    per block of ``a`` on the set of ``b``-blocks inside it.
    """
    if not leq(a, b):
        raise UsageError(f"{a} and {b} are not comparable as a <= b")
    lb = b.labels
    factors = []
    for blk in a.blocks:
        sub = sorted({lb[x - 1] for x in blk})
        factors.append([(sub, q) for q in _set_partitions(len(sub))])
    out = []
    for combo in _product(factors):
        blocks = []
        for sub, q in combo:
            for qb in q:
                blocks.append(tuple(x for k in qb for x in b.blocks[sub[k]]))
        mu = SetPartition(a.n, tuple(blocks))
        if closed or (mu != a and mu != b):
            out.append(mu)
    out.sort(key=lambda p: (p.rank, p.labels))
    return out


def _product(factors):
    if not factors:
        yield ()
        return
    for head in factors[0]:
        for tail in _product(factors[1:]):
            yield (head,) + tail


def _set_partitions(m: int) -> list[list[list[int]]]:
    """Set partitions of ``range(m)`` as lists of blocks."""
    if m == 0:
        return [[]]
    out = []
    for p in _set_partitions(m - 1):
        for i in range(len(p)):
            out.append(p[:i] + [p[i] + [m - 1]] + p[i + 1 :])
        out.append(p + [[m - 1]])
    return out


def _rgs_array(n: int) -> np.ndarray:
    """All restricted growth strings of length n as rows (Bell(n) x n)."""
    labs = np.zeros((1, 1), dtype=np.int8)
    mx = np.zeros(1, dtype=np.int64)
    for _ in range(1, n):
        counts = mx + 2
        rows = np.repeat(np.arange(len(labs)), counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        new = (np.arange(int(counts.sum())) - starts).astype(np.int8)
        labs = np.concatenate([labs[rows], new[:, None]], axis=1)
        mx = np.maximum(mx[rows], new)
    return labs


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel rows of a label array to restricted growth form."""
    labels = np.asarray(labels)
    m, n = labels.shape
    out = np.empty_like(labels)
    mapping = np.full((m, n), -1, dtype=np.int64)
    nxt = np.zeros(m, dtype=np.int64)
    rows = np.arange(m)
    for j in range(n):
        lab = labels[:, j].astype(np.int64)
        cur = mapping[rows, lab]
        fresh = cur < 0
        cur = np.where(fresh, nxt, cur)
        mapping[rows[fresh], lab[fresh]] = nxt[fresh]
        nxt = nxt + fresh
        out[:, j] = cur
    return out


class PartitionPoset:
    """All partitions of ``{1..n}`` (``mode="full"``) or the proper part ``Pi_n``.

    Elements are ordered by rank, then by restricted growth labels; element
    ``i`` is exposed both as a :class:`SetPartition` and as the row
    ``labels[i]``.
    """

    def __init__(self, n: int, mode: str = "proper", labels: np.ndarray | None = None):
        if mode not in ("full", "proper"):
            raise UsageError(f"unknown poset mode {mode!r}")
        self.n = n
        self.mode = mode
        if labels is None:
            labels = _rgs_array(n)
            ranks = labels.max(axis=1).astype(np.int64) + 1
            if mode == "proper":
                keep = (ranks > 1) & (ranks < n)
                labels = labels[keep]
        ranks = labels.max(axis=1).astype(np.int64) + 1 if len(labels) else np.zeros(0, dtype=np.int64)
        keys = np.lexsort(tuple(labels[:, j] for j in range(n - 1, -1, -1)) + (ranks,)) if len(labels) else np.zeros(0, dtype=np.int64)
        self.labels = np.ascontiguousarray(labels[keys])
        self.ranks = ranks[keys]

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[SetPartition]:
        return iter(self.elements)

    def __getitem__(self, i: int) -> SetPartition:
        return self.elements[i]

    @cached_property
    def elements(self) -> tuple[SetPartition, ...]:
        return tuple(SetPartition.from_labels(row) for row in self.labels.tolist())

    @cached_property
    def keys(self) -> np.ndarray:
        """Integer code of each element's labels (base n digits)."""
        return encode_labels(self.labels, self.n)

    @cached_property
    def _key_order(self) -> np.ndarray:
        return np.argsort(self.keys, kind="stable")

    def index(self, lam: SetPartition) -> int:
        idx = self.indices_of_labels(np.array([lam.labels]))
        if idx[0] < 0:
            raise UsageError(f"{lam} is not an element of this poset")
        return int(idx[0])

    def __contains__(self, lam: SetPartition) -> bool:
        return lam.n == self.n and self.indices_of_labels(np.array([lam.labels]))[0] >= 0

    def indices_of_labels(self, labels: np.ndarray) -> np.ndarray:
        """Element indices for rows of (canonical) labels, -1 where absent."""
        k = encode_labels(canonical_labels(np.asarray(labels)), self.n)
        order = self._key_order
        sorted_keys = self.keys[order]
        pos = np.searchsorted(sorted_keys, k)
        pos = np.minimum(pos, len(sorted_keys) - 1) if len(sorted_keys) else pos
        if not len(sorted_keys):
            return np.full(len(k), -1, dtype=np.int64)
        found = sorted_keys[pos] == k
        return np.where(found, order[pos], -1)

    @cached_property
    def pair_masks(self) -> np.ndarray:
        """Bit (i,j) set when i and j share a block.  Needs n <= 11."""
        if self.n > 11:
            raise ResourceError("pair masks need n <= 11", cap="n")
        out = np.zeros(len(self), dtype=np.uint64)
        bit = 0
        for i in range(self.n):
            for j in range(i + 1, self.n):
                same = self.labels[:, i] == self.labels[:, j]
                out |= same.astype(np.uint64) << np.uint64(bit)
                bit += 1
        return out

    def less_matrix(self, max_elements: int = 20000) -> np.ndarray:
        """Boolean matrix ``M[a, b] = (a < b)``."""
        if len(self) > max_elements:
            raise ResourceError(f"comparability matrix for {len(self)} elements", cap="max_elements", estimate=len(self) ** 2)
        cached = self.__dict__.get("_less")
        if cached is None:
            m = self.pair_masks
            cached = (m[None, :] & m[:, None]) == m[None, :]
            np.fill_diagonal(cached, False)
            cached.flags.writeable = False
            self._less = cached
        return cached

    @cached_property
    def up_sets(self) -> list[np.ndarray]:
        """For each element, the sorted indices of strictly finer elements."""
        lt = self.less_matrix()
        return [np.flatnonzero(row) for row in lt]

    def action(self, images: Sequence[int]) -> np.ndarray:
        """Vertex permutation induced by ``sigma`` (``images[i-1] = sigma(i)``)."""
        return self.action_table([images])[0]

    def action_table(self, perms: Iterable[Sequence[int]]) -> np.ndarray:
        perms = [list(p) for p in perms]
        out = np.empty((len(perms), len(self)), dtype=np.int64)
        for g, p in enumerate(perms):
            inv = np.empty(self.n, dtype=np.int64)
            inv[np.asarray(p) - 1] = np.arange(self.n)
            moved = self.labels[:, inv]
            idx = self.indices_of_labels(moved)
            if (idx < 0).any():
                raise UsageError("permutation does not preserve this poset")
            out[g] = idx
        return out

    def subposet_indices(self, predicate) -> np.ndarray:
        return np.array([i for i, lam in enumerate(self.elements) if predicate(lam)], dtype=np.int64)


def encode_labels(labels: np.ndarray, n: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.ndim == 1:
        labels = labels[None, :]
    weights = n ** np.arange(labels.shape[1], dtype=np.int64)
    return labels @ weights


def enumerate_partitions(n: int, mode: str = "proper", cap: int = MAX_ENUMERATION_N) -> PartitionPoset:
    """All partitions of ``{1..n}`` in canonical form."""
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    if n > cap:
        raise ResourceError(f"enumerating partitions of {n} exceeds the cap n <= {cap}", cap="n", estimate=bell(n))
    return _poset(n, mode)


@lru_cache(maxsize=16)
def _poset(n: int, mode: str) -> PartitionPoset:
    return PartitionPoset(n, mode)


def is_binary_chain(chain: Sequence[SetPartition]) -> bool:
    """Each block of each member is a union of at most two blocks of the next,
    and the last member has blocks of size at most two."""
    if not chain:
        return False
    for a, b in zip(chain, chain[1:]):
        if not less(a, b):
            return False
        lb = b.labels
        if any(len({lb[x - 1] for x in blk}) > 2 for blk in a.blocks):
            return False
    return all(len(blk) <= 2 for blk in chain[-1].blocks)


def multinomial(parts: Sequence[int]) -> int:
    out, total = 1, 0
    for p in parts:
        total += p
        out *= math.comb(total, p)
    return out
