"""From multilinear Lie monomials to top cochains of the partition complex.

A multilinear monomial is a planar binary tree with labelled leaves.  A
linearization of its internal nodes (ancestors first) gives a maximal chain
of ``Pi_n``: remove the nodes one at a time and record the leaf sets of the
connected components.  Spanning trees on ``{1..n}`` give top cycles, used to
pair against these chains.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import UsageError
from .freelie import Tree, is_leaf, is_multilinear, leaves, multilinear_basis, to_string
from .homology import smith_normal_form, top_cohomology_basis
from .partitions import PartitionPoset, SetPartition, enumerate_partitions
from .simplicial import SimplicialComplex, face_index, order_complex

Path = tuple[int, ...]  # 0 = left child, 1 = right child


@dataclass(frozen=True)
class LabeledBinaryTree:
    """Planar binary tree whose leaves carry the labels ``1..n`` bijectively."""

    tree: Tree

    def __post_init__(self) -> None:
        if not is_multilinear(self.tree):
            raise UsageError(f"{to_string(self.tree)} is not multilinear")

    @property
    def n(self) -> int:
        return len(leaves(self.tree))

    def subtree(self, path: Path) -> Tree:
        t = self.tree
        for step in path:
            t = t[step]
        return t

    def internal_nodes(self) -> list[Path]:
        out: list[Path] = []

        def go(t, path):
            if is_leaf(t):
                return
            out.append(path)
            go(t[0], path + (0,))
            go(t[1], path + (1,))

        go(self.tree, ())
        return out

    def leaf_paths(self) -> dict[int, Path]:
        out: dict[int, Path] = {}

        def go(t, path):
            if is_leaf(t):
                out[t] = path
                return
            go(t[0], path + (0,))
            go(t[1], path + (1,))

        go(self.tree, ())
        return out

    def __str__(self) -> str:
        return to_string(self.tree)


def tree_of_monomial(w: Tree) -> LabeledBinaryTree:
    return LabeledBinaryTree(w)


def preorder_linearization(T: LabeledBinaryTree) -> list[Path]:
    """Root first, then the right subtree in this order, then the left subtree."""
    out: list[Path] = []

    def go(t, path):
        if is_leaf(t):
            return
        out.append(path)
        go(t[1], path + (1,))
        go(t[0], path + (0,))

    go(T.tree, ())
    return out


def is_linearization(T: LabeledBinaryTree, L: Sequence[Path]) -> bool:
    nodes = T.internal_nodes()
    if sorted(L) != sorted(nodes) or len(set(L)) != len(L):
        return False
    pos = {p: i for i, p in enumerate(L)}
    return all(pos[p[:-1]] < pos[p] for p in L if p)


def all_linearizations(T: LabeledBinaryTree) -> list[list[Path]]:
    nodes = T.internal_nodes()
    out: list[list[Path]] = []

    def extend(prefix: list[Path], avail: set[Path]):
        if not avail:
            out.append(list(prefix))
            return
        for p in sorted(avail):
            nxt = set(avail) - {p}
            for child in (p + (0,), p + (1,)):
                if child in set(nodes):
                    nxt.add(child)
            prefix.append(p)
            extend(prefix, nxt)
            prefix.pop()

    if nodes:
        extend([], {()})
    else:
        out.append([])
    return out


def chain_of_linearization(T: LabeledBinaryTree, L: Sequence[Path] | None = None) -> list[SetPartition]:
    """Maximal chain ``lambda_1 < ... < lambda_(n-2)`` of ``Pi_n``.

    ``lambda_j`` is the partition of the leaves into the components left
    after removing the first ``j`` internal nodes of ``L``.
    """
    if L is None:
        L = preorder_linearization(T)
    if not is_linearization(T, L):
        raise UsageError("not a linearization of the tree")
    n = T.n
    lp = T.leaf_paths()
    chain = []
    removed: set[Path] = set()
    for j, node in enumerate(L[:-1] if L else []):
        removed.add(node)
        groups: dict[Path, list[int]] = {}
        for leaf, path in lp.items():
            cut = max((k for k in range(len(path)) if path[:k] in removed), default=None)
            key = path[: cut + 1]
            groups.setdefault(key, []).append(leaf)
        chain.append(SetPartition(n, tuple(tuple(sorted(g)) for g in groups.values())))
    return chain


# tree cycles --------------------------------------------------------------------


def _check_tree(n: int, edges: Sequence[tuple[int, int]]) -> None:
    if len(edges) != n - 1:
        raise UsageError(f"a spanning tree on {n} vertices has {n - 1} edges")
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        if not (1 <= a <= n and 1 <= b <= n):
            raise UsageError(f"edge {(a, b)} out of range")
        ra, rb = find(a), find(b)
        if ra == rb:
            raise UsageError("edges contain a cycle")
        parent[ra] = rb


def _components_labels(n: int, edges: Sequence[tuple[int, int]]) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a - 1)] = find(b - 1)
    roots = [find(i) for i in range(n)]
    seen: dict[int, int] = {}
    return [seen.setdefault(r, len(seen)) for r in roots]


@lru_cache(maxsize=None)
def _signed_permutations(m: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(itertools.permutations(range(m))), dtype=np.int64).reshape(-1, m)
    inv = np.zeros(len(perms), dtype=np.int64)
    for a in range(m):
        for b in range(a + 1, m):
            inv += perms[:, a] > perms[:, b]
    return perms, 1 - 2 * (inv % 2)


def tree_cycle(n: int, edges: Sequence[tuple[int, int]], P: PartitionPoset | None = None) -> dict[tuple[int, ...], int]:
    """Top cycle of ``Pi_n`` from a spanning tree.

    Sum over orderings ``pi`` of the edges of ``sgn(pi)`` times the chain of
    component partitions of the growing edge sets (coarsest first).  Keys are
    chains as sorted vertex indices of ``P`` (default ``Pi_n``).
    """
    _check_tree(n, edges)
    if n < 3:
        raise UsageError("tree cycles need n >= 3")
    P = P or enumerate_partitions(n)
    m = n - 1
    masks = np.arange(1, 2**m - 1)
    labels = np.array([_components_labels(n, [edges[i] for i in range(m) if (s >> i) & 1]) for s in masks.tolist()], dtype=np.int64)
    vidx = np.full(2**m, -1, dtype=np.int64)
    vidx[masks] = P.indices_of_labels(labels)
    perms, signs = _signed_permutations(m)
    bits = 1 << perms
    cum = np.cumsum(bits, axis=1)[:, : m - 1]  # S_1 .. S_(m-1)
    chains = vidx[cum[:, ::-1]]
    out: dict[tuple[int, ...], int] = {}
    for ch, s in zip(map(tuple, chains.tolist()), signs.tolist()):
        out[ch] = out.get(ch, 0) + s
    return {k: v for k, v in out.items() if v}


def tree_of_chain(chain: Sequence[SetPartition]) -> list[tuple[int, int]]:
    """Spanning tree of a maximal chain: each split ``U -> U_i, U_i'`` adds the edge
    joining ``min U_i`` and ``min U_i'``."""
    if not chain:
        raise UsageError("empty chain")
    n = chain[0].n
    full = [SetPartition.bottom(n)] + sorted(chain, key=lambda lam: lam.rank) + [SetPartition.top(n)]
    edges = []
    for a, b in zip(full, full[1:]):
        if b.rank != a.rank + 1:
            raise UsageError("chain is not maximal")
        old = set(a.blocks) - set(b.blocks)
        new = sorted(set(b.blocks) - set(a.blocks))
        if len(old) != 1 or len(new) != 2:
            raise UsageError("consecutive members do not differ by one split")
        edges.append((min(new[0]), min(new[1])))
    return edges


# Barcelo rank check -------------------------------------------------------------


def chain_face(X: SimplicialComplex, P: PartitionPoset, chain: Sequence[SetPartition]) -> int:
    """Index of the top face of ``X = order_complex(P)`` spanned by a maximal chain."""
    idx = sorted(P.index(lam) for lam in chain)
    F = X.faces[X.dim]
    return int(face_index(F, np.array([idx], dtype=np.int64))[0])


@dataclass
class BarceloReport:
    n: int
    rank: int
    expected: int
    invariant_factors: list[int]

    @property
    def unimodular(self) -> bool:
        return self.rank == self.expected and all(d == 1 for d in self.invariant_factors)


def hall_chains(n: int) -> list[tuple[Tree, list[SetPartition]]]:
    """Preorder chain of each multilinear Hall basic monomial in ``n`` variables."""
    B = multilinear_basis(n)
    return [(w, chain_of_linearization(LabeledBinaryTree(w))) for w in B.filter([1] * n)]


def barcelo_rank_check(n: int) -> BarceloReport:
    """Classes of the Hall chains in the top cohomology of ``Pi_n``, via Smith form."""
    if n < 3:
        raise UsageError("barcelo_rank_check needs n >= 3")
    P = enumerate_partitions(n)
    X = order_complex(P)
    basis, project = top_cohomology_basis(X)
    cols = []
    for _, chain in hall_chains(n):
        cols.append(project({chain_face(X, P, chain): 1}))
    rows = {j: {i: v for i, v in enumerate(col) if v} for j, col in enumerate(cols)}
    snf = smith_normal_form(rows)
    return BarceloReport(n, len(snf), math.factorial(n - 1), snf)


def linearization_classes(T: LabeledBinaryTree, X: SimplicialComplex, P: PartitionPoset, project) -> list[list[int]]:
    """Top-cohomology coordinates of the chain of every linearization of ``T``."""
    return [project({chain_face(X, P, chain_of_linearization(T, L)): 1}) for L in all_linearizations(T)]
