"""All cuts that 2-respect a tree, as an n-by-n table, and the near-minimum
cut representation built from such tables."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _accel
from ._accel import jit
from .errors import TooLargeError
from .graph import WeightedGraph, signature
from .respect1 import OneRespectTable, one_respect_cuts
from .rooted import RootedTree

DENSE_LIMIT = 5000


def adjacency_matrix(g: WeightedGraph) -> np.ndarray:
    a = np.bincount(g.u * g.n + g.v, weights=g.w, minlength=g.n * g.n)
    a += np.bincount(g.v * g.n + g.u, weights=g.w, minlength=g.n * g.n)
    return a.reshape(g.n, g.n)


@jit
def _subtree_cross_kernel(a, order, parent):
    # two rounds of row-wise treefix, transposing in between
    m = a.copy()
    n = len(order)
    for rnd in range(2):
        for i in range(n - 1, 0, -1):
            x = order[i]
            p = parent[x]
            for j in range(n):
                m[p, j] += m[x, j]
        if rnd == 0:
            m = m.T.copy()
    return m


def _subtree_cross_numpy(a, rt):
    n = rt.n
    s = np.zeros((n + 1, n + 1))
    p = a[np.ix_(rt.order, rt.order)]
    np.cumsum(np.cumsum(p, axis=0), axis=1, out=s[1:, 1:])
    lo, hi = rt.tin, rt.tout
    return (s[np.ix_(hi, hi)] - s[np.ix_(lo, hi)]
            - s[np.ix_(hi, lo)] + s[np.ix_(lo, lo)])


def subtree_cross_weights(rt: RootedTree, g: WeightedGraph) -> np.ndarray:
    """``M[v, w]`` = weight between the subtrees of ``v`` and ``w``.

    Edges inside an overlap are counted twice, so ``M[v, v] = 2 * lca_down[v]``.
    """
    a = adjacency_matrix(g)
    if _accel.USE_NUMBA:
        return _subtree_cross_kernel(a, rt.order, rt.parent)
    return _subtree_cross_numpy(a, rt)


@dataclass(frozen=True)
class PairCutTable:
    """Cut values for every pair of tree edges, named by their child vertices.

    ``values[v, w]`` is symmetric. Entries are ``inf`` on the diagonal and in
    the root's row and column. ``comparable[v, w]`` is True when one vertex
    lies in the other's subtree.
    """

    rt: RootedTree
    values: np.ndarray
    comparable: np.ndarray
    cross: np.ndarray
    one: OneRespectTable
    best_value: float
    best_pair: tuple[int, int]

    @property
    def min_value(self) -> float:
        """Minimum over pairs and single tree edges."""
        return min(self.best_value, self.one.best_value)

    def best_edges(self) -> tuple[int, ...]:
        if self.one.best_value <= self.best_value:
            return (self.one.best_vertex,)
        return self.best_pair

    def side(self, *vertices: int) -> np.ndarray:
        return induced_side(self.rt, vertices)


def induced_side(rt: RootedTree, children: Sequence[int]) -> np.ndarray:
    """Bipartition obtained by cutting the parent edges of ``children``.

    A vertex's side is the parity of cut edges on its root path.
    """
    parity = np.zeros(rt.n + 1, dtype=np.int8)
    for c in children:
        parity[rt.tin[c]] ^= 1
        parity[rt.tout[c]] ^= 1
    flips = np.bitwise_xor.accumulate(parity[:-1])
    side = np.empty(rt.n, dtype=bool)
    side[rt.order] = flips.astype(bool)
    return side


def two_respect_dense(rt: RootedTree, g: WeightedGraph,
                      one: OneRespectTable | None = None,
                      dense_limit: int = DENSE_LIMIT) -> PairCutTable:
    """Theta(n^2) table of every 2-respecting cut value."""
    n = g.n
    if n > dense_limit:
        raise TooLargeError(
            f"n={n} exceeds the dense limit {dense_limit}; use the sparse solver")
    if one is None:
        one = one_respect_cuts(rt, g)
    cross = subtree_cross_weights(rt, g)
    c = one.cut
    tin, tout = rt.tin, rt.tout
    # desc[v, w]: v lies in w's subtree
    desc = (tin[None, :] <= tin[:, None]) & (tin[:, None] < tout[None, :])
    comparable = desc | desc.T
    with np.errstate(invalid="ignore"):
        incomp = c[:, None] + c[None, :] - 2.0 * cross
        nested = c[None, :] - c[:, None] + 2.0 * (cross - 2.0 * one.lca_down[:, None])
        np.fill_diagonal(desc, False)
        values = np.where(comparable, np.inf, incomp)
        values = np.where(desc, nested, values)
        values = np.where(desc.T, nested.T, values)
    values[rt.root, :] = np.inf
    values[:, rt.root] = np.inf
    np.fill_diagonal(values, np.inf)
    if n > 2:
        flat = int(np.argmin(values))
        v, w = divmod(flat, n)
        best = float(values[v, w])
        pair = (min(v, w), max(v, w))
    else:
        best, pair = float("inf"), (-1, -1)
    values.setflags(write=False)
    return PairCutTable(rt, values, comparable, cross, one, best, pair)


# -- near-minimum cut representation -----------------------------------------

@dataclass(frozen=True)
class CutEntry:
    value: float
    side: np.ndarray
    tree_id: int
    tree_edges: tuple[tuple[int, int], ...]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "side": "".join("1" if b else "0" for b in self.side),
            "tree_id": self.tree_id,
            "tree_edges": [list(e) for e in self.tree_edges],
        }


@dataclass
class CutRepresentation:
    """Near-minimum cuts recorded against the trees that respect them."""

    trees: list[RootedTree]
    alpha: float
    max_edges: int
    best_value: float
    entries: list[CutEntry] = field(default_factory=list)
    index: dict[bytes, CutEntry] = field(default_factory=dict)
    by_tree: list[dict[frozenset, CutEntry]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> str:
        return json.dumps([e.to_dict() for e in self.entries])


def _triple_candidates(rt: RootedTree, g: WeightedGraph, limit: float):
    """Singletons, pairs and triples of tree edges with induced value <= limit.

    Uses the crossing matrix X[e, v] (edge e has one end in v's subtree):
    the cut of a symmetric difference of subtrees follows from the
    inclusion-exclusion of XOR, ``x^y^z = x+y+z-2(xy+yz+xz)+4xyz``.
    """
    ins = (rt.tin[None, :] <= rt.tin[:, None]) & (rt.tin[:, None] < rt.tout[None, :])
    x = ins[g.u] ^ ins[g.v]
    xf = x.astype(np.float64)
    j = (xf * g.w[:, None]).T @ xf
    c1 = np.diag(j).copy()
    verts = np.array([v for v in range(rt.n) if v != rt.root], dtype=np.int64)
    out = []
    tol = 1e-9 * max(1.0, abs(limit))
    for a in verts:
        if c1[a] <= limit + tol:
            out.append(((int(a),), float(c1[a])))
    for ia, a in enumerate(verts):
        for ib in range(ia + 1, len(verts)):
            b = verts[ib]
            pv = c1[a] + c1[b] - 2.0 * j[a, b]
            if pv <= limit + tol:
                out.append(((int(a), int(b)), float(pv)))
            both = x[:, a] & x[:, b]
            rest = verts[ib + 1:]
            if not len(rest):
                continue
            tri = g.w[both] @ xf[both][:, rest] if both.any() else np.zeros(len(rest))
            vals = (c1[a] + c1[b] + c1[rest]
                    - 2.0 * (j[a, b] + j[b, rest] + j[a, rest]) + 4.0 * tri)
            for k in np.flatnonzero(vals <= limit + tol):
                out.append(((int(a), int(b), int(rest[k])), float(vals[k])))
    return out


def _pair_candidates(table: PairCutTable, limit: float):
    tol = 1e-9 * max(1.0, abs(limit))
    out = []
    for v in np.flatnonzero(table.one.cut <= limit + tol):
        out.append(((int(v),), float(table.one.cut[v])))
    vv, ww = np.nonzero(np.triu(table.values <= limit + tol, 1))
    for v, w in zip(vv.tolist(), ww.tolist()):
        out.append(((v, w), float(table.values[v, w])))
    return out


def enumerate_near_min(g: WeightedGraph, trees: Sequence[RootedTree], alpha: float) -> CutRepresentation:
    """Record every cut of value <= alpha * (best found) that crosses at most
    ``floor(2 alpha)`` edges of one of ``trees``.

    Pairs suffice for ``alpha < 3/2``. Triples (``floor(2 alpha) == 3``) are
    supported for ``n <= 300``; larger ``alpha`` raises :class:`TooLargeError`.
    """
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    k = math.floor(2 * alpha)
    if k > 3:
        raise TooLargeError(f"floor(2*alpha)={k} edge sets are not supported; use the exhaustive enumerator")
    if k == 3 and g.n > 300:
        raise TooLargeError("triple-edge representation is limited to n <= 300")

    best = math.inf
    raw = []
    for tid, rt in enumerate(trees):
        table = two_respect_dense(rt, g)
        # threshold from the best so far; re-filtered once all trees are seen
        best = min(best, table.min_value)
        if k <= 2:
            cands = _pair_candidates(table, alpha * best)
        else:
            cands = _triple_candidates(rt, g, alpha * best)
        raw.append((tid, rt, cands))

    rep = CutRepresentation(list(trees), alpha, k, best, by_tree=[{} for _ in trees])
    limit = alpha * best
    tol = 1e-9 * max(1.0, abs(limit))
    for tid, rt, cands in raw:
        for children, value in cands:
            if value > limit + tol:
                continue
            side = induced_side(rt, children)
            if side[0]:
                side = ~side
            sig = signature(side)
            edges = tuple((c, int(rt.parent[c])) for c in children)
            entry = rep.index.get(sig)
            if entry is None:
                entry = CutEntry(value, side, tid, edges)
                rep.index[sig] = entry
                rep.entries.append(entry)
            rep.by_tree[tid][frozenset(children)] = entry
    return rep


def lookup_cut(rep: CutRepresentation, side, use_index: bool = True) -> float | None:
    """Value of a recorded near-minimum cut, or ``None``.

    With ``use_index`` the partition is hashed directly; otherwise each tree
    is checked for a small set of crossing tree edges.
    """
    s = np.asarray(side, dtype=bool)
    if use_index:
        entry = rep.index.get(signature(s))
        return None if entry is None else entry.value
    for tid, rt in enumerate(rep.trees):
        kids = np.flatnonzero((rt.parent >= 0) & (s != s[np.maximum(rt.parent, 0)]))
        if 0 < len(kids) <= rep.max_edges:
            entry = rep.by_tree[tid].get(frozenset(kids.tolist()))
            if entry is not None:
                return entry.value
    return None
