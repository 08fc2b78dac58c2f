"""Smallest cut that 2-respects a tree in O(m log^2 n) (up to the log factor
of the heavy-path aggregator).

Each round processes every bough of the current tree twice with the path
aggregator: once for incomparable pairs (v in the bough, w elsewhere) and once
for nested pairs (w an ancestor of v). The boughs are then contracted into
their attachment vertices, which at least halves the number of leaves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._accel import jit
from .errors import InternalError
from .graph import ContractionMap, Cut, WeightedGraph, contract, merge_parallel
from .pathagg import PathAggregator, _less, path_add, path_min, seg_build
from .respect1 import OneRespectTable, one_respect_cuts
from .respect2_dense import induced_side
from .rooted import RootedTree, treefix_sum

INCOMPARABLE, NESTED, SINGLE = 0, 1, 2


def boughs(rt: RootedTree) -> list[np.ndarray]:
    """Maximal upward chains starting at leaves, each listed leaf first.

    A chain stops below the first vertex with two or more children and never
    includes the root.
    """
    if rt.n < 2:
        return []
    branching = treefix_sum(rt, (rt.num_children >= 2).astype(np.int64))
    chain = branching == 0
    chain[rt.root] = False
    verts = rt.order[chain[rt.order]]
    if len(verts) == 0:
        return []
    # chains are contiguous in preorder, top first
    par = rt.parent[verts]
    top = ~chain[par] | (par < 0)
    starts = np.flatnonzero(top)
    ends = np.append(starts[1:], len(verts))
    return [verts[s:e][::-1].copy() for s, e in zip(starts, ends)]


def _pack_boughs(bl: list[np.ndarray]):
    ptr = np.zeros(len(bl) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(b) for b in bl])
    verts = np.concatenate(bl) if bl else np.zeros(0, np.int64)
    return verts.astype(np.int64), ptr


@jit
def _round_kernel(indptr, nbr, wts, parent, head, tin, order, cut_c, cut_v,
                  rho_down, bverts, bptr, minpre_c, minpre_v, minpre_w):
    n = len(parent)
    c0 = np.empty(n, np.int64)
    v0 = np.empty(n)
    for i in range(n):
        c0[i] = cut_c[order[i]]
        v0[i] = cut_v[order[i]]
    seg = seg_build(c0, v0)
    cap = len(bverts) + len(nbr) + 1
    log_v = np.empty(cap, np.int64)
    log_a = np.empty(cap, np.int64)
    log_b = np.empty(cap)
    best = np.inf
    best_v = -1
    best_w = -1
    best_kind = -1
    touched = 0
    ops = 0
    for b in range(len(bptr) - 1):
        # incomparable pairs: markers become precut(v, .)
        k = 0
        cc = np.int64(1) << np.int64(60)
        cx = np.inf
        cp = np.int64(1) << np.int64(60)
        for idx in range(bptr[b], bptr[b + 1]):
            v = bverts[idx]
            touched += path_add(seg, head, parent, tin, v, 1, 0.0)
            log_v[k] = v
            log_a[k] = 1
            log_b[k] = 0.0
            k += 1
            for j in range(indptr[v], indptr[v + 1]):
                x = -2.0 * wts[j]
                touched += path_add(seg, head, parent, tin, nbr[j], 0, x)
                log_v[k] = nbr[j]
                log_a[k] = 0
                log_b[k] = x
                k += 1
            for j in range(indptr[v], indptr[v + 1]):
                c, x, p = path_min(seg, head, parent, tin, nbr[j])
                ops += 1
                if _less(c, x, p, cc, cx, cp):
                    cc, cx, cp = c, x, p
            ops += 1 + indptr[v + 1] - indptr[v]
            minpre_c[v] = cc
            minpre_v[v] = cx
            minpre_w[v] = order[cp] if cc == 0 else -1
            if cc == 0 and cut_c[v] == 0:
                cand = cut_v[v] + cx
                if cand < best:
                    best = cand
                    best_v = v
                    best_w = order[cp]
                    best_kind = 0
        for i in range(k - 1, -1, -1):
            touched += path_add(seg, head, parent, tin, log_v[i], -log_a[i], -log_b[i])
        ops += k

        # nested pairs: marker(w) = C(w's subtree) + 2 * cross(v, w)
        k = 0
        for idx in range(bptr[b], bptr[b + 1]):
            v = bverts[idx]
            for j in range(indptr[v], indptr[v + 1]):
                x = 2.0 * wts[j]
                touched += path_add(seg, head, parent, tin, nbr[j], 0, x)
                log_v[k] = nbr[j]
                log_a[k] = 0
                log_b[k] = x
                k += 1
            c, x, p = path_min(seg, head, parent, tin, parent[v])
            ops += 1 + indptr[v + 1] - indptr[v]
            if c == 0 and cut_c[v] == 0:
                cand = x - cut_v[v] - 4.0 * rho_down[v]
                if cand < best:
                    best = cand
                    best_v = v
                    best_w = order[p]
                    best_kind = 1
        for i in range(k - 1, -1, -1):
            touched += path_add(seg, head, parent, tin, log_v[i], -log_a[i], -log_b[i])
        ops += k
    return best, best_v, best_w, best_kind, touched, ops


@dataclass
class SparseStats:
    """Per-round bookkeeping. ``vanished`` counts edges folded away by merging
    parallel edges after contraction; ``cutover_round`` is the first round
    whose leaf count is at most m/n (only recorded when requested)."""

    leaves: list[int] = field(default_factory=list)
    boughs: list[int] = field(default_factory=list)
    vertices: list[int] = field(default_factory=list)
    edges: list[int] = field(default_factory=list)
    vanished: list[int] = field(default_factory=list)
    path_ops: list[int] = field(default_factory=list)
    segment_touches: list[int] = field(default_factory=list)
    cutover_round: int | None = None

    @property
    def rounds(self) -> int:
        return len(self.leaves)


def _csr(g: WeightedGraph):
    indptr, nbr, eid = g.adjacency
    return indptr, nbr, np.ascontiguousarray(g.w[eid])


def two_respect_sparse(rt: RootedTree, g: WeightedGraph, stats: SparseStats | None = None,
                       track_cutover: bool = False) -> Cut:
    """Minimum cut crossing at most two edges of ``rt``.

    The partition is reported in ``g``'s vertex ids. Pass a
    :class:`SparseStats` to collect per-round counters.
    """
    if rt.n != g.n:
        raise ValueError("tree and graph have different vertex counts")
    if g.n < 2:
        raise ValueError("a cut needs at least two vertices")
    stats = stats if stats is not None else SparseStats()
    g_cur = merge_parallel(g)
    rt_cur = rt
    lifted = ContractionMap.identity(g.n)

    one = one_respect_cuts(rt_cur, g_cur)
    best_value = one.best_value
    best_side = rt_cur.subtree_mask(one.best_vertex)
    cutover_at = g.m / g.n

    while rt_cur.n > 1:
        if stats.rounds:
            one = one_respect_cuts(rt_cur, g_cur)
        leaves = len(rt_cur.leaves)
        bl = boughs(rt_cur)
        bverts, bptr = _pack_boughs(bl)
        n = rt_cur.n
        cut_c = np.where(np.isinf(one.cut), 1, 0).astype(np.int64)
        cut_v = np.where(np.isinf(one.cut), 0.0, one.cut)
        mc = np.zeros(n, np.int64)
        mv = np.zeros(n)
        mw = np.zeros(n, np.int64)
        indptr, nbr, wts = _csr(g_cur)
        val, v, w, kind, touched, ops = _round_kernel(
            indptr, nbr, wts, rt_cur.parent, rt_cur.head, rt_cur.tin, rt_cur.order,
            cut_c, cut_v, np.asarray(one.lca_down, dtype=np.float64), bverts, bptr, mc, mv, mw)
        stats.leaves.append(leaves)
        stats.boughs.append(len(bl))
        stats.vertices.append(n)
        stats.edges.append(g_cur.m)
        stats.path_ops.append(int(ops))
        stats.segment_touches.append(int(touched))
        if track_cutover and stats.cutover_round is None and leaves <= cutover_at:
            stats.cutover_round = stats.rounds - 1
        if val < best_value:
            best_value = float(val)
            best_side = lifted.lift(induced_side(rt_cur, (int(v), int(w))))

        # fold every bough into the vertex it hangs from
        in_bough = np.zeros(n, dtype=bool)
        in_bough[bverts] = True
        keep = np.flatnonzero(~in_bough)
        label = np.full(n, -1, dtype=np.int64)
        label[keep] = np.arange(len(keep))
        for chain in bl:
            label[chain] = label[rt_cur.parent[chain[-1]]]
        cmap = ContractionMap(label)
        g_next = contract(g_cur, cmap, merge_parallel_edges=False)
        merged = merge_parallel(g_next)
        stats.vanished.append(g_next.m - merged.m)
        new_parent = np.full(len(keep), -1, dtype=np.int64)
        kp = rt_cur.parent[keep]
        has = kp >= 0
        new_parent[np.flatnonzero(has)] = label[kp[has]]
        rt_next = RootedTree.from_parent(new_parent)
        new_leaves = len(rt_next.leaves)
        if leaves and new_leaves > leaves // 2:
            raise InternalError(f"leaf count went from {leaves} to {new_leaves}")
        g_cur, rt_cur = merged, rt_next
        lifted = lifted.then(cmap)

    return Cut(best_side, best_value)


# -- step-by-step interface, used for testing against the definitions ---------

class PrecutState:
    """Markers initialised to the 1-respect values of ``rt`` on ``g``."""

    def __init__(self, rt: RootedTree, g: WeightedGraph, one: OneRespectTable | None = None) -> None:
        self.rt = rt
        self.g = merge_parallel(g)
        self.one = one if one is not None else one_respect_cuts(rt, self.g)
        self.agg = PathAggregator(rt, self.one.cut)
        indptr, nbr, wts = _csr(self.g)
        self._indptr, self._nbr, self._wts = indptr, nbr, wts

    def neighbors(self, v: int):
        s, e = self._indptr[v], self._indptr[v + 1]
        return self._nbr[s:e].tolist(), self._wts[s:e].tolist()


def local_update(state: PrecutState, v: int) -> tuple[float, int]:
    """Move markers from precut(child of v, .) to precut(v, .).

    Returns the smallest marker on the root paths of v's neighbours and the
    vertex holding it (-1 when there is none).
    """
    agg = state.agg
    agg.add_path(v, math.inf)
    nb, ws = state.neighbors(v)
    for u, w in zip(nb, ws):
        agg.add_path(u, -2.0 * w)
    best, arg = math.inf, -1
    for u in nb:
        val, at = agg.min_path(u)
        if val < best or (val == best and arg != -1 and state.rt.tin[at] < state.rt.tin[arg]):
            best, arg = val, at
    return best, (arg if math.isfinite(best) else -1)


def min_precut_bough(state: PrecutState, bough) -> tuple[np.ndarray, np.ndarray]:
    """Minimum precut for each bough vertex, leaf first; markers restored."""
    agg = state.agg
    agg.checkpoint()
    vals = np.empty(len(bough))
    wit = np.empty(len(bough), dtype=np.int64)
    carry, carry_w = math.inf, -1
    for i, v in enumerate(bough):
        val, at = local_update(state, int(v))
        if val < carry:
            carry, carry_w = val, at
        vals[i], wit[i] = carry, carry_w
    agg.rollback()
    return vals, wit


def comparable_pass(state: PrecutState, bough) -> tuple[float, int, int]:
    """Best cut of the form (w's subtree minus v's subtree), v in ``bough``.

    Returns ``(value, v, w)``; markers are restored afterwards.
    """
    agg = state.agg
    one = state.one
    agg.checkpoint()
    best = (math.inf, -1, -1)
    for v in bough:
        v = int(v)
        nb, ws = state.neighbors(v)
        for u, w in zip(nb, ws):
            agg.add_path(u, 2.0 * w)
        p = int(state.rt.parent[v])
        if p < 0:
            continue
        val, at = agg.min_path(p)
        if math.isfinite(val):
            cand = val - one.cut[v] - 4.0 * one.lca_down[v]
            if cand < best[0]:
                best = (float(cand), v, at)
    agg.rollback()
    return best
