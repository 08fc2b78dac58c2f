"""Reference solvers and cut-counting formulas.

Nothing here is fast; these exist so the real solvers have something
independent to be checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._accel import jit
from .errors import InternalError, TooLargeError
from .graph import Cut, WeightedGraph
from .respect2_dense import adjacency_matrix

EXHAUSTIVE_LIMIT = 20


def all_cut_values(g: WeightedGraph) -> np.ndarray:
    """Value of every bipartition with vertex 0 on side A.

    Entry ``mask`` has vertex ``i`` (``i >= 1``) on side B iff bit ``i - 1`` is
    set. Entry 0 is the trivial partition. Built one vertex at a time, so
    the cost is O(2^n) additions.
    """
    n = g.n
    if n > EXHAUSTIVE_LIMIT:
        raise TooLargeError(f"exhaustive search is limited to n <= {EXHAUSTIVE_LIMIT}")
    a = adjacency_matrix(g)
    vals = np.zeros(1)
    for i in range(1, n):
        # weight from i to earlier B-side vertices, for every earlier mask
        to_b = np.zeros(1)
        for j in range(1, i):
            to_b = np.concatenate([to_b, to_b + a[i, j]])
        earlier = a[i, :i].sum()
        vals = np.concatenate([vals + to_b, vals + earlier - to_b])
    return vals


def _mask_side(n: int, mask: int) -> np.ndarray:
    side = np.zeros(n, dtype=bool)
    side[1:] = (mask >> np.arange(n - 1)) & 1
    return side


def mincut_exhaustive(g: WeightedGraph) -> Cut:
    """Exact minimum over all 2^(n-1) - 1 bipartitions (n <= 20)."""
    if g.n < 2:
        raise ValueError("a cut needs at least two vertices")
    vals = all_cut_values(g)
    best = 1 + int(np.argmin(vals[1:]))
    return Cut(_mask_side(g.n, best), float(vals[best]))


def enumerate_alpha_cuts_exhaustive(g: WeightedGraph, alpha: float, rtol: float = 1e-9) -> list[Cut]:
    """Every bipartition of value at most ``alpha`` times the minimum."""
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if g.n < 2:
        return []
    vals = all_cut_values(g)[1:]
    limit = alpha * vals.min()
    masks = 1 + np.flatnonzero(vals <= limit + rtol * max(abs(limit), 1.0))
    cuts = [Cut(_mask_side(g.n, int(k)), float(vals[k - 1])) for k in masks]
    cuts.sort(key=lambda c: (c.value, c.bitstring()))
    return cuts


@jit
def _stoer_wagner(a):
    n = a.shape[0]
    a = a.copy()
    active = np.ones(n, np.bool_)
    owner = np.arange(n)
    best = np.inf
    best_side = np.zeros(n, np.bool_)
    conn = np.zeros(n)
    added = np.zeros(n, np.bool_)
    for phase in range(n - 1):
        conn[:] = 0.0
        added[:] = False
        prev = -1
        last = -1
        for _ in range(n - phase):
            sel = -1
            top = -1.0
            for v in range(n):
                if active[v] and not added[v] and conn[v] > top:
                    top = conn[v]
                    sel = v
            added[sel] = True
            prev = last
            last = sel
            for v in range(n):
                if active[v] and not added[v]:
                    conn[v] += a[sel, v]
        if conn[last] < best:
            best = conn[last]
            for v in range(n):
                best_side[v] = owner[v] == last
        # merge last into prev
        for v in range(n):
            a[prev, v] += a[last, v]
            a[v, prev] += a[v, last]
        a[prev, prev] = 0.0
        active[last] = False
        for v in range(n):
            if owner[v] == last:
                owner[v] = prev
    return best, best_side


def mincut_deterministic(g: WeightedGraph) -> Cut:
    """Maximum-adjacency-order contraction on a dense matrix, O(n^3)."""
    g.require_connected()
    if g.n < 2:
        raise ValueError("a cut needs at least two vertices")
    value, side = _stoer_wagner(adjacency_matrix(g))
    return Cut(side, float(value))


# -- counting bound -------------------------------------------------------------

@dataclass(frozen=True)
class CountingBound:
    n: int
    alpha: float
    k: int
    q_k: float
    best_k: int
    best_q: float
    table: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"n": self.n, "alpha": self.alpha, "k": self.k, "q_k": self.q_k,
                "best_k": self.best_k, "best_q": self.best_q,
                "table": {str(k): v for k, v in self.table.items()}}


def q_value(n: int, alpha: float, k: int) -> float:
    """``sum_{r<=k} (k+1-r) C(n,r) / (k+1-2 alpha)``; the numerator is exact."""
    den = k + 1 - 2 * alpha
    if den <= 0:
        raise ValueError(f"k={k} is too small for alpha={alpha}")
    num = sum((k + 1 - r) * math.comb(n, r) for r in range(1, k + 1))
    return num / den


def qk_bound(n: int, alpha: float, span: int = 8) -> CountingBound:
    """q_k at ``k = floor(2 alpha)`` and the smallest q_k for k up to ``span`` more."""
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if n < 2:
        raise ValueError("n must be at least 2")
    k0 = math.floor(2 * alpha)
    table = {k: q_value(n, alpha, k) for k in range(k0, k0 + span + 1)}
    best_k = min(table, key=lambda k: (table[k], k))
    return CountingBound(n, float(alpha), k0, table[k0], best_k, table[best_k], table)


@dataclass(frozen=True)
class TightnessWitness:
    n: int
    alpha: float
    c: float
    k: int
    q_k: float
    counts: np.ndarray          # counts[r - 1] is n_r, r = 1..k+1
    checks: dict
    ratio: float

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def tightness_witness(n: int, alpha: float, c: float, check: bool = True,
                      rtol: float = 1e-9) -> TightnessWitness:
    """Tree counts that force the cut-counting argument to its q_k bound.

    ``k`` is the minimizer reported by :func:`qk_bound`. With ``check`` set,
    any violated constraint raises :class:`InternalError`.
    """
    b = qk_bound(n, alpha)
    k, q = b.best_k, b.best_q
    binom = np.array([math.comb(n, r) for r in range(1, k + 2)], dtype=np.float64)
    counts = np.empty(k + 1)
    counts[:k] = c / (2 * q) * binom[:k]
    counts[k] = c / 2 * (1 - binom[:k].sum() / q)
    r = np.arange(1, k + 2)
    tol = rtol * max(abs(c), 1.0)
    cap = c / (2 * q) * binom
    # counting weights w_r = k+1-r for r <= k, zero at r = k+1
    w = np.maximum(k + 1 - r, 0).astype(np.float64)
    ratio = (c / 2) * float(w @ binom) / float(w @ counts)
    checks = {
        "sum_equals_half_c": bool(abs(counts.sum() - c / 2) <= tol),
        "edge_budget": bool(abs(float(r @ counts) - alpha * c) <= tol * max(alpha, 1.0)),
        "nonnegative": bool(np.all(counts >= -tol)),
        "ratio_cap": bool(np.all(counts <= cap + tol)),
        "ratio_at_least_q": bool(ratio >= q * (1 - rtol)),
    }
    wit = TightnessWitness(n, float(alpha), float(c), k, q, counts, checks, ratio)
    if check and not wit.ok:
        bad = [name for name, good in checks.items() if not good]
        raise InternalError(f"witness for n={n}, alpha={alpha} violates {bad}")
    return wit


def cycle_cut_count(n: int, alpha: float) -> int:
    """Cuts of a unit n-cycle with value at most 2 alpha: even j-edge cuts, 2 <= j <= 2 alpha."""
    return sum(math.comb(n, j) for j in range(2, math.floor(2 * alpha) + 1, 2))
