"""Random sparse skeletons: every unit of edge weight survives independently
with probability ``p``, chosen so the skeleton's minimum cut lands near
``rho = ceil(const * eps^-2 * ln n)``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import SkeletonError
from .graph import WeightedGraph, component_count
from .packing import TreePacking, pack_trees

RHO_CONST = 3.0
WINDOW = (1.0, 6.0)
MAX_ATTEMPTS = 16
ESTIMATE_EPS = 0.25


@dataclass(frozen=True)
class Skeleton:
    graph: WeightedGraph
    epsilon: float
    p: float
    seed: int
    estimated_cprime: float
    rho_target: int
    attempts: int
    edge_map: np.ndarray
    packing: TreePacking | None = None

    @property
    def is_source(self) -> bool:
        """True when no sampling happened and the skeleton is the input graph."""
        return self.p == 1.0 and self.attempts == 0


def rho_target(n: int, epsilon: float, const: float = RHO_CONST) -> int:
    return int(math.ceil(const * math.log(max(n, 2)) / epsilon ** 2))


def sample_multiplicity(w: float, p: float, rng: np.random.Generator) -> int:
    """Surviving copies of a weight-``w`` edge: Binomial(w, p) for integer
    ``w``, Poisson(w p) otherwise."""
    if w < 0 or not 0 < p <= 1:
        raise ValueError("need w >= 0 and 0 < p <= 1")
    if w == 0:
        return 0
    if float(w).is_integer():
        return int(rng.binomial(int(w), p))
    return int(rng.poisson(w * p))


def edge_uniforms(m: int, seed: int, attempt: int) -> np.ndarray:
    """One uniform per edge from a counter-based stream keyed by (seed, attempt).

    Draw ``e`` depends only on the key and ``e``, not on evaluation order.
    """
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, attempt], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key)).random(m)


def multiplicities(w: np.ndarray, p: float, uniforms: np.ndarray) -> np.ndarray:
    """Inverse-CDF version of :func:`sample_multiplicity`, vectorized over edges."""
    if p >= 1.0:
        out = np.where(w == np.round(w), w, 0.0)
        frac = w != np.round(w)
        if frac.any():
            out[frac] = stats.poisson.ppf(uniforms[frac], w[frac])
        return out.astype(np.int64)
    out = np.zeros(len(w), dtype=np.int64)
    whole = w == np.round(w)
    if whole.any():
        out[whole] = stats.binom.ppf(uniforms[whole], w[whole], p)
    if (~whole).any():
        out[~whole] = stats.poisson.ppf(uniforms[~whole], w[~whole] * p)
    return out


def _sample(g: WeightedGraph, p: float, seed: int, attempt: int):
    mult = multiplicities(g.w, p, edge_uniforms(g.m, seed, attempt))
    keep = np.flatnonzero(mult > 0)
    return WeightedGraph(g.n, g.u[keep], g.v[keep], mult[keep].astype(np.float64)), keep


def build_skeleton(g: WeightedGraph, epsilon: float = 1 / 6, seed: int = 0,
                   const: float = RHO_CONST, window: tuple[float, float] = WINDOW) -> Skeleton:
    """Sample a skeleton whose packing estimate of the min cut is within
    ``window`` times the target ``rho``; return ``g`` itself when its min cut
    is already that small.
    """
    if not 0 < epsilon <= 0.25:
        raise ValueError("epsilon must lie in (0, 1/4]")
    g.require_connected()
    rho = rho_target(g.n, epsilon, const)
    everything = np.arange(g.m)
    if g.n < 2:
        return Skeleton(g, epsilon, 1.0, seed, 0.0, rho, 0, everything)
    est = pack_trees(g, ESTIMATE_EPS).value
    if 2 * est <= rho:
        return Skeleton(g, epsilon, 1.0, seed, 2 * est, rho, 0, everything)

    p = min(1.0, rho / est)
    lo, hi = window[0] * rho, window[1] * rho
    attempt = 0
    seen: set[float] = set()
    while True:
        h, keep = _sample(g, p, seed, attempt)
        while component_count(h) != 1:
            attempt += 1
            if attempt >= MAX_ATTEMPTS:
                raise SkeletonError(f"skeleton disconnected after {MAX_ATTEMPTS} attempts at p={p:g}")
            h, keep = _sample(g, p, seed, attempt)
        packing = pack_trees(h, min(epsilon, ESTIMATE_EPS))
        cprime = 2 * packing.value
        seen.add(p)
        if cprime < lo and p < 1.0:
            nxt = min(1.0, 2 * p)
        elif cprime > hi:
            nxt = p / 2
        else:
            break
        if nxt in seen:
            break
        p = nxt
    return Skeleton(h, epsilon, p, seed, cprime, rho, attempt + 1, keep, packing)
