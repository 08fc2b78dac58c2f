"""Small graph families used by tests, benchmarks and the CLI."""
from __future__ import annotations

import itertools

import numpy as np

from .graph import WeightedGraph


def cycle(n: int, weight: float = 1.0) -> WeightedGraph:
    return WeightedGraph(n, np.arange(n), (np.arange(n) + 1) % n, np.full(n, float(weight)))


def path(n: int, weight: float = 1.0) -> WeightedGraph:
    return WeightedGraph(n, np.arange(n - 1), np.arange(1, n), np.full(n - 1, float(weight)))


def star(leaves: int, weight: float = 1.0) -> WeightedGraph:
    return WeightedGraph(leaves + 1, np.zeros(leaves), np.arange(1, leaves + 1),
                         np.full(leaves, float(weight)))


def complete(n: int, weight: float = 1.0) -> WeightedGraph:
    pairs = list(itertools.combinations(range(n), 2))
    return WeightedGraph.from_edges(n, [(a, b, weight) for a, b in pairs])


def two_cliques(k: int, bridge: float = 0.5) -> WeightedGraph:
    """Two unit K_k joined by a single edge of weight ``bridge``."""
    edges = [(a, b) for a, b in itertools.combinations(range(k), 2)]
    edges += [(a + k, b + k) for a, b in itertools.combinations(range(k), 2)]
    edges.append((0, k, bridge))
    return WeightedGraph.from_edges(2 * k, edges)


def random_connected(n: int, extra: int, rng: np.random.Generator,
                     weights: str = "unit", high: int = 10) -> WeightedGraph:
    """Random spanning tree plus ``extra`` uniform random edges.

    ``weights`` is ``"unit"``, ``"int"`` (1..high-1) or ``"real"``.
    """
    perm = rng.permutation(n)
    par = (rng.random(n - 1) * np.arange(1, n)).astype(np.int64)
    u = np.r_[perm[1:], rng.integers(0, n, extra)]
    v = np.r_[perm[par], rng.integers(0, n, extra)]
    if weights == "unit":
        w = np.ones(len(u))
    elif weights == "int":
        w = rng.integers(1, high, len(u)).astype(np.float64)
    elif weights == "real":
        w = np.round(rng.uniform(0.1, 5.0, len(u)), 3)
    else:
        raise ValueError(f"unknown weight kind {weights!r}")
    return WeightedGraph(n, u, v, w)


def cycle_plus_matching(n: int, rng: np.random.Generator, weight: float = 1.0) -> WeightedGraph:
    """A Hamiltonian cycle plus a random perfect matching: 3-regular-ish (n even)."""
    if n % 2:
        raise ValueError("n must be even")
    perm = rng.permutation(n)
    u = np.r_[np.arange(n), perm[0::2]]
    v = np.r_[(np.arange(n) + 1) % n, perm[1::2]]
    return WeightedGraph(n, u, v, np.full(len(u), float(weight)))


def sparse_random(m: int, rng: np.random.Generator, density: int = 5) -> WeightedGraph:
    """Unit-weight connected graph with ``n = m / density`` vertices and ``m`` edges."""
    n = max(2, m // density)
    return random_connected(n, m - (n - 1), rng)
