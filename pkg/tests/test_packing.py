import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import minimum_spanning_tree
from scipy.stats import chisquare

from treecut.errors import DisconnectedGraphError
from treecut.generators import complete, cycle, path, two_cliques
from treecut.graph import WeightedGraph, component_count
from treecut.oracle import mincut_exhaustive
from treecut.packing import (distinct_trees, mst_edges, pack_trees, sample_tree,
                             trees_by_weight)

from helpers import graphs


def _check_structure(p):
    g = p.graph
    load = np.zeros(g.m)
    for t, s in zip(p.trees, p.weights):
        assert len(t) == g.n - 1
        sub = WeightedGraph(g.n, g.u[t.edge_ids], g.v[t.edge_ids], np.ones(len(t)))
        assert component_count(sub) == 1
        load[t.edge_ids] += s
    assert np.allclose(load, p.load)
    assert p.is_feasible()
    assert np.all(p.weights > 0)


@given(st.integers(2, 40), st.integers(0, 2 ** 32 - 1))
def test_mst_matches_scipy(n, seed):
    rng = np.random.default_rng(seed)
    g = complete(n)
    length = rng.random(g.m) + 0.01
    ids = mst_edges(n, g.u, g.v, length)
    ref = minimum_spanning_tree(coo_matrix((length, (g.u, g.v)), shape=(n, n))).sum()
    assert len(ids) == n - 1
    assert length[ids].sum() == pytest.approx(ref)


@settings(max_examples=25)
@given(graphs(min_n=2, max_n=9))
def test_packing_is_feasible_and_near_optimal(g):
    eps = 1 / 6
    p = pack_trees(g, eps)
    _check_structure(p)
    c = mincut_exhaustive(g).value
    # the fractional optimum lies in [c/2, c]
    assert p.value <= c * (1 + 1e-9)
    assert p.value >= (1 - eps) * c / 2
    assert p.converged
    assert p.upper_bound >= p.value * (1 - 1e-9)


@pytest.mark.parametrize("g, opt", [
    (cycle(4), 4 / 3),
    (cycle(20), 20 / 19),
    (complete(4), 2.0),
    (complete(6), 3.0),
    (path(5), 1.0),
    (two_cliques(4, bridge=0.5), 0.5),
])
def test_known_fractional_optima(g, opt):
    eps = 1 / 6
    p = pack_trees(g, eps)
    _check_structure(p)
    assert (1 - eps) * opt <= p.value <= opt * (1 + 1e-9)


def test_weighted_path_is_bottleneck():
    g = WeightedGraph(3, [0, 1], [1, 2], [3.0, 7.0])
    p = pack_trees(g, 0.1)
    assert p.value == pytest.approx(3.0)
    assert distinct_trees(p) == 1


def test_zero_weight_edges_skipped():
    g = WeightedGraph(3, [0, 1, 0], [1, 2, 2], [1.0, 1.0, 0.0])
    p = pack_trees(g, 0.1)
    assert p.load[2] == 0
    with pytest.raises(DisconnectedGraphError):
        pack_trees(WeightedGraph(3, [0, 1], [1, 2], [1.0, 0.0]))


def test_parameter_checks():
    with pytest.raises(ValueError):
        pack_trees(cycle(4), 0.0)
    with pytest.raises(ValueError):
        pack_trees(cycle(4), 0.5)
    assert pack_trees(cycle(1)).value == math.inf


def test_deterministic():
    g = complete(7)
    a, b = pack_trees(g), pack_trees(g)
    assert [t.key for t in a.trees] == [t.key for t in b.trees]
    assert np.array_equal(a.weights, b.weights)


def test_trees_by_weight_is_sorted():
    p = pack_trees(complete(6))
    w = {t.key: x for t, x in zip(p.trees, p.weights)}
    ordered = [w[t.key] for t in trees_by_weight(p)]
    assert ordered == sorted(ordered, reverse=True)


def test_sampling_frequencies():
    p = pack_trees(complete(5), 0.1)
    probs = p.weights / p.weights.sum()
    rng = np.random.default_rng(123)
    draws = 20000
    idx = {t.key: i for i, t in enumerate(p.trees)}
    counts = np.zeros(len(p.trees))
    for _ in range(draws):
        counts[idx[sample_tree(p, rng).key]] += 1
    # every tree within 3 standard deviations, and a chi-square test overall
    sd = np.sqrt(draws * probs * (1 - probs))
    assert np.all(np.abs(counts - draws * probs) <= 3 * sd + 1)
    big = probs * draws >= 5
    expected = probs[big] * draws
    observed = counts[big]
    expected *= observed.sum() / expected.sum()
    assert chisquare(observed, expected).pvalue > 1e-3
