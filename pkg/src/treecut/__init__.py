"""Minimum cuts of weighted undirected graphs via spanning-tree packing.

A packing of spanning trees is built on a sparse random sample of the graph;
for a few of its trees, the smallest cut crossing at most two tree edges is
found exactly. Some tree crosses the minimum cut at most twice with good
probability, so the best of these cuts is the minimum cut.
"""
from ._accel import BACKEND
from .driver import RunConfig, RunReport, fat_heuristic, find_mincut, find_mincut_refined
from .errors import (DisconnectedGraphError, GraphFormatError, InternalError, InvalidCutError,
                     SkeletonError, TooLargeError, TreecutError)
from .graph import (ContractionMap, Cut, WeightedGraph, contract, cut_value, merge_parallel,
                    parse_graph, read_graph, weighted_degree, write_graph)
from .oracle import (CountingBound, TightnessWitness, enumerate_alpha_cuts_exhaustive,
                     mincut_deterministic, mincut_exhaustive, qk_bound, tightness_witness)
from .packing import SpanningTree, TreePacking, distinct_trees, pack_trees, sample_tree
from .pathagg import PathAggregator
from .respect1 import OneRespectTable, one_respect_cuts, path_one_respect
from .respect2_dense import (CutRepresentation, PairCutTable, enumerate_near_min, lookup_cut,
                             two_respect_dense)
from .respect2_sparse import (PrecutState, boughs, comparable_pass, local_update,
                              min_precut_bough, two_respect_sparse)
from .rooted import RootedTree, incomparable, lca_all_edges, root_tree, treefix_sum
from .skeleton import Skeleton, build_skeleton, sample_multiplicity

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ContractionMap", "CountingBound", "Cut", "CutRepresentation",
    "DisconnectedGraphError", "GraphFormatError", "InternalError", "InvalidCutError",
    "OneRespectTable", "PairCutTable", "PathAggregator", "PrecutState", "RootedTree",
    "RunConfig", "RunReport", "Skeleton", "SkeletonError", "SpanningTree", "TightnessWitness",
    "TooLargeError", "TreePacking", "TreecutError", "WeightedGraph", "boughs", "build_skeleton",
    "comparable_pass", "contract", "cut_value", "distinct_trees", "enumerate_alpha_cuts_exhaustive",
    "enumerate_near_min", "fat_heuristic", "find_mincut", "find_mincut_refined", "incomparable",
    "lca_all_edges", "local_update", "lookup_cut", "merge_parallel", "min_precut_bough",
    "mincut_deterministic", "mincut_exhaustive", "one_respect_cuts", "pack_trees", "parse_graph",
    "path_one_respect", "qk_bound", "read_graph", "root_tree", "sample_multiplicity", "sample_tree",
    "tightness_witness", "treefix_sum", "two_respect_dense", "two_respect_sparse",
    "weighted_degree", "write_graph",
]
