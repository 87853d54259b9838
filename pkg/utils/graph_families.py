"""
Graph families for the verification suites: every labelled graph on n vertices,
and seeded random graphs built with networkx.
"""

import itertools
from fractions import Fraction
from typing import Iterator, Optional, Tuple

import networkx as nx
import numpy as np

from core.graph import WeightedGraph, leaf_pairs, permute

DEFAULT_EDGE_PROBABILITY = 0.4


def labeled_graphs(n: int, modulus: Optional[int] = 2) -> Iterator[WeightedGraph]:
    """All 2^(n(n-1)/2) unweighted graphs on vertices 0..n-1"""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in itertools.product((0, 1), repeat=len(pairs)):
        yield WeightedGraph.from_edges(n, [p for p, bit in zip(pairs, mask) if bit], modulus)


def graphs_with_leaf(n: int, modulus: Optional[int] = 2,
                     all_pairs: bool = False) -> Iterator[Tuple[WeightedGraph, int, int]]:
    """(g, m, r) for labelled graphs with a degree-1 vertex r adjacent to m"""
    for g in labeled_graphs(n, modulus):
        pairs = leaf_pairs(g)
        for m, r in (pairs if all_pairs else pairs[:1]):
            yield g, m, r


def _seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2 ** 31 - 1))


def random_graph(n: int, rng: np.random.Generator, modulus: Optional[int] = 2,
                 p: float = DEFAULT_EDGE_PROBABILITY) -> WeightedGraph:
    return WeightedGraph.from_networkx(nx.gnp_random_graph(n, p, seed=_seed(rng)), modulus)


def random_graph_with_leaf(n: int, rng: np.random.Generator, modulus: Optional[int] = 2,
                           p: float = DEFAULT_EDGE_PROBABILITY) -> Tuple[WeightedGraph, int, int]:
    """
    Random graph on n - 1 vertices plus a leaf attached to a random vertex, then
    relabelled by a random permutation so the leaf can sit anywhere.

    Returns:
        (g, m, r) with r a leaf of m
    """
    if n < 2:
        raise ValueError(f"Need at least 2 vertices for a leaf, got {n}")
    base = nx.gnp_random_graph(n - 1, p, seed=_seed(rng))
    m, r = int(rng.integers(n - 1)), n - 1
    base.add_edge(m, r)
    g = WeightedGraph.from_networkx(base, modulus)
    pi = [int(x) for x in rng.permutation(n)]
    return permute(g, pi), pi[m], pi[r]


def random_rational(rng: np.random.Generator, max_numerator: int = 5, max_denominator: int = 4) -> Fraction:
    """Nonzero p/q with |p| <= max_numerator, 1 <= q <= max_denominator"""
    numerator = 0
    while numerator == 0:
        numerator = int(rng.integers(-max_numerator, max_numerator + 1))
    return Fraction(numerator, int(rng.integers(1, max_denominator + 1)))


def random_weighted_graph(n: int, rng: np.random.Generator, unit_vertex: Optional[int] = None,
                          p: float = DEFAULT_EDGE_PROBABILITY) -> WeightedGraph:
    """
    Real-weighted (modulus-free) random graph with rational weights; edges at
    unit_vertex, if given, get weight 1.
    """
    topology = nx.gnp_random_graph(n, p, seed=_seed(rng))
    edges = []
    for j, k in sorted(tuple(sorted(e)) for e in topology.edges()):
        w = Fraction(1) if unit_vertex in (j, k) else random_rational(rng)
        edges.append((j, k, w))
    return WeightedGraph.from_edges(n, edges, None)
