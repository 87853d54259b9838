"""
Exact weighted graphs and local complementation.

Weights are stored exactly: plain ints reduced mod d when the graph carries a
modulus (qubit graphs use d = 2, qudit graphs d), Fractions otherwise (CV graphs).
Every operation returns a new graph; WeightedGraph values are never mutated.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational, Real
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from core.errors import GraphError, PreconditionError

Weight = Union[int, Fraction]
Edge = Tuple[int, int, Weight]


class PauliBasis(Enum):
    """Single-qubit Pauli measurements with a graph-level rule"""
    Z = "Z"
    Y = "Y"


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Real):
        if not np.isfinite(float(value)):
            raise GraphError(f"Edge weight {value!r} is not finite")
        return Fraction(float(value))
    raise GraphError(f"Unsupported edge weight {value!r}")


def _normalize_weight(value, modulus: Optional[int]) -> Weight:
    if modulus is not None and isinstance(value, (int, np.integer)):
        return int(value) % modulus
    if modulus is None and type(value) is Fraction:
        return value
    w = _as_fraction(value)
    if modulus is None:
        return w
    if w.denominator != 1:
        raise GraphError(f"Weight {w} is not an integer but the graph has modulus {modulus}")
    return int(w.numerator) % modulus


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric adjacency matrix with zero diagonal and optional weight modulus"""
    n: int
    weights: Tuple[Tuple[Weight, ...], ...]
    modulus: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise GraphError(f"Vertex count must be a positive integer, got {self.n!r}")
        if self.modulus is not None and (not isinstance(self.modulus, (int, np.integer)) or self.modulus < 1):
            raise GraphError(f"Modulus must be a positive integer or None, got {self.modulus!r}")
        if len(self.weights) != self.n or any(len(row) != self.n for row in self.weights):
            raise GraphError(f"Weight matrix must be {self.n}x{self.n}")

        rows = tuple(
            tuple(_normalize_weight(w, self.modulus) for w in row) for row in self.weights
        )
        for j in range(self.n):
            if rows[j][j] != 0:
                raise GraphError(f"Diagonal entry ({j},{j}) must be zero, got {rows[j][j]}")
            for k in range(j + 1, self.n):
                if rows[j][k] != rows[k][j]:
                    raise GraphError(
                        f"Weight matrix is not symmetric at ({j},{k}): {rows[j][k]} != {rows[k][j]}"
                    )
        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'weights', rows)

    @classmethod
    def empty(cls, n: int, modulus: Optional[int] = None) -> "WeightedGraph":
        return cls(n, tuple((0,) * n for _ in range(n)), modulus)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence], modulus: Optional[int] = None) -> "WeightedGraph":
        """
        Build a graph from (j, k) or (j, k, w) tuples; missing weights default to 1.

        Raises:
            GraphError: out-of-range endpoints, self loops or duplicate pairs
        """
        matrix = [[0] * n for _ in range(n)]
        seen = set()
        for edge in edges:
            if len(edge) == 2:
                j, k, w = edge[0], edge[1], 1
            elif len(edge) == 3:
                j, k, w = edge
            else:
                raise GraphError(f"Edge must be (j, k) or (j, k, w), got {edge!r}")
            j, k = int(j), int(k)
            if not (0 <= j < n and 0 <= k < n):
                raise GraphError(f"Edge ({j},{k}) out of range for n={n}")
            if j == k:
                raise GraphError(f"Self loop at vertex {j}")
            pair = (min(j, k), max(j, k))
            if pair in seen:
                raise GraphError(f"Duplicate pair {pair}")
            seen.add(pair)
            matrix[j][k] = w
            matrix[k][j] = w
        return cls(n, tuple(tuple(row) for row in matrix), modulus)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, modulus: Optional[int] = None,
                      weight: str = 'weight') -> "WeightedGraph":
        """Nodes are relabelled to 0..n-1 in sorted order; unweighted edges get weight 1"""
        nodes = sorted(graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = [(index[u], index[v], data.get(weight, 1)) for u, v, data in graph.edges(data=True)]
        return cls.from_edges(len(nodes), edges, modulus)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        for j, k, w in self.edges():
            graph.add_edge(j, k, weight=w)
        return graph

    def weight(self, j: int, k: int) -> Weight:
        return self.weights[j][k]

    def edges(self) -> List[Edge]:
        """Nonzero entries as (j, k, w) with j < k"""
        return [
            (j, k, self.weights[j][k])
            for j in range(self.n) for k in range(j + 1, self.n)
            if self.weights[j][k] != 0
        ]

    def as_array(self) -> np.ndarray:
        """Float copy of the adjacency matrix"""
        return np.array([[float(w) for w in row] for row in self.weights], dtype=float)

    def _check_vertex(self, v: int):
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n:
            raise GraphError(f"Vertex {v!r} out of range [0, {self.n})")


@dataclass(frozen=True)
class LcParams:
    """One local complementation step: vertex l and weight delta"""
    vertex: int
    delta: Weight = 1

    def validate(self, n: int):
        if not 0 <= self.vertex < n:
            raise GraphError(f"LC vertex {self.vertex} out of range [0, {n})")


def _with_rows(g: WeightedGraph, rows: List[List[Weight]], n: Optional[int] = None) -> WeightedGraph:
    return WeightedGraph(g.n if n is None else n, tuple(tuple(row) for row in rows), g.modulus)


def neighborhood(g: WeightedGraph, l: int) -> frozenset:
    g._check_vertex(l)
    return frozenset(k for k in range(g.n) if k != l and g.weights[l][k] != 0)


def degree(g: WeightedGraph, v: int) -> int:
    return len(neighborhood(g, v))


def is_unweighted(g: WeightedGraph) -> bool:
    return all(w == 1 for _, _, w in g.edges())


def leaf_pairs(g: WeightedGraph) -> List[Tuple[int, int]]:
    """All (m, r) where r has exactly one neighbor, m"""
    pairs = []
    for r in range(g.n):
        nbrs = neighborhood(g, r)
        if len(nbrs) == 1:
            pairs.append((next(iter(nbrs)), r))
    return pairs


def local_complement(g: WeightedGraph, l: int, delta: Weight = 1) -> WeightedGraph:
    """
    Add delta to the weight of every unordered pair {j, k} inside N_l.

    Entries outside N_l x N_l are copied unchanged; the result is reduced mod d
    when g carries a modulus.
    """
    nbrs = sorted(neighborhood(g, l))
    if delta == 0 or len(nbrs) < 2:
        return g
    step = _normalize_weight(delta, g.modulus)
    rows = [list(row) for row in g.weights]
    for a, j in enumerate(nbrs):
        for k in nbrs[a + 1:]:
            rows[j][k] = rows[j][k] + step
            rows[k][j] = rows[j][k]
    return _with_rows(g, rows)


def weighted_local_complement(g: WeightedGraph, l: int, delta: Weight = 1) -> WeightedGraph:
    """
    Weighted rule: Γ'_jk = Γ_jk + delta * Γ_jl * Γ_lk for distinct j, k in N_l.

    Equals local_complement when every edge at l has weight 1.
    """
    nbrs = sorted(neighborhood(g, l))
    step = _normalize_weight(delta, g.modulus)
    rows = [list(row) for row in g.weights]
    for a, j in enumerate(nbrs):
        for k in nbrs[a + 1:]:
            rows[j][k] = rows[j][k] + step * g.weights[j][l] * g.weights[l][k]
            rows[k][j] = rows[j][k]
    return _with_rows(g, rows)


def apply_lc_sequence(g: WeightedGraph, steps: Iterable[LcParams]) -> WeightedGraph:
    for step in steps:
        step.validate(g.n)
        g = local_complement(g, step.vertex, step.delta)
    return g


def check_swap_precondition(g: WeightedGraph, m: int, r: int):
    """
    Raises:
        PreconditionError: naming the first violated condition
    """
    g._check_vertex(m)
    g._check_vertex(r)
    if m == r:
        raise PreconditionError(f"m and r must differ (both {m})")
    if not is_unweighted(g):
        raise PreconditionError("graph is not unweighted (some nonzero weight differs from 1)")
    nbrs = neighborhood(g, r)
    if len(nbrs) != 1:
        raise PreconditionError(f"vertex r={r} has degree {len(nbrs)}, expected 1")
    if m not in nbrs:
        raise PreconditionError(f"the only neighbor of r={r} is {next(iter(nbrs))}, not m={m}")


def swap_by_lc(g: WeightedGraph, m: int, r: int) -> WeightedGraph:
    """LC(m, +1) followed by LC(r, -1); exchanges m and r when r is a leaf of m"""
    check_swap_precondition(g, m, r)
    return apply_lc_sequence(g, (LcParams(m, 1), LcParams(r, -1)))


def transposition(n: int, a: int, b: int) -> List[int]:
    pi = list(range(n))
    pi[a], pi[b] = pi[b], pi[a]
    return pi


def permute(g: WeightedGraph, pi: Union[Sequence[int], Dict[int, int]]) -> WeightedGraph:
    """Relabel vertex j as pi[j]: weights'[pi[j]][pi[k]] = weights[j][k]"""
    if isinstance(pi, dict):
        if set(pi) != set(range(g.n)):
            raise GraphError(f"Permutation keys {sorted(pi)} do not cover range({g.n})")
        images = [pi[j] for j in range(g.n)]
    else:
        images = list(pi)
    if len(images) != g.n or sorted(images) != list(range(g.n)):
        raise GraphError(f"Permutation {images} is not a bijection on range({g.n})")
    rows = [[0] * g.n for _ in range(g.n)]
    for j in range(g.n):
        for k in range(g.n):
            rows[images[j]][images[k]] = g.weights[j][k]
    return _with_rows(g, rows)


def graphs_equal(g1: WeightedGraph, g2: WeightedGraph) -> bool:
    return g1.n == g2.n and g1.modulus == g2.modulus and g1.weights == g2.weights


def max_weight_difference(g1: WeightedGraph, g2: WeightedGraph) -> float:
    """Largest per-entry |w1 - w2|; inf when the graphs are not comparable"""
    if g1.n != g2.n or g1.modulus != g2.modulus:
        return float('inf')
    return float(np.max(np.abs(g1.as_array() - g2.as_array())))


def graphs_close(g1: WeightedGraph, g2: WeightedGraph, atol: float = 1e-10) -> bool:
    return max_weight_difference(g1, g2) < atol


def delete_vertex(g: WeightedGraph, v: int) -> WeightedGraph:
    """Remove v and its edges; vertices above v shift down by one"""
    g._check_vertex(v)
    if g.n == 1:
        raise GraphError("Cannot delete the only vertex of a graph")
    keep = [j for j in range(g.n) if j != v]
    rows = [[g.weights[j][k] for k in keep] for j in keep]
    return _with_rows(g, rows, n=g.n - 1)


def measure_graph(g: WeightedGraph, v: int, basis: PauliBasis) -> WeightedGraph:
    """
    Graph left on the unmeasured qubits after a Pauli measurement of v, up to
    local Clifford corrections: Z deletes v, Y complements at v and then deletes it.
    """
    if g.modulus != 2:
        raise PreconditionError(f"graph measurement rules need a qubit graph (modulus 2), got {g.modulus}")
    if basis is PauliBasis.Y:
        g = local_complement(g, v, 1)
    return delete_vertex(g, v)


def sequential_wire_graphs(k: int, modulus: Optional[int] = 2) -> List[WeightedGraph]:
    """
    Graphs produced while memory 0 interacts with flying registers 1..k, each
    interaction followed by the swap of memory and register.

    Returns one graph per interaction; the last one is the path 1-2-...-k-0.
    """
    if k < 1:
        raise GraphError(f"Need at least one flying register, got {k}")
    g = WeightedGraph.empty(k + 1, modulus)
    history = []
    for i in range(1, k + 1):
        rows = [list(row) for row in g.weights]
        rows[0][i] = rows[i][0] = 1
        g = swap_by_lc(_with_rows(g, rows), 0, i)
        history.append(g)
    return history
