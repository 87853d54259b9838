"""
Graph file format: UTF-8 JSON {"n": int, "modulus": int | null, "edges": [[j, k, w], ...]}
with j < k. Weights are integers, floats or "p/q" strings; unlisted pairs are zero.
"""

import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Union

from core.errors import GraphError
from core.graph import WeightedGraph

logger = logging.getLogger(__name__)


def _parse_weight(raw):
    if isinstance(raw, bool):
        raise GraphError(f"Edge weight must be a number, got {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, float):
        if not math.isfinite(raw):
            raise GraphError(f"Edge weight {raw!r} is not finite")
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw.strip())
        except (ValueError, ZeroDivisionError):
            raise GraphError(f"Edge weight {raw!r} is not a rational number") from None
    raise GraphError(f"Edge weight must be a number or 'p/q' string, got {raw!r}")


def _parse_index(raw, name: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise GraphError(f"Edge endpoint {name} must be an integer, got {raw!r}")
    return raw


def graph_from_dict(data: dict) -> WeightedGraph:
    """
    Raises:
        GraphError: missing keys, j >= k, duplicate pairs or malformed weights
    """
    if not isinstance(data, dict):
        raise GraphError("Graph document must be a JSON object")
    for key in ('n', 'edges'):
        if key not in data:
            raise GraphError(f"Graph document is missing '{key}'")
    n = data['n']
    modulus = data.get('modulus')
    if isinstance(n, bool) or not isinstance(n, int):
        raise GraphError(f"'n' must be an integer, got {n!r}")
    if modulus is not None and (isinstance(modulus, bool) or not isinstance(modulus, int)):
        raise GraphError(f"'modulus' must be an integer or null, got {modulus!r}")
    if not isinstance(data['edges'], list):
        raise GraphError("'edges' must be a list")

    edges = []
    for entry in data['edges']:
        if not isinstance(entry, list) or len(entry) != 3:
            raise GraphError(f"Each edge must be [j, k, w], got {entry!r}")
        j, k = _parse_index(entry[0], 'j'), _parse_index(entry[1], 'k')
        if j >= k:
            raise GraphError(f"Edge [{j}, {k}] must satisfy j < k")
        edges.append((j, k, _parse_weight(entry[2])))
    return WeightedGraph.from_edges(n, edges, modulus)


def _weight_to_json(w):
    if isinstance(w, Fraction):
        return int(w) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"
    return int(w)


def graph_to_dict(g: WeightedGraph) -> dict:
    return {
        'n': g.n,
        'modulus': g.modulus,
        'edges': [[j, k, _weight_to_json(w)] for j, k, w in g.edges()],
    }


def load_graph(path: Union[str, Path]) -> WeightedGraph:
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise GraphError(f"{path} is not valid JSON: {e}") from e
    g = graph_from_dict(data)
    logger.debug("Loaded graph with %d vertices, %d edges from %s", g.n, len(g.edges()), path)
    return g


def save_graph(g: WeightedGraph, path: Union[str, Path]):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(graph_to_dict(g), f, indent=2)
