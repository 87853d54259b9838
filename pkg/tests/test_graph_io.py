"""Tests for the JSON graph file format."""

import json
from fractions import Fraction

import pytest

from core.errors import GraphError
from core.graph import WeightedGraph, graphs_equal
from utils.graph_io import graph_from_dict, graph_to_dict, load_graph, save_graph


def write(tmp_path, data, name="g.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
    return path


def test_load_qubit_graph(tmp_path):
    path = write(tmp_path, {"n": 3, "modulus": 2, "edges": [[0, 1, 1], [1, 2, 3]]})
    g = load_graph(path)
    assert g.modulus == 2
    assert g.weight(1, 2) == 1


def test_load_real_graph_with_rational_strings(tmp_path):
    path = write(tmp_path, {"n": 2, "modulus": None, "edges": [[0, 1, "-3/4"]]})
    g = load_graph(path)
    assert g.modulus is None
    assert g.weight(0, 1) == Fraction(-3, 4)


def test_missing_modulus_means_real(tmp_path):
    g = load_graph(write(tmp_path, {"n": 2, "edges": [[0, 1, 0.25]]}))
    assert g.modulus is None
    assert g.weight(0, 1) == Fraction(1, 4)


def test_save_then_load(tmp_path):
    g = WeightedGraph.from_edges(3, [(0, 1, Fraction(2, 3)), (1, 2, 5)])
    save_graph(g, tmp_path / "out.json")
    assert graphs_equal(load_graph(tmp_path / "out.json"), g)
    assert graph_to_dict(g)["edges"] == [[0, 1, "2/3"], [1, 2, 5]]


@pytest.mark.parametrize("data, message", [
    ({"edges": []}, "missing 'n'"),
    ({"n": 2}, "missing 'edges'"),
    ({"n": 2, "edges": [[1, 0, 1]]}, "j < k"),
    ({"n": 2, "edges": [[0, 1, 1], [0, 1, 1]]}, "Duplicate"),
    ({"n": 2, "edges": [[0, 1]]}, r"\[j, k, w\]"),
    ({"n": 2, "edges": [[0, 1, True]]}, "number"),
    ({"n": 2, "edges": [[0, 1, "1/0"]]}, "rational"),
    ({"n": 2, "edges": [[0, 1, "abc"]]}, "rational"),
    ({"n": 2, "modulus": "2", "edges": []}, "modulus"),
    ({"n": 2.5, "edges": []}, "'n'"),
])
def test_malformed_documents(data, message):
    with pytest.raises(GraphError, match=message):
        graph_from_dict(data)


def test_invalid_json(tmp_path):
    with pytest.raises(GraphError, match="not valid JSON"):
        load_graph(write(tmp_path, "{not json"))


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_graph(tmp_path / "absent.json")
