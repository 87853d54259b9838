"""Shared fixtures for the test suite."""

import numpy as np
import pytest

from core.graph import WeightedGraph
import utils.config
from utils.config import DEFAULT_CONFIG, MAX_AMPS_ENV, load_config


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def no_amplitude_override(monkeypatch):
    """Tests never inherit a cap from the calling shell"""
    monkeypatch.delenv(MAX_AMPS_ENV, raising=False)


@pytest.fixture(autouse=True)
def default_active_config(monkeypatch):
    """Configs loaded by one test do not leak into the next"""
    monkeypatch.setattr(utils.config, '_active_config', DEFAULT_CONFIG)


@pytest.fixture
def config(tmp_path, monkeypatch) -> dict:
    """Built-in defaults, independent of any config.yaml in the working directory"""
    monkeypatch.chdir(tmp_path)
    return load_config()


@pytest.fixture
def edge() -> WeightedGraph:
    return WeightedGraph.from_edges(2, [(0, 1)], modulus=2)


@pytest.fixture
def path3() -> WeightedGraph:
    """0 - 1 - 2"""
    return WeightedGraph.from_edges(3, [(0, 1), (1, 2)], modulus=2)


@pytest.fixture
def star4() -> WeightedGraph:
    """Center 0 with leaves 1, 2, 3"""
    return WeightedGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)], modulus=2)


@pytest.fixture
def triangle() -> WeightedGraph:
    return WeightedGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)], modulus=2)
