import numpy as np
import pytest

from network.graphs import Graph, graph_from_family


@pytest.fixture
def path3():
    """Fixture for the path graph 0-1-2."""
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    """Fixture for the 3-cycle."""
    return graph_from_family("cycle", 3)


@pytest.fixture
def single_edge():
    """Fixture for two agents joined by one edge."""
    return Graph.from_edges(2, [(0, 1)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
