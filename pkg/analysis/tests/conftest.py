import logging

import pytest

from analysis.scenario import Scenario
from network.graphs import graph_from_family
from network.matrices import metropolis_matrix
from network.processes import FixedProcess, GossipProcess
from signal_model.likelihoods import SignalModel

REFERENCE_TABLES = [
    [[0.8, 0.2], [0.2, 0.8], [0.8, 0.2]],
    [[0.8, 0.2], [0.8, 0.2], [0.2, 0.8]],
    [[0.5, 0.5], [0.8, 0.2], [0.5, 0.5]],
    [[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
]


@pytest.fixture(autouse=True)
def propagate_analysis_logs(monkeypatch):
    """Fixture letting caplog see records of the analysis loggers, which do not propagate under LOGGING."""
    monkeypatch.setattr(logging.getLogger("analysis"), "propagate", True)


@pytest.fixture
def reference_model():
    """Fixture for the 4-agent, 3-state reference model (second state 2, rate 0.6 ln 4 / 4)."""
    return SignalModel.from_tables(REFERENCE_TABLES)


@pytest.fixture
def reference_scenario(reference_model):
    """Fixture for gossip on a 4-cycle with a single TV checkpoint at t=300."""
    return Scenario(
        name="reference",
        model=reference_model,
        process=GossipProcess(graph_from_family("cycle", 4)),
        horizon=600,
        delta=0.1,
        checkpoints=(300,),
        trials=100,
        seed=2024,
    )


@pytest.fixture
def cost_scenario():
    """Fixture for Metropolis weights on a 4-cycle with two states."""
    model = SignalModel.from_tables([[[0.7, 0.3], [0.4, 0.6]]] * 4)
    return Scenario(
        name="cost",
        model=model,
        process=FixedProcess(metropolis_matrix(graph_from_family("cycle", 4))),
        horizon=200,
        delta=0.1,
        trials=100,
        seed=7,
    )
