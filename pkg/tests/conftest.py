import pytest

from analysis.montecarlo import trial_generators
from analysis.trajectories import simulate_trajectory
from experiments.services import load_scenario


def simulate_seeds(scenario, seeds, horizon=None):
    """One trajectory per trial index, seeded the way the lab seeds trials."""
    eta = scenario.learning_rate("simulate")
    records = []
    for trial in seeds:
        signal_rng, network_rng = trial_generators(scenario.seed, trial)
        records.append(simulate_trajectory(
            scenario.model, scenario.process, horizon or scenario.horizon, eta,
            signal_rng, network_rng, seed=scenario.seed, trial=trial,
        ))
    return records


@pytest.fixture(scope="module")
def reference_prop1():
    """Fixture for the shipped reference scenario (gossip on a 4-cycle, T=5000)."""
    return load_scenario("reference_prop1")


@pytest.fixture(scope="module")
def reference_runs(reference_prop1):
    """Fixture for 20 full-horizon trajectories of the reference scenario."""
    return simulate_seeds(reference_prop1, range(20))


@pytest.fixture
def simulate_trials():
    """Fixture to provide the seeded trajectory helper."""
    return simulate_seeds
