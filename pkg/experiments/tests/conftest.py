import copy

import pytest
import yaml
from rest_framework.test import APIClient

PAIR_SCENARIO = {
    "name": "pair",
    "signal_model": {
        "true_state": 0,
        "agents": [
            [[0.8, 0.2], [0.2, 0.8]],
            [[0.8, 0.2], [0.2, 0.8]],
        ],
    },
    "network": {"kind": "metropolis", "n": 2, "edges": [[0, 1]]},
    "horizon": 40,
    "learning_rate": {"mode": "unit"},
    "delta": 0.1,
    "checkpoints": [20],
    "trials": 2,
    "seed": 11,
}


@pytest.fixture
def api_client():
    """Fixture to provide a DRF API client instance."""
    return APIClient()


@pytest.fixture(autouse=True)
def lab_settings(settings, tmp_path):
    """Fixture that sends every result file into the test's temporary directory."""
    settings.DETECTION_LAB = {**settings.DETECTION_LAB, "OUTPUT_ROOT": tmp_path / "results", "DEFAULT_WORKERS": 1}
    return settings.DETECTION_LAB


@pytest.fixture
def scenario_data():
    """Fixture to provide a fresh copy of a two-agent scenario document."""
    return copy.deepcopy(PAIR_SCENARIO)


@pytest.fixture
def write_scenario(tmp_path):
    """Factory fixture: dump a scenario document to YAML and return its path."""

    def write(data, name="scenario.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        return path

    return write
