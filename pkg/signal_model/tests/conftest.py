import pytest

from signal_model.likelihoods import SignalModel

INFORMATIVE = [[0.8, 0.2], [0.2, 0.8]]
UNINFORMATIVE = [[0.5, 0.5], [0.5, 0.5]]


@pytest.fixture
def mixed_pair():
    """Fixture for a 2-agent model where only agent 2 tells the states apart."""
    return SignalModel.from_tables([UNINFORMATIVE, INFORMATIVE])


@pytest.fixture
def three_state_model():
    """Fixture for a 3-state model whose rates are 0.4159 (state 1) and 0.1116 (state 2)."""
    return SignalModel.from_tables([
        [[0.8, 0.2], [0.2, 0.8], [0.8, 0.2]],
        [[0.5, 0.5], [0.5, 0.5], [0.2, 0.8]],
    ])
