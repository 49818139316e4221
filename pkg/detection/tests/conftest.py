import numpy as np
import pytest

from signal_model.likelihoods import SignalModel


def random_tables(rng, n, m, alphabet=3):
    """Strictly positive random likelihood tables, one m x alphabet table per agent."""
    return [0.9 * rng.dirichlet(np.ones(alphabet), size=m) + 0.1 / alphabet for _ in range(n)]


@pytest.fixture
def random_model():
    """Factory fixture: a random identifiable model with n agents and m states."""

    def build(n, m, seed=0):
        rng = np.random.default_rng(seed)
        return SignalModel.from_tables(random_tables(rng, n, m))

    return build
