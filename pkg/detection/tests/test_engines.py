import itertools
import math

import numpy as np
import pytest

from core.exceptions import DegenerateInputs, DegenerateNetwork, DimensionMismatch
from detection.engines import (
    CentralizedState,
    DecentralizedState,
    beliefs,
    centralized_belief,
    centralized_path,
    centralized_step,
    closed_form_phi,
    decentralized_path,
    decentralized_step,
    expected_closed_form_phi,
    theorem1_learning_rate,
)
from network.graphs import graph_from_family
from network.matrices import MixingMatrix, metropolis_matrix
from network.processes import GossipProcess
from signal_model.likelihoods import (
    SignalModel,
    SignalSample,
    expected_log_marginals,
    log_bound,
    log_marginal_matrix,
    sample_path,
    sample_step,
)

INFORMATIVE = [[0.8, 0.2], [0.2, 0.8]]
UNINFORMATIVE = [[0.5, 0.5], [0.5, 0.5]]


def gossip_run(model, steps, seed):
    """Symbols, log-marginals and gossip draws for one seeded run on a cycle."""
    signal_rng, network_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    process = GossipProcess(graph_from_family("cycle", model.n))
    symbols = sample_path(model, signal_rng, steps)
    matrices = [process.draw(network_rng) for _ in range(steps)]
    return symbols, log_marginal_matrix(model, symbols), matrices


class TestCentralizedStep:
    """For testing the centralized update"""

    def test_first_step(self):
        model = SignalModel.from_tables([INFORMATIVE, INFORMATIVE])
        state = centralized_step(CentralizedState.initial(2), SignalSample([0, 0]), model)
        assert state.t == 1
        assert np.allclose(state.phi, [math.log(0.8), math.log(0.2)])
        assert np.allclose(centralized_belief(state).probs, [0.8, 0.2])

    def test_uninformative_agents_stay_uniform(self):
        model = SignalModel.from_tables([UNINFORMATIVE, UNINFORMATIVE], require_identifiable=False)
        state = CentralizedState.initial(2)
        rng = np.random.default_rng(1)
        for _ in range(50):
            state = centralized_step(state, sample_step(model, rng), model)
        assert centralized_belief(state).probs.tolist() == [0.5, 0.5]

    def test_increments_add_up(self):
        model = SignalModel.from_tables([INFORMATIVE, UNINFORMATIVE])
        sample = SignalSample([1, 0])
        once = centralized_step(CentralizedState.initial(2), sample, model)
        twice = centralized_step(once, sample, model)
        assert np.allclose(twice.phi, 2 * once.phi)
        assert twice.t == 2


class TestDecentralizedStep:
    """For testing the decentralized update"""

    @pytest.fixture
    def model(self):
        return SignalModel.from_tables([INFORMATIVE, [[0.6, 0.4], [0.3, 0.7]]])

    @pytest.mark.parametrize("w", [MixingMatrix.identity(2), MixingMatrix.uniform(2)])
    def test_first_step_ignores_mixing(self, model, w):
        sample = SignalSample([1, 0])
        state = decentralized_step(DecentralizedState.initial(2, 2), w, sample, model)
        assert np.array_equal(state.phi, log_marginal_matrix(model, sample))

    def test_identity_runs_isolated_agents(self, model):
        rng = np.random.default_rng(7)
        symbols = sample_path(model, rng, 30)
        state = DecentralizedState.initial(2, 2)
        for row in symbols:
            state = decentralized_step(state, MixingMatrix.identity(2), SignalSample(row), model)
        assert np.allclose(state.phi, log_marginal_matrix(model, symbols).sum(axis=0))

    def test_perfect_mixing_two_steps(self, model):
        first, second = SignalSample([0, 1]), SignalSample([1, 1])
        w = MixingMatrix.uniform(2)
        state = DecentralizedState.initial(2, 2)
        state = decentralized_step(state, w, first, model)
        state = decentralized_step(state, w, second, model)
        psi1 = log_marginal_matrix(model, first)
        psi2 = log_marginal_matrix(model, second)
        expected = psi2 + 0.5 * (psi1[0] + psi1[1])
        assert np.allclose(state.phi, expected, atol=1e-12)
        for i in range(2):
            assert np.allclose(closed_form_phi([w, w], [psi1, psi2], i), expected[i], atol=1e-12)

    def test_dimension_mismatch(self, model):
        with pytest.raises(DimensionMismatch):
            decentralized_step(DecentralizedState.initial(2, 2), MixingMatrix.identity(3), SignalSample([0, 0]), model)


class TestBeliefs:
    """For testing belief readout"""

    def test_zero_potentials_are_uniform(self):
        for mu in beliefs(DecentralizedState.initial(3, 4)):
            assert np.allclose(mu.probs, 0.25)

    def test_single_row(self):
        state = DecentralizedState(phi=np.array([[0.0, math.log(2)], [0.0, 0.0]]))
        assert np.allclose(beliefs(state)[0].probs, [1 / 3, 2 / 3])

    def test_scaling_against_learning_rate(self):
        phi = np.array([[0.3, -1.2, 2.0], [1.0, 1.0, -4.0]])
        original = beliefs(DecentralizedState(phi=phi, eta=0.5))
        scaled = beliefs(DecentralizedState(phi=4 * phi, eta=0.125))
        for a, b in zip(original, scaled):
            assert np.allclose(a.probs, b.probs, atol=1e-12)

    def test_beliefs_stay_positive(self, random_model):
        model = random_model(4, 3)
        _, psis, matrices = gossip_run(model, 200, seed=3)
        phi = decentralized_path(psis, matrices)[-1]
        for mu in beliefs(DecentralizedState(phi=phi, t=200)):
            assert np.all(mu.probs > 0)


class TestClosedForm:
    """For testing the closed-form potential against the recursion"""

    def test_single_step(self, random_model):
        model = random_model(3, 2)
        _, psis, matrices = gossip_run(model, 1, seed=5)
        assert np.allclose(closed_form_phi(matrices, psis, 2), psis[0, 2])

    def test_gossip_instance(self, random_model):
        model = random_model(4, 3, seed=11)
        symbols, psis, matrices = gossip_run(model, 20, seed=11)
        state = DecentralizedState.initial(4, 3)
        for row, w in zip(symbols, matrices):
            state = decentralized_step(state, w, SignalSample(row), model)
        oracle = np.stack([closed_form_phi(matrices, psis, i) for i in range(4)])
        assert np.allclose(oracle, state.phi, rtol=0, atol=1e-9)
        assert np.allclose(oracle.mean(axis=0), centralized_path(psis)[-1], rtol=0, atol=1e-9)

    @pytest.mark.parametrize("n, steps, seed", [
        (2, 1, 0), (3, 17, 1), (4, 50, 2), (5, 33, 3), (6, 50, 4),
    ])
    def test_matches_path_recursion(self, random_model, n, steps, seed):
        model = random_model(n, 3, seed=seed)
        _, psis, matrices = gossip_run(model, steps, seed=seed)
        history = decentralized_path(psis, matrices)
        for i in range(n):
            assert np.allclose(closed_form_phi(matrices, psis, i), history[-1, i], rtol=0, atol=1e-8)

    def test_rejects_short_matrix_list(self, random_model):
        model = random_model(3, 2)
        _, psis, matrices = gossip_run(model, 4, seed=0)
        with pytest.raises(DimensionMismatch):
            closed_form_phi(matrices[:3], psis, 0)
        with pytest.raises(DimensionMismatch):
            decentralized_path(psis, matrices[:3])

    def test_expected_potential_average(self, random_model):
        model = random_model(5, 3, seed=2)
        w = metropolis_matrix(graph_from_family("path", 5))
        expected = np.stack([expected_closed_form_phi(model, [w] * 12, i) for i in range(5)])
        assert np.allclose(expected.mean(axis=0), 12 * expected_log_marginals(model).mean(axis=0))


class TestAveragePotentialIdentity:
    """For testing that averaged agent potentials track the centralized potential"""

    def test_identity_over_long_run(self, random_model):
        model = random_model(5, 4, seed=21)
        _, psis, matrices = gossip_run(model, 1_000, seed=21)
        decentralized = decentralized_path(psis, matrices)
        centralized = centralized_path(psis)
        assert np.abs(decentralized.mean(axis=1) - centralized).max() <= 1e-8

    def test_potential_growth_bound(self, random_model):
        model = random_model(4, 3, seed=8)
        _, psis, matrices = gossip_run(model, 300, seed=8)
        history = decentralized_path(psis, matrices)
        t = np.arange(1, 301)[:, None, None]
        assert np.all(np.abs(history) <= log_bound(model) * t + 1e-9)

    def test_generator_of_draws(self, random_model):
        model = random_model(3, 2, seed=4)
        process = GossipProcess(graph_from_family("cycle", 3))
        psis = log_marginal_matrix(model, sample_path(model, np.random.default_rng(0), 25))
        rng = np.random.default_rng(9)
        draws = (process.draw(rng) for _ in itertools.count())
        assert decentralized_path(psis, draws).shape == (25, 3, 2)


class TestTheorem1LearningRate:
    """For testing the prescribed learning rate"""

    def test_value(self):
        assert theorem1_learning_rate(1.0, 2, 0.0) == pytest.approx(1 / (16 * math.log(2)))
        assert theorem1_learning_rate(1.0, 2, 0.0) == pytest.approx(0.090169, abs=1e-6)

    def test_shrinks_as_gap_closes(self):
        rates = [theorem1_learning_rate(2.0, 5, s) for s in (0.0, 0.5, 0.9, 0.999)]
        assert rates == sorted(rates, reverse=True)

    @pytest.mark.parametrize("n, s", [(1, 0.0), (3, 1.0)])
    def test_degenerate_network(self, n, s):
        with pytest.raises(DegenerateNetwork):
            theorem1_learning_rate(1.0, n, s)

    def test_nonpositive_bound(self):
        with pytest.raises(DegenerateInputs):
            theorem1_learning_rate(0.0, 3, 0.5)
