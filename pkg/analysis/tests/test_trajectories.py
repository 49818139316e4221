import math

import numpy as np
import pytest

from analysis.montecarlo import trial_generators
from analysis.trajectories import (
    TrajectoryRecord,
    consistency_time,
    cost_curve,
    empirical_rate_slope,
    first_underflow,
    kl_cost,
    potential_gap_bound_holds,
    record_trajectory,
    simulate_trajectory,
)
from core.exceptions import DimensionMismatch, UnderflowWindow


def synthetic_record(log_tv):
    """A one-agent record whose only meaningful column is the TV error."""
    log_tv = np.asarray(log_tv, dtype=float)[:, None]
    zeros = np.zeros_like(log_tv)
    return TrajectoryRecord(
        tv_error=np.exp(log_tv),
        log_tv_error=log_tv,
        kl_increment=zeros,
        centralized_tv_error=zeros[:, 0],
        log_potential_gap_bound=log_tv,
        identity_deviation=zeros[:, 0],
        eta=1.0,
    )


class TestRecordTrajectory:
    """For testing per-step metrics"""

    def test_single_kl_term(self):
        phi = np.zeros((1, 1, 2))
        central = np.log([[0.25, 0.75]])
        record = record_trajectory(phi, central, 1.0, 0)
        assert record.kl_increment[0, 0] == pytest.approx(0.143841, abs=1e-6)
        assert kl_cost(record, 0, 1) == pytest.approx(0.5 * math.log(2) + 0.5 * math.log(2 / 3))
        assert record.tv_error[0, 0] == pytest.approx(0.5)
        assert record.centralized_tv_error[0] == pytest.approx(0.75)

    def test_agents_matching_the_center_cost_nothing(self):
        central = np.cumsum(np.tile([0.1, -0.4, 0.2], (30, 1)), axis=0)
        phi = np.repeat(central[:, None, :], 3, axis=1)
        record = record_trajectory(phi, central, 0.7, 2)
        assert np.all(cost_curve(record, 1) <= 1e-14)
        assert kl_cost(record, 2, 30) <= 1e-14
        assert record.identity_deviation.max() <= 1e-12

    def test_tv_never_underflows_in_log_record(self):
        phi = np.array([[[2000.0, 0.0]]])
        record = record_trajectory(phi, phi[:, 0, :], 1.0, 0)
        assert record.tv_error[0, 0] == 0.0
        assert record.log_tv_error[0, 0] == pytest.approx(-2000.0)
        assert first_underflow(record, 0) == 1


class TestSimulatedTrajectory:
    """For testing a full two-engine run"""

    @pytest.fixture
    def record(self, reference_scenario):
        signal_rng, network_rng = trial_generators(11, 0)
        return simulate_trajectory(
            reference_scenario.model, reference_scenario.process, 400, 1.0,
            signal_rng, network_rng, seed=11, trial=0,
        )

    def test_ranges(self, record):
        assert record.tv_error.shape == (400, 4)
        assert np.all((record.tv_error >= 0) & (record.tv_error <= 1))
        assert np.all(record.kl_increment >= 0)
        assert np.all((record.centralized_tv_error >= 0) & (record.centralized_tv_error <= 1))

    def test_cost_is_nondecreasing(self, record):
        for i in range(4):
            assert np.all(np.diff(cost_curve(record, i)) >= 0)
            assert kl_cost(record, i, 400) == pytest.approx(cost_curve(record, i)[-1])

    def test_potential_gap_bound(self, record):
        assert potential_gap_bound_holds(record)

    def test_average_potential_identity(self, record):
        assert record.identity_deviation.max() <= 1e-8

    def test_same_generators_same_record(self, reference_scenario, record):
        signal_rng, network_rng = trial_generators(11, 0)
        again = simulate_trajectory(
            reference_scenario.model, reference_scenario.process, 400, 1.0, signal_rng, network_rng,
        )
        assert np.array_equal(again.log_tv_error, record.log_tv_error)
        assert np.array_equal(again.kl_increment, record.kl_increment)

    def test_cost_horizon_checked(self, record):
        with pytest.raises(DimensionMismatch):
            kl_cost(record, 0, 401)


class TestEmpiricalRateSlope:
    """For testing the fitted exponential rate"""

    def test_exact_exponential(self):
        t = np.arange(1, 201)
        assert empirical_rate_slope(synthetic_record(-0.3 * t), 0, (20, 200)) == pytest.approx(-0.3, abs=1e-9)

    def test_constant(self):
        assert empirical_rate_slope(synthetic_record(np.full(50, -2.0)), 0, (1, 50)) == pytest.approx(0.0, abs=1e-12)

    def test_underflow_inside_window(self):
        record = synthetic_record(-2.0 * np.arange(1, 501))
        assert first_underflow(record, 0) is not None
        with pytest.raises(UnderflowWindow):
            empirical_rate_slope(record, 0, (100, 500))
        assert empirical_rate_slope(record, 0, (100, first_underflow(record, 0) - 1)) == pytest.approx(-2.0)

    @pytest.mark.parametrize("window", [(0, 10), (10, 10), (5, 60)])
    def test_bad_window(self, window):
        with pytest.raises(DimensionMismatch):
            empirical_rate_slope(synthetic_record(np.zeros(50)), 0, window)


class TestConsistencyTime:
    """For testing the first time TV error drops below the threshold"""

    def test_crossing(self):
        record = synthetic_record(-0.5 * np.arange(1, 101))
        # ln(1e-6) = -13.8155...
        assert consistency_time(record, 0) == 28

    def test_never_crosses(self):
        assert consistency_time(synthetic_record(np.full(10, -1.0)), 0) is None
