"""Per-step records of one simulated run and the statistics read off them."""
import itertools
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from scipy.stats import linregress

from core.exceptions import DimensionMismatch, UnderflowWindow
from detection.engines import centralized_path, decentralized_path
from prob_core.beliefs import kl_from_logs, log_error_to_state, log_gibbs
from signal_model.likelihoods import log_marginal_matrix, sample_path

logger = logging.getLogger(__name__)

CONSISTENCY_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Row t-1 of every array holds step t; per-agent arrays are horizon x n."""

    tv_error: np.ndarray
    log_tv_error: np.ndarray
    kl_increment: np.ndarray
    centralized_tv_error: np.ndarray
    log_potential_gap_bound: np.ndarray
    identity_deviation: np.ndarray
    eta: float
    seed: int = None
    trial: int = None
    config_digest: str = ""

    @property
    def horizon(self):
        return self.tv_error.shape[0]

    @property
    def n(self):
        return self.tv_error.shape[1]


def record_trajectory(phi, central_phi, eta, true_index, **meta):
    """Build a TrajectoryRecord from decentralized (T x n x m) and centralized (T x m) potentials."""
    log_mu = log_gibbs(phi, eta)
    log_mu_central = log_gibbs(central_phi, eta)
    log_tv = log_error_to_state(log_mu, true_index)

    scaled = eta * np.asarray(phi)
    others = np.delete(scaled, true_index, axis=-1)
    gap_bound = logsumexp(others, axis=-1) - scaled[..., true_index]

    return TrajectoryRecord(
        tv_error=np.exp(log_tv),
        log_tv_error=log_tv,
        kl_increment=kl_from_logs(log_mu, log_mu_central[:, None, :]),
        centralized_tv_error=np.exp(log_error_to_state(log_mu_central, true_index)),
        log_potential_gap_bound=gap_bound,
        identity_deviation=np.abs(np.asarray(phi).mean(axis=1) - central_phi).max(axis=-1),
        eta=eta,
        **meta,
    )


def simulate_trajectory(model, process, horizon, eta, signal_rng, network_rng, **meta):
    """Run both engines on one shared signal stream for `horizon` steps."""
    symbols = sample_path(model, signal_rng, horizon)
    psis = log_marginal_matrix(model, symbols)
    draws = (process.draw(network_rng) for _ in itertools.repeat(None))
    phi = decentralized_path(psis, draws)
    central = centralized_path(psis)
    return record_trajectory(phi, central, eta, model.true_index, **meta)


def _check_agent(trajectory, i):
    if not 0 <= i < trajectory.n:
        raise DimensionMismatch(f"agent {i} outside [0, {trajectory.n})")


def cost_curve(trajectory, i):
    """Cost_{i,T} for T = 1..horizon."""
    _check_agent(trajectory, i)
    return np.cumsum(trajectory.kl_increment[:, i])


def kl_cost(trajectory, i, T):
    """Cost_{i,T} = sum_{t<=T} D_KL(mu_{i,t} || mu_t)."""
    if not 1 <= T <= trajectory.horizon:
        raise DimensionMismatch(f"T={T} outside the recorded horizon 1..{trajectory.horizon}")
    return float(cost_curve(trajectory, i)[T - 1])


def potential_gap_bound_holds(trajectory, tol=1e-9):
    """Whether ln TV <= ln sum_{k != 1} exp(eta(phi(k) - phi(1))) at every recorded step."""
    return bool(np.all(trajectory.log_tv_error <= trajectory.log_potential_gap_bound + tol))


def first_underflow(trajectory, i):
    """First t at which agent i's TV error is exactly 0.0, or None."""
    _check_agent(trajectory, i)
    hits = np.flatnonzero(trajectory.tv_error[:, i] == 0.0)
    return int(hits[0]) + 1 if hits.size else None


def consistency_time(trajectory, i, threshold=CONSISTENCY_THRESHOLD):
    """First t at which agent i's TV error drops below threshold, or None."""
    _check_agent(trajectory, i)
    hits = np.flatnonzero(trajectory.log_tv_error[:, i] < np.log(threshold))
    return int(hits[0]) + 1 if hits.size else None


def empirical_rate_slope(trajectory, i, window):
    """Least-squares slope of ln TV error against t over the inclusive window (t1, t2)."""
    _check_agent(trajectory, i)
    t1, t2 = (int(t) for t in window)
    if not 1 <= t1 < t2 <= trajectory.horizon:
        raise DimensionMismatch(f"window ({t1}, {t2}) must satisfy 1 <= t1 < t2 <= {trajectory.horizon}")
    zeros = np.flatnonzero(trajectory.tv_error[t1 - 1:t2, i] <= 0)
    if zeros.size:
        t_zero = t1 + int(zeros[0])
        raise UnderflowWindow(f"TV error of agent {i} underflows to 0 at t={t_zero}, inside ({t1}, {t2})")
    # the log record keeps full precision where tv_error is subnormal
    fit = linregress(np.arange(t1, t2 + 1), trajectory.log_tv_error[t1 - 1:t2, i])
    return float(fit.slope)
