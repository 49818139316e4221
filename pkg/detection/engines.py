"""Centralized and decentralized exponential-weights detection.

The centralized engine accumulates the network-average log-marginal psi_t. The
decentralized engine lets every agent mix its neighbors' potentials through W(t)
before adding its own log-marginal. Potentials start at zero (uniform prior) and
are kept unnormalized; beliefs are formed on demand.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from core.exceptions import DegenerateInputs, DegenerateNetwork, DimensionMismatch
from prob_core.beliefs import gibbs_belief
from signal_model.likelihoods import expected_log_marginals, log_marginal_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CentralizedState:
    """phi_t over m states after t steps."""

    phi: np.ndarray
    t: int = 0
    eta: float = 1.0

    @classmethod
    def initial(cls, m, eta=1.0):
        return cls(phi=np.zeros(m), t=0, eta=eta)


@dataclass(frozen=True, eq=False)
class DecentralizedState:
    """n x m potentials; row i belongs to agent i."""

    phi: np.ndarray
    t: int = 0
    eta: float = 1.0

    @classmethod
    def initial(cls, n, m, eta=1.0):
        return cls(phi=np.zeros((n, m)), t=0, eta=eta)

    @property
    def n(self):
        return self.phi.shape[0]


def centralized_step(state, sample, model):
    psi = log_marginal_matrix(model, sample)
    return CentralizedState(phi=state.phi + psi.mean(axis=0), t=state.t + 1, eta=state.eta)


def decentralized_step(state, w, sample, model):
    """phi_{i,t} = sum_j W_ij(t) phi_{j,t-1} + psi_{i,t}."""
    if w.n != model.n or state.phi.shape != (model.n, model.m):
        raise DimensionMismatch(
            f"state {state.phi.shape}, matrix {w.n}x{w.n} and model n={model.n} m={model.m} disagree"
        )
    psi = log_marginal_matrix(model, sample)
    return DecentralizedState(phi=w @ state.phi + psi, t=state.t + 1, eta=state.eta)


def beliefs(state):
    """mu_{i,t} for every agent."""
    return [gibbs_belief(row, state.eta) for row in state.phi]


def centralized_belief(state):
    return gibbs_belief(state.phi, state.eta)


def centralized_path(psis):
    """phi_t for t = 1..T from a T x n x m stack of log-marginals."""
    return np.cumsum(np.asarray(psis).mean(axis=1), axis=0)


def decentralized_path(psis, matrices):
    """phi_{i,t} for t = 1..T; matrices yields W(1), W(2), ... in order."""
    psis = np.asarray(psis, dtype=float)
    history = np.empty_like(psis)
    phi = np.zeros(psis.shape[1:])
    steps = 0
    for t, w in zip(range(psis.shape[0]), matrices):
        phi = w @ phi + psis[t]
        history[t] = phi
        steps += 1
    if steps < psis.shape[0]:
        raise DimensionMismatch(f"{steps} matrices for {psis.shape[0]} steps")
    return history


def closed_form_phi(matrices, psis, i):
    """phi_{i,t} = sum_tau sum_j [W(t) W(t-1) ... W(tau+1)]_ij psi_{j,tau}.

    The product for tau = t is empty (the identity). Products are formed explicitly
    so the result does not depend on the recursion in decentralized_step.
    """
    matrices = list(matrices)
    psis = np.asarray(psis, dtype=float)
    t = len(matrices)
    if psis.ndim != 3 or psis.shape[0] != t:
        raise DimensionMismatch(f"{t} matrices but log-marginals of shape {psis.shape}")
    n = psis.shape[1]
    if any(w.n != n for w in matrices):
        raise DimensionMismatch(f"mixing matrices do not match {n} agents")
    if not 0 <= i < n:
        raise DimensionMismatch(f"agent {i} outside [0, {n})")

    phi = np.zeros(psis.shape[2])
    product = np.eye(n)
    for tau in range(t, 0, -1):
        phi += product[i] @ psis[tau - 1]
        product = product @ matrices[tau - 1].entries
    return phi


def expected_closed_form_phi(model, matrices, i):
    """closed_form_phi with every psi replaced by its mean under the true state."""
    matrices = list(matrices)
    means = expected_log_marginals(model)
    return closed_form_phi(matrices, np.broadcast_to(means, (len(matrices), *means.shape)), i)


def theorem1_learning_rate(B, n, sigma2_w):
    """eta = (1 - sigma_2(W)) / (16 B ln n)."""
    if n < 2:
        raise DegenerateNetwork(f"learning rate needs n >= 2, got {n}")
    if not 0 <= sigma2_w < 1:
        raise DegenerateNetwork(f"learning rate needs 0 <= sigma2 < 1, got {sigma2_w}")
    if B <= 0:
        raise DegenerateInputs(f"B must be positive, got {B}")
    eta = (1.0 - sigma2_w) / (16.0 * B * math.log(n))
    logger.debug("prescribed learning rate %.6g for B=%.4f n=%d sigma2=%.6f", eta, B, n, sigma2_w)
    return eta
