"""Probability-simplex primitives: beliefs, KL divergence, TV distance and exponential weights.

All logarithms are natural. Beliefs are validated, never renormalized.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import log_softmax, logsumexp, rel_entr, softmax

from core.exceptions import (
    AbsoluteContinuityViolation,
    DegenerateInputs,
    DimensionMismatch,
    InvalidBelief,
    NonFiniteInput,
)

SIMPLEX_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BeliefVector:
    """A point on the m-simplex (an agent's or the centralized belief)."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise InvalidBelief(f"belief must be a non-empty vector, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)):
            raise InvalidBelief("belief has non-finite entries")
        if np.any(probs < 0):
            raise InvalidBelief(f"belief has negative entries: {probs.min()!r}")
        total = probs.sum()
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise InvalidBelief(f"belief sums to {total!r}, not 1")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    @property
    def m(self):
        return self.probs.size

    def __len__(self):
        return self.probs.size

    def __getitem__(self, k):
        return float(self.probs[k])

    def __repr__(self):
        return f"BeliefVector({self.probs.tolist()!r})"

    @classmethod
    def delta(cls, k, m):
        """The delta distribution e_k on m states."""
        probs = np.zeros(m)
        probs[k] = 1.0
        return cls(probs)

    @classmethod
    def uniform(cls, m):
        return cls(np.full(m, 1.0 / m))


def as_belief(value):
    """Coerce a BeliefVector or a sequence of probabilities into a validated BeliefVector."""
    if isinstance(value, BeliefVector):
        return value
    return BeliefVector(value)


def _pair(mu, pi):
    mu, pi = as_belief(mu), as_belief(pi)
    if mu.m != pi.m:
        raise DimensionMismatch(f"beliefs over {mu.m} and {pi.m} states")
    return mu.probs, pi.probs


def kl_divergence(mu, pi):
    """D_KL(mu || pi) in nats, with 0 * ln(0/q) = 0."""
    p, q = _pair(mu, pi)
    if np.any((p > 0) & (q == 0)):
        raise AbsoluteContinuityViolation("mu(k) > 0 where pi(k) = 0")
    return max(float(rel_entr(p, q).sum()), 0.0)


def tv_distance(mu, pi):
    """Total variation distance (1/2) * sum_k |mu(k) - pi(k)|."""
    p, q = _pair(mu, pi)
    return float(0.5 * np.abs(p - q).sum())


def _check_potential(phi, eta):
    phi = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise NonFiniteInput("potential has non-finite entries")
    if not (np.isfinite(eta) and eta > 0):
        raise DegenerateInputs(f"learning rate must be positive and finite, got {eta!r}")
    return phi


def gibbs_belief(phi, eta):
    """Exponential-weights belief exp(eta*phi(k)) / sum_z exp(eta*phi(z)).

    The normalization is max-shifted, so potentials growing linearly in t never overflow.
    """
    phi = _check_potential(phi, eta)
    if phi.ndim != 1:
        raise DimensionMismatch(f"potential must be a vector, got shape {phi.shape}")
    return BeliefVector(softmax(eta * phi))


# --- batch helpers used by the trajectory recorder ---

def log_gibbs(phi, eta):
    """Log-beliefs of a stack of potentials along the last axis."""
    phi = _check_potential(phi, eta)
    return log_softmax(eta * phi, axis=-1)


def log_error_to_state(log_probs, k):
    """ln ||mu - e_k||_TV = ln sum_{j != k} mu(j), evaluated without forming 1 - mu(k)."""
    log_probs = np.asarray(log_probs, dtype=float)
    others = np.delete(log_probs, k, axis=-1)
    return logsumexp(others, axis=-1)


def kl_from_logs(log_p, log_q):
    """Row-wise D_KL(p || q) from log-probabilities; tiny negative rounding is clipped to 0."""
    log_p = np.asarray(log_p, dtype=float)
    log_q = np.asarray(log_q, dtype=float)
    kl = np.sum(np.exp(log_p) * (log_p - log_q), axis=-1)
    return np.maximum(kl, 0.0)
