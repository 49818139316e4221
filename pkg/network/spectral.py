"""Spectral analysis of mixing matrices."""
import logging
import math

import numpy as np

from core.exceptions import DegenerateNetwork, NoConvergence

logger = logging.getLogger(__name__)

POWER_TOL = 1e-10
POWER_MAX_ITER = 100_000
# private generator for the power-iteration start vector
START_SEED = 0


def sigma2(w, tol=POWER_TOL, max_iter=POWER_MAX_ITER):
    """Second-largest singular value of a symmetric doubly stochastic matrix.

    Computed as the spectral norm of W - (1/n)11^T by power iteration.
    """
    n = w.n
    centred = w.entries - 1.0 / n
    x = np.random.default_rng(START_SEED).standard_normal(n)
    x -= x.mean()
    x /= np.linalg.norm(x)

    estimate = 0.0
    for iteration in range(max_iter):
        y = centred @ x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return 0.0
        if abs(norm - estimate) <= tol * norm:
            logger.debug("power iteration converged after %d steps: sigma2=%.12f", iteration, norm)
            return min(norm, 1.0)
        estimate = norm
        x = y / norm
    raise NoConvergence(f"power iteration did not reach tolerance {tol} in {max_iter} steps")


def spectral_gap(w):
    """gamma(W) = 1 - sigma_2(W)."""
    return 1.0 - sigma2(w)


def mixing_deviation_sums(w, i, t_max):
    """Cumulative sums S(t) = sum_{s=0}^{t-1} sum_j |[W^s]_ij - 1/n| for t = 1..t_max."""
    if t_max < 1:
        raise ValueError(f"t must be at least 1, got {t_max}")
    n = w.n
    row = np.zeros(n)
    row[i] = 1.0
    terms = np.empty(t_max)
    for s in range(t_max):
        terms[s] = np.abs(row - 1.0 / n).sum()
        row = row @ w.entries
    return np.cumsum(terms)


def mixing_deviation_sum(w, i, t):
    """sum_{tau=1}^{t} sum_j |[W^{t-tau}]_ij - 1/n|."""
    return float(mixing_deviation_sums(w, i, t)[-1])


def mixing_sum_bound(n, sigma2_w):
    """4 ln(n) / (1 - sigma_2): the bound the mixing-deviation sum is checked against."""
    if n < 2 or sigma2_w >= 1:
        raise DegenerateNetwork(f"bound undefined for n={n}, sigma2={sigma2_w}")
    return 4.0 * math.log(n) / (1.0 - sigma2_w)
