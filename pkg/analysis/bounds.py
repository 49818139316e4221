"""Closed-form finite-time bounds on decentralization cost and TV error."""
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from core.exceptions import DegenerateInputs

logger = logging.getLogger(__name__)

GAP_NOTE = (
    "network term uses the spectral gap 1 - sigma2(W); the printed form "
    "1 - lambda_max(W) is identically 0 for a stochastic W"
)


@dataclass(frozen=True)
class BoundReport:
    """A bound value with its named terms and the inputs that produced it."""

    value: float
    terms: dict
    inputs: dict
    notes: tuple = field(default_factory=tuple)

    def to_dict(self):
        report = asdict(self)
        report["notes"] = list(self.notes)
        return report


def _check_inputs(B, I, m, n, delta, sigma2_w):
    problems = []
    if not B > 0:
        problems.append(f"B={B} must be positive")
    if not I > 0:
        problems.append(f"I={I} must be positive")
    if m < 2:
        problems.append(f"m={m} must be at least 2")
    if n < 2:
        problems.append(f"n={n} must be at least 2")
    if not 0 < delta < 1:
        problems.append(f"delta={delta} must lie in (0, 1)")
    if not 0 <= sigma2_w < 1:
        problems.append(f"sigma2={sigma2_w} must lie in [0, 1)")
    if problems:
        raise DegenerateInputs("; ".join(problems))


def theorem1_bound(B, I, m, n, delta, sigma2_w):
    """High-probability bound on Cost_{i,T} under the prescribed learning rate; independent of T."""
    _check_inputs(B, I, m, n, delta, sigma2_w)
    gap = 1.0 - sigma2_w
    concentration = (18.0 * B**2 / I**2) * max(math.log(6 * m / delta), 3.0 * B * math.sqrt(2.0) / I)
    network = (48.0 * B * math.log(n) / I) * (math.log(m) + 2.0) / gap
    logger.debug("cost bound: %s", GAP_NOTE)
    return BoundReport(
        value=concentration + network,
        terms={"concentration": concentration, "network": network},
        inputs={"B": B, "I": I, "m": m, "n": n, "delta": delta, "sigma2": sigma2_w},
        notes=(GAP_NOTE,),
    )


def _prop1_terms(B, I, m, n, delta, sigma2_w, t):
    return {
        "rate": -I * t,
        "concentration": np.sqrt(2.0 * B**2 * t * math.log(m / delta)),
        "network": 8.0 * B * math.log(n) / (1.0 - sigma2_w),
        "states": math.log(m),
    }


def prop1_log_tv_bound(B, I, m, n, delta, sigma2_w, t):
    """High-probability bound on ln ||mu_{i,t} - e_1||_TV at a fixed t (natural-log scale)."""
    _check_inputs(B, I, m, n, delta, sigma2_w)
    if t < 1:
        raise DegenerateInputs(f"t={t} must be at least 1")
    terms = {name: float(value) for name, value in _prop1_terms(B, I, m, n, delta, sigma2_w, t).items()}
    return BoundReport(
        value=terms["rate"] + terms["concentration"] + terms["network"] + terms["states"],
        terms=terms,
        inputs={"B": B, "I": I, "m": m, "n": n, "delta": delta, "sigma2": sigma2_w, "t": t},
    )


def prop1_log_tv_bound_curve(B, I, m, n, delta, sigma2_w, t_max):
    """prop1_log_tv_bound values for t = 1..t_max as an array."""
    _check_inputs(B, I, m, n, delta, sigma2_w)
    if t_max < 1:
        raise DegenerateInputs(f"t_max={t_max} must be at least 1")
    t = np.arange(1, t_max + 1, dtype=float)
    terms = _prop1_terms(B, I, m, n, delta, sigma2_w, t)
    return terms["rate"] + terms["concentration"] + terms["network"] + terms["states"]


def expected_gap_bound(B, I_k, n, sigma2_w, t):
    """Upper bound on E[phi_{i,t}(k) - phi_{i,t}(1)] for a fixed network: 8B ln n / (1 - sigma2) - I_k t."""
    if n < 2 or not 0 <= sigma2_w < 1 or not B > 0:
        raise DegenerateInputs(f"bound undefined for B={B}, n={n}, sigma2={sigma2_w}")
    return 8.0 * B * math.log(n) / (1.0 - sigma2_w) - I_k * t
