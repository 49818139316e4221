"""Finite-alphabet likelihood structures and the quantities they induce.

Agent i observes symbols from a finite alphabet S_i; its likelihood table has one row
per state and one column per symbol. Signals are drawn from the row of the true state.
"""
import logging
from dataclasses import InitVar, dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import rel_entr

from core.exceptions import (
    BadRowSum,
    DimensionMismatch,
    InvalidLikelihood,
    NotIdentifiable,
    ZeroLikelihoodEntry,
)

logger = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-12
EQUIVALENCE_TOL = 1e-12


@dataclass(frozen=True)
class StateSpace:
    """m candidate states; true_index is the zero-based index of the true state."""

    m: int
    true_index: int = 0

    def __post_init__(self):
        if self.m < 2:
            raise InvalidLikelihood(f"need at least 2 states, got {self.m}")
        if not 0 <= self.true_index < self.m:
            raise InvalidLikelihood(f"true state {self.true_index} outside [0, {self.m})")


@dataclass(frozen=True, eq=False)
class AgentLikelihood:
    """One agent's m x |S_i| likelihood table."""

    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        if table.ndim != 2 or table.shape[1] < 1:
            raise InvalidLikelihood(f"likelihood table must be 2-D with a non-empty alphabet, got shape {table.shape}")
        if not np.all(np.isfinite(table)):
            raise InvalidLikelihood("likelihood table has non-finite entries")
        if np.any(table < 0):
            raise InvalidLikelihood("likelihood table has negative entries")
        if np.any(table == 0):
            # |ln l_i| must stay bounded
            raise ZeroLikelihoodEntry("likelihood table has a zero entry; the log-marginal bound B would be infinite")
        sums = table.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
        if bad.size:
            raise BadRowSum(f"rows {bad.tolist()} do not sum to 1 (sums {sums[bad].tolist()})")
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    @property
    def m(self):
        return self.table.shape[0]

    @property
    def alphabet_size(self):
        return self.table.shape[1]

    @cached_property
    def log_table(self):
        logs = np.log(self.table)
        logs.flags.writeable = False
        return logs


@dataclass(frozen=True, eq=False)
class SignalSample:
    """One symbol per agent, drawn at a single time step."""

    symbols: np.ndarray

    def __post_init__(self):
        symbols = np.array(self.symbols, dtype=np.int64)
        symbols.flags.writeable = False
        object.__setattr__(self, "symbols", symbols)

    def __len__(self):
        return self.symbols.size


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_model: the tightest B and the per-agent equivalence sets."""

    bound: float
    equivalence_sets: tuple
    network_equivalence: frozenset


@dataclass(frozen=True, eq=False)
class SignalModel:
    """Per-agent likelihoods over a shared state space; marginals independent across agents."""

    states: StateSpace
    agents: tuple
    require_identifiable: InitVar[bool] = True
    _report: ValidationReport = field(init=False, repr=False, default=None)

    def __post_init__(self, require_identifiable):
        agents = tuple(a if isinstance(a, AgentLikelihood) else AgentLikelihood(a) for a in self.agents)
        object.__setattr__(self, "agents", agents)
        if len(agents) < 2:
            raise InvalidLikelihood(f"need at least 2 agents, got {len(agents)}")
        for i, agent in enumerate(agents):
            if agent.m != self.states.m:
                raise DimensionMismatch(f"agent {i} has {agent.m} rows, state space has {self.states.m} states")
        if require_identifiable:
            object.__setattr__(self, "_report", validate_model(self))

    @classmethod
    def from_tables(cls, tables, true_index=0, require_identifiable=True):
        tables = [np.asarray(t, dtype=float) for t in tables]
        m = tables[0].shape[0] if tables and tables[0].ndim == 2 else 0
        return cls(StateSpace(m=m, true_index=true_index), tuple(tables), require_identifiable)

    @property
    def n(self):
        return len(self.agents)

    @property
    def m(self):
        return self.states.m

    @property
    def true_index(self):
        return self.states.true_index

    @property
    def alphabet_sizes(self):
        return np.array([a.alphabet_size for a in self.agents])

    @cached_property
    def _stacked_logs(self):
        """n x m x max|S_i| log-likelihoods; padding columns are never indexed."""
        width = int(self.alphabet_sizes.max())
        logs = np.zeros((self.n, self.m, width))
        for i, agent in enumerate(self.agents):
            logs[i, :, : agent.alphabet_size] = agent.log_table
        return logs

    @cached_property
    def _true_cdfs(self):
        """Row true_index of every table as a CDF, padded with +inf."""
        width = int(self.alphabet_sizes.max())
        cdfs = np.full((self.n, width), np.inf)
        for i, agent in enumerate(self.agents):
            cdfs[i, : agent.alphabet_size] = np.cumsum(agent.table[self.true_index])
        return cdfs


def _equivalence_set(agent, true_index):
    gaps = np.abs(agent.table - agent.table[true_index]).max(axis=1)
    return frozenset(int(k) for k in np.flatnonzero(gaps <= EQUIVALENCE_TOL))


def validate_model(model):
    """Check positivity, row sums and identifiability; return the bound B and the equivalence sets."""
    for agent in model.agents:
        if np.any(agent.table <= 0):
            raise ZeroLikelihoodEntry("likelihood table has a zero entry")
        if np.any(np.abs(agent.table.sum(axis=1) - 1.0) > ROW_SUM_TOL):
            raise BadRowSum("likelihood row does not sum to 1")
    if model.n < 2:
        raise InvalidLikelihood("need at least 2 agents")

    sets = tuple(_equivalence_set(agent, model.true_index) for agent in model.agents)
    common = frozenset.intersection(*sets)
    if common != {model.true_index}:
        confused = sorted(common - {model.true_index})
        raise NotIdentifiable(f"states {confused} are observationally equivalent to the true state for every agent")

    bound = max(float(np.abs(agent.log_table).max()) for agent in model.agents)
    logger.debug("validated model: n=%d m=%d B=%.6f", model.n, model.m, bound)
    return ValidationReport(bound=bound, equivalence_sets=sets, network_equivalence=common)


def log_bound(model):
    """The tightest B with |ln l_i(s|theta_k)| <= B for all agents, states and symbols."""
    return max(float(np.abs(agent.log_table).max()) for agent in model.agents)


def equivalent_states(model, agent):
    """States agent cannot tell apart from the true state (always contains it)."""
    return set(_equivalence_set(model.agents[agent], model.true_index))


def agent_divergences(model, k):
    """D_KL(l_i(.|theta_1) || l_i(.|theta_k)) for every agent i."""
    return np.array([
        float(rel_entr(a.table[model.true_index], a.table[k]).sum()) for a in model.agents
    ])


def pairwise_rate(model, k):
    """I(theta_1, theta_k): the network-average KL divergence, in nats per step."""
    if k == model.true_index:
        raise ValueError("pairwise rate is defined for false states only")
    if not 0 <= k < model.m:
        raise ValueError(f"state {k} outside [0, {model.m})")
    return float(agent_divergences(model, k).mean())


def second_state(model, tol=1e-12):
    """The false state with the smallest rate and that rate; ties go to the smallest index."""
    rates = np.full(model.m, np.inf)
    for k in range(model.m):
        if k != model.true_index:
            rates[k] = pairwise_rate(model, k)
    best = rates.min()
    k = int(np.flatnonzero(rates <= best + tol)[0])
    return k, float(rates[k])


def _symbols_from_uniforms(model, uniforms):
    counts = (uniforms[..., None] >= model._true_cdfs).sum(axis=-1)
    return np.minimum(counts, model.alphabet_sizes - 1)


def sample_step(model, rng):
    """Draw one symbol per agent from the true-state row by inverse CDF."""
    return SignalSample(_symbols_from_uniforms(model, rng.random(model.n)))


def sample_path(model, rng, steps):
    """A steps x n array of symbols; same stream as `steps` consecutive sample_step calls."""
    return _symbols_from_uniforms(model, rng.random((steps, model.n)))


def log_marginal_vector(model, agent, symbol):
    """psi_i = (ln l_i(symbol|theta_k))_k."""
    return model.agents[agent].log_table[:, symbol].copy()


def log_marginal_matrix(model, symbols):
    """Stack of log-marginal vectors: (n, m) for one sample, (T, n, m) for a path."""
    symbols = np.asarray(symbols.symbols if isinstance(symbols, SignalSample) else symbols)
    if symbols.shape[-1] != model.n:
        raise DimensionMismatch(f"sample has {symbols.shape[-1]} symbols for {model.n} agents")
    agents = np.arange(model.n)
    if symbols.ndim == 1:
        return model._stacked_logs[agents, :, symbols]
    return model._stacked_logs[agents[None, :], :, symbols]


def expected_log_marginals(model):
    """n x m matrix of E[ln l_i(s|theta_k)] with s drawn under the true state."""
    return np.stack([a.table[model.true_index] @ a.log_table.T for a in model.agents])
