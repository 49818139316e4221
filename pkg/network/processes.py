"""Random network processes: i.i.d. draws W(t) from a stationary distribution.

Three kinds are supported: a fixed matrix, gossip on a base graph, and a finite
support of matrices with probabilities. Construction checks connectivity of the
expected matrix unless require_connected is False.
"""
import logging
from dataclasses import InitVar, dataclass, field

import networkx as nx
import numpy as np

from core.exceptions import DimensionMismatch, InvalidMixingMatrix, NotConnected
from network.matrices import (
    MixingMatrix,
    check_gossip_graph,
    draw_gossip_pair,
    pairwise_averaging_entries,
)
from network.spectral import sigma2

logger = logging.getLogger(__name__)

PROBABILITY_TOL = 1e-12
POSITIVE_ENTRY_TOL = 1e-12
# sigma2 within this of 1 counts as no spectral gap
GAP_TOL = 1e-9


def _require_connected(process, require_connected):
    if not require_connected:
        return
    problem = connectivity_problem(process)
    if problem:
        raise NotConnected(f"{process.kind} process is not connected in expectation: {problem}")


@dataclass(frozen=True, eq=False)
class FixedProcess:
    """W(t) = W with probability one."""

    matrix: MixingMatrix
    require_connected: InitVar[bool] = True
    kind = "fixed"

    def __post_init__(self, require_connected):
        _require_connected(self, require_connected)

    @property
    def n(self):
        return self.matrix.n

    def draw(self, rng):
        return self.matrix

    def expected(self):
        return self.matrix


@dataclass(frozen=True, eq=False)
class GossipProcess:
    """A uniformly chosen agent averages with a uniformly chosen neighbor."""

    graph: object
    require_connected: InitVar[bool] = True
    kind = "gossip"
    _pairs: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self, require_connected):
        check_gossip_graph(self.graph)
        if self.graph.n < 2:
            raise InvalidMixingMatrix("gossip needs at least 2 agents")
        pairs = {
            (i, j): MixingMatrix(pairwise_averaging_entries(self.graph.n, i, j))
            for i, j in self.graph.edges
        }
        object.__setattr__(self, "_pairs", pairs)
        _require_connected(self, require_connected)

    @property
    def n(self):
        return self.graph.n

    def draw(self, rng):
        i, j = draw_gossip_pair(self.graph, rng)
        return self._pairs[(min(i, j), max(i, j))]

    def edge_probabilities(self):
        """q_ij = (1/n)(1/deg i) + (1/n)(1/deg j) for every edge."""
        n, degrees = self.graph.n, self.graph.degrees
        return {(i, j): (1.0 / degrees[i] + 1.0 / degrees[j]) / n for i, j in sorted(self.graph.edges)}

    def expected(self):
        n = self.graph.n
        entries = np.eye(n)
        for (i, j), q in self.edge_probabilities().items():
            entries -= q * (np.eye(n) - pairwise_averaging_entries(n, i, j))
        return MixingMatrix(entries)


@dataclass(frozen=True, eq=False)
class FiniteSupportProcess:
    """W(t) is one of finitely many matrices, drawn by inverse CDF in the listed order."""

    matrices: tuple
    probabilities: np.ndarray
    require_connected: InitVar[bool] = True
    kind = "finite_support"
    _cdf: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self, require_connected):
        matrices = tuple(self.matrices)
        probabilities = np.array(self.probabilities, dtype=float)
        if not matrices or len(matrices) != probabilities.size:
            raise DimensionMismatch(f"{len(matrices)} matrices but {probabilities.size} probabilities")
        if len({w.n for w in matrices}) != 1:
            raise DimensionMismatch("support matrices have different sizes")
        if np.any(probabilities <= 0):
            raise InvalidMixingMatrix("support probabilities must be positive")
        if abs(probabilities.sum() - 1.0) > PROBABILITY_TOL:
            raise InvalidMixingMatrix(f"support probabilities sum to {probabilities.sum()!r}, not 1")
        probabilities.flags.writeable = False
        object.__setattr__(self, "matrices", matrices)
        object.__setattr__(self, "probabilities", probabilities)
        object.__setattr__(self, "_cdf", np.cumsum(probabilities))
        _require_connected(self, require_connected)

    @property
    def n(self):
        return self.matrices[0].n

    def draw(self, rng):
        index = min(int(np.searchsorted(self._cdf, rng.random(), side="right")), len(self.matrices) - 1)
        return self.matrices[index]

    def expected(self):
        entries = sum(p * w.entries for p, w in zip(self.probabilities, self.matrices))
        # a weighted sum of valid matrices can drift by a few ulps
        entries = (entries + entries.T) / 2
        return MixingMatrix(entries)


def expected_matrix(process):
    """E[W(t)] of a network process."""
    return process.expected()


def connectivity_problem(process):
    """None if E[W(t)] is connected with a spectral gap, else what is wrong with it."""
    expected = process.expected()
    entries = expected.entries
    n = entries.shape[0]
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    rows, cols = np.nonzero(entries > POSITIVE_ENTRY_TOL)
    graph.add_edges_from((int(i), int(j)) for i, j in zip(rows, cols) if i < j)
    if not nx.is_connected(graph):
        return f"{nx.number_connected_components(graph)} components"
    s2 = sigma2(expected)
    if s2 >= 1.0 - GAP_TOL:
        return f"sigma2={s2:.12g}, the expected matrix is periodic"
    return None


def check_expected_connectivity(process):
    """Whether E[W(t)] is connected and aperiodic, that is sigma2(E[W(t)]) < 1."""
    problem = connectivity_problem(process)
    logger.debug("%s process on %d agents connected in expectation: %s", process.kind, process.n, problem is None)
    return problem is None
