"""Symmetric doubly stochastic mixing matrices and the constructions that produce them."""
from dataclasses import dataclass

import numpy as np

from core.exceptions import InvalidMixingMatrix, IsolatedAgent, NonFiniteInput

MATRIX_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MixingMatrix:
    """One round of neighbor averaging: nonnegative, symmetric, rows summing to one."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidMixingMatrix(f"mixing matrix must be square, got shape {entries.shape}")
        if entries.shape[0] < 2:
            raise InvalidMixingMatrix("mixing matrix needs at least 2 agents")
        if not np.all(np.isfinite(entries)):
            raise NonFiniteInput("mixing matrix has non-finite entries")
        if np.any(entries < 0):
            raise InvalidMixingMatrix(f"mixing matrix has negative entries (min {entries.min()!r})")
        if np.abs(entries - entries.T).max() > MATRIX_TOL:
            raise InvalidMixingMatrix("mixing matrix is not symmetric")
        row_error = np.abs(entries.sum(axis=1) - 1.0).max()
        if row_error > MATRIX_TOL:
            raise InvalidMixingMatrix(f"mixing matrix rows do not sum to 1 (max error {row_error:.3e})")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def n(self):
        return self.entries.shape[0]

    def __matmul__(self, other):
        other = other.entries if isinstance(other, MixingMatrix) else other
        return self.entries @ other

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n))

    @classmethod
    def uniform(cls, n):
        """(1/n) 11^T, the perfect-mixing matrix."""
        return cls(np.full((n, n), 1.0 / n))


def metropolis_matrix(graph):
    """Metropolis weights: 1/(1 + max(deg i, deg j)) on edges, remainder on the diagonal."""
    if graph.n < 2:
        raise InvalidMixingMatrix("Metropolis weights need at least 2 agents")
    degrees = graph.degrees
    weights = np.zeros((graph.n, graph.n))
    for i, j in graph.edges:
        weights[i, j] = weights[j, i] = 1.0 / (1 + max(degrees[i], degrees[j]))
    np.fill_diagonal(weights, 1.0 - weights.sum(axis=1))
    return MixingMatrix(weights)


def pairwise_averaging_entries(n, i, j):
    """I - (1/2)(e_i - e_j)(e_i - e_j)^T as a plain array."""
    entries = np.eye(n)
    entries[i, i] = entries[j, j] = 0.5
    entries[i, j] = entries[j, i] = 0.5
    return entries


def check_gossip_graph(graph):
    isolated = np.flatnonzero(graph.degrees == 0)
    if isolated.size:
        raise IsolatedAgent(f"agents {isolated.tolist()} have no neighbor to gossip with")


def draw_gossip_pair(graph, rng):
    """Pick an agent uniformly, then one of its neighbors uniformly."""
    i = int(rng.integers(graph.n))
    neighbors = graph.neighbors[i]
    return i, neighbors[int(rng.integers(len(neighbors)))]


def gossip_draw(graph, rng):
    """One gossip round as a pairwise-averaging mixing matrix."""
    check_gossip_graph(graph)
    i, j = draw_gossip_pair(graph, rng)
    return MixingMatrix(pairwise_averaging_entries(graph.n, i, j))
