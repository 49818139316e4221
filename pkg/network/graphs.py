from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

GRAPH_FAMILIES = {
    "cycle": nx.cycle_graph,
    "path": nx.path_graph,
    "complete": nx.complete_graph,
    "star": lambda n: nx.star_graph(n - 1),
}


@dataclass(frozen=True)
class Graph:
    """Undirected agent graph on nodes 0..n-1 without self-loops."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"graph needs at least one node, got {self.n}")
        normalized = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at agent {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) outside [0, {self.n})")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n, edges):
        return cls(n=n, edges=frozenset(tuple(e) for e in edges))

    @classmethod
    def from_networkx(cls, graph):
        nodes = sorted(graph.nodes)
        index = {node: k for k, node in enumerate(nodes)}
        return cls(n=len(nodes), edges=frozenset((index[u], index[v]) for u, v in graph.edges if u != v))

    @cached_property
    def neighbors(self):
        adjacent = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adjacent[i].append(j)
            adjacent[j].append(i)
        return tuple(tuple(sorted(a)) for a in adjacent)

    @cached_property
    def degrees(self):
        return np.array([len(a) for a in self.neighbors])

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(sorted(self.edges))
        return graph

    def is_connected(self):
        return nx.is_connected(self.to_networkx())


def graph_from_family(family, n):
    """Build a named graph family (cycle, path, complete, star) on n agents."""
    try:
        build = GRAPH_FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown graph family {family!r}; expected one of {sorted(GRAPH_FAMILIES)}") from None
    return Graph.from_networkx(build(n))
