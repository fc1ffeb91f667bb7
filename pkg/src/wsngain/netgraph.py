"""Undirected connected network topologies with ordered neighbor sequences.

Nodes are labeled 1..N.  Neighbor sequences are strict (a node is never
listed as its own neighbor) and sorted ascending, which keeps selection
matrices and consensus updates reproducible.  Consumers that need the
closed neighborhood adjoin the node index themselves.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DisconnectedGraph, GenerationFailed, InvalidConfig, InvalidEdge

DEFAULT_RETRIES = 200


@dataclass(frozen=True)
class Topology:
    """Immutable undirected connected graph.

    Attributes
    ----------
    num_nodes : int
        Number of nodes N; labels run 1..N.
    edges : tuple of (int, int)
        Unordered edges stored as (min, max) pairs, sorted.
    neighbor_seq : tuple of tuple of int
        ``neighbor_seq[i - 1]`` is S^i, the ascending sequence of strict
        neighbors of node i.
    """

    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    neighbor_seq: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, node: int) -> tuple[int, ...]:
        """Strict neighbor sequence S^node, ascending."""
        return self.neighbor_seq[node - 1]

    def degree(self, node: int) -> int:
        return len(self.neighbor_seq[node - 1])

    def degrees(self) -> np.ndarray:
        """All node degrees as an integer vector indexed by node - 1."""
        return np.array([len(s) for s in self.neighbor_seq], dtype=int)

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix (N x N, zero diagonal)."""
        a = np.zeros((self.num_nodes, self.num_nodes))
        for i, j in self.edges:
            a[i - 1, j - 1] = 1.0
            a[j - 1, i - 1] = 1.0
        return a


def _connected(num_nodes: int, adj: dict[int, set[int]]) -> bool:
    # BFS from node 1; the graph is connected iff all N nodes are reached.
    seen = {1}
    queue = deque([1])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == num_nodes


def build_topology(num_nodes: int, edges) -> Topology:
    """Validate an edge list and build a :class:`Topology`.

    Parameters
    ----------
    num_nodes : int
        Node count, at least 2.
    edges : iterable of (int, int)
        Undirected edges over 1-based labels.

    Raises
    ------
    InvalidEdge
        On a self-loop or an endpoint outside [1, num_nodes].
    DisconnectedGraph
        If some node is unreachable from node 1.
    """
    if num_nodes < 2:
        raise InvalidConfig(f"need at least 2 nodes, got {num_nodes}")
    canon = set()
    for i, j in edges:
        i, j = int(i), int(j)
        if i == j:
            raise InvalidEdge(f"self-loop at node {i}")
        if not (1 <= i <= num_nodes and 1 <= j <= num_nodes):
            raise InvalidEdge(f"edge ({i},{j}) outside 1..{num_nodes}")
        canon.add((min(i, j), max(i, j)))
    adj = {u: set() for u in range(1, num_nodes + 1)}
    for i, j in canon:
        adj[i].add(j)
        adj[j].add(i)
    if not _connected(num_nodes, adj):
        raise DisconnectedGraph(f"graph on {num_nodes} nodes is not connected")
    neighbor_seq = tuple(tuple(sorted(adj[u])) for u in range(1, num_nodes + 1))
    return Topology(num_nodes, tuple(sorted(canon)), neighbor_seq)


def random_connected_topology(
    num_nodes: int,
    edge_probability: float,
    seed: int,
    max_retries: int = DEFAULT_RETRIES,
) -> Topology:
    """Erdos-Renyi draw, resampled until connected.

    Deterministic given the seed.  Raises :class:`GenerationFailed` when the
    retry budget runs out, which signals that ``edge_probability`` is too low
    for the requested size.
    """
    if not 0.0 < edge_probability <= 1.0:
        raise InvalidConfig(f"edge_probability must be in (0, 1], got {edge_probability}")
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(1, num_nodes + 1) for j in range(i + 1, num_nodes + 1)]
    for _ in range(max_retries):
        mask = rng.random(len(pairs)) < edge_probability
        edges = [p for p, keep in zip(pairs, mask) if keep]
        try:
            return build_topology(num_nodes, edges)
        except DisconnectedGraph:
            continue
    raise GenerationFailed(
        f"no connected graph after {max_retries} draws "
        f"(N={num_nodes}, p={edge_probability})"
    )
