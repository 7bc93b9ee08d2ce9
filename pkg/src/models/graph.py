import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from src.errors import InputError, InvariantViolation
from src.utils.bitset import above, full_mask, iter_bits

logger = logging.getLogger(__name__)

SEED_LIMIT = 1 << 64


@dataclass(frozen=True, order=True)
class Edge:
    """Undirected edge kept in canonical order u < v."""
    u: int
    v: int

    def __post_init__(self):
        if self.u == self.v:
            raise InputError(f"self-loop at vertex {self.u}")
        if self.u < 0 or self.v < 0:
            raise InputError(f"negative vertex index in ({self.u}, {self.v})")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)

    def __iter__(self):
        yield self.u
        yield self.v

    def __str__(self):
        return f"{self.u} {self.v}"


@dataclass(frozen=True)
class GnpSpec:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"vertex count must be positive, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise InputError(f"probability must lie in [0, 1], got {self.p}")
        if not 0 <= self.seed < SEED_LIMIT:
            raise InputError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


class Graph:
    """
    Simple undirected graph on vertices 0..n-1.

    adj[u] is an int bit-vector of the neighbours of u. The structure is
    mutable while a closure runs and must be treated as read-only once shared.
    """

    __slots__ = ("n", "adj", "edge_count")

    def __init__(self, n: int, adj: Optional[List[int]] = None):
        if n < 1:
            raise InputError(f"vertex count must be positive, got {n}")
        self.n = n
        if adj is None:
            self.adj = [0] * n
            self.edge_count = 0
        else:
            if len(adj) != n:
                raise InputError(f"expected {n} adjacency rows, got {len(adj)}")
            self.adj = list(adj)
            self.edge_count = sum(row.bit_count() for row in self.adj) // 2

    @classmethod
    def complete(cls, n: int) -> "Graph":
        mask = full_mask(n)
        return cls(n, [mask & ~(1 << u) for u in range(n)])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        graph = cls(n)
        for item in edges:
            graph.add_edge(item if isinstance(item, Edge) else Edge(*item))
        return graph

    def _check_vertex(self, x: int):
        if not 0 <= x < self.n:
            raise InputError(f"vertex {x} out of range for n={self.n}")

    def add_edge(self, edge: Edge) -> bool:
        """Inserts the edge. Returns True when it was absent before."""
        u, v = edge.u, edge.v
        self._check_vertex(u)
        self._check_vertex(v)
        if self.adj[u] >> v & 1:
            return False
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u
        self.edge_count += 1
        return True

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool(self.adj[u] >> v & 1)

    def __contains__(self, edge: Edge) -> bool:
        return self.has_edge(edge.u, edge.v)

    def neighbors(self, u: int) -> int:
        self._check_vertex(u)
        return self.adj[u]

    def common_neighbors(self, u: int, v: int) -> int:
        """adj[u] & adj[v] as a bit-vector."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise InputError(f"common neighbours need two distinct vertices, got {u} twice")
        return self.adj[u] & self.adj[v]

    def edges(self) -> Iterator[Edge]:
        """Present edges in canonical lexicographic order."""
        for u in range(self.n):
            for v in iter_bits(above(self.adj[u], u)):
                yield Edge(u, v)

    def missing_edges(self) -> Iterator[Edge]:
        """Absent edges in canonical lexicographic order."""
        mask = full_mask(self.n)
        for u in range(self.n):
            for v in iter_bits(above(mask & ~self.adj[u], u)):
                yield Edge(u, v)

    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges())

    def max_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    def is_complete(self) -> bool:
        return self.edge_count == self.max_edges()

    def is_subgraph_of(self, other: "Graph") -> bool:
        if self.n != other.n:
            return False
        return all(row & ~big == 0 for row, big in zip(self.adj, other.adj))

    def union(self, other: "Graph") -> "Graph":
        if self.n != other.n:
            raise InputError(f"cannot unite graphs on {self.n} and {other.n} vertices")
        return Graph(self.n, [a | b for a, b in zip(self.adj, other.adj)])

    def copy(self) -> "Graph":
        clone = Graph.__new__(Graph)
        clone.n = self.n
        clone.adj = list(self.adj)
        clone.edge_count = self.edge_count
        return clone

    def check_invariants(self):
        """Full rescan: symmetry, no self-loops, cached edge count."""
        mask = full_mask(self.n)
        for u, row in enumerate(self.adj):
            if row & ~mask:
                raise InvariantViolation(f"row {u} has bits beyond n={self.n}")
            if row >> u & 1:
                raise InvariantViolation(f"self-loop at vertex {u}")
            for v in iter_bits(row):
                if not self.adj[v] >> u & 1:
                    raise InvariantViolation(f"asymmetric adjacency between {u} and {v}")
        total = sum(row.bit_count() for row in self.adj)
        if total != 2 * self.edge_count:
            raise InvariantViolation(
                f"edge_count {self.edge_count} disagrees with rescan {total // 2}"
            )

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


def edge_positions(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Row/column indices of the C(n,2) potential edges in canonical order."""
    return np.triu_indices(n, k=1)


def sample_gnp(spec: GnpSpec) -> Graph:
    """
    Erdős–Rényi sample driven by PCG64(seed).

    Exactly one uniform draw is consumed per potential edge, in canonical
    order, and the edge is kept when draw < p. The graph therefore depends
    only on (n, p, seed), and two specs sharing n and seed are nested:
    p <= p' gives G(p) inside G(p').
    """
    n = spec.n
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    rows, cols = edge_positions(n)
    present = rng.random(rows.size) < spec.p
    matrix = np.zeros((n, n), dtype=bool)
    matrix[rows[present], cols[present]] = True
    matrix |= matrix.T
    packed = np.packbits(matrix, axis=1, bitorder="little")
    adj = [int.from_bytes(row.tobytes(), "little") for row in packed]
    graph = Graph(n, adj)
    logger.debug("sampled G(%d, %s) seed=%d with %d edges", n, spec.p, spec.seed, graph.edge_count)
    return graph
