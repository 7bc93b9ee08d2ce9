"""Slow reference implementations the engine is checked against."""
from itertools import combinations
from typing import FrozenSet, Optional

from src.models.graph import Edge, GnpSpec, Graph, sample_gnp
from src.models.pattern import Pattern
from src.services.closure_engine import CopyWitness
from src.services.experiment_service import Estimate, wilson_interval


def random_graph(n: int, p: float, seed: int) -> Graph:
    return sample_gnp(GnpSpec(n=n, p=p, seed=seed))


def brute_force_witness(graph: Graph, edge: Edge, pattern: Pattern) -> Optional[CopyWitness]:
    """
    Every r-set / s-set split through the edge, vertex set by vertex set;
    returns the smallest (side_a, side_b). For r == s the smaller endpoint
    sits on side_a.
    """
    r, s = pattern.r, pattern.s
    orientations = [(edge.u, edge.v)] if r == s else [(edge.u, edge.v), (edge.v, edge.u)]
    best = None
    for a_end, b_end in orientations:
        others = [x for x in range(graph.n) if x not in (a_end, b_end)]
        for rest_a in combinations([x for x in others if graph.has_edge(x, b_end)], r - 1):
            side_a = tuple(sorted((a_end,) + rest_a))
            remaining = [y for y in others if y not in rest_a and graph.has_edge(y, a_end)]
            for rest_b in combinations(remaining, s - 1):
                side_b = tuple(sorted((b_end,) + rest_b))
                complete = all(
                    graph.has_edge(x, y) for x in side_a for y in side_b if Edge(x, y) != edge
                )
                if complete and (best is None or (side_a, side_b) < best):
                    best = (side_a, side_b)
    return CopyWitness(*best) if best is not None else None


def naive_closure(graph: Graph, pattern: Pattern) -> Graph:
    """Synchronous rounds: every completable edge of the current graph is added at once."""
    current = graph.copy()
    while True:
        fresh = [e for e in current.missing_edges() if brute_force_witness(current, e, pattern) is not None]
        if not fresh:
            return current
        for e in fresh:
            current.add_edge(e)


def edge_set(graph: Graph) -> FrozenSet[Edge]:
    return frozenset(graph.edges())


def k_minus_edge(n: int) -> Graph:
    """K_n without the edge (0, 1)."""
    return Graph.from_edges(n, [e for e in Graph.complete(n).edges() if e != Edge(0, 1)])


def step_estimator(threshold, calls=None):
    """Percolation exactly when p >= threshold(n); stands in for the Monte Carlo estimator."""
    def estimator(batch, workers):
        if calls is not None:
            calls.append(batch)
        successes = batch.trials if batch.p >= threshold(batch.n) else 0
        lo, hi = wilson_interval(successes, batch.trials)
        return Estimate(n=batch.n, pattern=batch.pattern, p=batch.p, trials=batch.trials,
                        successes=successes, ci_lo=lo, ci_hi=hi, seed=batch.base_seed)
    return estimator


def constant(value):
    return lambda n: value
