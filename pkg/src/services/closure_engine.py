"""
K_{r,s} copy detection and the bootstrap closure.

Detection contract for a missing edge (u, v) with u on the r-side and v on
the s-side: a copy exists iff some (s-1)-subset T of N(u) minus v satisfies
|N(v) & N(T) minus u| >= r-1, where N(T) is the common neighbourhood of T.
Members of N(T) are never in T (no self-loops), so the two sides come out
disjoint without an extra test.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from src.errors import InvariantViolation, PreconditionError
from src.models.graph import Edge, Graph
from src.models.pattern import Pattern
from src.utils.bitset import above, iter_bits, lowest_bits

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CopyWitness:
    """A completed K_{r,s}: side_a has r vertices, side_b has s, both sorted."""
    side_a: Tuple[int, ...]
    side_b: Tuple[int, ...]

    @property
    def sort_key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return self.side_a, self.side_b

    def vertices(self) -> FrozenSet[int]:
        return frozenset(self.side_a) | frozenset(self.side_b)

    def vertex_mask(self) -> int:
        mask = 0
        for x in self.side_a + self.side_b:
            mask |= 1 << x
        return mask

    def edges(self) -> FrozenSet[Edge]:
        return frozenset(Edge(a, b) for a in self.side_a for b in self.side_b)

    def is_valid_for(self, graph: Graph, completing: Edge, pattern: Pattern) -> bool:
        """All cross pairs present in graph except the completing edge, which is absent."""
        if len(self.side_a) != pattern.r or len(self.side_b) != pattern.s:
            return False
        if set(self.side_a) & set(self.side_b):
            return False
        if completing not in self.edges() or graph.has_edge(completing.u, completing.v):
            return False
        return all(graph.has_edge(e.u, e.v) for e in self.edges() if e != completing)


@dataclass(frozen=True)
class InfectionStep:
    t: int
    edge: Edge
    copy: Optional[CopyWitness]


@dataclass
class ClosureResult:
    initial: Graph
    final: Graph
    pattern: Pattern
    trace: List[InfectionStep]
    percolated: bool
    witnesses: Optional[Dict] = field(default=None, repr=False)

    @property
    def infection_count(self) -> int:
        return self.final.edge_count - self.initial.edge_count

    def infected_edges(self) -> List[Edge]:
        return [step.edge for step in self.trace]


Detector = Callable[[Graph, Edge, Pattern], Optional[CopyWitness]]


def _orientations(edge: Edge, pattern: Pattern) -> List[Tuple[int, int]]:
    """(r-side endpoint, s-side endpoint) pairs to try."""
    if pattern.r == pattern.s:
        return [(edge.u, edge.v)]
    return [(edge.u, edge.v), (edge.v, edge.u)]


def _candidate_pool(graph: Graph, a_end: int, b_end: int, r: int) -> Tuple[int, List[int]]:
    """
    Returns N(b_end) minus a_end (where the rest of the r-side must live) and
    the s-side candidates: neighbours b of a_end sharing at least r-1 of them.
    """
    a_space = graph.adj[b_end] & ~(1 << a_end)
    pool = [
        b for b in iter_bits(graph.adj[a_end] & ~(1 << b_end))
        if (graph.adj[b] & a_space).bit_count() >= r - 1
    ]
    return a_space, pool


def _iter_completions(graph: Graph, pool: List[int], running: int, start: int,
                      remaining: int, need: int, chosen: List[int]) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """(s-1)-subsets of the pool in lexicographic order with their surviving r-side space."""
    if remaining == 0:
        yield tuple(chosen), running
        return
    for i in range(start, len(pool) - remaining + 1):
        b = pool[i]
        narrowed = running & graph.adj[b]
        if narrowed.bit_count() < need:
            continue
        chosen.append(b)
        yield from _iter_completions(graph, pool, narrowed, i + 1, remaining - 1, need, chosen)
        chosen.pop()


def _check_missing(graph: Graph, edge: Edge):
    if graph.has_edge(edge.u, edge.v):
        raise PreconditionError(f"edge ({edge}) is already present")


def completes_copy(graph: Graph, edge: Edge, pattern: Pattern) -> Optional[CopyWitness]:
    """
    The lexicographically smallest copy of K_{r,s} that adding edge completes.

    Witnesses are compared on (sorted side_a, sorted side_b) across both
    orientations of the edge. When r == s only the orientation with the
    smaller endpoint on side_a is used, so each copy has one representation.
    """
    _check_missing(graph, edge)
    r, s = pattern.r, pattern.s
    if graph.n < r + s:
        return None

    best: Optional[CopyWitness] = None
    for a_end, b_end in _orientations(edge, pattern):
        a_space, pool = _candidate_pool(graph, a_end, b_end, r)
        for chosen, space in _iter_completions(graph, pool, a_space, 0, s - 1, r - 1, []):
            witness = CopyWitness(
                side_a=tuple(sorted([a_end, *lowest_bits(space, r - 1)])),
                side_b=tuple(sorted((b_end,) + chosen)),
            )
            if best is None or witness.sort_key < best.sort_key:
                best = witness
    return best


def has_copy(graph: Graph, edge: Edge, pattern: Pattern) -> bool:
    """Existence-only detection with early exit."""
    _check_missing(graph, edge)
    r, s = pattern.r, pattern.s
    if graph.n < r + s:
        return False
    for a_end, b_end in _orientations(edge, pattern):
        a_space, pool = _candidate_pool(graph, a_end, b_end, r)
        if len(pool) < s - 1:
            continue
        for _ in _iter_completions(graph, pool, a_space, 0, s - 1, r - 1, []):
            return True
    return False


class ClosureEngine:
    """
    Worklist fixed point of the K_{r,s} bootstrap process.

    All absent edges start in a FIFO queue in canonical order. After (u, v)
    is infected, every absent pair inside {u, v} | N(u) | N(v) is queued
    again, since a newly completable edge lies in a copy that holds both u
    and v. A final pass over all absent edges must find nothing.
    """

    def __init__(self, pattern: Pattern, record_trace: bool = True,
                 track_witnesses: bool = False, detector: Optional[Detector] = None):
        self.pattern = pattern
        self.record_trace = record_trace or track_witnesses
        self.track_witnesses = track_witnesses
        self.detector = detector

    def _detect(self, graph: Graph, edge: Edge) -> Tuple[bool, Optional[CopyWitness]]:
        if self.detector is not None:
            witness = self.detector(graph, edge, self.pattern)
            return witness is not None, witness
        if self.record_trace:
            witness = completes_copy(graph, edge, self.pattern)
            return witness is not None, witness
        return has_copy(graph, edge, self.pattern), None

    def run(self, graph: Graph, initial_order: Optional[Sequence[Edge]] = None) -> ClosureResult:
        work = graph.copy()
        trace: List[InfectionStep] = []
        tracker = None
        if self.track_witnesses:
            from src.services.witness_tracker import WitnessTracker
            tracker = WitnessTracker(graph, self.pattern)

        if work.n < self.pattern.vertex_count:
            return self._result(graph, work, trace, tracker)

        if initial_order is None:
            queue = deque(work.missing_edges())
        else:
            queue = deque(initial_order)
            if sorted(queue) != list(work.missing_edges()):
                raise PreconditionError("initial_order must be a permutation of the absent edges")
        queued = [0] * work.n
        for edge in queue:
            queued[edge.u] |= 1 << edge.v

        t = 0
        while queue:
            edge = queue.popleft()
            queued[edge.u] &= ~(1 << edge.v)
            hit, witness = self._detect(work, edge)
            if not hit:
                continue
            work.add_edge(edge)
            t += 1
            if self.record_trace:
                step = InfectionStep(t=t, edge=edge, copy=witness)
                trace.append(step)
                if tracker is not None:
                    tracker.record(step)
            self._requeue(work, edge, queue, queued)

        for edge in work.missing_edges():
            if self._detect(work, edge)[0]:
                raise InvariantViolation(
                    f"verification pass found completable edge ({edge}) after the worklist drained"
                )
        logger.debug("closure under %s: %d infections, %d/%d edges",
                     self.pattern, t, work.edge_count, work.max_edges())
        return self._result(graph, work, trace, tracker)

    def _requeue(self, work: Graph, edge: Edge, queue: deque, queued: List[int]):
        adj = work.adj
        region = (1 << edge.u) | (1 << edge.v) | adj[edge.u] | adj[edge.v]
        for x in iter_bits(region):
            fresh = above(region & ~adj[x] & ~queued[x], x)
            if not fresh:
                continue
            queued[x] |= fresh
            for y in iter_bits(fresh):
                queue.append(Edge(x, y))

    def _result(self, graph: Graph, work: Graph, trace: List[InfectionStep], tracker) -> ClosureResult:
        return ClosureResult(
            initial=graph.copy(),
            final=work,
            pattern=self.pattern,
            trace=trace,
            percolated=work.is_complete(),
            witnesses=tracker.records if tracker is not None else None,
        )


def closure(graph: Graph, pattern: Pattern, record_trace: bool = True,
            track_witnesses: bool = False, initial_order: Optional[Sequence[Edge]] = None,
            detector: Optional[Detector] = None) -> ClosureResult:
    engine = ClosureEngine(pattern, record_trace=record_trace,
                           track_witnesses=track_witnesses, detector=detector)
    return engine.run(graph, initial_order=initial_order)


def percolates(graph: Graph, pattern: Pattern) -> bool:
    return closure(graph, pattern, record_trace=False).percolated


def replay(graph: Graph, trace: Sequence[InfectionStep], pattern: Pattern) -> Graph:
    """Re-applies a trace step by step, validating every witness on the way."""
    state = graph.copy()
    for step in trace:
        if step.copy is None:
            raise InvariantViolation(f"step {step.t} carries no witness")
        if not step.copy.is_valid_for(state, step.edge, pattern):
            raise InvariantViolation(f"step {step.t}: witness {step.copy} does not complete ({step.edge})")
        state.add_edge(step.edge)
    return state
