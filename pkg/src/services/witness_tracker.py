"""
Witness sets and the red edge construction, with the structural checks that
a correct closure run must satisfy.

WE(e) is {e} for an input edge; an infected edge takes the union of WE over
the other edges of the copy that infected it (edges of the copy only, not
every edge induced on its vertices).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional

from src.errors import DomainError, InputError, PreconditionError
from src.models.graph import Edge, Graph
from src.models.pattern import Pattern, lambda_
from src.services.closure_engine import ClosureResult, CopyWitness, InfectionStep, closure
from src.services.pattern_math import in_proven_range
from src.utils.union_find import UnionFind

logger = logging.getLogger(__name__)

CHECKED = "checked"
OUT_OF_RANGE = "out_of_proven_range"


@dataclass(frozen=True)
class WitnessRecord:
    edge: Edge
    witness_edges: FrozenSet[Edge]
    depth: int = 0

    @property
    def witness_vertices(self) -> FrozenSet[int]:
        return frozenset(x for e in self.witness_edges for x in (e.u, e.v))

    @property
    def e_F(self) -> int:
        return len(self.witness_edges)

    @property
    def nu_F(self) -> int:
        return len(self.witness_vertices)


class WitnessTracker:
    """Follows a closure run and assigns WE(e) to every edge as it appears."""

    def __init__(self, graph: Graph, pattern: Pattern):
        self.pattern = pattern
        self.records: Dict[Edge, WitnessRecord] = {
            e: WitnessRecord(edge=e, witness_edges=frozenset((e,)), depth=0) for e in graph.edges()
        }

    def record(self, step: InfectionStep) -> WitnessRecord:
        others = [e for e in step.copy.edges() if e != step.edge]
        union = frozenset().union(*(self.records[e].witness_edges for e in others))
        depth = 1 + max(self.records[e].depth for e in others)
        rec = WitnessRecord(edge=step.edge, witness_edges=union, depth=depth)
        self.records[step.edge] = rec
        return rec


def run_witness_algorithm(graph: Graph, pattern: Pattern) -> Dict[Edge, WitnessRecord]:
    return closure(graph, pattern, track_witnesses=True).witnesses


@dataclass(frozen=True)
class StepStats:
    t: int
    e_Bt: int
    nu_Bt: int
    l_t: int
    k_t: int


@dataclass
class RedEdgeTrace:
    target: Edge
    red_edges: List[Edge]
    copies: List[CopyWitness]
    per_step: List[StepStats]
    witness_edges: FrozenSet[Edge]
    reconstructed_edges: FrozenSet[Edge]

    @property
    def m(self) -> int:
        return len(self.red_edges)


def red_edge_trace(records: Dict[Edge, WitnessRecord], result: ClosureResult, target: Edge) -> RedEdgeTrace:
    """
    Red edges are the infected edges e_j, up to and including the target,
    with WE(e_j) contained in WE(target) and e_j not in WE(target).

    The auxiliary graph on copies (adjacent when they share an edge) only
    gains a node per step, so one growing union-find tracks its components.
    k_t is the sum over components of their vertex counts minus nu(B_t).
    """
    if result.witnesses is None and not records:
        raise InputError("red edge trace needs witness records")
    if target not in records or records[target].depth == 0:
        raise DomainError(f"edge ({target}) was not infected by the process")
    target_we = records[target].witness_edges

    selected: List[InfectionStep] = []
    for step in result.trace:
        if records[step.edge].witness_edges <= target_we and step.edge not in target_we:
            selected.append(step)
        if step.edge == target:
            break

    forest = UnionFind()
    first_holder: Dict[Edge, int] = {}
    component_vertices: Dict[int, int] = {}
    covered = 0  # sum over components of |V(C)|
    union_edges = set()
    union_vertices = 0
    per_step: List[StepStats] = []

    for t, step in enumerate(selected, start=1):
        node = forest.add()
        mask = step.copy.vertex_mask()
        component_vertices[node] = mask
        covered += mask.bit_count()
        copy_edges = step.copy.edges()
        for e in copy_edges:
            holder = first_holder.setdefault(e, node)
            if holder == node:
                continue
            ra, rb = forest.root(holder), forest.root(node)
            if ra == rb:
                continue
            ma, mb = component_vertices.pop(ra), component_vertices.pop(rb)
            forest.join(ra, rb)
            merged = ma | mb
            component_vertices[forest.root(ra)] = merged
            covered += merged.bit_count() - ma.bit_count() - mb.bit_count()
        union_edges |= copy_edges
        union_vertices |= mask
        nu = union_vertices.bit_count()
        per_step.append(StepStats(
            t=t,
            e_Bt=len(union_edges) - t,
            nu_Bt=nu,
            l_t=forest.components,
            k_t=covered - nu,
        ))

    red = [step.edge for step in selected]
    return RedEdgeTrace(
        target=target,
        red_edges=red,
        copies=[step.copy for step in selected],
        per_step=per_step,
        witness_edges=target_we,
        reconstructed_edges=frozenset(union_edges) - frozenset(red),
    )


@dataclass(frozen=True)
class Violation:
    check: str
    edge: Optional[Edge]
    detail: str
    t: Optional[int] = None


@dataclass
class LemmaCheckReport:
    target: Edge
    status: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def bt_lower_bound(stats: StepStats, pattern: Pattern) -> Fraction:
    r, s = pattern.r, pattern.s
    return lambda_(pattern) * (stats.nu_Bt + stats.k_t - stats.l_t * (r + s)) + stats.l_t * (r * s - 1)


def density_lower_bound(nu: int, pattern: Pattern) -> Fraction:
    return lambda_(pattern) * (nu - 2) + 1


def check_structural_lemmas(trace: RedEdgeTrace, pattern: Pattern) -> LemmaCheckReport:
    """
    B_t inequality for every t, connectivity of the final auxiliary graph,
    witness density, and agreement of the two constructions of F(target).
    Only meaningful for r, s >= 3 with r <= (s-2)^2 + s.
    """
    report = LemmaCheckReport(target=trace.target, status=CHECKED)
    if not in_proven_range(pattern):
        report.status = OUT_OF_RANGE
        return report

    for stats in trace.per_step:
        bound = bt_lower_bound(stats, pattern)
        if stats.e_Bt < bound:
            report.violations.append(Violation(
                check="bt_inequality", edge=trace.target, t=stats.t,
                detail=f"e(B_t)={stats.e_Bt} < {bound} with nu={stats.nu_Bt}, k={stats.k_t}, l={stats.l_t}",
            ))

    last = trace.per_step[-1]
    if last.l_t != 1 or last.k_t != 0:
        report.violations.append(Violation(
            check="connectivity", edge=trace.target, t=last.t,
            detail=f"auxiliary graph has l_m={last.l_t}, k_m={last.k_t}",
        ))

    e_F = len(trace.witness_edges)
    nu_F = len({x for e in trace.witness_edges for x in (e.u, e.v)})
    bound = density_lower_bound(nu_F, pattern)
    if e_F < bound:
        report.violations.append(Violation(
            check="witness_density", edge=trace.target,
            detail=f"e(F)={e_F} < {bound} with nu(F)={nu_F}",
        ))

    if trace.reconstructed_edges != trace.witness_edges:
        report.violations.append(Violation(
            check="witness_reconstruction", edge=trace.target,
            detail=(f"copies minus red edges give {len(trace.reconstructed_edges)} edges, "
                    f"witness set has {e_F}"),
        ))

    for v in report.violations:
        logger.warning("lemma violation on (%s): %s %s", v.edge, v.check, v.detail)
    return report


@dataclass(frozen=True)
class SandwichReport:
    L: int
    status: str  # pass | vacuous | fail
    edge: Optional[Edge] = None
    size: Optional[int] = None


def check_size_sandwich(records: Dict[Edge, WitnessRecord], L: int, pattern: Pattern) -> SandwichReport:
    """Some f with L <= e(F(f)) <= rs * L must exist once any witness set reaches L."""
    if L < 1:
        raise InputError(f"L must be a positive integer, got {L}")
    ordered = sorted(records)
    if not any(records[e].e_F >= L for e in ordered):
        return SandwichReport(L=L, status="vacuous")
    upper = pattern.edge_count * L
    for e in ordered:
        size = records[e].e_F
        if L <= size <= upper:
            return SandwichReport(L=L, status="pass", edge=e, size=size)
    logger.warning("size sandwich failed at L=%d", L)
    return SandwichReport(L=L, status="fail")


def check_growth_bound(records: Dict[Edge, WitnessRecord], pattern: Pattern) -> List[Violation]:
    """e(F(e)) <= (rs-1) * rs^(d-1) for an edge infected at depth d."""
    rs = pattern.edge_count
    out = []
    for e in sorted(records):
        rec = records[e]
        if rec.depth == 0:
            continue
        cap = (rs - 1) * rs ** (rec.depth - 1)
        if rec.e_F > cap:
            out.append(Violation(check="growth_bound", edge=e,
                                 detail=f"e(F)={rec.e_F} exceeds {cap} at depth {rec.depth}"))
    return out


def check_witness_subset(records: Dict[Edge, WitnessRecord], graph: Graph) -> List[Violation]:
    """Witness edges are input edges, and input edges witness themselves."""
    out = []
    for e in sorted(records):
        rec = records[e]
        if graph.has_edge(e.u, e.v):
            if rec.witness_edges != frozenset((e,)):
                out.append(Violation(check="witness_subset", edge=e,
                                     detail="input edge must have WE(e) = {e}"))
            continue
        stray = [f for f in rec.witness_edges if not graph.has_edge(f.u, f.v)]
        if stray:
            out.append(Violation(check="witness_subset", edge=e,
                                 detail=f"{len(stray)} witness edges are not input edges, e.g. ({min(stray)})"))
    return out


@dataclass(frozen=True)
class EdgeOutcome:
    edge: Edge
    m: int
    e_F: int
    nu_F: int
    depth: int
    passed: bool


@dataclass
class RunAudit:
    pattern: Pattern
    n: int
    seed: Optional[int]
    percolated: bool
    infections: int
    status: str
    outcomes: List[EdgeOutcome]
    sandwich: Optional[SandwichReport]
    violations: List[Violation]

    @property
    def passed(self) -> bool:
        return not self.violations


def audit_closure(graph: Graph, pattern: Pattern, seed: Optional[int] = None, sandwich_L: int = 2,
                  result: Optional[ClosureResult] = None) -> RunAudit:
    """
    Runs every structural check on every infected edge.

    A closure of graph computed with track_witnesses=True can be passed in
    as result; otherwise the closure is run here.
    """
    if result is None:
        result = closure(graph, pattern, track_witnesses=True)
    elif result.witnesses is None or result.pattern != pattern or result.initial != graph:
        raise PreconditionError("audit needs the witness-tracked closure of this graph and pattern")
    records = result.witnesses
    violations = check_witness_subset(records, graph) + check_growth_bound(records, pattern)
    status = CHECKED if in_proven_range(pattern) else OUT_OF_RANGE

    outcomes = []
    for step in result.trace:
        trace = red_edge_trace(records, result, step.edge)
        report = check_structural_lemmas(trace, pattern)
        violations.extend(report.violations)
        rec = records[step.edge]
        outcomes.append(EdgeOutcome(edge=step.edge, m=trace.m, e_F=rec.e_F, nu_F=rec.nu_F,
                                    depth=rec.depth, passed=report.passed))

    sandwich = None
    if result.trace:
        sandwich = check_size_sandwich(records, sandwich_L, pattern)
        if sandwich.status == "fail":
            violations.append(Violation(check="size_sandwich", edge=None,
                                        detail=f"no edge f with {sandwich_L} <= e(F(f)) <= {pattern.edge_count * sandwich_L}"))

    return RunAudit(
        pattern=pattern,
        n=graph.n,
        seed=seed,
        percolated=result.percolated,
        infections=len(result.trace),
        status=status,
        outcomes=outcomes,
        sandwich=sandwich,
        violations=violations,
    )
