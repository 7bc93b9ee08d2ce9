"""
Exhaustive checks of the overlap inequalities in exact rationals, and the
dense-subgraph counter Y_m(e) for tiny graphs.

A verdict never touches floating point. Enumeration caps are hard errors,
a truncated sweep is never reported as a pass.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DomainError, InputError, RangeGuardError
from src.models.graph import Edge, GnpSpec, Graph, sample_gnp
from src.models.pattern import Pattern, lambda_
from src.services.pattern_math import in_proven_range
from src.utils.bitset import iter_bits
from src.utils.seeds import derive_seed

logger = logging.getLogger(__name__)

INSTANCE_CAP = 10 ** 7
DENSE_COUNT_MAX_N = 12
MAX_REPORTED_FAILURES = 20

Pair = Tuple[int, int]


@dataclass(frozen=True)
class OverlapInstance:
    P: Tuple[int, ...]
    Q: Tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.P)

    @property
    def cross_sum(self) -> int:
        return sum(p * q for p, q in zip(self.P, self.Q))

    @property
    def side_sum(self) -> int:
        return sum(self.P) + sum(self.Q)


@dataclass
class OverlapReport:
    check: str
    pattern: Pattern
    passed: bool
    instances: int
    worst: Optional[OverlapInstance]
    worst_slack: Optional[Fraction]
    failures: List[Tuple[OverlapInstance, Fraction]] = field(default_factory=list)


@dataclass(frozen=True)
class ChainRecord:
    """lambda (r + s - 2m) + m against rs - m for one m; recorded, not asserted."""
    m: int
    rhs: Fraction
    target: int
    holds: bool


@dataclass
class Case3Report(OverlapReport):
    count_bound_passed: bool = True
    chain: List[ChainRecord] = field(default_factory=list)


def _require_s3(pattern: Pattern):
    if pattern.s < 3:
        raise DomainError(f"overlap inequalities need r, s >= 3, got {pattern}")


def single_overlap_value(pattern: Pattern, P: int, Q: int) -> Fraction:
    """(P + Q - r - s) lambda + rs - 1 - PQ."""
    r, s = pattern.r, pattern.s
    return (P + Q - r - s) * lambda_(pattern) + r * s - 1 - P * Q


def multi_overlap_slack(pattern: Pattern, instance: OverlapInstance) -> Fraction:
    """lambda (sum(P_i + Q_i) - 2m) + m - sum P_i Q_i; non-negative when the bound holds."""
    return lambda_(pattern) * (instance.side_sum - 2 * instance.m) + instance.m - instance.cross_sum


class _Tracker:
    def __init__(self, check: str, pattern: Pattern):
        self.report = OverlapReport(check=check, pattern=pattern, passed=True,
                                    instances=0, worst=None, worst_slack=None)

    def add(self, instance: OverlapInstance, slack: Fraction):
        report = self.report
        report.instances += 1
        if report.worst_slack is None or slack < report.worst_slack:
            report.worst, report.worst_slack = instance, slack
        if slack < 0:
            report.passed = False
            if len(report.failures) < MAX_REPORTED_FAILURES:
                report.failures.append((instance, slack))


def verify_single_overlap(pattern: Pattern) -> OverlapReport:
    """
    All 1 <= P <= r, 1 <= Q <= s with P + Q <= r + s - 1. The boundary pairs
    (r, s-1) and (r-1, s) are inside that range. Ties for the minimum keep
    the first pair in ascending (P, Q) order.
    """
    _require_s3(pattern)
    r, s = pattern.r, pattern.s
    tracker = _Tracker("single_overlap", pattern)
    for P in range(1, r + 1):
        for Q in range(1, s + 1):
            if P + Q > r + s - 1:
                continue
            tracker.add(OverlapInstance((P,), (Q,)), single_overlap_value(pattern, P, Q))
    report = tracker.report
    logger.info("single overlap %s: %s over %d pairs, min %s at %s",
                pattern, "pass" if report.passed else "FAIL", report.instances,
                report.worst_slack, report.worst)
    return report


def count_ordered_instances(pattern: Pattern, m: int, exact: bool = False) -> int:
    """Ordered part sequences of length m; the quantity the enumeration cap applies to."""
    r, s = pattern.r, pattern.s
    if exact:
        return math.comb(r - 1, m - 1) * math.comb(s - 1, m - 1)
    total = 0
    for a in range(m, r + 1):
        for b in range(m, s + 1):
            if a + b <= r + s - 1:
                total += math.comb(a - 1, m - 1) * math.comb(b - 1, m - 1)
    return total


def _guard(pattern: Pattern, m_max: int, exact: bool):
    if m_max < 2:
        raise InputError(f"m_max must be at least 2, got {m_max}")
    total = sum(count_ordered_instances(pattern, m, exact) for m in range(2, m_max + 1))
    if total > INSTANCE_CAP:
        raise RangeGuardError(f"{total} instances for {pattern} with m <= {m_max} exceed the cap of {INSTANCE_CAP}")


def iter_instances(pattern: Pattern, m: int, exact: bool = False) -> Iterator[OverlapInstance]:
    """
    Part sequences as non-decreasing lists of (P_i, Q_i) pairs.

    Both sums are symmetric in the parts, so one representative per multiset
    suffices. With exact, sum P = r and sum Q = s; otherwise sum P <= r,
    sum Q <= s and sum (P + Q) <= r + s - 1.
    """
    r, s = pattern.r, pattern.s

    def walk(chosen: List[Pair], p_left: int, q_left: int) -> Iterator[OverlapInstance]:
        parts_left = m - len(chosen)
        if parts_left == 0:
            if exact and (p_left or q_left):
                return
            if not exact and sum(p + q for p, q in chosen) > r + s - 1:
                return
            yield OverlapInstance(tuple(p for p, _ in chosen), tuple(q for _, q in chosen))
            return
        start = chosen[-1] if chosen else (1, 1)
        for P in range(start[0], p_left - (parts_left - 1) + 1):
            q_from = start[1] if P == start[0] else 1
            for Q in range(q_from, q_left - (parts_left - 1) + 1):
                chosen.append((P, Q))
                yield from walk(chosen, p_left - P, q_left - Q)
                chosen.pop()

    yield from walk([], r, s)


def verify_multi_overlap(pattern: Pattern, m_max: int) -> OverlapReport:
    """sum P_i Q_i <= lambda (sum (P_i + Q_i) - 2m) + m for every 2 <= m <= m_max."""
    _require_s3(pattern)
    _guard(pattern, m_max, exact=False)
    tracker = _Tracker("multi_overlap", pattern)
    for m in range(2, m_max + 1):
        for instance in iter_instances(pattern, m):
            tracker.add(instance, multi_overlap_slack(pattern, instance))
    report = tracker.report
    logger.info("multi overlap %s, m <= %d: %s over %d instances, min slack %s",
                pattern, m_max, "pass" if report.passed else "FAIL", report.instances, report.worst_slack)
    return report


def verify_case3_boundary(pattern: Pattern, m_max: int) -> Case3Report:
    """
    Splits with sum P = r and sum Q = s: checks sum P_i Q_i <= rs - m and
    sum P_i Q_i <= lambda (r + s - 2m) + m. The worst slack reported is that
    of the second inequality.
    """
    _require_s3(pattern)
    _guard(pattern, m_max, exact=True)
    r, s = pattern.r, pattern.s
    lam = lambda_(pattern)
    tracker = _Tracker("case3_boundary", pattern)
    count_ok = True
    chain = []
    for m in range(2, m_max + 1):
        rhs = lam * (r + s - 2 * m) + m
        chain.append(ChainRecord(m=m, rhs=rhs, target=r * s - m, holds=rhs >= r * s - m))
        for instance in iter_instances(pattern, m, exact=True):
            if instance.cross_sum > r * s - m:
                count_ok = False
                logger.warning("case III count bound fails for %s at %s", pattern, instance)
            tracker.add(instance, rhs - instance.cross_sum)
    base = tracker.report
    return Case3Report(
        check=base.check,
        pattern=pattern,
        passed=base.passed and count_ok,
        instances=base.instances,
        worst=base.worst,
        worst_slack=base.worst_slack,
        failures=base.failures,
        count_bound_passed=count_ok,
        chain=chain,
    )


def _induced_edges(graph: Graph, mask: int) -> int:
    return sum((graph.adj[x] & mask).bit_count() for x in iter_bits(mask)) // 2


def count_dense_subgraphs(graph: Graph, edge: Edge, pattern: Pattern, m: int) -> int:
    """
    Y_m(edge): pairs (S, E') with both endpoints in S, E' a set of m edges of
    graph[S], and m >= lambda (|S| - 2) + 1. Counted as the sum over
    qualifying S of C(e(graph[S]), m).
    """
    if graph.n > DENSE_COUNT_MAX_N:
        raise RangeGuardError(f"dense subgraph counting is capped at n <= {DENSE_COUNT_MAX_N}, got {graph.n}")
    if edge.v >= graph.n:
        raise InputError(f"edge ({edge}) out of range for n={graph.n}")
    if m < 0:
        raise InputError(f"m must be non-negative, got {m}")
    lam = lambda_(pattern)
    base = (1 << edge.u) | (1 << edge.v)
    others = [x for x in range(graph.n) if x not in (edge.u, edge.v)]
    total = 0
    for bits in range(1 << len(others)):
        mask = base
        size = 2
        for i, x in enumerate(others):
            if bits >> i & 1:
                mask |= 1 << x
                size += 1
        if m < lam * (size - 2) + 1:
            continue
        total += math.comb(_induced_edges(graph, mask), m)
    return total


@dataclass
class DenseCountSummary:
    pattern: Pattern
    n: int
    p: float
    samples: int
    seed: int
    means: Dict[int, float]


def mean_dense_subgraph_counts(pattern: Pattern, n: int, p: float, samples: int,
                               m_values: Sequence[int], seed: int = 0) -> DenseCountSummary:
    """Average of Y_m over G(n, p) samples for the edge (0, 1). A diagnostic only."""
    if samples < 1:
        raise InputError(f"samples must be positive, got {samples}")
    if n < 2:
        raise InputError(f"n must be at least 2, got {n}")
    m_values = sorted(set(m_values))
    counts = np.zeros((samples, len(m_values)), dtype=np.float64)
    target = Edge(0, 1)
    for i in range(samples):
        graph = sample_gnp(GnpSpec(n=n, p=p, seed=derive_seed(seed, i)))
        for j, m in enumerate(m_values):
            counts[i, j] = count_dense_subgraphs(graph, target, pattern, m)
    means = counts.mean(axis=0)
    return DenseCountSummary(
        pattern=pattern, n=n, p=p, samples=samples, seed=seed,
        means={m: float(v) for m, v in zip(m_values, means)},
    )


@dataclass
class LemmaSuiteReport:
    pattern: Pattern
    in_proven_range: bool
    single: OverlapReport
    multi: OverlapReport
    case3: Case3Report
    dense: Optional[DenseCountSummary] = None

    @property
    def passed(self) -> bool:
        return self.single.passed and self.multi.passed and self.case3.passed


def verify_all(pattern: Pattern, m_max: int = 4) -> LemmaSuiteReport:
    return LemmaSuiteReport(
        pattern=pattern,
        in_proven_range=in_proven_range(pattern),
        single=verify_single_overlap(pattern),
        multi=verify_multi_overlap(pattern, m_max),
        case3=verify_case3_boundary(pattern, m_max),
    )
