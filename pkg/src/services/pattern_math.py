"""
Exact arithmetic for K_{r,s}: balancedness and the threshold bound curves.

All comparisons are done on Fractions. Floating point only appears where a
curve is evaluated (log n, n^{-1/lambda}).
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.errors import DomainError, InputError, RangeGuardError
from src.models.pattern import Pattern, lambda_

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 64


@dataclass(frozen=True)
class BalancednessReport:
    pattern: Pattern
    balanced: bool
    density_condition_holds: bool
    worst_subgraph: Tuple[int, int]
    worst_ratio: Fraction
    lam: Fraction
    # True when the worst subgraph is K_{r,s} with one edge removed
    worst_is_edge_deleted: bool = False


@dataclass(frozen=True)
class BoundRow:
    n: int
    lower: Optional[float]
    theorem_lower: Optional[float]
    general_lower: Optional[float]
    general_pattern: Optional[Tuple[int, int]]
    upper: Optional[float]
    upper_proven: bool
    known_reference: Optional[float]


def in_proven_range(pattern: Pattern) -> bool:
    """r, s >= 3 and r <= (s-2)^2 + s: the hypothesis of the witness-set lemmas."""
    return pattern.s >= 3 and pattern.r <= (pattern.s - 2) ** 2 + pattern.s


def is_balanced_closed_form(pattern: Pattern) -> bool:
    r, s = pattern.r, pattern.s
    if s == 2:
        logger.info("%s is outside lemma range (s = 2); closed form reports False", pattern)
        return False
    return r >= 4 and s >= 3 and r <= (s - 2) ** 2 + s


def _subgraph_ratio(p: int, q: int, edges: int) -> Fraction:
    return Fraction(edges - 1, p + q - 2)


def is_balanced_brute_force(pattern: Pattern) -> BalancednessReport:
    """
    Evaluates the balanced-graph definition directly.

    Among subgraphs on p + q vertices the densest is K_{p,q}, and the ratio
    grows with the edge count, so the (p, q) sweep covers every proper
    subgraph except the spanning ones with edges removed. Of those the
    densest is K_{r,s} minus one edge, whose ratio is exactly lambda.
    """
    r, s = pattern.r, pattern.s
    if r > BRUTE_FORCE_LIMIT or s > BRUTE_FORCE_LIMIT:
        raise RangeGuardError(f"brute-force balancedness is capped at r, s <= {BRUTE_FORCE_LIMIT}")
    lam = lambda_(pattern)
    density_ok = r * s >= 2 * (r + s) - 2

    worst: Optional[Tuple[int, int]] = None
    worst_ratio: Optional[Fraction] = None
    for p in range(r + 1):
        for q in range(s + 1):
            if (p, q) == (r, s) or p + q < 3:
                continue
            ratio = _subgraph_ratio(p, q, p * q)
            if worst_ratio is None or ratio > worst_ratio:
                worst, worst_ratio = (p, q), ratio

    edge_deleted = False
    spanning = _subgraph_ratio(r, s, r * s - 1)
    if worst_ratio is None or spanning > worst_ratio:
        worst, worst_ratio, edge_deleted = (r, s), spanning, True

    return BalancednessReport(
        pattern=pattern,
        balanced=density_ok and worst_ratio <= lam,
        density_condition_holds=density_ok,
        worst_subgraph=worst,
        worst_ratio=worst_ratio,
        lam=lam,
        worst_is_edge_deleted=edge_deleted,
    )


def _check_n(n: int, minimum: int):
    if n < minimum:
        raise InputError(f"n must be at least {minimum}, got {n}")


def _require_s3(pattern: Pattern, what: str):
    if pattern.s < 3:
        raise DomainError(f"{what} is only proven for r, s >= 3, got {pattern}")


def lower_bound_p(pattern: Pattern, n: int) -> float:
    """
    Largest p with e * p * n^{1/lambda} * log n * r * s <= lambda^2.

    Below it a fixed edge is infected with probability tending to zero.
    """
    _require_s3(pattern, "the lower bound")
    _check_n(n, 3)
    lam = float(lambda_(pattern))
    return lam ** 2 / (math.e * pattern.r * pattern.s * math.log(n) * n ** (1.0 / lam))


def upper_bound_p(pattern: Pattern, n: int, C: float = 1.0, require_balanced: bool = True) -> float:
    """C (log n / log log n)^{2/lambda} n^{-1/lambda}; proven for balanced patterns only."""
    _check_n(n, 16)
    if C <= 0:
        raise InputError(f"constant C must be positive, got {C}")
    if require_balanced and not is_balanced_closed_form(pattern):
        raise DomainError(f"{pattern} is not balanced; the upper bound does not apply")
    lam = float(lambda_(pattern))
    log_n = math.log(n)
    return C * (log_n / math.log(log_n)) ** (2.0 / lam) * n ** (-1.0 / lam)


def reduced_pattern(pattern: Pattern) -> Pattern:
    """The (r', s') maximising lambda subject to r' <= r, s' <= s, r' <= (s'-2)^2 + s'."""
    s = pattern.s
    return Pattern(min(pattern.r, (s - 2) ** 2 + s), s)


def general_lower_bound_p(pattern: Pattern, n: int) -> Tuple[float, Tuple[int, int]]:
    """
    (e log n)^{-1} lambda'^2 n^{-1/lambda'} for the reduced pattern.

    lambda is nondecreasing in both arguments and x^2 n^{-1/x} increases in
    x, so the supremum over admissible (r', s') sits at the reduced pattern.
    """
    _require_s3(pattern, "the general lower bound")
    _check_n(n, 3)
    reduced = reduced_pattern(pattern)
    lam = float(lambda_(reduced))
    value = lam ** 2 * n ** (-1.0 / lam) / (math.e * math.log(n))
    return value, (reduced.r, reduced.s)


def theorem_lower_p(pattern: Pattern, n: int, c: float = 1.0) -> float:
    """c (log n)^{-1} n^{-1/lambda}, the lower curve of the main theorem."""
    _check_n(n, 3)
    if c <= 0:
        raise InputError(f"constant c must be positive, got {c}")
    lam = float(lambda_(pattern))
    return c * n ** (-1.0 / lam) / math.log(n)


def known_reference_p(pattern: Pattern, n: int) -> Optional[float]:
    """Thresholds established in earlier work for the s = 2 family."""
    _check_n(n, 2)
    if (pattern.r, pattern.s) == (3, 2):
        return math.log(n) / n
    if (pattern.r, pattern.s) == (4, 2):
        return n ** (-10.0 / 13.0)
    return None


def bound_curves(pattern: Pattern, n_values: Sequence[int], c: float = 1.0, C: float = 1.0) -> List[BoundRow]:
    """Every curve at every n; None where a curve is outside its range."""
    rows = []
    balanced = is_balanced_closed_form(pattern)
    for n in sorted(set(n_values)):
        _check_n(n, 3)
        lower = general = general_pattern = upper = None
        if pattern.s >= 3:
            lower = lower_bound_p(pattern, n)
            general, general_pattern = general_lower_bound_p(pattern, n)
        if n >= 16:
            upper = upper_bound_p(pattern, n, C, require_balanced=False)
        rows.append(BoundRow(
            n=n,
            lower=lower,
            theorem_lower=theorem_lower_p(pattern, n, c),
            general_lower=general,
            general_pattern=general_pattern,
            upper=upper,
            upper_proven=balanced and upper is not None,
            known_reference=known_reference_p(pattern, n),
        ))
    return rows
