"""
Monte Carlo estimation of percolation probabilities on G(n, p), threshold
bisection and scaling sweeps.

Every trial i of a batch samples G(n, p) from seed derive_seed(base, i).
Trials are independent tasks; results are merged by trial index, so the
worker count never changes an outcome.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from scipy.stats import linregress
from statsmodels.stats.proportion import proportion_confint

from src.config import settings
from src.errors import BootstrapError, BracketError, InputError, InvariantViolation
from src.models.graph import GnpSpec, sample_gnp
from src.models.pattern import Pattern, lambda_
from src.services.closure_engine import percolates
from src.services.pattern_math import in_proven_range, lower_bound_p, upper_bound_p
from src.utils.seeds import check_seed, derive_seed

logger = logging.getLogger(__name__)

HALF = 0.5
CONFIDENCE_ALPHA = 0.05
FALLBACK_BRACKET = (1e-4, 0.999)


@dataclass(frozen=True)
class TrialBatch:
    n: int
    pattern: Pattern
    p: float
    trials: int
    base_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise InputError(f"trials must be at least 1, got {self.trials}")
        if self.n < 1:
            raise InputError(f"vertex count must be positive, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise InputError(f"probability must lie in [0, 1], got {self.p}")
        check_seed(self.base_seed)

    def seeds(self) -> List[int]:
        return [derive_seed(self.base_seed, i) for i in range(self.trials)]


@dataclass(frozen=True)
class Estimate:
    n: int
    pattern: Pattern
    p: float
    trials: int
    successes: int
    ci_lo: float
    ci_hi: float
    seed: int

    @property
    def fraction(self) -> float:
        return self.successes / self.trials


def _run_trial(task: Tuple[int, float, int, int, int]) -> bool:
    """Top-level so a process pool can pickle it."""
    n, p, seed, r, s = task
    return percolates(sample_gnp(GnpSpec(n=n, p=p, seed=seed)), Pattern(r, s))


def run_trials(batch: TrialBatch, workers: Optional[int] = None) -> List[bool]:
    workers = settings.WORKERS if workers is None else workers
    if workers < 1:
        raise InputError(f"workers must be at least 1, got {workers}")
    tasks = [(batch.n, batch.p, seed, batch.pattern.r, batch.pattern.s) for seed in batch.seeds()]
    if workers == 1 or len(tasks) == 1:
        return [_run_trial(task) for task in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_trial, tasks, chunksize=chunk))


def wilson_interval(successes: int, trials: int) -> Tuple[float, float]:
    lo, hi = proportion_confint(successes, trials, alpha=CONFIDENCE_ALPHA, method="wilson")
    return max(0.0, float(lo)), min(1.0, float(hi))


def estimate_probability(batch: TrialBatch, workers: Optional[int] = None) -> Estimate:
    outcomes = run_trials(batch, workers)
    successes = sum(outcomes)
    ci_lo, ci_hi = wilson_interval(successes, batch.trials)
    estimate = Estimate(
        n=batch.n, pattern=batch.pattern, p=batch.p, trials=batch.trials,
        successes=successes, ci_lo=ci_lo, ci_hi=ci_hi, seed=batch.base_seed,
    )
    logger.info("probe n=%d %s p=%r: %d/%d percolated", batch.n, batch.pattern,
                batch.p, successes, batch.trials)
    return estimate


def default_bracket(pattern: Pattern, n: int) -> Tuple[float, float]:
    if in_proven_range(pattern):
        lb = lower_bound_p(pattern, n)
        return lb / 4, min(1.0, 40 * lb)
    return FALLBACK_BRACKET


@dataclass(frozen=True)
class ThresholdSearch:
    n: int
    pattern: Pattern
    trials_per_probe: int = settings.DEFAULT_TRIALS
    bracket: Optional[Tuple[float, float]] = None
    rel_tol: float = settings.DEFAULT_REL_TOL
    base_seed: int = settings.DEFAULT_SEED
    max_expansions: int = settings.MAX_EXPANSIONS

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise InputError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.trials_per_probe < 1:
            raise InputError(f"trials must be at least 1, got {self.trials_per_probe}")
        if self.bracket is not None:
            lo, hi = self.bracket
            if not 0.0 < lo < hi <= 1.0:
                raise InputError(f"bracket must satisfy 0 < lo < hi <= 1, got ({lo}, {hi})")
        check_seed(self.base_seed)

    def initial_bracket(self) -> Tuple[float, float]:
        return self.bracket if self.bracket is not None else default_bracket(self.pattern, self.n)


@dataclass(frozen=True)
class Probe:
    index: int
    kind: str  # bracket | bisect
    estimate: Estimate

    @property
    def p(self) -> float:
        return self.estimate.p


@dataclass
class ThresholdResult:
    search: ThresholdSearch
    p_hat: float
    lo: float
    hi: float
    probes: List[Probe] = field(default_factory=list)
    expansions: int = 0

    @property
    def half_width(self) -> float:
        return (self.hi - self.lo) / 2


Estimator = Callable[[TrialBatch, Optional[int]], Estimate]


def find_threshold(search: ThresholdSearch, workers: Optional[int] = None,
                   estimator: Optional[Estimator] = None) -> ThresholdResult:
    """
    Bisection on the predicate "fraction >= 1/2", keeping the estimate below
    one half at lo and at least one half at hi, until (hi - lo) / hi <= rel_tol.

    Every probe reuses the same base seed, so trial i sees nested graphs as p
    grows and the estimated fractions are monotone in p.
    """
    estimator = estimator or estimate_probability
    pattern, n = search.pattern, search.n
    if n < pattern.vertex_count:
        raise BracketError(f"n={n} is smaller than {pattern.vertex_count} vertices; nothing can percolate below p=1")

    lo, hi = search.initial_bracket()
    result = ThresholdResult(search=search, p_hat=math.nan, lo=lo, hi=hi)

    def probe(p: float, kind: str) -> float:
        batch = TrialBatch(n=n, pattern=pattern, p=p, trials=search.trials_per_probe,
                           base_seed=search.base_seed)
        estimate = estimator(batch, workers)
        result.probes.append(Probe(index=len(result.probes), kind=kind, estimate=estimate))
        return estimate.fraction

    lo_fraction = probe(lo, "bracket")
    hi_fraction = probe(hi, "bracket")
    while lo_fraction >= HALF:
        if result.expansions >= search.max_expansions:
            raise BracketError(f"no p below one half found after {result.expansions} expansions (lo={lo})")
        lo /= 2
        result.expansions += 1
        logger.info("bracket expansion %d: lo -> %r", result.expansions, lo)
        lo_fraction = probe(lo, "bracket")
    while hi_fraction < HALF:
        if hi >= 1.0 or result.expansions >= search.max_expansions:
            raise BracketError(f"no p reaching one half found after {result.expansions} expansions (hi={hi})")
        hi = min(1.0, 2 * hi)
        result.expansions += 1
        logger.info("bracket expansion %d: hi -> %r", result.expansions, hi)
        hi_fraction = probe(hi, "bracket")

    while (hi - lo) / hi > search.rel_tol:
        mid = (lo + hi) / 2
        if probe(mid, "bisect") >= HALF:
            hi = mid
        else:
            lo = mid

    result.lo, result.hi = lo, hi
    result.p_hat = (lo + hi) / 2
    logger.info("threshold n=%d %s: p_hat=%r in [%r, %r] after %d probes",
                n, pattern, result.p_hat, lo, hi, len(result.probes))
    return result


@dataclass(frozen=True)
class ScalingRow:
    n: int
    seed: int
    trials: int
    status: str  # ok | failed
    p_hat: Optional[float] = None
    half_width: Optional[float] = None
    lower_curve: Optional[float] = None
    upper_curve: Optional[float] = None
    error: Optional[str] = None


@dataclass
class ScalingResult:
    pattern: Pattern
    rows: List[ScalingRow]
    theory_exponent: Fraction
    fitted_exponent: Optional[float] = None
    intercept: Optional[float] = None
    r_squared: Optional[float] = None

    @property
    def failed(self) -> List[ScalingRow]:
        return [row for row in self.rows if row.status != "ok"]


def theory_exponent(pattern: Pattern) -> Fraction:
    return -1 / lambda_(pattern)


def _reference_curves(pattern: Pattern, n: int) -> Tuple[Optional[float], Optional[float]]:
    lower = lower_bound_p(pattern, n) if pattern.s >= 3 else None
    upper = upper_bound_p(pattern, n, 1.0, require_balanced=False) if n >= 16 else None
    return lower, upper


def sweep_scaling(pattern: Pattern, n_list: Sequence[int], trials_per_probe: int = settings.DEFAULT_TRIALS,
                  rel_tol: float = settings.DEFAULT_REL_TOL, base_seed: int = settings.DEFAULT_SEED,
                  workers: Optional[int] = None, estimator: Optional[Estimator] = None) -> ScalingResult:
    """
    One threshold search per n, seeded with derive_seed(base_seed, n), then
    the least-squares slope of log p_hat against log n over successful rows.
    """
    n_values = sorted(set(n_list))
    if len(n_values) < 3:
        raise InputError(f"a sweep needs at least 3 distinct n values, got {n_values}")
    smallest = pattern.vertex_count + 1
    if n_values[0] < smallest:
        raise InputError(f"every n must be at least {smallest} for {pattern}, got {n_values[0]}")
    check_seed(base_seed)

    rows = []
    for n in n_values:
        seed = derive_seed(base_seed, n)
        lower, upper = _reference_curves(pattern, n)
        try:
            found = find_threshold(
                ThresholdSearch(n=n, pattern=pattern, trials_per_probe=trials_per_probe,
                                rel_tol=rel_tol, base_seed=seed),
                workers=workers, estimator=estimator,
            )
        except InvariantViolation:
            raise
        except BootstrapError as e:
            logger.warning("sweep row n=%d failed: %s", n, e)
            rows.append(ScalingRow(n=n, seed=seed, trials=trials_per_probe, status="failed",
                                   lower_curve=lower, upper_curve=upper, error=str(e)))
            continue
        rows.append(ScalingRow(n=n, seed=seed, trials=trials_per_probe, status="ok",
                               p_hat=found.p_hat, half_width=found.half_width,
                               lower_curve=lower, upper_curve=upper))

    result = ScalingResult(pattern=pattern, rows=rows, theory_exponent=theory_exponent(pattern))
    ok = [row for row in rows if row.status == "ok"]
    if len(ok) >= 3:
        fit = linregress([math.log(row.n) for row in ok], [math.log(row.p_hat) for row in ok])
        result.fitted_exponent = float(fit.slope)
        result.intercept = float(fit.intercept)
        result.r_squared = float(fit.rvalue ** 2)
        logger.info("sweep %s: fitted exponent %.4f, theory %.4f",
                    pattern, result.fitted_exponent, float(result.theory_exponent))
    else:
        logger.warning("sweep %s: only %d successful rows, no fit", pattern, len(ok))
    return result
