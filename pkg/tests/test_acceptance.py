"""Desk-scale runs; minutes each. Run with `pytest -m slow`."""
import math
import os

import pytest

from src.models.graph import GnpSpec, sample_gnp
from src.models.pattern import Pattern
from src.services.closure_engine import percolates
from src.services.experiment_service import TrialBatch, estimate_probability, sweep_scaling
from src.services.witness_tracker import CHECKED, audit_closure
from src.utils.seeds import derive_seed

pytestmark = pytest.mark.slow

WORKERS = os.cpu_count() or 1
P_LADDER = [0.25 + 0.05 * i for i in range(15)]


def near_threshold_runs(pattern, count, base_seed):
    """Seeded percolating graphs, each at the first ladder p where its sample percolates."""
    runs = []
    i = 0
    while len(runs) < count:
        n = 8 + i % 23
        seed = derive_seed(base_seed, i)
        for p in P_LADDER:
            graph = sample_gnp(GnpSpec(n=n, p=p, seed=seed))
            if percolates(graph, pattern):
                runs.append((graph, seed))
                break
        i += 1
    return runs


@pytest.mark.parametrize("pattern", [Pattern(3, 3), Pattern(4, 3)])
def test_structural_checks_on_percolating_runs(pattern):
    for graph, seed in near_threshold_runs(pattern, 100, base_seed=2024):
        audit = audit_closure(graph, pattern, seed=seed, sandwich_L=2)
        assert audit.status == CHECKED
        assert audit.percolated
        assert audit.violations == [], (graph.n, seed, audit.violations[:3])
        assert audit.sandwich.status in ("pass", "vacuous")


def test_k23_threshold_location():
    n = 300
    pattern = Pattern(2, 3)
    log_ratio = math.log(n) / n
    above = estimate_probability(TrialBatch(n=n, pattern=pattern, p=2 * log_ratio, trials=100, base_seed=1),
                                 workers=WORKERS)
    below = estimate_probability(TrialBatch(n=n, pattern=pattern, p=0.3 * log_ratio, trials=100, base_seed=1),
                                 workers=WORKERS)
    assert above.fraction >= 0.9
    assert below.fraction <= 0.1


def test_k33_scaling_exponent():
    result = sweep_scaling(Pattern(3, 3), [60, 120, 240, 480], trials_per_probe=200,
                           rel_tol=0.05, base_seed=0, workers=WORKERS)
    assert result.failed == []
    assert -0.75 <= result.fitted_exponent <= -0.40
    for row in result.rows:
        if row.n in (120, 240):
            assert row.lower_curve <= row.p_hat <= 10 * row.upper_curve
