from typing import Dict, List, Optional

from sqlalchemy import func
from sqlalchemy.orm import Session

from src.models.experiment_run import ExperimentRun, ProbeRecord
from src.models.pattern import Pattern
from src.services.experiment_service import Estimate, ThresholdResult


class ResultsStore:
    def __init__(self, db: Session):
        self.db = db

    def save_estimate(self, estimate: Estimate) -> ExperimentRun:
        run = ExperimentRun(
            kind='estimate',
            n=estimate.n,
            pattern_r=estimate.pattern.r,
            pattern_s=estimate.pattern.s,
            trials=estimate.trials,
            seed=str(estimate.seed),
            p=estimate.p,
            fraction=estimate.fraction,
            ci_lo=estimate.ci_lo,
            ci_hi=estimate.ci_hi,
        )
        self.db.add(run)
        self.db.commit()
        self.db.refresh(run)
        return run

    def save_threshold(self, result: ThresholdResult) -> ExperimentRun:
        """Stores the search with every probe in order."""
        search = result.search
        run = ExperimentRun(
            kind='threshold',
            n=search.n,
            pattern_r=search.pattern.r,
            pattern_s=search.pattern.s,
            trials=search.trials_per_probe,
            seed=str(search.base_seed),
            p_hat=result.p_hat,
            bracket_lo=result.lo,
            bracket_hi=result.hi,
            rel_tol=search.rel_tol,
            ci_lo=result.p_hat - result.half_width,
            ci_hi=result.p_hat + result.half_width,
        )
        run.probes = [
            ProbeRecord(
                index=probe.index,
                kind=probe.kind,
                p=probe.p,
                fraction=probe.estimate.fraction,
                ci_lo=probe.estimate.ci_lo,
                ci_hi=probe.estimate.ci_hi,
            )
            for probe in result.probes
        ]
        self.db.add(run)
        self.db.commit()
        self.db.refresh(run)
        return run

    def list_runs(self, limit: int = 50, kind: Optional[str] = None) -> List[ExperimentRun]:
        query = self.db.query(ExperimentRun)
        if kind:
            query = query.filter(ExperimentRun.kind == kind)
        return query.order_by(ExperimentRun.created_at.desc()).limit(limit).all()

    def count_runs(self) -> Dict[str, int]:
        """Stored runs per kind; kinds without runs are reported as 0."""
        counts = dict(
            self.db.query(ExperimentRun.kind, func.count(ExperimentRun.id))
            .group_by(ExperimentRun.kind)
            .all()
        )
        return {kind: counts.get(kind, 0) for kind in ("estimate", "threshold")}

    def get_run(self, run_id) -> Optional[ExperimentRun]:
        return self.db.query(ExperimentRun).filter(ExperimentRun.id == run_id).first()

    def baseline_for(self, n: int, pattern: Pattern, trials: int, rel_tol: float, seed: int) -> Optional[ExperimentRun]:
        """Latest stored threshold run with identical parameters."""
        return (
            self.db.query(ExperimentRun)
            .filter(
                ExperimentRun.kind == 'threshold',
                ExperimentRun.n == n,
                ExperimentRun.pattern_r == pattern.r,
                ExperimentRun.pattern_s == pattern.s,
                ExperimentRun.trials == trials,
                ExperimentRun.rel_tol == rel_tol,
                ExperimentRun.seed == str(seed),
            )
            .order_by(ExperimentRun.created_at.desc())
            .first()
        )

    def baseline_status(self, result: ThresholdResult) -> str:
        """match | mismatch | new, comparing p_hat bit for bit with the stored baseline."""
        search = result.search
        baseline = self.baseline_for(search.n, search.pattern, search.trials_per_probe,
                                     search.rel_tol, search.base_seed)
        if baseline is None:
            return "new"
        return "match" if baseline.p_hat == result.p_hat else "mismatch"
