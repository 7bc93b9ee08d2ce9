import uuid
from dataclasses import asdict
from datetime import datetime
from typing import List, Optional

from pydantic import BaseModel

from src.api.schemas.common import frac
from src.config import settings
from src.services.experiment_service import Estimate, Probe, ScalingResult, ThresholdResult

CSV_HEADER = "n,pattern_r,pattern_s,p,trials,percolated_fraction,ci_lo,ci_hi,seed"


class EstimateRequest(BaseModel):
    n: int
    r: int
    s: int
    p: float
    trials: int = settings.DEFAULT_TRIALS
    seed: int = settings.DEFAULT_SEED
    store: bool = False


class ThresholdRequest(BaseModel):
    n: int
    r: int
    s: int
    trials: int = settings.DEFAULT_TRIALS
    rel_tol: float = settings.DEFAULT_REL_TOL
    seed: int = settings.DEFAULT_SEED
    lo: Optional[float] = None
    hi: Optional[float] = None
    store: bool = False


class EstimateOut(BaseModel):
    n: int
    pattern_r: int
    pattern_s: int
    p: float
    trials: int
    percolated_fraction: float
    ci_lo: float
    ci_hi: float
    seed: int
    run_id: Optional[str] = None

    @classmethod
    def from_domain(cls, estimate: Estimate) -> "EstimateOut":
        return cls(
            n=estimate.n,
            pattern_r=estimate.pattern.r,
            pattern_s=estimate.pattern.s,
            p=estimate.p,
            trials=estimate.trials,
            percolated_fraction=estimate.fraction,
            ci_lo=estimate.ci_lo,
            ci_hi=estimate.ci_hi,
            seed=estimate.seed,
        )


class ProbeOut(EstimateOut):
    index: int
    kind: str

    @classmethod
    def from_probe(cls, probe: Probe) -> "ProbeOut":
        base = EstimateOut.from_domain(probe.estimate)
        return cls(index=probe.index, kind=probe.kind, **base.model_dump(exclude={"run_id"}))


class ThresholdOut(BaseModel):
    n: int
    pattern_r: int
    pattern_s: int
    trials: int
    rel_tol: float
    seed: int
    p_hat: float
    lo: float
    hi: float
    half_width: float
    expansions: int
    probes: List[ProbeOut]
    baseline: Optional[str] = None
    run_id: Optional[str] = None

    @classmethod
    def from_domain(cls, result: ThresholdResult) -> "ThresholdOut":
        search = result.search
        return cls(
            n=search.n,
            pattern_r=search.pattern.r,
            pattern_s=search.pattern.s,
            trials=search.trials_per_probe,
            rel_tol=search.rel_tol,
            seed=search.base_seed,
            p_hat=result.p_hat,
            lo=result.lo,
            hi=result.hi,
            half_width=result.half_width,
            expansions=result.expansions,
            probes=[ProbeOut.from_probe(p) for p in result.probes],
        )


class ScalingRowOut(BaseModel):
    n: int
    seed: int
    trials: int
    status: str
    p_hat: Optional[float] = None
    half_width: Optional[float] = None
    lower_curve: Optional[float] = None
    upper_curve: Optional[float] = None
    error: Optional[str] = None


class ScalingOut(BaseModel):
    pattern_r: int
    pattern_s: int
    theory_exponent: str
    theory_exponent_value: float
    fitted_exponent: Optional[float] = None
    intercept: Optional[float] = None
    r_squared: Optional[float] = None
    rows: List[ScalingRowOut]

    @classmethod
    def from_domain(cls, result: ScalingResult) -> "ScalingOut":
        return cls(
            pattern_r=result.pattern.r,
            pattern_s=result.pattern.s,
            theory_exponent=frac(result.theory_exponent),
            theory_exponent_value=float(result.theory_exponent),
            fitted_exponent=result.fitted_exponent,
            intercept=result.intercept,
            r_squared=result.r_squared,
            rows=[ScalingRowOut(**asdict(row)) for row in result.rows],
        )


class ProbeRecordOut(BaseModel):
    index: int
    kind: str
    p: float
    fraction: float
    ci_lo: Optional[float] = None
    ci_hi: Optional[float] = None

    class Config:
        from_attributes = True


class ExperimentRunOut(BaseModel):
    id: uuid.UUID
    kind: str
    n: int
    pattern_r: int
    pattern_s: int
    trials: int
    seed: str
    p: Optional[float] = None
    fraction: Optional[float] = None
    p_hat: Optional[float] = None
    bracket_lo: Optional[float] = None
    bracket_hi: Optional[float] = None
    rel_tol: Optional[float] = None
    ci_lo: Optional[float] = None
    ci_hi: Optional[float] = None
    created_at: datetime
    probes: List[ProbeRecordOut] = []

    class Config:
        from_attributes = True
