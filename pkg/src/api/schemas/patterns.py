from typing import List, Optional

from pydantic import BaseModel

from src.api.schemas.common import frac
from src.services.lemma_oracles import (
    Case3Report, DenseCountSummary, LemmaSuiteReport, OverlapInstance, OverlapReport,
)
from src.services.pattern_math import BalancednessReport, BoundRow, in_proven_range


class BalancednessOut(BaseModel):
    pattern: List[int]
    lam: str
    balanced: bool
    closed_form: bool
    density_condition_holds: bool
    worst_subgraph: List[int]
    worst_ratio: str
    worst_is_edge_deleted: bool
    in_proven_range: bool

    @classmethod
    def from_domain(cls, report: BalancednessReport, closed_form: bool) -> "BalancednessOut":
        return cls(
            pattern=[report.pattern.r, report.pattern.s],
            lam=frac(report.lam),
            balanced=report.balanced,
            closed_form=closed_form,
            density_condition_holds=report.density_condition_holds,
            worst_subgraph=list(report.worst_subgraph),
            worst_ratio=frac(report.worst_ratio),
            worst_is_edge_deleted=report.worst_is_edge_deleted,
            in_proven_range=in_proven_range(report.pattern),
        )


class BoundRowOut(BaseModel):
    n: int
    lower: Optional[float] = None
    theorem_lower: Optional[float] = None
    general_lower: Optional[float] = None
    general_pattern: Optional[List[int]] = None
    upper: Optional[float] = None
    upper_proven: bool
    known_reference: Optional[float] = None

    @classmethod
    def from_domain(cls, row: BoundRow) -> "BoundRowOut":
        return cls(
            n=row.n,
            lower=row.lower,
            theorem_lower=row.theorem_lower,
            general_lower=row.general_lower,
            general_pattern=list(row.general_pattern) if row.general_pattern else None,
            upper=row.upper,
            upper_proven=row.upper_proven,
            known_reference=row.known_reference,
        )


class BoundsOut(BaseModel):
    pattern: List[int]
    lam: str
    c: float
    C: float
    rows: List[BoundRowOut]


class OverlapInstanceOut(BaseModel):
    P: List[int]
    Q: List[int]

    @classmethod
    def from_domain(cls, instance: Optional[OverlapInstance]) -> Optional["OverlapInstanceOut"]:
        if instance is None:
            return None
        return cls(P=list(instance.P), Q=list(instance.Q))


class OverlapFailureOut(BaseModel):
    instance: OverlapInstanceOut
    slack: str


class ChainRecordOut(BaseModel):
    m: int
    rhs: str
    target: int
    holds: bool


class OverlapReportOut(BaseModel):
    check: str
    passed: bool
    instances: int
    worst: Optional[OverlapInstanceOut] = None
    worst_slack: Optional[str] = None
    failures: List[OverlapFailureOut] = []
    count_bound_passed: Optional[bool] = None
    chain: Optional[List[ChainRecordOut]] = None

    @classmethod
    def from_domain(cls, report: OverlapReport) -> "OverlapReportOut":
        out = cls(
            check=report.check,
            passed=report.passed,
            instances=report.instances,
            worst=OverlapInstanceOut.from_domain(report.worst),
            worst_slack=frac(report.worst_slack),
            failures=[
                OverlapFailureOut(instance=OverlapInstanceOut.from_domain(i), slack=frac(v))
                for i, v in report.failures
            ],
        )
        if isinstance(report, Case3Report):
            out.count_bound_passed = report.count_bound_passed
            out.chain = [
                ChainRecordOut(m=c.m, rhs=frac(c.rhs), target=c.target, holds=c.holds)
                for c in report.chain
            ]
        return out


class DenseMeanOut(BaseModel):
    m: int
    mean: float


class DenseCountOut(BaseModel):
    n: int
    p: float
    samples: int
    seed: int
    means: List[DenseMeanOut]

    @classmethod
    def from_domain(cls, summary: DenseCountSummary) -> "DenseCountOut":
        return cls(
            n=summary.n, p=summary.p, samples=summary.samples, seed=summary.seed,
            means=[DenseMeanOut(m=m, mean=v) for m, v in sorted(summary.means.items())],
        )


class LemmaSuiteOut(BaseModel):
    pattern: List[int]
    lam: str
    in_proven_range: bool
    passed: bool
    single: OverlapReportOut
    multi: OverlapReportOut
    case3: OverlapReportOut
    dense: Optional[DenseCountOut] = None

    @classmethod
    def from_domain(cls, report: LemmaSuiteReport) -> "LemmaSuiteOut":
        return cls(
            pattern=[report.pattern.r, report.pattern.s],
            lam=frac(report.pattern.lam),
            in_proven_range=report.in_proven_range,
            passed=report.passed,
            single=OverlapReportOut.from_domain(report.single),
            multi=OverlapReportOut.from_domain(report.multi),
            case3=OverlapReportOut.from_domain(report.case3),
            dense=DenseCountOut.from_domain(report.dense) if report.dense else None,
        )