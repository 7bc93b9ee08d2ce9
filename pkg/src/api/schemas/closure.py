from typing import List, Optional

from pydantic import BaseModel

from src.api.schemas.common import edge_pair
from src.services.closure_engine import ClosureResult, CopyWitness
from src.services.witness_tracker import RunAudit, SandwichReport


class ClosureRequest(BaseModel):
    r: int
    s: int
    edge_list: str
    witness: bool = False


class CopyOut(BaseModel):
    side_a: List[int]
    side_b: List[int]

    @classmethod
    def from_domain(cls, copy: Optional[CopyWitness]) -> Optional["CopyOut"]:
        if copy is None:
            return None
        return cls(side_a=list(copy.side_a), side_b=list(copy.side_b))


class InfectionStepOut(BaseModel):
    t: int
    edge: List[int]
    copy_witness: Optional[CopyOut] = None


class ViolationOut(BaseModel):
    check: str
    edge: Optional[List[int]] = None
    t: Optional[int] = None
    detail: str


class EdgeOutcomeOut(BaseModel):
    edge: List[int]
    m: int
    e_F: int
    nu_F: int
    depth: int
    passed: bool


class SandwichOut(BaseModel):
    L: int
    status: str
    edge: Optional[List[int]] = None
    size: Optional[int] = None

    @classmethod
    def from_domain(cls, report: Optional[SandwichReport]) -> Optional["SandwichOut"]:
        if report is None:
            return None
        return cls(L=report.L, status=report.status, edge=edge_pair(report.edge), size=report.size)


class AuditOut(BaseModel):
    pattern: List[int]
    n: int
    seed: Optional[int] = None
    percolated: bool
    infections: int
    status: str
    passed: bool
    sandwich: Optional[SandwichOut] = None
    outcomes: List[EdgeOutcomeOut]
    violations: List[ViolationOut]

    @classmethod
    def from_domain(cls, audit: RunAudit) -> "AuditOut":
        return cls(
            pattern=[audit.pattern.r, audit.pattern.s],
            n=audit.n,
            seed=audit.seed,
            percolated=audit.percolated,
            infections=audit.infections,
            status=audit.status,
            passed=audit.passed,
            sandwich=SandwichOut.from_domain(audit.sandwich),
            outcomes=[
                EdgeOutcomeOut(edge=edge_pair(o.edge), m=o.m, e_F=o.e_F, nu_F=o.nu_F,
                               depth=o.depth, passed=o.passed)
                for o in audit.outcomes
            ],
            violations=[
                ViolationOut(check=v.check, edge=edge_pair(v.edge), t=v.t, detail=v.detail)
                for v in audit.violations
            ],
        )


class ClosureOut(BaseModel):
    pattern: List[int]
    n: int
    initial_edges: int
    final_edges: int
    infections: int
    percolated: bool
    trace: List[InfectionStepOut]
    audit: Optional[AuditOut] = None

    @classmethod
    def from_domain(cls, result: ClosureResult, audit: Optional[RunAudit] = None) -> "ClosureOut":
        return cls(
            pattern=[result.pattern.r, result.pattern.s],
            n=result.final.n,
            initial_edges=result.initial.edge_count,
            final_edges=result.final.edge_count,
            infections=result.infection_count,
            percolated=result.percolated,
            trace=[
                InfectionStepOut(t=step.t, edge=edge_pair(step.edge), copy_witness=CopyOut.from_domain(step.copy))
                for step in result.trace
            ],
            audit=AuditOut.from_domain(audit) if audit is not None else None,
        )


class AuditSuiteOut(BaseModel):
    pattern: List[int]
    n: int
    p: float
    seed: int
    runs: List[AuditOut]
    percolated_runs: int
    total_violations: int


class PercolatesOut(BaseModel):
    pattern: List[int]
    n: int
    percolated: bool
