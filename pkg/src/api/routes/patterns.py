from typing import List

from fastapi import APIRouter, Query

from src.api.dependencies import http_error, pattern_or_400
from src.api.schemas.common import frac
from src.api.schemas.patterns import BalancednessOut, BoundRowOut, BoundsOut, LemmaSuiteOut
from src.errors import BootstrapError
from src.services.lemma_oracles import verify_all
from src.services.pattern_math import bound_curves, is_balanced_brute_force, is_balanced_closed_form

router = APIRouter(prefix="/api/patterns", tags=["Patterns"])

@router.get("/{r}/{s}/balanced", response_model=BalancednessOut)
async def get_balancedness(r: int, s: int):
    pattern = pattern_or_400(r, s)
    try:
        report = is_balanced_brute_force(pattern)
    except BootstrapError as e:
        raise http_error(e)
    return BalancednessOut.from_domain(report, closed_form=is_balanced_closed_form(pattern))

@router.get("/{r}/{s}/bounds", response_model=BoundsOut)
async def get_bounds(r: int, s: int, n: List[int] = Query(...), c: float = 1.0, C: float = 1.0):
    """
    Evaluates every threshold curve at the requested n values.
    """
    pattern = pattern_or_400(r, s)
    try:
        rows = bound_curves(pattern, n, c=c, C=C)
    except BootstrapError as e:
        raise http_error(e)
    return BoundsOut(
        pattern=[pattern.r, pattern.s],
        lam=frac(pattern.lam),
        c=c,
        C=C,
        rows=[BoundRowOut.from_domain(row) for row in rows],
    )

@router.get("/{r}/{s}/lemmas", response_model=LemmaSuiteOut)
def get_lemma_report(r: int, s: int, m_max: int = 4):
    pattern = pattern_or_400(r, s)
    try:
        report = verify_all(pattern, m_max)
    except BootstrapError as e:
        raise http_error(e)
    return LemmaSuiteOut.from_domain(report)
