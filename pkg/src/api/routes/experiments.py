from fastapi import APIRouter, Depends
from sqlalchemy.orm import Session

from src.api.dependencies import get_db, http_error, pattern_or_400
from src.api.schemas.experiments import EstimateOut, EstimateRequest, ThresholdOut, ThresholdRequest
from src.errors import BootstrapError, InputError
from src.services.experiment_service import (
    ThresholdSearch, TrialBatch, estimate_probability, find_threshold,
)
from src.services.results_store import ResultsStore

router = APIRouter(prefix="/api/experiments", tags=["Experiments"])

@router.post("/estimate", response_model=EstimateOut)
def run_estimate(request: EstimateRequest, db: Session = Depends(get_db)):
    """
    Fraction of G(n, p) samples that percolate, with a 95% Wilson interval.
    """
    pattern = pattern_or_400(request.r, request.s)
    try:
        estimate = estimate_probability(
            TrialBatch(n=request.n, pattern=pattern, p=request.p,
                       trials=request.trials, base_seed=request.seed)
        )
    except BootstrapError as e:
        raise http_error(e)

    response = EstimateOut.from_domain(estimate)
    if request.store:
        run = ResultsStore(db).save_estimate(estimate)
        response.run_id = str(run.id)
    return response

@router.post("/threshold", response_model=ThresholdOut)
def run_threshold(request: ThresholdRequest, db: Session = Depends(get_db)):
    """
    Bisection for the smallest p where at least half the samples percolate.
    Stored searches are compared against the previous run with the same parameters.
    """
    pattern = pattern_or_400(request.r, request.s)
    bracket = None
    if request.lo is not None or request.hi is not None:
        if request.lo is None or request.hi is None:
            raise http_error(InputError("lo and hi must be given together"))
        bracket = (request.lo, request.hi)
    try:
        result = find_threshold(ThresholdSearch(
            n=request.n, pattern=pattern, trials_per_probe=request.trials,
            bracket=bracket, rel_tol=request.rel_tol, base_seed=request.seed,
        ))
    except BootstrapError as e:
        raise http_error(e)

    response = ThresholdOut.from_domain(result)
    if request.store:
        store = ResultsStore(db)
        response.baseline = store.baseline_status(result)
        response.run_id = str(store.save_threshold(result).id)
    return response
