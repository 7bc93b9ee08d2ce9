from typing import List, Optional
from uuid import UUID

from fastapi import APIRouter, Depends, HTTPException
from sqlalchemy.orm import Session

from src.api.dependencies import get_db
from src.api.schemas.experiments import ExperimentRunOut
from src.services.results_store import ResultsStore

router = APIRouter(prefix="/api/runs", tags=["Runs"])

@router.get("/", response_model=List[ExperimentRunOut])
async def list_runs(kind: Optional[str] = None, limit: int = 50, db: Session = Depends(get_db)):
    """
    Stored experiment runs, newest first.
    """
    if kind is not None and kind not in ("estimate", "threshold"):
        raise HTTPException(status_code=400, detail="kind must be 'estimate' or 'threshold'")
    return ResultsStore(db).list_runs(limit=limit, kind=kind)

@router.get("/{run_id}", response_model=ExperimentRunOut)
async def get_run(run_id: UUID, db: Session = Depends(get_db)):
    run = ResultsStore(db).get_run(run_id)
    if not run:
        raise HTTPException(status_code=404, detail="Run not found")
    return run
