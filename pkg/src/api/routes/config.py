from fastapi import APIRouter
from pydantic import BaseModel

from src import __version__
from src.config import settings

router = APIRouter(prefix="/api/config", tags=["Config"])

class EngineConfig(BaseModel):
    version: str
    workers: int
    default_trials: int
    default_rel_tol: float
    default_seed: int
    max_expansions: int
    max_vertices: int

@router.get("/", response_model=EngineConfig)
async def get_engine_config():
    """
    Provides the engine defaults used when a request leaves them out.
    """
    return EngineConfig(
        version=__version__,
        workers=settings.WORKERS,
        default_trials=settings.DEFAULT_TRIALS,
        default_rel_tol=settings.DEFAULT_REL_TOL,
        default_seed=settings.DEFAULT_SEED,
        max_expansions=settings.MAX_EXPANSIONS,
        max_vertices=settings.MAX_VERTICES,
    )
