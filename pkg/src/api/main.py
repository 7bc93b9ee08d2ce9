import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from src import __version__
from src.config import settings
from src.database import init_db
from .routes import closure, config, experiments, patterns, runs

logging.basicConfig(level=settings.LOG_LEVEL)
logger = logging.getLogger(__name__)

@asynccontextmanager
async def lifespan(app: FastAPI):
    tables = init_db()
    logger.info("results tables ready: %s", ", ".join(tables))
    yield

app = FastAPI(
    title="Bootstrap Percolation API",
    description="K_{r,s} graph bootstrap closures, threshold experiments and lemma checks",
    version=__version__,
    lifespan=lifespan,
)

# CORS Middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include API routers
app.include_router(config.router)
app.include_router(closure.router)
app.include_router(patterns.router)
app.include_router(experiments.router)
app.include_router(runs.router)
