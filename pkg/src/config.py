import os
from dotenv import load_dotenv

load_dotenv()

class Settings:
    # Database
    DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///bootstrap_runs.db")

    @property
    def database_url(self):
        return self.DATABASE_URL

    @property
    def is_sqlite(self):
        return self.DATABASE_URL.startswith("sqlite")

    # Monte Carlo
    WORKERS = int(os.getenv("BOOTSTRAP_WORKERS", os.cpu_count() or 1))
    DEFAULT_TRIALS = int(os.getenv("BOOTSTRAP_TRIALS", 200))
    DEFAULT_REL_TOL = float(os.getenv("BOOTSTRAP_REL_TOL", 0.05))
    DEFAULT_SEED = int(os.getenv("BOOTSTRAP_SEED", 0))
    MAX_EXPANSIONS = int(os.getenv("BOOTSTRAP_MAX_EXPANSIONS", 20))

    # Input
    MAX_VERTICES = int(os.getenv("BOOTSTRAP_MAX_VERTICES", 100000))

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

settings = Settings()
