from typing import List

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from .config import settings
from .models import Base

connect_args = {"check_same_thread": False} if settings.is_sqlite else {}
engine = create_engine(settings.database_url, connect_args=connect_args)
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

def init_db(bind=None) -> List[str]:
    """Creates the results tables that are missing. Returns all table names."""
    Base.metadata.create_all(bind=bind if bind is not None else engine)
    return sorted(Base.metadata.tables)

def get_db():
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()
