import os
import pytest
from sqlalchemy import create_engine, event
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool
from fastapi.testclient import TestClient

# --- Set env vars BEFORE any other imports ---
os.environ.update({
    "DATABASE_URL": "sqlite:///:memory:",
    "BOOTSTRAP_WORKERS": "1",
    "BOOTSTRAP_TRIALS": "20",
    "BOOTSTRAP_SEED": "0",
    "LOG_LEVEL": "WARNING",
})

# --- Import all models to register them with Base ---
from src.models.base import Base
from src.models.experiment_run import ExperimentRun, ProbeRecord

# --- Now, import the app and dependencies ---
from src.api.main import app
from src.api.dependencies import get_db
from src.database import init_db

# --- Test DB Setup ---
SQLALCHEMY_DATABASE_URL = "sqlite:///:memory:"
engine = create_engine(
    SQLALCHEMY_DATABASE_URL, connect_args={"check_same_thread": False}, poolclass=StaticPool
)

# pysqlite does not emit BEGIN itself, so the per-test rollback below would not
# undo savepoint-released commits; take over transaction control (SQLAlchemy's
# documented pysqlite recipe) so the rollback really isolates each test.
@event.listens_for(engine, "connect")
def _disable_pysqlite_transactions(dbapi_connection, connection_record):
    dbapi_connection.isolation_level = None

@event.listens_for(engine, "begin")
def _emit_begin(conn):
    conn.exec_driver_sql("BEGIN")

TestingSessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

@pytest.fixture(scope="session", autouse=True)
def setup_database():
    init_db(bind=engine)
    yield
    Base.metadata.drop_all(bind=engine)

# --- Dependency Overrides & Fixtures ---

# Transactional scope around each test; everything is rolled back afterwards.
@pytest.fixture(scope="function")
def db_session():
    connection = engine.connect()
    transaction = connection.begin()
    session = TestingSessionLocal(bind=connection, join_transaction_mode="create_savepoint")

    def override_get_db():
        yield session

    app.dependency_overrides[get_db] = override_get_db

    yield session

    session.close()
    transaction.rollback()
    connection.close()
    app.dependency_overrides.clear()


@pytest.fixture(scope="function")
def client(db_session):
    with TestClient(app) as c:
        yield c
