# tests/api/test_runs_routes.py
from uuid import uuid4

import pytest

from src.models.pattern import Pattern
from src.services.experiment_service import ThresholdSearch, find_threshold
from src.services.results_store import ResultsStore
from tests.helpers import constant, step_estimator


@pytest.fixture
def stored_threshold(db_session):
    search = ThresholdSearch(n=40, pattern=Pattern(3, 3), trials_per_probe=5, bracket=(0.1, 0.9), rel_tol=0.1)
    result = find_threshold(search, estimator=step_estimator(constant(0.45)))
    return ResultsStore(db_session).save_threshold(result), result

def test_list_runs(client, stored_threshold):
    run, _ = stored_threshold
    response = client.get("/api/runs/")

    assert response.status_code == 200
    data = response.json()
    assert [item["id"] for item in data] == [str(run.id)]
    assert data[0]["kind"] == "threshold"

def test_list_runs_by_kind(client, stored_threshold):
    assert client.get("/api/runs/", params={"kind": "estimate"}).json() == []
    assert len(client.get("/api/runs/", params={"kind": "threshold"}).json()) == 1

def test_list_runs_bad_kind(client):
    response = client.get("/api/runs/", params={"kind": "sweep"})
    assert response.status_code == 400

def test_get_run_with_probes(client, stored_threshold):
    run, result = stored_threshold
    response = client.get(f"/api/runs/{run.id}")

    assert response.status_code == 200
    data = response.json()
    assert data["p_hat"] == result.p_hat
    assert data["seed"] == "0"
    assert [p["p"] for p in data["probes"]] == [p.p for p in result.probes]

def test_get_run_not_found(client):
    response = client.get(f"/api/runs/{uuid4()}")
    assert response.status_code == 404
    assert response.json()["detail"] == "Run not found"
