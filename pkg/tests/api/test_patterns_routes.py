# tests/api/test_patterns_routes.py
import pytest


@pytest.mark.parametrize("r, s, balanced", [(4, 3, True), (3, 3, False), (8, 4, True)])
def test_balancedness(client, r, s, balanced):
    response = client.get(f"/api/patterns/{r}/{s}/balanced")

    assert response.status_code == 200
    data = response.json()
    assert data["balanced"] is balanced
    assert data["closed_form"] is balanced

def test_balancedness_of_k53(client):
    data = client.get("/api/patterns/5/3/balanced").json()
    assert data["lam"] == "13/6"
    assert data["worst_subgraph"] == [4, 3]
    assert data["worst_ratio"] == "11/5"
    assert data["in_proven_range"] is False

def test_balancedness_over_cap(client):
    response = client.get("/api/patterns/65/3/balanced")
    assert response.status_code == 422

def test_bounds(client):
    response = client.get("/api/patterns/4/3/bounds", params=[("n", 1000), ("n", 100)])

    assert response.status_code == 200
    data = response.json()
    assert data["lam"] == "2"
    assert [row["n"] for row in data["rows"]] == [100, 1000]
    assert all(row["upper"] > row["lower"] for row in data["rows"])

def test_bounds_require_n(client):
    response = client.get("/api/patterns/4/3/bounds")
    assert response.status_code == 422

def test_bounds_reject_tiny_n(client):
    response = client.get("/api/patterns/4/3/bounds", params={"n": 2})
    assert response.status_code == 400

def test_lemma_report_for_k53(client):
    response = client.get("/api/patterns/5/3/lemmas", params={"m_max": 3})

    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is False
    assert data["single"]["worst"] == {"P": [4], "Q": [3]}
    assert data["single"]["worst_slack"] == "-1/6"
    assert data["multi"]["passed"] is True
    assert data["case3"]["count_bound_passed"] is True

def test_lemma_report_outside_domain(client):
    response = client.get("/api/patterns/3/2/lemmas")
    assert response.status_code == 422

def test_lemma_report_bad_m_max(client):
    response = client.get("/api/patterns/4/3/lemmas", params={"m_max": 1})
    assert response.status_code == 400
