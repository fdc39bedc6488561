"""HTTP service endpoints."""

import json

import pytest
from fastapi.testclient import TestClient

import fastapi_server
from fastapi_server import app

DRINKER = "rel P/1\nfun c/0\n|- exists x. (~P(x) \\/ forall y. P(y))"


@pytest.fixture
def client():
    return TestClient(app)


@pytest.fixture
def axiom_document(fixtures_dir):
    return json.loads((fixtures_dir / "axiom.proof").read_text())


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert set(data["policies"]) == {"full", "restricted", "conjunctive"}


def test_check_gs(client, axiom_document):
    response = client.post("/check-gs", json=axiom_document)
    assert response.status_code == 200
    assert response.json()["ok"] is True


def test_check_gs_reports_location(client, axiom_document):
    axiom_document["proof"]["children"][0]["conclusion"] = ["P(c)", "P(c)"]
    response = client.post("/check-gs", json=axiom_document)
    data = response.json()
    assert data["ok"] is False
    assert data["code"] == "rule-mismatch"
    assert data["location"]["node"] == "root"


def test_search_and_translate(client):
    response = client.post("/search", json={"source": DRINKER, "depth": 12, "terms": 1})
    assert response.status_code == 200
    data = response.json()
    assert data["result"] == "proved"
    assert data["contraction"] == "restricted"

    response = client.post("/translate", json=data["proof"])
    assert response.status_code == 200
    certificate = response.json()
    assert len(certificate["witness"]) == 2

    response = client.post("/check-herbrand", json={"source": DRINKER, "certificate": certificate})
    assert response.json()["ok"] is True


def test_search_exhausted(client):
    response = client.post("/search", json={"source": "rel P/1\nfun c/0\n|- P(c)", "depth": 6, "terms": 2})
    assert response.status_code == 200
    assert response.json() == {"result": "exhausted", "proof": None, "contraction": None}


def test_bad_source_is_400(client):
    response = client.post("/search", json={"source": "rel P/1\nfun c/0\n|- P(c, c)"})
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "arity-mismatch"


def test_translate_rejected_proof_is_422(client, axiom_document):
    axiom_document["proof"]["rule"] = "AndR"
    response = client.post("/translate", json=axiom_document)
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "rule-mismatch"


def test_check_herbrand_one_copy(client, fixtures_dir):
    certificate = json.loads((fixtures_dir / "drinker.cert").read_text())
    certificate["expansion"] = ["exists x. (~P(x) \\/ forall y. P(y))"]
    certificate["prefix"] = [{"q": "exists", "var": "x"}, {"q": "forall", "var": "y"}]
    certificate["matrix"] = "~P(x) \\/ P(y)"
    certificate["witness"] = ["c"]
    response = client.post("/check-herbrand", json={"source": DRINKER, "certificate": certificate})
    data = response.json()
    assert data["code"] == "matrix-not-tautology"
    assert data["location"]["assignment"] == {"P(c)": True, "P(y)": False}


def test_search_with_unknown_default_policy(client, monkeypatch):
    monkeypatch.setitem(fastapi_server.SEARCH_CONFIG, "policy", "bogus")
    response = client.post("/search", json={"source": DRINKER})
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "unknown-policy"


def test_search_explicit_policy_ignores_default(client, monkeypatch):
    monkeypatch.setitem(fastapi_server.SEARCH_CONFIG, "policy", "bogus")
    response = client.post("/search", json={"source": DRINKER, "policy": "full"})
    assert response.status_code == 200
    assert response.json()["result"] == "proved"
