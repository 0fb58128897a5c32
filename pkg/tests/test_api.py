import pytest
from fastapi.testclient import TestClient

from api import app
from conftest import EPATH_SAMPLE, FREE_PMOD, INTERVAL_PMOD, IPRES_SAMPLE, SHIFTED_FREE_PMOD


@pytest.fixture
def client():
    return TestClient(app)


def test_root_and_formats(client):
    assert client.get("/").json()["status"] == "online"
    body = client.get("/api/formats").json()
    assert set(body["formats"]) == {"pmod", "ipres", "iwit", "epath"}
    assert "search-interleaving" in body["commands"]


def test_validate_and_eval(client):
    response = client.post("/api/validate", json={"pmod": INTERVAL_PMOD})
    assert response.status_code == 200
    assert response.json() == {
        "exit_code": 0,
        "report": ["field 2", "dim 1", "generators 1", "relations 1", "presentation: PASS"]
    }
    response = client.post("/api/eval", json={"pmod": INTERVAL_PMOD, "at": ["3/2"]})
    assert response.json()["report"] == ["point (3/2)", "dim 1", "basis g"]


def test_format_errors_are_bad_requests(client):
    response = client.post("/api/validate", json={"pmod": "pmod 1\nfield 2\ndim 1\ngen g 3\nrel 2 : 1*g\n"})
    assert response.status_code == 400
    assert "line 5" in response.json()["detail"]


def test_barcode_endpoints(client):
    assert client.post("/api/dims", json={"pmod": INTERVAL_PMOD}).json()["report"][0] == "grid {0 2}"
    assert client.post("/api/barcode", json={"pmod": INTERVAL_PMOD}).json()["report"] == ["bar 0 2"]
    response = client.post("/api/bottleneck", json={"first": INTERVAL_PMOD, "second": FREE_PMOD})
    assert response.json()["report"] == ["inf"]
    assert client.post("/api/component", json={"pmod": FREE_PMOD}).json()["report"] == ["1"]


def test_edit_endpoints(client):
    verified = client.post("/api/edit/verify", json={"epath": EPATH_SAMPLE}).json()
    assert verified["exit_code"] == 0
    assert verified["report"][0] == "cost 1"
    assert client.post("/api/edit/cost", json={"epath": EPATH_SAMPLE}).json()["report"] == ["1"]
    witness = client.post("/api/edit/to-interleaving", json={"epath": EPATH_SAMPLE, "step": 1}).json()
    assert witness["exit_code"] == 0
    iwit = "\n".join(witness["report"]) + "\n"
    checked = client.post(
        "/api/interleaving/verify",
        json={"first": FREE_PMOD, "second": SHIFTED_FREE_PMOD, "iwit": iwit}
    ).json()
    assert checked["exit_code"] == 0
    assert client.post("/api/edit/to-interleaving", json={"epath": EPATH_SAMPLE, "step": 3}).status_code == 400


def test_pair_endpoints(client):
    path = client.post("/api/path-from-pair", json={"ipres": IPRES_SAMPLE}).json()
    assert path["report"][0] == "epath 1"
    first = "pmod 1\nfield 2\ndim 1\ngen g 0\nrel 4 : 1*g\n"
    second = "pmod 1\nfield 2\ndim 1\ngen g 1\nrel 4 : 1*g\n"
    checked = client.post("/api/pair-check", json={"ipres": IPRES_SAMPLE, "first": first, "second": second}).json()
    assert checked["exit_code"] == 0


def test_search_endpoint(client):
    found = client.post("/api/search-interleaving", json={"first": FREE_PMOD, "second": SHIFTED_FREE_PMOD, "eps": "1"})
    assert found.json()["exit_code"] == 0
    missing = client.post(
        "/api/search-interleaving",
        json={"first": FREE_PMOD, "second": SHIFTED_FREE_PMOD, "eps": "1/2", "seed": 3}
    ).json()
    assert missing == {
        "exit_code": 1,
        "report": [missing["report"][0], "provably none: yes", "seed 3"]
    }
    over_budget = client.post(
        "/api/search-interleaving",
        json={"first": FREE_PMOD, "second": SHIFTED_FREE_PMOD, "eps": "1", "budget": 1}
    )
    assert over_budget.status_code == 400
