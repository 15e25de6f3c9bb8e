import pytest
from fastapi.testclient import TestClient

from src.core.models import RunStatus
from src.core.storage import ResultStorage
from src.core.utils import load_from_json_file
from src.service.app import KlSparkService


@pytest.fixture
def storage(tmp_path):
    return ResultStorage(str(tmp_path))


@pytest.fixture
def client(storage):
    return TestClient(KlSparkService(storage=storage, port=8123).app)


def test_service_card(client):
    response = client.get("/card")
    assert response.status_code == 200
    card = response.json()
    assert card["id"] == "klspark"
    assert [c["id"] for c in card["capabilities"]] == ["trace", "tables", "verify", "stability"]
    assert card["endpoints"]["runs"] == "http://localhost:8123/runs"


def test_trace_run_completes(client):
    response = client.post("/runs", json={"command": "trace", "type_tag": "2A", "n": 3, "m": 2, "q": 7})
    assert response.status_code == 201
    run = response.json()
    assert run["status"] == "pending"

    finished = client.get(f"/runs/{run['id']}").json()
    assert finished["status"] == "completed"
    assert finished["metadata"]["exit_code"] == 0
    envelope = load_from_json_file(finished["metadata"]["path"])
    assert envelope["run_id"] == run["id"]
    assert len(finished["result"]["result"]["entries"]) == 6


def test_inadmissible_datum_is_rejected(client):
    response = client.post("/runs", json={"command": "trace", "type_tag": "B", "n": 3, "m": 4, "q": 7})
    assert response.status_code == 400
    assert response.json()["detail"]["rule"] == "m must be 2n/d for a divisor d of n"


def test_malformed_config_is_unprocessable(client):
    response = client.post("/runs", json={"command": "trace", "phi": "bogus"})
    assert response.status_code == 422


def test_inapplicable_run_fails_with_metadata(client):
    config = {"command": "verify", "suite": "euler", "type_tag": "C", "n": 2, "m": 4, "q": 7}
    run = client.post("/runs", json=config).json()
    finished = client.get(f"/runs/{run['id']}").json()
    assert finished["status"] == "failed"
    assert finished["metadata"]["exit_code"] == 3


def test_runs_survive_a_restart(client, storage):
    run = client.post("/runs", json={"command": "tables", "type_tag": "G2"}).json()
    restarted = TestClient(KlSparkService(storage=storage).app)
    response = restarted.get(f"/runs/{run['id']}")
    assert response.status_code == 200
    assert response.json()["status"] == "completed"


def test_unknown_run_is_404(client):
    assert client.get("/runs/does-not-exist").status_code == 404


def test_unexpected_error_fails_the_run(client, storage, monkeypatch):
    def broken(config):
        raise RuntimeError("enumeration crashed")

    monkeypatch.setattr("src.service.app.execute", broken)
    run = client.post("/runs", json={"command": "tables", "type_tag": "G2"}).json()
    finished = client.get(f"/runs/{run['id']}").json()
    assert finished["status"] == "failed"
    assert finished["metadata"] == {"error": "enumeration crashed", "exit_code": 1, "rule": None}
    stored = storage.get_run(run["id"])
    assert stored.status == "failed"
    assert stored.metadata["exit_code"] == 1


def test_run_is_stored_in_progress_while_executing(client, storage, monkeypatch):
    seen = []

    def watching(config):
        seen.extend(r.id for r in storage.get_runs_by_status(RunStatus.IN_PROGRESS))
        raise RuntimeError("stop")

    monkeypatch.setattr("src.service.app.execute", watching)
    run = client.post("/runs", json={"command": "tables", "type_tag": "G2"}).json()
    assert seen == [run["id"]]
    assert storage.get_runs_by_status(RunStatus.IN_PROGRESS) == []


def test_orthogonal_reconstruction_run_completes(client):
    config = {"command": "verify", "suite": "reconstruction", "type_tag": "B", "n": 2, "m": 4, "q": 5}
    run = client.post("/runs", json=config).json()
    finished = client.get(f"/runs/{run['id']}").json()
    assert finished["status"] == "completed"
    assert finished["metadata"]["exit_code"] == 0
