import json

import numpy as np

from src.core.config import Settings
from src.core.errors import ClassificationError, InapplicableError, InvalidInputError, InvariantViolation
from src.core.models import GroupType, ResultEnvelope, RunRecord, RunStatus
from src.core.storage import ResultStorage
from src.core.utils import load_from_json_file, save_to_json_file, to_jsonable


def test_exit_codes_follow_error_kind():
    assert ClassificationError("bad m").exit_code == 2
    assert InvalidInputError("bad phi").exit_code == 2
    assert InapplicableError("not unitary").exit_code == 3
    assert InvariantViolation("zero denominator").exit_code == 1


def test_error_dict_carries_rule():
    error = ClassificationError("m must be 2n/d", rule="d | n")
    assert error.to_dict() == {"error": "ClassificationError", "message": "m must be 2n/d", "rule": "d | n"}


def test_group_type_families():
    assert GroupType("2A").family == "unitary"
    assert GroupType.C.family == "symplectic"
    assert GroupType.D_OUTER.family == "orthogonal"
    assert GroupType.A_SPLIT.family == "split"
    assert GroupType.E8.family == "exceptional"
    assert not GroupType.G2.is_classical
    assert GroupType.B.is_classical


def test_settings_from_env(monkeypatch):
    monkeypatch.setenv("KLSPARK_THREADS", "3")
    monkeypatch.setenv("KLSPARK_RESULTS_DIR", "/tmp/kl")
    monkeypatch.setenv("KLSPARK_EULER_BUDGET", "1e6")
    monkeypatch.setenv("LOG_LEVEL", "debug")
    settings = Settings.from_env()
    assert settings.threads == 3
    assert settings.results_dir == "/tmp/kl"
    assert settings.euler_budget == 1_000_000
    assert settings.log_level == "DEBUG"


def test_settings_defaults(monkeypatch):
    for name in ("KLSPARK_CHUNK_SIZE", "KLSPARK_SEED", "KLSPARK_PORT"):
        monkeypatch.delenv(name, raising=False)
    settings = Settings.from_env()
    assert settings.chunk_size == 1 << 16
    assert settings.seed == 0
    assert settings.port == 8000


def test_to_jsonable_converts_numpy_and_complex():
    data = {"a": np.int64(3), "b": np.array([[1, 2]]), "z": 1 + 2j, 4: np.bool_(True)}
    assert to_jsonable(data) == {"a": 3, "b": [[1, 2]], "z": {"re": 1.0, "im": 2.0}, "4": True}


def test_json_file_round_trip(tmp_path):
    path = str(tmp_path / "nested" / "out.json")
    assert save_to_json_file({"x": np.arange(3)}, path)
    assert load_from_json_file(path) == {"x": [0, 1, 2]}
    assert load_from_json_file(str(tmp_path / "missing.json")) is None


def test_result_storage(tmp_path):
    storage = ResultStorage(str(tmp_path))
    envelope = ResultEnvelope(run_id="r1", command="trace", config={"command": "trace"}, result={"k": 1})
    path = storage.save_result(envelope)
    assert path.endswith("trace-r1.json")
    assert storage.load_result(path) == envelope

    rows = [{"t": 1, "re": 0.5, "im": 0.0, "abs_normalized": 0.5, "extra": "x"}]
    csv_path = str(tmp_path / "table.csv")
    assert storage.save_rows_csv(rows, ["t", "abs_normalized", "re", "im"], csv_path)
    with open(csv_path) as f:
        assert f.readline().strip() == "t,abs_normalized,re,im"


def test_run_records_by_status(tmp_path):
    storage = ResultStorage(str(tmp_path))
    done = RunRecord(id="a", config={})
    done.update_status(RunStatus.COMPLETED)
    storage.save_run(done)
    storage.save_run(RunRecord(id="b", config={}))
    assert [r.id for r in storage.get_runs_by_status(RunStatus.COMPLETED)] == ["a"]
    assert storage.get_run("b").status == RunStatus.PENDING
    assert storage.get_run("nope") is None


def test_unreadable_result_is_none(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"not": "an envelope"}))
    assert ResultStorage(str(tmp_path)).load_result(str(path)) is None
