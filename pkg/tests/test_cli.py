import csv
import json

import pytest

from main import config_from_args, main, parse_args
from src.cli.commands import STATUS_EXIT_CODES, execute
from src.cli.models import RunConfig
from src.core.errors import InvalidInputError
from src.core.models import VerificationStatus
from src.core.utils import load_from_json_file, save_to_json_file
from src.cyclofield.field import get_field


TRACE_ARGS = ["trace", "--type", "2A", "--n", "3", "--m", "2", "--q", "7", "--threads", "2"]


def last_json_line(capsys):
    lines = [line for line in capsys.readouterr().out.splitlines() if line.strip()]
    return json.loads(lines[-1])


def test_trace_writes_a_replayable_envelope(results_dir, capsys):
    assert main(TRACE_ARGS) == 0
    summary = last_json_line(capsys)
    assert summary["command"] == "trace" and summary["exit_code"] == 0
    envelope = load_from_json_file(summary["path"])
    assert summary["path"].startswith("results")
    assert [e["t"] for e in envelope["result"]["entries"]] == [1, 2, 3, 4, 5, 6]
    assert envelope["config"]["type_tag"] == "2A"

    assert main(["replay", summary["path"]]) == 0
    assert last_json_line(capsys)["reproduced"] is True


def test_replay_detects_a_changed_result(results_dir, capsys):
    path = str(results_dir / "trace.json")
    assert main(TRACE_ARGS + ["--output", path]) == 0
    envelope = load_from_json_file(path)
    envelope["result"]["entries"][0]["re"] += 1.0
    save_to_json_file(envelope, path)
    assert main(["replay", path]) == 1
    assert main(["replay", str(results_dir / "missing.json")]) == 2


def test_trace_csv_keeps_a_json_sidecar(results_dir):
    path = results_dir / "table.csv"
    assert main(TRACE_ARGS + ["--format", "csv", "--output", str(path)]) == 0
    with open(path) as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == ["t", "abs_normalized", "re", "im"]
    assert len(rows) == 6
    assert (results_dir / "table.json").exists()


@pytest.mark.parametrize("argv", [
    ["trace", "--type", "B", "--n", "3", "--m", "4", "--q", "7"],
    ["trace", "--type", "2A", "--n", "3", "--m", "2"],
    ["trace", "--type", "2A", "--n", "3", "--m", "2", "--q", "12"],
    ["trace", "--type", "2A", "--n", "3", "--m", "2", "--q", "7", "--phi", "bogus"],
    ["trace", "--type", "2A", "--n", "3", "--m", "2", "--q", "7", "--chi", "0,0"],
    ["tables", "--type", "C"],
])
def test_invalid_input_exits_with_two(results_dir, argv):
    assert main(argv) == 2


def test_classification_error_names_the_rule(results_dir, capsys):
    assert main(["trace", "--type", "B", "--n", "3", "--m", "4", "--q", "7"]) == 2
    error = last_json_line(capsys)
    assert error["error"] == "ClassificationError"
    assert error["rule"] == "m must be 2n/d for a divisor d of n"


def test_inapplicable_suite_exits_with_three(results_dir):
    assert main(["verify", "euler", "--type", "C", "--n", "2", "--m", "4", "--q", "7"]) == 3


def test_verify_suite_reports(results_dir, capsys):
    assert main(["verify", "um2-odd", "--type", "2A", "--n", "3", "--q", "7"]) == 0
    summary = last_json_line(capsys)
    report = load_from_json_file(summary["path"])["result"]
    assert report["suite"] == "um2-odd" and report["status"] == "pass"


def test_tables_command(results_dir, capsys):
    assert main(["tables", "--type", "E8"]) == 0
    rows = load_from_json_file(last_json_line(capsys)["path"])["result"]["rows"]
    assert len(rows) == 12
    path = results_dir / "b.csv"
    assert main(["tables", "--type", "B", "--n-max", "3", "--format", "csv", "--output", str(path)]) == 0
    with open(path) as f:
        assert next(csv.reader(f))[:3] == ["type_tag", "n", "m"]


def test_stability_from_a_form_file(results_dir, capsys):
    form = {
        "field": get_field(7).spec.model_dump(),
        "datum": {"type": "2A", "n": 3, "m": 2},
        "functional": {"forms": [[[1, 0, 0], [0, 2, 0], [0, 0, 3]]]},
    }
    form_path = str(results_dir / "phi.json")
    save_to_json_file(form, form_path)
    assert main(["stability", "--phi", f"matrices:{form_path}"]) == 0
    result = load_from_json_file(last_json_line(capsys)["path"])["result"]
    assert result["stability"]["verdict"] == "stable"
    assert result["expected_euler_characteristic"] == 3


def test_degenerate_flag_sets_phi():
    args = parse_args(["stability", "--type", "2A", "--n", "3", "--m", "2", "--q", "7", "--degenerate"])
    config = config_from_args(args)
    assert config.phi == "canonical-degenerate"
    result = execute(config).result
    assert result["expected_euler_characteristic"] == 2


def test_run_config_fills_m_for_span_suites():
    config = RunConfig(command="verify", suite="um2-even", type_tag="2A", n=4, q=7)
    assert config.m == 2
    assert "output" not in config.replay_key()
    with pytest.raises(InvalidInputError):
        RunConfig(command="trace", phi="diag:a,b").diag_values()


def test_status_exit_codes():
    assert STATUS_EXIT_CODES[VerificationStatus.PASS] == 0
    assert STATUS_EXIT_CODES[VerificationStatus.PARTIAL] == 1
    assert STATUS_EXIT_CODES[VerificationStatus.INAPPLICABLE] == 3
