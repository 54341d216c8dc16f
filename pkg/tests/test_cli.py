"""Command-line interface: outputs, schemas, exit codes, determinism."""

import json
from pathlib import Path

import jsonschema
import pytest

from resilience_kit.cli import (
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_USAGE,
    main,
)

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "resilience_kit" / "schemas"


def _schema(name):
    return json.loads((SCHEMA_DIR / name).read_text())


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _run_json(capsys, *argv):
    code, out, err = _run(capsys, *argv)
    assert code == EXIT_OK, err
    return json.loads(out)


def test_scenarios_command_lists_builtins(capsys):
    doc = _run_json(capsys, "scenarios")
    jsonschema.validate(doc, _schema("scenario_list.schema.json"))
    names = {s["name"] for s in doc["scenarios"]}
    assert {"admire", "temperature", "double_integrator"} <= names


def test_check_double_integrator_resilient(capsys):
    doc = _run_json(capsys, "check", "--scenario", "double_integrator", "--lost", "2")
    jsonschema.validate(doc, _schema("verdict.schema.json"))
    assert doc["verdicts"]["resilient"] is True
    assert doc["verdicts"]["resiliently_stabilizable"] is True
    assert doc["lost"]["labels"] == ["u2"]


def test_check_building_window_loss_stabilizable_not_resilient(capsys):
    doc = _run_json(capsys, "check", "--scenario", "temperature", "--lost", "u_dw_1")
    assert doc["verdicts"]["resiliently_stabilizable"] is True
    assert doc["verdicts"]["resilient"] is False
    assert doc["conditions"]["spectrum_condition"] == "strictly-negative-ok"


def test_check_jet_thrust_vectoring_loss_is_fatal(capsys):
    doc = _run_json(capsys, "check", "--scenario", "admire", "--lost", "9")
    assert doc["conditions"]["z_empty"] is True
    assert doc["verdicts"]["resilient"] is False
    assert doc["verdicts"]["resiliently_stabilizable"] is False


def test_lost_accepts_labels_and_one_based_indices(capsys):
    _, by_idx, _ = _run(capsys, "check", "--scenario", "temperature", "--lost", "4")
    _, by_label, _ = _run(capsys, "check", "--scenario", "temperature", "--lost", "u_dw_1")
    assert by_idx == by_label


def test_unknown_actuator_label_is_usage_error(capsys):
    code, _, err = _run(capsys, "check", "--scenario", "temperature", "--lost", "u_nope")
    assert code == EXIT_USAGE
    assert "unknown actuator" in err


def test_unknown_scenario_is_usage_error(capsys):
    code, _, err = _run(capsys, "check", "--scenario", "nope", "--lost", "1")
    assert code == EXIT_USAGE


def test_reach_json_output_validates(capsys):
    doc = _run_json(capsys, "reach", "--scenario", "double_integrator",
                    "--lost", "2", "--horizon", "1.0", "--steps", "4",
                    "--dims", "0,1")
    jsonschema.validate(doc, _schema("tube.schema.json"))
    assert len(doc["times"]) == 5
    assert len(doc["sets"]) == 5
    assert doc["projections"][0]["dims"] == [0, 1]
    # Step 0 is the initial singleton.
    assert doc["sets"][0]["generators"] == []


def test_reach_csv_output(capsys):
    code, out, err = _run(capsys, "reach", "--scenario", "double_integrator",
                          "--lost", "2", "--horizon", "1.0", "--steps", "3",
                          "--dims", "0,1", "--format", "csv")
    assert code == EXIT_OK, err
    lines = out.strip().splitlines()
    assert lines[0] == "step,time,vertex_index,x,y"
    assert len(lines) > 4
    assert all(len(line.split(",")) == 5 for line in lines[1:])


def test_reach_svg_output(capsys):
    code, out, err = _run(capsys, "reach", "--scenario", "double_integrator",
                          "--lost", "2", "--horizon", "1.0", "--steps", "3",
                          "--dims", "0,1", "--format", "svg")
    assert code == EXIT_OK, err
    assert out.lstrip().startswith("<svg")
    assert "<polygon" in out


def test_reach_csv_requires_dims(capsys):
    code, _, err = _run(capsys, "reach", "--scenario", "double_integrator",
                        "--lost", "2", "--horizon", "1.0", "--steps", "3",
                        "--format", "csv")
    assert code == EXIT_USAGE


def test_reach_empty_deficit_set_is_precondition_error(capsys):
    code, _, err = _run(capsys, "reach", "--scenario", "admire", "--lost", "9",
                        "--horizon", "1.0", "--steps", "2")
    assert code == EXIT_PRECONDITION
    assert "empty" in err


def test_bounds_output_validates_and_orders(capsys):
    doc = _run_json(capsys, "bounds", "--scenario", "temperature",
                    "--lost", "u_dw_1", "--samples", "40")
    jsonschema.validate(doc, _schema("bounds.schema.json"))
    for key in ("T_N", "T_M", "r_q"):
        lo, hi = doc["intervals"][key]
        assert lo is not None and hi is not None and 0 < lo <= hi
    assert doc["seed"] == 12345
    assert set(doc["sources"]) == {"stochastic", "ellipsoid", "combined"}


def test_bounds_deterministic_across_runs(capsys):
    argv = ("bounds", "--scenario", "temperature", "--lost", "u_hAC",
            "--samples", "25")
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert first == second


def test_bounds_seed_changes_stochastic_source(capsys):
    base = _run_json(capsys, "bounds", "--scenario", "temperature",
                     "--lost", "u_hAC", "--samples", "10")
    other = _run_json(capsys, "bounds", "--scenario", "temperature",
                      "--lost", "u_hAC", "--samples", "10", "--seed", "99")
    assert other["seed"] == 99
    assert base["sources"]["stochastic"] != other["sources"]["stochastic"]


def test_bounds_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("RESILIENCE_KIT_SEED", "99")
    via_env = _run_json(capsys, "bounds", "--scenario", "temperature",
                        "--lost", "u_hAC", "--samples", "10")
    monkeypatch.delenv("RESILIENCE_KIT_SEED")
    via_flag = _run_json(capsys, "bounds", "--scenario", "temperature",
                         "--lost", "u_hAC", "--samples", "10", "--seed", "99")
    assert via_env == via_flag


def test_bounds_rejects_non_hurwitz(capsys):
    code, _, err = _run(capsys, "bounds", "--scenario", "double_integrator",
                        "--lost", "2", "--samples", "5")
    assert code == EXIT_PRECONDITION
    assert "Hurwitz" in err


def test_bounds_oracle_needs_grid(capsys):
    code, _, err = _run(capsys, "bounds", "--scenario", "temperature",
                        "--lost", "u_dw_1", "--samples", "5", "--oracle")
    assert code == EXIT_USAGE


def test_output_file_is_written_atomically(capsys, tmp_path):
    out_file = tmp_path / "verdict.json"
    code, out, _ = _run(capsys, "check", "--scenario", "double_integrator",
                        "--lost", "2", "--output", str(out_file))
    assert code == EXIT_OK
    assert out == ""  # nothing on stdout when writing a file
    doc = json.loads(out_file.read_text())
    assert doc["command"] == "check"
    assert not (tmp_path / "verdict.json.tmp").exists()


def test_system_file_roundtrip(capsys, tmp_path):
    sys_doc = {
        "name": "custom",
        "A": [[0.0, 1.0], [0.0, 0.0]],
        "B_bar": [[0.0, 0.0], [1.0, 0.5]],
        "actuator_labels": ["main", "aux"],
        "state_labels": ["pos", "vel"],
    }
    path = tmp_path / "system.json"
    path.write_text(json.dumps(sys_doc))
    doc = _run_json(capsys, "check", "--system", str(path), "--lost", "aux")
    assert doc["system"] == "custom"
    assert doc["verdicts"]["resilient"] is True


def test_bad_system_file_is_usage_error(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = _run(capsys, "check", "--system", str(path), "--lost", "1")
    assert code == EXIT_USAGE
    missing = tmp_path / "missing.json"
    code, _, _ = _run(capsys, "check", "--system", str(missing), "--lost", "1")
    assert code == EXIT_USAGE
