import json
import math
import re

import numpy as np
import pytest

from CompoundCert.CLI import ProblemFileError, dump_report, input_digest, load_problem_file, main, run
from CompoundCert.GoldenExamples import GOLDEN_CHECKS


def _report(capsys):
    return json.loads(capsys.readouterr().out)


def _problem(tmp_path, content, name="problem.json"):
    path = tmp_path / name
    path.write_text(content if isinstance(content, str) else json.dumps(content, indent=2), encoding="utf-8")
    return str(path)


# ############################################################################
# COMPOUND AND MEASURE
# ############################################################################

def test_compound_of_builtin(capsys):
    assert run(["compound", "--builtin", "example8", "--k", "2", "--kind", "additive"]) == 0
    report = _report(capsys)
    assert report["task"] == "compound"
    assert report["result_matrix"] == [[0.0, 0.1, 2.0], [0.0, 0.0, 1.0], [3.0, 0.0, 2.0]]
    assert report["row_sets"] == [[1, 2], [1, 3], [2, 3]]
    assert re.fullmatch(r"[0-9a-f]{64}", report["input_digest"])
    assert "timing_ms" not in report


def test_timing_is_opt_in(capsys):
    assert run(["compound", "--builtin", "example8", "--k", "2", "--timing"]) == 0
    assert _report(capsys)["timing_ms"] >= 0.0


def test_input_digest_is_stable(capsys):
    run(["compound", "--builtin", "example8", "--k", "2"])
    first = _report(capsys)["input_digest"]
    run(["compound", "--builtin", "example8", "--k", "2"])
    second = _report(capsys)["input_digest"]
    run(["compound", "--builtin", "example8", "--k", "1"])
    third = _report(capsys)["input_digest"]
    assert first == second
    assert first != third


def test_problem_file_and_flags_share_a_digest(tmp_path, capsys):
    path = _problem(tmp_path, {"schema_version": 1, "task": "compound", "system": {"builtin": "example8"}, "parameters": {"k": 2, "kind": "additive"}})
    run(["compound", "--problem", path])
    from_file = _report(capsys)
    run(["compound", "--builtin", "example8", "--k", "2", "--kind", "additive"])
    from_flags = _report(capsys)
    assert from_file["input_digest"] == from_flags["input_digest"]
    assert from_file["result_matrix"] == from_flags["result_matrix"]


def test_input_digest_ignores_key_order():
    first = {"task": "measure", "parameters": {"k": 1, "kind": "L1"}}
    second = {"parameters": {"kind": "L1", "k": 1}, "task": "measure"}
    assert input_digest(first) == input_digest(second)


def test_alpha_multiplicative_compound(capsys):
    assert run(["compound", "--matrix", "[[2,0,0],[0,2,0],[0,0,2]]", "--kind", "alpha-multiplicative", "--alpha", "2.5"]) == 0
    report = _report(capsys)
    assert report["shape"] == [3, 3]
    assert report["result_matrix"][1][1] == pytest.approx(2.0 ** 2.5)


def test_measure_of_matrix_literal(capsys):
    assert run(["measure", "--matrix", "[[-1, 2], [3, -4]]", "--kind", "L1"]) == 0
    assert _report(capsys)["measure"] == pytest.approx(2.0)


def test_compound_measure_from_problem_file(tmp_path, capsys):
    path = _problem(tmp_path, {"schema_version": 1, "task": "measure", "system": {"matrix": [[-1, 0], ["-2*cos(t)", 0]]}, "parameters": {"k": 2, "t": 1.0}})
    assert run(["measure", "--problem", path]) == 0
    assert _report(capsys)["measure"] == pytest.approx(-1.0)


# ############################################################################
# CERTIFY
# ############################################################################

def test_certify_refuted_exits_with_two(capsys):
    assert run(["certify", "--builtin", "example8", "--property", "k-positive", "--k", "1"]) == 2
    report = _report(capsys)
    assert report["verdict"] == "Refuted"
    assert report["witness"]["position"] == [1, 3]


def test_certify_strong_two_positivity(capsys):
    assert run(["certify", "--builtin", "example8", "--property", "strongly-k-positive", "--k", "2"]) == 0
    assert _report(capsys)["verdict"] == "Certified"


def test_certify_time_varying_expression(capsys):
    assert run(["certify", "--matrix", "[[-1,0],[-2*cos(t),0]]", "--property", "k-contracting", "--k", "2", "--samples", "11"]) == 0
    report = _report(capsys)
    assert report["verdict"] == "Certified"
    assert report["margin"] == pytest.approx(1.0)
    assert report["grid"]["samples"] == 11
    assert report["grid"]["t_span"] == pytest.approx([0.0, 2.0 * math.pi])


@pytest.mark.parametrize('s, verdict, code', [("0.74", "Certified", 0), ("0.70", "Refuted", 2)])
def test_certify_thomas_alpha_contraction(capsys, s, verdict, code):
    argv = ["certify", "--builtin", "thomas", "--b", "0.1", "--property", "alpha-contracting", "--k", "2", "--s", s, "--grid", "5"]
    assert run(argv) == code
    report = _report(capsys)
    assert report["verdict"] == verdict
    assert report["k_or_alpha"] == pytest.approx(2.0 + float(s))


def test_certify_cyclic_cooperativity(capsys):
    assert run(["certify", "--builtin", "cyclic", "--n", "4", "--delta1", "-1", "--property", "strongly-k-cooperative", "--k", "2", "--grid", "3"]) == 0
    assert _report(capsys)["verdict"] == "Certified"


def test_certify_diagonal_stability(capsys):
    assert run(["certify", "--matrix", "[[-1,0,0],[0,-1,0],[0,0,-1]]", "--property", "k-diag-stable", "--k", "2", "--D", "1,1,1"]) == 0
    assert _report(capsys)["margin"] == pytest.approx(4.0)


def test_certify_needs_property(capsys):
    assert run(["certify", "--builtin", "example8", "--k", "2"]) == 1
    assert "field=property" in capsys.readouterr().err


def test_cooperativity_needs_nonlinear_system(capsys):
    assert run(["certify", "--builtin", "example8", "--property", "k-cooperative", "--k", "2"]) == 1


# ############################################################################
# SIMULATE AND TRACE
# ############################################################################

def test_simulate_volume_writes_csv(tmp_path, capsys):
    csv_path = tmp_path / "volume.csv"
    out_path = tmp_path / "report.json"
    argv = ["simulate", "--builtin", "example5", "--task", "volume", "--k", "2", "--t-span", "0:2", "--csv", str(csv_path), "--out", str(out_path)]
    assert run(argv) == 0
    assert capsys.readouterr().out == ""
    content = csv_path.read_bytes().decode("utf-8")
    assert "\r" not in content
    lines = content.splitlines()
    assert lines[0] == "t,volume"
    assert len(lines) == 2002
    t, volume = map(float, lines[-1].split(","))
    assert t == 2.0
    assert volume == pytest.approx(math.exp(-2.0), abs=1e-6)
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert report["csv"] == str(csv_path)
    assert report["final_volume"] == pytest.approx(math.exp(-2.0), abs=1e-6)


def test_simulate_state_reports_without_csv(capsys):
    assert run(["simulate", "--builtin", "example8", "--task", "state", "--t-span", "0:0.01", "--step", "0.005"]) == 0
    report = _report(capsys)
    assert report["points"] == 3
    assert len(report["final_state"]) == 3
    assert "csv" not in report


def test_simulate_state_writes_rows_to_csv_only(tmp_path, capsys):
    csv_path = tmp_path / "state.csv"
    argv = ["simulate", "--builtin", "example8", "--task", "state", "--t-span", "0:0.01", "--step", "0.005", "--csv", str(csv_path)]
    assert run(argv) == 0
    out = capsys.readouterr().out
    assert not out.startswith("t,")
    assert json.loads(out)["csv"] == str(csv_path)
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,x1,x2,x3"
    assert lines[1] == "0.0,4.0,-21.0,-1.0"
    assert len(lines) == 4


def test_trace_without_csv_prints_the_report(capsys):
    assert run(["trace", "--builtin", "example8", "--t-span", "0:0.1"]) == 0
    assert _report(capsys)["initial_s_minus"] == 1


def test_simulate_transition(capsys, tmp_path):
    assert run(["simulate", "--builtin", "example5", "--task", "transition", "--t-span", "0:1", "--csv", str(tmp_path / "phi.csv")]) == 0
    report = _report(capsys)
    assert report["final_matrix"][0][0] == pytest.approx(math.exp(-1.0), abs=1e-9)
    assert (tmp_path / "phi.csv").read_text().splitlines()[0] == "t,phi1,phi2,phi3,phi4"


def test_simulate_compound_residual(capsys):
    assert run(["simulate", "--builtin", "example5", "--task", "compound-residual", "--k", "2", "--t-span", "0:1"]) == 0
    assert _report(capsys)["residual"] <= 1e-8


def test_simulate_equilibrium(capsys):
    assert run(["simulate", "--matrix", "[[-1,0],[0,-2]]", "--task", "equilibrium", "--x0=1,1", "--t-span", "0:30", "--step", "0.01"]) == 0
    report = _report(capsys)
    assert report["converged"] is True
    assert report["horizon"] == 30.0


def test_trace_of_two_positive_system(tmp_path, capsys):
    csv_path = tmp_path / "trace.csv"
    assert run(["trace", "--builtin", "example8", "--t-span", "0:1", "--csv", str(csv_path)]) == 0
    report = _report(capsys)
    assert report["initial_s_minus"] == 1
    assert report["max_s_minus"] <= 1
    assert csv_path.read_text().splitlines()[0] == "t,s_minus,s_plus"


# ############################################################################
# PROBLEM FILES AND ERRORS
# ############################################################################

def test_load_problem_file(tmp_path):
    path = _problem(tmp_path, {"schema_version": 1, "task": "trace", "system": {"builtin": "thomas", "b": 0.2}, "parameters": {"x0": [1, 2, 3]}})
    problem = load_problem_file(path)
    assert problem["system"] == {"builtin": "thomas", "b": 0.2}
    assert problem["parameters"] == {"x0": [1, 2, 3]}


@pytest.mark.parametrize('content, field', [
    ({"schema_version": 2, "task": "measure", "system": {"builtin": "example8"}}, "schema_version"),
    ({"schema_version": 1, "task": "plot", "system": {"builtin": "example8"}}, "task"),
    ({"schema_version": 1, "task": "measure", "system": {"builtin": "example8", "matrix": [[1]]}}, "system"),
    ({"schema_version": 1, "task": "measure", "system": {"builtin": "example8"}, "parameters": {"speed": 1}}, "parameters.speed"),
    ({"schema_version": 1, "task": "measure", "system": {"builtin": "example8", "gain": 1}}, "system.gain"),
    ({"schema_version": 1, "task": "measure", "system": {"builtin": "example8"}, "extra": True}, "extra"),
])
def test_problem_file_validation(tmp_path, content, field):
    with pytest.raises(ProblemFileError) as info:
        load_problem_file(_problem(tmp_path, content))
    assert info.value.field == field
    assert info.value.line is not None


def test_problem_file_error_names_the_line(tmp_path, capsys):
    path = _problem(tmp_path, '{\n  "schema_version": 1,\n  "task": "measure",\n  "system": {"builtin": "example8"},\n  "parameters": {"speed": 1}\n}\n')
    assert run(["measure", "--problem", path]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "field=parameters.speed" in err
    assert "line=5" in err


def test_invalid_json_problem_file(tmp_path, capsys):
    path = _problem(tmp_path, '{\n  "schema_version": 1,\n  "task": \n}\n')
    assert run(["measure", "--problem", path]) == 1
    assert "line=4" in capsys.readouterr().err


def test_problem_task_must_match_command(tmp_path, capsys):
    path = _problem(tmp_path, {"schema_version": 1, "task": "measure", "system": {"builtin": "example8"}})
    assert run(["compound", "--problem", path]) == 1
    assert "field=task" in capsys.readouterr().err


@pytest.mark.parametrize('argv', [
    ["compound", "--k", "2"],
    ["compound", "--builtin", "example8", "--matrix", "[[1]]", "--k", "1"],
    ["compound", "--matrix", "[[t**2]]", "--k", "1"],
    ["compound", "--builtin", "example8", "--k", "4"],
    ["compound", "--builtin", "example8", "--k", "2", "--kind", "tensor"],
    ["simulate", "--builtin", "example8", "--task", "state", "--t-span", "2"],
    ["measure", "--builtin", "example8", "--kind", "L7"],
    ["frobnicate"],
])
def test_errors_exit_with_one(capsys, argv):
    assert run(argv) == 1
    assert capsys.readouterr().err != ""


def test_expression_error_reports_position(capsys):
    assert run(["compound", "--matrix", "[[t**2]]", "--k", "1"]) == 1
    assert "position=" in capsys.readouterr().err


@pytest.mark.parametrize('parameters, field', [
    ({"t_span": 5}, "parameters.t_span"),
    ({"t_span": [2.0, 1.0]}, "parameters.t_span"),
    ({"x0": "1,2,3"}, "parameters.x0"),
    ({"step": -1.0}, "parameters.step"),
    ({"k": "2"}, "parameters.k"),
    ({"k": True}, "parameters.k"),
    ({"samples": 1.5}, "parameters.samples"),
    ({"k": 2, "alpha": 2.5}, "parameters.alpha"),
])
def test_malformed_parameters_are_rejected(tmp_path, capsys, parameters, field):
    path = _problem(tmp_path, {"schema_version": 1, "task": "simulate", "system": {"builtin": "example8"}, "parameters": parameters})
    assert run(["simulate", "--problem", path]) == 1
    err = capsys.readouterr().err
    assert f"field={field}" in err
    assert "line=" in err


def test_malformed_system_field_is_rejected(tmp_path, capsys):
    path = _problem(tmp_path, {"schema_version": 1, "task": "simulate", "system": {"builtin": "thomas", "b": "0.1"}})
    assert run(["simulate", "--problem", path]) == 1
    assert "field=system.b" in capsys.readouterr().err


def test_initial_state_must_match_the_dimension(capsys):
    assert run(["simulate", "--builtin", "example8", "--task", "state", "--x0=1,2", "--t-span", "0:0.1"]) == 1
    assert "field=parameters.x0" in capsys.readouterr().err


def test_command_line_order_replaces_the_problem_file_order(tmp_path, capsys):
    path = _problem(tmp_path, {"schema_version": 1, "task": "certify", "system": {"builtin": "thomas", "b": 0.1}, "parameters": {"k": 3, "property": "alpha-contracting", "grid": 5}})
    assert run(["certify", "--problem", path, "--k", "2", "--s", "0.74"]) == 0
    report = _report(capsys)
    assert report["k_or_alpha"] == pytest.approx(2.74)
    assert report["verdict"] == "Certified"


def test_command_line_k_replaces_a_problem_file_alpha(tmp_path, capsys):
    path = _problem(tmp_path, {"schema_version": 1, "task": "compound", "system": {"builtin": "example8"}, "parameters": {"alpha": 2.5, "kind": "additive"}})
    assert run(["compound", "--problem", path, "--k", "1"]) == 0
    assert _report(capsys)["k"] == 1


def test_report_floats_carry_seventeen_digits(capsys):
    assert run(["compound", "--matrix", "[[0.1]]", "--k", "1"]) == 0
    out = capsys.readouterr().out
    assert "0.10000000000000001" in out
    assert json.loads(out)["result_matrix"] == [[0.1]]


def test_expression_error_names_the_entry(capsys):
    assert run(["compound", "--matrix", '[[1, 0], [0, "1),(2"]]', "--k", "1"]) == 1
    err = capsys.readouterr().err
    assert "row=2" in err
    assert "column=2" in err
    assert "position=" in err


def test_missing_file_is_an_error(tmp_path, capsys):
    assert run(["measure", "--matrix-file", str(tmp_path / "missing.json")]) == 1


def test_matrix_file(tmp_path, capsys):
    path = _problem(tmp_path, {"matrix": [[-1, 2], [3, -4]]}, "matrix.json")
    assert run(["measure", "--matrix-file", path, "--kind", "LInf"]) == 0
    assert _report(capsys)["measure"] == pytest.approx(1.0)


def test_debug_flag_streams_progress_to_stderr(capsys):
    assert run(["certify", "--builtin", "example8", "--property", "k-positive", "--k", "2", "--debug"]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["verdict"] == "Certified"
    assert "[DEBUGGER]" in captured.err
    assert "CERTIFIED" in captured.err


# ############################################################################
# SELFTEST AND ENTRY POINT
# ############################################################################

@pytest.mark.slow
def test_selftest(capsys):
    assert run(["selftest"]) == 0
    report = _report(capsys)
    assert report["passed"] is True
    assert len(report["results"]) == len(GOLDEN_CHECKS)
    assert all(result["passed"] for result in report["results"])


def test_main_exits_with_the_run_code(monkeypatch, capsys):
    monkeypatch.setattr("sys.argv", ["compoundcert", "certify", "--builtin", "example8", "--property", "k-positive", "--k", "1"])
    with pytest.raises(SystemExit) as info:
        main()
    assert info.value.code == 2


def test_dump_report_formats_numpy_values():
    text = dump_report({"b": np.float64(1.0), "a": np.array([1.0, 2.0]), "c": 3})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert '"b": 1.0' in text
    assert '"c": 3' in text
    assert json.loads(text)["a"] == [1.0, 2.0]
