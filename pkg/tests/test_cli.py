import csv
import json
import math
import subprocess
import sys

import pytest

from trigspec.cli import EXIT_CONVERGENCE, EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, main
from trigspec.harness import Kind, Scenario, ValidationError, load_scenarios, table_scenarios


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.mark.parametrize("table,rows,first_col", [("T1", 6, "q"), ("T4", 3, "exact"),
                                                  ("T7", 2, "theta"), ("T2", 8, "M")])
def test_table_csv(tmp_path, capsys, table, rows, first_col):
    assert main(["table", table, "--out", str(tmp_path)]) == EXIT_OK
    data = _rows(tmp_path / f"{table}.csv")
    assert data[0][:2] == ["scenario", first_col]
    assert len(data) == rows + 1
    assert all(len(r) == len(data[0]) for r in data)


def test_table_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["table", "T3", "--out", str(a)]) == EXIT_OK
    assert main(["table", "T3", "--out", str(b)]) == EXIT_OK
    assert (a / "T3.csv").read_bytes() == (b / "T3.csv").read_bytes()


def test_table_grid_override(tmp_path, capsys):
    assert main(["table", "t5", "--out", str(tmp_path), "--p", "8", "--q", "9"]) == EXIT_OK
    data = _rows(tmp_path / "T5.csv")
    assert "p=8" in data[1][0] and "q=9" in data[1][0]
    assert all(float(r[3]) <= -13 for r in data[1:])


def test_unknown_table_is_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        main(["table", "T9"])
    assert info.value.code != 0
    with pytest.raises(ValidationError):
        table_scenarios("T9")


def test_run_scenario_file(tmp_path, capsys):
    series = tmp_path / "fit.csv"
    batch = [
        {"kind": "extension_fit", "id": "cos10",
         "params": {"func": "cos_theta", "theta": 10, "s": -1, "e": 1, "p": 8, "q": 9},
         "output": str(series)},
        {"kind": "integral", "params": {"func": "exp", "s": 2, "e": 3, "p": 6, "q": 8}},
    ]
    path = tmp_path / "batch.json"
    path.write_text(json.dumps(batch))
    assert main(["run", "--scenario", str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "cos10" in out and "spectral_log10_error" in out
    data = _rows(series)
    assert data[0] == ["x", "f", "fhat_M", "error"]
    assert len(data) == 2**12 + 2


def test_single_object_scenario(tmp_path):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"kind": "cutoff_table", "params": {"q": 8, "r": 0.5}}))
    (sc,) = load_scenarios(path)
    assert sc.kind is Kind.CUTOFF_TABLE


@pytest.mark.parametrize("content", [
    "not json",
    json.dumps([{"params": {}}]),
    json.dumps({"kind": "nope", "params": {}}),
    json.dumps({"kind": "integral", "params": {"func": "exp"}}),
    json.dumps({"kind": "integral", "params": {"func": "tan", "s": 0, "e": 1, "p": 3, "q": 4}}),
    json.dumps({"kind": "integral", "params": {"func": "power", "s": 0, "e": 1, "p": 3, "q": 4}}),
])
def test_invalid_scenarios_exit_nonzero(tmp_path, capsys, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    assert main(["run", "--scenario", str(path)]) == EXIT_INVALID
    assert "error" in capsys.readouterr().err


def test_missing_scenario_file(tmp_path, capsys):
    assert main(["run", "--scenario", str(tmp_path / "absent.json")]) == EXIT_INVALID


def test_scenario_validation_is_eager():
    with pytest.raises(ValidationError):
        Scenario("linear_ode", {"s": 1, "e": 3})


def test_fit_subcommand(tmp_path, capsys):
    out = tmp_path / "fit.csv"
    assert main(["fit", "--func", "power", "--n", "4", "--p", "8", "--q", "9", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "EL(fhat_M)" in text
    assert out.exists()


def test_integrate_subcommand(capsys):
    assert main(["integrate", "--func", "cos_theta", "--theta", "10", "--method", "simpson",
                 "--panels", "512"]) == EXIT_OK
    text = capsys.readouterr().out
    assert "simpson_log10_error" in text and "spectral" not in text


def test_integrate_odd_panels(capsys):
    assert main(["integrate", "--func", "exp", "--method", "simpson", "--panels", "7"]) == EXIT_INVALID


def test_ode_linear_subcommand(tmp_path, capsys):
    out = tmp_path / "lin.csv"
    assert main(["ode-linear", "--xi", "2", "--out", str(out)]) == EXIT_OK
    assert _rows(out)[0][:3] == ["x", "y_est", "y_exact"]


def test_ode_nonlinear_subcommand(capsys):
    assert main(["ode-nonlinear", "--theta", str(math.pi / 2), "--method", "rk4"]) == EXIT_OK
    assert "rk4 = " in capsys.readouterr().out


def test_ode_nonlinear_rejects_inconsistent_xi(capsys):
    assert main(["ode-nonlinear", "--xi", "3"]) == EXIT_INVALID


def test_convergence_failure_exit(tmp_path, capsys):
    path = tmp_path / "capped.json"
    path.write_text(json.dumps({"kind": "nonlinear_ode", "params": {
        "theta": math.pi / 2, "s": 1, "e": 3, "p": 6, "q": 7, "methods": ["intp"],
        "max_iterations": 2}}))
    assert main(["run", "--scenario", str(path)]) == EXIT_CONVERGENCE
    assert "convergence failure" in capsys.readouterr().err


def test_numerical_failure_exit(capsys):
    # exp(int x^10) overflows on the extension interval
    assert main(["ode-linear", "--n", "10"]) == EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err


def test_invalid_grid(capsys):
    assert main(["fit", "--p", "8", "--q", "8"]) == EXIT_INVALID


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "trigspec.cli", "table", "T9"],
                         capture_output=True, text=True)
    assert res.returncode != 0
