import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from rispace.cli import main, parse_points
from rispace.stepfunction import StepFunction


@pytest.fixture
def staircase_csv(tmp_path, staircase):
    path = tmp_path / "f.csv"
    path.write_text(staircase.to_csv())
    return str(path)


@pytest.fixture
def indicator_csv(tmp_path):
    path = tmp_path / "chi.csv"
    path.write_text(StepFunction.indicator(0.0, 0.25).to_csv())
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- point lists ---------------------------------------------------------------


def test_parse_points():
    assert parse_points("0.5").tolist() == [0.5]
    assert parse_points("0.1,0.2").tolist() == [0.1, 0.2]
    assert parse_points("grid").size == 64
    g = parse_points("grid:10")
    assert g.size == 10 and g[0] == pytest.approx(1e-6) and g[-1] < 1
    for bad in ("grid:0", "grid:x", "1.5", "0"):
        with pytest.raises(ValueError):
            parse_points(bad)


# -- subcommands -----------------------------------------------------------------


def test_check_profile(capsys):
    code, out, _ = run(capsys, "check-profile", "--profile", "power(0.5)")
    assert code == 0
    data = json.loads(out)
    assert data["profile"] == "power(0.5)"
    assert data["classQ"]["memberQ"] is True


def test_eval_norm(capsys, indicator_csv):
    code, out, _ = run(capsys, "eval", "--norm", "Lp:2", "--fn", indicator_csv)
    assert code == 0
    data = json.loads(out)
    assert data["value"] == pytest.approx(0.5, rel=1e-15)
    assert data["admissible"] is True


def test_eval_norm_reports_infinity(capsys, indicator_csv):
    code, out, _ = run(capsys, "eval", "--norm", "Lambda:log", "--fn", indicator_csv)
    assert code == 0 and json.loads(out)["value"] == "inf"


def test_eval_operator_csv(capsys, staircase_csv):
    code, out, _ = run(capsys, "eval", "--op", "SI", "--profile", "power(0.5)", "--fn", staircase_csv, "--at", "0.9")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,value"
    t, v = map(float, lines[1].split(","))
    assert t == 0.9 and v == pytest.approx(2 * math.sqrt(0.7 / 0.9), rel=1e-14)


def test_eval_operator_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(StepFunction.constant(1.0).to_csv()))
    code, out, _ = run(capsys, "eval", "--op", "HI", "--m", "2", "--profile", "power(1/2)", "--fn", "-",
                       "--at", "grid:5")
    assert code == 0
    rows = np.array([[float(x) for x in line.split(",")] for line in out.strip().splitlines()[1:]])
    np.testing.assert_allclose(rows[:, 1], (2 - 2 * np.sqrt(rows[:, 0])) ** 2 / 2, rtol=1e-12, atol=1e-15)


def test_optimal_target(capsys, indicator_csv):
    code, out, _ = run(capsys, "optimal", "--mode", "target", "--space", "Lp:2", "--profile", "john(3,1)",
                       "--fn", indicator_csv)
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"value", "warnings", "regime", "profile_report"}
    r = 0.25
    assert data["value"] == pytest.approx(math.sqrt(r * r * (r ** (-5 / 3) - 1) * 0.6) + r, rel=1e-9)
    assert data["regime"] == "classQ" and data["warnings"] == []


def test_optimal_outside_class_q_warns(capsys, indicator_csv):
    code, out, _ = run(capsys, "optimal", "--mode", "target", "--space", "Lp:2", "--profile", "gauss",
                       "--fn", indicator_csv, "--allow-outside")
    assert code == 0
    assert json.loads(out)["warnings"]


def test_optimal_domain_nonexistence(capsys, indicator_csv):
    code, _, err = run(capsys, "optimal", "--mode", "domain", "--space", "Lp:inf", "--profile", "linear",
                       "--fn", indicator_csv)
    assert code == 1 and "no optimal domain" in err


# -- verify and errors ----------------------------------------------------------


def test_verify_summary_and_json(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "verify", "--suite", "classQ-polynomials", "--json", str(path))
    assert code == 0
    assert out.splitlines()[0].startswith("PASS")
    data = json.loads(path.read_text())
    assert data["suite"] == "classQ-polynomials" and data["seed"] == 42 and data["runtime_ms"] is None
    assert all(a["pass"] for a in data["assertions"])


def test_verify_json_to_stdout_is_reproducible(capsys):
    _, first, _ = run(capsys, "verify", "--suite", "conditions", "--json", "-")
    _, second, _ = run(capsys, "verify", "--suite", "conditions", "--json", "-")
    assert first == second
    json.loads(first)


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["verify", "--suite", "nope"], "registered suites"),
        (["eval", "--norm", "Lp:", "--fn", "-"], "position"),
        (["check-profile", "--profile", "power(2)"], "error"),
        (["eval", "--op", "SI", "--fn", "/no/such.csv", "--profile", "log"], "error"),
    ],
)
def test_errors_exit_2(capsys, monkeypatch, argv, fragment):
    monkeypatch.setattr(sys, "stdin", io.StringIO(StepFunction.constant(1.0).to_csv()))
    code, _, err = run(capsys, *argv)
    assert code == 2 and fragment in err


def test_installed_entry_point(indicator_csv):
    proc = subprocess.run([sys.executable, "-m", "rispace.cli", "eval", "--norm", "Lp:1", "--fn", indicator_csv],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["value"] == 0.25
