import json
import subprocess
import sys

import jsonschema
import pytest

from conftest import GAMMA_REF
from geoamp import cli
from geoamp.reporting import csv_matrix, dumps, report_schema

SCHEMA = report_schema()


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ellipse(capsys):
    code, out, err = run_cli(capsys, "validate", "--loop", "ellipse")
    assert code == 0 and err == ""
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["results"]["min_discriminant"] == pytest.approx(1.1694996282157, abs=1e-11)


def test_validate_regime_violation(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"loop": {"kind": "ellipse", "y0": 1.0}}))
    code, out, err = run_cli(capsys, "validate", "--config", str(cfg))
    assert code == cli.EXIT_REGIME
    error = json.loads(err)["error"]
    assert error["type"] == "RegimeError" and 0 <= error["s"] <= 1
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["errors"][0]["exit_code"] == cli.EXIT_REGIME


@pytest.mark.parametrize("argv", [["validate", "--loop", "circle"],
                                  ["gamma", "--n", "-1"],
                                  ["gamma", "--tol", "0"],
                                  ["validate", "--format", "csv"],
                                  ["converge", "--periods", "10,20"],
                                  ["snapshot", "--point", "1,2"]])
def test_config_errors(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == cli.EXIT_CONFIG
    assert json.loads(err)["error"]["exit_code"] == cli.EXIT_CONFIG


def test_unknown_config_key(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _, err = run_cli(capsys, "validate", "--config", str(cfg))
    assert code == cli.EXIT_CONFIG and "bogus" in err


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 3, "point": [0.0, 2.0, 1.0]}))
    code, out, _ = run_cli(capsys, "snapshot", "--config", str(cfg), "--n", "1")
    report = json.loads(out)
    assert code == 0
    assert report["config"]["n"] == 1 and report["results"]["n"] == 1
    assert report["results"]["omega"] == 2.0
    assert report["results"]["eigen_residual"] < 1e-10


def test_snapshot_regime_point(capsys):
    code, _, err = run_cli(capsys, "snapshot", "--point", "1,1,1")
    assert code == cli.EXIT_REGIME


def test_gram_csv(capsys, tmp_path):
    out_path = tmp_path / "gram.csv"
    code, _, _ = run_cli(capsys, "gram", "--levels", "6", "--format", "csv", "--out", str(out_path))
    assert code == 0
    rows = [line.split(",") for line in out_path.read_text().splitlines()]
    assert len(rows) == 6 and all(len(r) == 6 for r in rows)
    for m, row in enumerate(rows):
        for n, cell in enumerate(row):
            assert abs(complex(cell) - (m == n)) <= 1e-8
    report = json.loads(out_path.with_suffix(".json").read_text())
    jsonschema.validate(report, SCHEMA)
    assert report["results"]["max_off_diagonal"] <= 1e-8


def test_gram_json_matrix_is_complex(capsys):
    code, out, _ = run_cli(capsys, "gram", "--levels", "2")
    cell = json.loads(out)["results"]["matrix"][0][0]
    assert set(cell) == {"re", "im"} and cell["re"] == pytest.approx(1.0)


@pytest.fixture(scope="module")
def gamma_report():
    proc = subprocess.run([sys.executable, "-m", "geoamp.cli", "gamma", "--engine", "all",
                           "--loop", "ellipse", "--n", "0"], capture_output=True, text=True)
    return proc


def test_gamma_all_engines(gamma_report):
    assert gamma_report.returncode == 0
    report = json.loads(gamma_report.stdout)
    jsonschema.validate(report, SCHEMA)
    res = report["results"]
    assert res["gammaClosed"] == pytest.approx(GAMMA_REF, abs=1e-10)
    assert res["gammaConnection"] == pytest.approx(0.5 * GAMMA_REF, abs=1e-8)
    assert res["gammaDynamics"] == pytest.approx(-0.5 * GAMMA_REF, rel=2e-2)
    assert set(res["agreement"]) == {"closed_vs_connection", "closed_vs_dynamics",
                                     "connection_is_half_closed",
                                     "evolved_closed_vs_dynamics"}
    assert res["agreement"]["connection_is_half_closed"] is True
    assert res["agreement"]["evolved_closed_vs_dynamics"] is True
    diag = report["diagnostics"]
    assert diag["version"] and diag["tolerances"]["tol"] == 1e-10


def test_gamma_report_is_deterministic(gamma_report):
    again = subprocess.run([sys.executable, "-m", "geoamp.cli", "gamma", "--engine", "all",
                            "--loop", "ellipse", "--n", "0"], capture_output=True, text=True)
    assert again.stdout.encode() == gamma_report.stdout.encode()


def test_gamma_closed_only_absolute_period(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"period_units": "absolute", "period": 5.0}))
    code, out, _ = run_cli(capsys, "gamma", "--engine", "closed", "--config", str(cfg))
    res = json.loads(out)["results"]
    assert code == 0 and res["period"] == 5.0
    assert "gammaDynamics" not in res and res["agreement"] == {}


def test_gamma_snapshot_start_reports_integration_failure(capsys):
    code, out, err = run_cli(capsys, "gamma", "--engine", "dynamics", "--initial", "snapshot")
    assert code == cli.EXIT_INTEGRATION
    error = json.loads(err)["error"]
    assert error["type"] == "IntegrationError" and error["t"] > 0
    jsonschema.validate(json.loads(out), SCHEMA)


def test_converge_csv(capsys, tmp_path):
    out_path = tmp_path / "conv.csv"
    code, _, _ = run_cli(capsys, "converge", "--periods", "25,50,100", "--format", "csv",
                         "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "T,gamma_dyn,gamma_closed,abs_err,slope"
    assert len(lines) == 4
    assert lines[1].split(",")[-1] == ""
    for line in lines[1:]:
        T, g, gc, err, _ = line.split(",")
        assert float(err) == pytest.approx(abs(float(g) - float(gc)))
    jsonschema.validate(json.loads(out_path.with_suffix(".json").read_text()), SCHEMA)


def test_cubic_check(capsys):
    code, out, _ = run_cli(capsys, "cubic-check", "--lam", "2")
    res = json.loads(out)["results"]
    assert code == 0 and res["residual"] <= 1e-6
    assert res["half_line_norm"] == pytest.approx(0.5, abs=1e-6)


def test_console_script():
    proc = subprocess.run(["geoamp", "validate", "--loop", "constant-X-wobble"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "validate"


# -- serialization ---------------------------------------------------------------

def test_dumps_round_trip_and_stability():
    obj = {"b": [1, 0.1, 1e-300, 2.5e17], "a": {"z": 1 + 2j, "f": True, "n": None},
           "inf": float("inf")}
    text = dumps(obj)
    back = json.loads(text)
    assert text == dumps(obj)
    assert back["b"] == [1, 0.1, 1e-300, 2.5e17]
    assert back["a"]["z"] == {"re": 1.0, "im": 2.0}
    assert back["inf"] is None
    assert list(back) == ["b", "a", "inf"]


def test_csv_matrix_parses():
    text = csv_matrix([[1 - 2j, -0.5j]])
    assert [complex(c) for c in text.strip().split(",")] == [1 - 2j, -0.5j]
