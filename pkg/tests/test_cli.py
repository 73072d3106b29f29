import io
import json
import subprocess
import sys

import pytest

from hhbounds.cli import CSV_HEADER, fmt, run_command


def run(*argv):
    out = io.StringIO()
    status = run_command(list(argv), stdout=out)
    return status, out.getvalue()


def csv_rows(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(True) == "true" and fmt(None) == "" and fmt(3) == "3"


def test_identity_example():
    status, text = run("identity", "--function", "square", "--a", "0", "--b", "1", "--alpha", "0.5", "--lambda", "0")
    assert status == 0
    assert text.splitlines()[0] == CSV_HEADER
    (row,) = csv_rows(text)
    assert float(row["residual"]) < 1e-10
    assert float(row["lhs"]) == pytest.approx(-1 / 12, abs=1e-15)


def test_identity_grid_json():
    status, text = run("identity", "--function", "exp", "--grid", "3", "--format", "json")
    assert status == 0
    rows = json.loads(text)
    assert len(rows) == 9 and all(r["residual"] < 1e-10 for r in rows)


def test_identity_needs_points():
    assert run("identity", "--function", "exp")[0] == 2


def test_coeffs_check():
    status, text = run("coeffs", "--alpha", "0.3", "--lambda", "0.6", "--q", "2", "--check")
    d = json.loads(text)
    assert status == 0
    assert d["oracle_ok"] and d["oracle_max_abs_diff"] < 1e-10
    assert {"gamma1", "mu4", "phi1", "eps2", "beta_a", "beta_b"} <= set(d)


def test_bounds_example():
    status, text = run(
        "bounds", "--function", "recip", "--a", "1", "--b", "2",
        "--alpha", "0.5", "--lambda", "0.3333333333", "--q", "2", "--theorem", "T4",
    )
    assert status == 0
    rep = json.loads(text)
    assert rep["theorem"] == "T4" and rep["slack"] >= 0 and rep["hypothesis_ok"] is True


def test_bounds_all_theorems_and_injected_fault():
    args = ["bounds", "--function", "square", "--a", "0", "--b", "1", "--alpha", "0.5", "--lambda", "0", "--q", "2"]
    status, text = run(*args)
    assert status == 0 and len(json.loads(text)) == 3
    assert run(*args, "--inject-fault")[0] == 1


def test_sweep_example():
    status, text = run("sweep", "--grid", "9", "--functions", "square,recip,log", "--q", "1,2", "--theorems", "T2,T3")
    assert status == 0
    rows = csv_rows(text)
    assert len(rows) == 3 * 81 * 2 * 2
    assert min(float(r["slack"]) for r in rows) >= -1e-10
    keys = [(r["function"], float(r["alpha"]), float(r["lambda"]), float(r["q"])) for r in rows]
    assert keys == sorted(keys)
    summary = text.strip().splitlines()[-1]
    assert summary.startswith("# summary") and "min_slack=" in summary and "violations=0" in summary


def test_sweep_fault_injection_flips_status():
    status, text = run("sweep", "--grid", "3", "--functions", "square", "--q", "1", "--theorems", "T2", "--inject-fault")
    assert status == 1
    assert "violations=0" not in text


def test_sweep_is_deterministic_and_parallel_safe():
    args = ["sweep", "--grid", "3", "--functions", "recip,exp", "--q", "1,2", "--theorems", "T2,T3,T4"]
    one = run(*args)
    two = run(*args)
    par = run(*args, "--jobs", "2")
    assert one == two == par


def test_sweep_json():
    status, text = run("sweep", "--grid", "2", "--functions", "exp", "--q", "2", "--format", "json")
    d = json.loads(text)
    assert status == 0 and d["summary"]["rows"] == 4 * 3 and d["summary"]["argmin"]["function"] == "exp"


def test_quadrature():
    status, text = run("quadrature", "--function", "exp", "--a", "0", "--b", "1", "--rule", "simpson", "--cells", "4", "--q", "2", "--oracle")
    d = json.loads(text)
    assert status == 0 and d["certified"] and d["cells"] == 4
    assert d["true_error"] <= d["error_bound"]
    status, text = run("quadrature", "--function", "recip", "--rule", "custom:0.3,0.6", "--cells", "3")
    assert status == 0 and "true_error" not in json.loads(text)
    # the hypothesis fails on sin over [0, pi]
    assert run("quadrature", "--function", "sin", "--a", "0", "--b", "3.14159", "--rule", "midpoint")[0] == 1


def test_means():
    status, text = run("means", "--family", "recip", "--variant", "midpoint", "--a", "1", "--b", "2", "--q", "2")
    assert status == 0
    (row,) = csv_rows(text)
    assert float(row["lhs"]) == pytest.approx(0.026480, abs=1e-5)
    assert float(row["rhs"]) == pytest.approx(0.058940, abs=1e-5)
    status, text = run("means", "--a", "0.5", "--b", "4", "--q", "3", "--n", "4")
    assert status == 0 and len(csv_rows(text)) == 9
    assert run("means", "--q", "1")[0] == 2


def test_reduce_check():
    status, text = run("reduce-check")
    rows = csv_rows(text)
    assert status == 0 and len(rows) == 10
    assert all(r["match"] == "true" and r["lhs_relation"] == "negated" for r in rows)
    assert "branch continuity" in text


def test_usage_errors():
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("bounds", "--function", "nope", "--alpha", "0.5", "--lambda", "0.5")[0] == 2
    assert run("bounds", "--function", "exp", "--alpha", "1.5", "--lambda", "0.5")[0] == 2
    assert run("sweep", "--grid", "1")[0] == 2


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("HH_BOUNDS_TOL", "1e-9")
    assert run("identity", "--function", "exp", "--alpha", "0.3", "--lambda", "0.3")[0] == 0
    monkeypatch.setenv("HH_BOUNDS_TOL", "abc")
    assert run("identity", "--function", "exp", "--alpha", "0.3", "--lambda", "0.3")[0] == 2


def test_output_file(tmp_path):
    target = tmp_path / "out.csv"
    status, text = run("means", "--family", "log", "--variant", "trapezoid", "-o", str(target))
    assert status == 0 and text == ""
    assert target.read_text().startswith(CSV_HEADER)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hhbounds.cli", "coeffs", "--alpha", "0.5", "--lambda", "0", "--q", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["gamma1"] == pytest.approx(1 / 64)
