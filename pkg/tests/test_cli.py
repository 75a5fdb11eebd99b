import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "docs" / "report-schema.json"


def run_cli(*argv, env=None):
    import os

    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "salbound", *argv],
        capture_output=True,
        text=True,
        env=full_env,
    )


def parse_json(proc):
    assert proc.returncode in (0, 4), proc.stderr
    return json.loads(proc.stdout)


def validate_schema(report):
    if jsonschema is None:
        pytest.skip("jsonschema not installed")
    schema = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    jsonschema.validate(report, schema)


def read_csv(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(lines))))


# --- solve -----------------------------------------------------------------------


def test_solve_text_output():
    proc = run_cli(
        "solve", "--beta", "1", "--lambda", "1", "--gamma", "1",
        "--mass", "0", "--potential", "linear:1",
    )
    assert proc.returncode == 0
    assert "units: hbar = c = 1" in proc.stdout
    assert "ground_energy" in proc.stdout
    value = float(proc.stdout.split("ground_energy")[1].split()[0])
    assert value == pytest.approx(2.2322, abs=1e-3)


def test_solve_json_schema_and_value():
    proc = run_cli("solve", "--potential", "linear:1", "--format", "json")
    report = parse_json(proc)
    validate_schema(report)
    assert report["result"]["ground_energy"] == pytest.approx(2.2322, abs=1e-3)
    assert report["header"]["units"] == "hbar = c = 1"


def test_solve_stability_exit_code():
    proc = run_cli("solve", "--potential", "coulomb:0.8", "--mass", "0")
    assert proc.returncode == 3
    assert "2/pi" in proc.stderr


def test_solve_parse_error_exit_code():
    proc = run_cli("solve", "--potential", "linear:-1")
    assert proc.returncode == 2
    assert "linear:-1" in proc.stderr or "slope" in proc.stderr
    proc = run_cli("solve", "--beta", "nope")
    assert proc.returncode == 2
    assert "--beta" in proc.stderr


def test_unknown_flag_exits_2():
    proc = run_cli("solve", "--frobnicate", "1")
    assert proc.returncode == 2


def test_solve_csv_matches_json():
    json_proc = run_cli("solve", "--potential", "linear:1", "--format", "json")
    csv_proc = run_cli("solve", "--potential", "linear:1", "--format", "csv")
    report = parse_json(json_proc)
    rows = read_csv(csv_proc.stdout)
    assert rows[0] == ["key", "value"]
    table = {row[0]: row[1] for row in rows[1:]}
    assert float(table["ground_energy"]) == report["result"]["ground_energy"]
    assert float(table["convergence_estimate"]) == report["result"]["convergence_estimate"]
    assert float(table["coefficient_0"]) == report["result"]["coefficients"][0]


# --- bounds ----------------------------------------------------------------------


def test_bounds_n4_equals_conjectured_at_four_massless():
    proc = run_cli(
        "bounds", "--n", "4", "--mass", "0", "--potential", "linear:1", "--format", "json",
    )
    report = parse_json(proc)
    validate_schema(report)
    bounds = report["bounds"]
    assert bounds["n4"] == pytest.approx(bounds["conjectured"], abs=1e-6)
    assert report["status"] == "proven"


def test_bounds_absent_entries_are_null_with_reason():
    proc = run_cli(
        "bounds", "--n", "5", "--mass", "1", "--potential", "linear:1", "--format", "json",
    )
    report = parse_json(proc)
    validate_schema(report)
    assert report["bounds"]["n4"] is None
    assert report["reasons"]["n4"] == "requires m=0"
    assert report["status"] == "conjectured"


def test_bounds_two_body_values():
    proc = run_cli(
        "bounds", "--n", "2", "--mass", "0", "--potential", "linear:1", "--format", "json",
    )
    report = parse_json(proc)
    assert report["bounds"]["upper"] == pytest.approx(3.19154, abs=1e-4)
    assert report["bounds"]["n2"] == pytest.approx(3.1568, abs=2e-3)
    assert report["bounds"]["conjectured"] == pytest.approx(3.1568, abs=2e-3)
    assert report["bounds"]["n3"] is None and report["bounds"]["n4"] is None


def test_bounds_csv_matches_json():
    args = ("bounds", "--n", "3", "--mass", "0", "--potential", "linear:1")
    report = parse_json(run_cli(*args, "--format", "json"))
    rows = read_csv(run_cli(*args, "--format", "csv").stdout)
    assert rows[0] == ["bound", "value", "note"]
    table = {row[0]: row[1] for row in rows[1:]}
    for key in ("n2", "n3", "conjectured", "upper"):
        assert float(table[key]) == report["bounds"][key]
    assert table["n4"] == ""


# --- linear-table and table1 --------------------------------------------------------


def test_linear_table_json():
    proc = run_cli("linear-table", "--n", "4", "--format", "json")
    report = parse_json(proc)
    validate_schema(report)
    assert report["bounds"]["n4"] == pytest.approx(report["bounds"]["conjectured"], rel=1e-14)
    assert report["bounds"]["upper"] == pytest.approx(12.23527, abs=1e-4)


PAPER_RN2 = [1.011, 1.08639, 1.11886, 1.13706, 1.14872, 1.17104, 1.20229]


def test_table1_reproduces_published_rows():
    proc = run_cli("table1", "--format", "json")
    report = parse_json(proc)
    validate_schema(report)
    assert report["columns"] == [2, 3, 4, 5, 6, 10, "inf"]
    for got, expected in zip(report["rows"]["R_N/2"], PAPER_RN2):
        assert got == pytest.approx(expected, abs=1e-4)
    for value in report["rows"]["R_c"]:
        assert value == pytest.approx(1.011, abs=1e-4)
    assert report["rows"]["R_N/4"][3] == pytest.approx(1.02745, abs=1e-4)
    assert report["rows"]["R_N/3"][0] is None


def test_table1_csv_matches_json():
    report = parse_json(run_cli("table1", "--format", "json"))
    rows = read_csv(run_cli("table1", "--format", "csv").stdout)
    assert rows[0] == ["row_label", "n", "value"]
    from_csv = {(row[0], row[1]): float(row[2]) for row in rows[1:]}
    for label, values in report["rows"].items():
        for column, value in zip(report["columns"], values):
            if value is None:
                assert (label, str(column)) not in from_csv
            else:
                assert from_csv[(label, str(column))] == value


def test_table1_text_layout():
    proc = run_cli("table1")
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert any("N->inf" in line for line in lines)
    rn2 = next(line for line in lines if line.startswith("R_N/2"))
    assert "1.011" in rn2 and "1.20229" in rn2


# --- verify-delta --------------------------------------------------------------------


def test_verify_delta_reports_are_byte_identical():
    args = (
        "verify-delta", "--n", "3", "--mass", "0", "--states", "4",
        "--samples", "5000", "--seed", "42", "--format", "json",
    )
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.stdout == second.stdout
    report = json.loads(first.stdout)
    validate_schema(report)
    assert report["regime"] == "proven"


def test_verify_delta_exit_codes_track_regime_and_findings():
    # the sampled family contains states with genuinely negative expectation;
    # in a proven regime that is the implementation-bug signal (exit 4)
    proc = run_cli(
        "verify-delta", "--n", "3", "--mass", "0", "--states", "5",
        "--samples", "20000", "--seed", "42", "--format", "json",
    )
    report = json.loads(proc.stdout)
    has_findings = bool(report["findings"])
    assert report["verdict"] == ("findings" if has_findings else "all-nonnegative")
    assert proc.returncode == (4 if has_findings else 0)
    for finding in report["findings"]:
        assert finding["regime"] == "proven"
        assert finding["stderr"] > 0.0

    proc = run_cli(
        "verify-delta", "--n", "4", "--mass", "0.5", "--states", "3",
        "--samples", "5000", "--seed", "42", "--format", "json",
    )
    report = json.loads(proc.stdout)
    assert report["regime"] == "conjectured"
    assert proc.returncode == 0  # conjectured regime never signals exit 4


def test_verify_delta_thread_cap_does_not_change_results():
    args = (
        "verify-delta", "--n", "3", "--mass", "0", "--states", "2",
        "--samples", "4000", "--seed", "7", "--shards", "4", "--format", "json",
    )
    serial = run_cli(*args, env={"SALBOUND_THREADS": "1"})
    threaded = run_cli(*args, env={"SALBOUND_THREADS": "4"})
    assert serial.stdout == threaded.stdout


def test_verify_delta_text_verdict():
    proc = run_cli(
        "verify-delta", "--n", "4", "--mass", "0.5", "--states", "2",
        "--samples", "3000", "--seed", "1",
    )
    assert proc.returncode == 0
    assert "conjectured regime" in proc.stdout


# --- config file, output file, misc ---------------------------------------------------


def test_config_file_supplies_defaults_and_flags_override(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"n": 4, "mass": 0.0, "potential": "linear:1"}))
    report = parse_json(
        run_cli("bounds", "--config", str(config), "--format", "json")
    )
    assert report["n"] == 4
    report = parse_json(
        run_cli("bounds", "--config", str(config), "--n", "3", "--format", "json")
    )
    assert report["n"] == 3  # flag wins over config


def test_bad_config_file_exits_2(tmp_path):
    config = tmp_path / "broken.json"
    config.write_text("{not json")
    proc = run_cli("bounds", "--config", str(config))
    assert proc.returncode == 2


def test_out_writes_file(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli("linear-table", "--n", "3", "--format", "json", "--out", str(out))
    assert proc.returncode == 0
    assert proc.stdout == ""
    report = json.loads(out.read_text())
    assert report["header"]["command"] == "linear-table"


def test_version_flag():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert "salbound" in proc.stdout


def test_missing_subcommand_exits_2():
    proc = run_cli()
    assert proc.returncode == 2
