import json
import subprocess
import sys

import pytest

from cychom import sbi
from cychom.cli import main, run
from cychom.report import flatten, parse_text

ROUND_TRIP = [
    ["hh", "--algebra", "dual_numbers", "--max-degree", "4"],
    ["hh", "--algebra", "x3", "--max-degree", "3", "--normalized", "--verify"],
    ["hc", "--algebra", "Q", "--max-degree", "4"],
    ["sbi", "--algebra", "dual_numbers", "--max-degree", "3"],
    ["sbi", "--algebra", "Q", "--max-degree", "4", "--eigen", "1"],
    ["hodge-decomp", "--algebra", "xy3", "--max-degree", "2"],
    ["relative", "--algebra", "dual_numbers", "--max-degree", "3"],
    ["goodwillie", "--algebra", "x3", "--max-degree", "2"],
    ["derham", "--algebra", "xy3"],
    ["derham", "--slice", "1,1:4", "--verify"],
    ["hkr", "--slice", "1,1:3", "--max-degree", "2"],
    ["filtration", "--algebra", "dual_numbers", "--degree", "1"],
    ["chow", "--table", "projective_space(3)", "--p", "2", "--dim-ma", "2", "--graded"],
]


def run_json(argv):
    status, out = run(["--format", "json"] + argv)
    return status, json.loads(out)


def test_hh_example():
    status, doc = run_json(["hh", "--algebra", "dual_numbers", "--max-degree", "4"])
    assert status == 0 and doc["results"]["dims"] == [2, 1, 1, 1, 1]
    assert doc["schema_version"] == 1 and doc["command"] == "hh"


def test_hc_example():
    status, doc = run_json(["hc", "--algebra", "Q", "--max-degree", "4"])
    assert status == 0 and doc["results"]["dims"] == [1, 0, 1, 0, 1]
    assert doc["results"]["mixed_complex_dims"] == [1, 0, 1, 0, 1]


def test_chow_example(fixtures_dir):
    status, doc = run_json(["chow", "--table", str(fixtures_dir / "p3.hodge"), "--p", "2",
                            "--dim-ma", "1", "--graded"])
    r = doc["results"]
    assert status == 0
    assert r["verdict"] == "satisfied" and r["dim_formal_chow"] == 0
    assert r["prorep"].startswith("pro-representable")


def test_chow_from_algebra_and_violation(fixtures_dir):
    status, doc = run_json(["chow", "--table", str(fixtures_dir / "quintic.hodge"), "--p", "2",
                            "--algebra", "xy3"])
    assert status == 0                       # a violated condition is an answer, not an error
    assert doc["results"]["verdict"] == "violated"
    assert doc["results"]["dim_formal_chow"] == "not determined"


def test_algebra_file_input(fixtures_dir):
    status, doc = run_json(["hh", "--algebra", str(fixtures_dir / "xy3.alg"), "--max-degree", "2"])
    assert status == 0 and doc["results"]["dims"] == [6, 8, 14]


@pytest.mark.parametrize("argv", ROUND_TRIP, ids=lambda a: " ".join(a[:2]))
def test_text_and_json_carry_identical_numbers(argv):
    s1, text = run(argv)
    s2, js = run(["--format", "json"] + argv)
    assert s1 == s2 == 0, text
    doc = json.loads(js)
    parsed = parse_text(text)
    from cychom.report import _scalar
    flat = {k: _scalar(v) for k, v in flatten(doc)
            if k not in ("command", "schema_version", "elapsed_seconds", "params.format")}
    parsed.pop("elapsed_seconds", None)
    parsed.pop("params.format", None)
    assert parsed == flat


@pytest.mark.parametrize("argv", [
    ["hh", "--algebra", "no_such_algebra"],
    ["--field", "Q(t)", "hh", "--algebra", "dual_numbers"],
    ["hh"],
    ["frobnicate"],
    ["chow", "--table", "projective_space(3)", "--p", "7", "--dim-ma", "1"],
    ["chow", "--table", "no_such_table", "--p", "1", "--dim-ma", "1"],
    ["derham"],
])
def test_input_errors_exit_1(argv, capsys):
    try:
        status = main(argv)
    except SystemExit as exc:          # argparse usage errors
        status = exc.code
    assert status == 1


def test_parse_error_on_malformed_file(fixtures_dir, capsys):
    assert main(["hh", "--algebra", str(fixtures_dir / "broken.alg")]) == 1
    assert "ParseError" in capsys.readouterr().err
    assert main(["chow", "--table", str(fixtures_dir / "broken.hodge"), "--p", "1", "--dim-ma", "1"]) == 1


def test_budget_exceeded_exit_1(capsys):
    assert main(["--budget", "10", "hh", "--algebra", "xy3"]) == 1
    assert "BudgetExceeded" in capsys.readouterr().err


def test_verdict_failure_exit_2(monkeypatch, capsys):
    monkeypatch.setattr(sbi._TotMaps, "B", lambda self, z: {})
    status = main(["sbi", "--algebra", "dual_numbers", "--max-degree", "3"])
    out = capsys.readouterr().out
    assert status == 2
    assert "ExactnessFailure" in out


def test_threads_flag_gives_same_numbers():
    _, a = run_json(["hh", "--algebra", "xy3", "--max-degree", "3", "--normalized"])
    _, b = run_json(["--threads", "2", "hh", "--algebra", "xy3", "--max-degree", "3", "--normalized"])
    assert a["results"]["dims"] == b["results"]["dims"] == [6, 8, 14, 23]


def test_seed_is_reproducible():
    argv = ["--format", "json", "--seed", "7", "hh", "--algebra", "x3", "--max-degree", "2", "--verify"]
    a, b = json.loads(run(argv)[1]), json.loads(run(argv)[1])
    assert a["results"] == b["results"] and a["ok"]


def test_console_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "cychom.cli", "chow", "--table",
                           str(fixtures_dir / "p3.hodge"), "--p", "2", "--dim-ma", "1", "--graded"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "results.verdict = satisfied" in proc.stdout
