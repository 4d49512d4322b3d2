"""
Test the command-line surface and its exit codes
"""
import json

import pytest

from cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, DualityCLI
from commands import parse_vector
from errors import UsageError


def run(*argv):
    return DualityCLI().run(list(argv))


def test_parse_vector():
    assert parse_vector("1.5,-2") == [1.5, -2.0]
    assert parse_vector("5") == [5.0]
    assert parse_vector(None) is None
    with pytest.raises(UsageError):
        parse_vector("1;2")


def test_list(capsys):
    assert run("list") == EXIT_OK
    out = capsys.readouterr().out
    assert "normskew" in out
    assert "not paramonotone" in out


def test_verify_writes_report(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = run("verify", "--fixture", "feasibility-1d", "--suite", "duality", "--samples", "50",
               "--json", str(path))
    assert code == EXIT_OK
    assert "✅" in capsys.readouterr().out
    document = json.loads(path.read_text())
    assert document["suite"] == "duality"
    assert document["seed"] == 42


def test_verify_expected_failure_passes(capsys):
    assert run("verify", "--fixture", "normskew", "--suite", "paramonotone", "--samples", "20") == EXIT_OK
    assert "(expected failure)" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--fixture", "feasibility-1d", "--suite", "everything"),
        ("verify", "--fixture", "no-such-fixture", "--suite", "duality"),
        ("verify", "--fixture", "normskew", "--suite", "projections"),
        ("run", "--fixture", "feasibility-1d", "--algorithm", "dr", "--x0", "a,b"),
        ("run", "--fixture", "feasibility-1d", "--algorithm", "newton"),
    ],
)
def test_usage_errors_exit_2(argv):
    assert run(*argv) == EXIT_USAGE


def test_missing_argument_exits_2():
    with pytest.raises(SystemExit) as excinfo:
        run("verify", "--fixture", "normskew")
    assert excinfo.value.code == EXIT_USAGE


def test_run_prints_limit(tmp_path, capsys):
    csv_path = tmp_path / "trace.csv"
    code = run("run", "--fixture", "feasibility-1d", "--algorithm", "dr", "--x0", "5", "--csv", str(csv_path))
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "limit  = 2" in out
    assert csv_path.exists()


def test_run_failure_exits_1():
    assert run("run", "--fixture", "feasibility-1d", "--algorithm", "dr", "--x0", "5", "--max-iter", "1") == EXIT_FAILED


def test_fixtures_load(tmp_path, capsys):
    overlay = {
        "name": "cli-overlay",
        "operator_a": {"kind": "zero", "dim": 1},
        "operator_b": {"kind": "zero", "dim": 1},
        "solutions": {"Z": {"kind": "whole", "dim": 1}, "K": {"kind": "point", "p": [0.0]}},
        "fixT": {"kind": "whole", "dim": 1},
    }
    path = tmp_path / "overlay.json"
    path.write_text(json.dumps(overlay))
    assert run("fixtures", "--load", str(path)) == EXIT_OK
    assert "cli-overlay loaded and validated" in capsys.readouterr().out


def test_fixtures_load_missing_file(tmp_path):
    assert run("fixtures", "--load", str(tmp_path / "missing.json")) == EXIT_USAGE
