"""
Test the experiment runner and its trace/report files
"""
import csv
import json

import numpy as np
import pytest

from errors import UsageError
from experiments import RunAlgorithm, parse_algorithm, run_algorithm


def test_dr_run_on_feasibility(tmp_path):
    csv_path, json_path = tmp_path / "trace.csv", tmp_path / "report.json"
    report, trace = run_algorithm("feasibility-1d", "dr", x0=[5.0], csv_path=str(csv_path),
                                  json_path=str(json_path))
    assert report.passed
    assert trace.iterations_used == 3
    np.testing.assert_allclose(trace.limit, [2.0])

    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "x_0", "shadow_0", "residual"]
    assert rows[1] == ["0", "5", "2", "1"]
    assert len(rows) == 5

    document = json.loads(json_path.read_text())
    assert document["fixture"] == "feasibility-1d"
    assert document["suite"] == "run-dr"
    assert document["pass"] is True
    assert document["traces"][0]["limit"] == [2.0]


def test_pr_averaged_default_relaxation():
    report, trace = run_algorithm("feasibility-1d", "pr_averaged", x0=[5.0])
    assert report.passed
    assert [float(x[0]) for x in trace.iterates] == [5.0, 3.5, 2.0]


def test_halpern_run_on_orthogonal():
    report, trace = run_algorithm("orthogonal-2d", "halpern", anchor=[-1.0, 2.0], tol=1e-4)
    assert report.passed, [c.name for c in report.failures]
    assert trace.converged
    np.testing.assert_allclose(trace.limit, [0.0, 2.0], atol=1e-3)


def test_haugazeau_run_on_orthogonal():
    report, trace = run_algorithm("orthogonal-2d", "haugazeau", anchor=[-1.0, 2.0])
    assert report.passed
    np.testing.assert_allclose(trace.limit, [0.0, 2.0])
    np.testing.assert_allclose(trace.shadow_limit, [0.0, 0.0])


def test_run_uses_fixture_default_start():
    report, trace = run_algorithm("normskew", "dr")
    np.testing.assert_array_equal(trace.iterates[0], [3.0, -3.0])
    assert report.passed


def test_unconverged_run_fails_its_report():
    report, trace = run_algorithm("feasibility-1d", "dr", x0=[5.0], max_iter=1)
    assert not trace.converged
    assert not report.passed
    assert "converged" in [c.name for c in report.failures]


def test_parse_algorithm():
    assert parse_algorithm("haugazeau") is RunAlgorithm.HAUGAZEAU
    with pytest.raises(UsageError):
        parse_algorithm("gradient")


@pytest.mark.parametrize(
    "kwargs",
    [
        {"algorithm": "pr_averaged", "relaxation": 1.5},
        {"algorithm": "dr", "tol": 0.0},
        {"algorithm": "dr", "max_iter": 0},
        {"algorithm": "dr", "x0": [1.0, 2.0]},
    ],
)
def test_run_rejects_bad_arguments(kwargs):
    with pytest.raises(UsageError):
        run_algorithm("feasibility-1d", **kwargs)


def test_haugazeau_run_on_feasibility():
    report, trace = run_algorithm("feasibility-1d", "haugazeau", anchor=[5.0])
    assert report.passed
    assert abs(float(trace.limit[0]) - 2.0) <= 1e-6
