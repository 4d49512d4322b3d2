"""
Test report serialization and the report store
"""
import json

import numpy as np
import pytest

from reports import Check, Report, ReportStore


def _strict_load(path):
    def reject(token):
        raise ValueError(f"non-standard JSON constant {token}")

    return json.loads(path.read_text(), parse_constant=reject)


def test_non_finite_values_are_strict_json(tmp_path):
    report = Report(fixture="feasibility-1d", suite="run-dr")
    report.add(Check.numeric("abstract_algorithm", "J_A x = P_Z(x - k)", np.inf, 1e-8))
    report.add(Check.numeric("limit.fixed_point", "the limit is fixed by T", 0.0, 1e-6,
                             expected=[np.nan], actual=np.array([-np.inf])))
    path = ReportStore().write_report(report, str(tmp_path / "report.json"))

    document = _strict_load(tmp_path / "report.json")
    assert path == str(tmp_path / "report.json")
    checks = {c["name"]: c for c in document["checks"]}
    assert checks["abstract_algorithm"]["residual"] == "inf"
    assert checks["abstract_algorithm"]["pass"] is False
    assert checks["limit.fixed_point"]["expected"] == ["nan"]
    assert checks["limit.fixed_point"]["actual"] == ["-inf"]


def test_store_without_destination_writes_nothing():
    assert ReportStore().write_report(Report(fixture="f", suite="s")) is None


def test_attach_references_lookup_order():
    report = Report(fixture="f", suite="s")
    cited = report.add(Check.numeric("psi.fixed_points", "p", 0.0, 1.0))
    by_last = report.add(Check.numeric("zoo.ww.inverse_involution", "p", 0.0, 1.0))
    exact = report.add(Check.numeric("psi.special", "p", 0.0, 1.0))
    kept = report.add(Check.numeric("passty", "p", 0.0, 1.0))
    kept.reference = "already cited"
    fallback = report.add(Check.numeric("T_is_identity", "p", 0.0, 1.0))

    report.attach_references({"psi": "Psi bijection", "inverse_involution": "involution",
                               "psi.special": "special case", "passty": "orthogonality"}, "worked example")

    assert cited.reference == "Psi bijection"
    assert by_last.reference == "involution"
    assert exact.reference == "special case"
    assert kept.reference == "already cited"
    assert fallback.reference == "worked example"
    assert all("reference" in c for c in report.to_dict()["checks"])


@pytest.mark.parametrize("residual, tolerance, passed", [(0.0, 0.0, True), (1e-9, 1e-8, True), (1e-7, 1e-8, False)])
def test_check_passes_iff_residual_within_tolerance(residual, tolerance, passed):
    assert Check.numeric("c", "p", residual, tolerance).passed is passed
