"""
Test the verification suites on the built-in fixtures
"""
import pytest

from errors import UsageError
from fixtures import BUILTIN
from operator_zoo import zoo_catalog
from suites import Suite, parse_suite, run_suite

SAMPLES = 100


def _failures(report):
    return [f"{c.name}: residual {c.residual} > {c.tolerance}" for c in report.failures]


@pytest.mark.parametrize("name", ["skewskew", "normskew", "feasibility-1d", "ww-nested", "lcl-composed"])
def test_identities_suite(name):
    report = run_suite(name, "identities", samples=SAMPLES, seed=7)
    assert report.passed, _failures(report)
    names = {c.name for c in report.checks}
    assert "dr.self_duality" in names
    assert "paramonotone.linear.rotation" in names
    assert "paramonotone.linear.identity" in names
    assert "paramonotone.linear.coordinate_projection" in names
    for prefix in ("A", "B", "zoo.ww", "zoo.lcl_rotator"):
        assert f"{prefix}.inverse_involution" in names
        assert f"{prefix}.ovee_involution" in names
        assert f"{prefix}.ovee_inverse_commute" in names
        assert f"{prefix}.firmly_nonexpansive" in names


def test_identities_suite_covers_zoo_at_full_sample_size():
    report = run_suite("feasibility-1d", "identities", samples=1000, seed=1)
    assert report.passed, _failures(report)
    firm = [c for c in report.checks if c.name.startswith("zoo.") and c.name.endswith(".firmly_nonexpansive")]
    assert len(firm) == len(zoo_catalog())
    assert all(c.tolerance == 1e-10 for c in firm)


@pytest.mark.parametrize("name", list(BUILTIN))
def test_duality_suite(name):
    report = run_suite(name, "duality", samples=SAMPLES, seed=7)
    assert report.passed, _failures(report)
    assert report.suite == "duality"
    assert report.seed == 7


@pytest.mark.parametrize("name", ["feasibility-1d", "orthogonal-2d", "hinge", "lcl-composed"])
def test_paramonotone_suite(name):
    report = run_suite(name, "paramonotone", samples=SAMPLES, seed=7)
    assert report.passed, _failures(report)
    assert not any(c.expected_failure for c in report.checks)


@pytest.mark.parametrize("name", ["normskew", "skewskew"])
def test_paramonotone_counterexample_mode(name):
    report = run_suite(name, "paramonotone", samples=SAMPLES, seed=7)
    assert report.passed, _failures(report)
    counterexample = next(c for c in report.checks if c.name == "rectangle.counterexample")
    assert counterexample.expected_failure
    assert counterexample.actual is False


def test_paramonotone_suite_needs_paramonotone_or_counterexample():
    with pytest.raises(UsageError):
        run_suite("ww-nested", "paramonotone", samples=SAMPLES)


@pytest.mark.parametrize("name", ["feasibility-1d", "orthogonal-2d", "hinge", "lcl-composed"])
def test_projections_suite(name):
    report = run_suite(name, "projections", samples=SAMPLES, seed=7)
    assert report.passed, _failures(report)
    assert any(c.name == "abstract_algorithm" for c in report.checks)


def test_projections_suite_runs_summerland_on_feasibility():
    report = run_suite("feasibility-1d", "projections", samples=SAMPLES, seed=3)
    assert any(c.name == "summerland" for c in report.checks)


def test_projections_suite_needs_paramonotone():
    with pytest.raises(UsageError):
        run_suite("normskew", "projections", samples=SAMPLES)


@pytest.mark.parametrize("name", ["feasibility-1d", "hinge", "orthogonal-2d"])
def test_fenchel_suite(name):
    report = run_suite(name, "fenchel", samples=SAMPLES, seed=7)
    assert report.passed, _failures(report)
    total = next(c for c in report.checks if c.name == "total_duality")
    assert total.residual <= 1e-6


def test_fenchel_suite_needs_functions():
    with pytest.raises(UsageError):
        run_suite("skewskew", "fenchel", samples=SAMPLES)


def test_run_suite_is_deterministic():
    first = run_suite("normskew", "duality", samples=SAMPLES, seed=11)
    second = run_suite("normskew", "duality", samples=SAMPLES, seed=11)
    assert [c.to_dict() for c in first.checks] == [c.to_dict() for c in second.checks]


def test_report_serialization_sorted_by_name():
    report = run_suite("feasibility-1d", "duality", samples=SAMPLES, seed=7).to_dict()
    names = [c["name"] for c in report["checks"]]
    assert names == sorted(names)
    assert report["schema_version"] == 1
    assert report["pass"] is True


def test_parse_suite():
    assert parse_suite("fenchel") is Suite.FENCHEL
    with pytest.raises(UsageError):
        parse_suite("everything")


def test_run_suite_rejects_nonpositive_samples():
    with pytest.raises(UsageError):
        run_suite("normskew", "duality", samples=0)


@pytest.mark.parametrize(
    "name, suite",
    [("skewskew", "duality"), ("normskew", "paramonotone"), ("feasibility-1d", "projections"),
     ("hinge", "fenchel"), ("ww-nested", "identities")],
)
def test_every_check_carries_a_reference(name, suite):
    report = run_suite(name, suite, samples=SAMPLES, seed=7).to_dict()
    assert all(c["reference"] for c in report["checks"])


def test_references_name_the_result_or_fixture():
    checks = {c.name: c for c in run_suite("skewskew", "duality", samples=SAMPLES, seed=7).checks}
    assert checks["passty"].reference == "Passty orthogonality on gr K"
    assert checks["T_is_identity"].reference == BUILTIN["skewskew"]().reference
    counterexample = next(c for c in run_suite("normskew", "paramonotone", samples=SAMPLES, seed=7).checks
                          if c.name == "rectangle.counterexample")
    assert "paramonotonicity" in counterexample.reference
