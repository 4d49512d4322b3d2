"""
Test the fixture registry, built-in fixtures and declarative overlays
"""
import json

import numpy as np
import pytest

from duality import kz_contains
from errors import FixtureError
from fixtures import BUILTIN, FixtureRegistry, fixture_from_dict, registry
from splitting import dr_operator, fixed_point_residual

OVERLAY = {
    "name": "overlay-interval",
    "dim": 1,
    "operator_a": {"kind": "normal_cone_box", "lo": [0.0], "hi": [2.0]},
    "operator_b": {"kind": "normal_cone_box", "lo": [1.0], "hi": [3.0]},
    "solutions": {
        "Z": {"kind": "box", "lo": [1.0], "hi": [2.0]},
        "K": {"kind": "point", "p": [0.0]},
        "samples": [[[1.5], [0.0]], [[1.0], [0.0]]],
    },
    "fixT": {"kind": "box", "lo": [1.0], "hi": [2.0]},
    "common_zero": True,
    "x0": [5.0],
}


@pytest.mark.parametrize("name", list(BUILTIN))
def test_builtin_fixture_validates(name):
    fixture = registry.get(name)
    assert fixture.name == name
    assert fixture.summary()["dim"] == fixture.dim


@pytest.mark.parametrize("name", list(BUILTIN))
def test_builtin_expectations_hold(name):
    fixture = registry.get(name)
    for expectation in fixture.expectations:
        check = expectation.evaluate(fixture)
        assert check.passed, f"{name}.{check.name}: residual {check.residual} > {check.tolerance}"


@pytest.mark.parametrize("name", list(BUILTIN))
def test_sampled_pairs_are_solutions(name, rng):
    fixture = registry.get(name)
    T = dr_operator(fixture.pair)
    for z, k in fixture.sample_pairs(rng, 20):
        assert kz_contains(fixture.pair, z, k)
        assert fixed_point_residual(T, z + k) <= 1e-9


def test_registry_caches_fixtures():
    assert registry.get("normskew") is registry.get("normskew")


def test_unknown_fixture():
    with pytest.raises(FixtureError):
        registry.get("no-such-fixture")


def test_paramonotone_flags():
    assert registry.get("feasibility-1d").paramonotone
    assert registry.get("orthogonal-2d").paramonotone
    assert not registry.get("normskew").paramonotone
    assert not registry.get("ww-nested").paramonotone


def test_list_fixtures_summaries():
    summaries = FixtureRegistry().list_fixtures()
    assert [s["name"] for s in summaries] == list(BUILTIN)
    hinge = next(s for s in summaries if s["name"] == "hinge")
    assert hinge["Z"] == "[-1,1]"


def test_fixture_from_dict():
    fixture = fixture_from_dict(OVERLAY)
    fixture.validate()
    assert fixture.paramonotone
    assert fixture.default_x0 == [5.0]
    np.testing.assert_array_equal(fixture.solutions.sample_z[0], [1.5])


def test_fixture_from_dict_rejects_missing_operator():
    spec = dict(OVERLAY)
    del spec["operator_b"]
    with pytest.raises(FixtureError):
        fixture_from_dict(spec)


def test_fixture_from_dict_rejects_wrong_dim():
    with pytest.raises(FixtureError):
        fixture_from_dict(dict(OVERLAY, dim=2))


def test_load_overlay(tmp_path):
    path = tmp_path / "overlay.json"
    path.write_text(json.dumps({"fixtures": [OVERLAY]}))
    local = FixtureRegistry()
    assert local.load_overlay(str(path)) == ["overlay-interval"]
    assert "overlay-interval" in local.names()
    assert local.get("overlay-interval").fixT is not None


def test_load_overlay_rejects_invalid_samples(tmp_path):
    # without Z and K the stored samples are what gets validated
    bad = dict(OVERLAY, solutions={"samples": [[[0.5], [0.0]]]})
    bad.pop("fixT")
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    with pytest.raises(FixtureError):
        FixtureRegistry().load_overlay(str(path))


def test_load_overlay_rejects_unreadable_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(FixtureError):
        FixtureRegistry().load_overlay(str(path))
    with pytest.raises(FixtureError):
        FixtureRegistry().load_overlay(str(tmp_path / "missing.json"))
