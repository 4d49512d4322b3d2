"""
Test resolvent representation and the transform algebra
"""
import numpy as np
import pytest

from config import config
from errors import ContractViolation, NotMonotoneError
from operator_core import (
    ResolventOperator,
    as_point,
    firm_nonexpansiveness_violation,
    graph_contains,
    inverse,
    is_paramonotone_linear,
    minty_param,
    neg_ovee_inverse,
    ovee,
    reflected_resolvent,
    resolvent,
)
from operator_zoo import box, linear_operator, normal_cone_operator, rotator, skew_plus_normal_cone_WW, zoo_catalog


def test_as_point_promotes_scalars():
    np.testing.assert_array_equal(as_point(2.5), [2.5])


@pytest.mark.parametrize("coords", [[np.nan, 1.0], [np.inf], [[1.0, 2.0]], []])
def test_as_point_rejects_bad_coordinates(coords):
    with pytest.raises(ContractViolation):
        as_point(coords)


def test_dimension_mismatch():
    A = rotator(1)
    with pytest.raises(ContractViolation):
        resolvent(A, [1.0, 2.0, 3.0])


def test_normal_cone_resolvent_is_projection():
    A = normal_cone_operator(box([0.0], [2.0]))
    np.testing.assert_allclose(resolvent(A, [5.0]), [2.0])
    np.testing.assert_allclose(reflected_resolvent(A, [5.0]), [-1.0])


def test_inverse_resolvent_complements(points):
    A = linear_operator([[2.0, 1.0], [1.0, 1.0]])
    for x in points(50, 2):
        np.testing.assert_allclose(resolvent(A, x) + resolvent(inverse(A), x), x, atol=1e-11)


def test_inverse_of_projection():
    A = normal_cone_operator(box([0.0], [2.0]))
    np.testing.assert_allclose(resolvent(inverse(A), [5.0]), [3.0])


def test_ovee_resolvent(points):
    A = skew_plus_normal_cone_WW()
    for x in points(50, 2):
        np.testing.assert_array_equal(resolvent(ovee(A), x), -resolvent(A, -x))


def test_neg_ovee_inverse_reflection(points):
    A = normal_cone_operator(box([1.0, -1.0], [3.0, np.inf]))
    for x in points(50, 2):
        np.testing.assert_allclose(reflected_resolvent(neg_ovee_inverse(A), x), x + 2.0 * resolvent(A, -x),
                                   atol=1e-11)


def test_linear_inverse_is_matrix_inverse():
    # rot(+pi/2)^-1 = rot(-pi/2)
    x = np.array([1.0, 2.0])
    np.testing.assert_allclose(resolvent(inverse(rotator(1)), x), resolvent(rotator(-1), x), atol=1e-14)


def test_graph_membership():
    A = normal_cone_operator(box([0.0], [2.0]))
    assert graph_contains(A, [2.0], [3.0])
    assert graph_contains(A, [1.0], [0.0])
    assert not graph_contains(A, [1.0], [1.0])
    assert not graph_contains(A, [0.0], [1.0])


def test_graph_membership_rejects_nonpositive_tolerance():
    with pytest.raises(ContractViolation):
        graph_contains(rotator(1), [0.0, 0.0], [0.0, 0.0], tol=0.0)


def test_minty_parametrization_lands_in_graph(points):
    A = skew_plus_normal_cone_WW()
    for x in points(20, 2):
        a, u = minty_param(A, x)
        np.testing.assert_allclose(a + u, x)
        assert graph_contains(A, a, u)


@pytest.mark.parametrize(
    "M, expected",
    [
        ([[0.0, -1.0], [1.0, 0.0]], False),
        ([[1.0, 0.0], [0.0, 1.0]], True),
        ([[1.0, 0.0], [0.0, 0.0]], True),
        ([[2.0, 1.0], [1.0, 1.0]], True),
        ([[1.0, -1.0], [1.0, 0.0]], False),
        ([[1.0, 1.0], [-1.0, 1.0]], True),
        ([[0.0, 0.0], [0.0, 0.0]], True),
    ],
)
def test_paramonotone_classifier(M, expected):
    assert is_paramonotone_linear(M) is expected


def test_paramonotone_classifier_rejects_non_monotone():
    with pytest.raises(NotMonotoneError):
        is_paramonotone_linear([[-1.0, 0.0], [0.0, 1.0]])


def test_guard_rejects_expansive_resolvent():
    with pytest.raises(NotMonotoneError):
        ResolventOperator(dim=1, resolvent_map=lambda x: 2.0 * x, label="bad")


def test_scaled_requires_closed_form():
    A = ResolventOperator(dim=1, resolvent_map=lambda x: 0.5 * x, label="half")
    assert A.scaled(1.0) is A
    with pytest.raises(ContractViolation):
        A.scaled(2.0)
    with pytest.raises(ContractViolation):
        A.scaled(-1.0)


def test_scaled_inverse_matches_linear_formula(points):
    M = np.array([[2.0, 1.0], [1.0, 1.0]])
    A = linear_operator(M)
    scaled = inverse(A).scaled(3.0)
    expected = linear_operator(3.0 * np.linalg.inv(M))
    for x in points(20, 2):
        np.testing.assert_allclose(resolvent(scaled, x), resolvent(expected, x), atol=1e-10)


def test_scaled_ovee_matches_linear_formula(points):
    A = rotator(1)
    for x in points(20, 2):
        np.testing.assert_allclose(resolvent(ovee(A).scaled(2.0), x), resolvent(rotator(1).scaled(2.0), x),
                                   atol=1e-12)


@pytest.fixture(scope="module")
def catalog():
    return zoo_catalog()


@pytest.mark.parametrize("name", list(zoo_catalog()))
def test_inverse_is_an_involution(name, catalog, points):
    A = catalog[name]
    twice = inverse(inverse(A))
    for x in points(100, A.dim):
        np.testing.assert_allclose(resolvent(twice, x), resolvent(A, x), rtol=0, atol=1e-12)


@pytest.mark.parametrize("name", list(zoo_catalog()))
def test_ovee_is_an_involution(name, catalog, points):
    A = catalog[name]
    twice = ovee(ovee(A))
    for x in points(100, A.dim):
        np.testing.assert_allclose(resolvent(twice, x), resolvent(A, x), rtol=0, atol=1e-12)


@pytest.mark.parametrize("name", list(zoo_catalog()))
def test_ovee_and_inverse_commute(name, catalog, points):
    A = catalog[name]
    for x in points(100, A.dim):
        np.testing.assert_allclose(resolvent(ovee(inverse(A)), x), resolvent(inverse(ovee(A)), x),
                                   rtol=0, atol=1e-12)


@pytest.mark.parametrize("name", list(zoo_catalog()))
def test_zoo_resolvents_are_firmly_nonexpansive(name, catalog, rng):
    assert firm_nonexpansiveness_violation(catalog[name], rng, 1000) <= 1e-10


def test_firm_nonexpansiveness_violation_is_absolute(rng, monkeypatch):
    monkeypatch.setattr(config, "VALIDATE_OPERATORS", False)
    doubling = ResolventOperator(dim=1, resolvent_map=lambda x: 2.0 * x, label="doubling")
    # J = 2 Id: the excess is |x - y|^2 itself, far above the 1e-10 guard
    assert firm_nonexpansiveness_violation(doubling, rng, 10) > 1.0
