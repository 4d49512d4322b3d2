"""
Test orthogonality guards and projections onto Z + K
"""
import numpy as np
import pytest

from bestapprox import (
    OrthogonalSumSet,
    orthogonal_sum,
    project_orthogonal_sum,
    project_translate,
    project_ZplusK,
    project_ZplusK_zero_in_K,
    project_ZplusK_zero_in_Z,
    shadow_limit_residual,
    shadow_projection,
    summerland_check,
    validate_orthogonal,
)
from duality import dual_pair
from errors import ContractViolation, MembershipError, NotParamonotoneError, OrthogonalityError
from operator_zoo import INF, box, normal_cone_operator, project, rotator, singleton, whole_space

LINE = box([-INF, 0.0], [INF, 0.0])
HALF_LINE = box([0.0, 0.0], [INF, 0.0])
VERTICAL = box([0.0, -INF], [0.0, INF])


@pytest.fixture
def orthogonal():
    return dual_pair(normal_cone_operator(LINE), normal_cone_operator(HALF_LINE))


@pytest.fixture
def feasibility():
    return dual_pair(normal_cone_operator(box([0.0], [2.0])), normal_cone_operator(box([1.0], [3.0])))


def test_orthogonal_axes(rng):
    assert validate_orthogonal(LINE, VERTICAL, "plain", rng) == 0.0
    assert validate_orthogonal(HALF_LINE, VERTICAL, "diff_diff", rng) == 0.0


def test_square_is_not_orthogonal_to_itself(rng):
    square = box([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(OrthogonalityError):
        validate_orthogonal(square, square, "plain", rng)


def test_orthogonality_variants_differ(rng):
    Z, K = whole_space(2), singleton([1.0, 0.0])
    with pytest.raises(OrthogonalityError):
        validate_orthogonal(Z, K, "diff_plain", rng)
    assert validate_orthogonal(Z, K, "plain_diff", rng) == 0.0


def test_unknown_variant():
    with pytest.raises(ContractViolation):
        validate_orthogonal(LINE, VERTICAL, "sideways")


def test_orthogonal_sum_projection():
    S = orthogonal_sum(LINE, VERTICAL)
    np.testing.assert_allclose(S.project([3.0, 4.0]), [3.0, 4.0])
    np.testing.assert_allclose(project_orthogonal_sum(HALF_LINE, VERTICAL, [-3.0, 4.0]), [0.0, 4.0])


def test_unvalidated_orthogonal_sum_refuses_projection():
    with pytest.raises(OrthogonalityError):
        OrthogonalSumSet(U=LINE, V=VERTICAL).project([1.0, 1.0])


def test_project_translate():
    np.testing.assert_allclose(project_translate(box([0.0], [1.0]), [2.0], [5.0]), [3.0])


def test_project_ZplusK_example(orthogonal):
    result = project_ZplusK(HALF_LINE, VERTICAL, [1.0, 0.0], [0.0, 1.0], [-1.0, 2.0], pair=orthogonal)
    np.testing.assert_allclose(result, [0.0, 2.0])
    # witness independence
    other = project_ZplusK(HALF_LINE, VERTICAL, [3.0, 0.0], [0.0, -5.0], [-1.0, 2.0], pair=orthogonal)
    np.testing.assert_allclose(other, result)
    np.testing.assert_allclose(result, project(box([0.0, -INF], [INF, INF]), [-1.0, 2.0]))


def test_project_ZplusK_rejects_bad_witnesses(orthogonal):
    with pytest.raises(MembershipError):
        project_ZplusK(HALF_LINE, VERTICAL, [-1.0, 0.0], [0.0, 1.0], [0.0, 0.0])
    with pytest.raises(MembershipError):
        project_ZplusK(HALF_LINE, VERTICAL, [1.0, 0.0], [1.0, 1.0], [0.0, 0.0])


def test_project_ZplusK_requires_paramonotone():
    normskew = dual_pair(normal_cone_operator(box([0.0, 0.0], [INF, INF])), rotator(1))
    Z, K = box([0.0, 0.0], [INF, 0.0]), box([0.0, -INF], [0.0, 0.0])
    with pytest.raises(NotParamonotoneError):
        project_ZplusK(Z, K, [1.0, 0.0], [0.0, -1.0], [2.0, 2.0], pair=normskew)


def test_zero_in_K_variant_without_zero_in_K():
    Z, K = singleton([0.0]), box([1.0], [INF])
    for x, expected in [(-2.0, 1.0), (0.5, 1.0), (4.0, 4.0)]:
        np.testing.assert_allclose(project_ZplusK_zero_in_K(Z, K, [0.0], [x]), [expected])


def test_zero_in_Z_variant():
    Z, K = box([1.0], [2.0]), singleton([0.0])
    np.testing.assert_allclose(project_ZplusK_zero_in_Z(Z, K, [0.0], [5.0]), [2.0])


def test_zero_in_K_variant_validates():
    with pytest.raises(OrthogonalityError):
        project_ZplusK_zero_in_K(whole_space(2), singleton([1.0, 0.0]), [0.0, 0.0], [1.0, 1.0])


def test_shadow_projection(orthogonal):
    np.testing.assert_allclose(shadow_projection(orthogonal, HALF_LINE, VERTICAL, [0.0, 0.0], [-1.0, 2.0]),
                               [0.0, 0.0])
    np.testing.assert_allclose(shadow_projection(orthogonal, HALF_LINE, VERTICAL, [0.0, 3.0], [4.0, 2.0]),
                               [4.0, 0.0])


def test_summerland():
    U, V = box([0.0], [2.0]), box([1.0], [3.0])
    first, second = summerland_check(U, V, box([1.0], [2.0]), [5.0])
    np.testing.assert_allclose(first, [2.0])
    np.testing.assert_allclose(second, [2.0])


def test_shadow_limit_residual(feasibility):
    assert shadow_limit_residual(feasibility, box([1.0], [2.0]), [2.0], [[0.0]]) == 0.0
    with pytest.raises(ContractViolation):
        shadow_limit_residual(feasibility, box([1.0], [2.0]), [2.0], [])
