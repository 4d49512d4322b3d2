"""Projection calculus on solution sets: orthogonal sums, translations and P_{Z+K}."""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from config import config
from duality import DualPair, kz_contains
from errors import ContractViolation, MembershipError, NotParamonotoneError, OrthogonalityError
from operator_core import as_point, distance, resolvent
from operator_zoo import ConvexSet, intersect_boxes, project, set_contains

logger = logging.getLogger(__name__)

ORTHOGONALITY_SAMPLES = 50
ORTHOGONALITY_TOL = 1e-9

# Which differences are paired in the orthogonality test
VARIANTS = ("plain", "diff_diff", "diff_plain", "plain_diff")


def _default_rng() -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(config.DEFAULT_SEED))


def validate_orthogonal(U: ConvexSet, V: ConvexSet, variant: str = "plain",
                        rng: Optional[np.random.Generator] = None, samples: int = ORTHOGONALITY_SAMPLES,
                        tol: float = ORTHOGONALITY_TOL, scale: float = config.SAMPLE_SCALE) -> float:
    """Sampled check that U and V (or their difference sets) are orthogonal.

    A guard, not a proof. Returns the largest relative violation; raises
    OrthogonalityError when it exceeds tol.
    """
    if variant not in VARIANTS:
        raise ContractViolation(f"Unknown orthogonality variant {variant!r}")
    if U.dim != V.dim:
        raise ContractViolation(f"Dimension mismatch: {U.label} has {U.dim}, {V.label} has {V.dim}")
    rng = rng or _default_rng()

    def draw(S: ConvexSet) -> np.ndarray:
        return project(S, rng.normal(scale=scale, size=S.dim))

    worst = 0.0
    for _ in range(samples):
        u1, u2, v1, v2 = draw(U), draw(U), draw(V), draw(V)
        left = u1 - u2 if variant in ("diff_diff", "diff_plain") else u1
        right = v1 - v2 if variant in ("diff_diff", "plain_diff") else v1
        size = max(1.0, float(np.linalg.norm(left) * np.linalg.norm(right)))
        worst = max(worst, abs(float(left @ right)) / size)
    if worst > tol:
        raise OrthogonalityError(f"{U.label} and {V.label} are not orthogonal ({variant}): violation {worst:.3e}")
    return worst


@dataclass(frozen=True)
class OrthogonalSumSet:
    """U + V for orthogonal U and V, projected by P_U + P_V."""

    U: ConvexSet
    V: ConvexSet
    validated_orthogonal: bool = False

    def project(self, x) -> np.ndarray:
        if not self.validated_orthogonal:
            raise OrthogonalityError(f"{self.U.label} + {self.V.label} has not been validated as orthogonal")
        return project(self.U, x) + project(self.V, x)


def orthogonal_sum(U: ConvexSet, V: ConvexSet, rng: Optional[np.random.Generator] = None) -> OrthogonalSumSet:
    validate_orthogonal(U, V, "plain", rng)
    return OrthogonalSumSet(U=U, V=V, validated_orthogonal=True)


def project_orthogonal_sum(U: ConvexSet, V: ConvexSet, x, validate: bool = True) -> np.ndarray:
    """P_{U+V} x = P_U x + P_V x for U orthogonal to V."""
    if validate:
        validate_orthogonal(U, V, "plain")
    return project(U, x) + project(V, x)


def project_translate(S: ConvexSet, y, x) -> np.ndarray:
    """P_{y+S} x = y + P_S(x - y)."""
    y = as_point(y, S.dim)
    x = as_point(x, S.dim)
    return y + project(S, x - y)


def project_ZplusK(Z: ConvexSet, K: ConvexSet, z0, k0, x, pair: Optional[DualPair] = None,
                   tol: float = config.MEMBERSHIP_TOL) -> np.ndarray:
    """P_{Z+K} x = P_Z(x - k0) + P_K(x - z0) for a paramonotone pair with z0 in Z and k0 in K."""
    z0, k0 = as_point(z0, Z.dim), as_point(k0, K.dim)
    if not set_contains(Z, z0, tol):
        raise MembershipError(f"z0={z0} is not in {Z.label}")
    if not set_contains(K, k0, tol):
        raise MembershipError(f"k0={k0} is not in {K.label}")
    if pair is not None:
        if not pair.paramonotone:
            raise NotParamonotoneError("P_{Z+K} formulas need a paramonotone pair")
        if not kz_contains(pair, z0, k0, tol):
            raise MembershipError(f"({z0}, {k0}) is not a solution pair")
    x = as_point(x, Z.dim)
    return project(Z, x - k0) + project(K, x - z0)


def project_ZplusK_zero_in_K(Z: ConvexSet, K: ConvexSet, z0, x, validate: bool = True) -> np.ndarray:
    """P_{Z+K} x = P_Z x + P_K(x - z0) when (Z - Z) is orthogonal to K."""
    if validate:
        validate_orthogonal(Z, K, "diff_plain")
    z0 = as_point(z0, Z.dim)
    x = as_point(x, Z.dim)
    return project(Z, x) + project(K, x - z0)


def project_ZplusK_zero_in_Z(Z: ConvexSet, K: ConvexSet, k0, x, validate: bool = True) -> np.ndarray:
    """P_{Z+K} x = P_Z(x - k0) + P_K x when Z is orthogonal to (K - K)."""
    if validate:
        validate_orthogonal(Z, K, "plain_diff")
    k0 = as_point(k0, K.dim)
    x = as_point(x, K.dim)
    return project(Z, x - k0) + project(K, x)


def shadow_projection(pair: DualPair, Z: ConvexSet, K: ConvexSet, k0, x,
                      tol: float = config.MEMBERSHIP_TOL) -> np.ndarray:
    """J_A P_{Z+K} x, which must coincide with P_Z(x - k0)."""
    if not pair.paramonotone:
        raise NotParamonotoneError("The shadow projection identity needs a paramonotone pair")
    x = as_point(x, pair.dim)
    z0 = project(Z, x)
    shadow = resolvent(pair.A, project_ZplusK(Z, K, z0, k0, x, pair=pair, tol=tol))
    expected = project(Z, x - as_point(k0, pair.dim))
    gap = distance(shadow, expected)
    if gap > tol * max(1.0, float(np.linalg.norm(x))):
        raise ContractViolation(f"J_A P_(Z+K) x differs from P_Z(x - k0) by {gap:.3e}")
    return shadow


def summerland_check(U: ConvexSet, V: ConvexSet, fixT: ConvexSet, x,
                     intersection: Optional[ConvexSet] = None) -> Tuple[np.ndarray, np.ndarray]:
    """(P_U P_{Fix T} x, P_{U cap V} x) for the feasibility pair (N_U, N_V)."""
    if intersection is None:
        intersection = intersect_boxes(U, V)
    x = as_point(x, U.dim)
    return project(U, project(fixT, x)), project(intersection, x)


def shadow_limit_residual(pair: DualPair, Z: ConvexSet, x, ks: Sequence) -> float:
    """max over k of |J_A x - P_Z(x - k)| for a limit x in Fix T."""
    x = as_point(x, pair.dim)
    shadow = resolvent(pair.A, x)
    if len(ks) == 0:
        raise ContractViolation("Need at least one dual solution k")
    return max(distance(shadow, project(Z, x - as_point(k, pair.dim))) for k in ks)
