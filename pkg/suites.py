"""Verification suites: each turns a family of duality facts into sampled, reportable checks."""
import enum
import logging
from typing import Callable, Dict, List

import numpy as np

from bestapprox import (
    project_orthogonal_sum,
    project_ZplusK,
    project_ZplusK_zero_in_K,
    project_ZplusK_zero_in_Z,
    shadow_limit_residual,
    shadow_projection,
    summerland_check,
    validate_orthogonal,
)
from config import config
from duality import (
    Membership,
    k_contains,
    kz_contains,
    passty_orthogonality,
    psi,
    psi_inverse,
    recover_Z_from_dual,
    total_duality_check,
    z_contains,
    zk_contains,
)
from errors import OrthogonalityError, UsageError
from fixtures import Fixture, registry
from operator_core import (
    ResolventOperator,
    distance,
    firm_nonexpansiveness_violation,
    inverse,
    is_paramonotone_linear,
    neg_ovee_inverse,
    ovee,
    reflected_resolvent,
    resolvent,
)
from operator_zoo import (
    check_projection,
    composed_LCL,
    moreau_residual,
    project,
    set_contains,
    zoo_catalog,
)
from reports import Check, Report
from splitting import dr_operator, iterate_dr, pr_operator

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-11
BIDUALITY_TOL = 1e-12
INVOLUTION_TOL = 1e-12
FIRM_NONEXPANSIVE_TOL = 1e-10
PSI_TOL = 1e-10
ROUND_TRIP_TOL = 1e-12
CONVEXITY_TOL = 1e-8
PASSTY_TOL = 1e-10
PROJECTION_TOL = 1e-11
TOTAL_DUALITY_TOL = 1e-6
CONVEX_WEIGHTS = (0.25, 0.5, 0.75)

# Hand-derived paramonotonicity of monotone matrices
PARAMONOTONE_MATRICES = [
    ("rotation", [[0.0, -1.0], [1.0, 0.0]], False),
    ("identity", [[1.0, 0.0], [0.0, 1.0]], True),
    ("coordinate_projection", [[1.0, 0.0], [0.0, 0.0]], True),
    ("symmetric_psd", [[2.0, 1.0], [1.0, 1.0]], True),
    ("psd_plus_skew_degenerate", [[1.0, -1.0], [1.0, 0.0]], False),
]


# The result each check reproduces, keyed by check name or name component
REFERENCES: Dict[str, str] = {
    "inverse_resolvent": "inverse resolvent identity J_A + J_(A^-1) = Id",
    "inverse_reflection": "reflected resolvent of the inverse R_(A^-1) = -R_A",
    "ovee_resolvent": "resolvent of the reflection A^v",
    "neg_ovee_inverse_reflection": "reflected resolvent of A^-v",
    "inverse_involution": "inversion is an involution",
    "ovee_involution": "A -> A^v is an involution",
    "ovee_inverse_commute": "A^-v = (A^-1)^v = (A^v)^-1",
    "firmly_nonexpansive": "Minty: resolvents of maximally monotone operators are firmly nonexpansive",
    "dr": "self-duality of the Douglas-Rachford operator",
    "pr": "self-duality of the Peaceman-Rachford operator",
    "paramonotone": "paramonotone matrices and L^T C L compositions",
    "biduality": "Attouch-Thera biduality",
    "kz_zk_equivalence": "k in K_z iff z in Z_k",
    "solution_membership": "primal and dual solution sets Z and K",
    "psi": "Psi: gr K -> Fix T, (z, k) -> z + k",
    "fix": "Psi: gr K -> Fix T, (z, k) -> z + k",
    "shadow": "J_A(Fix T) = Z and (Id - J_A)(Fix T) = K",
    "graph_convexity": "gr K is convex",
    "passty": "Passty orthogonality on gr K",
    "common_zero": "0 in K iff zer A and zer B meet",
    "rectangle": "Fix T = Z + K and gr K = Z x K under paramonotonicity",
    "orthogonality": "Z - Z is orthogonal to K - K under paramonotonicity",
    "recover_Z": "Z = Z_k for every dual solution k under paramonotonicity",
    "projection": "projections onto closed convex sets",
    "ZplusK": "projection onto Fix T = Z + K",
    "orthogonal_sum": "projection onto a sum of orthogonal sets",
    "shadow_projection": "J_A P_(Fix T) = P_Z(Id - k)",
    "summerland": "P_U P_(Fix T) = P_(U cap V) for convex feasibility",
    "abstract_algorithm": "shadow of a Douglas-Rachford limit is P_Z(x - k)",
    "moreau": "Moreau decomposition",
    "weak_duality": "Fenchel weak duality",
    "total_duality": "Fenchel total duality",
    "fenchel": "Fenchel total duality",
}


class Suite(enum.Enum):
    IDENTITIES = "identities"
    DUALITY = "duality"
    PARAMONOTONE = "paramonotone"
    PROJECTIONS = "projections"
    FENCHEL = "fenchel"


def _points(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    return rng.normal(scale=config.SAMPLE_SCALE, size=(n, dim))


def _max(values) -> float:
    values = list(values)
    return max(values) if values else 0.0


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

def _resolvent_identities(prefix: str, A: ResolventOperator, xs: np.ndarray) -> List[Check]:
    A_inv, A_vee, A_nvi = inverse(A), ovee(A), neg_ovee_inverse(A)
    inv_sum = _max(distance(resolvent(A, x) + resolvent(A_inv, x), x) for x in xs)
    refl = _max(distance(reflected_resolvent(A_inv, x), -reflected_resolvent(A, x)) for x in xs)
    vee = _max(distance(resolvent(A_vee, x), -resolvent(A, -x)) for x in xs)
    nvi = _max(distance(reflected_resolvent(A_nvi, x), x + 2.0 * resolvent(A, -x)) for x in xs)
    A_inv_inv, A_vee_vee, A_vee_inv = inverse(A_inv), ovee(A_vee), inverse(A_vee)
    inv_inv = _max(distance(resolvent(A_inv_inv, x), resolvent(A, x)) for x in xs)
    vee_vee = _max(distance(resolvent(A_vee_vee, x), resolvent(A, x)) for x in xs)
    commute = _max(distance(resolvent(A_nvi, x), resolvent(A_vee_inv, x)) for x in xs)
    return [
        Check.numeric(f"{prefix}.inverse_resolvent", "J_A + J_(A^-1) = Id", inv_sum, IDENTITY_TOL),
        Check.numeric(f"{prefix}.inverse_reflection", "R_(A^-1) = -R_A", refl, IDENTITY_TOL),
        Check.numeric(f"{prefix}.ovee_resolvent", "J_(A^v) = -J_A(-Id)", vee, IDENTITY_TOL),
        Check.numeric(f"{prefix}.neg_ovee_inverse_reflection", "R_(A^-v) = Id - 2(-J_A(-Id))", nvi, IDENTITY_TOL),
        Check.numeric(f"{prefix}.inverse_involution", "(A^-1)^-1 = A on resolvents", inv_inv, INVOLUTION_TOL),
        Check.numeric(f"{prefix}.ovee_involution", "(A^v)^v = A on resolvents", vee_vee, INVOLUTION_TOL),
        Check.numeric(f"{prefix}.ovee_inverse_commute", "(A^-1)^v = (A^v)^-1 on resolvents", commute,
                      INVOLUTION_TOL),
    ]


def _firmly_nonexpansive(prefix: str, A: ResolventOperator, rng: np.random.Generator, samples: int) -> Check:
    violation = firm_nonexpansiveness_violation(A, rng, samples)
    return Check.numeric(f"{prefix}.firmly_nonexpansive", "|Jx - Jy|^2 <= <x - y, Jx - Jy>", violation,
                         FIRM_NONEXPANSIVE_TOL)


def identities_suite(fixture: Fixture, report: Report, rng: np.random.Generator, samples: int):
    pair = fixture.pair
    xs = _points(rng, samples, fixture.dim)
    report.checks += _resolvent_identities("A", pair.A, xs)
    report.checks += _resolvent_identities("B", pair.B, xs)
    report.add(_firmly_nonexpansive("A", pair.A, rng, samples))
    report.add(_firmly_nonexpansive("B", pair.B, rng, samples))

    T, T_dual = dr_operator(pair), dr_operator(pair.dual())
    PR, PR_dual = pr_operator(pair), pr_operator(pair.dual())
    report.add(Check.numeric("dr.formula_equivalence", "(Id + R_B R_A)/2 = J_B R_A + Id - J_A",
                             _max(distance(0.5 * (x + PR.apply(x)), T.apply(x)) for x in xs), IDENTITY_TOL))
    report.add(Check.numeric("dr.self_duality", "T_(A,B) = T_(A^-1,B^-v)",
                             _max(distance(T.apply(x), T_dual.apply(x)) for x in xs), IDENTITY_TOL))
    report.add(Check.numeric("pr.self_duality", "R_B R_A = R_(B^-v) R_(A^-1)",
                             _max(distance(PR.apply(x), PR_dual.apply(x)) for x in xs), IDENTITY_TOL))

    catalog = zoo_catalog()
    for name, A in catalog.items():
        zs = _points(rng, samples, A.dim)
        report.checks += _resolvent_identities(f"zoo.{name}", A, zs)
        report.add(_firmly_nonexpansive(f"zoo.{name}", A, rng, samples))

    for name, M, expected in PARAMONOTONE_MATRICES:
        report.add(Check.boolean(f"paramonotone.linear.{name}", "ker(M + M^T) inside ker M",
                                 expected, is_paramonotone_linear(M)))
    for name, C in catalog.items():
        if C.dim == 1 and name.startswith("normal_cone"):
            lcl = composed_LCL(C, [[2.0, 0.0]])
            report.add(Check.boolean(f"paramonotone.lcl.{name}", "L^T C L inherits the flag of C",
                                     C.paramonotone, lcl.paramonotone))
    rot = catalog["rotator_plus"]
    report.add(Check.boolean("paramonotone.lcl.rotator_plus", "L^T C L inherits the flag of C",
                             rot.paramonotone, composed_LCL(rot, [[0.6, 0.8], [-0.8, 0.6]]).paramonotone))


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def duality_suite(fixture: Fixture, report: Report, rng: np.random.Generator, samples: int):
    pair = fixture.pair
    n_pairs = max(2, samples // 5)
    pairs = fixture.sample_pairs(rng, n_pairs)
    xs = _points(rng, samples, fixture.dim)

    bidual = pair.dual().dual()
    report.add(Check.numeric("biduality", "(A, B)** = (A, B) on resolvents", _max(
        max(distance(resolvent(bidual.A, x), resolvent(pair.A, x)),
            distance(resolvent(bidual.B, x), resolvent(pair.B, x))) for x in xs[:100]), BIDUALITY_TOL))

    # Perturbed pairs give both members and non-members
    noise = _points(rng, n_pairs, fixture.dim)
    mismatches = sum(kz_contains(pair, z, k) != zk_contains(pair, k, z) for z, k in pairs)
    mismatches += sum(kz_contains(pair, z, k + e) != zk_contains(pair, k + e, z) for (z, k), e in zip(pairs, noise))
    report.add(Check.numeric("kz_zk_equivalence", "k in K_z iff z in Z_k", mismatches, 0.0))

    members = sum(z_contains(pair, z, candidates=[k]) is Membership.TRUE
                  and k_contains(pair, k, candidates=[z]) is Membership.TRUE for z, k in pairs)
    report.add(Check.numeric("solution_membership", "sampled pairs certify z in Z and k in K",
                             len(pairs) - members, 0.0, expected=len(pairs), actual=members))

    T = dr_operator(pair)
    fixed = [psi(pair, z, k) for z, k in pairs]
    report.add(Check.numeric("psi.fixed_points", "Psi(z, k) = z + k is fixed by T",
                             _max(distance(T.apply(x), x) for x in fixed), PSI_TOL))
    round_trip = []
    for (z, k), x in zip(pairs, fixed):
        z_hat, k_hat = psi_inverse(pair, x)
        round_trip.append(max(distance(z_hat, z), distance(k_hat, k)))
    report.add(Check.numeric("psi.round_trip_pairs", "Psi^-1 Psi = Id on gr K", _max(round_trip), ROUND_TRIP_TOL))

    fix_points = fixture.sample_fixed_points(rng, n_pairs)
    report.add(Check.numeric("fix.residual", "declared Fix T points are fixed",
                             _max(distance(T.apply(x), x) for x in fix_points), PSI_TOL))
    report.add(Check.numeric("psi.round_trip_fixed_points", "Psi Psi^-1 = Id on Fix T",
                             _max(distance(psi(pair, *psi_inverse(pair, x)), x) for x in fix_points), ROUND_TRIP_TOL))
    if fixture.Z is not None:
        report.add(Check.numeric("shadow.Z", "J_A(Fix T) lies in Z", _max(
            distance(project(fixture.Z, resolvent(pair.A, x)), resolvent(pair.A, x)) for x in fix_points), PSI_TOL))
    if fixture.K is not None:
        report.add(Check.numeric("shadow.K", "(Id - J_A)(Fix T) lies in K", _max(
            distance(project(fixture.K, x - resolvent(pair.A, x)), x - resolvent(pair.A, x))
            for x in fix_points), PSI_TOL))

    failures = 0
    for (z1, k1), (z2, k2) in zip(pairs, pairs[1:]):
        for t in CONVEX_WEIGHTS:
            failures += not kz_contains(pair, t * z1 + (1 - t) * z2, t * k1 + (1 - t) * k2, tol=CONVEXITY_TOL)
    report.add(Check.numeric("graph_convexity", "gr K is convex", failures, 0.0))

    report.add(Check.numeric("passty", "<k1 - k2, z1 - z2> = 0 on gr K", _max(
        abs(passty_orthogonality(pair, p, q)) for p, q in zip(pairs, pairs[1:])), PASSTY_TOL))

    if fixture.common_zero is not None:
        candidates = [z for z, _ in pairs] + [np.zeros(fixture.dim)]
        verdict = k_contains(pair, np.zeros(fixture.dim), candidates=candidates, solutions=fixture.solutions)
        report.add(Check.boolean("common_zero", "0 in K iff zer A cap zer B is nonempty",
                                 fixture.common_zero, verdict is Membership.TRUE))

    for expectation in fixture.expectations:
        report.add(expectation.evaluate(fixture))


# ---------------------------------------------------------------------------
# paramonotone
# ---------------------------------------------------------------------------

def paramonotone_suite(fixture: Fixture, report: Report, rng: np.random.Generator, samples: int):
    pair = fixture.pair
    if not pair.paramonotone:
        if fixture.rectangle_counterexample is None:
            raise UsageError(f"Suite paramonotone needs a paramonotone pair; {fixture.name} is not")
        z, k = fixture.rectangle_counterexample
        report.add(Check.boolean("rectangle.counterexample_components", "z in Z and k in K separately",
                                 True, set_contains(fixture.Z, z) and set_contains(fixture.K, k)))
        report.add(Check.boolean("rectangle.counterexample", "Z x K is not gr K without paramonotonicity",
                                 False, kz_contains(pair, z, k), expected_failure=True))
        return

    n_pairs = max(2, min(samples // 5, 60))
    pairs = fixture.sample_pairs(rng, n_pairs)
    zs, ks = [z for z, _ in pairs], [k for _, k in pairs]
    failures = sum(not kz_contains(pair, z, k) for z in zs for k in ks)
    report.add(Check.numeric("rectangle.cross_pairs", "gr K = Z x K", failures, 0.0))

    T = dr_operator(pair)
    report.add(Check.numeric("rectangle.fix_T", "Fix T = Z + K", _max(
        distance(T.apply(z + k), z + k) for z in zs[:20] for k in ks[:20]), PSI_TOL))

    try:
        violation = validate_orthogonal(fixture.Z, fixture.K, "diff_diff", rng) if fixture.Z is not None else 0.0
    except OrthogonalityError:
        violation = np.inf
    report.add(Check.numeric("orthogonality.Z_K", "(Z - Z) is orthogonal to (K - K)", violation, 1e-9))

    if fixture.Z is not None:
        probes = zs[:10] + [z + e for z, e in zip(zs[:10], _points(rng, 10, fixture.dim))]
        recovered = recover_Z_from_dual(pair, ks[0], probes, z_witness=zs[0])
        wrong = sum((any(np.array_equal(p, r) for r in recovered)) != set_contains(fixture.Z, p) for p in probes)
        report.add(Check.numeric("recover_Z", "Z_k = Z for every dual solution k", wrong, 0.0,
                                 expected=len(probes), actual=len(probes) - wrong))


# ---------------------------------------------------------------------------
# projections
# ---------------------------------------------------------------------------

def _try_validate(Z, K, variant, rng) -> bool:
    try:
        validate_orthogonal(Z, K, variant, rng)
        return True
    except OrthogonalityError:
        return False


def projections_suite(fixture: Fixture, report: Report, rng: np.random.Generator, samples: int):
    pair, Z, K = fixture.pair, fixture.Z, fixture.K
    if not pair.paramonotone or Z is None or K is None:
        raise UsageError(f"Suite projections needs a paramonotone fixture with known Z and K; {fixture.name} is not")
    n = max(1, samples // 2)
    xs = _points(rng, n, fixture.dim)
    pairs = fixture.sample_pairs(rng, 5)

    for name, S in (("Z", Z), ("K", K)):
        residuals = check_projection(S, rng, max(1, samples // 10))
        for key, value in residuals.items():
            report.add(Check.numeric(f"projection.{name}.{key}", f"P_{name} is a projection: {key}",
                                     value, 1e-9))

    z0, k0 = pairs[0]
    formula = [project_ZplusK(Z, K, z0, k0, x, pair=pair) for x in xs]
    if fixture.fixT is not None:
        report.add(Check.numeric("ZplusK.direct", "P_(Z+K) formula equals projection onto Fix T", _max(
            distance(p, project(fixture.fixT, x)) for p, x in zip(formula, xs)), PROJECTION_TOL))
    report.add(Check.numeric("ZplusK.witness_independent", "P_(Z+K) formula does not depend on (z0, k0)", _max(
        distance(project_ZplusK(Z, K, z, k, x, pair=pair), p)
        for z, k in pairs[1:] for x, p in zip(xs[:50], formula)), PROJECTION_TOL))
    if _try_validate(Z, K, "diff_plain", rng):
        report.add(Check.numeric("ZplusK.zero_in_K", "P_(Z+K) x = P_Z x + P_K(x - z0)", _max(
            distance(project_ZplusK_zero_in_K(Z, K, z0, x, validate=False), p) for x, p in zip(xs, formula)),
            PROJECTION_TOL))
    if _try_validate(Z, K, "plain_diff", rng):
        report.add(Check.numeric("ZplusK.zero_in_Z", "P_(Z+K) x = P_Z(x - k0) + P_K x", _max(
            distance(project_ZplusK_zero_in_Z(Z, K, k0, x, validate=False), p) for x, p in zip(xs, formula)),
            PROJECTION_TOL))
    if _try_validate(Z, K, "plain", rng):
        report.add(Check.numeric("orthogonal_sum", "P_(Z+K) = P_Z + P_K for orthogonal Z and K", _max(
            distance(project_orthogonal_sum(Z, K, x, validate=False), p) for x, p in zip(xs, formula)),
            PROJECTION_TOL))

    shadows = []
    for _, k in pairs:
        for x in xs[:50]:
            shadows.append(distance(shadow_projection(pair, Z, K, k, x, tol=1e-9), project(Z, x - k)))
    report.add(Check.numeric("shadow_projection", "J_A P_(Z+K) x = P_Z(x - k0) for every k0 in K",
                             _max(shadows), PROJECTION_TOL))

    if fixture.feasibility_sets is not None and fixture.fixT is not None:
        U, V, meet = fixture.feasibility_sets
        gaps = [distance(*summerland_check(U, V, fixture.fixT, x, intersection=meet)) for x in xs]
        report.add(Check.numeric("summerland", "P_U P_(Fix T) = P_(U cap V)", _max(gaps), PROJECTION_TOL))

    T = dr_operator(pair)
    x0 = fixture.default_x0 if fixture.default_x0 is not None else xs[0]
    trace = iterate_dr(T, x0, tol=1e-12, max_iter=10_000)
    report.traces.append(trace.summary())
    residual = shadow_limit_residual(pair, Z, trace.limit, [k for _, k in pairs]) if trace.converged else np.inf
    report.add(Check.numeric("abstract_algorithm", "J_A x = P_Z(x - k) at a DR limit x", residual, 1e-8))


# ---------------------------------------------------------------------------
# fenchel
# ---------------------------------------------------------------------------

def fenchel_suite(fixture: Fixture, report: Report, rng: np.random.Generator, samples: int):
    if fixture.functions is None or fixture.fenchel_box is None:
        raise UsageError(f"Suite fenchel needs a fixture built from functions; {fixture.name} is not")
    f, g = fixture.functions
    xs = _points(rng, max(1, samples // 10), fixture.dim)
    report.add(Check.numeric("moreau.f", "prox_f + prox_f* = Id", _max(moreau_residual(f, x) for x in xs), 1e-12))
    report.add(Check.numeric("moreau.g", "prox_g + prox_g* = Id", _max(moreau_residual(g, x) for x in xs), 1e-12))

    result = total_duality_check(f, g, box=fixture.fenchel_box, spacing=fixture.grid_spacing, tol=TOTAL_DUALITY_TOL)
    report.add(Check.boolean("weak_duality", "mu >= -mu*", True, result.weak_duality))
    report.add(Check.numeric("total_duality", "mu + mu* = 0 when Z is nonempty", result.gap, TOTAL_DUALITY_TOL,
                             expected=0.0, actual=[result.mu, result.mu_star]))
    report.add(Check.boolean("fenchel.witnesses", "grid minimizers form a solution pair", True,
                             result.witnesses_consistent))
    if fixture.Z is not None:
        report.add(Check.numeric("fenchel.primal_in_Z", "primal minimizer lies in Z",
                                 distance(project(fixture.Z, result.primal_solution), result.primal_solution),
                                 fixture.grid_spacing))
    if fixture.K is not None:
        report.add(Check.numeric("fenchel.dual_in_K", "dual minimizer lies in K",
                                 distance(project(fixture.K, result.dual_solution), result.dual_solution),
                                 fixture.grid_spacing))


SUITES: Dict[Suite, Callable] = {
    Suite.IDENTITIES: identities_suite,
    Suite.DUALITY: duality_suite,
    Suite.PARAMONOTONE: paramonotone_suite,
    Suite.PROJECTIONS: projections_suite,
    Suite.FENCHEL: fenchel_suite,
}


def parse_suite(name: str) -> Suite:
    try:
        return Suite(name)
    except ValueError:
        raise UsageError(f"Unknown suite {name!r}; choose from {', '.join(s.value for s in Suite)}")


def run_suite(fixture: str, suite: str, samples: int = config.DEFAULT_SAMPLES,
              seed: int = config.DEFAULT_SEED) -> Report:
    """Run one suite on one fixture; deterministic for a given seed."""
    if samples < 1:
        raise UsageError(f"samples must be positive, got {samples}")
    kind = parse_suite(suite)
    fx = registry.get(fixture)
    rng = np.random.Generator(np.random.PCG64(seed))
    report = Report(fixture=fx.name, suite=kind.value, seed=seed, notes=fx.notes)
    logger.info(f"Running suite {kind.value} on {fx.name} ({samples} samples, seed {seed})")
    SUITES[kind](fx, report, rng, samples)
    report.attach_references(REFERENCES, fx.reference or f"fixture {fx.name}")
    logger.info(f"Suite {kind.value} on {fx.name}: {len(report.checks) - len(report.failures)}/"
                f"{len(report.checks)} checks passed")
    return report
