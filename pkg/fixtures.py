"""Registry of worked operator-pair fixtures with ground-truth solution sets."""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from bestapprox import (
    project_ZplusK,
    project_ZplusK_zero_in_K,
    shadow_projection,
    summerland_check,
    validate_orthogonal,
)
from config import config
from duality import (
    DualPair,
    Membership,
    SolutionDescription,
    dual_pair,
    k_contains,
    kz_contains,
    passty_orthogonality,
    psi_inverse,
    recover_Z_from_dual,
    z_contains,
)
from errors import ContractViolation, FixtureError, OrthogonalityError
from operator_core import as_point, distance, resolvent
from operator_zoo import (
    INF,
    ConvexSet,
    ProxFunction,
    box,
    build_operator,
    build_set,
    composed_LCL,
    constant_operator,
    halfspace,
    interval_indicator,
    normal_cone_operator,
    piecewise_linear,
    project,
    prox_operator,
    ray,
    rotator,
    separable,
    singleton,
    skew_plus_normal_cone_WW,
    whole_space,
)
from reports import Check
from splitting import dr_operator, fixed_point_residual

logger = logging.getLogger(__name__)

SolutionPair = Tuple[np.ndarray, np.ndarray]
Sampler = Callable[[np.random.Generator, int], List[SolutionPair]]

# Self-validation run when a fixture is first built
VALIDATION_SAMPLES = 16
VALIDATION_SEED = 0
FIXED_POINT_TOL = 1e-10


@dataclass
class Expectation:
    """A fixture-specific check, evaluated against the fixture."""

    name: str
    evaluate: Callable[["Fixture"], Check]


@dataclass
class Fixture:
    name: str
    pair: DualPair
    solutions: SolutionDescription
    fixT: Optional[ConvexSet] = None
    sampler: Optional[Sampler] = field(default=None, repr=False)
    expectations: List[Expectation] = field(default_factory=list, repr=False)
    notes: str = ""
    reference: str = ""
    common_zero: Optional[bool] = None
    rectangle_counterexample: Optional[SolutionPair] = None
    functions: Optional[Tuple[ProxFunction, ProxFunction]] = field(default=None, repr=False)
    fenchel_box: Optional[Tuple[List[float], List[float]]] = None
    grid_spacing: float = config.GRID_SPACING
    feasibility_sets: Optional[Tuple[ConvexSet, ConvexSet, ConvexSet]] = field(default=None, repr=False)
    default_x0: Optional[List[float]] = None

    @property
    def dim(self) -> int:
        return self.pair.dim

    @property
    def paramonotone(self) -> bool:
        return self.pair.paramonotone

    @property
    def Z(self) -> Optional[ConvexSet]:
        return self.solutions.Z_set

    @property
    def K(self) -> Optional[ConvexSet]:
        return self.solutions.K_set

    def sample_pairs(self, rng: np.random.Generator, n: int, scale: float = config.SAMPLE_SCALE) -> List[SolutionPair]:
        """Solution pairs (z, k) in the graph of K."""
        if self.sampler is not None:
            return self.sampler(rng, n)
        if self.paramonotone and self.Z is not None and self.K is not None:
            # Paramonotone pairs: every (z, k) in Z x K is a solution pair
            return [(project(self.Z, rng.normal(scale=scale, size=self.dim)),
                     project(self.K, rng.normal(scale=scale, size=self.dim))) for _ in range(n)]
        pairs = list(zip(self.solutions.sample_z, self.solutions.sample_k))
        if not pairs:
            raise FixtureError(f"Fixture {self.name} cannot sample solution pairs")
        return [pairs[i % len(pairs)] for i in range(n)]

    def sample_fixed_points(self, rng: np.random.Generator, n: int,
                            scale: float = config.SAMPLE_SCALE) -> List[np.ndarray]:
        if self.fixT is not None:
            return [project(self.fixT, rng.normal(scale=scale, size=self.dim)) for _ in range(n)]
        return [z + k for z, k in self.sample_pairs(rng, n)]

    def validate(self, samples: int = VALIDATION_SAMPLES):
        """Sampled solution pairs pass K_z membership and Fix T points are fixed."""
        rng = np.random.Generator(np.random.PCG64(VALIDATION_SEED))
        for z, k in self.sample_pairs(rng, samples):
            if not kz_contains(self.pair, z, k):
                raise FixtureError(f"Fixture {self.name}: sample ({z}, {k}) is not a solution pair")
        if self.fixT is not None:
            T = dr_operator(self.pair)
            for x in self.sample_fixed_points(rng, samples):
                residual = fixed_point_residual(T, x)
                if residual > FIXED_POINT_TOL:
                    raise FixtureError(f"Fixture {self.name}: Fix T point {x} has residual {residual:.3e}")
        logger.debug(f"Fixture {self.name} validated")

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.dim,
            "A": self.pair.A.label,
            "B": self.pair.B.label,
            "paramonotone": self.paramonotone,
            "Z": self.Z.label if self.Z is not None else None,
            "K": self.K.label if self.K is not None else None,
            "fixT": self.fixT.label if self.fixT is not None else None,
            "notes": self.notes,
            "reference": self.reference,
        }


# ---------------------------------------------------------------------------
# Expectation helpers
# ---------------------------------------------------------------------------

def expect_kz(name: str, z, k, expected: bool) -> Expectation:
    return Expectation(name, lambda f: Check.boolean(
        name, "k in K_z = Az cap -Bz", expected, kz_contains(f.pair, z, k)))


def expect_fixed(name: str, points: List, tol: float = 1e-12) -> Expectation:
    def evaluate(f: Fixture) -> Check:
        T = dr_operator(f.pair)
        return Check.numeric(name, "points are fixed by the DR operator",
                             max(fixed_point_residual(T, x) for x in points), tol)

    return Expectation(name, evaluate)


def expect_psi_inverse(name: str, x, z, k, tol: float = 1e-12) -> Expectation:
    def evaluate(f: Fixture) -> Check:
        z_hat, k_hat = psi_inverse(f.pair, x)
        return Check.numeric(name, "Psi^-1 x = (J_A x, x - J_A x)",
                             max(distance(z_hat, z), distance(k_hat, k)), tol,
                             expected=[list(z), list(k)], actual=[z_hat, k_hat])

    return Expectation(name, evaluate)


def expect_value(name: str, prop: str, compute: Callable[[Fixture], Any], expected, tol: float = 1e-12) -> Expectation:
    def evaluate(f: Fixture) -> Check:
        actual = np.asarray(compute(f), dtype=float)
        return Check.numeric(name, prop, float(np.max(np.abs(actual - np.asarray(expected, dtype=float)))),
                             tol, expected=expected, actual=actual)

    return Expectation(name, evaluate)


def expect_true(name: str, prop: str, predicate: Callable[[Fixture], bool], expected: bool = True) -> Expectation:
    return Expectation(name, lambda f: Check.boolean(name, prop, expected, predicate(f)))


def _raises_orthogonality(U: ConvexSet, V: ConvexSet, variant: str) -> bool:
    try:
        validate_orthogonal(U, V, variant)
    except OrthogonalityError:
        return True
    return False


def _T_at(f: Fixture, x) -> np.ndarray:
    return dr_operator(f.pair).apply(as_point(x, f.dim))


# ---------------------------------------------------------------------------
# Built-in fixtures
# ---------------------------------------------------------------------------

def _skewskew() -> Fixture:
    pair = dual_pair(rotator(-1), rotator(1))

    def sampler(rng, n):
        zs = rng.normal(scale=config.SAMPLE_SCALE, size=(n, 2))
        return [(z, np.array([z[1], -z[0]])) for z in zs]

    return Fixture(
        name="skewskew",
        pair=pair,
        solutions=SolutionDescription(Z_set=whole_space(2), K_set=whole_space(2)),
        fixT=whole_space(2),
        sampler=sampler,
        notes="Opposite quarter rotations: A + B = 0, Z = K = R^2, T = Id and the dual pair is (B, A)",
        reference="skew-skew example: rotators by -pi/2 and +pi/2",
        common_zero=True,
        rectangle_counterexample=(np.array([1.0, 0.0]), np.array([0.0, 0.0])),
        default_x0=[1.0, 0.0],
        expectations=[
            expect_fixed("T_is_identity", [[1.0, 0.0], [-3.0, 2.0], [5.0, 5.0], [0.0, 0.0]]),
            expect_value("dual_pair_swaps", "(A, B)* = (B, A) on resolvents",
                         lambda f: [resolvent(f.pair.dual_A, [1.0, 2.0]) - resolvent(f.pair.B, [1.0, 2.0]),
                                    resolvent(f.pair.dual_B, [1.0, 2.0]) - resolvent(f.pair.A, [1.0, 2.0])],
                         [[0.0, 0.0], [0.0, 0.0]]),
            expect_value("passty_example", "<k1 - k2, z1 - z2> = 0",
                         lambda f: passty_orthogonality(f.pair, ([1.0, 0.0], [0.0, -1.0]), ([0.0, 1.0], [1.0, 0.0])),
                         0.0),
            expect_psi_inverse("psi_inverse_example", [1.0, -1.0], [1.0, 0.0], [0.0, -1.0]),
        ],
    )


def _normskew() -> Fixture:
    quadrant = box([0.0, 0.0], [INF, INF], label="R2+")
    pair = dual_pair(normal_cone_operator(quadrant), rotator(1))

    def sampler(rng, n):
        ts = np.abs(rng.normal(scale=config.SAMPLE_SCALE, size=n))
        return [(np.array([t, 0.0]), np.array([0.0, -t])) for t in ts]

    ts = [0.0, 0.5, 1.0, 2.0, 10.0]
    return Fixture(
        name="normskew",
        pair=pair,
        solutions=SolutionDescription(Z_set=box([0.0, 0.0], [INF, 0.0], label="R+x{0}"),
                                      K_set=box([0.0, -INF], [0.0, 0.0], label="{0}xR-")),
        fixT=ray([1.0, -1.0], label="{(t,-t): t>=0}"),
        sampler=sampler,
        notes="Normal cone of the quadrant plus a rotation: K_z = {(0, -z_1)}, Z x K is not a rectangle",
        reference="normal cone plus skew example; rectangle counterexample without paramonotonicity",
        common_zero=True,
        rectangle_counterexample=(np.array([1.0, 0.0]), np.array([0.0, -2.0])),
        default_x0=[3.0, -3.0],
        expectations=[
            expect_fixed("T_fixes_ray", [[t, -t] for t in ts]),
            expect_value("T_example", "T(1,-1) = (1,-1)", lambda f: _T_at(f, [1.0, -1.0]), [1.0, -1.0]),
            *[expect_psi_inverse(f"psi_inverse_t{t:g}", [t, -t], [t, 0.0], [0.0, -t]) for t in ts],
            expect_kz("kz_member", [2.0, 0.0], [0.0, -2.0], True),
            expect_kz("kz_wrong_sign", [2.0, 0.0], [0.0, 2.0], False),
            expect_kz("rectangle_cross_pair", [1.0, 0.0], [0.0, -2.0], False),
        ],
    )


def _feasibility_1d() -> Fixture:
    U, V = box([0.0], [2.0], label="[0,2]"), box([1.0], [3.0], label="[1,3]")
    pair = dual_pair(normal_cone_operator(U), normal_cone_operator(V))
    Z = box([1.0], [2.0], label="[1,2]")
    return Fixture(
        name="feasibility-1d",
        pair=pair,
        solutions=SolutionDescription(Z_set=Z, K_set=singleton([0.0], label="{0}"),
                                      sample_z=[np.array([1.5])], sample_k=[np.array([0.0])]),
        fixT=Z,
        notes="Convex feasibility U = [0,2], V = [1,3]: Z = U cap V, K = {0}",
        reference="convex feasibility example A = N_U, B = N_V",
        common_zero=True,
        functions=(interval_indicator(0.0, 2.0), interval_indicator(1.0, 3.0)),
        fenchel_box=([-3.0], [3.0]),
        feasibility_sets=(U, V, Z),
        default_x0=[5.0],
        expectations=[
            expect_value("T_at_5", "T(5) = 5 - P_U 5 + P_V(2 P_U 5 - 5)", lambda f: _T_at(f, [5.0]), [4.0]),
            expect_value("dual_A_resolvent", "J_(A^-1) x = x - P_U x",
                         lambda f: resolvent(f.pair.dual_A, [5.0]), [3.0]),
            expect_true("z_member_with_witness", "0 in N_U(1.5) cap -N_V(1.5)",
                        lambda f: z_contains(f.pair, [1.5], candidates=[[0.0]]) is Membership.TRUE),
            expect_true("z_outside_V", "0.5 is not in V",
                        lambda f: z_contains(f.pair, [0.5], candidates=[[0.0], [1.0], [-1.0]]) is Membership.FALSE),
            expect_true("z_without_witness", "membership is undecidable without witness or ground truth",
                        lambda f: z_contains(f.pair, [1.5]) is Membership.UNDECIDABLE),
            expect_psi_inverse("psi_inverse_2", [2.0], [2.0], [0.0]),
            expect_value("recover_Z", "paramonotone: Z_k0 = Z",
                         lambda f: [float(z[0]) for z in recover_Z_from_dual(
                             f.pair, [0.0], [[p] for p in (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)])],
                         [1.0, 1.5, 2.0]),
            expect_value("project_ZplusK_example", "P_(Z+K) x = P_Z(x - k0) + P_K(x - z0)",
                         lambda f: project_ZplusK(f.Z, f.K, [1.5], [0.0], [5.0], pair=f.pair), [2.0]),
            expect_value("summerland_example", "P_U P_(Fix T) x = P_(U cap V) x",
                         lambda f: summerland_check(*f.feasibility_sets[:2], f.fixT, [5.0]), [[2.0], [2.0]]),
        ],
    )


def _ww_nested() -> Fixture:
    line = box([-INF, 0.0], [INF, 0.0], label="Rx{0}")
    pair = dual_pair(skew_plus_normal_cone_WW(), normal_cone_operator(line))

    def sampler(rng, n):
        out = []
        for xi, e in rng.normal(scale=config.SAMPLE_SCALE, size=(n, 2)):
            out.append((np.array([xi, 0.0]), np.array([0.0, xi - abs(e)])))
        return out

    return Fixture(
        name="ww-nested",
        pair=pair,
        solutions=SolutionDescription(Z_set=line, K_set=box([0.0, -INF], [0.0, INF], label="{0}xR")),
        fixT=halfspace([-1.0, 1.0], 0.0, label="{x2 <= x1}"),
        sampler=sampler,
        notes="N_U + rotation against N_(R x {0}): K_(xi,0) = {0} x (-inf, xi] grows with xi",
        reference="nested-W example A = N_U + R",
        common_zero=True,
        default_x0=[1.0, 3.0],
        expectations=[
            expect_kz("K_nested_member", [2.0, 0.0], [0.0, 0.5], True),
            expect_kz("K_nested_strict", [1.0, 0.0], [0.0, 1.5], False),
            expect_value("passty_example", "<k1 - k2, z1 - z2> = 0",
                         lambda f: passty_orthogonality(f.pair, ([1.0, 0.0], [0.0, 0.5]), ([2.0, 0.0], [0.0, 1.0])),
                         0.0),
            expect_true("not_paramonotone", "N_U + rotation is not paramonotone",
                        lambda f: f.pair.A.paramonotone, expected=False),
        ],
    )


def _orthogonal_2d() -> Fixture:
    line = box([-INF, 0.0], [INF, 0.0], label="Rx{0}")
    half_line = box([0.0, 0.0], [INF, 0.0], label="R+x{0}")
    pair = dual_pair(normal_cone_operator(line), normal_cone_operator(half_line))
    K = box([0.0, -INF], [0.0, INF], label="{0}xR")
    f = separable([piecewise_linear([], [0.0], label="0"), interval_indicator(0.0, 0.0)], label="i_line")
    g = separable([interval_indicator(0.0, INF), interval_indicator(0.0, 0.0)], label="i_halfline")
    y = [-1.0, 2.0]
    return Fixture(
        name="orthogonal-2d",
        pair=pair,
        solutions=SolutionDescription(Z_set=half_line, K_set=K),
        fixT=box([0.0, -INF], [INF, INF], label="R+xR"),
        notes="Normal cones of R x {0} and R+ x {0}: Z = R+ x {0}, K = {0} x R, Fix T = R+ x R",
        reference="orthogonal normal cones example",
        common_zero=True,
        functions=(f, g),
        fenchel_box=([-1.0, -1.0], [1.0, 1.0]),
        grid_spacing=1e-2,
        feasibility_sets=(line, half_line, half_line),
        default_x0=y,
        expectations=[
            expect_value("project_ZplusK_example", "P_(Z+K) x = P_Z(x - k0) + P_K(x - z0)",
                         lambda fx: project_ZplusK(fx.Z, fx.K, [1.0, 0.0], [0.0, 1.0], y, pair=fx.pair), [0.0, 2.0]),
            expect_value("project_ZplusK_zero_in_K_example", "P_(Z+K) x = P_Z x + P_K(x - z0)",
                         lambda fx: project_ZplusK_zero_in_K(fx.Z, fx.K, [1.0, 0.0], y), [0.0, 2.0]),
            expect_value("shadow_projection_example", "J_A P_(Z+K) x = P_Z x",
                         lambda fx: shadow_projection(fx.pair, fx.Z, fx.K, [0.0, 0.0], y), [0.0, 0.0]),
            expect_value("summerland_example", "P_U P_(Fix T) x = P_(U cap V) x",
                         lambda fx: summerland_check(*fx.feasibility_sets[:2], fx.fixT, y,
                                                     intersection=fx.feasibility_sets[2]),
                         [[0.0, 0.0], [0.0, 0.0]]),
            expect_value("recover_Z", "paramonotone: Z_k0 = Z",
                         lambda fx: [z[0] for z in recover_Z_from_dual(
                             fx.pair, [0.0, 1.0], [[t, 0.0] for t in (-2.0, -1.0, 0.0, 1.0, 2.0)])],
                         [0.0, 1.0, 2.0]),
        ],
    )


def _hinge() -> Fixture:
    f = piecewise_linear([1.0], [0.0, 1.0], label="max(0,x-1)")
    g = piecewise_linear([-1.0], [-1.0, 0.0], label="max(0,-x-1)")
    Z = box([-1.0], [1.0], label="[-1,1]")
    return Fixture(
        name="hinge",
        pair=dual_pair(prox_operator(f), prox_operator(g)),
        solutions=SolutionDescription(Z_set=Z, K_set=singleton([0.0], label="{0}")),
        fixT=Z,
        notes="Subdifferentials of two hinges: Z = [-1,1], K = {0}, mu = mu* = 0",
        reference="Fenchel duality for subdifferentials of hinges",
        common_zero=True,
        functions=(f, g),
        fenchel_box=([-3.0], [3.0]),
        default_x0=[3.0],
        expectations=[
            expect_value("recover_Z", "paramonotone: Z_k0 = Z",
                         lambda fx: [float(z[0]) for z in recover_Z_from_dual(
                             fx.pair, [0.0], [[p] for p in (-2.0, -1.0, 0.0, 1.0, 2.0)], z_witness=[0.0])],
                         [-1.0, 0.0, 1.0]),
            expect_kz("kz_at_kink", [1.0], [0.0], True),
            expect_kz("kz_outside", [2.0], [0.0], False),
        ],
    )


def _constant_pair() -> Fixture:
    u = np.array([1.0, 0.0])
    return Fixture(
        name="constant-pair",
        pair=dual_pair(constant_operator(u), constant_operator(-u)),
        solutions=SolutionDescription(Z_set=whole_space(2), K_set=singleton(u, label="{u}")),
        fixT=whole_space(2),
        notes="Constant operators A = u, B = -u: Z = R^2, K = {u}; K is not orthogonal to Z - Z",
        reference="constant operator example",
        common_zero=False,
        default_x0=[2.0, -1.0],
        expectations=[
            expect_fixed("T_is_identity", [[1.0, 0.0], [-3.0, 2.0], [0.0, 0.0]]),
            expect_true("K_not_orthogonal_to_Z_minus_Z", "(Z - Z) is not orthogonal to K",
                        lambda f: _raises_orthogonality(f.Z, f.K, "diff_plain")),
            expect_true("no_common_zero", "0 is not a dual solution",
                        lambda f: k_contains(f.pair, [0.0, 0.0], solutions=f.solutions) is Membership.FALSE),
        ],
    )


def _lcl_composed() -> Fixture:
    C = normal_cone_operator(box([0.0], [INF], label="R+"))
    B = composed_LCL(C, [[2.0, 0.0]])
    line = box([-INF, 0.0], [INF, 0.0], label="Rx{0}")
    Z = box([0.0, 0.0], [INF, 0.0], label="R+x{0}")
    return Fixture(
        name="lcl-composed",
        pair=dual_pair(normal_cone_operator(line), B),
        solutions=SolutionDescription(Z_set=Z, K_set=singleton([0.0, 0.0], label="{0}")),
        fixT=Z,
        notes="B = L^T N_(R+) L with L = [2, 0], L L^T = 4: Z = R+ x {0}, K = {0}",
        reference="paramonotone composition L^T C L",
        common_zero=True,
        default_x0=[-1.0, 3.0],
        expectations=[
            expect_true("paramonotone_propagates", "L^T C L is paramonotone when C is",
                        lambda f: f.pair.B.paramonotone == C.paramonotone),
            expect_value("B_resolvent", "J_B x = x + L^T (P(Lx) - Lx) / 4",
                         lambda f: resolvent(f.pair.B, [-1.0, 3.0]), [0.0, 3.0]),
            expect_fixed("T_fixes_Z", [[0.0, 0.0], [3.0, 0.0]]),
        ],
    )


def _inconsistent_origin() -> Fixture:
    U = box([1.0], [INF], label="[1,inf)")
    primal = dual_pair(normal_cone_operator(U), normal_cone_operator(U))
    pair = primal.dual()
    Z, K = singleton([0.0], label="{0}"), U
    return Fixture(
        name="inconsistent-origin",
        pair=pair,
        solutions=SolutionDescription(Z_set=Z, K_set=K),
        fixT=U,
        notes="Dual of (N_U, N_U) for U = [1, inf): Z = {0}, K = U; (Z - Z) is orthogonal to K although 0 is not in K",
        reference="inconsistent feasibility dual example",
        common_zero=False,
        default_x0=[-2.0],
        expectations=[
            expect_true("Z_minus_Z_orthogonal_to_K", "(Z - Z) is orthogonal to K",
                        lambda f: not _raises_orthogonality(f.Z, f.K, "diff_plain")),
            expect_true("zero_not_in_K", "0 is not a dual solution",
                        lambda f: k_contains(f.pair, [0.0], candidates=[[0.0]]) is Membership.FALSE),
            expect_value("zero_in_K_formula", "P_(Z+K) x = P_Z x + P_K(x - z0)",
                         lambda f: [project_ZplusK_zero_in_K(f.Z, f.K, [0.0], [x])[0] for x in (-2.0, 0.5, 4.0)],
                         [1.0, 1.0, 4.0]),
            expect_value("bidual", "(A, B)** = (A, B)",
                         lambda f: [resolvent(f.pair.dual().A, [-3.0])[0], resolvent(f.pair.dual().B, [-3.0])[0]],
                         [1.0, 1.0]),
        ],
    )


BUILTIN = {
    "skewskew": _skewskew,
    "normskew": _normskew,
    "feasibility-1d": _feasibility_1d,
    "ww-nested": _ww_nested,
    "orthogonal-2d": _orthogonal_2d,
    "hinge": _hinge,
    "constant-pair": _constant_pair,
    "lcl-composed": _lcl_composed,
    "inconsistent-origin": _inconsistent_origin,
}


# ---------------------------------------------------------------------------
# Overlay fixtures
# ---------------------------------------------------------------------------

def fixture_from_dict(spec: Dict[str, Any]) -> Fixture:
    """Build a fixture from its declarative overlay form."""
    try:
        name = str(spec["name"])
        A = build_operator(spec["operator_a"])
        B = build_operator(spec["operator_b"])
        if "dim" in spec and int(spec["dim"]) != A.dim:
            raise FixtureError(f"Overlay fixture {name}: declared dim {spec['dim']} but operators have {A.dim}")
        solutions = spec.get("solutions", {})
        samples = solutions.get("samples", [])
        return Fixture(
            name=name,
            pair=dual_pair(A, B),
            solutions=SolutionDescription(
                Z_set=build_set(solutions["Z"]) if "Z" in solutions else None,
                K_set=build_set(solutions["K"]) if "K" in solutions else None,
                sample_z=[as_point(z, A.dim) for z, _ in samples],
                sample_k=[as_point(k, A.dim) for _, k in samples],
            ),
            fixT=build_set(spec["fixT"]) if "fixT" in spec else None,
            notes=spec.get("notes", "overlay fixture"),
            reference=spec.get("reference", f"overlay fixture {name}"),
            common_zero=spec.get("common_zero"),
            default_x0=spec.get("x0"),
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, FixtureError):
            raise
        raise FixtureError(f"Invalid overlay fixture {spec.get('name', '?') if isinstance(spec, dict) else spec}: {e}")


class FixtureRegistry:
    """Built-in fixtures plus overlay fixtures, built and validated on first use."""

    def __init__(self):
        self._factories: Dict[str, Callable[[], Fixture]] = dict(BUILTIN)
        self._cache: Dict[str, Fixture] = {}

    def names(self) -> List[str]:
        return list(self._factories)

    def get(self, name: str) -> Fixture:
        if name not in self._factories:
            raise FixtureError(f"Unknown fixture {name!r}; available: {', '.join(self.names())}")
        if name not in self._cache:
            fixture = self._factories[name]()
            fixture.validate()
            self._cache[name] = fixture
            logger.info(f"Loaded fixture {name}")
        return self._cache[name]

    def list_fixtures(self) -> List[Dict[str, Any]]:
        """Summaries of every fixture; each is validated on load."""
        return [self.get(name).summary() for name in self.names()]

    def register(self, fixture: Fixture):
        fixture.validate()
        self._factories[fixture.name] = lambda: fixture
        self._cache[fixture.name] = fixture

    def load_overlay(self, path: str) -> List[str]:
        """Register the fixtures of a JSON overlay file; returns their names."""
        try:
            with open(path, "r", encoding="utf-8") as fh:
                document = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise FixtureError(f"Cannot read overlay {path}: {e}")
        if isinstance(document, dict):
            entries = document.get("fixtures", [document])
        else:
            entries = document
        if not isinstance(entries, list) or not entries:
            raise FixtureError(f"Overlay {path} holds no fixtures")
        names = []
        for entry in entries:
            fixture = fixture_from_dict(entry)
            try:
                self.register(fixture)
            except ContractViolation as e:
                raise FixtureError(f"Overlay fixture {fixture.name} failed validation: {e}")
            names.append(fixture.name)
        logger.info(f"Loaded {len(names)} overlay fixtures from {path}")
        return names


# Global registry instance
registry = FixtureRegistry()
