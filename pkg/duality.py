"""Attouch-Thera dual pairs, solution-set membership oracles, the Psi bijection and total duality."""
import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import config
from errors import ContractViolation, MembershipError, NotParamonotoneError
from operator_core import (
    ResolventOperator,
    as_point,
    distance,
    graph_contains,
    inverse,
    neg_ovee_inverse,
    reflected_resolvent,
    resolvent,
)
from operator_zoo import ConvexSet, ProxFunction, prox_operator, set_contains

logger = logging.getLogger(__name__)

# Oracles return (optimal value, a minimizer)
Oracle = Callable[[], Tuple[float, np.ndarray]]

# Points per evaluation block of the grid oracle
GRID_BLOCK = 1_000_000


class Membership(enum.Enum):
    """Outcome of a witness-based membership test."""

    TRUE = "true"
    FALSE = "false"
    UNDECIDABLE = "undecidable"


@dataclass(frozen=True, eq=False)
class DualPair:
    """Ordered pair (A, B) together with its dual pair (A^-1, B^-v)."""

    A: ResolventOperator
    B: ResolventOperator
    dual_A: ResolventOperator
    dual_B: ResolventOperator

    @property
    def dim(self) -> int:
        return self.A.dim

    @property
    def paramonotone(self) -> bool:
        return self.A.paramonotone and self.B.paramonotone

    def dual(self) -> "DualPair":
        """The dual of this pair; its own dual agrees with (A, B)."""
        return dual_pair(self.dual_A, self.dual_B)

    def douglas_rachford(self, x) -> np.ndarray:
        """T x = J_B R_A x + x - J_A x."""
        x = as_point(x, self.dim)
        return resolvent(self.B, reflected_resolvent(self.A, x)) + x - resolvent(self.A, x)


def dual_pair(A: ResolventOperator, B: ResolventOperator) -> DualPair:
    """Build (A, B) with its Attouch-Thera dual (A^-1, B^-v)."""
    if A.dim != B.dim:
        raise ContractViolation(f"Dimension mismatch: {A.label} has {A.dim}, {B.label} has {B.dim}")
    return DualPair(A=A, B=B, dual_A=inverse(A), dual_B=neg_ovee_inverse(B))


@dataclass
class SolutionDescription:
    """Ground truth about the primal solutions Z and dual solutions K."""

    Z_set: Optional[ConvexSet] = None
    K_set: Optional[ConvexSet] = None
    sample_z: List[np.ndarray] = field(default_factory=list)
    sample_k: List[np.ndarray] = field(default_factory=list)


def kz_contains(pair: DualPair, z, k, tol: float = config.MEMBERSHIP_TOL) -> bool:
    """Whether k lies in K_z = Az intersected with -Bz."""
    z = as_point(z, pair.dim)
    k = as_point(k, pair.dim)
    return graph_contains(pair.A, z, k, tol) and graph_contains(pair.B, z, -k, tol)


def zk_contains(pair: DualPair, k, z, tol: float = config.MEMBERSHIP_TOL) -> bool:
    """Whether z lies in Z_k = A^-1 k intersected with -B^-v k, decided on the dual operators."""
    z = as_point(z, pair.dim)
    k = as_point(k, pair.dim)
    dual_side = graph_contains(pair.dual_A, k, z, tol) and graph_contains(pair.dual_B, k, -z, tol)
    primal_side = kz_contains(pair, z, k, tol)
    if dual_side != primal_side:
        raise ContractViolation(f"K_z/Z_k membership disagree at z={z}, k={k} "
                                f"(dual={dual_side}, primal={primal_side}); the dual operators do not match (A, B)")
    return dual_side


def z_contains(pair: DualPair, z, tol: float = config.MEMBERSHIP_TOL,
               candidates: Sequence = (), solutions: Optional[SolutionDescription] = None) -> Membership:
    """Whether z is a primal solution, using candidate dual witnesses k or ground truth."""
    z = as_point(z, pair.dim)
    for k in candidates:
        if kz_contains(pair, z, k, tol):
            return Membership.TRUE
    if solutions is not None and solutions.Z_set is not None:
        return Membership.TRUE if set_contains(solutions.Z_set, z, tol) else Membership.FALSE
    if candidates:
        return Membership.FALSE
    return Membership.UNDECIDABLE


def k_contains(pair: DualPair, k, tol: float = config.MEMBERSHIP_TOL,
               candidates: Sequence = (), solutions: Optional[SolutionDescription] = None) -> Membership:
    """Whether k is a dual solution, using candidate primal witnesses z or ground truth."""
    k = as_point(k, pair.dim)
    for z in candidates:
        if kz_contains(pair, z, k, tol):
            return Membership.TRUE
    if solutions is not None and solutions.K_set is not None:
        return Membership.TRUE if set_contains(solutions.K_set, k, tol) else Membership.FALSE
    if candidates:
        return Membership.FALSE
    return Membership.UNDECIDABLE


def psi(pair: DualPair, z, k, tol: float = config.MEMBERSHIP_TOL) -> np.ndarray:
    """Map a solution pair (z, k) in gr K to the fixed point z + k of T."""
    if not kz_contains(pair, z, k, tol):
        raise MembershipError(f"({z}, {k}) is not in the graph of K")
    x = as_point(z) + as_point(k)
    residual = distance(pair.douglas_rachford(x), x)
    # Membership errors of size tol propagate to at most 4 tol through T
    if residual > 4 * tol:
        raise ContractViolation(f"z + k is not a fixed point of T (residual {residual:.3e})")
    return x


def psi_inverse(pair: DualPair, x, tol: float = config.MEMBERSHIP_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Split a fixed point x of T into (J_A x, x - J_A x)."""
    x = as_point(x, pair.dim)
    residual = distance(pair.douglas_rachford(x), x)
    if residual > tol:
        raise ContractViolation(f"{x} is not a fixed point of T (residual {residual:.3e})")
    z = resolvent(pair.A, x)
    return z, x - z


def passty_orthogonality(pair: DualPair, first: Tuple, second: Tuple,
                         tol: float = config.MEMBERSHIP_TOL) -> float:
    """<k1 - k2, z1 - z2> for two solution pairs; vanishes on gr K."""
    (z1, k1), (z2, k2) = first, second
    for z, k in (first, second):
        if not kz_contains(pair, z, k, tol):
            raise MembershipError(f"({z}, {k}) is not in the graph of K")
    return float((as_point(k1) - as_point(k2)) @ (as_point(z1) - as_point(z2)))


def parallel_sum_contains(A: ResolventOperator, B: ResolventOperator, x, w, grid: Sequence,
                          tol: float = config.MEMBERSHIP_TOL) -> bool:
    """Whether some grid point y witnesses w in Ay intersected with B(x - y).

    False only means no witness on this grid.
    """
    if len(grid) == 0:
        raise ContractViolation("Parallel-sum grid must be nonempty")
    x = as_point(x, A.dim)
    w = as_point(w, A.dim)
    for y in grid:
        y = as_point(y, A.dim)
        if graph_contains(A, y, w, tol) and graph_contains(B, x - y, w, tol):
            return True
    return False


def recover_Z_from_dual(pair: DualPair, k0, probes: Sequence, tol: float = config.MEMBERSHIP_TOL,
                        z_witness=None, solutions: Optional[SolutionDescription] = None) -> List[np.ndarray]:
    """Probes lying in Z_k0; for paramonotone pairs these are exactly the probes in Z.

    k0 must be certified as a dual solution, by `z_witness` when given, else by one of the
    probes, or by the ground truth in `solutions`.
    """
    if not pair.paramonotone:
        raise NotParamonotoneError(f"Recovering Z from a dual solution needs paramonotone operators "
                                   f"({pair.A.label}, {pair.B.label})")
    k0 = as_point(k0, pair.dim)
    witnesses = [z_witness] if z_witness is not None else list(probes)
    if k_contains(pair, k0, tol, candidates=witnesses, solutions=solutions) is Membership.FALSE:
        raise MembershipError(f"{k0} is not certified as a dual solution "
                              f"by {'witness ' + str(z_witness) if z_witness is not None else 'any of the given points'}")
    recovered = [as_point(z, pair.dim) for z in probes if zk_contains(pair, k0, z, tol)]
    logger.debug(f"Recovered {len(recovered)} of {len(probes)} probes from k0={k0}")
    return recovered


# ---------------------------------------------------------------------------
# Fenchel total duality
# ---------------------------------------------------------------------------

def _grid_axis(lo: float, hi: float, spacing: float) -> np.ndarray:
    n = int(round((hi - lo) / spacing)) + 1
    axis = np.minimum(lo + spacing * np.arange(n), hi)
    if lo <= 0.0 <= hi:
        axis = np.union1d(axis, [0.0])
    return axis


def grid_minimize(objective: Callable[[np.ndarray], np.ndarray], lo, hi,
                  spacing: float = config.GRID_SPACING) -> Tuple[float, np.ndarray]:
    """Minimize a batch objective over a regular grid of a box in dimension <= 2."""
    lo = np.asarray(lo, dtype=float).reshape(-1)
    hi = np.asarray(hi, dtype=float).reshape(-1)
    if lo.size > 2:
        raise ContractViolation(f"Grid oracle supports dimension <= 2, got {lo.size}")
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(lo <= hi)):
        raise ContractViolation(f"Grid box must be finite and nonempty: lo={lo}, hi={hi}")
    axes = [_grid_axis(a, b, spacing) for a, b in zip(lo, hi)]
    inner = int(np.prod([len(a) for a in axes[1:]])) if len(axes) > 1 else 1
    rows = max(1, GRID_BLOCK // inner)

    best_value, best_point = np.inf, None
    for start in range(0, len(axes[0]), rows):
        block = np.meshgrid(axes[0][start:start + rows], *axes[1:], indexing="ij")
        points = np.stack(block, axis=-1).reshape(-1, lo.size)
        values = objective(points)
        i = int(np.argmin(values))
        if values[i] < best_value:
            best_value, best_point = float(values[i]), points[i].copy()
    if best_point is None or not np.isfinite(best_value):
        raise ContractViolation("Grid oracle found no point where the objective is finite")
    return best_value, best_point


@dataclass
class TotalDualityReport:
    """Primal and dual optimal values with candidate solutions."""

    mu: float
    mu_star: float
    gap: float
    primal_solution: np.ndarray
    dual_solution: np.ndarray
    weak_duality: bool
    total_duality: bool
    witnesses_consistent: bool


def total_duality_check(f: ProxFunction, g: ProxFunction, primal_oracle: Optional[Oracle] = None,
                        dual_oracle: Optional[Oracle] = None, box: Optional[Tuple] = None,
                        spacing: float = config.GRID_SPACING, tol: float = 1e-6,
                        expect_total_duality: bool = False) -> TotalDualityReport:
    """Compare mu = inf(f + g) with mu* = inf(f* + g*(-.)); total duality means mu + mu* = 0."""
    if f.dim != g.dim:
        raise ContractViolation(f"Dimension mismatch: {f.label} has {f.dim}, {g.label} has {g.dim}")
    f_star, g_star = f.conjugate(), g.conjugate()

    if primal_oracle is None or dual_oracle is None:
        if box is None:
            raise ContractViolation("A bounding box is required when an oracle is not supplied")
        lo, hi = box
    if primal_oracle is None:
        primal_oracle = lambda: grid_minimize(lambda X: f.value_map(X) + g.value_map(X), lo, hi, spacing)
    if dual_oracle is None:
        dual_oracle = lambda: grid_minimize(lambda K: f_star.value_map(K) + g_star.value_map(-K), lo, hi, spacing)

    mu, z = primal_oracle()
    mu_star, k = dual_oracle()
    if not (np.isfinite(mu) and np.isfinite(mu_star)):
        raise ContractViolation(f"Oracle returned non-finite optimal values: mu={mu}, mu*={mu_star}")
    z, k = as_point(z, f.dim), as_point(k, f.dim)
    gap = abs(mu + mu_star)

    # Grid minimizers are only accurate to the grid spacing
    pair = dual_pair(prox_operator(f), prox_operator(g))
    consistent = kz_contains(pair, z, k, tol=max(tol, spacing))
    report = TotalDualityReport(
        mu=mu,
        mu_star=mu_star,
        gap=gap,
        primal_solution=z,
        dual_solution=k,
        weak_duality=mu + mu_star >= -tol,
        total_duality=gap <= tol,
        witnesses_consistent=consistent,
    )
    logger.info(f"Total duality {f.label}/{g.label}: mu={mu:.6g}, mu*={mu_star:.6g}, gap={gap:.3e}")
    if expect_total_duality and not report.total_duality:
        raise ContractViolation(f"Total duality fails although Z is nonempty: |mu + mu*| = {gap:.3e}")
    return report
