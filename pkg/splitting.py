"""Douglas-Rachford and Peaceman-Rachford operators and the DR, Halpern and Haugazeau drivers."""
import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

from config import config
from duality import DualPair
from errors import ContractViolation, InconsistentStepError
from operator_core import as_point, distance, reflected_resolvent, resolvent

logger = logging.getLogger(__name__)

Schedule = Callable[[int], float]

# Relative threshold below which rho = mu*nu - pi^2 counts as zero
RHO_EPS = 1e-14


class Algorithm(enum.Enum):
    DR = "dr"
    AVERAGED = "averaged"
    HALPERN = "halpern"
    HAUGAZEAU = "haugazeau"


@dataclass(frozen=True, eq=False)
class SplittingOperator:
    """A fixed-point map T built from a dual pair, with its relaxation lambda."""

    pair: DualPair
    apply: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    relaxation: float = 0.5
    name: str = "T"

    @property
    def dim(self) -> int:
        return self.pair.dim

    def __call__(self, x) -> np.ndarray:
        return self.apply(as_point(x, self.dim))


def dr_operator(pair: DualPair) -> SplittingOperator:
    """Douglas-Rachford operator J_B R_A + Id - J_A."""
    return SplittingOperator(pair=pair, apply=pair.douglas_rachford, relaxation=0.5, name="DR")


def pr_operator(pair: DualPair) -> SplittingOperator:
    """Peaceman-Rachford operator R_B R_A."""
    return SplittingOperator(
        pair=pair,
        apply=lambda x: reflected_resolvent(pair.B, reflected_resolvent(pair.A, x)),
        relaxation=1.0,
        name="PR",
    )


def averaged_operator(pair: DualPair, relaxation: float) -> SplittingOperator:
    """(1 - lambda) Id + lambda R_B R_A for lambda in (0, 1]."""
    if not 0.0 < relaxation <= 1.0:
        raise ContractViolation(f"Relaxation must lie in (0, 1], got {relaxation}")
    if relaxation == 0.5:
        return dr_operator(pair)
    if relaxation == 1.0:
        return pr_operator(pair)
    pr = pr_operator(pair).apply
    return SplittingOperator(
        pair=pair,
        apply=lambda x: (1.0 - relaxation) * x + relaxation * pr(x),
        relaxation=relaxation,
        name=f"PR({relaxation:g})",
    )


def fixed_point_residual(op: SplittingOperator, x) -> float:
    """|T x - x|."""
    x = as_point(x, op.dim)
    return distance(op.apply(x), x)


def backward_backward_dual_gap(pair: DualPair, x) -> float:
    """|J_B J_A x - J_{B^-v} J_{A^-1} x|; the backward-backward map is not self-dual."""
    x = as_point(x, pair.dim)
    primal = resolvent(pair.B, resolvent(pair.A, x))
    dual = resolvent(pair.dual_B, resolvent(pair.dual_A, x))
    return distance(primal, dual)


@dataclass
class IterationTrace:
    """Iterates x_n, shadows J_A x_n and residuals |T x_n - x_n| of one run."""

    algorithm: Algorithm
    iterates: List[np.ndarray] = field(default_factory=list)
    shadows: List[np.ndarray] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    anchor: Optional[np.ndarray] = None
    converged: bool = False
    iterations_used: int = 0

    def record(self, op: SplittingOperator, x: np.ndarray, Tx: np.ndarray):
        self.iterates.append(x)
        self.shadows.append(resolvent(op.pair.A, x))
        self.residuals.append(distance(Tx, x))

    @property
    def limit(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def shadow_limit(self) -> np.ndarray:
        return self.shadows[-1]

    def rows(self) -> Iterator[Tuple]:
        """Rows (n, x_0.., shadow_0.., residual) for trace files."""
        for n, (x, s, r) in enumerate(zip(self.iterates, self.shadows, self.residuals)):
            yield (n, *x.tolist(), *s.tolist(), r)

    def summary(self) -> dict:
        return {
            "algorithm": self.algorithm.value,
            "converged": self.converged,
            "iterations_used": self.iterations_used,
            "limit": self.limit.tolist(),
            "shadow_limit": self.shadow_limit.tolist(),
            "final_residual": self.residuals[-1],
            "anchor": None if self.anchor is None else self.anchor.tolist(),
        }


def _check_budget(tol: float, max_iter: int):
    if tol <= 0:
        raise ContractViolation(f"Tolerance must be positive, got {tol}")
    if max_iter < 1:
        raise ContractViolation(f"max_iter must be at least 1, got {max_iter}")


def _finish(trace: IterationTrace, op: SplittingOperator) -> IterationTrace:
    if trace.converged:
        logger.info(f"{trace.algorithm.value} on {op.name} converged after {trace.iterations_used} iterations")
    else:
        logger.warning(f"{trace.algorithm.value} on {op.name} stopped at max_iter={trace.iterations_used} "
                       f"(residual {trace.residuals[-1]:.3e})")
    return trace


def iterate_dr(op: SplittingOperator, x0, tol: float = config.ITERATION_TOL,
               max_iter: int = config.MAX_ITER) -> IterationTrace:
    """x_{n+1} = T x_n until |x_{n+1} - x_n| <= tol."""
    _check_budget(tol, max_iter)
    x = as_point(x0, op.dim)
    algorithm = Algorithm.DR if op.relaxation == 0.5 else Algorithm.AVERAGED
    trace = IterationTrace(algorithm=algorithm)
    for n in range(max_iter + 1):
        Tx = op.apply(x)
        trace.record(op, x, Tx)
        trace.iterations_used = n
        if trace.residuals[-1] <= tol:
            trace.converged = True
            break
        if n == max_iter:
            break
        x = Tx
    return _finish(trace, op)


def default_schedule(n: int) -> float:
    """lambda_n = 1 / (n + 2)."""
    return 1.0 / (n + 2)


def iterate_halpern(op: SplittingOperator, x0, y, schedule: Schedule = default_schedule,
                    tol: float = config.ITERATION_TOL, max_iter: int = config.MAX_ITER) -> IterationTrace:
    """x_{n+1} = (1 - lambda_n) T x_n + lambda_n y, approaching P_{Fix T} y.

    Stops once both the step and the anchor pull lambda_n |y - T x_n| are below tol.
    With the default schedule the anchor pull decays like |y - T x_n| / n, so meeting tol takes
    about |y - P_{Fix T} y| / tol iterations; a run that exhausts max_iter first ends with
    converged=False even though its last iterate may already be close to the projection.
    """
    _check_budget(tol, max_iter)
    x = as_point(x0, op.dim)
    y = as_point(y, op.dim)
    trace = IterationTrace(algorithm=Algorithm.HALPERN, anchor=y)
    for n in range(max_iter + 1):
        Tx = op.apply(x)
        trace.record(op, x, Tx)
        trace.iterations_used = n
        if n == max_iter:
            break
        lam = schedule(n)
        if not 0.0 < lam < 1.0:
            raise ContractViolation(f"Halpern schedule must lie in (0, 1), got lambda_{n} = {lam}")
        x_next = (1.0 - lam) * Tx + lam * y
        if distance(x_next, x) <= tol and lam * distance(y, Tx) <= tol:
            x = x_next
            Tx = op.apply(x)
            trace.record(op, x, Tx)
            trace.iterations_used = n + 1
            trace.converged = True
            break
        x = x_next
    return _finish(trace, op)


def haugazeau_step(x, a, b) -> np.ndarray:
    """Q(x, a, b): projection of x onto {p : <p - a, x - a> <= 0} intersected with {p : <p - b, a - b> <= 0}."""
    x, a, b = as_point(x), as_point(a), as_point(b)
    pi = float((x - a) @ (a - b))
    mu = float((x - a) @ (x - a))
    nu = float((a - b) @ (a - b))
    rho = mu * nu - pi * pi
    if rho <= RHO_EPS * mu * nu:
        if pi >= 0:
            return b
        raise InconsistentStepError(f"Haugazeau halfspaces do not intersect (pi={pi:.3e})")
    if pi * nu >= rho:
        return x + (1.0 + pi / nu) * (b - a)
    return a + (nu / rho) * (pi * (x - a) + mu * (b - a))


def iterate_haugazeau(op: SplittingOperator, y, tol: float = config.ITERATION_TOL,
                      max_iter: int = config.MAX_ITER) -> IterationTrace:
    """x_0 = y, x_{n+1} = Q(y, x_n, T x_n); converges in norm to P_{Fix T} y."""
    _check_budget(tol, max_iter)
    y = as_point(y, op.dim)
    x = y
    trace = IterationTrace(algorithm=Algorithm.HAUGAZEAU, anchor=y)
    for n in range(max_iter + 1):
        Tx = op.apply(x)
        trace.record(op, x, Tx)
        trace.iterations_used = n
        if trace.residuals[-1] <= tol:
            trace.converged = True
            break
        if n == max_iter:
            break
        x = haugazeau_step(y, x, Tx)
    return _finish(trace, op)


def is_fejer_monotone(trace: IterationTrace, p, tol: float = 1e-10) -> bool:
    """Whether |x_{n+1} - p| <= |x_n - p| + tol along the trace."""
    p = as_point(p)
    distances = [distance(x, p) for x in trace.iterates]
    return all(d1 <= d0 + tol for d0, d1 in zip(distances, distances[1:]))
