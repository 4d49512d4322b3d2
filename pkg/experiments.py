"""Experiment runner: drive a splitting algorithm on a fixture and report its limit and shadow."""
import enum
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from config import config
from errors import UsageError
from fixtures import Fixture, registry
from operator_core import as_point, distance, resolvent
from operator_zoo import project
from reports import Check, Report, store
from splitting import (
    IterationTrace,
    averaged_operator,
    dr_operator,
    fixed_point_residual,
    is_fejer_monotone,
    iterate_dr,
    iterate_halpern,
    iterate_haugazeau,
)

logger = logging.getLogger(__name__)

DEFAULT_RELAXATION = 0.75
LIMIT_TOL = 1e-6
# Halpern converges at rate O(1/n)
HALPERN_LIMIT_TOL = 1e-3

RUN_REFERENCES = {
    "converged": "convergence of Krasnoselskii-Mann iterates of T",
    "limit": "Fix T = Psi(gr K)",
    "fejer": "Fejer monotonicity with respect to Fix T",
    "shadow": "J_A(Fix T) = Z",
    "projection": "strong convergence of anchored iterations to P_(Fix T) y",
}


class RunAlgorithm(enum.Enum):
    DR = "dr"
    PR_AVERAGED = "pr_averaged"
    HALPERN = "halpern"
    HAUGAZEAU = "haugazeau"


def parse_algorithm(name: str) -> RunAlgorithm:
    try:
        return RunAlgorithm(name)
    except ValueError:
        raise UsageError(f"Unknown algorithm {name!r}; choose from {', '.join(a.value for a in RunAlgorithm)}")


def _start(fixture: Fixture, point: Optional[Sequence[float]], fallback: Optional[Sequence[float]]) -> np.ndarray:
    for candidate in (point, fallback, fixture.default_x0):
        if candidate is not None:
            try:
                return as_point(candidate, fixture.dim)
            except ValueError as e:
                raise UsageError(f"Invalid starting point for {fixture.name}: {e}")
    return np.zeros(fixture.dim)


def run_algorithm(fixture: str, algorithm: str, x0: Optional[Sequence[float]] = None,
                  anchor: Optional[Sequence[float]] = None, relaxation: Optional[float] = None,
                  tol: float = config.ITERATION_TOL, max_iter: int = config.MAX_ITER,
                  csv_path: Optional[str] = None, json_path: Optional[str] = None) -> Tuple[Report, IterationTrace]:
    """Run one driver on one fixture, write trace CSV and report JSON, and check the limit."""
    kind = parse_algorithm(algorithm)
    if tol <= 0 or max_iter < 1:
        raise UsageError(f"Need tol > 0 and max_iter >= 1, got tol={tol}, max_iter={max_iter}")
    fx = registry.get(fixture)
    pair = fx.pair
    report = Report(fixture=fx.name, suite=f"run-{kind.value}", notes=fx.notes)

    if kind is RunAlgorithm.DR:
        op = dr_operator(pair)
        trace = iterate_dr(op, _start(fx, x0, anchor), tol, max_iter)
    elif kind is RunAlgorithm.PR_AVERAGED:
        lam = DEFAULT_RELAXATION if relaxation is None else relaxation
        if not 0.0 < lam <= 1.0:
            raise UsageError(f"lambda must lie in (0, 1], got {lam}")
        op = averaged_operator(pair, lam)
        trace = iterate_dr(op, _start(fx, x0, anchor), tol, max_iter)
    elif kind is RunAlgorithm.HALPERN:
        op = dr_operator(pair)
        y = _start(fx, anchor, x0)
        trace = iterate_halpern(op, _start(fx, x0, y), y, tol=tol, max_iter=max_iter)
    else:
        op = dr_operator(pair)
        trace = iterate_haugazeau(op, _start(fx, anchor, x0), tol, max_iter)

    report.traces.append(trace.summary())
    T = dr_operator(pair)

    if kind in (RunAlgorithm.DR, RunAlgorithm.PR_AVERAGED):
        report.add(Check.boolean("converged", "iterates reach the stopping tolerance", True, trace.converged))
        report.add(Check.numeric("limit.fixed_point", "the limit is fixed by T",
                                 fixed_point_residual(T, trace.limit), LIMIT_TOL))
        report.add(Check.boolean("fejer.limit", "distances to the limit never increase", True,
                                 is_fejer_monotone(trace, trace.limit)))
        if fx.fixT is not None:
            p = project(fx.fixT, trace.iterates[0])
            report.add(Check.boolean("fejer.fixed_point", "distances to a verified fixed point never increase",
                                     True, is_fejer_monotone(trace, p)))
        if fx.Z is not None:
            shadow = trace.shadow_limit
            report.add(Check.numeric("shadow.in_Z", "J_A(Fix T) lies in Z",
                                     distance(project(fx.Z, shadow), shadow), LIMIT_TOL,
                                     expected=project(fx.Z, shadow), actual=shadow))
    elif fx.fixT is not None:
        # Anchored drivers target P_(Fix T) y and its shadow J_A P_(Fix T) y
        limit_tol = HALPERN_LIMIT_TOL if kind is RunAlgorithm.HALPERN else LIMIT_TOL
        target = project(fx.fixT, trace.anchor)
        report.add(Check.numeric("limit.projection", "x_n tends to P_(Fix T) y",
                                 distance(trace.limit, target), limit_tol, expected=target, actual=trace.limit))
        shadow_target = resolvent(pair.A, target)
        report.add(Check.numeric("shadow.projection", "J_A x_n tends to J_A P_(Fix T) y",
                                 distance(trace.shadow_limit, shadow_target), limit_tol,
                                 expected=shadow_target, actual=trace.shadow_limit))
    else:
        report.add(Check.numeric("limit.fixed_point", "the limit is fixed by T",
                                 fixed_point_residual(T, trace.limit), HALPERN_LIMIT_TOL))

    report.attach_references(RUN_REFERENCES, fx.reference or f"fixture {fx.name}")
    store.write_trace(trace, csv_path, name=f"{fx.name}-{kind.value}")
    store.write_report(report, json_path)
    logger.info(f"Run {kind.value} on {fx.name}: limit {trace.limit}, shadow {trace.shadow_limit}")
    return report, trace
