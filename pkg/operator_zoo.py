"""Concrete operators with exact resolvents: normal cones, linear maps, prox maps, composites."""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve, orth

from errors import ContractViolation
from operator_core import (
    ResolventMap,
    ResolventOperator,
    as_point,
    distance,
    inverse,
    is_paramonotone_linear,
    neg_ovee_inverse,
    ovee,
)

logger = logging.getLogger(__name__)

INF = math.inf


# ---------------------------------------------------------------------------
# Closed convex sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConvexSet:
    """Nonempty closed convex set held through its exact projection.

    `bounds` is set for boxes so that intersections stay exact.
    """

    dim: int
    projection_map: ResolventMap = field(repr=False)
    label: str = "S"
    bounds: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, repr=False)


def project(S: ConvexSet, x) -> np.ndarray:
    """P_S x."""
    x = as_point(x, S.dim)
    return np.asarray(S.projection_map(x), dtype=float)


def set_contains(S: ConvexSet, x, tol: float = 1e-9) -> bool:
    """Whether x lies in S, up to tol."""
    return distance(project(S, x), x) <= tol


def box(lo, hi, label: Optional[str] = None) -> ConvexSet:
    """Box {x : lo <= x <= hi}; bounds may be infinite."""
    lo = np.asarray(lo, dtype=float).reshape(-1)
    hi = np.asarray(hi, dtype=float).reshape(-1)
    if lo.shape != hi.shape or lo.size == 0:
        raise ContractViolation(f"Box bounds must have equal non-empty shapes, got {lo.shape} and {hi.shape}")
    if np.any(lo > hi) or np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
        raise ContractViolation(f"Empty box: lo={lo}, hi={hi}")
    if label is None:
        label = "x".join(f"[{a:g},{b:g}]" for a, b in zip(lo, hi))
    return ConvexSet(dim=lo.size, projection_map=lambda x: np.clip(x, lo, hi), label=label, bounds=(lo, hi))


def whole_space(dim: int) -> ConvexSet:
    """The whole space R^dim."""
    return box(np.full(dim, -INF), np.full(dim, INF), label=f"R^{dim}")


def singleton(p, label: Optional[str] = None) -> ConvexSet:
    """The set {p}."""
    p = as_point(p)
    return box(p, p, label=label or f"{{{np.array2string(p, separator=',')}}}")


def subspace(basis, dim: Optional[int] = None, label: Optional[str] = None) -> ConvexSet:
    """Linear span of the rows of `basis`."""
    B = np.atleast_2d(np.asarray(basis, dtype=float))
    n = dim if dim is not None else B.shape[1]
    Q = orth(B.T) if B.size else np.zeros((n, 0))
    if Q.shape[0] != n:
        raise ContractViolation(f"Basis vectors must have length {n}")
    return ConvexSet(dim=n, projection_map=lambda x: Q @ (Q.T @ x), label=label or f"span({Q.shape[1]})")


def ball(center, radius: float, label: Optional[str] = None) -> ConvexSet:
    """Closed ball of the given center and radius."""
    c = as_point(center)
    if radius < 0:
        raise ContractViolation(f"Ball radius must be nonnegative, got {radius}")

    def projection_map(x):
        d = x - c
        n = np.linalg.norm(d)
        return x if n <= radius else c + (radius / n) * d

    return ConvexSet(dim=c.size, projection_map=projection_map, label=label or f"B({radius:g})")


def halfspace(normal, offset: float, label: Optional[str] = None) -> ConvexSet:
    """Halfspace {x : <normal, x> <= offset}."""
    a = as_point(normal)
    aa = float(a @ a)
    if aa == 0.0:
        raise ContractViolation("Halfspace normal must be nonzero")
    return ConvexSet(
        dim=a.size,
        projection_map=lambda x: x - (max(0.0, float(a @ x) - offset) / aa) * a,
        label=label or f"H({offset:g})",
    )


def ray(direction, label: Optional[str] = None) -> ConvexSet:
    """Ray {t d : t >= 0}."""
    d = as_point(direction)
    dd = float(d @ d)
    if dd == 0.0:
        raise ContractViolation("Ray direction must be nonzero")
    return ConvexSet(
        dim=d.size,
        projection_map=lambda x: (max(0.0, float(d @ x)) / dd) * d,
        label=label or "ray",
    )


def intersect_boxes(U: ConvexSet, V: ConvexSet) -> ConvexSet:
    """Exact intersection of two boxes."""
    if U.bounds is None or V.bounds is None:
        raise ContractViolation(f"Intersection of {U.label} and {V.label} has no closed form")
    lo = np.maximum(U.bounds[0], V.bounds[0])
    hi = np.minimum(U.bounds[1], V.bounds[1])
    if np.any(lo > hi):
        raise ContractViolation(f"{U.label} and {V.label} do not intersect")
    return box(lo, hi, label=f"{U.label}&{V.label}")


def check_projection(S: ConvexSet, rng: np.random.Generator, samples: int, scale: float = 10.0) -> Dict[str, float]:
    """Sampled residuals of idempotence, firm nonexpansiveness and the variational inequality."""
    idempotence = firm = variational = 0.0
    for _ in range(samples):
        x = rng.normal(scale=scale, size=S.dim)
        y = rng.normal(scale=scale, size=S.dim)
        px, py = project(S, x), project(S, y)
        idempotence = max(idempotence, distance(project(S, px), px))
        firm = max(firm, float((px - py) @ (px - py) - (x - y) @ (px - py)))
        variational = max(variational, float((x - px) @ (py - px)))
    return {"idempotence": idempotence, "firm_nonexpansiveness": firm, "variational": variational}


# ---------------------------------------------------------------------------
# Proper lower semicontinuous convex functions with exact prox
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProxFunction:
    """Convex function with exact prox map and batch evaluation.

    `value_map` takes an (N, dim) array and returns N extended-real values.
    """

    dim: int
    prox_map: ResolventMap = field(repr=False)
    value_map: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    label: str = "f"
    scaled_prox: Optional[Callable[[float], ResolventMap]] = field(default=None, repr=False)
    conjugate_factory: Optional[Callable[[], "ProxFunction"]] = field(default=None, repr=False)

    def value(self, x) -> float:
        """f(x), possibly +inf."""
        x = as_point(x, self.dim)
        return float(self.value_map(x[None, :])[0])

    def conjugate(self) -> "ProxFunction":
        """The Fenchel conjugate f*, when registered."""
        if self.conjugate_factory is None:
            raise ContractViolation(f"No conjugate registered for {self.label}")
        return self.conjugate_factory()


def moreau_residual(f: ProxFunction, x) -> float:
    """|prox_f x + prox_f* x - x|."""
    x = as_point(x, f.dim)
    return distance(f.prox_map(x) + f.conjugate().prox_map(x), x)


class PiecewiseLinear:
    """Convex piecewise-linear function on an interval [lo, hi] of the real line.

    Slopes[i] holds on the i-th piece between consecutive breakpoints; the
    function is pinned by its value at `anchor`.
    """

    def __init__(self, breakpoints: Sequence[float], slopes: Sequence[float],
                 lo: float = -INF, hi: float = INF, anchor: Optional[Tuple[float, float]] = None):
        self.breakpoints = [float(b) for b in breakpoints]
        self.slopes = [float(s) for s in slopes]
        self.lo, self.hi = float(lo), float(hi)
        if len(self.slopes) != len(self.breakpoints) + 1:
            raise ContractViolation("Need exactly one more slope than breakpoints")
        if any(b2 <= b1 for b1, b2 in zip(self.breakpoints, self.breakpoints[1:])):
            raise ContractViolation(f"Breakpoints must be strictly increasing: {self.breakpoints}")
        if any(s2 <= s1 for s1, s2 in zip(self.slopes, self.slopes[1:])):
            raise ContractViolation(f"Slopes must be strictly increasing: {self.slopes}")
        if not self.lo <= self.hi:
            raise ContractViolation(f"Empty domain [{lo}, {hi}]")
        if any(not self.lo < b < self.hi for b in self.breakpoints):
            raise ContractViolation("Breakpoints must lie inside the domain")

        # Max-affine form: f(x) = max_i slopes[i] * x + intercepts[i] on [lo, hi]
        intercepts = [0.0]
        for i, b in enumerate(self.breakpoints):
            intercepts.append(intercepts[-1] + (self.slopes[i] - self.slopes[i + 1]) * b)
        if anchor is None:
            anchor = (self.breakpoints[0] if self.breakpoints else min(max(0.0, self.lo), self.hi), 0.0)
        xa, fa = float(anchor[0]), float(anchor[1])
        if not self.lo <= xa <= self.hi:
            raise ContractViolation(f"Anchor {xa} outside the domain")
        raw = max(s * xa + c for s, c in zip(self.slopes, intercepts))
        self.intercepts = [c + fa - raw for c in intercepts]

    def value(self, xs) -> np.ndarray:
        """Vectorised f(xs), +inf outside the domain."""
        xs = np.asarray(xs, dtype=float)
        vals = np.max(np.multiply.outer(xs, self.slopes) + np.asarray(self.intercepts), axis=-1)
        return np.where((xs >= self.lo) & (xs <= self.hi), vals, INF)

    def finite_knots(self) -> List[float]:
        knots = [self.lo] if math.isfinite(self.lo) else []
        knots += self.breakpoints
        if math.isfinite(self.hi) and self.hi != self.lo:
            knots.append(self.hi)
        return knots

    def prox(self, x: float, step: float = 1.0) -> float:
        """argmin_z f(z) + (z - x)^2 / (2 step), by case analysis over pieces and knots."""
        if self.lo == self.hi:
            return self.lo
        knots = [self.lo] + self.breakpoints + [self.hi]
        for j, k in enumerate(knots):
            if not math.isfinite(k):
                continue
            left = self.slopes[j - 1] if j > 0 else -INF
            right = self.slopes[j] if j < len(self.slopes) else INF
            if step * left <= x - k <= step * right:
                return k
        for i, s in enumerate(self.slopes):
            z = x - step * s
            if knots[i] < z < knots[i + 1]:
                return z
        # Rounding left a gap between the cases; pick the best candidate
        candidates = [min(max(x - step * s, self.lo), self.hi) for s in self.slopes]
        candidates += [k for k in knots if math.isfinite(k)]
        objective = self.value(np.asarray(candidates)) + (np.asarray(candidates) - x) ** 2 / (2 * step)
        return float(candidates[int(np.argmin(objective))])

    def conjugate(self) -> "PiecewiseLinear":
        """f*(y) = max over finite knots k of (k y - f(k)), on the dual domain."""
        knots = self.finite_knots()
        if not knots:
            # Affine on the whole line: conjugate is an indicator of a point
            s0 = self.slopes[0]
            return PiecewiseLinear([], [0.0], lo=s0, hi=s0, anchor=(s0, -self.intercepts[0]))
        lo_star = self.slopes[0] if math.isinf(self.lo) else -INF
        hi_star = self.slopes[-1] if math.isinf(self.hi) else INF
        breaks = []
        for k1, k2 in zip(knots, knots[1:]):
            piece = int(np.searchsorted(self.breakpoints, 0.5 * (k1 + k2)))
            breaks.append(self.slopes[piece])
        values = self.value(np.asarray(knots))
        ya = breaks[0] if breaks else min(max(0.0, lo_star), hi_star)
        fa = max(k * ya - v for k, v in zip(knots, values))
        return PiecewiseLinear(breaks, knots, lo=lo_star, hi=hi_star, anchor=(ya, fa))


def _piecewise_function(pl: PiecewiseLinear, label: str) -> ProxFunction:
    return ProxFunction(
        dim=1,
        prox_map=lambda x: np.array([pl.prox(float(x[0]), 1.0)]),
        value_map=lambda X: pl.value(np.asarray(X, dtype=float)[..., 0]),
        label=label,
        scaled_prox=lambda alpha: (lambda x: np.array([pl.prox(float(x[0]), alpha)])),
        conjugate_factory=lambda: _piecewise_function(pl.conjugate(), f"{label}*"),
    )


def piecewise_linear(breakpoints: Sequence[float], slopes: Sequence[float], lo: float = -INF,
                     hi: float = INF, anchor: Optional[Tuple[float, float]] = None,
                     label: Optional[str] = None) -> ProxFunction:
    """Convex piecewise-linear function on R (e.g. hinges, absolute values, interval indicators)."""
    pl = PiecewiseLinear(breakpoints, slopes, lo, hi, anchor)
    return _piecewise_function(pl, label or f"pl{list(pl.breakpoints)}")


def interval_indicator(lo: float, hi: float) -> ProxFunction:
    """Indicator function of [lo, hi]."""
    return piecewise_linear([], [0.0], lo=lo, hi=hi, label=f"i[{lo:g},{hi:g}]")


def separable(parts: Sequence[ProxFunction], label: Optional[str] = None) -> ProxFunction:
    """Sum of one-dimensional functions acting on separate coordinates."""
    parts = list(parts)
    if not parts or any(p.dim != 1 for p in parts):
        raise ContractViolation("Separable sums need one-dimensional parts")
    label = label or "+".join(p.label for p in parts)

    def prox_with(maps):
        return lambda x: np.array([m(x[i:i + 1])[0] for i, m in enumerate(maps)])

    def value_map(X):
        X = np.asarray(X, dtype=float)
        return sum(p.value_map(X[..., i:i + 1]) for i, p in enumerate(parts))

    scaled = None
    if all(p.scaled_prox is not None for p in parts):
        scaled = lambda alpha: prox_with([p.scaled_prox(alpha) for p in parts])
    conjugate = None
    if all(p.conjugate_factory is not None for p in parts):
        conjugate = lambda: separable([p.conjugate() for p in parts], label=f"({label})*")
    return ProxFunction(len(parts), prox_with([p.prox_map for p in parts]), value_map, label, scaled, conjugate)


def box_indicator(lo, hi) -> ProxFunction:
    """Indicator of the box {lo <= x <= hi}; bounds may be infinite."""
    lo = np.asarray(lo, dtype=float).reshape(-1)
    hi = np.asarray(hi, dtype=float).reshape(-1)
    return separable([interval_indicator(a, b) for a, b in zip(lo, hi)], label="i_box")


def half_squared_norm(dim: int) -> ProxFunction:
    """f = |x|^2 / 2, its own conjugate."""

    def build() -> ProxFunction:
        return ProxFunction(
            dim=dim,
            prox_map=lambda x: 0.5 * x,
            value_map=lambda X: 0.5 * np.sum(np.asarray(X, dtype=float) ** 2, axis=-1),
            label="q",
            scaled_prox=lambda alpha: (lambda x: x / (1.0 + alpha)),
            conjugate_factory=build,
        )

    return build()


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

def normal_cone_operator(S: ConvexSet) -> ResolventOperator:
    """N_S, whose resolvent is P_S; invariant under positive scaling."""
    op = ResolventOperator(
        dim=S.dim,
        resolvent_map=S.projection_map,
        paramonotone=True,
        label=f"N_{S.label}",
        scale=lambda alpha: op,
    )
    return op


def linear_operator(M, label: Optional[str] = None) -> ResolventOperator:
    """Monotone linear operator x -> Mx; resolvent by LU solve of (Id + M)."""
    M = np.asarray(M, dtype=float)
    paramonotone = is_paramonotone_linear(M)
    factors = lu_factor(np.eye(M.shape[0]) + M)
    return ResolventOperator(
        dim=M.shape[0],
        resolvent_map=lambda x: lu_solve(factors, x),
        paramonotone=paramonotone,
        label=label or "M",
        scale=lambda alpha: linear_operator(alpha * M, label=f"{alpha:g}*{label or 'M'}"),
    )


def zero_operator(dim: int) -> ResolventOperator:
    """The zero operator; J_0 = Id."""
    return linear_operator(np.zeros((dim, dim)), label="0")


def rotator(quarter_turn: int) -> ResolventOperator:
    """Rotation of R^2 by quarter_turn * pi/2 (quarter_turn in {-1, +1})."""
    if quarter_turn == 1:
        return linear_operator([[0.0, -1.0], [1.0, 0.0]], label="rot+")
    if quarter_turn == -1:
        return linear_operator([[0.0, 1.0], [-1.0, 0.0]], label="rot-")
    raise ContractViolation(f"quarter_turn must be +1 or -1, got {quarter_turn}")


def constant_operator(u) -> ResolventOperator:
    """A x = u for every x; resolvent x -> x - u."""
    u = as_point(u)
    return ResolventOperator(
        dim=u.size,
        resolvent_map=lambda x: x - u,
        paramonotone=True,
        label=f"const{np.array2string(u, separator=',')}",
        scale=lambda alpha: constant_operator(alpha * u),
    )


def _prox_scaled(f: ProxFunction, alpha: float) -> ResolventOperator:
    return ResolventOperator(
        dim=f.dim,
        resolvent_map=f.scaled_prox(alpha),
        paramonotone=True,
        label=f"{alpha:g}*d{f.label}",
        scale=lambda beta: _prox_scaled(f, alpha * beta),
    )


def prox_operator(f: ProxFunction) -> ResolventOperator:
    """Subdifferential of f, whose resolvent is prox_f."""
    return ResolventOperator(
        dim=f.dim,
        resolvent_map=f.prox_map,
        paramonotone=True,
        label=f"d{f.label}",
        scale=(lambda alpha: _prox_scaled(f, alpha)) if f.scaled_prox is not None else None,
    )


def _ww_resolvent(alpha: float) -> ResolventMap:
    # (Id + alpha(N_U + R)) on U = R x R+, R the rotation by +pi/2
    def resolvent_map(x):
        x1, x2 = float(x[0]), float(x[1])
        if x2 > alpha * x1:
            d = 1.0 + alpha * alpha
            return np.array([(x1 + alpha * x2) / d, (x2 - alpha * x1) / d])
        return np.array([x1, 0.0])

    return resolvent_map


def skew_plus_normal_cone_WW(alpha: float = 1.0) -> ResolventOperator:
    """A = N_U + R on R^2, U = R x R+, R rotation by +pi/2 (not paramonotone)."""
    return ResolventOperator(
        dim=2,
        resolvent_map=_ww_resolvent(alpha),
        paramonotone=False,
        label="N_U+R" if alpha == 1.0 else f"{alpha:g}*(N_U+R)",
        scale=lambda beta: skew_plus_normal_cone_WW(alpha * beta),
    )


def composed_LCL(C: ResolventOperator, L) -> ResolventOperator:
    """L^T C L for L with L L^T = alpha Id; resolvent x + L^T (J_{alpha C}(Lx) - Lx) / alpha."""
    L = np.atleast_2d(np.asarray(L, dtype=float))
    if L.shape[0] != C.dim:
        raise ContractViolation(f"L must have {C.dim} rows, got shape {L.shape}")
    gram = L @ L.T
    alpha = float(gram[0, 0])
    if alpha <= 0 or not np.allclose(gram, alpha * np.eye(C.dim), rtol=0.0, atol=1e-10):
        raise ContractViolation("composed_LCL requires L L^T = alpha Id with alpha > 0")
    J = C.scaled(alpha).resolvent_map
    logger.debug(f"Built L^T {C.label} L with alpha={alpha:g}")

    def resolvent_map(x):
        Lx = L @ x
        return x + (L.T @ (J(Lx) - Lx)) / alpha

    return ResolventOperator(
        dim=L.shape[1],
        resolvent_map=resolvent_map,
        paramonotone=C.paramonotone,
        label=f"L*{C.label}L",
        scale=(lambda beta: composed_LCL(C.scaled(beta), L)) if C.scale is not None else None,
    )


def zoo_catalog() -> Dict[str, ResolventOperator]:
    """Representative zoo operators keyed by name."""
    return {
        "normal_cone_quadrant": normal_cone_operator(box([0.0, 0.0], [INF, INF], label="R2+")),
        "normal_cone_interval": normal_cone_operator(box([0.0], [2.0])),
        "normal_cone_line": normal_cone_operator(subspace([[1.0, 0.0]], label="line")),
        "normal_cone_ball": normal_cone_operator(ball([1.0, -1.0], 2.0)),
        "rotator_minus": rotator(-1),
        "rotator_plus": rotator(1),
        "linear_psd": linear_operator([[2.0, 1.0], [1.0, 1.0]], label="psd"),
        "constant": constant_operator([1.0, 0.0]),
        "ww": skew_plus_normal_cone_WW(),
        "prox_hinge": prox_operator(piecewise_linear([1.0], [0.0, 1.0], label="hinge")),
        "prox_quadratic": prox_operator(half_squared_norm(2)),
        "prox_box": prox_operator(box_indicator([0.0, -1.0], [2.0, INF])),
        "lcl_cone": composed_LCL(normal_cone_operator(box([0.0], [INF], label="R+")), [[2.0, 0.0]]),
        "lcl_rotator": composed_LCL(rotator(1), [[0.6, 0.8], [-0.8, 0.6]]),
    }


# ---------------------------------------------------------------------------
# Declarative forms (fixture overlays)
# ---------------------------------------------------------------------------

def _bounds(values, fill: float) -> np.ndarray:
    return np.array([fill if v is None else float(v) for v in values], dtype=float)


def build_set(spec: Dict) -> ConvexSet:
    """Build a ConvexSet from its declarative form."""
    kind = spec.get("kind")
    if kind == "box":
        return box(_bounds(spec["lo"], -INF), _bounds(spec["hi"], INF), label=spec.get("label"))
    if kind == "subspace":
        return subspace(spec["basis"], dim=spec.get("dim"), label=spec.get("label"))
    if kind == "ball":
        return ball(spec["center"], float(spec["radius"]), label=spec.get("label"))
    if kind == "halfspace":
        return halfspace(spec["normal"], float(spec["offset"]), label=spec.get("label"))
    if kind == "ray":
        return ray(spec["direction"], label=spec.get("label"))
    if kind == "point":
        return singleton(spec["p"], label=spec.get("label"))
    if kind == "whole":
        return whole_space(int(spec["dim"]))
    raise ContractViolation(f"Unknown set kind: {kind!r}")


def build_function(spec: Dict) -> ProxFunction:
    """Build a ProxFunction from its declarative form."""
    kind = spec.get("kind")
    if kind in ("piecewise_linear", "hinge"):
        lo = spec.get("lo")
        hi = spec.get("hi")
        anchor = spec.get("anchor")
        return piecewise_linear(
            spec["breakpoints"],
            spec.get("slopes", [0.0, 1.0]),
            lo=-INF if lo is None else float(lo),
            hi=INF if hi is None else float(hi),
            anchor=tuple(anchor) if anchor is not None else None,
            label=spec.get("label"),
        )
    if kind == "interval_indicator":
        return interval_indicator(float(spec["lo"]), float(spec["hi"]))
    if kind == "box_indicator":
        return box_indicator(_bounds(spec["lo"], -INF), _bounds(spec["hi"], INF))
    if kind == "half_squared_norm":
        return half_squared_norm(int(spec["dim"]))
    if kind == "separable":
        return separable([build_function(part) for part in spec["parts"]])
    raise ContractViolation(f"Unknown function kind: {kind!r}")


def build_operator(spec: Dict) -> ResolventOperator:
    """Build a ResolventOperator from its declarative form (operator AST)."""
    kind = spec.get("kind")
    if kind == "normal_cone":
        return normal_cone_operator(build_set(spec["set"]))
    if kind == "normal_cone_box":
        return normal_cone_operator(box(_bounds(spec["lo"], -INF), _bounds(spec["hi"], INF)))
    if kind == "linear":
        return linear_operator(spec["matrix"], label=spec.get("label"))
    if kind == "zero":
        return zero_operator(int(spec["dim"]))
    if kind == "constant":
        return constant_operator(spec["u"])
    if kind == "ww_example":
        return skew_plus_normal_cone_WW()
    if kind == "prox":
        return prox_operator(build_function(spec["function"]))
    if kind == "prox_hinge":
        return prox_operator(build_function(dict(spec, kind="hinge")))
    if kind == "composed_lcl":
        return composed_LCL(build_operator(spec["inner"]), spec["L"])
    if kind == "inverse":
        return inverse(build_operator(spec["of"]))
    if kind == "ovee":
        return ovee(build_operator(spec["of"]))
    if kind == "neg_ovee_inverse":
        return neg_ovee_inverse(build_operator(spec["of"]))
    raise ContractViolation(f"Unknown operator kind: {kind!r}")
