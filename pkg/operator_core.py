"""Resolvent-based representation of maximally monotone operators and their transform algebra."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from config import config
from errors import ContractViolation, NotMonotoneError

logger = logging.getLogger(__name__)

ResolventMap = Callable[[np.ndarray], np.ndarray]

# Construction-time guard: sampled pairs and absolute tolerance
GUARD_SAMPLES = 32
GUARD_TOL = 1e-10


def as_point(coords, dim: Optional[int] = None) -> np.ndarray:
    """Convert coordinates to a validated 1-D float vector (a Point)."""
    x = np.asarray(coords, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.ndim != 1 or x.size == 0:
        raise ContractViolation(f"Point must be a non-empty 1-D vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ContractViolation(f"Point has non-finite coordinates: {x}")
    if dim is not None and x.size != dim:
        raise ContractViolation(f"Dimension mismatch: expected {dim}, got {x.size}")
    return x


def distance(x: np.ndarray, y: np.ndarray) -> float:
    """Euclidean distance between two points."""
    return float(np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)))


@dataclass(frozen=True, eq=False)
class ResolventOperator:
    """Maximally monotone operator A held through its resolvent J_A = (Id + A)^-1.

    `scale`, when present, returns the operator alpha*A with a closed-form resolvent.
    """

    dim: int
    resolvent_map: ResolventMap = field(repr=False)
    paramonotone: bool = False
    label: str = "A"
    scale: Optional[Callable[[float], "ResolventOperator"]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ContractViolation(f"Operator dimension must be positive, got {self.dim}")
        if config.VALIDATE_OPERATORS:
            violation = firm_nonexpansiveness_violation(self, np.random.default_rng(0), GUARD_SAMPLES)
            if violation > GUARD_TOL:
                raise NotMonotoneError(
                    f"Resolvent of {self.label} is not firmly nonexpansive (violation {violation:.3e})"
                )

    def scaled(self, alpha: float) -> "ResolventOperator":
        """Return alpha*A; only available where the scaled resolvent has a closed form."""
        if alpha <= 0:
            raise ContractViolation(f"Scale factor must be positive, got {alpha}")
        if alpha == 1.0:
            return self
        if self.scale is None:
            raise ContractViolation(f"{self.label} has no closed-form scaled resolvent")
        return self.scale(alpha)


def firm_nonexpansiveness_violation(A: ResolventOperator, rng: np.random.Generator,
                                    samples: int, scale: float = config.SAMPLE_SCALE) -> float:
    """Largest sampled excess |Jx-Jy|^2 - <x-y, Jx-Jy> over random pairs, clipped at 0."""
    worst = 0.0
    for _ in range(samples):
        x = rng.normal(scale=scale, size=A.dim)
        y = rng.normal(scale=scale, size=A.dim)
        jx = np.asarray(A.resolvent_map(x), dtype=float)
        jy = np.asarray(A.resolvent_map(y), dtype=float)
        if not (np.all(np.isfinite(jx)) and np.all(np.isfinite(jy))):
            raise NotMonotoneError(f"Resolvent of {A.label} returned non-finite values")
        d, dj = x - y, jx - jy
        excess = dj @ dj - d @ dj
        worst = max(worst, float(excess))
    return worst


def resolvent(A: ResolventOperator, x) -> np.ndarray:
    """J_A x = (Id + A)^-1 x."""
    x = as_point(x, A.dim)
    return np.asarray(A.resolvent_map(x), dtype=float)


def reflected_resolvent(A: ResolventOperator, x) -> np.ndarray:
    """R_A x = 2 J_A x - x."""
    x = as_point(x, A.dim)
    return 2.0 * resolvent(A, x) - x


def _scaled_inverse(A: ResolventOperator, alpha: float) -> ResolventOperator:
    # J_{alpha A^-1} x = x - alpha J_{A/alpha}(x/alpha)
    J_small = A.scaled(1.0 / alpha).resolvent_map
    return ResolventOperator(
        dim=A.dim,
        resolvent_map=lambda x: x - alpha * J_small(x / alpha),
        paramonotone=A.paramonotone,
        label=f"{alpha:g}*{A.label}^-1",
        scale=lambda beta: _scaled_inverse(A, alpha * beta),
    )


def inverse(A: ResolventOperator) -> ResolventOperator:
    """A^-1, whose resolvent is Id - J_A."""
    J = A.resolvent_map
    return ResolventOperator(
        dim=A.dim,
        resolvent_map=lambda x: x - J(x),
        paramonotone=A.paramonotone,
        label=f"{A.label}^-1",
        scale=(lambda alpha: _scaled_inverse(A, alpha)) if A.scale is not None else None,
    )


def ovee(A: ResolventOperator) -> ResolventOperator:
    """A^v = (-Id) A (-Id), whose resolvent is x -> -J_A(-x)."""
    J = A.resolvent_map
    return ResolventOperator(
        dim=A.dim,
        resolvent_map=lambda x: -J(-x),
        paramonotone=A.paramonotone,
        label=f"{A.label}^v",
        scale=(lambda alpha: ovee(A.scaled(alpha))) if A.scale is not None else None,
    )


def neg_ovee_inverse(A: ResolventOperator) -> ResolventOperator:
    """A^-v = (A^-1)^v; equal to (A^v)^-1."""
    return ovee(inverse(A))


def graph_contains(A: ResolventOperator, x, u, tol: float = config.MEMBERSHIP_TOL) -> bool:
    """Whether u lies in Ax, decided by |J_A(x + u) - x| <= tol."""
    if tol <= 0:
        raise ContractViolation(f"Membership tolerance must be positive, got {tol}")
    x = as_point(x, A.dim)
    u = as_point(u, A.dim)
    return distance(resolvent(A, x + u), x) <= tol


def minty_param(A: ResolventOperator, x) -> Tuple[np.ndarray, np.ndarray]:
    """Graph point (J_A x, x - J_A x) of A attached to x."""
    x = as_point(x, A.dim)
    a = resolvent(A, x)
    return a, x - a


def is_paramonotone_linear(M, tol: float = 1e-10) -> bool:
    """Whether the monotone matrix M is paramonotone, i.e. ker(M + M^T) is inside ker M."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ContractViolation(f"Matrix must be square, got shape {M.shape}")
    sym = 0.5 * (M + M.T)
    eigenvalues = np.linalg.eigvalsh(sym)
    if eigenvalues.min() < -tol * max(1.0, float(np.abs(eigenvalues).max())):
        raise NotMonotoneError(f"Matrix is not monotone: min eigenvalue of M+M^T is {2 * eigenvalues.min():.3e}")
    kernel = null_space(sym)
    if kernel.size == 0:
        return True
    return float(np.linalg.norm(M @ kernel)) <= tol * max(1.0, float(np.linalg.norm(M)))
