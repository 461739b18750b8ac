"""
Convex-geometry kernel for V-polytopes.

min_norm_point() is Wolfe's method; contains_zero() decides 0 in conv(V) + N for
the coordinate-wise normal cones produced by boxes and reports the distance from
0 to that set as the residual in every case.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import linprog, minimize

from ..utils.errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    NormalConeError,
    ToleranceNotReachedError,
)
from .normalcone import NormalConeDescriptor, NormalKind, SignPattern
from .setrel import deduplicate

logger = logging.getLogger(__name__)

# Positive-weight threshold inside Wolfe's minor cycle
_WEIGHT_EPS = 1e-14


@dataclass(frozen=True)
class MinNormResult:
    """Nearest point of conv(V) to the origin with its convex weights."""

    point: np.ndarray
    distance: float
    coefficients: np.ndarray


@dataclass(frozen=True)
class MembershipCertificate:
    """
    Outcome of a zero-membership test in conv(V) + N.

    Attributes:
        decision: True iff residual <= tau_stat
        coefficients: Convex weights over the input vertices
        normal_part: Vector nu in N paired with the weights
        residual: ||sum_i lambda_i v_i + nu||, the distance from 0 to conv(V) + N
        witness: Unit separating direction when decision is False
        marginal: True when the residual lies within a decade of tau_stat
    """

    decision: bool
    coefficients: np.ndarray
    normal_part: np.ndarray
    residual: float
    witness: Optional[np.ndarray]
    marginal: bool

    def to_dict(self) -> dict:
        return {
            "decision": self.decision,
            "residual": self.residual,
            "marginal": self.marginal,
            "coefficients": self.coefficients.tolist(),
            "normal_part": self.normal_part.tolist(),
            "witness": None if self.witness is None else self.witness.tolist(),
        }


def _as_matrix(vertices: Sequence[Sequence[float]]) -> np.ndarray:
    matrix = np.asarray(vertices, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise ValueError("Expected a nonempty list of vertices")
    return matrix


def _affine_minimizer(points: np.ndarray) -> np.ndarray:
    """Weights (summing to 1) of the min-norm point of the affine hull of ``points``."""
    count = points.shape[0]
    kkt = np.zeros((count + 1, count + 1))
    kkt[:count, :count] = points @ points.T
    kkt[:count, count] = 1.0
    kkt[count, :count] = 1.0
    rhs = np.zeros(count + 1)
    rhs[count] = 1.0
    solution = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    return solution[:count]


def _clean_weights(weights: np.ndarray) -> np.ndarray:
    weights = np.clip(weights, 0.0, None)
    return weights / weights.sum()


def min_norm_point(vertices: Sequence[Sequence[float]], tol: float = 1e-12, max_iter: int = 1000) -> MinNormResult:
    """
    Minimum-norm point of conv(V) by Wolfe's algorithm.

    Args:
        vertices: k points in R^d (a flat list is read as points in R^1)
        tol: Relative optimality tolerance of the major-cycle test
        max_iter: Cap on major cycles

    Returns:
        MinNormResult with weights indexed like the input list

    Raises:
        ToleranceNotReachedError: If the cap is hit before the stopping test
    """
    matrix = _as_matrix(vertices)
    unique, groups = deduplicate(matrix, 0.0)
    scale = max(1.0, float(np.max(np.sum(unique**2, axis=1))))

    corral: List[int] = [int(np.argmin(np.linalg.norm(unique, axis=1)))]
    weights = np.array([1.0])
    x = unique[corral[0]].copy()

    for _ in range(max_iter):
        if np.linalg.norm(x) <= tol:
            break
        dots = unique @ x
        j = int(np.argmin(dots))
        if x @ x - dots[j] <= tol * scale or j in corral:
            break

        corral.append(j)
        weights = np.append(weights, 0.0)
        # Minor cycles; each one drops at least one point, so len(corral) bounds them
        for _ in range(len(corral) + 1):
            alpha = _affine_minimizer(unique[corral])
            if np.all(alpha > _WEIGHT_EPS):
                weights = alpha
                break
            blocking = (alpha <= _WEIGHT_EPS) & (weights - alpha > 0)
            ratios = np.where(blocking, weights / np.where(blocking, weights - alpha, 1.0), np.inf)
            theta = min(1.0, float(np.min(ratios)))
            weights = weights + theta * (alpha - weights)
            survivors = weights > _WEIGHT_EPS
            corral = [c for c, keep in zip(corral, survivors) if keep]
            weights = _clean_weights(weights[survivors])
        x = weights @ unique[corral]
    else:
        raise ToleranceNotReachedError(f"Wolfe's method did not converge in {max_iter} major cycles")

    coefficients = np.zeros(matrix.shape[0])
    for slot, weight in zip(corral, weights):
        coefficients[groups[slot][0]] = weight
    coefficients = _clean_weights(coefficients)
    point = coefficients @ matrix
    return MinNormResult(point=point, distance=float(np.linalg.norm(point)), coefficients=coefficients)


def _sign_project(combination: np.ndarray, pattern) -> np.ndarray:
    """Part of a combination that no element of the normal cone can cancel."""
    projected = combination.copy()
    for i, sign in enumerate(pattern):
        if sign is SignPattern.ALL:
            projected[i] = 0.0
        elif sign is SignPattern.NONPOS:
            projected[i] = min(combination[i], 0.0)
        elif sign is SignPattern.NONNEG:
            projected[i] = max(combination[i], 0.0)
    return projected


def _sign_feasible(matrix: np.ndarray, pattern) -> Optional[np.ndarray]:
    """Convex weights with a combination cancelled by the cone, or None if infeasible."""
    count = matrix.shape[0]
    eq_rows, ub_rows = [np.ones(count)], []
    for i, sign in enumerate(pattern):
        if sign is SignPattern.ZERO:
            eq_rows.append(matrix[:, i])
        elif sign is SignPattern.NONNEG:
            ub_rows.append(matrix[:, i])
        elif sign is SignPattern.NONPOS:
            ub_rows.append(-matrix[:, i])

    b_eq = np.zeros(len(eq_rows))
    b_eq[0] = 1.0
    result = linprog(
        np.zeros(count),
        A_ub=np.array(ub_rows) if ub_rows else None,
        b_ub=np.zeros(len(ub_rows)) if ub_rows else None,
        A_eq=np.array(eq_rows),
        b_eq=b_eq,
        bounds=[(0, None)] * count,
        method="highs",
    )
    if result.status == 0:
        return _clean_weights(result.x)
    logger.debug(f"Sign-pattern feasibility program: {result.message}")
    return None


def _sign_residual_weights(matrix: np.ndarray, pattern) -> np.ndarray:
    """Weights minimizing the distance from 0 to conv(V) + N."""
    count = matrix.shape[0]

    def objective(weights):
        projected = _sign_project(weights @ matrix, pattern)
        return 0.5 * float(projected @ projected), matrix @ projected

    result = minimize(
        objective,
        np.full(count, 1.0 / count),
        jac=True,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * count,
        constraints=[{"type": "eq", "fun": lambda w: np.sum(w) - 1.0, "jac": lambda w: np.ones(count)}],
        options={"ftol": 1e-16, "maxiter": 1000},
    )
    # status 8: line search could not improve, i.e. converged to working precision
    if not result.success and result.status != 8:
        raise ToleranceNotReachedError(f"Residual program failed: {result.message}")
    return _clean_weights(result.x)


def contains_zero(
    vertices: Sequence[Sequence[float]], normal: NormalConeDescriptor, tau_stat: float = 1e-7
) -> MembershipCertificate:
    """
    Decide 0 in conv(V) + N for a box-pattern normal cone N.

    Args:
        vertices: k points in R^d
        normal: NormalConeDescriptor of kind BOX_PATTERN and dimension d
        tau_stat: Decision threshold on the residual

    Raises:
        NormalConeError: If ``normal`` is a full-space descriptor
        DimensionMismatchError: If dimensions disagree
        ToleranceNotReachedError: If an inner solver fails
    """
    matrix = _as_matrix(vertices)
    if normal.kind is NormalKind.FULL_SPACE:
        raise NormalConeError("Full-space normal cones are not accepted by contains_zero")
    if normal.dim != matrix.shape[1]:
        raise DimensionMismatchError(
            f"Vertices live in R^{matrix.shape[1]} but the normal cone in R^{normal.dim}"
        )

    pattern = normal.pattern
    if all(sign in (SignPattern.ZERO, SignPattern.ALL) for sign in pattern):
        kept = [i for i, sign in enumerate(pattern) if sign is SignPattern.ZERO]
        if kept:
            weights = min_norm_point(matrix[:, kept]).coefficients
        else:
            weights = np.full(matrix.shape[0], 1.0 / matrix.shape[0])
    else:
        weights = _sign_feasible(matrix, pattern)
        if weights is None:
            weights = _sign_residual_weights(matrix, pattern)

    combination = weights @ matrix
    projected = _sign_project(combination, pattern)
    residual = float(np.linalg.norm(projected))
    decision = residual <= tau_stat
    witness = None if decision else projected / residual
    marginal = 0.1 * tau_stat <= residual <= 10.0 * tau_stat
    if marginal:
        logger.warning(f"Marginal membership decision: residual {residual} vs tau_stat {tau_stat}")

    return MembershipCertificate(
        decision=decision,
        coefficients=weights,
        normal_part=projected - combination,
        residual=residual,
        witness=witness,
        marginal=marginal,
    )


def project(vertices: Sequence[Sequence[float]], coordinate_indices: Sequence[int]) -> np.ndarray:
    """Coordinate projection of every vertex (hull of images = image of hull)."""
    matrix = _as_matrix(vertices)
    indices = list(coordinate_indices)
    bad = [i for i in indices if not 0 <= i < matrix.shape[1]]
    if bad:
        raise IndexOutOfRangeError(f"Coordinates {bad} out of range for dimension {matrix.shape[1]}")
    return matrix[:, indices]


def linear_image(vertices: Sequence[Sequence[float]], matrix: np.ndarray) -> np.ndarray:
    """Images M v of every vertex."""
    points = _as_matrix(vertices)
    operator = np.atleast_2d(np.asarray(matrix, dtype=float))
    if operator.shape[1] != points.shape[1]:
        raise DimensionMismatchError(
            f"Matrix of shape {operator.shape} cannot act on vectors of dimension {points.shape[1]}"
        )
    return points @ operator.T
