"""
The scalarizing functional Psi_e(y) = inf{t : y in t e - K} and its subdifferential.

For a polyhedral cone, y in t e - K iff <d_j, y> <= t <d_j, e> for every j,
so Psi_e(y) = max_j <w_j, y> and the subdifferential at y is the convex hull
of the normalized generators attaining that maximum.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .cone import ConeContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubdifferentialFace:
    """
    Face of the simplex-like set {k* in K* : <k*, e> = 1} active at a point.

    Attributes:
        vertices: (r, m) array of active normalized generators
        indices: Generator indices of the rows of ``vertices``
        value: Psi_e at the point
    """

    vertices: np.ndarray
    indices: Tuple[int, ...]
    value: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "generator_indices": list(self.indices),
            "vertices": self.vertices.tolist(),
        }


def psi(ctx: ConeContext, y: np.ndarray):
    """
    Evaluate Psi_e at a vector, or row-wise on a stack of vectors.

    Raises:
        DimensionMismatchError: If the last axis is not m
    """
    y = ctx.check_dim(y)
    values = np.max(y @ ctx.normalized_generators.T, axis=-1)
    return float(values) if values.ndim == 0 else values


def active_threshold(value: float, tau_act: float) -> float:
    """Relative band used for every tie decision: tau_act * max(1, |value|)."""
    return tau_act * max(1.0, abs(value))


def psi_subdifferential(ctx: ConeContext, ybar: np.ndarray, tau_act: float = 1e-8) -> SubdifferentialFace:
    """
    Vertices of the subdifferential of Psi_e at ``ybar``.

    The face is conv{w_j : <w_j, ybar> >= Psi_e(ybar) - band}; it is never empty.
    """
    ybar = ctx.check_dim(ybar).reshape(-1)
    scores = ctx.normalized_generators @ ybar
    value = float(np.max(scores))
    active = np.flatnonzero(scores >= value - active_threshold(value, tau_act))
    logger.debug(f"Psi_e({ybar.tolist()}) = {value} with active generators {active.tolist()}")
    return SubdifferentialFace(
        vertices=ctx.normalized_generators[active].copy(),
        indices=tuple(int(j) for j in active),
        value=value,
    )
