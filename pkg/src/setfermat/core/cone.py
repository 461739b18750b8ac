"""
Polyhedral ordering cones.

A cone is given by dual generators d_1..d_q, K = {y : <d_j, y> >= 0 for all j},
together with an interior direction e. The generators normalized against e,
w_j = d_j / <d_j, e>, are the vertices of every subdifferential of the
scalarizing functional, so they are computed once and cached.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from ..utils.errors import (
    DimensionMismatchError,
    EmptyGeneratorsError,
    NotInteriorError,
    NotPointedError,
)

logger = logging.getLogger(__name__)


class Region(str, Enum):
    """Position of a vector relative to K."""

    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class ConeContext:
    """
    Validated, immutable ordering cone.

    Attributes:
        dual_generators: (q, m) array of the generators d_j
        e: Interior direction in R^m
        normalized_generators: (q, m) array of w_j = d_j / <d_j, e>
    """

    dual_generators: np.ndarray
    e: np.ndarray
    normalized_generators: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return int(self.e.shape[0])

    @property
    def lipschitz_constant(self) -> float:
        """Lipschitz modulus of Psi_e in the Euclidean norm, max_j ||w_j||."""
        return float(np.max(np.linalg.norm(self.normalized_generators, axis=1)))

    def check_dim(self, y: np.ndarray) -> np.ndarray:
        """Return ``y`` as a float array, raising if it does not live in R^m."""
        y = np.asarray(y, dtype=float)
        if y.shape[-1:] != (self.dim,):
            raise DimensionMismatchError(
                f"Expected vectors of dimension {self.dim}, got shape {y.shape}"
            )
        return y

    def margins(self, y: np.ndarray) -> np.ndarray:
        """min_j <d_j, y> for a vector or a stack of vectors (last axis = m)."""
        y = self.check_dim(y)
        return np.min(y @ self.dual_generators.T, axis=-1)

    def to_dict(self) -> dict:
        return {
            "dual_generators": self.dual_generators.tolist(),
            "e": self.e.tolist(),
        }


def build_cone(
    dual_generators: Sequence[Sequence[float]],
    e: Sequence[float],
    tau_eq: float = 1e-9,
) -> ConeContext:
    """
    Validate the standing cone assumptions and build a context.

    Generators that are positive multiples of an earlier one are dropped.

    Args:
        dual_generators: Nonzero vectors d_1..d_q in R^m
        e: Candidate interior direction
        tau_eq: Tolerance for zero generators and duplicate directions

    Returns:
        Validated ConeContext

    Raises:
        EmptyGeneratorsError: If no generators are given
        DimensionMismatchError: If generators and e disagree in dimension
        NotInteriorError: If <d_j, e> <= 0 for some j
        NotPointedError: If the generators do not span R^m
    """
    if dual_generators is None or len(dual_generators) == 0:
        raise EmptyGeneratorsError("At least one dual generator is required")

    e_vec = np.asarray(e, dtype=float)
    if e_vec.ndim != 1 or e_vec.size == 0:
        raise DimensionMismatchError(f"e must be a nonempty vector, got shape {e_vec.shape}")

    rows = [np.asarray(d, dtype=float) for d in dual_generators]
    for index, row in enumerate(rows):
        if row.shape != e_vec.shape:
            raise DimensionMismatchError(
                f"Generator {index} has shape {row.shape}, expected {e_vec.shape}"
            )
    generators = np.vstack(rows)

    norms = np.linalg.norm(generators, axis=1)
    if np.any(norms <= tau_eq):
        raise EmptyGeneratorsError("Dual generators must be nonzero")

    scales = generators @ e_vec
    if np.any(scales <= 0):
        bad = [int(j) for j in np.flatnonzero(scales <= 0)]
        raise NotInteriorError(f"e is not an interior point of K: <d_j, e> <= 0 for j in {bad}")

    if np.linalg.matrix_rank(generators) < e_vec.size:
        raise NotPointedError(
            f"Dual generators span a subspace of dimension "
            f"{np.linalg.matrix_rank(generators)} < {e_vec.size}"
        )

    normalized = generators / scales[:, None]

    keep = []
    for j in range(normalized.shape[0]):
        if any(np.linalg.norm(normalized[j] - normalized[i]) <= tau_eq for i in keep):
            continue
        keep.append(j)
    if len(keep) < normalized.shape[0]:
        logger.warning(
            f"Dropped {normalized.shape[0] - len(keep)} duplicate dual generator direction(s)"
        )

    return ConeContext(
        dual_generators=_frozen(generators[keep]),
        e=_frozen(e_vec),
        normalized_generators=_frozen(normalized[keep]),
    )


def orthant(dim: int, e: Sequence[float] = None) -> ConeContext:
    """The nonnegative orthant R^m_+ with e = (1, ..., 1) unless given."""
    if dim < 1:
        raise DimensionMismatchError(f"Orthant dimension must be >= 1, got {dim}")
    direction = np.ones(dim) if e is None else e
    return build_cone(np.eye(dim), direction)


def classify(ctx: ConeContext, y: np.ndarray, tau_mem: float = 1e-9) -> Region:
    """
    Classify a vector against K with a tolerance band.

    Interior iff min_j <d_j, y> > tau_mem, Outside iff it is < -tau_mem,
    Boundary otherwise.
    """
    margin = float(ctx.margins(np.asarray(y, dtype=float).reshape(-1)))
    if margin > tau_mem:
        return Region.INTERIOR
    if margin < -tau_mem:
        return Region.OUTSIDE
    return Region.BOUNDARY


def in_cone(ctx: ConeContext, y: np.ndarray, tau_mem: float = 1e-9, strict: bool = False):
    """
    Vectorized membership: y in K (or int K when strict) within the band.

    Accepts a single vector or a stack; returns a bool or bool array.
    """
    margin = ctx.margins(y)
    return margin > tau_mem if strict else margin >= -tau_mem
