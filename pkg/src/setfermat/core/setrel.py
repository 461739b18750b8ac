"""
Finite point sets and the set relations between them.

A <=(l) B  iff  B is contained in A + K (every point of B is dominated by A)
A <=(u) B  iff  A is contained in B - K (every point of A lies below B)

Strict variants use int K. All membership decisions go through the cone's
tolerance band so the boundary semantics match classify().
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .cone import ConeContext, in_cone
from .scalarize import psi

logger = logging.getLogger(__name__)


class Relation(str, Enum):
    """Set relation selector."""

    LOWER = "l"
    UPPER = "u"


class MinimalKind(str, Enum):
    """Kinds of extremal elements of a finite set."""

    MIN = "Min"
    WMIN = "WMin"
    MAX = "Max"
    WMAX = "WMax"
    SMIN = "SMin"


def deduplicate(points: np.ndarray, tau_eq: float) -> Tuple[np.ndarray, List[Tuple[int, ...]]]:
    """
    Merge points closer than ``tau_eq`` (first occurrence is the representative).

    Returns:
        (unique points, for each unique point the input indices merged into it)
    """
    representatives: List[int] = []
    groups: List[List[int]] = []
    for index, point in enumerate(points):
        for slot, rep in enumerate(representatives):
            if np.linalg.norm(point - points[rep]) <= tau_eq:
                groups[slot].append(index)
                break
        else:
            representatives.append(index)
            groups.append([index])
    return points[representatives], [tuple(g) for g in groups]


@dataclass(frozen=True)
class PointSet:
    """
    Nonempty finite set of points in R^m, pairwise farther apart than tau_eq.

    Use :meth:`from_points` to build one; it deduplicates.
    """

    points: np.ndarray

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]], tau_eq: float = 1e-9) -> "PointSet":
        array = np.atleast_2d(np.asarray(points, dtype=float))
        if array.size == 0:
            raise ValueError("A PointSet must contain at least one point")
        unique, _ = deduplicate(array, tau_eq)
        unique.setflags(write=False)
        return cls(points=unique)

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.points)

    def index_of(self, y: np.ndarray, tau_eq: float = 1e-9) -> Optional[int]:
        """Index of the point within ``tau_eq`` of ``y``, or None."""
        distances = np.linalg.norm(self.points - np.asarray(y, dtype=float), axis=1)
        index = int(np.argmin(distances))
        return index if distances[index] <= tau_eq else None

    def subset(self, indices: Sequence[int]) -> "PointSet":
        return PointSet(points=self.points[list(indices)])

    def to_list(self) -> List[List[float]]:
        return self.points.tolist()


def _pairwise(ctx: ConeContext, left: PointSet, right: PointSet) -> np.ndarray:
    """(|left|, |right|, m) array of left_i - right_k, dimension-checked."""
    ctx.check_dim(left.points)
    ctx.check_dim(right.points)
    return left.points[:, None, :] - right.points[None, :, :]


def lower_less(A: PointSet, B: PointSet, ctx: ConeContext, strict: bool = False, tau: float = 1e-9) -> bool:
    """A <=(l) B: every b in B has some a in A with b - a in K (int K when strict)."""
    diffs = _pairwise(ctx, B, A)
    covered = in_cone(ctx, diffs, tau, strict=strict)
    return bool(np.all(np.any(covered, axis=1)))


def upper_less(A: PointSet, B: PointSet, ctx: ConeContext, strict: bool = False, tau: float = 1e-9) -> bool:
    """A <=(u) B: every a in A has some b in B with b - a in K (int K when strict)."""
    diffs = _pairwise(ctx, B, A)
    covered = in_cone(ctx, diffs, tau, strict=strict)
    return bool(np.all(np.any(covered, axis=0)))


def set_less(
    A: PointSet, B: PointSet, ctx: ConeContext, relation: Relation, strict: bool = False, tau: float = 1e-9
) -> bool:
    """Dispatch to :func:`lower_less` or :func:`upper_less`."""
    if Relation(relation) is Relation.LOWER:
        return lower_less(A, B, ctx, strict=strict, tau=tau)
    return upper_less(A, B, ctx, strict=strict, tau=tau)


def set_equivalent(
    A: PointSet, B: PointSet, ctx: ConeContext, relation: Relation = Relation.LOWER, tau: float = 1e-9
) -> bool:
    """Mutual relation test: A <= B and B <= A for the chosen relation."""
    return set_less(A, B, ctx, relation, tau=tau) and set_less(B, A, ctx, relation, tau=tau)


def _extremal_mask(A: PointSet, ctx: ConeContext, kind: MinimalKind, tau: float) -> np.ndarray:
    kind = MinimalKind(kind)
    # diffs[i, k] = A_i - A_k
    diffs = _pairwise(ctx, A, A)
    off_diagonal = ~np.eye(len(A), dtype=bool)

    if kind is MinimalKind.WMIN:
        return ~np.any(in_cone(ctx, diffs, tau, strict=True), axis=1)
    if kind is MinimalKind.MIN:
        return ~np.any(in_cone(ctx, diffs, tau) & off_diagonal, axis=1)
    if kind is MinimalKind.WMAX:
        return ~np.any(in_cone(ctx, -diffs, tau, strict=True), axis=1)
    if kind is MinimalKind.MAX:
        return ~np.any(in_cone(ctx, -diffs, tau) & off_diagonal, axis=1)
    return np.all(in_cone(ctx, -diffs, tau), axis=1)


def minimal_elements(A: PointSet, ctx: ConeContext, kind: MinimalKind, tau: float = 1e-9) -> PointSet:
    """
    Filter the extremal elements of a finite set by pairwise comparison.

    WMin: no a with y - a in int K.   Min: no a != y with y - a in K.
    WMax: no a with a - y in int K.   Max: no a != y with a - y in K.
    SMin: a - y in K for every a (may be empty).

    Returns:
        PointSet of the surviving points in input order; for SMin the result
        can have zero rows.
    """
    keep = _extremal_mask(A, ctx, kind, tau)
    return PointSet(points=A.points[keep])


def minimal_indices(A: PointSet, ctx: ConeContext, kind: MinimalKind, tau: float = 1e-9) -> List[int]:
    """Indices into ``A`` of the elements kept by :func:`minimal_elements`."""
    return [int(i) for i in np.flatnonzero(_extremal_mask(A, ctx, kind, tau))]


def scalar_gap(A: PointSet, B: PointSet, ctx: ConeContext, relation: Relation = Relation.LOWER) -> float:
    """
    Exact max-min scalarization of a set relation on finite sets.

    l: max_{b in B} min_{a in A} Psi_e(a - b)
    u: max_{a in A} min_{b in B} Psi_e(a - b)

    A <=(r) B implies a gap <= 0; on finite sets the converse holds too.
    """
    values = psi(ctx, _pairwise(ctx, A, B))  # values[i, k] = Psi_e(A_i - B_k)
    if Relation(relation) is Relation.LOWER:
        return float(np.max(np.min(values, axis=0)))
    return float(np.max(np.min(values, axis=1)))


def minkowski_combination(sets: Sequence[PointSet], weights: Sequence[float], tau_eq: float = 1e-9) -> PointSet:
    """The finite Minkowski combination sum_i weights[i] * sets[i]."""
    if len(sets) != len(weights) or not sets:
        raise ValueError("minkowski_combination needs one weight per set")
    points = [
        sum(w * p for w, p in zip(weights, combo))
        for combo in itertools.product(*(s.points for s in sets))
    ]
    return PointSet.from_points(points, tau_eq)
