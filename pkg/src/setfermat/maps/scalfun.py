"""
Scalarizing functionals of a set-valued map and their solution sets.

    g_l(x, z)        = min_{y in F(x)}     Psi_e(y - z)
    g_u,xbar(y)      = min_{ybar in F(xbar)} Psi_e(y - ybar)
    f_l,xbar(x)      = max_{ybar in F(xbar)} g_l(x, ybar)
    f_u,xbar(x)      = max_{y in F(x)}     g_u,xbar(y)

Images are finite, so every inf/sup is a min/max over a matrix of Psi_e values.
Witness sets keep every index within the relative tau_act band of the optimum.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext
from ..core.scalarize import active_threshold, psi
from ..core.setrel import PointSet, Relation
from .setmap import SetMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InnerResult:
    """Value of an inner minimization and the indices attaining it."""

    value: float
    argmin: Tuple[int, ...]
    points: np.ndarray

    def to_dict(self) -> dict:
        return {"value": self.value, "argmin": list(self.argmin), "points": self.points.tolist()}


@dataclass(frozen=True)
class ScalarizationResult:
    """
    Value of f_l,xbar or f_u,xbar with its solution sets.

    Attributes:
        value: The max-min value
        outer_set: Set the outer maximum ranges over (F(xbar) for l, F(x) for u)
        inner_set: Set the inner minimum ranges over (F(x) for l, F(xbar) for u)
        outer_witnesses: Indices into outer_set attaining the maximum
        inner_witnesses: For each outer witness, indices into inner_set attaining its minimum
        tolerance: tau_act used for ties
    """

    value: float
    outer_set: PointSet
    inner_set: PointSet
    outer_witnesses: Tuple[int, ...]
    inner_witnesses: Tuple[Tuple[int, ...], ...]
    tolerance: float

    def witness_pairs(self) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        """(outer point, inner point) for every witness combination."""
        for outer, inners in zip(self.outer_witnesses, self.inner_witnesses):
            for inner in inners:
                yield self.outer_set.points[outer], self.inner_set.points[inner]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "outer_witnesses": [self.outer_set.points[i].tolist() for i in self.outer_witnesses],
            "inner_witnesses": [
                [self.inner_set.points[k].tolist() for k in inners] for inners in self.inner_witnesses
            ],
            "tolerance": self.tolerance,
        }


def _argmin(values: np.ndarray, tau_act: float) -> Tuple[float, Tuple[int, ...]]:
    best = float(np.min(values))
    ties = np.flatnonzero(values <= best + active_threshold(best, tau_act))
    return best, tuple(int(i) for i in ties)


def _argmax(values: np.ndarray, tau_act: float) -> Tuple[float, Tuple[int, ...]]:
    best = float(np.max(values))
    ties = np.flatnonzero(values >= best - active_threshold(best, tau_act))
    return best, tuple(int(i) for i in ties)


def lower_inner(image: PointSet, z, ctx: ConeContext, tau_act: float = 1e-8) -> InnerResult:
    """min_{y in image} Psi_e(y - z) with its argmin set."""
    values = psi(ctx, image.points - ctx.check_dim(z))
    value, argmin = _argmin(np.atleast_1d(values), tau_act)
    return InnerResult(value=value, argmin=argmin, points=image.points[list(argmin)])


def upper_inner(anchor: PointSet, y, ctx: ConeContext, tau_act: float = 1e-8) -> InnerResult:
    """min_{ybar in anchor} Psi_e(y - ybar) with its argmin set."""
    values = psi(ctx, ctx.check_dim(y) - anchor.points)
    value, argmin = _argmin(np.atleast_1d(values), tau_act)
    return InnerResult(value=value, argmin=argmin, points=anchor.points[list(argmin)])


def _psi_table(ctx: ConeContext, current: PointSet, anchor: PointSet) -> np.ndarray:
    """table[i, k] = Psi_e(current_i - anchor_k)."""
    ctx.check_dim(current.points)
    ctx.check_dim(anchor.points)
    return np.atleast_2d(psi(ctx, current.points[:, None, :] - anchor.points[None, :, :]))


def lower_scalarization(
    current: PointSet, anchor: PointSet, ctx: ConeContext, tau_act: float = 1e-8
) -> ScalarizationResult:
    """max_{ybar in anchor} min_{y in current} Psi_e(y - ybar)."""
    table = _psi_table(ctx, current, anchor)
    inner = [_argmin(table[:, k], tau_act) for k in range(len(anchor))]
    value, outer = _argmax(np.array([v for v, _ in inner]), tau_act)
    return ScalarizationResult(
        value=value,
        outer_set=anchor,
        inner_set=current,
        outer_witnesses=outer,
        inner_witnesses=tuple(inner[k][1] for k in outer),
        tolerance=tau_act,
    )


def upper_scalarization(
    current: PointSet, anchor: PointSet, ctx: ConeContext, tau_act: float = 1e-8
) -> ScalarizationResult:
    """max_{y in current} min_{ybar in anchor} Psi_e(y - ybar)."""
    table = _psi_table(ctx, current, anchor)
    inner = [_argmin(table[i, :], tau_act) for i in range(len(current))]
    value, outer = _argmax(np.array([v for v, _ in inner]), tau_act)
    return ScalarizationResult(
        value=value,
        outer_set=current,
        inner_set=anchor,
        outer_witnesses=outer,
        inner_witnesses=tuple(inner[i][1] for i in outer),
        tolerance=tau_act,
    )


def scalarization(
    current: PointSet, anchor: PointSet, ctx: ConeContext, relation: Relation, tau_act: float = 1e-8
) -> ScalarizationResult:
    """Dispatch on the relation."""
    if Relation(relation) is Relation.LOWER:
        return lower_scalarization(current, anchor, ctx, tau_act)
    return upper_scalarization(current, anchor, ctx, tau_act)


def g_lower(setmap: SetMap, ctx: ConeContext, x, z, tol: Tolerances = DEFAULT_TOLERANCES) -> InnerResult:
    """g_l(x, z); the argmin is the solution set S^{l,1}(x, z)."""
    return lower_inner(setmap.evaluate(x, tol.tau_eq).points, z, ctx, tol.tau_act)


def g_upper(setmap: SetMap, ctx: ConeContext, xbar, y, tol: Tolerances = DEFAULT_TOLERANCES) -> InnerResult:
    """g_u,xbar(y); the argmin is the solution set S^{u,1}(y)."""
    return upper_inner(setmap.evaluate(xbar, tol.tau_eq).points, y, ctx, tol.tau_act)


def f_lower(setmap: SetMap, ctx: ConeContext, xbar, x, tol: Tolerances = DEFAULT_TOLERANCES) -> ScalarizationResult:
    """f_l,xbar(x); outer witnesses form S^{l,2}(x) within F(xbar)."""
    result = lower_scalarization(
        setmap.evaluate(x, tol.tau_eq).points, setmap.evaluate(xbar, tol.tau_eq).points, ctx, tol.tau_act
    )
    logger.debug(f"f_l at x={np.asarray(x).tolist()} anchored at {np.asarray(xbar).tolist()}: {result.value}")
    return result


def f_upper(setmap: SetMap, ctx: ConeContext, xbar, x, tol: Tolerances = DEFAULT_TOLERANCES) -> ScalarizationResult:
    """f_u,xbar(x); outer witnesses form S^{u,2}(x) within F(x)."""
    result = upper_scalarization(
        setmap.evaluate(x, tol.tau_eq).points, setmap.evaluate(xbar, tol.tau_eq).points, ctx, tol.tau_act
    )
    logger.debug(f"f_u at x={np.asarray(x).tolist()} anchored at {np.asarray(xbar).tolist()}: {result.value}")
    return result


def f_relation(
    setmap: SetMap, ctx: ConeContext, xbar, x, relation: Relation, tol: Tolerances = DEFAULT_TOLERANCES
) -> ScalarizationResult:
    """f_r,xbar(x) for r in {l, u}."""
    if Relation(relation) is Relation.LOWER:
        return f_lower(setmap, ctx, xbar, x, tol)
    return f_upper(setmap, ctx, xbar, x, tol)
