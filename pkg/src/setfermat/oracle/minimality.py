"""
Grid test of local minimality of xbar, and the scalar characterizations of
WMin and WMax used as an independent cross-check.
"""

import logging
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext, in_cone
from ..core.scalarize import psi
from ..core.setrel import MinimalKind, PointSet, Relation, minimal_indices, scalar_gap, set_less
from ..maps.setmap import SetMap
from ..utils.errors import PreconditionError
from ..variational.normals import Omega
from .base import DEFAULT_MAX_DIM, BaseCheck, CheckContext, GridSpec, GridVerdict, grid_points

logger = logging.getLogger(__name__)


class OracleRelation(str, Enum):
    """Minimality notions the grid oracle can test."""

    LOWER = "l"
    UPPER = "u"
    LOWER_NONSTRICT = "l-nonstrict"
    UPPER_NONSTRICT = "u-nonstrict"
    VECTOR_WEAK = "vector-weak"
    VECTOR_WEAK_MAX = "vector-weak-max"

    @property
    def set_relation(self) -> Relation:
        return Relation.UPPER if self in (OracleRelation.UPPER, OracleRelation.UPPER_NONSTRICT) else Relation.LOWER


def _set_violation(
    current: PointSet, anchor: PointSet, ctx: ConeContext, relation: OracleRelation, tau: float
) -> Optional[Dict[str, Any]]:
    """Evidence that F(x) beats F(xbar) in the requested sense, or None."""
    strict = relation in (OracleRelation.LOWER, OracleRelation.UPPER)
    if not set_less(current, anchor, ctx, relation.set_relation, strict=strict, tau=tau):
        return None
    return {
        "relation": relation.value,
        "image": current.to_list(),
        "gap": scalar_gap(current, anchor, ctx, relation.set_relation),
    }


def local_weak_minimality_grid(
    setmap: SetMap,
    ctx: ConeContext,
    xbar,
    omega: Omega = None,
    relation=OracleRelation.LOWER,
    radius: float = 0.5,
    step: float = 1e-3,
    tol: Tolerances = DEFAULT_TOLERANCES,
    max_dim: int = DEFAULT_MAX_DIM,
) -> GridVerdict:
    """
    Search the grid around xbar for a point beating it.

    l / u: F(x) strictly below F(xbar) in the set relation (int K).
    l-nonstrict / u-nonstrict: F(x) below F(xbar) in the non-strict relation.
    vector-weak: every weakly minimal ybar in F(xbar) is strictly dominated by
    some y in F(x) for some grid x. vector-weak-max is the mirror for WMax.

    Returns:
        GridVerdict; the counterexample is the first violation in lexicographic
        grid order (for the vector notions, one (ybar, x, y) triple per anchor)

    Raises:
        DimensionTooLargeError: If n exceeds ``max_dim``
        DomainError: Propagated from evaluation
    """
    try:
        relation = OracleRelation(relation)
    except ValueError:
        raise PreconditionError(f"Unknown minimality notion {relation!r}")
    omega = omega or Omega.free(setmap.n)
    xbar = omega.require(xbar, tol.tau_mem)
    anchor = setmap.evaluate(xbar, tol.tau_eq).points
    grid = GridSpec(center=xbar, radius=radius, step=step)
    points = grid_points(xbar, radius, step, omega, max_dim=max_dim, tau_mem=tol.tau_mem)

    if relation in (OracleRelation.VECTOR_WEAK, OracleRelation.VECTOR_WEAK_MAX):
        return _vector_weak(setmap, ctx, anchor, points, relation, grid, tol)

    checked = 0
    for x in points:
        checked += 1
        evidence = _set_violation(setmap.evaluate(x, tol.tau_eq).points, anchor, ctx, relation, tol.tau_mem)
        if evidence is not None:
            evidence["x"] = x.tolist()
            logger.info(f"Grid violation of {relation.value}-minimality at {x.tolist()}")
            return GridVerdict(relation.value, False, evidence, grid, checked)
    logger.debug(f"{relation.value}-minimality: {checked} grid points, no violation")
    return GridVerdict(relation.value, True, None, grid, checked)


def _vector_weak(setmap, ctx, anchor: PointSet, points, relation, grid, tol) -> GridVerdict:
    kind = MinimalKind.WMIN if relation is OracleRelation.VECTOR_WEAK else MinimalKind.WMAX
    sign = 1.0 if kind is MinimalKind.WMIN else -1.0
    anchors = {i: anchor.points[i] for i in minimal_indices(anchor, ctx, kind, tol.tau_mem)}
    beaten: Dict[int, Dict[str, Any]] = {}

    checked = 0
    for x in points:
        checked += 1
        image = setmap.evaluate(x, tol.tau_eq).points
        for i, ybar in anchors.items():
            if i in beaten:
                continue
            # dominated[k]: sign * (ybar - y_k) in int K
            dominated = in_cone(ctx, sign * (ybar - image.points), tol.tau_mem, strict=True)
            if np.any(dominated):
                y = image.points[int(np.argmax(dominated))]
                beaten[i] = {"anchor": ybar.tolist(), "x": x.tolist(), "y": y.tolist()}
        if len(beaten) == len(anchors):
            evidence = {"relation": relation.value, "violations": [beaten[i] for i in sorted(beaten)]}
            return GridVerdict(relation.value, False, evidence, grid, checked)
    details = {"unbeaten_anchors": len(anchors) - len(beaten)}
    return GridVerdict(relation.value, True, None, grid, checked, details)


def _scalar_extremal(A: PointSet, ctx: ConeContext, kind: MinimalKind, tau: float) -> List[int]:
    # values[i, k] = Psi_e(A_i - A_k)
    values = np.atleast_2d(psi(ctx, A.points[:, None, :] - A.points[None, :, :]))
    if kind is MinimalKind.WMIN:
        return [int(i) for i in np.flatnonzero(np.min(values, axis=0) >= -tau)]
    return [int(i) for i in np.flatnonzero(np.min(values, axis=1) >= -tau)]


def wmin_cross_check(A: PointSet, ctx: ConeContext, tau: float = 1e-9) -> bool:
    """True iff {ybar : min_y Psi_e(y - ybar) >= -tau} equals the pairwise WMin filter."""
    return _scalar_extremal(A, ctx, MinimalKind.WMIN, tau) == minimal_indices(A, ctx, MinimalKind.WMIN, tau)


def wmax_cross_check(A: PointSet, ctx: ConeContext, tau: float = 1e-9) -> bool:
    """True iff {y : min_ybar Psi_e(y - ybar) >= -tau} equals the pairwise WMax filter."""
    return _scalar_extremal(A, ctx, MinimalKind.WMAX, tau) == minimal_indices(A, ctx, MinimalKind.WMAX, tau)


class MinimalityCheck(BaseCheck):
    """Local minimality of xbar on a grid."""

    check_name = "minimality"

    def get_optional_params(self) -> list:
        return ["relation", "radius", "step", "max_dim"]

    def run(self, context: CheckContext, params: Dict[str, Any]) -> GridVerdict:
        self.validate_params(params)
        return local_weak_minimality_grid(
            context.setmap,
            context.cone,
            context.xbar,
            context.omega,
            relation=params.get("relation") or OracleRelation.LOWER,
            radius=params.get("radius", 0.5),
            step=params.get("step", 1e-3),
            tol=context.tol,
            max_dim=params.get("max_dim") or DEFAULT_MAX_DIM,
        )
