"""
Agreement between the scalarizing functional and the set relation on a grid.

On finite images f_r,xbar(x) < 0 exactly when F(x) is strictly below F(xbar),
so local minimality of xbar for the set problem and for f_r,xbar coincide.
"""

import logging
from typing import Any, Dict

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext
from ..core.setrel import Relation, set_less
from ..maps.scalfun import scalarization
from ..maps.setmap import SetMap
from ..utils.errors import PreconditionError
from ..variational.normals import Omega
from .base import DEFAULT_MAX_DIM, BaseCheck, CheckContext, GridSpec, GridVerdict, grid_points

logger = logging.getLogger(__name__)


def scalarization_consistency(
    setmap: SetMap,
    ctx: ConeContext,
    xbar,
    relation=Relation.LOWER,
    radius: float = 0.5,
    step: float = 1e-3,
    omega: Omega = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
    max_dim: int = DEFAULT_MAX_DIM,
) -> GridVerdict:
    """
    Check f_r,xbar(x) < -tau  <=>  F(x) strictly r-below F(xbar) at every grid point.

    ``details["minimal_on_grid"]`` reports whether f_r,xbar stayed >= -tau,
    i.e. whether xbar is a grid-local minimizer of the scalarized problem.
    """
    try:
        relation = Relation(relation)
    except ValueError:
        raise PreconditionError(f"Consistency is defined for relations l and u, got {relation!r}")
    omega = omega or Omega.free(setmap.n)
    xbar = omega.require(xbar, tol.tau_mem)
    anchor = setmap.evaluate(xbar, tol.tau_eq).points
    grid = GridSpec(center=xbar, radius=radius, step=step)

    checked, descents = 0, 0
    for x in grid_points(xbar, radius, step, omega, max_dim=max_dim, tau_mem=tol.tau_mem):
        checked += 1
        current = setmap.evaluate(x, tol.tau_eq).points
        value = scalarization(current, anchor, ctx, relation, tol.tau_act).value
        below = set_less(current, anchor, ctx, relation, strict=True, tau=tol.tau_mem)
        descent = value < -tol.tau_mem
        descents += descent
        if below != descent:
            evidence = {"x": x.tolist(), "value": value, "strictly_below": below, "relation": relation.value}
            logger.error(f"Scalarization disagrees with the {relation.value}-relation at {x.tolist()}")
            return GridVerdict(f"consistency-{relation.value}", False, evidence, grid, checked)

    details = {"minimal_on_grid": descents == 0, "descent_points": descents}
    return GridVerdict(f"consistency-{relation.value}", True, None, grid, checked, details)


class ConsistencyCheck(BaseCheck):
    """Scalarization versus set relation on a grid."""

    check_name = "consistency"

    def get_optional_params(self) -> list:
        return ["relation", "radius", "step", "max_dim"]

    def run(self, context: CheckContext, params: Dict[str, Any]) -> GridVerdict:
        return scalarization_consistency(
            context.setmap,
            context.cone,
            context.xbar,
            relation=params.get("relation") or Relation.LOWER,
            radius=params.get("radius", 0.5),
            step=params.get("step", 1e-3),
            omega=context.omega,
            tol=context.tol,
            max_dim=params.get("max_dim") or DEFAULT_MAX_DIM,
        )
