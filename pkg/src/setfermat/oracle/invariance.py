"""
Invariance of the scalarizations under adding dominated components.

With k in K, appending f_i + k to the family changes neither g_l nor f_l;
appending f_i - k changes neither g_u nor f_u.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext, Region, classify
from ..maps.scalfun import f_lower, f_upper, g_lower, g_upper
from ..maps.setmap import SetMap, sample_ball
from ..utils.errors import PreconditionError
from .base import BaseCheck, CheckContext, GridVerdict

logger = logging.getLogger(__name__)

INVARIANCE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class InvarianceReport:
    holds: bool
    max_deviation: float
    probes: int

    def __bool__(self) -> bool:
        return self.holds


def invariance_check(
    setmap: SetMap,
    ctx: ConeContext,
    xbar,
    k,
    probes: int = 100,
    radius: float = 0.5,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> InvarianceReport:
    """
    Compare g_l, f_l (map vs map + k) and g_u, f_u (map vs map - k) at random probes.

    Probe points x are drawn from the ball around xbar; the g probes use
    z = y + u with y in F(xbar) and u uniform in the unit cube.

    Raises:
        PreconditionError: If k is outside K
    """
    k = ctx.check_dim(np.asarray(k, dtype=float).reshape(-1))
    if classify(ctx, k, tol.tau_mem) is Region.OUTSIDE:
        raise PreconditionError(f"Shift {k.tolist()} is not in the ordering cone")

    raised = setmap.augmented(k)
    lowered = setmap.augmented(-k)
    rng = np.random.default_rng(seed)
    xs = sample_ball(xbar, radius, probes, rng)
    anchor_points = setmap.evaluate(xbar, tol.tau_eq).points.points

    deviation = 0.0
    for x in xs:
        z = anchor_points[rng.integers(len(anchor_points))] + rng.uniform(-1.0, 1.0, size=setmap.m)
        pairs = [
            (g_lower(setmap, ctx, x, z, tol).value, g_lower(raised, ctx, x, z, tol).value),
            (f_lower(setmap, ctx, xbar, x, tol).value, f_lower(raised, ctx, xbar, x, tol).value),
            (g_upper(setmap, ctx, xbar, z, tol).value, g_upper(lowered, ctx, xbar, z, tol).value),
            (f_upper(setmap, ctx, xbar, x, tol).value, f_upper(lowered, ctx, xbar, x, tol).value),
        ]
        deviation = max(deviation, max(abs(a - b) for a, b in pairs))

    holds = deviation <= INVARIANCE_TOLERANCE
    if not holds:
        logger.warning(f"Augmentation by {k.tolist()} moved a scalarization by {deviation}")
    return InvarianceReport(holds=holds, max_deviation=deviation, probes=probes)


class InvarianceCheck(BaseCheck):
    """Invariance under dominated components."""

    check_name = "invariance"

    def get_required_params(self) -> list:
        return ["k"]

    def get_optional_params(self) -> list:
        return ["probes", "radius", "seed"]

    def run(self, context: CheckContext, params: Dict[str, Any]) -> GridVerdict:
        self.validate_params(params)
        report = invariance_check(
            context.setmap,
            context.cone,
            context.xbar,
            params["k"],
            probes=params.get("probes", 100),
            radius=params.get("radius", 0.5),
            seed=params.get("seed", 0),
            tol=context.tol,
        )
        details = {"max_deviation": report.max_deviation, "k": list(params["k"])}
        evidence = None if report.holds else details
        return GridVerdict("invariance", report.holds, evidence, None, report.probes, details)
