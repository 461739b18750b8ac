"""
Sampled midpoint-convexity test of x -> f_l,xbar(x).
"""

import logging
from typing import Any, Dict

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext
from ..maps.scalfun import f_lower
from ..maps.setmap import SetMap, sample_ball
from ..utils.errors import PreconditionError
from .base import BaseCheck, CheckContext, GridVerdict

logger = logging.getLogger(__name__)

CONVEXITY_SLACK = 1e-10


def sample_convexity(
    setmap: SetMap,
    ctx: ConeContext,
    xbar,
    radius: float = 0.5,
    trials: int = 100,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> GridVerdict:
    """
    Check f(mid) <= (f(x1) + f(x2)) / 2 + 1e-10 on random pairs in the ball around xbar.

    Convexity is guaranteed only when F is l-convex, which the check can
    certify for single-component affine maps. Otherwise the verdict is
    informational and ``details["hypothesis_verified"]`` is False.
    """
    if trials < 1:
        raise PreconditionError("sample_convexity needs at least one trial")
    hypothesis = setmap.p == 1 and setmap.is_affine
    points = sample_ball(xbar, radius, 2 * trials, np.random.default_rng(seed))

    def f(x) -> float:
        return f_lower(setmap, ctx, xbar, x, tol).value

    violations = 0
    first = None
    for x1, x2 in zip(points[0::2], points[1::2]):
        mid = 0.5 * (x1 + x2)
        excess = f(mid) - 0.5 * (f(x1) + f(x2))
        if excess > CONVEXITY_SLACK:
            violations += 1
            if first is None:
                first = {"x1": x1.tolist(), "x2": x2.tolist(), "excess": excess}

    if violations and hypothesis:
        logger.error(f"Midpoint convexity violated {violations} times for an affine single-component map")
    details = {"hypothesis_verified": hypothesis, "violations": violations, "radius": radius, "seed": seed}
    return GridVerdict("convexity", first is None, first, None, trials, details)


class ConvexityCheck(BaseCheck):
    """Midpoint convexity of f_l,xbar."""

    check_name = "convexity"

    def get_optional_params(self) -> list:
        return ["radius", "trials", "seed"]

    def run(self, context: CheckContext, params: Dict[str, Any]) -> GridVerdict:
        return sample_convexity(
            context.setmap,
            context.cone,
            context.xbar,
            radius=params.get("radius", 0.5),
            trials=params.get("trials", 100),
            seed=params.get("seed", 0),
            tol=context.tol,
        )
