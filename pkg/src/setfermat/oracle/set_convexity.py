"""
Sampled r-convexity of the set-valued map itself:

    F(t x1 + (1 - t) x2)  <=(r)  t F(x1) + (1 - t) F(x2)
"""

import logging
from typing import Any, Dict

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext
from ..core.setrel import Relation, minkowski_combination, scalar_gap, set_less
from ..maps.setmap import SetMap, sample_ball
from ..utils.errors import PreconditionError
from .base import BaseCheck, CheckContext, GridVerdict

logger = logging.getLogger(__name__)


def sample_set_convexity(
    setmap: SetMap,
    ctx: ConeContext,
    xbar,
    relation=Relation.LOWER,
    radius: float = 0.5,
    trials: int = 100,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> GridVerdict:
    """Test the convexity inequality on random pairs and weights near xbar."""
    if trials < 1:
        raise PreconditionError("sample_set_convexity needs at least one trial")
    relation = Relation(relation)
    rng = np.random.default_rng(seed)
    points = sample_ball(xbar, radius, 2 * trials, rng)
    weights = rng.uniform(size=trials)

    for x1, x2, t in zip(points[0::2], points[1::2], weights):
        combined = minkowski_combination(
            [setmap.evaluate(x1, tol.tau_eq).points, setmap.evaluate(x2, tol.tau_eq).points],
            [t, 1.0 - t],
            tol.tau_eq,
        )
        image = setmap.evaluate(t * x1 + (1.0 - t) * x2, tol.tau_eq).points
        # Minkowski sums carry rounding of order the coordinates
        tau = max(tol.tau_mem, 1e-12 * (1.0 + float(np.max(np.abs(combined.points)))))
        if not set_less(image, combined, ctx, relation, tau=tau):
            evidence = {
                "x1": x1.tolist(),
                "x2": x2.tolist(),
                "t": float(t),
                "gap": scalar_gap(image, combined, ctx, relation),
            }
            return GridVerdict(f"set-convexity-{relation.value}", False, evidence, None, trials)
    return GridVerdict(f"set-convexity-{relation.value}", True, None, None, trials)


class SetConvexityCheck(BaseCheck):
    """r-convexity of F on random segments."""

    check_name = "set_convexity"

    def get_optional_params(self) -> list:
        return ["relation", "radius", "trials", "seed"]

    def run(self, context: CheckContext, params: Dict[str, Any]) -> GridVerdict:
        relation = params.get("relation") or Relation.LOWER
        try:
            relation = Relation(relation)
        except ValueError:
            raise PreconditionError(f"Set convexity is defined for relations l and u, got {relation!r}")
        return sample_set_convexity(
            context.setmap,
            context.cone,
            context.xbar,
            relation=relation,
            radius=params.get("radius", 0.5),
            trials=params.get("trials", 100),
            seed=params.get("seed", 0),
            tol=context.tol,
        )
