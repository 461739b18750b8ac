"""
Sampled Lipschitz modulus of f_l,xbar against the transferred bound rho * (1 + l_hat).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext
from ..maps.scalfun import f_lower
from ..maps.setmap import SetMap, estimate_lipschitz, sample_ball
from ..utils.errors import PreconditionError
from .base import BaseCheck, CheckContext, GridVerdict

logger = logging.getLogger(__name__)

SAMPLING_SLACK = 0.05


@dataclass(frozen=True)
class LipschitzBound:
    quotient_max: float
    bound: float
    holds: bool
    map_modulus: float

    def to_dict(self) -> dict:
        return {
            "quotient_max": self.quotient_max,
            "bound": self.bound,
            "holds": self.holds,
            "map_modulus": self.map_modulus,
        }


def sample_lipschitz_bound(
    setmap: SetMap,
    ctx: ConeContext,
    xbar,
    radius: float = 0.25,
    trials: int = 50,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> LipschitzBound:
    """
    Largest sampled difference quotient of f_l,xbar versus rho * (1 + l_hat).

    rho is the Lipschitz constant of Psi_e and l_hat the sampled modulus of F
    from :func:`estimate_lipschitz`, computed on the same seeded sample.
    """
    if trials < 2:
        raise PreconditionError("sample_lipschitz_bound needs at least two trials")
    points = sample_ball(xbar, radius, trials, np.random.default_rng(seed))
    values = [f_lower(setmap, ctx, xbar, x, tol).value for x in points]

    quotient = 0.0
    for i in range(trials):
        for k in range(i):
            gap = float(np.linalg.norm(points[i] - points[k]))
            if gap > 0:
                quotient = max(quotient, abs(values[i] - values[k]) / gap)

    modulus = estimate_lipschitz(setmap, xbar, radius, trials, seed=seed, tau_eq=tol.tau_eq)
    bound = ctx.lipschitz_constant * (1.0 + modulus)
    holds = quotient <= bound * (1.0 + SAMPLING_SLACK)
    logger.debug(f"Lipschitz quotient {quotient} against bound {bound}")
    return LipschitzBound(quotient_max=quotient, bound=bound, holds=holds, map_modulus=modulus)


class LipschitzCheck(BaseCheck):
    """Sampled modulus of f_l,xbar."""

    check_name = "lipschitz"

    def get_optional_params(self) -> list:
        return ["radius", "trials", "seed"]

    def run(self, context: CheckContext, params: Dict[str, Any]) -> GridVerdict:
        trials = params.get("trials", 50)
        result = sample_lipschitz_bound(
            context.setmap,
            context.cone,
            context.xbar,
            radius=params.get("radius", 0.25),
            trials=trials,
            seed=params.get("seed", 0),
            tol=context.tol,
        )
        evidence = None if result.holds else result.to_dict()
        return GridVerdict("lipschitz", result.holds, evidence, None, trials, result.to_dict())
