"""
Sampling descent toward r-stationary points.

Each iteration re-anchors the merit function f_r,x_k at the current iterate.
A candidate with f_r,x_k(candidate) < 0 has an image strictly r-below F(x_k),
so every accepted step is a strict set descent. No convergence guarantee is
claimed; the loop stops on a small stationarity residual, a small step or the
iteration cap.
"""

import csv
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext
from ..core.setrel import Relation, set_less
from ..maps.scalfun import f_relation
from ..maps.setmap import SetMap
from ..utils.errors import PreconditionError
from ..variational.normals import Omega
from ..variational.stationarity import StationarityCertificate, certify

logger = logging.getLogger(__name__)


class Termination(str, Enum):
    RESIDUAL_BELOW_TOL = "ResidualBelowTol"
    STEP_BELOW_TOL = "StepBelowTol"
    MAX_ITERS = "MaxIters"


@dataclass(frozen=True)
class DescentParams:
    """
    Loop parameters. ``step0`` of None means 0.1 * (1 + ||x0||).
    """

    step0: Optional[float] = None
    sigma: float = 0.1
    shrink: float = 0.5
    tol_step: float = 1e-8
    tol_res: float = 1e-7
    max_iters: int = 200
    directions_per_iter: int = 2
    seed: int = 0

    def validate(self) -> None:
        if self.step0 is not None and not self.step0 > 0:
            raise PreconditionError("step0 must be positive")
        if not 0 < self.shrink < 1:
            raise PreconditionError("shrink must lie in (0, 1)")
        if not (self.sigma > 0 and self.tol_step > 0 and self.tol_res > 0):
            raise PreconditionError("sigma, tol_step and tol_res must be positive")
        if self.max_iters < 1 or self.directions_per_iter < 0:
            raise PreconditionError("max_iters must be >= 1 and directions_per_iter >= 0")


@dataclass(frozen=True)
class IterateRecord:
    k: int
    x: np.ndarray
    step: float
    merit: Optional[float]
    residual: float
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "x": self.x.tolist(),
            "step": self.step,
            "merit": self.merit,
            "residual": self.residual,
            "accepted": self.accepted,
        }


@dataclass(frozen=True)
class DescentTrace:
    relation: Relation
    iterates: List[IterateRecord]
    termination: Termination
    final_x: np.ndarray
    final_certificate: StationarityCertificate
    params: DescentParams = field(default_factory=DescentParams)

    @property
    def accepted(self) -> List[IterateRecord]:
        return [record for record in self.iterates if record.accepted]

    def to_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "termination": self.termination.value,
            "final_x": self.final_x.tolist(),
            "iterations": len(self.iterates),
            "accepted_steps": len(self.accepted),
            "iterates": [record.to_dict() for record in self.iterates],
            "final_certificate": self.final_certificate.to_dict(),
        }


def _candidates(x: np.ndarray, step: float, count: int, omega: Omega, rng: np.random.Generator) -> List[np.ndarray]:
    directions = []
    for i in range(x.size):
        unit = np.zeros(x.size)
        unit[i] = 1.0
        directions.extend([unit, -unit])
    for _ in range(count):
        u = rng.normal(size=x.size)
        directions.append(u / np.linalg.norm(u))

    candidates = []
    for direction in directions:
        candidate = omega.project(x + step * direction)
        if not np.array_equal(candidate, x):
            candidates.append(candidate)
    return candidates


def descend(
    setmap: SetMap,
    ctx: ConeContext,
    x0,
    omega: Omega = None,
    relation=Relation.LOWER,
    params: DescentParams = DescentParams(),
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DescentTrace:
    """
    Run the descent loop from x0.

    Each iteration first computes the stationarity residual at x_k, then
    tests the step size, then evaluates f_r,x_k on x_k +- step * e_i and on
    ``directions_per_iter`` random unit directions, all clamped to Omega. The
    best candidate is accepted if its merit is below -sigma * step; otherwise
    the step shrinks.

    Raises:
        NotInOmegaError: If x0 is infeasible
        PreconditionError: On invalid parameters
        DomainError: Propagated from evaluation
    """
    params.validate()
    relation = Relation(relation)
    omega = omega or Omega.free(setmap.n)
    x = omega.require(x0, tol.tau_mem)
    step = params.step0 if params.step0 is not None else 0.1 * (1.0 + float(np.linalg.norm(x)))
    rng = np.random.default_rng(params.seed)

    iterates: List[IterateRecord] = []
    termination = Termination.MAX_ITERS
    certificate = None
    for k in range(params.max_iters):
        certificate = certify(setmap, ctx, x, relation.value, omega, tol)
        if certificate.residual <= params.tol_res:
            termination = Termination.RESIDUAL_BELOW_TOL
            break
        if step < params.tol_step:
            termination = Termination.STEP_BELOW_TOL
            break

        best, best_merit = None, None
        for candidate in _candidates(x, step, params.directions_per_iter, omega, rng):
            merit = f_relation(setmap, ctx, x, candidate, relation, tol).value
            if best_merit is None or merit < best_merit:
                best, best_merit = candidate, merit

        accepted = best_merit is not None and best_merit < -params.sigma * step
        iterates.append(IterateRecord(k, x, step, best_merit, certificate.residual, accepted))
        logger.debug(f"k={k} x={x.tolist()} step={step} merit={best_merit} accepted={accepted}")
        if accepted:
            x = best
        else:
            step *= params.shrink
    else:
        certificate = certify(setmap, ctx, x, relation.value, omega, tol)

    logger.info(f"Descent stopped after {len(iterates)} iterations: {termination.value}")
    return DescentTrace(
        relation=relation,
        iterates=iterates,
        termination=termination,
        final_x=x,
        final_certificate=certificate,
        params=params,
    )


def is_monotone(trace: DescentTrace, setmap: SetMap, ctx: ConeContext, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff every accepted step strictly r-dominates its predecessor."""
    xs = [record.x for record in trace.iterates] + [trace.final_x]
    for record, following in zip(trace.iterates, xs[1:]):
        if not record.accepted:
            continue
        before = setmap.evaluate(record.x, tol.tau_eq).points
        after = setmap.evaluate(following, tol.tau_eq).points
        if not set_less(after, before, ctx, trace.relation, strict=True, tau=tol.tau_mem):
            return False
    return True


def write_csv(trace: DescentTrace, path: Union[str, Path]) -> Path:
    """Write one row per iteration: k, x_1..x_n, step, merit, residual, accepted."""
    path = Path(path).expanduser()
    n = trace.final_x.size
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["k"] + [f"x{i + 1}" for i in range(n)] + ["step", "merit", "residual", "accepted"])
        for record in trace.iterates:
            merit = "" if record.merit is None else repr(record.merit)
            writer.writerow(
                [record.k]
                + [repr(float(c)) for c in record.x]
                + [repr(record.step), merit, repr(record.residual), int(record.accepted)]
            )
    logger.info(f"Wrote descent trace to {path}")
    return path
