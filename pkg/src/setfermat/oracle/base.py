"""
Base check class and shared grid machinery for the brute-force oracle.
"""

import itertools
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext
from ..maps.setmap import SetMap
from ..utils.errors import DimensionTooLargeError, PreconditionError
from ..variational.normals import Omega

logger = logging.getLogger(__name__)

# Grid verdicts never prove minimality
CAVEAT = "no violation on this grid"

DEFAULT_MAX_DIM = 3
DEFAULT_MAX_POINTS = 2_000_000


@dataclass(frozen=True)
class GridSpec:
    center: np.ndarray
    radius: float
    step: float

    def to_dict(self) -> dict:
        return {"center": self.center.tolist(), "radius": self.radius, "step": self.step}


@dataclass(frozen=True)
class GridVerdict:
    """
    Outcome of an oracle check.

    Attributes:
        property: Name of the checked property
        holds: False iff a counterexample was found
        counterexample: Evidence replaying the violation, present iff holds is False
        grid: Grid description for grid-based checks, None for sampled ones
        samples_checked: Number of points or trials examined
        details: Check-specific numbers (bounds, deviations, hypothesis flags)
        caveat: Reminder that a passing verdict is only as good as its samples
    """

    property: str
    holds: bool
    counterexample: Optional[Dict[str, Any]] = None
    grid: Optional[GridSpec] = None
    samples_checked: int = 0
    details: Dict[str, Any] = field(default_factory=dict)
    caveat: str = CAVEAT

    def __post_init__(self):
        if self.holds == (self.counterexample is not None):
            raise ValueError("A verdict carries a counterexample exactly when it fails")

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "holds": self.holds,
            "counterexample": self.counterexample,
            "grid": None if self.grid is None else self.grid.to_dict(),
            "samples_checked": self.samples_checked,
            "details": self.details,
            "caveat": self.caveat,
        }


def grid_points(
    center,
    radius: float,
    step: float,
    omega: Omega,
    max_dim: int = DEFAULT_MAX_DIM,
    max_points: int = DEFAULT_MAX_POINTS,
    tau_mem: float = 1e-9,
) -> Iterator[np.ndarray]:
    """
    Points of center + step * Z^n inside the cube of half-width ``radius`` and
    inside Omega, in lexicographic order of their offsets, center excluded.

    Raises:
        PreconditionError: If step <= 0 or radius < step
        DimensionTooLargeError: If n > max_dim or the grid exceeds max_points
    """
    center = np.asarray(center, dtype=float).reshape(-1)
    if not step > 0 or radius < step:
        raise PreconditionError(f"Grid needs step > 0 and radius >= step, got radius {radius}, step {step}")
    if center.size > max_dim:
        raise DimensionTooLargeError(f"Grid oracle is limited to n <= {max_dim}, got n = {center.size}")
    half = int(math.floor(radius / step + 1e-9))
    total = (2 * half + 1) ** center.size
    if total > max_points:
        raise DimensionTooLargeError(f"Grid would have {total} points, limit is {max_points}")

    offsets = [k * step for k in range(-half, half + 1)]
    for combo in itertools.product(offsets, repeat=center.size):
        if not any(combo):
            continue
        x = center + np.array(combo)
        if omega.contains(x, tau_mem):
            yield x


class CheckContext:
    """
    Problem data handed to every check.

    Attributes:
        setmap: The set-valued objective
        cone: Ordering cone context
        xbar: Point under examination
        omega: Feasible box
        tol: Tolerance table
    """

    def __init__(
        self, setmap: SetMap, cone: ConeContext, xbar, omega: Omega = None, tol: Tolerances = DEFAULT_TOLERANCES
    ):
        self.setmap = setmap
        self.cone = cone
        self.xbar = np.asarray(xbar, dtype=float).reshape(-1)
        self.omega = omega or Omega.free(setmap.n)
        self.tol = tol


class BaseCheck(ABC):
    """
    Base class for oracle checks.

    Subclasses set ``check_name`` and implement :meth:`run`; the registry
    discovers them by scanning the oracle package.
    """

    check_name: str = None

    def __init__(self):
        if not self.check_name:
            raise ValueError(f"{self.__class__.__name__} must define check_name")

    @abstractmethod
    def run(self, context: CheckContext, params: Dict[str, Any]) -> GridVerdict:
        """
        Run the check.

        Args:
            context: Problem data
            params: Check parameters (radius, step, seed, ...)
        """

    def get_required_params(self) -> list:
        return []

    def get_optional_params(self) -> list:
        return []

    def validate_params(self, params: Dict[str, Any]) -> None:
        """Raise PreconditionError when a required parameter is missing."""
        missing = [name for name in self.get_required_params() if params.get(name) is None]
        if missing:
            raise PreconditionError(f"Check '{self.check_name}' requires: {', '.join(missing)}")
