"""
Set-valued objectives F(x) = {f_1(x), ..., f_p(x)} built from smooth components.

Each component is a vector of m expressions over x1..xn. Images are finite
point sets; the provenance of every image point records which components
landed on it, so collisions at a base point can be detected downstream.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.setrel import PointSet, deduplicate
from ..utils.errors import CollidingComponentsError, DimensionMismatchError, PreconditionError
from .expr import BinOp, Const, Expression, parse, to_text

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Image:
    """
    F(x) with provenance.

    Attributes:
        x: Point of evaluation
        points: Deduplicated image
        provenance: For each image point, the (0-based) component indices mapping to it
    """

    x: np.ndarray
    points: PointSet
    provenance: Tuple[Tuple[int, ...], ...]

    def component_of(self, index: int) -> int:
        """
        The unique component producing image point ``index``.

        Raises:
            CollidingComponentsError: If several components share the point
        """
        owners = self.provenance[index]
        if len(owners) > 1:
            raise CollidingComponentsError(
                f"Components {list(owners)} collide at {self.points.points[index].tolist()} "
                f"for x = {self.x.tolist()}"
            )
        return owners[0]

    def check_no_collisions(self) -> None:
        for index in range(len(self.points)):
            self.component_of(index)

    def to_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "points": self.points.to_list(),
            "provenance": [list(owners) for owners in self.provenance],
        }


class SetMap:
    """
    Finite family of smooth vector components.

    Args:
        components: p sequences of m Expressions each
        n: Domain dimension
        m: Image dimension
        labels: Optional component names
    """

    def __init__(
        self,
        components: Sequence[Sequence[Expression]],
        n: int,
        m: int,
        labels: Optional[Sequence[str]] = None,
    ):
        if not components:
            raise PreconditionError("A set-valued map needs at least one component")
        for index, component in enumerate(components):
            if len(component) != m:
                raise DimensionMismatchError(
                    f"Component {index} has {len(component)} coordinates, expected {m}"
                )
            for coordinate in component:
                if coordinate.n_vars != n:
                    raise DimensionMismatchError(
                        f"Component {index} is defined over {coordinate.n_vars} variables, expected {n}"
                    )
        if labels is not None and len(labels) != len(components):
            raise PreconditionError("One label per component is required")

        self.n = n
        self.m = m
        self.components: Tuple[Tuple[Expression, ...], ...] = tuple(tuple(c) for c in components)
        self.labels: Tuple[str, ...] = tuple(labels) if labels else tuple(f"f{i + 1}" for i in range(len(components)))

    @classmethod
    def from_strings(
        cls,
        components: Sequence[Sequence[str]],
        n: int,
        m: Optional[int] = None,
        labels: Optional[Sequence[str]] = None,
    ) -> "SetMap":
        """Parse every coordinate expression; ``m`` defaults to the first component's length."""
        if not components:
            raise PreconditionError("A set-valued map needs at least one component")
        m = len(components[0]) if m is None else m
        parsed = [[parse(text, n) for text in component] for component in components]
        return cls(parsed, n=n, m=m, labels=labels)

    @property
    def p(self) -> int:
        return len(self.components)

    @property
    def is_affine(self) -> bool:
        return all(expr.is_affine for component in self.components for expr in component)

    def _check_x(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != (self.n,):
            raise DimensionMismatchError(f"Expected a point in R^{self.n}, got {x.shape[0]} coordinates")
        return x

    def component_values(self, x) -> np.ndarray:
        """(p, m) array of f_i(x) before deduplication."""
        x = self._check_x(x)
        return np.array([[expr.evaluate(x) for expr in component] for component in self.components])

    def evaluate(self, x, tau_eq: float = 1e-9) -> Image:
        """
        F(x) deduplicated within ``tau_eq``, with component provenance.

        Raises:
            DomainError: Propagated from expression evaluation
        """
        x = self._check_x(x)
        unique, groups = deduplicate(self.component_values(x), tau_eq)
        unique.setflags(write=False)
        return Image(x=x, points=PointSet(points=unique), provenance=tuple(groups))

    def jacobian(self, index: int, x) -> np.ndarray:
        """(m, n) Jacobian of component ``index`` at ``x``."""
        x = self._check_x(x)
        return np.vstack([expr.eval_with_gradient(x)[1] for expr in self.components[index]])

    def jacobians(self, x) -> List[np.ndarray]:
        """Jacobians of all components at ``x``; row r of J_i is the gradient of coordinate r."""
        return [self.jacobian(i, x) for i in range(self.p)]

    def _shifted_component(self, component: Tuple[Expression, ...], shift: np.ndarray) -> List[Expression]:
        shifted = []
        for expr, amount in zip(component, shift):
            if amount >= 0:
                node = BinOp("+", expr.ast, Const(float(amount)))
            else:
                node = BinOp("-", expr.ast, Const(float(-amount)))
            shifted.append(Expression(ast=node, n_vars=self.n))
        return shifted

    def augmented(self, shift) -> "SetMap":
        """
        The family extended by f_i + shift for every component.

        With shift in K this leaves the lower scalarizations unchanged; with
        -shift in K it leaves the upper ones unchanged.
        """
        shift = np.asarray(shift, dtype=float).reshape(-1)
        if shift.shape != (self.m,):
            raise DimensionMismatchError(f"Shift must live in R^{self.m}")
        extra = [self._shifted_component(c, shift) for c in self.components]
        labels = list(self.labels) + [f"{label}{shift.tolist()}" for label in self.labels]
        return SetMap(list(self.components) + extra, n=self.n, m=self.m, labels=labels)

    def scaled(self, factor: float) -> "SetMap":
        """Every component multiplied by ``factor``."""
        scaled = [
            [Expression(ast=BinOp("*", Const(float(factor)), expr.ast), n_vars=self.n) for expr in c]
            for c in self.components
        ]
        return SetMap(scaled, n=self.n, m=self.m, labels=self.labels)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "labels": list(self.labels),
            "components": [[to_text(expr.ast) for expr in c] for c in self.components],
        }


def hausdorff(A: PointSet, B: PointSet) -> float:
    """Two-sided Hausdorff distance between finite sets."""
    distances = np.linalg.norm(A.points[:, None, :] - B.points[None, :, :], axis=2)
    return float(max(np.max(np.min(distances, axis=1)), np.max(np.min(distances, axis=0))))


def sample_ball(center, radius: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """
    ``count`` points drawn uniformly from the Euclidean ball.

    Points are drawn one at a time, so the first k points do not depend on ``count``.
    """
    center = np.asarray(center, dtype=float).reshape(-1)
    points = np.empty((count, center.size))
    for i in range(count):
        direction = rng.normal(size=center.size)
        direction /= np.linalg.norm(direction)
        points[i] = center + direction * radius * rng.uniform() ** (1.0 / center.size)
    return points


def estimate_lipschitz(
    setmap: SetMap,
    center,
    radius: float,
    samples: int,
    seed: int = 0,
    tau_eq: float = 1e-9,
) -> float:
    """
    Sampled lower bound on the local Lipschitz modulus of F near ``center``.

    Draws ``samples`` points uniformly from the ball and returns the largest
    Hausdorff distance of images over pairwise distance. Points come from a
    fixed seed schedule, so more samples never lower the estimate.
    """
    if radius <= 0 or samples < 2:
        raise PreconditionError("estimate_lipschitz needs radius > 0 and at least 2 samples")
    points = sample_ball(center, radius, samples, np.random.default_rng(seed))
    images = [setmap.evaluate(x, tau_eq).points for x in points]

    estimate = 0.0
    for i in range(samples):
        for k in range(i):
            gap = float(np.linalg.norm(points[i] - points[k]))
            if gap > 0:
                estimate = max(estimate, hausdorff(images[i], images[k]) / gap)
    logger.debug(f"Lipschitz estimate over {samples} samples within radius {radius}: {estimate}")
    return estimate
