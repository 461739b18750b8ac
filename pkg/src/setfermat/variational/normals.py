"""
Normal cones, coderivatives and the estimate polytopes of the Fermat rules.

For a map built from smooth components, the graph of F near a non-colliding
image point is the graph of one component, so its coderivative is y* -> J_i^T y*.
Every point of a finite image is isolated, so its normal cone is the full space.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext, Region, classify
from ..core.hull import project
from ..core.normalcone import NormalConeDescriptor, NormalKind, SignPattern
from ..core.scalarize import psi_subdifferential
from ..core.setrel import MinimalKind, PointSet, minimal_indices
from ..maps.setmap import Image, SetMap
from ..utils.errors import (
    DimensionMismatchError,
    NotInOmegaError,
    NotWeaklyMaximalError,
    NotWeaklyMinimalError,
    PointNotInSetError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

__all__ = [
    "NormalConeDescriptor",
    "NormalKind",
    "SignPattern",
    "Omega",
    "VertexSource",
    "EstimatePolytope",
    "normal_cone_finite",
    "normal_cone_box",
    "coderivative",
    "assemble_G",
    "assemble_H_and_B",
    "replay",
]


def normal_cone_box(lower, upper, xbar, tau_mem: float = 1e-9) -> NormalConeDescriptor:
    """
    Normal cone of the box [lower, upper] at ``xbar``.

    Infinite bounds are allowed. Per coordinate: ZERO strictly inside, NONNEG at
    the upper bound, NONPOS at the lower bound, ALL when both bounds coincide.

    Raises:
        PointNotInSetError: If xbar is outside the box by more than tau_mem
    """
    lower = np.asarray(lower, dtype=float).reshape(-1)
    upper = np.asarray(upper, dtype=float).reshape(-1)
    xbar = np.asarray(xbar, dtype=float).reshape(-1)
    if not lower.shape == upper.shape == xbar.shape:
        raise DimensionMismatchError("Box bounds and point must have the same dimension")
    if np.any(xbar < lower - tau_mem) or np.any(xbar > upper + tau_mem):
        raise PointNotInSetError(f"{xbar.tolist()} is not in the box [{lower.tolist()}, {upper.tolist()}]")

    pattern = []
    for low, high, coord in zip(lower, upper, xbar):
        at_lower = abs(coord - low) <= tau_mem
        at_upper = abs(coord - high) <= tau_mem
        if at_lower and at_upper:
            pattern.append(SignPattern.ALL)
        elif at_upper:
            pattern.append(SignPattern.NONNEG)
        elif at_lower:
            pattern.append(SignPattern.NONPOS)
        else:
            pattern.append(SignPattern.ZERO)
    return NormalConeDescriptor.box(pattern)


def normal_cone_finite(A: PointSet, ybar, tau_eq: float = 1e-9) -> NormalConeDescriptor:
    """
    Normal cone of a finite set at one of its points: always the full space.

    Raises:
        PointNotInSetError: If ybar is not in A within tau_eq
    """
    if A.index_of(ybar, tau_eq) is None:
        raise PointNotInSetError(f"{np.asarray(ybar).tolist()} is not a point of the set")
    return NormalConeDescriptor.full_space(A.dim)


@dataclass(frozen=True)
class Omega:
    """
    Feasible box lower <= x <= upper; infinite bounds give the free space.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if self.lower.shape != self.upper.shape:
            raise DimensionMismatchError("Omega bounds must have the same dimension")
        if np.any(self.lower > self.upper):
            raise PreconditionError(f"Empty box: lower {self.lower.tolist()} exceeds upper {self.upper.tolist()}")

    @classmethod
    def free(cls, n: int) -> "Omega":
        return cls(lower=np.full(n, -np.inf), upper=np.full(n, np.inf))

    @classmethod
    def box(cls, lower: Sequence[float], upper: Sequence[float]) -> "Omega":
        return cls(lower=np.asarray(lower, dtype=float).reshape(-1), upper=np.asarray(upper, dtype=float).reshape(-1))

    @property
    def n(self) -> int:
        return int(self.lower.size)

    @property
    def is_free(self) -> bool:
        return bool(np.all(np.isinf(self.lower)) and np.all(np.isinf(self.upper)))

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape != self.lower.shape:
            raise DimensionMismatchError(f"Expected a point in R^{self.n}, got {x.size} coordinates")
        return x

    def contains(self, x, tau_mem: float = 1e-9) -> bool:
        x = self._check(x)
        return bool(np.all(x >= self.lower - tau_mem) and np.all(x <= self.upper + tau_mem))

    def require(self, x, tau_mem: float = 1e-9) -> np.ndarray:
        """Return x as an array, raising NotInOmegaError if it is infeasible."""
        x = self._check(x)
        if not self.contains(x, tau_mem):
            raise NotInOmegaError(f"{x.tolist()} is outside Omega")
        return x

    def project(self, x) -> np.ndarray:
        """Euclidean projection (coordinate clamp)."""
        return np.clip(self._check(x), self.lower, self.upper)

    def normal_cone(self, x, tau_mem: float = 1e-9) -> NormalConeDescriptor:
        try:
            return normal_cone_box(self.lower, self.upper, x, tau_mem)
        except PointNotInSetError as e:
            raise NotInOmegaError(str(e))

    def to_dict(self) -> dict:
        if self.is_free:
            return {"type": "free"}
        return {"type": "box", "lower": self.lower.tolist(), "upper": self.upper.tolist()}


def _component_at(image: Image, ybar, tau_eq: float) -> Tuple[int, int]:
    """(image index, owning component) of ybar in the image."""
    index = image.points.index_of(ybar, tau_eq)
    if index is None:
        raise PointNotInSetError(f"{np.asarray(ybar).tolist()} is not in F({image.x.tolist()})")
    return index, image.component_of(index)


def coderivative(setmap: SetMap, xbar, ybar, ystar, tau_eq: float = 1e-9) -> np.ndarray:
    """
    D*F(xbar, ybar)(y*) = J_i(xbar)^T y* for the unique component i with f_i(xbar) = ybar.

    Raises:
        PointNotInSetError: If ybar is not in F(xbar)
        CollidingComponentsError: If several components share ybar
    """
    ystar = np.asarray(ystar, dtype=float).reshape(-1)
    if ystar.shape != (setmap.m,):
        raise DimensionMismatchError(f"y* must live in R^{setmap.m}")
    _, component = _component_at(setmap.evaluate(xbar, tau_eq), ybar, tau_eq)
    return setmap.jacobian(component, xbar).T @ ystar


@dataclass(frozen=True)
class VertexSource:
    """
    Provenance of one polytope vertex.

    Attributes:
        point: Index of zbar in F(xbar)
        component: Component whose Jacobian was applied (None for H)
        generator: Index of the active normalized generator
    """

    point: int
    component: Optional[int]
    generator: int

    def to_dict(self) -> dict:
        return {"point": self.point, "component": self.component, "generator": self.generator}


@dataclass(frozen=True)
class EstimatePolytope:
    """
    V-polytope with one provenance record per vertex.

    ``kind`` is one of "G", "A", "H", "B".
    """

    kind: str
    vertices: np.ndarray
    provenance: Tuple[VertexSource, ...] = field(default=())

    def __len__(self) -> int:
        return int(self.vertices.shape[0])

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": self.vertices.tolist(),
            "provenance": [source.to_dict() for source in self.provenance],
        }


def _anchor_index(image: Image, ybar, ctx: ConeContext, kind: MinimalKind, tol: Tolerances) -> int:
    index = image.points.index_of(ybar, tol.tau_eq)
    if index is None:
        raise PointNotInSetError(f"{np.asarray(ybar).tolist()} is not in F({image.x.tolist()})")
    if index not in minimal_indices(image.points, ctx, kind, tol.tau_mem):
        error = NotWeaklyMinimalError if kind is MinimalKind.WMIN else NotWeaklyMaximalError
        raise error(f"{image.points.points[index].tolist()} is not in {kind.value}(F({image.x.tolist()}))")
    return index


def _boundary_matched(image: Image, anchor: int, ctx: ConeContext, sign: float, tau_mem: float) -> List[int]:
    """Indices k with sign * (ybar - zbar_k) on the boundary of K; the anchor is always included."""
    ybar = image.points.points[anchor]
    matched = []
    for k, zbar in enumerate(image.points):
        if k == anchor or classify(ctx, sign * (ybar - zbar), tau_mem) is Region.BOUNDARY:
            matched.append(k)
    return matched


def assemble_G(
    setmap: SetMap, ctx: ConeContext, xbar, ybar, tol: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[EstimatePolytope, EstimatePolytope]:
    """
    Build G in R^(n+m) for a weakly minimal ybar, and its projection A onto x-space.

    G has a vertex (J_i^T w, -w) for every zbar in F(xbar) with ybar - zbar on
    the boundary of K (component i) and every generator w active at zbar - ybar.

    Raises:
        NotWeaklyMinimalError: If ybar is not in WMin(F(xbar))
        CollidingComponentsError: If a contributing zbar is shared by components
    """
    image = setmap.evaluate(xbar, tol.tau_eq)
    anchor = _anchor_index(image, ybar, ctx, MinimalKind.WMIN, tol)
    ybar = image.points.points[anchor]

    vertices, sources = [], []
    for k in _boundary_matched(image, anchor, ctx, 1.0, tol.tau_mem):
        zbar = image.points.points[k]
        component = image.component_of(k)
        jacobian = setmap.jacobian(component, image.x)
        face = psi_subdifferential(ctx, zbar - ybar, tol.tau_act)
        for generator, w in zip(face.indices, face.vertices):
            vertices.append(np.concatenate([jacobian.T @ w, -w]))
            sources.append(VertexSource(point=k, component=component, generator=generator))

    G = EstimatePolytope(kind="G", vertices=np.array(vertices), provenance=tuple(sources))
    A = EstimatePolytope(kind="A", vertices=project(G.vertices, range(setmap.n)), provenance=G.provenance)
    logger.debug(f"G at anchor {ybar.tolist()}: {len(G)} vertices")
    return G, A


def assemble_H_and_B(
    setmap: SetMap, ctx: ConeContext, xbar, ybar, tol: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[EstimatePolytope, EstimatePolytope]:
    """
    Build H in R^m for a weakly maximal ybar and B = -D*F(xbar, ybar)[H] in R^n.

    H = -conv of the generators active at ybar - zbar over zbar in F(xbar) with
    zbar - ybar on the boundary of K. The normal cone at every zbar is the full
    space, so intersecting with it changes nothing.

    Raises:
        NotWeaklyMaximalError: If ybar is not in WMax(F(xbar))
        CollidingComponentsError: If ybar is shared by components
    """
    image = setmap.evaluate(xbar, tol.tau_eq)
    anchor = _anchor_index(image, ybar, ctx, MinimalKind.WMAX, tol)
    ybar = image.points.points[anchor]
    component = image.component_of(anchor)
    jacobian = setmap.jacobian(component, image.x)

    h_vertices, h_sources, b_vertices, b_sources = [], [], [], []
    for k in _boundary_matched(image, anchor, ctx, -1.0, tol.tau_mem):
        zbar = image.points.points[k]
        face = psi_subdifferential(ctx, ybar - zbar, tol.tau_act)
        for generator, w in zip(face.indices, face.vertices):
            h_vertices.append(-w)
            h_sources.append(VertexSource(point=k, component=None, generator=generator))
            b_vertices.append(jacobian.T @ w)
            b_sources.append(VertexSource(point=k, component=component, generator=generator))

    H = EstimatePolytope(kind="H", vertices=np.array(h_vertices), provenance=tuple(h_sources))
    B = EstimatePolytope(kind="B", vertices=np.array(b_vertices), provenance=tuple(b_sources))
    logger.debug(f"H at anchor {ybar.tolist()}: {len(H)} vertices")
    return H, B


def replay(polytope: EstimatePolytope, setmap: SetMap, ctx: ConeContext, xbar) -> np.ndarray:
    """Recompute every vertex from its provenance record alone."""
    rows = []
    for source in polytope.provenance:
        w = ctx.normalized_generators[source.generator]
        if polytope.kind == "H":
            rows.append(-w)
            continue
        image_row = setmap.jacobian(source.component, xbar).T @ w
        rows.append(np.concatenate([image_row, -w]) if polytope.kind == "G" else image_row)
    return np.array(rows)
