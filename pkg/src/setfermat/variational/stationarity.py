"""
Fermat rules for set optimization with a finite smooth family.

lower:  0 in conv( union over ybar in WMin F(xbar) of A_ybar ) + N(xbar, Omega)
upper:  0 in conv( union over ybar in WMax F(xbar) of B_ybar ) + N(xbar, Omega)
vector: some component i and y* in K* \\ {0} with J_i(xbar)^T y* = 0
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..config.tolerances import DEFAULT_TOLERANCES, Tolerances
from ..core.cone import ConeContext
from ..core.hull import MembershipCertificate, contains_zero
from ..core.normalcone import NormalConeDescriptor
from ..core.setrel import MinimalKind, minimal_indices
from ..maps.setmap import SetMap
from .normals import EstimatePolytope, Omega, assemble_G, assemble_H_and_B

logger = logging.getLogger(__name__)


class StationarityKind(str, Enum):
    LOWER = "lower"
    UPPER = "upper"
    VECTOR = "vector"

    @classmethod
    def parse(cls, value: str) -> "StationarityKind":
        """Accept "l"/"u" as well as the full names."""
        value = str(getattr(value, "value", value))
        aliases = {"l": cls.LOWER, "u": cls.UPPER}
        return aliases.get(value) or cls(value)


@dataclass(frozen=True)
class AnchorEstimate:
    """
    One anchor's contribution to the Fermat-rule set.

    ``estimate`` is A_ybar (lower), B_ybar (upper) or {J_i^T w_j} (vector);
    ``auxiliary`` is G or H when present.
    """

    anchor: np.ndarray
    index: int
    estimate: EstimatePolytope
    auxiliary: Optional[EstimatePolytope] = None

    def to_dict(self, with_polytopes: bool = True) -> dict:
        data = {"anchor": self.anchor.tolist(), "index": self.index, "vertices": self.estimate.vertices.tolist()}
        if with_polytopes:
            data["estimate"] = self.estimate.to_dict()
            if self.auxiliary is not None:
                data["auxiliary"] = self.auxiliary.to_dict()
        return data


@dataclass(frozen=True)
class StationarityCertificate:
    """
    Decision of a Fermat rule at xbar.

    ``stationary`` is ``membership.decision`` and ``residual`` is
    ``membership.residual``. For the vector rule ``component`` names the
    deciding component and ``dual_witness`` is y* = sum_j lambda_j w_j.
    """

    relation: StationarityKind
    x: np.ndarray
    stationary: bool
    residual: float
    per_anchor: Tuple[AnchorEstimate, ...]
    membership: MembershipCertificate
    omega_normal: NormalConeDescriptor
    component: Optional[int] = None
    dual_witness: Optional[np.ndarray] = field(default=None)

    def stacked_vertices(self) -> np.ndarray:
        """Vertices in the order handed to the membership test."""
        return np.vstack([entry.estimate.vertices for entry in self.per_anchor])

    def to_dict(self, with_polytopes: bool = False) -> dict:
        data = {
            "relation": self.relation.value,
            "x": self.x.tolist(),
            "stationary": self.stationary,
            "residual": self.residual,
            "marginal": self.membership.marginal,
            "omega_normal": self.omega_normal.to_dict(),
            "membership": self.membership.to_dict(),
            "per_anchor": [entry.to_dict(with_polytopes) for entry in self.per_anchor],
        }
        if self.relation is StationarityKind.VECTOR:
            data["component"] = self.component
            data["dual_witness"] = None if self.dual_witness is None else self.dual_witness.tolist()
        return data


def _certify(
    setmap: SetMap, ctx: ConeContext, xbar, omega: Omega, kind: StationarityKind, tol: Tolerances
) -> StationarityCertificate:
    xbar = omega.require(xbar, tol.tau_mem)
    image = setmap.evaluate(xbar, tol.tau_eq)
    image.check_no_collisions()

    if kind is StationarityKind.LOWER:
        extremal, assemble = MinimalKind.WMIN, assemble_G
    else:
        extremal, assemble = MinimalKind.WMAX, assemble_H_and_B

    per_anchor = []
    for index in minimal_indices(image.points, ctx, extremal, tol.tau_mem):
        anchor = image.points.points[index]
        auxiliary, estimate = assemble(setmap, ctx, xbar, anchor, tol)
        per_anchor.append(AnchorEstimate(anchor=anchor, index=index, estimate=estimate, auxiliary=auxiliary))

    normal = omega.normal_cone(xbar, tol.tau_mem)
    vertices = np.vstack([entry.estimate.vertices for entry in per_anchor])
    membership = contains_zero(vertices, normal, tol.tau_stat)
    logger.info(
        f"{kind.value} stationarity at {xbar.tolist()}: {membership.decision} (residual {membership.residual})"
    )
    return StationarityCertificate(
        relation=kind,
        x=xbar,
        stationary=membership.decision,
        residual=membership.residual,
        per_anchor=tuple(per_anchor),
        membership=membership,
        omega_normal=normal,
    )


def lower_stationarity(
    setmap: SetMap, ctx: ConeContext, xbar, omega: Omega = None, tol: Tolerances = DEFAULT_TOLERANCES
) -> StationarityCertificate:
    """
    Certify the lower Fermat rule at xbar.

    Raises:
        NotInOmegaError: If xbar is infeasible
        CollidingComponentsError: If two components meet at xbar
        ToleranceNotReachedError: If the membership kernel fails
    """
    omega = omega or Omega.free(setmap.n)
    return _certify(setmap, ctx, xbar, omega, StationarityKind.LOWER, tol)


def upper_stationarity(
    setmap: SetMap, ctx: ConeContext, xbar, omega: Omega = None, tol: Tolerances = DEFAULT_TOLERANCES
) -> StationarityCertificate:
    """Certify the upper Fermat rule at xbar; errors as :func:`lower_stationarity`."""
    omega = omega or Omega.free(setmap.n)
    return _certify(setmap, ctx, xbar, omega, StationarityKind.UPPER, tol)


def vector_stationarity(
    setmap: SetMap, xbar, ctx: ConeContext, tol: Tolerances = DEFAULT_TOLERANCES
) -> StationarityCertificate:
    """
    Stationarity in the vector sense: 0 in conv{J_i(xbar)^T w_j} for some component i.

    A zero combination with weights lambda gives y* = sum_j lambda_j w_j, which
    lies in K* and satisfies <y*, e> = 1, so y* != 0. The reported residual is
    the smallest over components.
    """
    xbar = np.asarray(xbar, dtype=float).reshape(-1)
    image = setmap.evaluate(xbar, tol.tau_eq)
    image.check_no_collisions()
    normal = NormalConeDescriptor.zero(setmap.n)
    generators = ctx.normalized_generators

    best: Optional[Tuple[int, MembershipCertificate, AnchorEstimate]] = None
    per_anchor = []
    for index in range(len(image.points)):
        component = image.component_of(index)
        vertices = generators @ setmap.jacobian(component, xbar)
        estimate = EstimatePolytope(kind="vector", vertices=vertices)
        entry = AnchorEstimate(anchor=image.points.points[index], index=index, estimate=estimate)
        per_anchor.append(entry)
        membership = contains_zero(vertices, normal, tol.tau_stat)
        if best is None or membership.residual < best[1].residual:
            best = (component, membership, entry)

    component, membership, _ = best
    witness = membership.coefficients @ generators if membership.decision else None
    logger.info(f"vector stationarity at {xbar.tolist()}: {membership.decision} (component {component})")
    return StationarityCertificate(
        relation=StationarityKind.VECTOR,
        x=xbar,
        stationary=membership.decision,
        residual=membership.residual,
        per_anchor=tuple(per_anchor),
        membership=membership,
        omega_normal=normal,
        component=component,
        dual_witness=witness,
    )


def certify(
    setmap: SetMap,
    ctx: ConeContext,
    xbar,
    relation,
    omega: Omega = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> StationarityCertificate:
    """Dispatch on "l"/"lower", "u"/"upper" or "vector"."""
    kind = StationarityKind.parse(relation)
    if kind is StationarityKind.VECTOR:
        return vector_stationarity(setmap, xbar, ctx, tol)
    omega = omega or Omega.free(setmap.n)
    return _certify(setmap, ctx, xbar, omega, kind, tol)
