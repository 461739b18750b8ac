"""
Finite-dimensional kernels: ordering cones, the scalarizing functional,
set relations and convex hulls.
"""

from .cone import ConeContext, Region, build_cone, classify, in_cone, orthant
from .hull import MembershipCertificate, MinNormResult, contains_zero, linear_image, min_norm_point, project
from .normalcone import NormalConeDescriptor, NormalKind, SignPattern
from .scalarize import SubdifferentialFace, psi, psi_subdifferential
from .setrel import (
    MinimalKind,
    PointSet,
    Relation,
    lower_less,
    minimal_elements,
    minimal_indices,
    minkowski_combination,
    scalar_gap,
    set_equivalent,
    set_less,
    upper_less,
)

__all__ = [
    "ConeContext",
    "MembershipCertificate",
    "MinNormResult",
    "MinimalKind",
    "NormalConeDescriptor",
    "NormalKind",
    "PointSet",
    "Region",
    "Relation",
    "SignPattern",
    "SubdifferentialFace",
    "build_cone",
    "classify",
    "contains_zero",
    "in_cone",
    "linear_image",
    "lower_less",
    "min_norm_point",
    "minimal_elements",
    "minimal_indices",
    "minkowski_combination",
    "orthant",
    "project",
    "psi",
    "psi_subdifferential",
    "scalar_gap",
    "set_equivalent",
    "set_less",
    "upper_less",
]
