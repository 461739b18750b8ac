"""Normal cones, estimate polytopes and Fermat-rule certificates."""

from .normals import (
    EstimatePolytope,
    NormalConeDescriptor,
    Omega,
    VertexSource,
    assemble_G,
    assemble_H_and_B,
    coderivative,
    normal_cone_box,
    normal_cone_finite,
    replay,
)
from .stationarity import (
    AnchorEstimate,
    StationarityCertificate,
    StationarityKind,
    certify,
    lower_stationarity,
    upper_stationarity,
    vector_stationarity,
)

__all__ = [
    "AnchorEstimate",
    "EstimatePolytope",
    "NormalConeDescriptor",
    "Omega",
    "StationarityCertificate",
    "StationarityKind",
    "VertexSource",
    "assemble_G",
    "assemble_H_and_B",
    "certify",
    "coderivative",
    "lower_stationarity",
    "normal_cone_box",
    "normal_cone_finite",
    "replay",
    "upper_stationarity",
    "vector_stationarity",
]
