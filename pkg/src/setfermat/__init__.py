"""
setfermat - Fermat rules for set optimization with finite smooth set-valued maps
"""

__version__ = "0.1.0"

from .core.cone import build_cone, orthant
from .maps.setmap import SetMap
from .variational.normals import Omega
from .variational.stationarity import lower_stationarity, upper_stationarity, vector_stationarity

__all__ = [
    "Omega",
    "SetMap",
    "build_cone",
    "lower_stationarity",
    "orthant",
    "upper_stationarity",
    "vector_stationarity",
]
