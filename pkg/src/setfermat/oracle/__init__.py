"""
Brute-force oracle: grid and sampling checks of minimality, consistency,
convexity, Lipschitz transfer and invariance.
"""

from .base import CAVEAT, BaseCheck, CheckContext, GridSpec, GridVerdict, grid_points
from .consistency import scalarization_consistency
from .convexity import sample_convexity
from .invariance import InvarianceReport, invariance_check
from .lipschitz import LipschitzBound, sample_lipschitz_bound
from .minimality import OracleRelation, local_weak_minimality_grid, wmax_cross_check, wmin_cross_check
from .registry import CheckRegistry, registry
from .set_convexity import sample_set_convexity

__all__ = [
    "CAVEAT",
    "BaseCheck",
    "CheckContext",
    "CheckRegistry",
    "GridSpec",
    "GridVerdict",
    "InvarianceReport",
    "LipschitzBound",
    "OracleRelation",
    "grid_points",
    "invariance_check",
    "local_weak_minimality_grid",
    "registry",
    "sample_convexity",
    "sample_lipschitz_bound",
    "sample_set_convexity",
    "scalarization_consistency",
    "wmax_cross_check",
    "wmin_cross_check",
]
