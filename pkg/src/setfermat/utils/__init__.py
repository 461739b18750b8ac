"""
Utility modules for setfermat.
"""

from .errors import (
    CollidingComponentsError,
    ConeError,
    ConfigurationError,
    DimensionMismatchError,
    DimensionTooLargeError,
    DomainError,
    EmptyGeneratorsError,
    ExpressionError,
    ExpressionSyntaxError,
    IndexOutOfRangeError,
    NormalConeError,
    NotInOmegaError,
    NotInteriorError,
    NotPointedError,
    NotWeaklyMaximalError,
    NotWeaklyMinimalError,
    PointNotInSetError,
    PreconditionError,
    SetFermatError,
    ToleranceNotReachedError,
    UnknownIdentifierError,
    VariableIndexOutOfRangeError,
    error_boundary,
)

__all__ = [
    "SetFermatError",
    "ConfigurationError",
    "DimensionMismatchError",
    "ConeError",
    "EmptyGeneratorsError",
    "NotInteriorError",
    "NotPointedError",
    "ExpressionError",
    "ExpressionSyntaxError",
    "UnknownIdentifierError",
    "VariableIndexOutOfRangeError",
    "DomainError",
    "CollidingComponentsError",
    "PointNotInSetError",
    "NotWeaklyMinimalError",
    "NotWeaklyMaximalError",
    "ToleranceNotReachedError",
    "NormalConeError",
    "IndexOutOfRangeError",
    "NotInOmegaError",
    "DimensionTooLargeError",
    "PreconditionError",
    "error_boundary",
]
