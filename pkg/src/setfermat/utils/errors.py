"""
Error handling utilities and boundaries for setfermat.

Provides the exception hierarchy shared by every module and the boundary
decorator the CLI wraps its subcommands with.
"""

import logging
from functools import wraps
from typing import Any, Callable, Optional, TypeVar

logger = logging.getLogger(__name__)

# Type variable for generic function decoration
F = TypeVar("F", bound=Callable[..., Any])


def error_boundary(
    *,
    reraise: bool = False,
    default_return: Any = None,
    log_level: int = logging.ERROR,
    on_error: Optional[Callable[[Exception], Any]] = None,
) -> Callable[[F], F]:
    """
    Decorator to create consistent error boundaries around functions.

    Only SetFermatError subclasses are caught; anything else is a bug and
    propagates untouched.

    Args:
        reraise: If True, re-raise the exception after logging
        default_return: Value to return if error occurs and not reraising
        log_level: Logging level for the error (default: ERROR)
        on_error: Optional callback receiving the exception; its return value
            replaces default_return when it is not None

    Returns:
        Decorated function with error handling

    Example:
        >>> @error_boundary(default_return=2)
        ... def cmd_validate(args):
        ...     ProblemLoader().load(args.problem)
        ...     return 0
    """

    def decorator(func: F) -> F:
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except SetFermatError as e:
                logger.log(
                    log_level,
                    f"Error in {func.__name__}: {e}",
                    extra={"function": func.__name__, "origin": func.__module__},
                )

                if reraise:
                    raise

                if on_error is not None:
                    result = on_error(e)
                    if result is not None:
                        return result

                return default_return

        return wrapper  # type: ignore

    return decorator


class SetFermatError(Exception):
    """Base exception for all setfermat-specific errors."""

    pass


class ConfigurationError(SetFermatError):
    """Raised when a problem, sets or tolerance file fails validation."""

    pass


class DimensionMismatchError(SetFermatError, ValueError):
    """Raised when vector or matrix dimensions disagree."""

    pass


class ConeError(SetFermatError):
    """Raised when an ordering cone violates its standing assumptions."""

    pass


class EmptyGeneratorsError(ConeError):
    """Raised when no dual generators are supplied."""

    pass


class NotInteriorError(ConeError):
    """Raised when the direction e is not an interior point of K."""

    pass


class NotPointedError(ConeError):
    """Raised when the dual generators do not span the image space."""

    pass


class ExpressionError(SetFermatError):
    """Raised when a component expression cannot be parsed."""

    pass


class ExpressionSyntaxError(ExpressionError):
    """Raised on malformed expression text; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExpressionError):
    """Raised for identifiers that are neither variables nor smooth primitives."""

    pass


class VariableIndexOutOfRangeError(ExpressionError):
    """Raised when an expression references x_k with k > n_vars."""

    pass


class DomainError(SetFermatError):
    """Raised when an expression is evaluated outside its domain."""

    pass


class CollidingComponentsError(SetFermatError):
    """Raised when two components share an image point at the base point."""

    pass


class PointNotInSetError(SetFermatError):
    """Raised when a normal cone is requested at a point outside the set."""

    pass


class NotWeaklyMinimalError(SetFermatError):
    """Raised when an anchor is not a weakly minimal element of F(xbar)."""

    pass


class NotWeaklyMaximalError(SetFermatError):
    """Raised when an anchor is not a weakly maximal element of F(xbar)."""

    pass


class ToleranceNotReachedError(SetFermatError):
    """Raised when an iterative kernel hits its cap before its stopping test."""

    pass


class NormalConeError(SetFermatError):
    """Raised when a kernel receives a normal-cone kind it does not support."""

    pass


class IndexOutOfRangeError(SetFermatError):
    """Raised when a coordinate projection references a missing coordinate."""

    pass


class NotInOmegaError(SetFermatError):
    """Raised when a point lies outside the feasible set."""

    pass


class DimensionTooLargeError(SetFermatError):
    """Raised when an exhaustive grid would be too large to enumerate."""

    pass


class PreconditionError(SetFermatError):
    """Raised when an operation's documented precondition does not hold."""

    pass
