"""
Configuration for setfermat: the tolerance table and problem files.

The loader lives in :mod:`setfermat.config.loader`.
"""

from .tolerances import DEFAULT_TOLERANCES, Tolerances

__all__ = ["DEFAULT_TOLERANCES", "Tolerances"]
