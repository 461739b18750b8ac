"""
Descriptors for the structured normal cones the package computes.

Only two shapes occur: the full space (normals to an isolated point of a
finite set) and coordinate sign patterns (normals to a box).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple


class NormalKind(str, Enum):
    FULL_SPACE = "full_space"
    BOX_PATTERN = "box_pattern"


class SignPattern(str, Enum):
    """Per-coordinate normal cone of an interval."""

    ZERO = "zero"
    NONNEG = "nonneg"
    NONPOS = "nonpos"
    ALL = "all"


@dataclass(frozen=True)
class NormalConeDescriptor:
    """
    A normal cone in R^dim.

    ``pattern`` is empty for FULL_SPACE and has one entry per coordinate for
    BOX_PATTERN.
    """

    kind: NormalKind
    dim: int
    pattern: Tuple[SignPattern, ...] = ()

    @classmethod
    def full_space(cls, dim: int) -> "NormalConeDescriptor":
        return cls(kind=NormalKind.FULL_SPACE, dim=dim)

    @classmethod
    def box(cls, pattern) -> "NormalConeDescriptor":
        signs = tuple(SignPattern(p) for p in pattern)
        return cls(kind=NormalKind.BOX_PATTERN, dim=len(signs), pattern=signs)

    @classmethod
    def zero(cls, dim: int) -> "NormalConeDescriptor":
        """N = {0}: the normal cone at an interior point."""
        return cls.box([SignPattern.ZERO] * dim)

    @property
    def is_trivial(self) -> bool:
        return self.kind is NormalKind.BOX_PATTERN and all(s is SignPattern.ZERO for s in self.pattern)

    def to_dict(self) -> dict:
        if self.kind is NormalKind.FULL_SPACE:
            return {"kind": self.kind.value, "dim": self.dim}
        return {"kind": self.kind.value, "dim": self.dim, "pattern": [s.value for s in self.pattern]}
