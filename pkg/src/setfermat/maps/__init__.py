"""Smooth expressions, finite set-valued maps and their scalarizations."""

from .expr import Expression, eval_with_gradient, parse
from .scalfun import ScalarizationResult, f_lower, f_relation, f_upper, g_lower, g_upper
from .setmap import Image, SetMap, estimate_lipschitz, hausdorff

__all__ = [
    "Expression",
    "Image",
    "ScalarizationResult",
    "SetMap",
    "estimate_lipschitz",
    "eval_with_gradient",
    "f_lower",
    "f_relation",
    "f_upper",
    "g_lower",
    "g_upper",
    "hausdorff",
    "parse",
]
