"""
JSON report rendering.

Reports are deterministic: keys are sorted, floats use their shortest
round-trip representation, and every report starts with a header carrying the
tolerance table and the problem digest.
"""

import json
import math
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from .. import __version__


def _clean(value: Any) -> Any:
    """Convert numpy and enum values to JSON types; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return number
    return value


def header(command: str, tolerances: Optional[Dict[str, float]] = None, digest: Optional[str] = None) -> Dict[str, Any]:
    return {
        "tool": "setfermat",
        "version": __version__,
        "command": command,
        "tolerances": tolerances or {},
        "problem_sha256": digest,
    }


def render(
    command: str,
    result: Dict[str, Any],
    tolerances: Optional[Dict[str, float]] = None,
    digest: Optional[str] = None,
) -> str:
    """Serialize ``result`` under a report header."""
    report = {"header": header(command, tolerances, digest), "result": result}
    return json.dumps(_clean(report), sort_keys=True, indent=2, allow_nan=False)


def render_error(command: str, error: Exception) -> str:
    """Machine-readable diagnostic for a failed command."""
    report = {"header": header(command), "error": type(error).__name__, "message": str(error)}
    offset = getattr(error, "offset", None)
    if offset is not None:
        report["offset"] = offset
    return json.dumps(_clean(report), sort_keys=True, indent=2)
