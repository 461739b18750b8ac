"""
Shared tolerance table.

Every report embeds this table so a run can be reproduced from its output.
"""

import logging
from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Mapping

from ..utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    """
    Numerical tolerances used across the package.

    Attributes:
        tau_eq: Points closer than this are identified (deduplication, collisions)
        tau_mem: Band for cone membership (Interior / Boundary / Outside)
        tau_act: Relative band for active generators and witness ties
        tau_stat: Stationarity residual threshold
    """

    tau_eq: float = 1e-9
    tau_mem: float = 1e-9
    tau_act: float = 1e-8
    tau_stat: float = 1e-7

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], base: "Tolerances" = None) -> "Tolerances":
        """
        Build a table from a mapping, overriding ``base`` (or the defaults).

        Keys may be given as ``tau_eq`` or ``eq``.

        Raises:
            ConfigurationError: On unknown keys or non-positive values
        """
        base = base or cls()
        updates: Dict[str, float] = {}
        for key, value in data.items():
            name = key if key.startswith("tau_") else f"tau_{key}"
            if name not in cls.__dataclass_fields__:
                raise ConfigurationError(f"Unknown tolerance key: '{key}'")
            try:
                number = float(value)
            except (TypeError, ValueError):
                raise ConfigurationError(f"Tolerance '{key}' must be a number, got {value!r}")
            if not number > 0:
                raise ConfigurationError(f"Tolerance '{key}' must be positive, got {number}")
            updates[name] = number

        if updates:
            logger.debug(f"Tolerance overrides: {updates}")
        return replace(base, **updates)

    def as_dict(self) -> Dict[str, float]:
        """Return the table as a plain dictionary."""
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()
