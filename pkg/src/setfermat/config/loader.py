"""
Problem file loader for setfermat
"""

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import yaml

from ..core.cone import ConeContext, build_cone, orthant
from ..core.setrel import PointSet
from ..maps.setmap import SetMap
from ..utils.errors import ConfigurationError, SetFermatError
from ..variational.normals import Omega
from .tolerances import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

# Maximum problem file size (desk-scale problems are a few hundred bytes)
MAX_CONFIG_SIZE = 1024 * 1024

PROBLEM_KEYS = {"n", "m", "cone", "dim", "e", "components", "labels", "omega", "xbar", "tolerances"}
SETS_KEYS = {"cone", "dim", "e", "A", "B", "tolerances"}
# "generators" is the older spelling of "dual_generators"
CONE_KEYS = {"dual_generators", "generators", "e"}


@dataclass(frozen=True)
class Problem:
    """A validated problem file."""

    setmap: SetMap
    cone: ConeContext
    omega: Omega
    xbar: np.ndarray
    tolerances: Tolerances
    digest: str
    path: Optional[Path] = None


@dataclass(frozen=True)
class SetsProblem:
    """Two finite sets and a cone, for set-level subcommands."""

    cone: ConeContext
    A: PointSet
    B: Optional[PointSet]
    tolerances: Tolerances
    digest: str
    path: Optional[Path] = None


class ProblemLoader:
    """Loads and validates JSON or YAML problem files"""

    def load(self, path: str, tolerances: Optional[Tolerances] = None) -> Problem:
        """
        Load a problem file.

        Args:
            path: Path to a .json, .yaml or .yml file
            tolerances: Table the file's ``tolerances`` block overrides

        Returns:
            Validated Problem

        Raises:
            ConfigurationError: If the file is missing, too large or invalid
        """
        resolved, raw = self._read(path)
        data = self._parse(resolved, raw)
        self._validate(data)
        data = self._apply_defaults(data)
        problem = self.build(data, digest=hashlib.sha256(raw).hexdigest(), path=resolved, tolerances=tolerances)
        logger.info(f"Loaded problem from {resolved} (sha256 {problem.digest[:12]})")
        return problem

    def load_sets(self, path: str, tolerances: Optional[Tolerances] = None) -> SetsProblem:
        """
        Load a sets file ``{"cone": ..., "dim": m, "A": [...], "B": [...]}``.

        Raises:
            ConfigurationError: If the file is missing, too large or invalid
        """
        resolved, raw = self._read(path)
        data = self._parse(resolved, raw)
        self._check_keys(data, SETS_KEYS, required={"cone", "A"})
        base = tolerances or DEFAULT_TOLERANCES
        tol = Tolerances.from_mapping(data.get("tolerances") or {}, base)
        try:
            A = PointSet.from_points(data["A"], tol.tau_eq)
            B = PointSet.from_points(data["B"], tol.tau_eq) if data.get("B") is not None else None
            cone = self._cone(data, A.dim)
            cone.check_dim(A.points)
            if B is not None:
                cone.check_dim(B.points)
        except SetFermatError as e:
            raise ConfigurationError(f"Invalid sets file {resolved}: {e}")
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid point lists in {resolved}: {e}")
        return SetsProblem(cone=cone, A=A, B=B, tolerances=tol, digest=hashlib.sha256(raw).hexdigest(), path=resolved)

    def load_tolerances(self, path: str) -> Tolerances:
        """Read a tolerance table file (a flat mapping)."""
        resolved, raw = self._read(path)
        data = self._parse(resolved, raw)
        if not isinstance(data, dict):
            raise ConfigurationError("Tolerance file must contain a mapping")
        return Tolerances.from_mapping(data)

    def _read(self, path: str):
        resolved = Path(path).expanduser().resolve()
        if resolved.is_dir():
            raise ConfigurationError(f"Path is a directory, not a file: {resolved}")
        if not resolved.exists():
            raise ConfigurationError(f"Problem file not found: {resolved}")

        size = resolved.stat().st_size
        if size > MAX_CONFIG_SIZE:
            raise ConfigurationError(f"Problem file too large: {size} bytes (maximum {MAX_CONFIG_SIZE} bytes)")
        try:
            return resolved, resolved.read_bytes()
        except PermissionError as e:
            raise ConfigurationError(f"Cannot read problem file: {e}")

    def _parse(self, resolved: Path, raw: bytes) -> Any:
        suffix = resolved.suffix.lower()
        try:
            if suffix in (".yaml", ".yml"):
                return yaml.safe_load(raw.decode("utf-8"))
            if suffix != ".json":
                logger.warning(f"Problem file has unexpected extension: {suffix}. Parsing as JSON")
            return json.loads(raw.decode("utf-8"))
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML in {resolved}: {e}")
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise ConfigurationError(f"Invalid JSON in {resolved}: {e}")

    @staticmethod
    def _check_keys(data: Any, allowed: set, required: set) -> None:
        if not isinstance(data, dict):
            raise ConfigurationError("Problem file must contain a mapping")
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ConfigurationError(f"Unknown keys: {', '.join(unknown)}")
        missing = sorted(required - set(data))
        if missing:
            raise ConfigurationError(f"Missing required keys: {', '.join(missing)}")

    def _validate(self, data: Dict[str, Any]) -> None:
        """Validate problem structure"""
        self._check_keys(data, PROBLEM_KEYS, required={"n", "components"})
        if not isinstance(data["n"], int) or data["n"] < 1:
            raise ConfigurationError("'n' must be a positive integer")

        components = data["components"]
        if not isinstance(components, list) or not components:
            raise ConfigurationError("'components' must be a non-empty list")
        for index, component in enumerate(components):
            if not isinstance(component, list) or not all(isinstance(c, str) for c in component):
                raise ConfigurationError(f"Component {index} must be a list of expression strings")

        omega = data.get("omega")
        if omega is not None:
            if not isinstance(omega, dict) or omega.get("type") not in ("free", "box"):
                raise ConfigurationError("'omega' must be {'type': 'free'} or {'type': 'box', ...}")
            if omega["type"] == "box" and not {"lower", "upper"} <= set(omega):
                raise ConfigurationError("A box omega needs 'lower' and 'upper'")

    def _apply_defaults(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """Apply default values to the problem"""
        data = dict(data)
        data.setdefault("m", len(data["components"][0]))
        data.setdefault("cone", "orthant")
        data.setdefault("omega", {"type": "free"})
        data.setdefault("xbar", [0.0] * data["n"])
        data.setdefault("tolerances", {})
        return data

    @staticmethod
    def _cone(data: Dict[str, Any], m: int) -> ConeContext:
        cone_entry = data["cone"]
        dim = data.get("dim", m)
        if dim != m:
            raise ConfigurationError(f"Cone dimension {dim} does not match image dimension {m}")
        if cone_entry == "orthant":
            return orthant(m, data.get("e"))
        if not isinstance(cone_entry, dict) or not set(cone_entry) <= CONE_KEYS:
            raise ConfigurationError("'cone' must be 'orthant' or {'dual_generators': [[...], ...], 'e': [...]}")

        named = [key for key in ("dual_generators", "generators") if key in cone_entry]
        if len(named) != 1:
            raise ConfigurationError("A cone block needs exactly one of 'dual_generators' or 'generators'")
        if "e" in cone_entry and "e" in data:
            raise ConfigurationError("Give 'e' inside the cone block or at the top level, not both")
        e = cone_entry.get("e", data.get("e"))
        if e is None:
            raise ConfigurationError("A cone given by dual generators needs 'e'")
        return build_cone(cone_entry[named[0]], e)

    def build(
        self,
        data: Dict[str, Any],
        digest: str = "",
        path: Optional[Path] = None,
        tolerances: Optional[Tolerances] = None,
    ) -> Problem:
        """Construct a Problem from already validated data."""
        tol = Tolerances.from_mapping(data.get("tolerances") or {}, tolerances or DEFAULT_TOLERANCES)
        try:
            setmap = SetMap.from_strings(data["components"], n=data["n"], m=data["m"], labels=data.get("labels"))
            cone = self._cone(data, setmap.m)
            omega_spec = data["omega"]
            if omega_spec["type"] == "free":
                omega = Omega.free(setmap.n)
            else:
                omega = Omega.box(omega_spec["lower"], omega_spec["upper"])
                if omega.n != setmap.n:
                    raise ConfigurationError(f"Omega lives in R^{omega.n}, expected R^{setmap.n}")
            xbar = np.asarray(data["xbar"], dtype=float).reshape(-1)
            if xbar.size != setmap.n:
                raise ConfigurationError(f"'xbar' must have {setmap.n} coordinates")
        except ConfigurationError:
            raise
        except SetFermatError as e:
            raise ConfigurationError(f"{type(e).__name__}: {e}")
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid numeric data: {e}")
        return Problem(setmap=setmap, cone=cone, omega=omega, xbar=xbar, tolerances=tol, digest=digest, path=path)
