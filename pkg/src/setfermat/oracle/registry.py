"""
Check registry for discovering oracle checks.
"""

import importlib
import logging
import pkgutil
from typing import Dict, List, Optional, Type

from .base import BaseCheck

logger = logging.getLogger(__name__)


class CheckRegistry:
    """Registry of the available oracle checks"""

    def __init__(self):
        self._checks: Dict[str, Type[BaseCheck]] = {}
        self._instances: Dict[str, BaseCheck] = {}

    def register(self, check_class: Type[BaseCheck]) -> None:
        """Register a check class"""
        if not isinstance(check_class, type) or not issubclass(check_class, BaseCheck):
            raise TypeError(f"{check_class} must inherit from BaseCheck")

        check = check_class()
        if self._checks.get(check.check_name) is check_class:
            return
        if check.check_name in self._checks:
            logger.warning(f"Overwriting existing check: {check.check_name}")

        self._checks[check.check_name] = check_class
        self._instances[check.check_name] = check
        logger.debug(f"Registered check: {check.check_name}")

    def get_check(self, name: str) -> Optional[BaseCheck]:
        return self._instances.get(name)

    def list_checks(self) -> List[str]:
        return sorted(self._checks)

    def auto_discover(self) -> None:
        """Import every module of the oracle package and register its BaseCheck subclasses"""
        from .. import oracle as oracle_pkg

        for _importer, modname, _ispkg in pkgutil.iter_modules(oracle_pkg.__path__):
            if modname in ("base", "registry"):
                continue

            module = importlib.import_module(f"{oracle_pkg.__name__}.{modname}")
            for attr_name in dir(module):
                attr = getattr(module, attr_name)
                if (
                    isinstance(attr, type)
                    and issubclass(attr, BaseCheck)
                    and attr is not BaseCheck
                    and attr.check_name
                    and attr.__module__ == module.__name__
                ):
                    self.register(attr)


# Global registry instance
registry = CheckRegistry()
