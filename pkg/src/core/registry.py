# =============================================================
# File: registry.py
# Project: Multi-Video Sync Simulator
# Author: Leopoldo MZ (Lerocko)
# Created: 2025-10-12
# Refactored: 2026-01-21
# Description:
#     Manages the registration of pluggable pipeline components
#     (pixel operators, content generators) and acts as a factory
#     for their instances.
# =============================================================

import logging
from typing import Any, Dict, Generic, List, Optional, Type, TypeVar

from src.core.errors import ConfigError

T = TypeVar("T")


# =============================================================
# ComponentRegistry Class
# =============================================================
class ComponentRegistry(Generic[T]):
    """
    Registry of component classes addressed by name.

    Classes are registered, not instances; ``create`` builds a fresh
    instance for every scenario so no state leaks between runs.
    """

    def __init__(self, kind: str) -> None:
        """
        Initializes an empty registry.

        Args:
            kind: Label used in log and error messages (e.g. "operator").
        """
        self.kind = kind
        self._registered: Dict[str, Type[T]] = {}

    # =============================================================
    # Registration
    # =============================================================
    def register(self, name: str, cls: Type[T]) -> None:
        """
        Registers a component class under a unique name.

        Args:
            name: The name used in scenario files.
            cls: The component class (not an instance).
        """
        if not name or cls is None:
            logging.error(f"ComponentRegistry: {self.kind} registration requires a name and a class.")
            return
        if name in self._registered and self._registered[name] is not cls:
            logging.warning(f"ComponentRegistry: replacing {self.kind} '{name}'.")
        self._registered[name] = cls
        logging.debug(f"ComponentRegistry: registered {self.kind} '{name}'.")

    def get(self, name: str) -> Optional[Type[T]]:
        """Returns the class registered under ``name``, or None."""
        return self._registered.get(name)

    def names(self) -> List[str]:
        """Returns the registered names in registration order."""
        return list(self._registered)

    # =============================================================
    # Factory
    # =============================================================
    def create(self, name: str, field: str = "name", **params: Any) -> T:
        """
        Instantiates the component registered under ``name``.

        Args:
            name: Registered component name.
            field: Config field reported if the lookup or construction fails.
            **params: Keyword arguments forwarded to the constructor.

        Returns:
            A new component instance.

        Raises:
            ConfigError: If the name is unknown or the parameters are rejected.
        """
        cls = self.get(name)
        if cls is None:
            raise ConfigError(field, f"unknown {self.kind} '{name}' (known: {', '.join(self.names())})")
        try:
            return cls(**params)
        except TypeError as exc:
            raise ConfigError(field, f"invalid parameters for {self.kind} '{name}': {exc}") from exc
