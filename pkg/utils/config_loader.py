"""
Configuration Loader
====================
Loads tessella_params.yaml and the reference table fixture.
Checks the parameter file version before anything reads from it.
"""

import yaml
from pathlib import Path
from typing import Dict, Any, Optional, Tuple

from loguru import logger

from config import CONFIG_DIR

SUPPORTED_VERSION = "1.0"
SUPPORTED_SCHEMA = "tessella/1"


class ConfigLoader:
    """Loads and validates configuration files."""

    def __init__(self, config_dir: Optional[str] = None):
        self.config_dir = Path(config_dir) if config_dir else CONFIG_DIR
        self.params: Dict[str, Any] = {}
        self.table1: Dict[str, Any] = {}

    def load_all(self) -> None:
        """Load all configuration files."""
        self.params = self._load_yaml("tessella_params.yaml")
        self.table1 = self._load_yaml("table1_reference.yaml")
        self._validate_version()

    def _load_yaml(self, filename: str) -> Dict[str, Any]:
        """Load a YAML configuration file."""
        filepath = self.config_dir / filename

        if not filepath.exists():
            raise FileNotFoundError(f"Config file not found: {filepath}")

        with open(filepath, 'r') as f:
            config = yaml.safe_load(f)

        return config or {}

    def _validate_version(self) -> None:
        """Reject parameter files written for another schema."""
        version = self.params.get('version', 'unknown')
        if version != SUPPORTED_VERSION:
            raise ValueError(f"Expected config version {SUPPORTED_VERSION}, got {version}")

        schema = self.params.get('schema', 'unknown')
        if schema != SUPPORTED_SCHEMA:
            raise ValueError(f"Expected schema {SUPPORTED_SCHEMA}, got {schema}")

        logger.debug(f"Configuration loaded from {self.config_dir} (schema {schema})")

    def get(self, *keys: str, default: Any = None) -> Any:
        """
        Get configuration value by nested keys.

        Example:
            config.get('enumeration', 'default_k')
            config.get('render', 'emphasis', 'first')
        """
        value = self.params
        for key in keys:
            if isinstance(value, dict):
                value = value.get(key, default)
            else:
                return default
        return value

    def get_table1_reference(self) -> Dict[Tuple[str, int, int], Dict[str, Any]]:
        """
        reference table keyed by (mode, p, q).

        Returns:
            {("full", 4, 5): {"count": 4, "blank": False}, ...}
        """
        reference = {}
        for mode in ("full", "direct"):
            cells = self.table1.get(mode)
            if not isinstance(cells, dict):
                raise ValueError(f"reference table has no '{mode}' row")
            for key, cell in cells.items():
                p, q = (int(part) for part in str(key).split(","))
                reference[(mode, p, q)] = {
                    "count": int(cell["count"]),
                    "blank": bool(cell.get("blank", False)),
                }
        return reference

    def get_table1_tilings(self) -> list:
        """Tilings in printed column order."""
        return [tuple(pair) for pair in self.table1.get('tilings', [])]


class Config:
    """Global configuration singleton."""
    _instance: Optional[ConfigLoader] = None

    @classmethod
    def initialize(cls, config_dir: Optional[str] = None) -> None:
        """Initialize the global configuration."""
        if cls._instance is None:
            cls._instance = ConfigLoader(config_dir)
            cls._instance.load_all()

    @classmethod
    def reset(cls) -> None:
        """Forget the loaded configuration (tests point it at other dirs)."""
        cls._instance = None

    @classmethod
    def _require(cls) -> ConfigLoader:
        if cls._instance is None:
            raise RuntimeError("Config not initialized. Call Config.initialize() first.")
        return cls._instance

    @classmethod
    def get(cls, *keys: str, default: Any = None) -> Any:
        """Get configuration value."""
        return cls._require().get(*keys, default=default)

    @classmethod
    def get_table1_reference(cls) -> Dict[Tuple[str, int, int], Dict[str, Any]]:
        """Get the reference table."""
        return cls._require().get_table1_reference()

    @classmethod
    def get_table1_tilings(cls) -> list:
        """Get the reference table column order."""
        return cls._require().get_table1_tilings()


if __name__ == "__main__":
    Config.initialize()

    print("Default k:", Config.get('enumeration', 'default_k'))
    print("Group tolerance:", Config.get('geometry', 'group_tol'))
    print("Palette size:", len(Config.get('render', 'palette')))

    reference = Config.get_table1_reference()
    print(f"\n(4^5) full: {reference[('full', 4, 5)]['count']}")
    print(f"(4^5) direct: {reference[('direct', 4, 5)]['count']}")
