"""Packaged YAML configuration for tessella."""

from pathlib import Path

CONFIG_DIR = Path(__file__).resolve().parent
