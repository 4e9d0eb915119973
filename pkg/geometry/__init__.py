"""Poincaré-disc geometry, tiling patches and coincidence analysis."""
