"""SVG figures of tiling patches."""
