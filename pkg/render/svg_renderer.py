"""
SVG Renderer
============
Poincaré-disc figures of tiling patches as deterministic SVG 1.1 text.

Every tile is one <path> in the "tiles" group, drawn with geodesic arcs;
the dual overlay, if requested, lives in its own group. Numbers are
printed with a fixed count of significant digits so repeated runs give
byte-identical files.

Fill modes:
- no colouring: a single neutral fill
- colouring: palette colour per colour id
- emphasis (a, b): a black, b gray, the rest pale
- quotient shading: colours in one block share the block's hue, lighter
  for each further member
- highlight: listed tiles take the highlight fill
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from geometry.hyperbolic import DiscPoint, Geodesic
from geometry.tiling import TilingPatch, dual_overlay
from utils.errors import CoincidentPoints

DEFAULT_PALETTE = (
    "#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee",
    "#aa3377", "#bbbbbb", "#ee8866", "#44bb99", "#994455",
)
COLLINEAR_TOL = 1e-9


@dataclass
class RenderOptions:
    """Figure size, colours and overlays."""
    size: int = 800
    palette: Tuple[str, ...] = DEFAULT_PALETTE
    emphasis: Optional[Tuple[int, int]] = None
    show_dual: bool = False
    highlight: Optional[Sequence[int]] = None
    quotient_shading: Optional[Dict[int, Tuple[int, int]]] = None
    edge_stroke: float = 0.6
    dual_stroke: float = 0.35
    boundary_stroke: float = 1.2
    significant_digits: int = 9
    emphasis_first: str = "#000000"
    emphasis_second: str = "#808080"
    emphasis_rest: str = "#f2f2f2"
    highlight_colour: str = "#e6550d"
    dual_colour: str = "#d62728"
    edge_colour: str = "#333333"
    plain_fill: str = "#ffffff"

    def __post_init__(self):
        if self.size <= 0:
            raise ValueError(f"size must be > 0, got {self.size}")
        if len(set(c.lower() for c in self.palette)) != len(self.palette):
            raise ValueError("Palette entries must be pairwise distinct")
        if self.emphasis is not None and self.emphasis[0] == self.emphasis[1]:
            raise ValueError(f"Emphasis needs two different colours, got {self.emphasis}")

    @classmethod
    def from_config(cls, render_cfg: Dict, **overrides) -> "RenderOptions":
        """Build options from the `render` section of tessella_params.yaml."""
        emphasis = render_cfg.get("emphasis", {})
        values = dict(
            size=render_cfg.get("size", 800),
            palette=tuple(render_cfg.get("palette", DEFAULT_PALETTE)),
            edge_stroke=render_cfg.get("edge_stroke", 0.6),
            dual_stroke=render_cfg.get("dual_stroke", 0.35),
            boundary_stroke=render_cfg.get("boundary_stroke", 1.2),
            significant_digits=render_cfg.get("significant_digits", 9),
            emphasis_first=emphasis.get("first", "#000000"),
            emphasis_second=emphasis.get("second", "#808080"),
            emphasis_rest=emphasis.get("rest", "#f2f2f2"),
            highlight_colour=render_cfg.get("highlight", "#e6550d"),
            dual_colour=render_cfg.get("dual_colour", "#d62728"),
            edge_colour=render_cfg.get("edge_colour", "#333333"),
        )
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True)
class GeodesicArc:
    """Geodesic segment from a to b: straight, or on a circle orthogonal to the unit circle."""
    a: DiscPoint
    b: DiscPoint
    centre: Optional[Tuple[float, float]] = None
    radius: Optional[float] = None
    sweep: int = 0

    @property
    def is_straight(self) -> bool:
        return self.centre is None

    def fragment(self, size: int = 800, digits: int = 9) -> str:
        """Path command drawing the segment from the current point a to b."""
        x, y = _to_px(self.b, size)
        if self.is_straight:
            return f"L {_num(x, digits)} {_num(y, digits)}"
        r = _num(self.radius * size / 2.0, digits)
        return f"A {r} {r} 0 0 {self.sweep} {_num(x, digits)} {_num(y, digits)}"


def _num(x: float, digits: int) -> str:
    text = f"{x:.{digits}g}"
    if "e" in text:
        text = f"{x:.{digits}f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _to_px(pt: DiscPoint, size: int) -> Tuple[float, float]:
    half = size / 2.0
    return half * (1.0 + pt.u), half * (1.0 - pt.v)


def geodesic_arc(a: DiscPoint, b: DiscPoint) -> GeodesicArc:
    """
    Geodesic segment between two disc points.

    Raises:
        CoincidentPoints: a equals b
    """
    if math.hypot(a.u - b.u, a.v - b.v) < COLLINEAR_TOL:
        raise CoincidentPoints(f"Cannot draw a geodesic from ({a.u}, {a.v}) to itself")
    if abs(a.u * b.v - a.v * b.u) < COLLINEAR_TOL:
        return GeodesicArc(a, b)
    g = Geodesic.through(a, b)
    if g.is_diameter:
        return GeodesicArc(a, b)
    cx, cy = g.centre
    cross = (a.u - cx) * (b.v - cy) - (a.v - cy) * (b.u - cx)
    # counter-clockwise in the disc is clockwise on screen (y flipped)
    return GeodesicArc(a, b, centre=(cx, cy), radius=g.radius, sweep=1 if cross > 0 else 0)


def _shade(hex_colour: str, t: float) -> str:
    """Mix a colour with white; t = 0 keeps it, t = 1 gives white."""
    rgb = [int(hex_colour[i:i + 2], 16) for i in (1, 3, 5)]
    mixed = [round(c + (255 - c) * t) for c in rgb]
    return "#" + "".join(f"{c:02x}" for c in mixed)


def _loop_path(points: Sequence[DiscPoint], size: int, digits: int) -> str:
    x, y = _to_px(points[0], size)
    parts = [f"M {_num(x, digits)} {_num(y, digits)}"]
    for a, b in zip(points, list(points[1:]) + [points[0]]):
        parts.append(geodesic_arc(a, b).fragment(size, digits))
    parts.append("Z")
    return " ".join(parts)


def _segment_path(a: DiscPoint, b: DiscPoint, size: int, digits: int) -> str:
    x, y = _to_px(a, size)
    return f"M {_num(x, digits)} {_num(y, digits)} {geodesic_arc(a, b).fragment(size, digits)}"


def tile_fill(colour: Optional[int], tile: int, opts: RenderOptions) -> str:
    if opts.highlight is not None and tile in opts.highlight:
        return opts.highlight_colour
    if colour is None:
        return opts.plain_fill
    if opts.emphasis is not None:
        if colour == opts.emphasis[0]:
            return opts.emphasis_first
        if colour == opts.emphasis[1]:
            return opts.emphasis_second
        return opts.emphasis_rest
    if opts.quotient_shading is not None:
        block, position = opts.quotient_shading[colour]
        base = opts.palette[block % len(opts.palette)]
        return _shade(base, min(0.8, 0.45 * position))
    return opts.palette[(colour - 1) % len(opts.palette)]


def render(patch: TilingPatch, colouring=None, report=None, opts: Optional[RenderOptions] = None) -> str:
    """
    SVG document for a patch.

    Args:
        patch: tiling patch
        colouring: optional Colouring of this patch
        report: optional CoincidenceFigure; its highlight set is drawn
        opts: RenderOptions

    Raises:
        ValueError: emphasis colours outside 1..k
    """
    opts = opts or RenderOptions()
    if report is not None and opts.highlight is None:
        opts = RenderOptions(**{**vars(opts), "highlight": list(report.highlight)})
    size, digits = opts.size, opts.significant_digits
    colours: List[Optional[int]] = [None] * len(patch.tiles)
    if colouring is not None:
        colours = list(colouring.colours)
        k = colouring.source.k
        if opts.emphasis is not None and not all(1 <= c <= k for c in opts.emphasis):
            raise ValueError(f"Emphasis colours {opts.emphasis} outside 1..{k}")
        if k > len(opts.palette) and opts.emphasis is None:
            logger.warning(f"{k} colours but only {len(opts.palette)} palette entries; hues repeat")

    half = _num(size / 2.0, digits)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<circle id="disc" cx="{half}" cy="{half}" r="{half}" fill="#ffffff" stroke="none"/>',
        f'<g id="tiles" stroke="{opts.edge_colour}" stroke-width="{_num(opts.edge_stroke, digits)}" '
        f'stroke-linejoin="round">',
    ]
    for tile, colour in zip(patch.tiles, colours):
        css = f' class="c{colour}"' if colour is not None else ""
        lines.append(
            f'<path id="t{tile.index}"{css} fill="{tile_fill(colour, tile.index, opts)}" '
            f'd="{_loop_path(tile.vertices, size, digits)}"/>'
        )
    lines.append("</g>")

    if opts.show_dual:
        lines.append(
            f'<g id="dual" fill="none" stroke="{opts.dual_colour}" '
            f'stroke-width="{_num(opts.dual_stroke, digits)}">'
        )
        for seg in dual_overlay(patch):
            lines.append(f'<path d="{_segment_path(seg.a, seg.b, size, digits)}"/>')
        lines.append("</g>")

    lines.append(
        f'<circle id="boundary" cx="{half}" cy="{half}" r="{half}" fill="none" '
        f'stroke="#000000" stroke-width="{_num(opts.boundary_stroke, digits)}"/>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
