"""
Golden Figures
==============
Four reference SVGs frozen under regression/golden/: an emphasised Full
(4^5) colouring with its dual, a chiral Direct (4^5) colouring, an
emphasised Direct (3^8) colouring and the half-turn coincidence figure of
(3^8).

Figures are drawn with default RenderOptions so config edits never change
them. Once a file is stored, any byte difference is a regression;
regenerate deliberately with `python make_golden.py --overwrite`.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from loguru import logger

from core.colourings import colour_patch, is_chiral
from core.low_index import enumerate_colourings
from geometry.coincidence import coincidence_figure
from geometry.hyperbolic import characteristic_triangle
from geometry.tiling import build_patch
from render.svg_renderer import RenderOptions, render
from tessella_logging.logger import ReportWriter
from tessella_logging.schemas import Convention, Mode

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@dataclass(frozen=True)
class GoldenFigure:
    """One frozen figure: what to build and how to draw it."""
    name: str
    p: int
    q: int
    mode: Mode
    depth: int
    record: Optional[int] = None  # None with chiral=True: first chiral record
    chiral: bool = False
    emphasis: Optional[Tuple[int, int]] = None
    dual: bool = False
    half_turn: bool = False

    @property
    def filename(self) -> str:
        return f"{self.name}.svg"


FIGURES: List[GoldenFigure] = [
    GoldenFigure("four_five_full_emphasis", 4, 5, Mode.FULL, 4, record=0, emphasis=(1, 2), dual=True),
    GoldenFigure("four_five_direct_chiral", 4, 5, Mode.DIRECT, 4, chiral=True),
    GoldenFigure("three_eight_direct_emphasis", 3, 8, Mode.DIRECT, 4, record=1, emphasis=(1, 2)),
    GoldenFigure("three_eight_half_turn", 3, 8, Mode.FULL, 6, half_turn=True),
]


def _record(fig: GoldenFigure):
    records = enumerate_colourings(fig.p, fig.q, 10, fig.mode, Convention.MIRROR)
    if fig.chiral:
        return next(rec for rec in records if is_chiral(rec))
    return records[fig.record]


def render_figure(fig: GoldenFigure) -> str:
    """SVG text of a golden figure, computed from scratch."""
    patch = build_patch(fig.p, fig.q, fig.depth, fig.mode)
    if fig.half_turn:
        tri = characteristic_triangle(fig.p, fig.q)
        return render(patch, report=coincidence_figure(patch, tri.O, math.pi))
    opts = RenderOptions(emphasis=fig.emphasis, show_dual=fig.dual)
    return render(patch, colour_patch(_record(fig), patch), opts=opts)


def golden_path(fig: GoldenFigure, directory: Path = GOLDEN_DIR) -> Path:
    return Path(directory) / fig.filename


def compare_figure(fig: GoldenFigure, directory: Path = GOLDEN_DIR) -> Optional[bool]:
    """
    Compare a fresh rendering with the stored file.

    Returns:
        True/False for identical/different bytes, None when nothing is stored
    """
    path = golden_path(fig, directory)
    if not path.exists():
        return None
    same = path.read_text(encoding="utf-8") == render_figure(fig)
    if not same:
        logger.error(f"Golden figure {fig.name} differs from {path}")
    return same


def write_goldens(directory: Path = GOLDEN_DIR, overwrite: bool = False) -> Dict[str, Path]:
    """
    Store every golden figure that is missing (or all of them with overwrite).

    Returns:
        figure name -> path written
    """
    writer = ReportWriter(directory)
    written = {}
    for fig in FIGURES:
        if golden_path(fig, directory).exists() and not overwrite:
            logger.debug(f"Keeping {fig.filename}")
            continue
        written[fig.name] = writer.write_svg(fig.filename, render_figure(fig))
    return written

