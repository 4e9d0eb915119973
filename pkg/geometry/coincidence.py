"""
Coincidence Sites
=================
Rotate a patch's point set about a centre by an angle that need not be a
symmetry, and report which points land on points again.

Candidates are restricted to points whose rotated image stays inside the
patch's covered radius (every tiling point there is in the patch), so a
missing partner is never a rim effect. A point on the rotation centre is
left out, since it matches itself at any angle.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.spatial import cKDTree

from geometry.hyperbolic import DiscPoint, apply, hyperbolic_distance, rotation_about
from geometry.tiling import TilingPatch, incident_tiles, points_of
from tessella_logging.schemas import SCHEMA
from utils.errors import CentreOutsidePatch

DEFAULT_TOL = 1e-6


@dataclass
class CoincidenceReport:
    """Outcome of one rotate-and-match run."""
    centre: DiscPoint
    angle: float
    points: str
    tolerance: float
    safe_radius: float
    candidates: List[int] = field(default_factory=list)
    matched: List[Tuple[int, int]] = field(default_factory=list)  # (i, j): R(pt_i) = pt_j

    @property
    def candidate_count(self) -> int:
        return len(self.candidates)

    @property
    def fraction(self) -> float:
        if not self.candidates:
            return 0.0
        return len(self.matched) / len(self.candidates)

    def to_dict(self) -> Dict[str, object]:
        return {
            "schema": SCHEMA,
            "centre": [self.centre.u, self.centre.v],
            "angle": self.angle,
            "angle_degrees": round(math.degrees(self.angle), 9),
            "points": self.points,
            "tolerance": self.tolerance,
            "safe_radius": round(self.safe_radius, 12),
            "candidate_count": self.candidate_count,
            "matched_count": len(self.matched),
            "fraction": self.fraction,
            "matched": [list(pair) for pair in self.matched],
        }


def _on_centre(pt: DiscPoint, centre: DiscPoint, tol: float) -> bool:
    return math.hypot(pt.u - centre.u, pt.v - centre.v) <= tol


def rotate_and_match(
    patch: TilingPatch,
    centre: DiscPoint,
    angle: float,
    tol: float = DEFAULT_TOL,
    points: str = "vertices",
    margin: float = 0.0,
) -> CoincidenceReport:
    """
    Match the rotated point set against the original one.

    Args:
        patch: tiling patch
        centre: rotation centre
        angle: radians, counter-clockwise
        tol: matching distance in disc coordinates
        points: "vertices" or "centres" (vertices of the dual tiling)
        margin: extra hyperbolic distance kept between images and the covered rim

    Returns:
        CoincidenceReport with a one-to-one matching

    Raises:
        ValueError: tol <= 0 or unknown point set
        CentreOutsidePatch: centre not inside the covered radius
    """
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    pts = points_of(patch, points)
    offset = hyperbolic_distance(DiscPoint.origin(), centre)
    safe = patch.covered_radius - offset - margin
    if offset >= patch.covered_radius or safe < 0:
        raise CentreOutsidePatch(
            f"Centre ({centre.u:.6f}, {centre.v:.6f}) at distance {offset:.6f} is outside "
            f"the covered radius {patch.covered_radius:.6f} (margin {margin})"
        )

    candidates = [
        i for i, pt in enumerate(pts)
        if hyperbolic_distance(centre, pt) <= safe + 1e-12 and not _on_centre(pt, centre, tol)
    ]
    report = CoincidenceReport(centre, angle, points, tol, safe, candidates)
    if not candidates:
        return report

    rotation = rotation_about(centre, angle)
    images = np.array([apply(rotation, pts[i]).as_list() for i in candidates])
    tree = cKDTree(np.array([pt.as_list() for pt in pts]))
    dist, nearest = tree.query(images, distance_upper_bound=tol)

    best: Dict[int, Tuple[float, int]] = {}
    for i, d, j in zip(candidates, dist, nearest):
        if not math.isfinite(d):
            continue
        j = int(j)
        if j not in best or d < best[j][0]:
            best[j] = (float(d), i)
    report.matched = sorted((i, j) for j, (_, i) in best.items())
    logger.debug(
        f"rotate_and_match {points} angle={math.degrees(angle):.3f}deg: "
        f"{len(report.matched)}/{len(candidates)} matched"
    )
    return report


@dataclass
class CoincidenceFigure:
    """Tiles to highlight for a coincidence figure."""
    report: CoincidenceReport
    highlight: List[int]
    colours: Optional[List[int]] = None


def coincidence_figure(
    patch: TilingPatch,
    centre: DiscPoint,
    angle: float,
    colouring=None,
    tol: float = DEFAULT_TOL,
    points: str = "vertices",
) -> CoincidenceFigure:
    """
    Tiles incident to matched points: the tiles around matched vertices,
    or the tile itself for a matched centre.
    """
    report = rotate_and_match(patch, centre, angle, tol=tol, points=points)
    targets = sorted({j for _, j in report.matched} | {i for i, _ in report.matched})
    if points == "vertices":
        highlight = incident_tiles(patch, targets)
    else:
        highlight = targets
    colours = None
    if colouring is not None:
        colours = sorted({colouring.colours[t] for t in highlight})
    return CoincidenceFigure(report=report, highlight=highlight, colours=colours)
