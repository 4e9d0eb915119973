"""
Tiling Builder
==============
Finite patches of a hyperbolic (p^q) with word-labelled tiles.

Tiles are discovered breadth-first over edge adjacency from the base tile
T0 (centre at the origin, one vertex on the positive u-axis). The tile
labelled w is word_to_motion(w)(T0); its neighbour across edge i is the
tile labelled e_i . w, where e_i crosses the i-th edge of T0:

    Full:   e_i = r2 (r0 r1)^i     (reflection in the edge)
    Direct: e_i = x y x^i          (half-turn about the edge midpoint)

Both alphabets discover the same tiles shell by shell. Within a shell the
order may differ: a tile word is only defined up to the tile stabilizer on
the right, which permutes the edge index.

Depth counts shells: depth 1 adds the p edge neighbours. Duplicates are
found by hashing centres quantized to 1e-9 in disc coordinates.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.spatial import cKDTree

from core.presentations import Presentation, TilingSchlafli, Word, presentation_for
from geometry.hyperbolic import (
    DiscPoint,
    Geodesic,
    Motion,
    apply,
    characteristic_triangle,
    identity_motion,
    renormalize,
    rotation_about_origin,
    word_to_motion,
    generator_motions,
)
from tessella_logging.schemas import SCHEMA, Mode

DEDUP_QUANTUM = 1e-9
PATCH_SAFETY_MARGIN = 1e-9
LOCATE_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class Tile:
    """One p-gon of the patch."""
    index: int
    word: Word
    centre: DiscPoint
    vertices: Tuple[DiscPoint, ...]
    depth: int
    motion: Motion = field(repr=False)
    vertex_ids: Tuple[int, ...] = ()


@dataclass(frozen=True)
class DualSegment:
    """Dual edge joining the centres of two adjacent tiles."""
    tiles: Tuple[int, int]
    a: DiscPoint
    b: DiscPoint

    def geodesic(self) -> Geodesic:
        return Geodesic.through(self.a, self.b)


@dataclass(eq=False)
class TilingPatch:
    """Finite patch of (p^q) under one mode's word alphabet."""
    p: int
    q: int
    depth: int
    mode: Mode
    presentation: Presentation
    tiles: List[Tile]
    adjacency: List[Tuple[int, int]]
    vertices: List[DiscPoint]
    incidence: List[List[int]]  # tiles around each vertex
    truncated: bool = False
    covered_radius: float = 0.0
    _tree: Optional[cKDTree] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.tiles)

    def neighbours(self, i: int) -> List[int]:
        out = []
        for a, b in self.adjacency:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def interior_tiles(self) -> List[Tile]:
        """Tiles whose edge neighbours all lie in the patch."""
        return [t for t in self.tiles if t.depth < self.depth]

    def interior_vertices(self) -> List[int]:
        """Vertices whose q surrounding tiles are all in the patch."""
        reach = self.q // 2
        out = []
        for v, tiles in enumerate(self.incidence):
            if min(self.tiles[t].depth for t in tiles) + reach <= self.depth:
                out.append(v)
        return out

    def tile_centres(self) -> List[DiscPoint]:
        return [t.centre for t in self.tiles]

    def locate(self, pt: DiscPoint, tol: float = LOCATE_TOL) -> Optional[int]:
        """Index of the tile centred at pt, if any."""
        if self._tree is None:
            self._tree = cKDTree(np.array([[c.u, c.v] for c in self.tile_centres()]))
        dist, idx = self._tree.query([pt.u, pt.v], distance_upper_bound=tol)
        if not math.isfinite(dist):
            return None
        return int(idx)

    def to_dict(self) -> Dict[str, object]:
        """Patch JSON: words, centres and vertex loops."""
        pres = self.presentation
        return {
            "schema": SCHEMA,
            "p": self.p,
            "q": self.q,
            "mode": self.mode.value,
            "depth": self.depth,
            "truncated": self.truncated,
            "covered_radius": _fmt(self.covered_radius),
            "tiles": [
                {
                    "index": t.index,
                    "word": pres.format_word(t.word),
                    "depth": t.depth,
                    "centre": [_fmt(t.centre.u), _fmt(t.centre.v)],
                    "vertices": [[_fmt(v.u), _fmt(v.v)] for v in t.vertices],
                }
                for t in self.tiles
            ],
            "adjacency": [list(pair) for pair in self.adjacency],
        }


def _fmt(x: float) -> float:
    return float(f"{x:.12g}")


class _PointIndex:
    """Quantized-coordinate hash with a neighbouring-cell check."""

    def __init__(self, quantum: float):
        self.quantum = quantum
        self.cells: Dict[Tuple[int, int], int] = {}

    def _cell(self, u: float, v: float) -> Tuple[int, int]:
        return (int(round(u / self.quantum)), int(round(v / self.quantum)))

    def find(self, u: float, v: float) -> Optional[int]:
        cu, cv = self._cell(u, v)
        for du in (-1, 0, 1):
            for dv in (-1, 0, 1):
                hit = self.cells.get((cu + du, cv + dv))
                if hit is not None:
                    return hit
        return None

    def add(self, u: float, v: float, value: int) -> None:
        self.cells[self._cell(u, v)] = value


def edge_words(pres: Presentation) -> List[Word]:
    """Word e_i crossing the i-th edge of the base tile."""
    p = pres.p
    if pres.mode == Mode.FULL:
        return [pres.word("r2 " + "r0 r1 " * i) for i in range(p)]
    return [pres.word("x y " + "x " * i) for i in range(p)]


def _disc_of(matrix: np.ndarray) -> Tuple[float, float, float]:
    """Disc coordinates and radius of the image of the origin."""
    X, Y, T = matrix[:, 2]
    u, v = X / (1.0 + T), Y / (1.0 + T)
    return u, v, math.hypot(u, v)


def build_patch(
    p: int,
    q: int,
    depth: int,
    mode: Mode = Mode.FULL,
    quantum: float = DEDUP_QUANTUM,
    safety_margin: float = PATCH_SAFETY_MARGIN,
) -> TilingPatch:
    """
    Breadth-first patch of (p^q) with `depth` shells around the base tile.

    Args:
        p, q: hyperbolic Schläfli pair
        depth: number of shells (0 = base tile only)
        mode: word alphabet for tile labels
        quantum: centre dedup quantum (disc coordinates)
        safety_margin: tiles centred beyond radius 1 - margin are dropped

    Returns:
        TilingPatch; truncated is set when tiles were dropped

    Raises:
        ValueError: depth < 0
        UnsupportedGeometry: (p, q) not hyperbolic
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    gens = generator_motions(p, q, mode)
    pres = presentation_for(TilingSchlafli(p, q), mode)
    tri = characteristic_triangle(p, q)
    base_vertices = [rotation_about_origin(2.0 * math.pi * i / p) for i in range(p)]
    base_vertices = [apply(r, tri.V) for r in base_vertices]

    words = edge_words(pres)
    steps = [word_to_motion(w, gens).matrix for w in words]

    tiles: List[Tile] = []
    adjacency = set()
    centre_index = _PointIndex(quantum)
    vertex_index = _PointIndex(quantum)
    vertices: List[DiscPoint] = []
    incidence: List[List[int]] = []
    truncated = False
    missing_distance = math.inf

    def add_tile(word: Word, motion: Motion, d: int) -> int:
        centre = apply(motion, DiscPoint.origin())
        loop = tuple(apply(motion, v) for v in base_vertices)
        ids = []
        index = len(tiles)
        for pt in loop:
            vid = vertex_index.find(pt.u, pt.v)
            if vid is None:
                vid = len(vertices)
                vertices.append(pt)
                incidence.append([])
                vertex_index.add(pt.u, pt.v, vid)
            incidence[vid].append(index)
            ids.append(vid)
        tiles.append(Tile(index, word, centre, loop, d, motion, tuple(ids)))
        centre_index.add(centre.u, centre.v, index)
        return index

    add_tile(pres.word(), identity_motion(), 0)
    frontier = 0
    while frontier < len(tiles):
        tile = tiles[frontier]
        frontier += 1
        grow = tile.depth < depth
        for word, step in zip(words, steps):
            matrix = tile.motion.matrix @ step
            u, v, r = _disc_of(matrix)
            found = centre_index.find(u, v) if r < 1.0 - safety_margin else None
            if found is None:
                if grow and r < 1.0 - safety_margin:
                    motion = renormalize(Motion(matrix))
                    found = add_tile(pres.reduce(word + tile.word), motion, tile.depth + 1)
                else:
                    if grow:
                        truncated = True
                    missing_distance = min(missing_distance, math.acosh(max(1.0, matrix[2, 2])))
                    continue
            if found != tile.index:
                adjacency.add((min(found, tile.index), max(found, tile.index)))

    circumradius = math.acosh(1.0 / (math.tan(math.pi / p) * math.tan(math.pi / q)))
    covered = max(0.0, missing_distance - circumradius) if math.isfinite(missing_distance) else 0.0
    if truncated:
        logger.warning(
            f"({p}^{q}) depth {depth}: tiles beyond disc radius 1 - {safety_margin} were dropped"
        )
    logger.debug(f"({p}^{q}) depth {depth} {mode.value}: {len(tiles)} tiles, {len(vertices)} vertices")
    return TilingPatch(
        p=p,
        q=q,
        depth=depth,
        mode=mode,
        presentation=pres,
        tiles=tiles,
        adjacency=sorted(adjacency),
        vertices=vertices,
        incidence=incidence,
        truncated=truncated,
        covered_radius=covered,
    )


def dual_overlay(patch: TilingPatch) -> List[DualSegment]:
    """One segment per adjacent tile pair, joining the two centres."""
    return [
        DualSegment((a, b), patch.tiles[a].centre, patch.tiles[b].centre)
        for a, b in patch.adjacency
    ]


def vertex_set(patch: TilingPatch) -> List[DiscPoint]:
    """Deduplicated tile vertices in discovery order."""
    return list(patch.vertices)


def tile_centres(patch: TilingPatch) -> List[DiscPoint]:
    return patch.tile_centres()


def points_of(patch: TilingPatch, which: str) -> List[DiscPoint]:
    """'vertices' or 'centres' (the vertices of the dual tiling)."""
    if which == "vertices":
        return vertex_set(patch)
    if which == "centres":
        return tile_centres(patch)
    raise ValueError(f"Unknown point set '{which}' (expected vertices or centres)")


def incident_tiles(patch: TilingPatch, vertex_ids: Sequence[int]) -> List[int]:
    """Sorted tiles touching any of the given vertices."""
    out = set()
    for v in vertex_ids:
        out.update(patch.incidence[v])
    return sorted(out)
