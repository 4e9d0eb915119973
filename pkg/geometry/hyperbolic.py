"""
Hyperbolic Geometry
===================
Poincaré-disc points and hyperboloid-model motions for hyperbolic (p^q).

Motions are 3x3 Lorentz matrices M with M^T J M = J, J = diag(1, 1, -1),
acting on the upper sheet X^2 + Y^2 - T^2 = -1. Disc coordinates appear
only at the API boundary:

    disc -> hyperboloid: (2u, 2v, 1 + r^2) / (1 - r^2)
    hyperboloid -> disc: (X, Y) / (1 + T)

Composition follows coset tracing: compose(a, b) applies a first, then b,
and word_to_motion(g1 ... gn) = M(gn) o ... o M(g1).
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from core.presentations import (
    GeneratorSymbol,
    GeometryKind,
    TilingSchlafli,
    Word,
    classify_geometry,
    presentation_for,
)
from tessella_logging.schemas import Mode
from utils.errors import NumericOverflow, UnsupportedGeometry

J = np.diag([1.0, 1.0, -1.0])

STRUCTURAL_TOL = 1e-9
GROUP_TOL = 1e-8
DISC_RADIUS_CAP = 1e-12
RENORMALIZE_EVERY = 16
MAX_ENTRY = 1e12


def lorentz(a: np.ndarray, b: np.ndarray) -> float:
    """<a, b> = a_X b_X + a_Y b_Y - a_T b_T."""
    return float(a[0] * b[0] + a[1] * b[1] - a[2] * b[2])


@dataclass(frozen=True)
class DiscPoint:
    """Point of the open unit disc."""
    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise NumericOverflow(f"Non-finite disc point ({self.u}, {self.v})")
        if math.hypot(self.u, self.v) >= 1.0 - DISC_RADIUS_CAP:
            raise NumericOverflow(
                f"Disc point ({self.u:.15f}, {self.v:.15f}) is within {DISC_RADIUS_CAP} of the boundary"
            )

    @classmethod
    def origin(cls) -> "DiscPoint":
        return cls(0.0, 0.0)

    @classmethod
    def polar(cls, radius: float, angle: float) -> "DiscPoint":
        return cls(radius * math.cos(angle), radius * math.sin(angle))

    @classmethod
    def from_hyperboloid(cls, X: np.ndarray) -> "DiscPoint":
        """
        Raises:
            NumericOverflow: the point is too far out to represent in the disc
        """
        if not np.all(np.isfinite(X)) or X[2] > MAX_ENTRY:
            raise NumericOverflow(f"Hyperboloid point {X} escapes the numeric disc bound")
        return cls(float(X[0] / (1.0 + X[2])), float(X[1] / (1.0 + X[2])))

    @property
    def radius(self) -> float:
        return math.hypot(self.u, self.v)

    def to_hyperboloid(self) -> np.ndarray:
        r2 = self.u * self.u + self.v * self.v
        s = 1.0 - r2
        return np.array([2.0 * self.u / s, 2.0 * self.v / s, (1.0 + r2) / s])

    def as_list(self) -> list:
        return [self.u, self.v]


@dataclass(frozen=True, eq=False)
class Motion:
    """Isometry of the hyperbolic plane as a Lorentz matrix."""
    matrix: np.ndarray

    @property
    def orientation(self) -> int:
        """+1 for rotations and translations, -1 for reflections."""
        return 1 if np.linalg.det(self.matrix) > 0 else -1

    def inverse(self) -> "Motion":
        return Motion(J @ self.matrix.T @ J)

    def lorentz_defect(self) -> float:
        """max |M^T J M - J|."""
        return float(np.max(np.abs(self.matrix.T @ J @ self.matrix - J)))

    def close_to(self, other: "Motion", tol: float = GROUP_TOL) -> bool:
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=tol))

    def is_identity(self, tol: float = GROUP_TOL) -> bool:
        return self.close_to(identity_motion(), tol)


def identity_motion() -> Motion:
    return Motion(np.eye(3))


@dataclass(frozen=True)
class Geodesic:
    """
    A diameter (unit direction) or a circular arc orthogonal to the unit
    circle (centre and radius with |centre|^2 = radius^2 + 1).
    """
    direction: Optional[Tuple[float, float]] = None
    centre: Optional[Tuple[float, float]] = None
    radius: Optional[float] = None

    def __post_init__(self):
        if (self.direction is None) == (self.centre is None):
            raise ValueError("Geodesic needs exactly one of direction or centre")
        if self.centre is not None:
            if self.radius is None or self.radius <= 0:
                raise ValueError(f"Arc geodesic needs a positive radius, got {self.radius}")
            c2 = self.centre[0] ** 2 + self.centre[1] ** 2
            if abs(c2 - self.radius ** 2 - 1.0) > STRUCTURAL_TOL * max(1.0, c2):
                raise ValueError(
                    f"Circle centre {self.centre} radius {self.radius} is not orthogonal to the unit circle"
                )

    @property
    def is_diameter(self) -> bool:
        return self.direction is not None

    @classmethod
    def diameter(cls, angle: float) -> "Geodesic":
        return cls(direction=(math.cos(angle), math.sin(angle)))

    @classmethod
    def from_normal(cls, n: np.ndarray) -> "Geodesic":
        """Geodesic {X : <n, X> = 0} for a spacelike n."""
        n = n / math.sqrt(lorentz(n, n))
        if abs(n[2]) < STRUCTURAL_TOL:
            d = np.array([n[1], -n[0]])
            d = d / np.linalg.norm(d)
            return cls(direction=(float(d[0]), float(d[1])))
        if n[2] < 0:
            n = -n
        radius = 1.0 / n[2]
        return cls(centre=(float(n[0] * radius), float(n[1] * radius)), radius=float(radius))

    @classmethod
    def through(cls, a: DiscPoint, b: DiscPoint) -> "Geodesic":
        """
        Raises:
            ValueError: a and b coincide
        """
        P, Q = a.to_hyperboloid(), b.to_hyperboloid()
        n = J @ np.cross(P, Q)
        if lorentz(n, n) <= STRUCTURAL_TOL ** 2:
            raise ValueError(f"Points {a} and {b} do not determine a geodesic")
        return cls.from_normal(n)

    def normal(self) -> np.ndarray:
        """Unit spacelike normal n with <n, n> = 1."""
        if self.is_diameter:
            dx, dy = self.direction
            return np.array([-dy, dx, 0.0])
        cx, cy = self.centre
        return np.array([cx, cy, 1.0]) / self.radius

    def contains(self, pt: DiscPoint, tol: float = STRUCTURAL_TOL) -> bool:
        return abs(lorentz(self.normal(), pt.to_hyperboloid())) <= tol * max(1.0, pt.to_hyperboloid()[2])


@dataclass(frozen=True)
class CharacteristicTriangle:
    """Right triangle O (face centre), M (edge midpoint), V (tile vertex)."""
    p: int
    q: int
    O: DiscPoint
    V: DiscPoint
    M: DiscPoint
    mirrors: Tuple[Geodesic, Geodesic, Geodesic]  # sides OM, OV, MV

    def angles(self) -> Tuple[float, float, float]:
        """Interior angles at O, V, M."""
        return (
            interior_angle(self.O, self.V, self.M),
            interior_angle(self.V, self.O, self.M),
            interior_angle(self.M, self.O, self.V),
        )

    def area(self) -> float:
        """Angle defect pi - (pi/p + pi/q + pi/2)."""
        return math.pi * (1.0 - 1.0 / self.p - 1.0 / self.q - 0.5)


def _require_hyperbolic(p: int, q: int) -> TilingSchlafli:
    s = TilingSchlafli(p, q)
    geometry = classify_geometry(s)
    if geometry.kind != GeometryKind.HYPERBOLIC:
        raise UnsupportedGeometry(
            f"{s.label} is {geometry.kind.value}; only hyperbolic tilings have disc geometry"
        )
    return s


def disc_radius(distance: float) -> float:
    """Disc radius of a point at hyperbolic distance `distance` from the origin."""
    return math.tanh(distance / 2.0)


def characteristic_triangle(p: int, q: int) -> CharacteristicTriangle:
    """
    O at the origin, V on the positive u-axis, M at angle pi/p.

    cosh OV = cot(pi/p) cot(pi/q), cosh OM = cos(pi/q) / sin(pi/p).

    Raises:
        UnsupportedGeometry: (p, q) is spherical or Euclidean
    """
    _require_hyperbolic(p, q)
    a, b = math.pi / p, math.pi / q
    ov = math.acosh(1.0 / (math.tan(a) * math.tan(b)))
    om = math.acosh(math.cos(b) / math.sin(a))
    O = DiscPoint.origin()
    V = DiscPoint(disc_radius(ov), 0.0)
    M = DiscPoint.polar(disc_radius(om), a)
    mirrors = (Geodesic.diameter(a), Geodesic.diameter(0.0), Geodesic.through(M, V))
    return CharacteristicTriangle(p=p, q=q, O=O, V=V, M=M, mirrors=mirrors)


def interior_angle(at: DiscPoint, b: DiscPoint, c: DiscPoint) -> float:
    """Angle at `at` between the geodesics towards b and towards c."""
    A, B, C = at.to_hyperboloid(), b.to_hyperboloid(), c.to_hyperboloid()
    tb = B + lorentz(A, B) * A
    tc = C + lorentz(A, C) * A
    cos_angle = lorentz(tb, tc) / math.sqrt(lorentz(tb, tb) * lorentz(tc, tc))
    return math.acos(max(-1.0, min(1.0, cos_angle)))


def reflection_in(g: Geodesic) -> Motion:
    """R = I - 2 n n^T J for the unit normal n of g."""
    n = g.normal()
    return Motion(np.eye(3) - 2.0 * np.outer(n, n) @ J)


def rotation_about_origin(angle: float) -> Motion:
    c, s = math.cos(angle), math.sin(angle)
    return Motion(np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]))


def boost_to(pt: DiscPoint) -> Motion:
    """Translation along the geodesic from the origin to pt."""
    X = pt.to_hyperboloid()
    x, T = X[:2], X[2]
    m = np.eye(3)
    m[:2, :2] += np.outer(x, x) / (1.0 + T)
    m[:2, 2] = x
    m[2, :2] = x
    m[2, 2] = T
    return Motion(m)


def rotation_about(centre: DiscPoint, angle: float) -> Motion:
    """Counter-clockwise rotation by `angle` about `centre`."""
    b = boost_to(centre)
    return Motion(b.matrix @ rotation_about_origin(angle).matrix @ b.inverse().matrix)


def renormalize(m: Motion) -> Motion:
    """
    Lorentz Gram-Schmidt on the columns, timelike column first.

    Raises:
        NumericOverflow: a column has lost its Lorentz norm
    """
    cols = [m.matrix[:, j].copy() for j in range(3)]
    done = []
    for j in (2, 0, 1):
        v = cols[j]
        for e in done:
            v = v - lorentz(v, e) / lorentz(e, e) * e
        norm = abs(lorentz(v, v))
        if not math.isfinite(norm) or norm < STRUCTURAL_TOL:
            raise NumericOverflow("Motion is too far from a Lorentz matrix to renormalize")
        v = v / math.sqrt(norm)
        cols[j] = v
        done.append(v)
    return Motion(np.column_stack(cols))


def _checked(m: Motion) -> Motion:
    """Renormalize when drifted; fail when precision is gone."""
    if m.lorentz_defect() <= GROUP_TOL:
        return m
    m = renormalize(m)
    defect = m.lorentz_defect()
    if defect > GROUP_TOL:
        raise NumericOverflow(
            f"Lorentz defect {defect:.1e} exceeds {GROUP_TOL:.0e}; the word is too long for double precision"
        )
    return m


def compose(a: Motion, b: Motion) -> Motion:
    """a first, then b."""
    out = b.matrix @ a.matrix
    if not np.all(np.isfinite(out)) or np.max(np.abs(out)) > MAX_ENTRY:
        raise NumericOverflow("Motion entries exceed the numeric bound")
    return Motion(out)


def apply(m: Motion, pt: DiscPoint) -> DiscPoint:
    """
    Raises:
        NumericOverflow: the image leaves the numerically safe disc
    """
    return DiscPoint.from_hyperboloid(m.matrix @ pt.to_hyperboloid())


def hyperbolic_distance(a: DiscPoint, b: DiscPoint) -> float:
    """2 artanh(|a - b| / |1 - a conj(b)|)."""
    za, zb = complex(a.u, a.v), complex(b.u, b.v)
    ratio = abs(za - zb) / abs(1.0 - za * zb.conjugate())
    return 2.0 * math.atanh(min(ratio, 1.0 - 1e-16))


def _triangle_motions(p: int, q: int) -> Tuple[Motion, Motion, Motion]:
    tri = characteristic_triangle(p, q)
    return tuple(reflection_in(g) for g in tri.mirrors)


def generator_motions(p: int, q: int, mode: Mode) -> Dict[GeneratorSymbol, Motion]:
    """
    Motions of the mode's generators.

    Full: r0, r1, r2 are the reflections in the sides OM, OV, MV.
    Direct: x = r0 r1 (rotation by 2pi/p about O), y = r1 r2 (by 2pi/q about V).

    Raises:
        UnsupportedGeometry: (p, q) not hyperbolic
        NumericOverflow: a relator fails to map to the identity
    """
    s = _require_hyperbolic(p, q)
    pres = presentation_for(s, mode)
    m0, m1, m2 = _triangle_motions(p, q)
    if mode == Mode.FULL:
        motions = (m0, m1, m2)
    else:
        motions = (compose(m0, m1), compose(m1, m2))
    gens = {g: motions[g.index] for g in pres.generators}
    for relator in pres.relators:
        if not word_to_motion(relator, gens).is_identity(GROUP_TOL):
            raise NumericOverflow(f"Relator {pres.format_word(relator)} is not the identity motion")
    return gens


def word_to_motion(w: Word, gens: Dict[GeneratorSymbol, Motion]) -> Motion:
    """
    Homomorphic extension of the generator motions in tracing order.

    Every RENORMALIZE_EVERY letters and at the end the product is
    renormalized if it has drifted past GROUP_TOL.

    Raises:
        NumericOverflow: entries grow past the numeric bound, or the
            product stays further than GROUP_TOL from a Lorentz matrix
    """
    by_index = {g.index: m for g, m in gens.items()}
    inverses: Dict[int, Motion] = {}
    current = identity_motion()
    for step, (g, e) in enumerate(w.letters, start=1):
        if e > 0:
            m = by_index[g]
        else:
            if g not in inverses:
                inverses[g] = by_index[g].inverse()
            m = inverses[g]
        current = compose(current, m)
        if step % RENORMALIZE_EVERY == 0:
            current = _checked(current)
    return _checked(current)
