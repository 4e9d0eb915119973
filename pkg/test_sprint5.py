"""
Sprint 5 Test Script
====================
Tests hyperbolic geometry and patch building.

Covers:
- Characteristic triangle (angles, distances, area)
- Generator motions (relators, orientation, isometry)
- Word-to-motion homomorphism
- Patch construction (counts, adjacency, vertex degree, labels)
"""

import math
import unittest

import numpy as np

from tessella_logging.schemas import Mode


class TestSprint5(unittest.TestCase):
    """Test class for Sprint 5 geometry tests."""

    def setUp(self):
        """Set up test fixtures before each test method."""
        from geometry.hyperbolic import DiscPoint

        self.points = [
            DiscPoint(0.1, 0.2),
            DiscPoint(-0.35, 0.4),
            DiscPoint(0.6, -0.1),
            DiscPoint(0.0, -0.72),
        ]

    def test_triangle_angles(self):
        """Test 1: Characteristic Triangle Angles and Sides"""
        from geometry.hyperbolic import characteristic_triangle, hyperbolic_distance

        for p, q in [(4, 5), (3, 8), (6, 4), (8, 3)]:
            tri = characteristic_triangle(p, q)
            at_o, at_v, at_m = tri.angles()
            self.assertAlmostEqual(at_o, math.pi / p, places=9)
            self.assertAlmostEqual(at_v, math.pi / q, places=9)
            self.assertAlmostEqual(at_m, math.pi / 2, places=9)

            ov = hyperbolic_distance(tri.O, tri.V)
            om = hyperbolic_distance(tri.O, tri.M)
            self.assertAlmostEqual(math.cosh(ov), 1.0 / (math.tan(math.pi / p) * math.tan(math.pi / q)), places=9)
            self.assertAlmostEqual(math.cosh(om), math.cos(math.pi / q) / math.sin(math.pi / p), places=9)
            for mirror, pts in zip(tri.mirrors, [(tri.O, tri.M), (tri.O, tri.V), (tri.M, tri.V)]):
                for pt in pts:
                    self.assertTrue(mirror.contains(pt))

        tri = characteristic_triangle(4, 5)
        self.assertAlmostEqual(math.cosh(hyperbolic_distance(tri.O, tri.V)), 1.0 / math.tan(math.pi / 5), places=9)

    def test_triangle_area(self):
        """Test 2: Triangle Area Matches Angle Defect"""
        from scipy.integrate import dblquad

        from geometry.hyperbolic import characteristic_triangle

        for p, q in [(3, 8), (4, 5)]:
            tri = characteristic_triangle(p, q)
            cx, cy = tri.mirrors[2].centre

            def rim(theta):
                # nearer intersection of the ray at theta with the circle through M and V
                dot = math.cos(theta) * cx + math.sin(theta) * cy
                return dot - math.sqrt(dot * dot - 1.0)

            area, _ = dblquad(
                lambda r, theta: 4.0 * r / (1.0 - r * r) ** 2,
                0.0, math.pi / p,
                lambda theta: 0.0, rim,
                epsabs=1e-11, epsrel=1e-11,
            )
            self.assertAlmostEqual(area, math.pi * (1 - 1 / p - 1 / q - 0.5), delta=1e-6)
            self.assertAlmostEqual(area, tri.area(), delta=1e-6)

    def test_unsupported_geometry(self):
        """Test 3: Only Hyperbolic Tilings Have Disc Geometry"""
        from geometry.hyperbolic import characteristic_triangle, generator_motions
        from geometry.tiling import build_patch
        from utils.errors import UnsupportedGeometry

        for p, q in [(3, 5), (4, 4), (6, 3)]:
            with self.assertRaises(UnsupportedGeometry):
                characteristic_triangle(p, q)
            with self.assertRaises(UnsupportedGeometry):
                generator_motions(p, q, Mode.FULL)
        with self.assertRaises(UnsupportedGeometry):
            build_patch(4, 4, 1)

    def test_generator_motions(self):
        """Test 4: Generator Motions Satisfy the Relators"""
        from core.presentations import TilingSchlafli, presentation_for
        from geometry.hyperbolic import DiscPoint, apply, characteristic_triangle, generator_motions, word_to_motion

        for p, q in [(4, 5), (3, 8)]:
            tri = characteristic_triangle(p, q)
            for mode in (Mode.FULL, Mode.DIRECT):
                gens = generator_motions(p, q, mode)
                pres = presentation_for(TilingSchlafli(p, q), mode)
                for relator in pres.relators:
                    self.assertTrue(word_to_motion(relator, gens).is_identity(1e-8))
                for g, m in gens.items():
                    self.assertLess(m.lorentz_defect(), 1e-10)
                    expected = -1 if mode == Mode.FULL else 1
                    self.assertEqual(m.orientation, expected, g.name)

            direct = {g.name: m for g, m in generator_motions(p, q, Mode.DIRECT).items()}
            fixed_o = apply(direct["x"], DiscPoint.origin())
            fixed_v = apply(direct["y"], tri.V)
            self.assertLess(math.hypot(fixed_o.u, fixed_o.v), 1e-9)
            self.assertLess(math.hypot(fixed_v.u - tri.V.u, fixed_v.v - tri.V.v), 1e-9)

    def test_distance(self):
        """Test 5: Disc Distance"""
        from geometry.hyperbolic import DiscPoint, hyperbolic_distance

        d = hyperbolic_distance(DiscPoint.origin(), DiscPoint(0.5, 0.0))
        self.assertAlmostEqual(d, 2 * math.atanh(0.5), places=12)
        self.assertAlmostEqual(d, 1.0986122887, places=9)
        self.assertEqual(hyperbolic_distance(self.points[0], self.points[0]), 0.0)
        a, b = self.points[1], self.points[2]
        self.assertAlmostEqual(hyperbolic_distance(a, b), hyperbolic_distance(b, a), places=12)

    def test_isometries(self):
        """Test 6: Motions Preserve Distance"""
        from geometry.hyperbolic import (
            DiscPoint,
            apply,
            boost_to,
            generator_motions,
            hyperbolic_distance,
            reflection_in,
            rotation_about,
            Geodesic,
        )

        motions = list(generator_motions(4, 5, Mode.FULL).values())
        motions.append(boost_to(DiscPoint(0.3, -0.2)))
        motions.append(rotation_about(DiscPoint(-0.1, 0.25), 1.1))
        motions.append(reflection_in(Geodesic.through(self.points[0], self.points[2])))

        for m in motions:
            for i, a in enumerate(self.points):
                for b in self.points[i + 1:]:
                    self.assertAlmostEqual(
                        hyperbolic_distance(apply(m, a), apply(m, b)),
                        hyperbolic_distance(a, b),
                        places=8,
                    )

        pt = DiscPoint(0.3, -0.2)
        moved = apply(boost_to(pt), DiscPoint.origin())
        self.assertAlmostEqual(moved.u, pt.u, places=12)
        self.assertAlmostEqual(moved.v, pt.v, places=12)

        centre = DiscPoint(-0.1, 0.25)
        still = apply(rotation_about(centre, 2.0), centre)
        self.assertAlmostEqual(still.u, centre.u, places=12)
        self.assertAlmostEqual(still.v, centre.v, places=12)

        g = Geodesic.through(self.points[0], self.points[2])
        r = reflection_in(g)
        self.assertEqual(r.orientation, -1)
        for pt in (self.points[0], self.points[2]):
            image = apply(r, pt)
            self.assertAlmostEqual(image.u, pt.u, places=10)
            self.assertAlmostEqual(image.v, pt.v, places=10)
        self.assertTrue(np.allclose(r.matrix @ r.matrix, np.eye(3), atol=1e-10))

    def test_word_homomorphism(self):
        """Test 7: Words Compose in Tracing Order"""
        from core.presentations import TilingSchlafli, vondyck_presentation
        from geometry.hyperbolic import Motion, compose, generator_motions, renormalize, word_to_motion
        from utils.errors import NumericOverflow

        pres = vondyck_presentation(TilingSchlafli(4, 5))
        gens = generator_motions(4, 5, Mode.DIRECT)
        words = ["x y", "y^-1 x x", "x y^2 x^-1 y", "y x^3 y^-1 x y"]
        for a in words:
            for b in words:
                w1, w2 = pres.word(a), pres.word(b)
                whole = word_to_motion(w1 + w2, gens)
                parts = compose(word_to_motion(w1, gens), word_to_motion(w2, gens))
                self.assertTrue(whole.close_to(parts, 1e-8), f"{a} | {b}")

        self.assertTrue(word_to_motion(pres.word(), gens).is_identity())

        # x y^-1 translates; entries grow about 2.7x per repeat
        short = word_to_motion(pres.word("x y^-1 " * 5), gens)
        self.assertLess(short.lorentz_defect(), 1e-8)
        self.assertLess(renormalize(short).lorentz_defect(), 1e-8)
        with self.assertRaises(NumericOverflow):
            word_to_motion(pres.word("x y^-1 " * 10), gens)
        with self.assertRaises(NumericOverflow):
            word_to_motion(pres.word("x y^-1 " * 20), gens)
        with self.assertRaises(NumericOverflow):
            renormalize(Motion(np.zeros((3, 3))))

    def test_disc_point_guards(self):
        """Test 8: Disc Points and Geodesics Validate Input"""
        from geometry.hyperbolic import DiscPoint, Geodesic
        from utils.errors import NumericOverflow

        with self.assertRaises(NumericOverflow):
            DiscPoint(1.0, 0.0)
        with self.assertRaises(NumericOverflow):
            DiscPoint(float("nan"), 0.0)
        with self.assertRaises(ValueError):
            Geodesic(centre=(2.0, 0.0), radius=1.0)
        with self.assertRaises(ValueError):
            Geodesic()
        g = Geodesic(centre=(2.0, 0.0), radius=math.sqrt(3.0))
        self.assertFalse(g.is_diameter)

        pt = DiscPoint(0.25, -0.5)
        back = DiscPoint.from_hyperboloid(pt.to_hyperboloid())
        self.assertAlmostEqual(back.u, pt.u, places=12)
        self.assertAlmostEqual(back.v, pt.v, places=12)

    def test_patch_counts(self):
        """Test 9: Patch Sizes"""
        from geometry.tiling import build_patch, dual_overlay

        base = build_patch(4, 5, 0)
        self.assertEqual(len(base.tiles), 1)
        self.assertEqual(len(base.tiles[0].vertices), 4)
        self.assertEqual(base.adjacency, [])

        one = build_patch(4, 5, 1)
        self.assertEqual(len(one.tiles), 5)
        self.assertEqual(len(one.adjacency), 4)
        self.assertEqual(len(dual_overlay(one)), 4)
        self.assertEqual(one.neighbours(0), [1, 2, 3, 4])

        sizes = [len(build_patch(4, 5, d).tiles) for d in range(4)]
        self.assertEqual(sizes, sorted(set(sizes)))

        with self.assertRaises(ValueError):
            build_patch(4, 5, -1)

    def test_patch_structure(self):
        """Test 10: Interior Tiles and Vertices"""
        from geometry.hyperbolic import characteristic_triangle, hyperbolic_distance
        from geometry.tiling import build_patch

        for p, q, depth in [(4, 5, 3), (3, 8, 4)]:
            patch = build_patch(p, q, depth)
            self.assertFalse(patch.truncated)
            self.assertGreater(patch.covered_radius, 0.0)
            for tile in patch.interior_tiles():
                self.assertEqual(len(patch.neighbours(tile.index)), p)
            interior = patch.interior_vertices()
            self.assertGreater(len(interior), 0)
            for v in interior:
                self.assertEqual(len(patch.incidence[v]), q)

            tri = characteristic_triangle(p, q)
            edge = 2 * hyperbolic_distance(tri.O, tri.M)
            for a, b in patch.adjacency:
                d = hyperbolic_distance(patch.tiles[a].centre, patch.tiles[b].centre)
                self.assertAlmostEqual(d, edge, places=7)

    def test_word_labels(self):
        """Test 11: Tile Words Reproduce Tile Positions"""
        from geometry.hyperbolic import DiscPoint, apply, generator_motions, word_to_motion
        from geometry.tiling import build_patch

        for mode in (Mode.FULL, Mode.DIRECT):
            patch = build_patch(4, 5, 3, mode)
            gens = generator_motions(4, 5, mode)
            for tile in patch.tiles:
                centre = apply(word_to_motion(tile.word, gens), DiscPoint.origin())
                self.assertLess(math.hypot(centre.u - tile.centre.u, centre.v - tile.centre.v), 1e-8)
                self.assertEqual(patch.locate(tile.centre), tile.index)

    def test_modes_share_tiles(self):
        """Test 12: Both Alphabets Discover the Same Tiles"""
        from geometry.tiling import build_patch

        for p, q in [(3, 8), (4, 5)]:
            full = build_patch(p, q, 2, Mode.FULL)
            direct = build_patch(p, q, 2, Mode.DIRECT)
            self.assertEqual(len(full.tiles), len(direct.tiles))

            # same tile set; order within a shell is alphabet dependent
            mapping = {}
            for tile in full.tiles:
                j = direct.locate(tile.centre)
                self.assertIsNotNone(j, f"({p}^{q}) tile {tile.index}")
                self.assertEqual(direct.tiles[j].depth, tile.depth)
                mapping[tile.index] = j
            self.assertEqual(sorted(mapping.values()), list(range(len(direct.tiles))))
            self.assertEqual(mapping[0], 0)

            moved = sorted(tuple(sorted((mapping[a], mapping[b]))) for a, b in full.adjacency)
            self.assertEqual(moved, direct.adjacency)

    def test_patch_json(self):
        """Test 13: Patch JSON"""
        import json

        from geometry.tiling import build_patch, points_of

        patch = build_patch(4, 5, 1, Mode.DIRECT)
        doc = patch.to_dict()
        self.assertEqual(doc["schema"], "tessella/1")
        self.assertEqual(doc["mode"], "direct")
        self.assertEqual(len(doc["tiles"]), 5)
        self.assertEqual(doc["tiles"][0]["word"], "")
        json.dumps(doc)

        self.assertEqual(len(points_of(patch, "centres")), 5)
        self.assertEqual(len(points_of(patch, "vertices")), len(patch.vertices))
        with self.assertRaises(ValueError):
            points_of(patch, "edges")


if __name__ == '__main__':
    # Run the tests
    unittest.main(verbosity=2)
