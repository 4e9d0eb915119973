"""
Sprint 6 Test Script
====================
Tests geometric verification of colourings, coincidence-site matching and
SVG rendering.

Run this to verify Sprint 6 completion.
"""

import math
import unittest
import xml.etree.ElementTree as ET

from core.low_index import enumerate_colourings
from geometry.tiling import build_patch
from tessella_logging.schemas import Convention, Mode

SVG_NS = "{http://www.w3.org/2000/svg}"


class TestSprint6(unittest.TestCase):
    """Test class for Sprint 6 verification, coincidence and rendering tests."""

    @classmethod
    def setUpClass(cls):
        cls.full = enumerate_colourings(4, 5, 10, Mode.FULL, Convention.FIXED)
        cls.direct = enumerate_colourings(4, 5, 10, Mode.DIRECT, Convention.FIXED)
        cls.full_patch = build_patch(4, 5, 4, Mode.FULL)
        cls.direct_patch = build_patch(4, 5, 4, Mode.DIRECT)
        cls.csl_patch = build_patch(3, 8, 4, Mode.FULL)
        cls.csl_deep = build_patch(3, 8, 6, Mode.FULL)

    def _tiles_group(self, svg):
        root = ET.fromstring(svg)
        self.assertEqual(root.tag, f"{SVG_NS}svg")
        groups = {g.get("id"): g for g in root.iter(f"{SVG_NS}g")}
        return root, groups

    def test_full_records_are_perfect(self):
        """Test 1: Full Records Pass Full Verification"""
        from core.colourings import colour_patch, verify_perfect

        for rec in self.full:
            report = verify_perfect(colour_patch(rec, self.full_patch), self.full_patch, Mode.FULL)
            self.assertTrue(report.verdict, f"record {rec.id}: {report.violations[:3]}")
            self.assertGreater(report.checked, 0)
            self.assertEqual(sorted(report.permutations), ["r0", "r1", "r2"])
            self.assertEqual(report.permutations["r0"](1), 1)

    def test_direct_records(self):
        """Test 2: Direct Records Under Direct and Full Verification"""
        from core.colourings import colour_patch, cross_mode_matches, verify_perfect

        matched = {ids[0] for ids in cross_mode_matches(self.full, self.direct).values()}
        for rec in self.direct:
            col = colour_patch(rec, self.direct_patch)
            direct = verify_perfect(col, self.direct_patch, Mode.DIRECT)
            self.assertTrue(direct.verdict, f"record {rec.id}")
            full = verify_perfect(col, self.direct_patch, Mode.FULL)
            if rec.id in matched:
                self.assertTrue(full.verdict, f"record {rec.id}")
            else:
                self.assertFalse(full.verdict, f"record {rec.id}")
                self.assertGreater(len(full.violations), 0)

        doc = verify_perfect(colour_patch(self.direct[0], self.direct_patch), self.direct_patch, Mode.DIRECT).to_dict()
        self.assertTrue(doc["verdict"])
        self.assertEqual(sorted(doc["permutations"]), ["x", "y"])

    def test_shallow_patch(self):
        """Test 3: Verification Needs Interior Tiles"""
        from core.colourings import colour_patch, verify_perfect
        from utils.errors import PatchTooShallow

        patch = build_patch(4, 5, 0, Mode.FULL)
        with self.assertRaises(PatchTooShallow):
            verify_perfect(colour_patch(self.full[0], patch), patch, Mode.FULL)

    def test_symmetry_angles_match_everything(self):
        """Test 4: Symmetry Rotations Match Every Candidate"""
        from geometry.coincidence import rotate_and_match
        from geometry.hyperbolic import characteristic_triangle

        tri = characteristic_triangle(4, 5)
        for centre, angle in ((tri.O, math.pi / 2), (tri.V, 2 * math.pi / 5)):
            report = rotate_and_match(self.full_patch, centre, angle)
            self.assertGreater(report.candidate_count, 0)
            self.assertEqual(report.fraction, 1.0)

        tri = characteristic_triangle(3, 8)
        report = rotate_and_match(self.csl_patch, tri.O, 2 * math.pi / 3, points="centres")
        self.assertGreater(report.candidate_count, 0)
        self.assertEqual(report.fraction, 1.0)

    def test_half_turn_coincidences(self):
        """Test 5: Coincidence Lattice About a Triangle Centre"""
        from geometry.coincidence import rotate_and_match
        from geometry.hyperbolic import characteristic_triangle

        tri = characteristic_triangle(3, 8)
        reports = {
            degrees: rotate_and_match(self.csl_deep, tri.O, math.radians(degrees))
            for degrees in (60, 180, 72)
        }
        counts = {d: (r.candidate_count, len(r.matched)) for d, r in reports.items()}
        self.assertEqual(counts, {60: (12, 6), 180: (12, 6), 72: (12, 0)})

        for degrees in (60, 180):
            report = reports[degrees]
            self.assertEqual(report.fraction, 0.5)
            self.assertEqual(len({i for i, _ in report.matched}), len(report.matched))
            self.assertEqual(len({j for _, j in report.matched}), len(report.matched))
            for i, _ in report.matched:
                self.assertIn(i, report.candidates)
            self.assertLess(reports[72].fraction, report.fraction)
        self.assertEqual(reports[72].candidates, reports[180].candidates)

        # the centre tile matches only itself, so it is never a candidate
        centres = rotate_and_match(self.csl_patch, tri.O, math.pi, points="centres")
        self.assertNotIn(0, centres.candidates)

        doc = reports[180].to_dict()
        self.assertEqual(doc["matched_count"], 6)
        self.assertAlmostEqual(doc["angle_degrees"], 180.0)


    def test_coincidence_guards(self):
        """Test 6: Coincidence Argument Checks"""
        from geometry.coincidence import rotate_and_match
        from geometry.hyperbolic import DiscPoint
        from utils.errors import CentreOutsidePatch

        with self.assertRaises(ValueError):
            rotate_and_match(self.csl_patch, DiscPoint.origin(), math.pi, tol=0.0)
        shallow = build_patch(3, 8, 1)
        with self.assertRaises(CentreOutsidePatch):
            rotate_and_match(shallow, DiscPoint(0.95, 0.0), math.pi)

    def test_coincidence_figure(self):
        """Test 7: Coincidence Figure Highlights"""
        from core.colourings import colour_patch
        from geometry.coincidence import coincidence_figure
        from geometry.hyperbolic import characteristic_triangle
        from geometry.tiling import incident_tiles

        tri = characteristic_triangle(3, 8)
        figure = coincidence_figure(self.csl_deep, tri.O, math.pi)
        self.assertGreater(len(figure.highlight), 0)
        self.assertEqual(figure.highlight, sorted(figure.highlight))
        matched = {i for i, _ in figure.report.matched} | {j for _, j in figure.report.matched}
        self.assertEqual(figure.highlight, incident_tiles(self.csl_deep, sorted(matched)))

        tri = characteristic_triangle(4, 5)
        col = colour_patch(self.full[0], self.full_patch)
        figure = coincidence_figure(self.full_patch, tri.O, math.pi / 2, colouring=col)
        self.assertIn(0, figure.highlight)
        for v in (j for _, j in figure.report.matched):
            for t in self.full_patch.incidence[v]:
                self.assertIn(t, figure.highlight)
        self.assertIn(1, figure.colours)

    def test_render_plain(self):
        """Test 8: Plain Patch SVG"""
        from render.svg_renderer import render

        patch = build_patch(4, 5, 2, Mode.FULL)
        svg = render(patch)
        self.assertTrue(svg.startswith('<?xml version="1.0" encoding="UTF-8"?>'))
        root, groups = self._tiles_group(svg)
        paths = list(groups["tiles"])
        self.assertEqual(len(paths), len(patch.tiles))
        self.assertEqual([p.get("id") for p in paths], [f"t{i}" for i in range(len(patch.tiles))])
        self.assertNotIn("dual", groups)
        circles = [c.get("id") for c in root.iter(f"{SVG_NS}circle")]
        self.assertEqual(circles, ["disc", "boundary"])

    def test_render_deterministic(self):
        """Test 9: Rendering Is Byte-Identical Across Runs"""
        from core.colourings import colour_patch
        from render.svg_renderer import RenderOptions, render

        opts = RenderOptions(emphasis=(1, 2), show_dual=True)
        first = render(self.full_patch, colour_patch(self.full[0], self.full_patch), opts=opts)
        patch = build_patch(4, 5, 4, Mode.FULL)
        second = render(patch, colour_patch(self.full[0], patch), opts=opts)
        self.assertEqual(first, second)

    def test_golden_figures(self):
        """Test 9b: Stored Golden Figures Are Reproduced Byte for Byte"""
        from regression.golden_figures import FIGURES, GOLDEN_DIR, compare_figure

        self.assertEqual(len(FIGURES), 4)
        for fig in FIGURES:
            with self.subTest(figure=fig.name):
                same = compare_figure(fig)
                if same is None:
                    self.skipTest(f"{fig.filename} not stored in {GOLDEN_DIR}; run make_golden.py")
                self.assertTrue(same, f"{fig.filename} differs from a fresh rendering")

    def test_golden_store(self):
        """Test 9c: Storing and Comparing Golden Figures"""
        import shutil
        import tempfile
        from pathlib import Path

        from regression.golden_figures import FIGURES, compare_figure, golden_path, write_goldens

        tmp = Path(tempfile.mkdtemp(prefix="tessella_golden_"))
        try:
            fig = FIGURES[1]
            self.assertIsNone(compare_figure(fig, tmp))
            written = write_goldens(tmp)
            self.assertEqual(sorted(written), sorted(f.name for f in FIGURES))
            self.assertEqual(write_goldens(tmp), {})
            self.assertTrue(compare_figure(fig, tmp))

            path = golden_path(fig, tmp)
            root = ET.fromstring(path.read_text(encoding="utf-8"))
            self.assertEqual(root.tag, f"{SVG_NS}svg")
            path.write_text(path.read_text(encoding="utf-8").replace("#", "#0", 1), encoding="utf-8")
            self.assertFalse(compare_figure(fig, tmp))
        finally:
            shutil.rmtree(tmp, ignore_errors=True)


    def test_render_colouring(self):
        """Test 10: Colours, Emphasis and Dual Overlay"""
        from core.colourings import colour_patch
        from render.svg_renderer import DEFAULT_PALETTE, RenderOptions, render

        patch = build_patch(4, 5, 2, Mode.FULL)
        col = colour_patch(self.full[0], patch)

        _, groups = self._tiles_group(render(patch, col))
        for path, colour in zip(groups["tiles"], col.colours):
            self.assertEqual(path.get("class"), f"c{colour}")
            self.assertEqual(path.get("fill"), DEFAULT_PALETTE[colour - 1])

        opts = RenderOptions(emphasis=(1, 2), show_dual=True)
        _, groups = self._tiles_group(render(patch, col, opts=opts))
        fills = {"1": "#000000", "2": "#808080"}
        for path, colour in zip(groups["tiles"], col.colours):
            self.assertEqual(path.get("fill"), fills.get(str(colour), "#f2f2f2"))
        self.assertEqual(len(list(groups["dual"])), len(patch.adjacency))

        with self.assertRaises(ValueError):
            render(patch, col, opts=RenderOptions(emphasis=(1, 11)))

    def test_render_highlight_and_shading(self):
        """Test 11: Highlight and Quotient Shading Fills"""
        from core.colourings import colour_patch, quotient_shading
        from geometry.coincidence import coincidence_figure
        from geometry.hyperbolic import characteristic_triangle
        from render.svg_renderer import RenderOptions, render, tile_fill

        tri = characteristic_triangle(3, 8)
        figure = coincidence_figure(self.csl_deep, tri.O, math.pi)
        _, groups = self._tiles_group(render(self.csl_deep, report=figure))
        lit = [int(p.get("id")[1:]) for p in groups["tiles"] if p.get("fill") == "#e6550d"]
        self.assertEqual(lit, figure.highlight)

        shading = quotient_shading(self.full[0], 5)
        opts = RenderOptions(quotient_shading=shading)
        for colour, (block, position) in shading.items():
            fill = tile_fill(colour, 99, opts)
            if position == 0:
                self.assertEqual(fill, opts.palette[block])
            else:
                self.assertNotEqual(fill, opts.palette[block])
        col = colour_patch(self.full[0], self.full_patch)
        self.assertIn('class="c10"', render(self.full_patch, col, opts=opts))

    def test_render_options(self):
        """Test 12: Render Option Validation"""
        from render.svg_renderer import RenderOptions
        from utils.config_loader import Config

        with self.assertRaises(ValueError):
            RenderOptions(size=0)
        with self.assertRaises(ValueError):
            RenderOptions(palette=("#000000", "#000000"))
        with self.assertRaises(ValueError):
            RenderOptions(emphasis=(3, 3))

        Config.initialize()
        opts = RenderOptions.from_config(Config.get("render"), show_dual=True)
        self.assertEqual(opts.size, 800)
        self.assertEqual(len(opts.palette), 10)
        self.assertTrue(opts.show_dual)

    def test_geodesic_arcs(self):
        """Test 13: Geodesic Arcs"""
        from geometry.hyperbolic import DiscPoint
        from render.svg_renderer import geodesic_arc
        from utils.errors import CoincidentPoints

        straight = geodesic_arc(DiscPoint(-0.5, 0.0), DiscPoint(0.3, 0.0))
        self.assertTrue(straight.is_straight)
        self.assertTrue(straight.fragment(800).startswith("L "))

        a, b = DiscPoint(0.2, 0.1), DiscPoint(-0.1, 0.5)
        arc = geodesic_arc(a, b)
        self.assertFalse(arc.is_straight)
        cx, cy = arc.centre
        self.assertAlmostEqual(cx * cx + cy * cy, arc.radius ** 2 + 1.0, places=9)
        for pt in (a, b):
            self.assertAlmostEqual(math.hypot(pt.u - cx, pt.v - cy), arc.radius, places=9)
        self.assertIn(arc.sweep, (0, 1))
        self.assertEqual(geodesic_arc(b, a).sweep, 1 - arc.sweep)
        self.assertTrue(arc.fragment(800).startswith("A "))

        with self.assertRaises(CoincidentPoints):
            geodesic_arc(a, DiscPoint(0.2, 0.1))


if __name__ == '__main__':
    # Run the tests
    unittest.main(verbosity=2)
