"""
Sprint 4 Test Script
====================
Tests colouring algebra on subgroup records:
- quotient colourings and composition
- reflection conjugation (enantiomorphic pairs)
- rotation cycle structures and emphasis orbits
- partitions shared between Full and Direct records

Run this to verify Sprint 4 completion.
"""

import unittest

from core.low_index import enumerate_colourings
from tessella_logging.schemas import CentreKind, Convention, Mode


class TestSprint4(unittest.TestCase):
    """Test class for Sprint 4 colouring tests."""

    @classmethod
    def setUpClass(cls):
        cls.full = enumerate_colourings(4, 5, 10, Mode.FULL, Convention.FIXED)
        cls.direct = enumerate_colourings(4, 5, 10, Mode.DIRECT, Convention.FIXED)
        cls.direct_mirror = enumerate_colourings(4, 5, 10, Mode.DIRECT, Convention.MIRROR)

    def test_five_colour_quotients(self):
        """Test 1: Every Full (4^5) Record Has One Five-Colour Quotient"""
        from core.colourings import block_systems, quotient_colourings

        for rec in self.full:
            systems = block_systems(rec)
            fives = [s for s in systems if len(s) == 5]
            self.assertEqual(len(fives), 1, f"record {rec.id}")
            for system in systems:
                self.assertIn(len(system), (2, 5))
                self.assertEqual(sorted(c for block in system for c in block), list(range(1, 11)))
            quotients = quotient_colourings(rec)
            self.assertEqual([q.k for q in quotients], [len(s) for s in systems])

    def test_two_distinct_quotients(self):
        """Test 2: Two Different Five-Colour Quotients, Split 3 + 1"""
        from core.colourings import distinct_quotients

        groups = distinct_quotients(self.full, 5)
        self.assertEqual(len(groups), 2)
        self.assertEqual(sorted(len(ids) for ids in groups.values()), [1, 3])

    def test_quotient_records(self):
        """Test 3: Quotient Records Are Valid Colourings"""
        from core.coset_table import canonical_form, relators_hold, trace
        from core.colourings import quotient_colourings
        from core.presentations import tile_stabilizer_words

        for rec in self.full + self.direct:
            for quotient in quotient_colourings(rec):
                self.assertTrue(relators_hold(quotient.table))
                self.assertEqual(canonical_form(quotient.table).key(), quotient.table.key())
                for w in tile_stabilizer_words(quotient.presentation, quotient.mode):
                    self.assertEqual(trace(quotient.table, 1, w), 1)

    def test_block_closure(self):
        """Test 4: Block Closure"""
        from core.colourings import block_closure, meet_is_trivial

        rec = self.full[0]
        self.assertEqual(block_closure(rec, [1]), [[c] for c in range(1, 11)])
        everything = block_closure(rec, list(range(1, 11)))
        self.assertEqual(everything, [list(range(1, 11))])

        self.assertTrue(meet_is_trivial([[1, 2], [3, 4]], [[1, 3], [2, 4]]))
        self.assertFalse(meet_is_trivial([[1, 2], [3, 4]], [[1, 2, 3], [4]]))

    def test_composition(self):
        """Test 5: (4^6) Composed From Two- and Five-Colour Symmetries"""
        from core.colourings import compose_report

        records = enumerate_colourings(4, 6, 10, Mode.FULL, Convention.FIXED)
        self.assertGreater(len(records), 0)
        reports = [compose_report(rec) for rec in records]
        composed = [r for r in reports if 2 in r["quotients"] and 5 in r["quotients"]]
        self.assertGreater(len(composed), 0)
        for report in composed:
            self.assertEqual(report["k"], 10)
            self.assertIn([2, 5], report["composed_from"])

    def test_reflection_conjugate(self):
        """Test 6: Reflection Conjugation Is an Involution"""
        from core.colourings import reflection_conjugate

        for rec in self.direct:
            partner = reflection_conjugate(rec, self.direct)
            self.assertIsNotNone(partner.id)
            self.assertEqual(reflection_conjugate(partner, self.direct).id, rec.id)

            loose = reflection_conjugate(rec)
            self.assertIsNone(loose.id)
            self.assertTrue(loose.same_subgroup(partner))

    def test_enantiomorph_orbits(self):
        """Test 7: Four Self-Mirror Subgroups and Two Enantiomorphic Pairs"""
        from core.colourings import enantiomorph_orbits

        orbits = enantiomorph_orbits(self.direct)
        self.assertEqual(sorted(len(o) for o in orbits), [1, 1, 1, 1, 2, 2])
        self.assertEqual(sorted(c for o in orbits for c in o), list(range(8)))

    def test_reflection_conjugate_full_rejected(self):
        """Test 8: Full Records Have No Reflection Conjugate"""
        from core.colourings import reflection_conjugate
        from utils.errors import ModeMismatch

        with self.assertRaises(ModeMismatch):
            reflection_conjugate(self.full[0])

    def test_cross_mode_matches(self):
        """Test 9: Each Full Colouring Is One Direct Colouring"""
        from core.colourings import cross_mode_matches, enantiomorph_orbits, rotation_subgroup_table

        matches = cross_mode_matches(self.full, self.direct)
        self.assertEqual(len(matches), 4)
        for full_id, direct_ids in matches.items():
            self.assertEqual(len(direct_ids), 1, f"full record {full_id}")
        matched = sorted(ids[0] for ids in matches.values())
        self.assertEqual(len(set(matched)), 4)

        for orbit in enantiomorph_orbits(self.direct):
            if len(orbit) == 2:
                self.assertFalse(set(orbit) & set(matched))

        for rec in self.full:
            self.assertEqual(rotation_subgroup_table(rec).index, 10)

    def test_mirror_classes(self):
        """Test 9b: Mirror Classes Are the Full Colourings Plus the Chiral Ones"""
        from core.colourings import cross_mode_matches, is_chiral, reflection_conjugate

        self.assertEqual(len(self.direct_mirror), 6)
        matches = cross_mode_matches(self.full, self.direct_mirror)
        for full_id, direct_ids in matches.items():
            self.assertEqual(len(direct_ids), 1, f"full record {full_id}")
        matched = {ids[0] for ids in matches.values()}
        self.assertEqual(len(matched), 4)

        unmatched = [r for r in self.direct_mirror if r.id not in matched]
        self.assertEqual(len(unmatched), 2)
        for rec in unmatched:
            self.assertTrue(is_chiral(rec))
            self.assertIsNone(reflection_conjugate(rec, self.direct_mirror).id)
            self.assertIsNotNone(reflection_conjugate(rec, self.direct).id)
        for rec in self.direct_mirror:
            if rec.id in matched:
                self.assertFalse(is_chiral(rec))


    def test_partitions_equal(self):
        """Test 10: Partition Comparison"""
        from core.colourings import partitions_equal

        for rec in self.full + self.direct:
            self.assertTrue(partitions_equal(rec, rec))
        self.assertFalse(partitions_equal(self.direct[0], self.direct[1]))

        other = enumerate_colourings(3, 8, 10, Mode.DIRECT, Convention.FIXED)
        if other:
            with self.assertRaises(ValueError):
                partitions_equal(self.direct[0], other[0])

    def test_cycle_structures(self):
        """Test 11: Rotation Cycle Structures"""
        from core.colourings import centre_cycle_structure

        for rec in self.full + self.direct:
            vertex = centre_cycle_structure(rec, CentreKind.VERTEX)
            face = centre_cycle_structure(rec, CentreKind.FACE)
            self.assertEqual(sum(vertex), 10)
            self.assertEqual(sum(face), 10)
            self.assertTrue(all(5 % n == 0 for n in vertex), vertex)
            self.assertTrue(all(4 % n == 0 for n in face), face)
            self.assertIn(1, face)

        for rec in enumerate_colourings(3, 8, 10, Mode.DIRECT, Convention.FIXED):
            vertex = centre_cycle_structure(rec, CentreKind.VERTEX)
            self.assertEqual(sum(vertex), 10)
            self.assertTrue(all(8 % n == 0 for n in vertex), vertex)

    def test_octagonal_vertex_cycles(self):
        """Test 11b: Vertex Cycle Types of the Direct (3^8) Colourings"""
        from core.colourings import centre_cycle_structure

        records = enumerate_colourings(3, 8, 10, Mode.DIRECT, Convention.MIRROR)
        cycles = [centre_cycle_structure(rec, CentreKind.VERTEX) for rec in records]
        self.assertEqual(cycles, [(8, 2), (8, 1, 1), (8, 2)])
        # two colours each fixed by the vertex rotation
        self.assertEqual(cycles.count((8, 1, 1)), 1)
        # two colours swapped by the rotation
        self.assertEqual(cycles.count((8, 2)), 2)


    def test_emphasis_orbits(self):
        """Test 12: Emphasis Orbits"""
        from core.colourings import emphasis_orbits

        rec = self.direct[0]
        orbits = emphasis_orbits(rec, [1, 2], CentreKind.VERTEX)
        self.assertEqual(sorted(orbits), ["1", "2"])
        self.assertIn(1, orbits["1"])
        self.assertIn(2, orbits["2"])
        self.assertEqual(orbits["1"][0], min(orbits["1"]))

        with self.assertRaises(ValueError):
            emphasis_orbits(rec, [11], CentreKind.VERTEX)

    def test_quotient_shading(self):
        """Test 13: Quotient Shading"""
        from core.colourings import quotient_shading

        shading = quotient_shading(self.full[0], 5)
        self.assertEqual(sorted(shading), list(range(1, 11)))
        self.assertEqual(sorted({block for block, _ in shading.values()}), list(range(5)))
        self.assertEqual(sorted(pos for _, pos in shading.values()), [0] * 5 + [1] * 5)

        with self.assertRaises(ValueError):
            quotient_shading(self.full[0], 3)

    def test_colour_patch(self):
        """Test 14: Colouring a Patch"""
        from core.colourings import colour_patch
        from geometry.tiling import build_patch
        from utils.errors import ModeMismatch

        # depth 3 leaves some records short of all ten colours
        patch = build_patch(4, 5, 4, Mode.DIRECT)
        for rec in self.direct:
            col = colour_patch(rec, patch)
            self.assertEqual(len(col.colours), len(patch.tiles))
            self.assertEqual(col.colours[0], 1)
            self.assertEqual(col.used_colours(), list(range(1, 11)))
            self.assertEqual(col.tiles_of(1)[0], 0)

        with self.assertRaises(ModeMismatch):
            colour_patch(self.full[0], patch)
        with self.assertRaises(ModeMismatch):
            colour_patch(enumerate_colourings(3, 8, 2, Mode.DIRECT)[0], patch)


if __name__ == '__main__':
    # Run the tests
    unittest.main(verbosity=2)
