"""
Colourings
==========
Reading subgroup records as colourings of a tiling.

The tile labelled w (see geometry.tiling) gets colour trace(table, 1, w).
Because neighbours are labelled by prepending letters, the generator
motion g sends tile w to tile w.g, so every symmetry in the mode's group
permutes colours by induced_permutation(g).

Provides:
- colour_patch / verify_perfect (geometric check on a patch)
- quotient_colourings (block systems of the coset action)
- reflection_conjugate + enantiomorph_orbits
- centre_cycle_structure / emphasis_orbits
- partitions_equal (Full record vs Direct record via the rotation subgroup)
- compose_report (quotient chain and 2 x 5 composition)
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from core.coset_table import (
    CosetTable,
    Permutation,
    TableStatus,
    induced_permutation,
    inverse_columns,
    standardize_rows,
    trace,
)
from core.low_index import SubgroupRecord
from core.presentations import (
    TilingSchlafli,
    Word,
    centre_word,
    vondyck_presentation,
)
from geometry.hyperbolic import apply, generator_motions
from geometry.tiling import TilingPatch
from tessella_logging.schemas import CentreKind, Mode
from utils.errors import ModeMismatch, PatchTooShallow


@dataclass
class Colouring:
    """Colours of the tiles of one patch under one record."""
    source: SubgroupRecord
    patch: TilingPatch
    colours: List[int]

    def colour_of(self, w: Word) -> int:
        """Colour of the tile reached by w from the base tile."""
        return trace(self.source.table, 1, w)

    def used_colours(self) -> List[int]:
        return sorted(set(self.colours))

    def tiles_of(self, colour: int) -> List[int]:
        return [i for i, c in enumerate(self.colours) if c == colour]


@dataclass
class Violation:
    tile: int
    generator: str
    expected: int
    found: int


@dataclass
class PerfectnessReport:
    """Whether every generator motion permutes whole colour classes."""
    mode: Mode
    permutations: Dict[str, Optional[Permutation]] = field(default_factory=dict)
    violations: List[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def verdict(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, object]:
        return {
            "mode": self.mode.value,
            "verdict": self.verdict,
            "checked": self.checked,
            "permutations": {
                name: (list(perm.images) if perm is not None else None)
                for name, perm in self.permutations.items()
            },
            "violations": [vars(v) for v in self.violations[:20]],
            "violation_count": len(self.violations),
        }


def colour_patch(rec: SubgroupRecord, patch: TilingPatch) -> Colouring:
    """
    Colour every tile of the patch by tracing its word from coset 1.

    Raises:
        ModeMismatch: record and patch differ in (p, q) or word alphabet
    """
    if (rec.p, rec.q) != (patch.p, patch.q):
        raise ModeMismatch(f"Record is for ({rec.p}^{rec.q}), patch for ({patch.p}^{patch.q})")
    if rec.mode != patch.mode:
        raise ModeMismatch(
            f"Record alphabet is {rec.mode.value} but the patch is labelled in {patch.mode.value} words"
        )
    colours = [trace(rec.table, 1, tile.word) for tile in patch.tiles]
    return Colouring(source=rec, patch=patch, colours=colours)


def verify_perfect(col: Colouring, patch: TilingPatch, mode: Mode) -> PerfectnessReport:
    """
    Check geometrically that each of the mode's generator motions maps
    colour classes onto colour classes.

    Interior tiles are moved by each generator motion and looked up in the
    patch by centre; images outside the patch are skipped. When the record
    uses the mode's own alphabet the expected image colour comes from its
    coset table, otherwise from the first tile of that colour seen.

    Raises:
        PatchTooShallow: the patch has no interior tiles
    """
    interior = patch.interior_tiles()
    if not interior:
        raise PatchTooShallow(f"Depth-{patch.depth} patch has no interior tiles")
    gens = generator_motions(patch.p, patch.q, mode)
    same_alphabet = col.source.mode == mode
    report = PerfectnessReport(mode=mode)
    k = col.source.k

    for g, motion in sorted(gens.items(), key=lambda item: item[0].index):
        table_perm = (
            induced_permutation(col.source.table, Word(((g.index, 1),))) if same_alphabet else None
        )
        transport: Dict[int, int] = {}
        for tile in interior:
            image = patch.locate(apply(motion, tile.centre))
            if image is None:
                continue
            report.checked += 1
            src, found = col.colours[tile.index], col.colours[image]
            if table_perm is not None:
                expected = table_perm(src)
            else:
                expected = transport.setdefault(src, found)
            if found != expected:
                report.violations.append(Violation(tile.index, g.name, expected, found))
            else:
                transport.setdefault(src, found)
        if table_perm is not None:
            report.permutations[g.name] = table_perm
        elif len(transport) == k and sorted(transport.values()) == list(range(1, k + 1)):
            report.permutations[g.name] = Permutation(tuple(transport[c] for c in range(1, k + 1)))
        else:
            report.permutations[g.name] = None

    if report.checked == 0:
        raise PatchTooShallow(f"No generator image of an interior tile lies in the depth-{patch.depth} patch")
    logger.debug(
        f"verify_perfect {col.source.mode.value} record under {mode.value}: "
        f"{report.checked} checks, {len(report.violations)} violations"
    )
    return report


def _generator_columns(rec: SubgroupRecord) -> List[int]:
    return list(range(len(rec.presentation.generators)))


def block_closure(rec: SubgroupRecord, seed: Sequence[int]) -> List[List[int]]:
    """
    Finest invariant partition in which all of `seed` share a block.

    Returns:
        Blocks as sorted lists, ordered by smallest element
    """
    k = rec.k
    parent = list(range(k + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    rows = rec.table.rows
    cols = _generator_columns(rec)
    pending: List[Tuple[int, int]] = []
    for c in seed[1:]:
        pending.append((seed[0], c))
    while pending:
        a, b = pending.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[max(ra, rb)] = min(ra, rb)
        for j in cols:
            pending.append((rows[a - 1][j], rows[b - 1][j]))

    blocks: Dict[int, List[int]] = {}
    for c in range(1, k + 1):
        blocks.setdefault(find(c), []).append(c)
    return sorted(blocks.values(), key=lambda b: b[0])


def block_systems(rec: SubgroupRecord) -> List[List[List[int]]]:
    """Every nontrivial block system: neither singletons nor the single block."""
    rec.table._require_complete()
    k = rec.k
    found: Dict[Tuple[int, ...], List[List[int]]] = {}
    frontier: List[Tuple[int, ...]] = []
    for c in range(2, k + 1):
        system = block_closure(rec, [1, c])
        first = tuple(system[0])
        if first not in found:
            found[first] = system
            frontier.append(first)
    while frontier:
        block = frontier.pop()
        for c in range(2, k + 1):
            if c in block:
                continue
            system = block_closure(rec, list(block) + [c])
            first = tuple(system[0])
            if first not in found:
                found[first] = system
                frontier.append(first)
    systems = [s for s in found.values() if len(s) > 1]
    return sorted(systems, key=lambda s: (-len(s), s))


def _quotient_record(rec: SubgroupRecord, system: List[List[int]]) -> SubgroupRecord:
    block_of = {}
    for b, block in enumerate(system, start=1):
        for c in block:
            block_of[c] = b
    ncols = len(rec.presentation.columns())
    rows = []
    for block in system:
        c = block[0]
        rows.append(tuple(block_of[rec.table.rows[c - 1][j]] for j in range(ncols)))
    canonical = standardize_rows(rows, start=block_of[1])
    return SubgroupRecord(
        table=CosetTable(rec.presentation, canonical, TableStatus.COMPLETE),
        p=rec.p,
        q=rec.q,
        mode=rec.mode,
        convention=rec.convention,
        k=len(system),
    )


def quotient_colourings(rec: SubgroupRecord) -> List[SubgroupRecord]:
    """
    Colourings obtained by merging colours along an invariant block system.

    Returns:
        One record per nontrivial block system, most colours first
    """
    return [_quotient_record(rec, system) for system in block_systems(rec)]


def distinct_quotients(records: Sequence[SubgroupRecord], k: int) -> Dict[Tuple[int, ...], List[int]]:
    """Group records by their k-colour quotient: quotient key -> record ids."""
    groups: Dict[Tuple[int, ...], List[int]] = {}
    for rec in records:
        for quotient in quotient_colourings(rec):
            if quotient.k == k:
                groups.setdefault(quotient.table.key(), []).append(rec.id)
    return groups


def reflection_conjugate(
    rec: SubgroupRecord,
    records: Optional[Sequence[SubgroupRecord]] = None,
) -> SubgroupRecord:
    """
    Conjugate a Direct record by the base-tile reflection r1.

    On the von Dyck alphabet this is x -> x^-1, y -> y^-1: the x and X
    columns trade places, as do y and Y, and the table is canonicalized.
    If `records` is given, the matching record (with its id) is returned.

    Raises:
        ModeMismatch: rec is a Full record
    """
    if rec.mode != Mode.DIRECT:
        raise ModeMismatch("reflection_conjugate needs a Direct record; Full partitions are reflection invariant")
    inv = inverse_columns(rec.presentation)
    swapped = [tuple(row[inv[j]] for j in range(len(row))) for row in rec.table.rows]
    rows = standardize_rows(swapped)
    conjugate = SubgroupRecord(
        table=CosetTable(rec.presentation, rows, TableStatus.COMPLETE),
        p=rec.p,
        q=rec.q,
        mode=rec.mode,
        convention=rec.convention,
        k=rec.k,
    )
    if records is not None:
        for other in records:
            if other.same_subgroup(conjugate):
                return other
    return conjugate


def enantiomorph_orbits(records: Sequence[SubgroupRecord]) -> List[List[int]]:
    """Orbits of reflection_conjugate on Direct records, as sorted id lists."""
    seen = set()
    orbits = []
    for rec in records:
        if rec.id in seen:
            continue
        partner = reflection_conjugate(rec, records)
        orbit = sorted({rec.id, partner.id} - {None})
        seen.update(orbit)
        orbits.append(orbit)
    return orbits


def is_chiral(rec: SubgroupRecord) -> bool:
    """
    Whether the colouring differs from its mirror image.

    Under MIRROR a chiral record stands for both partners of its pair, so
    its conjugate is not among the records.
    """
    return not rec.same_subgroup(reflection_conjugate(rec))


def centre_cycle_structure(rec: SubgroupRecord, centre: CentreKind) -> Tuple[int, ...]:
    """Cycle type of the colour permutation of the rotation about the centre."""
    perm = induced_permutation(rec.table, centre_word(rec.presentation, centre.value))
    return perm.cycle_type()


def emphasis_orbits(
    rec: SubgroupRecord,
    colours: Sequence[int],
    centre: CentreKind,
) -> Dict[str, List[int]]:
    """For each emphasised colour, its cycle under the centre rotation."""
    perm = induced_permutation(rec.table, centre_word(rec.presentation, centre.value))
    out = {}
    for colour in colours:
        if not 1 <= colour <= rec.k:
            raise ValueError(f"Colour {colour} outside 1..{rec.k}")
        cycle = next(c for c in perm.cycles() if colour in c)
        out[str(colour)] = list(cycle)
    return out


def rotation_subgroup_table(rec: SubgroupRecord) -> CosetTable:
    """
    Direct-mode table of K n G+ for a Full record K.

    The rotations x = r0 r1 and y = r1 r2 act on the k cosets of K; the
    stabilizer of coset 1 in G+ is K n G+, so its orbit is the coset space.
    The orbit has k points when K contains a reflection and k/2 otherwise.
    """
    pres = rec.presentation
    x = induced_permutation(rec.table, pres.word("r0 r1"))
    y = induced_permutation(rec.table, pres.word("r1 r2"))
    xi, yi = x.inverse(), y.inverse()
    orbit = [1]
    seen = {1}
    for c in orbit:
        for perm in (x, y, xi, yi):
            d = perm(c)
            if d not in seen:
                seen.add(d)
                orbit.append(d)
    label = {c: i for i, c in enumerate(orbit, start=1)}
    rows = tuple(
        tuple(label[perm(c)] for perm in (x, y, xi, yi))
        for c in orbit
    )
    direct = vondyck_presentation(TilingSchlafli(rec.p, rec.q))
    return CosetTable(direct, standardize_rows(rows), TableStatus.COMPLETE)


def partitions_equal(a: SubgroupRecord, b: SubgroupRecord) -> bool:
    """
    Whether two records colour the tiles with the same partition.

    Raises:
        ValueError: the records belong to different tilings
    """
    if (a.p, a.q) != (b.p, b.q):
        raise ValueError(f"Cannot compare ({a.p}^{a.q}) with ({b.p}^{b.q})")
    if a.mode == b.mode:
        return a.table.key() == b.table.key()
    full, direct = (a, b) if a.mode == Mode.FULL else (b, a)
    return rotation_subgroup_table(full).key() == direct.table.key()


def cross_mode_matches(
    full_records: Sequence[SubgroupRecord],
    direct_records: Sequence[SubgroupRecord],
) -> Dict[int, List[int]]:
    """Full record id -> ids of Direct records with the same partition."""
    return {
        f.id: [d.id for d in direct_records if partitions_equal(f, d)]
        for f in full_records
    }


def meet_is_trivial(first: List[List[int]], second: List[List[int]]) -> bool:
    """True when no two points share a block in both systems."""
    block_a = {c: i for i, block in enumerate(first) for c in block}
    block_b = {c: i for i, block in enumerate(second) for c in block}
    pairs = set()
    for c in block_a:
        pair = (block_a[c], block_b[c])
        if pair in pairs:
            return False
        pairs.add(pair)
    return True


def compose_report(rec: SubgroupRecord) -> Dict[str, object]:
    """
    Quotient chain of a record and the pairs of quotients whose meet is
    the record itself (e.g. 10 = 2 x 5).
    """
    systems = block_systems(rec)
    composed = []
    for (i, s1), (j, s2) in combinations(enumerate(systems), 2):
        if meet_is_trivial(s1, s2):
            composed.append(sorted([len(s1), len(s2)]))
    return {
        "k": rec.k,
        "quotients": [len(s) for s in systems],
        "composed_from": sorted(composed),
    }


def quotient_summary(rec: SubgroupRecord) -> List[Dict[str, object]]:
    """JSON-ready description of each quotient colouring."""
    out = []
    for system, quotient in zip(block_systems(rec), quotient_colourings(rec)):
        out.append({
            "k": quotient.k,
            "blocks": system,
            "table": quotient.table.to_dict()["table"],
        })
    return out


def quotient_shading(rec: SubgroupRecord, k: int) -> Dict[int, Tuple[int, int]]:
    """
    colour -> (block number, position in block) for the first k-block system.

    Raises:
        ValueError: the record has no k-colour quotient
    """
    for system in block_systems(rec):
        if len(system) == k:
            return {c: (b, i) for b, block in enumerate(system) for i, c in enumerate(block)}
    raise ValueError(f"Record {rec.id} has no {k}-colour quotient")
