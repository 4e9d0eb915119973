"""
Low-Index Subgroups
===================
Backtracking enumeration of all index-k coset tables whose coset 1 is
fixed by a given list of words (the tile stabilizer). One complete table
is one perfect colouring with k colours.

Search:
- entries are defined in row-major order (coset, then column), which is
  exactly the breadth-first order of canonical_form, so every leaf is
  already canonical and appears once
- branch on the target coset: existing cosets ascending, then one new coset
- every definition is followed by deduction processing over the relator
  rotations through the new entry; a contradiction prunes the branch

Conventions:
- FIXED: every subgroup containing <must_fix>
- CONJUGACY: one per conjugacy class; the representative is the smallest
  canonical table among the class members that contain <must_fix>
- MIRROR: like CONJUGACY, but classes are also closed under the reflection
  automorphism x -> x^-1, y -> y^-1 (conjugation by r1); equals
  CONJUGACY for Coxeter presentations
"""

import time
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from core.coset_table import (
    CosetTable,
    TableStatus,
    column_of,
    inverse_columns,
    standardize_rows,
    word_columns,
)
from core.presentations import (
    Presentation,
    PresentationKind,
    TilingSchlafli,
    Word,
    presentation_for,
    tile_stabilizer_words,
)
from tessella_logging.schemas import SCHEMA, Convention, Mode
from utils.errors import SchemaError


@dataclass(frozen=True)
class SubgroupRecord:
    """A canonical complete coset table of index k: one colouring."""
    table: CosetTable
    p: int
    q: int
    mode: Mode
    convention: Convention
    k: int
    id: Optional[int] = None

    @property
    def presentation(self) -> Presentation:
        return self.table.presentation

    def same_subgroup(self, other: "SubgroupRecord") -> bool:
        return self.mode == other.mode and self.table.key() == other.table.key()

    def to_dict(self) -> Dict[str, object]:
        return {
            "schema": SCHEMA,
            "id": self.id,
            "p": self.p,
            "q": self.q,
            "mode": self.mode.value,
            "convention": self.convention.value,
            "k": self.k,
            "kind": self.table.presentation.kind.value,
            "table": self.table.to_dict()["table"],
        }

    @classmethod
    def from_dict(cls, d: Dict[str, object]) -> "SubgroupRecord":
        """
        Raises:
            SchemaError: wrong schema tag or inconsistent fields
        """
        if d.get("schema") != SCHEMA:
            raise SchemaError(f"Expected schema {SCHEMA}, got {d.get('schema')!r}")
        try:
            mode = Mode(d["mode"])
            convention = Convention(d["convention"])
            kind = d.get("kind") or (
                PresentationKind.COXETER.value if mode == Mode.FULL else PresentationKind.VON_DYCK.value
            )
            table = CosetTable.from_dict(
                {"p": d["p"], "q": d["q"], "kind": kind, "table": d["table"]}
            )
        except (KeyError, ValueError) as e:
            if isinstance(e, SchemaError):
                raise
            raise SchemaError(f"Malformed subgroup record: {e}") from e
        if table.presentation.mode != mode:
            raise SchemaError(f"Record mode {mode.value} does not match table kind {kind}")
        if int(d["k"]) != table.index:
            raise SchemaError(f"Record k={d['k']} but table has {table.index} rows")
        record_id = d.get("id")
        return cls(
            table=table,
            p=table.presentation.p,
            q=table.presentation.q,
            mode=mode,
            convention=convention,
            k=table.index,
            id=None if record_id is None else int(record_id),
        )


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    rejected_noncanonical: int = 0
    seconds: float = 0.0


def _relator_rotations(pres: Presentation) -> List[List[Tuple[int, ...]]]:
    """For each column, the distinct cyclic rotations of relators and their inverses starting with it."""
    ncols = len(pres.columns())
    rotations: List[List[Tuple[int, ...]]] = [[] for _ in range(ncols)]
    seen = set()
    for relator in pres.relators:
        g0 = relator.letters[0][0]
        if len(relator) == 2 and pres.generators[g0].involutory and relator.letters[1][0] == g0:
            continue  # g² holds by construction of involutory columns
        for word in (relator, relator.inverse()):
            cols = word_columns(pres, word)
            for i in range(len(cols)):
                rot = cols[i:] + cols[:i]
                if rot not in seen:
                    seen.add(rot)
                    rotations[rot[0]].append(rot)
    return rotations


def _mirror_columns(pres: Presentation) -> Tuple[int, ...]:
    """Column permutation realising x -> x^-1, y -> y^-1 on a table."""
    inv = inverse_columns(pres)
    return tuple(inv[j] for j in range(len(pres.columns())))


class LowIndexSearch:
    """
    Depth-first search over partial coset tables of a fixed presentation.

    The table is a flat list: entry (c, j) lives at c * ncols + j with
    cosets 1..k, 0 meaning undefined.
    """

    def __init__(self, pres: Presentation, k: int, must_fix: Sequence[Word] = ()):
        if k <= 0:
            raise ValueError(f"Index k must be >= 1, got {k}")
        self.pres = pres
        self.k = k
        self.ncols = len(pres.columns())
        self.inv = inverse_columns(pres)
        self.rotations = _relator_rotations(pres)
        self.relator_cols = [word_columns(pres, r) for r in pres.relators]
        self.must_fix = [pres.reduce(w) for w in must_fix]
        self.fixed_letters = [w for w in self.must_fix if len(w) == 1]
        self.fixed_words = [word_columns(pres, w) for w in self.must_fix if len(w) > 1]
        self.stats = SearchStats()

    def _scan(self, t: List[int], c: int, w: Tuple[int, ...], stack: List[Tuple[int, int]]) -> bool:
        nc, inv = self.ncols, self.inv
        f, i, last = c, 0, len(w) - 1
        while i <= last:
            nxt = t[f * nc + w[i]]
            if not nxt:
                break
            f = nxt
            i += 1
        else:
            return f == c
        b, j = c, last
        while j >= i:
            nxt = t[b * nc + inv[w[j]]]
            if not nxt:
                break
            b = nxt
            j -= 1
        if j < i:
            return f == b
        if j == i:
            t[f * nc + w[i]] = b
            t[b * nc + inv[w[i]]] = f
            stack.append((f, w[i]))
        return True

    def _process(self, t: List[int], stack: List[Tuple[int, int]]) -> bool:
        rotations = self.rotations
        while stack:
            c, j = stack.pop()
            for w in rotations[j]:
                if not self._scan(t, c, w, stack):
                    return False
        return True

    def _trace_partial(self, t: List[int], c: int, cols: Sequence[int]) -> int:
        nc = self.ncols
        for j in cols:
            c = t[c * nc + j]
            if not c:
                return 0
        return c

    def _stabilizer_ok(self, t: List[int]) -> bool:
        for cols in self.fixed_words:
            end = self._trace_partial(t, 1, cols)
            if end and end != 1:
                return False
        return True

    def _initial_table(self) -> Optional[List[int]]:
        nc = self.ncols
        t = [0] * ((self.k + 1) * nc)
        stack: List[Tuple[int, int]] = []
        for w in self.fixed_letters:
            g, e = w.letters[0]
            j = column_of(self.pres, g, e)
            t[nc + j] = 1
            t[nc + self.inv[j]] = 1
            stack.append((1, j))
        if not self._process(t, stack) or not self._stabilizer_ok(t):
            return None
        return t

    def _leaf_ok(self, t: List[int]) -> bool:
        nc = self.ncols
        for cols in self.relator_cols:
            for c in range(1, self.k + 1):
                if self._trace_partial(t, c, cols) != c:
                    return False
        for w in self.must_fix:
            if self._trace_partial(t, 1, word_columns(self.pres, w)) != 1:
                return False
        return True

    def tables(self) -> Iterator[Tuple[Tuple[int, ...], ...]]:
        """Yield every canonical complete table, in search order."""
        t = self._initial_table()
        if t is None:
            return
        yield from self._search(t, 1, self.ncols)

    def _search(self, t: List[int], n: int, pos: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
        self.stats.nodes += 1
        nc, inv = self.ncols, self.inv
        end = (n + 1) * nc
        while pos < end and t[pos]:
            pos += 1
        if pos >= end:
            if n == self.k and self._leaf_ok(t):
                self.stats.leaves += 1
                yield tuple(tuple(t[c * nc:(c + 1) * nc]) for c in range(1, n + 1))
            return
        c, j = divmod(pos, nc)
        ij = inv[j]
        for target in range(1, n + 1):
            if t[target * nc + ij]:
                continue
            child = t[:]
            child[pos] = target
            child[target * nc + ij] = c
            if self._process(child, [(c, j)]) and self._stabilizer_ok(child):
                yield from self._search(child, n, pos + 1)
        if n < self.k:
            new = n + 1
            child = t[:]
            child[pos] = new
            child[new * nc + ij] = c
            if self._process(child, [(c, j)]) and self._stabilizer_ok(child):
                yield from self._search(child, new, pos + 1)

    def fixes(self, rows: Sequence[Sequence[int]], c: int) -> bool:
        """All must_fix words fix coset c of a complete table."""
        for w in self.must_fix:
            d = c
            for j in word_columns(self.pres, w):
                d = rows[d - 1][j]
            if d != c:
                return False
        return True

    def is_class_minimal(self, rows: Tuple[Tuple[int, ...], ...], mirror: bool) -> bool:
        """
        True when no other member of the class (containing <must_fix>)
        has a smaller canonical table.
        """
        key = tuple(x for row in rows for x in row)
        variants = [rows]
        if mirror:
            perm = _mirror_columns(self.pres)
            variants.append(tuple(tuple(row[perm[j]] for j in range(self.ncols)) for row in rows))
        for v_index, variant in enumerate(variants):
            for c in range(1, self.k + 1):
                if v_index == 0 and c == 1:
                    continue
                if not self.fixes(variant, c):
                    continue
                other = standardize_rows(variant, start=c)
                if tuple(x for row in other for x in row) < key:
                    return False
        return True


def enumerate_subgroups(
    pres: Presentation,
    k: int,
    must_fix: Sequence[Word] = (),
    convention: Convention = Convention.FIXED,
) -> List[SubgroupRecord]:
    """
    All index-k subgroups containing <must_fix>, counted per convention.

    Args:
        pres: Coxeter or von Dyck presentation
        k: index (number of colours)
        must_fix: words that must fix coset 1
        convention: FIXED, CONJUGACY or MIRROR

    Returns:
        Records in deterministic search order, ids 0, 1, 2, ...

    Raises:
        ValueError: k <= 0
    """
    started = time.perf_counter()
    search = LowIndexSearch(pres, k, must_fix)
    mirror = convention == Convention.MIRROR and pres.kind == PresentationKind.VON_DYCK
    records: List[SubgroupRecord] = []
    seen = set()
    for rows in search.tables():
        if convention != Convention.FIXED and not search.is_class_minimal(rows, mirror):
            search.stats.rejected_noncanonical += 1
            continue
        key = tuple(x for row in rows for x in row)
        if key in seen:
            continue
        seen.add(key)
        records.append(SubgroupRecord(
            table=CosetTable(pres, rows, TableStatus.COMPLETE),
            p=pres.p,
            q=pres.q,
            mode=pres.mode,
            convention=convention,
            k=k,
            id=len(records),
        ))
    search.stats.seconds = time.perf_counter() - started
    logger.debug(
        f"low-index {pres.kind.value}({pres.p},{pres.q}) k={k} {convention.value}: "
        f"{len(records)} records, {search.stats.nodes} nodes, "
        f"{search.stats.rejected_noncanonical} non-minimal, {search.stats.seconds:.2f}s"
    )
    return records


def enumerate_colourings(
    p: int,
    q: int,
    k: int,
    mode: Mode,
    convention: Convention = Convention.FIXED,
) -> List[SubgroupRecord]:
    """Records for (p^q) with the mode's presentation and tile stabilizer."""
    pres = presentation_for(TilingSchlafli(p, q), mode)
    return enumerate_subgroups(pres, k, tile_stabilizer_words(pres, mode), convention)


def count_colourings(
    p: int,
    q: int,
    k: int,
    mode: Mode,
    convention: Convention = Convention.FIXED,
) -> int:
    """Number of perfect k-colourings of (p^q) under the mode and convention."""
    return len(enumerate_colourings(p, q, k, mode, convention))


if __name__ == "__main__":
    for mode in (Mode.FULL, Mode.DIRECT):
        for convention in Convention:
            n = count_colourings(4, 5, 10, mode, convention)
            print(f"(4^5) {mode.value:>6} {convention.value:>9}: {n}")
