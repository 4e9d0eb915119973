"""
Coset Tables
============
The coset table is the one data structure everything else is built on:
rows are cosets (1-based, coset 1 is the subgroup itself), columns are
generator actions. A complete table of index k is a permutation
representation on k points, i.e. a k-colouring.

Provides:
- CosetTable / Permutation value types
- trace (left-to-right word tracing)
- todd_coxeter (HLT with union-find coincidence processing)
- canonical_form (breadth-first relabelling from coset 1)
- induced_permutation
- JSON round trip
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger
from sympy.combinatorics import Permutation as SympyPermutation

from core.presentations import (
    Presentation,
    PresentationKind,
    TilingSchlafli,
    Word,
    coxeter_presentation,
    vondyck_presentation,
)
from utils.errors import CosetLimitExceeded, DeadCoset, IncompleteTable, SchemaError

DEFAULT_MAX_COSETS = 1_000_000


class TableStatus(Enum):
    PARTIAL = "partial"
    COMPLETE = "complete"


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..k}; images[i - 1] is the image of i."""
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"Not a permutation of 1..{len(self.images)}: {self.images}")

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(1, k + 1)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def then(self, other: "Permutation") -> "Permutation":
        """Apply self first, then other (left-to-right, like tracing)."""
        return Permutation(tuple(other(self(i)) for i in range(1, self.degree + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, image in enumerate(self.images, start=1):
            inv[image - 1] = i
        return Permutation(tuple(inv))

    def to_sympy(self) -> SympyPermutation:
        return SympyPermutation([i - 1 for i in self.images])

    def cycle_type(self) -> Tuple[int, ...]:
        """Cycle lengths including fixed points, largest first."""
        structure = self.to_sympy().cycle_structure
        lengths = []
        for length, count in structure.items():
            lengths.extend([length] * count)
        return tuple(sorted(lengths, reverse=True))

    def order(self) -> int:
        return int(self.to_sympy().order())

    def cycles(self) -> List[Tuple[int, ...]]:
        """Cycles in 1-based notation, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            out.append(tuple(cycle))
        return out


@dataclass(frozen=True)
class CosetTable:
    """
    Coset action table.

    rows[c - 1][j] is coset c under column j (0 = undefined); the column
    layout is Presentation.columns(): generators, then inverses of the
    non-involutory generators.
    """
    presentation: Presentation
    rows: Tuple[Tuple[int, ...], ...]
    status: TableStatus = TableStatus.COMPLETE

    @property
    def index(self) -> int:
        return len(self.rows)

    @property
    def is_complete(self) -> bool:
        return self.status == TableStatus.COMPLETE

    def column(self, generator: int, exponent: int) -> int:
        return column_of(self.presentation, generator, exponent)

    def key(self) -> Tuple[int, ...]:
        """Flat row-major tuple; equal keys on canonical tables mean equal subgroups."""
        return tuple(x for row in self.rows for x in row)

    def _require_live(self, c: int) -> None:
        if not 1 <= c <= self.index:
            raise DeadCoset(f"Coset {c} is not live (index {self.index})")

    def _require_complete(self) -> None:
        if not self.is_complete:
            raise IncompleteTable("Operation needs a complete coset table")

    def to_dict(self) -> Dict[str, object]:
        """JSON form; only generator columns are stored, inverses are implied."""
        ngens = len(self.presentation.generators)
        return {
            "p": self.presentation.p,
            "q": self.presentation.q,
            "kind": self.presentation.kind.value,
            "index": self.index,
            "table": [list(row[:ngens]) for row in self.rows],
        }

    @classmethod
    def from_dict(cls, d: Dict[str, object]) -> "CosetTable":
        """
        Parse the JSON form back into a complete table.

        Raises:
            SchemaError: missing keys, wrong shape, or columns that are not permutations
        """
        try:
            kind = PresentationKind(d["kind"])
            s = TilingSchlafli(int(d["p"]), int(d["q"]))
            matrix = [list(map(int, row)) for row in d["table"]]
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Malformed coset table: {e}") from e
        pres = coxeter_presentation(s) if kind == PresentationKind.COXETER else vondyck_presentation(s)
        ngens = len(pres.generators)
        k = len(matrix)
        if "index" in d and int(d["index"]) != k:
            raise SchemaError(f"Index {d['index']} does not match {k} rows")
        if any(len(row) != ngens for row in matrix):
            raise SchemaError(f"Every row needs {ngens} entries")
        for j in range(ngens):
            if sorted(row[j] for row in matrix) != list(range(1, k + 1)):
                raise SchemaError(f"Column {pres.generators[j].name} is not a permutation")
        rows = [row[:] for row in matrix]
        for g in pres.generators:
            if not g.involutory:
                inverse = [0] * k
                for c in range(1, k + 1):
                    inverse[matrix[c - 1][g.index] - 1] = c
                for c in range(k):
                    rows[c].append(inverse[c])
        return cls(pres, tuple(tuple(r) for r in rows), TableStatus.COMPLETE)


def column_of(pres: Presentation, generator: int, exponent: int) -> int:
    """Column index of a letter under Presentation.columns()."""
    gen = pres.generators[generator]
    if gen.involutory or exponent > 0:
        return generator
    return len(pres.generators) + [g.index for g in pres.generators if not g.involutory].index(generator)


def inverse_columns(pres: Presentation) -> Tuple[int, ...]:
    """inv[j] is the column of the inverse letter of column j."""
    cols = pres.columns()
    return tuple(column_of(pres, g, -e) for g, e in cols)


def word_columns(pres: Presentation, word: Word) -> Tuple[int, ...]:
    return tuple(column_of(pres, g, e) for g, e in word.letters)


def trace(t: CosetTable, c: int, w: Word) -> Optional[int]:
    """
    Apply w's letters left to right starting from coset c.

    Returns None when a step is undefined (partial tables only).

    Raises:
        DeadCoset: c is not a coset of t
    """
    t._require_live(c)
    for j in word_columns(t.presentation, w):
        c = t.rows[c - 1][j]
        if c == 0:
            return None
    return c


def standardize_rows(rows: Sequence[Sequence[int]], start: int = 1) -> Tuple[Tuple[int, ...], ...]:
    """
    Relabel a complete transitive table by breadth-first discovery from
    `start`, scanning columns in order.

    Raises:
        IncompleteTable: undefined entries or cosets unreachable from start
    """
    new_of = {start: 1}
    order = [start]
    i = 0
    while i < len(order):
        row = rows[order[i] - 1]
        for target in row:
            if target == 0:
                raise IncompleteTable("Cannot standardize a table with undefined entries")
            if target not in new_of:
                new_of[target] = len(order) + 1
                order.append(target)
        i += 1
    if len(order) != len(rows):
        raise IncompleteTable(f"Only {len(order)} of {len(rows)} cosets reachable from coset {start}")
    return tuple(tuple(new_of[x] for x in rows[old - 1]) for old in order)


def canonical_form(t: CosetTable) -> CosetTable:
    """Breadth-first relabelling from coset 1; idempotent."""
    t._require_complete()
    return CosetTable(t.presentation, standardize_rows(t.rows), TableStatus.COMPLETE)


def induced_permutation(t: CosetTable, w: Word) -> Permutation:
    """c -> trace(t, c, w) on a complete table."""
    t._require_complete()
    return Permutation(tuple(trace(t, c, w) for c in range(1, t.index + 1)))


class _HLTEnumerator:
    """
    Haselgrove-Leech-Trotter coset enumeration with immediate coincidence
    processing. Cosets are 1-based; row 0 is unused.
    """

    def __init__(self, pres: Presentation, max_cosets: int):
        self.pres = pres
        self.max_cosets = max_cosets
        self.ncols = len(pres.columns())
        self.inv = inverse_columns(pres)
        self.table: List[List[int]] = [[0] * self.ncols, [0] * self.ncols]
        self.parent: List[int] = [0, 1]
        self.defined = 1

    def live(self, c: int) -> bool:
        return self.parent[c] == c

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def define(self, c: int, j: int) -> None:
        if self.defined >= self.max_cosets:
            raise CosetLimitExceeded(self.max_cosets)
        d = len(self.table)
        self.table.append([0] * self.ncols)
        self.parent.append(d)
        self.defined += 1
        self.table[c][j] = d
        self.table[d][self.inv[j]] = c

    def merge(self, a: int, b: int, queue: List[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: List[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            gamma = queue[i]
            i += 1
            for x in range(self.ncols):
                delta = self.table[gamma][x]
                if delta == 0:
                    continue
                xi = self.inv[x]
                self.table[delta][xi] = 0
                mu, nu = self.rep(gamma), self.rep(delta)
                if self.table[mu][x]:
                    self.merge(nu, self.table[mu][x], queue)
                elif self.table[nu][xi]:
                    self.merge(mu, self.table[nu][xi], queue)
                else:
                    self.table[mu][x] = nu
                    self.table[nu][xi] = mu

    def scan_and_fill(self, alpha: int, w: Sequence[int]) -> None:
        if not w:
            return
        table, inv = self.table, self.inv
        f, b = alpha, alpha
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]]:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][inv[w[j]]]:
                b = table[b][inv[w[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                table[f][w[i]] = b
                table[b][inv[w[i]]] = f
                return
            self.define(f, w[i])

    def run(self, relators: List[Tuple[int, ...]], subgens: List[Tuple[int, ...]]) -> None:
        for h in subgens:
            self.scan_and_fill(1, h)
        c = 1
        while c < len(self.table):
            if self.live(c):
                for r in relators:
                    self.scan_and_fill(c, r)
                    if not self.live(c):
                        break
                if self.live(c):
                    for j in range(self.ncols):
                        if self.table[c][j] == 0:
                            self.define(c, j)
            c += 1

    def compact_rows(self) -> List[List[int]]:
        live = [c for c in range(1, len(self.table)) if self.live(c)]
        number = {c: i + 1 for i, c in enumerate(live)}
        return [[number[self.rep(x)] for x in self.table[c]] for c in live]


def todd_coxeter(
    pres: Presentation,
    subgens: Sequence[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
) -> CosetTable:
    """
    Enumerate the cosets of <subgens> in the presented group.

    Args:
        pres: group presentation
        subgens: subgroup generators as words
        max_cosets: limit on cosets defined (live or dead)

    Returns:
        Complete canonical table

    Raises:
        CosetLimitExceeded: infinite index or limit too small
    """
    if max_cosets < 1:
        raise ValueError(f"max_cosets must be >= 1, got {max_cosets}")
    enumerator = _HLTEnumerator(pres, max_cosets)
    relators = [word_columns(pres, r) for r in pres.relators]
    enumerator.run(relators, [word_columns(pres, pres.reduce(h)) for h in subgens])
    rows = enumerator.compact_rows()
    logger.debug(
        f"Todd-Coxeter {pres.kind.value}({pres.p},{pres.q}): "
        f"{len(rows)} cosets, {enumerator.defined} defined"
    )
    return canonical_form(CosetTable(pres, tuple(tuple(r) for r in rows), TableStatus.COMPLETE))


def relators_hold(t: CosetTable) -> bool:
    """Every relator traces from every coset back to itself."""
    return all(
        trace(t, c, r) == c
        for r in t.presentation.relators
        for c in range(1, t.index + 1)
    )


if __name__ == "__main__":
    from core.presentations import TilingSchlafli as S

    pres = vondyck_presentation(S(3, 5))
    table = todd_coxeter(pres)
    print(f"VonDyck(3,5) over the trivial subgroup: {table.index} cosets")
    y = induced_permutation(table, pres.word("y"))
    print(f"y acts with cycle type {y.cycle_type()[:4]}...")
