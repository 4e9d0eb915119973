"""
Presentations
=============
Symmetry groups of regular tilings (p^q) as finite presentations.

Two kinds are built:
- Coxeter [p,q]: reflections r0, r1, r2 in the sides of the characteristic
  triangle (all isometries).
- von Dyck (p,q,2): rotations x = r0·r1 about the face centre and
  y = r1·r2 about a tile vertex (direct isometries only).

The base tile is the p-gon whose stabilizer is <r0, r1> (Full) or <x>
(Direct). Every downstream module relies on that convention.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from tessella_logging.schemas import Mode
from utils.errors import InvalidSchlafli, ModeMismatch

Letter = Tuple[int, int]  # (generator index, exponent +1/-1)


class GeometryKind(Enum):
    """The plane a tiling (p^q) lives in."""
    SPHERICAL = "spherical"
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"


class PresentationKind(Enum):
    """Which triangle group a presentation describes."""
    COXETER = "coxeter"
    VON_DYCK = "vondyck"


@dataclass(frozen=True)
class TilingSchlafli:
    """Regular tiling (p^q): p-gons, q of them at every vertex."""
    p: int
    q: int

    def __post_init__(self):
        for name, value in (("p", self.p), ("q", self.q)):
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidSchlafli(f"{name} must be an integer, got {value!r}")
            if value < 3:
                raise InvalidSchlafli(f"{name} must be >= 3, got {value}")

    @property
    def label(self) -> str:
        return f"({self.p}^{self.q})"


@dataclass(frozen=True)
class Geometry:
    """Trichotomy of (p^q) together with the exact value d = 2(1/p + 1/q)."""
    kind: GeometryKind
    d: Fraction


@dataclass(frozen=True)
class GeneratorSymbol:
    """A named generator with its own order."""
    name: str
    index: int
    involutory: bool
    order: Optional[int]  # None means infinite


@dataclass(frozen=True)
class Word:
    """
    Sequence of (generator index, exponent) letters.

    Words do not know which generators are involutions; use
    Presentation.word / Presentation.reduce to normalise.
    """
    letters: Tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def power(self, n: int) -> "Word":
        if n < 0:
            return self.inverse().power(-n)
        return Word(self.letters * n)

    def is_empty(self) -> bool:
        return not self.letters


def free_reduce(letters: Iterable[Letter], involutory: Sequence[bool] = ()) -> Tuple[Letter, ...]:
    """
    Cancel adjacent inverse pairs; involutory generators count as self-inverse
    and get exponent +1.
    """
    stack: List[Letter] = []
    for g, e in letters:
        if g < len(involutory) and involutory[g]:
            e = 1
        if stack:
            hg, he = stack[-1]
            if hg == g and (he == -e or (g < len(involutory) and involutory[g])):
                stack.pop()
                continue
        stack.append((g, e))
    return tuple(stack)


@dataclass(frozen=True)
class Presentation:
    """Generators and relators of a Coxeter or von Dyck triangle group."""
    kind: PresentationKind
    p: int
    q: int
    generators: Tuple[GeneratorSymbol, ...]
    relators: Tuple[Word, ...]
    _names: Dict[str, int] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_names", {g.name: g.index for g in self.generators})

    @property
    def mode(self) -> Mode:
        return Mode.FULL if self.kind == PresentationKind.COXETER else Mode.DIRECT

    @property
    def involutory(self) -> Tuple[bool, ...]:
        return tuple(g.involutory for g in self.generators)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def columns(self) -> Tuple[Letter, ...]:
        """Coset-table column layout: generators in order, then inverses of non-involutions."""
        cols = [(g.index, 1) for g in self.generators]
        cols += [(g.index, -1) for g in self.generators if not g.involutory]
        return tuple(cols)

    def reduce(self, word: Word) -> Word:
        return Word(free_reduce(word.letters, self.involutory))

    def word(self, text: str = "") -> Word:
        """
        Parse "r0 r1 r0" or "x y^-1" into a reduced word.

        Raises:
            ValueError: unknown generator or malformed exponent
        """
        letters = []
        for token in text.split():
            name, _, exp = token.partition("^")
            if name not in self._names:
                raise ValueError(f"Unknown generator '{name}' for {self.kind.value} presentation")
            exponent = int(exp) if exp else 1
            g = self._names[name]
            letters.extend([(g, 1 if exponent > 0 else -1)] * abs(exponent))
        return self.reduce(Word(tuple(letters)))

    def format_word(self, word: Word) -> str:
        parts = []
        for g, e in word.letters:
            name = self.generators[g].name
            parts.append(name if e == 1 or self.generators[g].involutory else f"{name}^-1")
        return " ".join(parts)

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "p": self.p,
            "q": self.q,
            "generators": list(self.names),
            "relators": [self.format_word(r) for r in self.relators],
        }


def classify_geometry(s: TilingSchlafli) -> Geometry:
    """Spherical iff d > 1, Euclidean iff d = 1, hyperbolic iff d < 1."""
    d = 2 * (Fraction(1, s.p) + Fraction(1, s.q))
    if d > 1:
        kind = GeometryKind.SPHERICAL
    elif d == 1:
        kind = GeometryKind.EUCLIDEAN
    else:
        kind = GeometryKind.HYPERBOLIC
    return Geometry(kind=kind, d=d)


def _pair_power(a: int, b: int, n: int) -> Word:
    return Word(((a, 1), (b, 1)) * n)


def coxeter_presentation(s: TilingSchlafli) -> Presentation:
    """[p,q]: r0², r1², r2², (r0 r1)^p, (r1 r2)^q, (r0 r2)²."""
    gens = tuple(GeneratorSymbol(f"r{i}", i, True, 2) for i in range(3))
    relators = (
        Word(((0, 1), (0, 1))),
        Word(((1, 1), (1, 1))),
        Word(((2, 1), (2, 1))),
        _pair_power(0, 1, s.p),
        _pair_power(1, 2, s.q),
        _pair_power(0, 2, 2),
    )
    return Presentation(PresentationKind.COXETER, s.p, s.q, gens, relators)


def vondyck_presentation(s: TilingSchlafli) -> Presentation:
    """(p,q,2): x^p, y^q, (x y)²."""
    gens = (
        GeneratorSymbol("x", 0, False, s.p),
        GeneratorSymbol("y", 1, False, s.q),
    )
    relators = (
        Word(((0, 1),) * s.p),
        Word(((1, 1),) * s.q),
        _pair_power(0, 1, 2),
    )
    return Presentation(PresentationKind.VON_DYCK, s.p, s.q, gens, relators)


def presentation_for(s: TilingSchlafli, mode: Mode) -> Presentation:
    """The mode's symmetry group of (p^q)."""
    if mode == Mode.FULL:
        return coxeter_presentation(s)
    return vondyck_presentation(s)


def tile_stabilizer_words(pres: Presentation, mode: Mode) -> Tuple[Word, ...]:
    """
    Generators of the base tile's stabilizer.

    Full -> [r0, r1]; Direct -> [x].

    Raises:
        ModeMismatch: presentation kind does not belong to the mode
    """
    if pres.mode != mode:
        raise ModeMismatch(f"{mode.value} mode needs a {'Coxeter' if mode == Mode.FULL else 'von Dyck'} presentation, got {pres.kind.value}")
    if mode == Mode.FULL:
        return (Word(((0, 1),)), Word(((1, 1),)))
    return (Word(((0, 1),)),)


def centre_word(pres: Presentation, centre: str) -> Word:
    """
    Rotation word about the base tile's centre ("face") or its vertex V ("vertex").

    Full: x = r0 r1, y = r1 r2; Direct: x, y.
    """
    if centre not in ("face", "vertex"):
        raise ValueError(f"Unknown centre '{centre}' (expected face or vertex)")
    if pres.kind == PresentationKind.COXETER:
        return pres.word("r0 r1") if centre == "face" else pres.word("r1 r2")
    return pres.word("x") if centre == "face" else pres.word("y")


if __name__ == "__main__":
    for p, q in [(3, 5), (4, 4), (4, 5)]:
        s = TilingSchlafli(p, q)
        g = classify_geometry(s)
        print(f"{s.label}: {g.kind.value}, d = {g.d}")
    print(coxeter_presentation(TilingSchlafli(4, 5)).to_dict())
