"""
Errors
======
Exception hierarchy shared by every tessella module.

Argument mistakes that are not domain-specific (k <= 0, negative depth,
non-positive tolerance) stay plain ValueErrors.
"""


class TessellaError(Exception):
    """Base class for all tessella failures."""


class InvalidSchlafli(TessellaError, ValueError):
    """(p, q) outside p >= 3, q >= 3."""


class ModeMismatch(TessellaError, ValueError):
    """Mode, presentation kind or word alphabet do not agree."""


class CosetLimitExceeded(TessellaError, RuntimeError):
    """Coset enumeration defined more cosets than allowed."""

    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(
            f"Coset enumeration exceeded {limit} cosets. Either the subgroup has "
            f"infinite index (expected for hyperbolic groups over a small subgroup) "
            f"or max_cosets is too small; the two cases cannot be told apart."
        )


class IncompleteTable(TessellaError, ValueError):
    """Operation needs a complete coset table."""


class DeadCoset(TessellaError, ValueError):
    """Coset number is not live in the table."""


class UnsupportedGeometry(TessellaError, ValueError):
    """Only hyperbolic (p, q) have geometry in this package."""


class NumericOverflow(TessellaError, ArithmeticError):
    """A point left the numerically safe part of the disc."""


class PatchTooShallow(TessellaError, ValueError):
    """Patch has no interior tiles to check."""


class CentreOutsidePatch(TessellaError, ValueError):
    """Rotation centre lies outside the covered region of a patch."""


class CoincidentPoints(TessellaError, ValueError):
    """Two points expected to differ are equal."""


class OracleLimitExceeded(TessellaError, ValueError):
    """Brute-force count requested beyond its cost guard."""


class SchemaError(TessellaError, ValueError):
    """JSON document does not carry the expected schema or shape."""
