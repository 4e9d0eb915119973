"""
Report Schemas
==============
Enums shared across modules and the dataclasses behind every JSON
document tessella writes. Every top-level document carries
"schema": "tessella/1".
"""

from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, List, Optional

SCHEMA = "tessella/1"


class Mode(Enum):
    """Which isometries must permute the colours."""
    FULL = "full"  # all isometries, Coxeter group [p,q]
    DIRECT = "direct"  # rotations only, von Dyck group (p,q,2)


class Convention(Enum):
    """How subgroups are counted as colourings."""
    FIXED = "fixed"  # subgroups containing the fixed tile stabilizer
    CONJUGACY = "conjugacy"  # one per conjugacy class in the mode's group
    MIRROR = "mirror"  # one per class under the full group [p,q]


class CentreKind(Enum):
    """Rotation centres of the base tile."""
    FACE = "face"
    VERTEX = "vertex"


class MatchStatus(Enum):
    """Outcome of one reference table cell."""
    MATCH = "MATCH"
    MISMATCH = "MISMATCH"
    WAIVED = "WAIVED"  # blank cell that disagrees, reported not failed


def _enum_values(d: Dict[str, Any]) -> Dict[str, Any]:
    """Replace enum members by their values, recursively."""
    out = {}
    for key, value in d.items():
        if isinstance(value, Enum):
            out[key] = value.value
        elif isinstance(value, dict):
            out[key] = _enum_values(value)
        elif isinstance(value, list):
            out[key] = [
                _enum_values(v) if isinstance(v, dict) else (v.value if isinstance(v, Enum) else v)
                for v in value
            ]
        else:
            out[key] = value
    return out


@dataclass
class Table1Cell:
    """One (mode, tiling) cell of the reproduced table."""
    mode: Mode
    p: int
    q: int
    expected: int
    computed: int
    blank: bool = False
    status: MatchStatus = MatchStatus.MATCH

    @property
    def label(self) -> str:
        return f"({self.p}^{self.q})"

    def to_dict(self) -> Dict[str, Any]:
        return _enum_values(asdict(self))


@dataclass
class Table1Report:
    """Reproduction of the ten-colour table under one convention."""
    convention: Convention
    k: int
    cells: List[Table1Cell] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def mismatches(self) -> List[Table1Cell]:
        return [c for c in self.cells if c.status == MatchStatus.MISMATCH]

    @property
    def waived(self) -> List[Table1Cell]:
        return [c for c in self.cells if c.status == MatchStatus.WAIVED]

    @property
    def matched(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA,
            "convention": self.convention.value,
            "k": self.k,
            "matched": self.matched,
            "cells": [c.to_dict() for c in self.cells],
            "mismatches": [c.to_dict() for c in self.mismatches],
            "waived": [c.to_dict() for c in self.waived],
        }


@dataclass
class RecordAnalysis:
    """Per-record findings of `tessella analyse`."""
    record_id: int
    p: int
    q: int
    mode: Mode
    k: int
    quotients: Optional[List[Dict[str, Any]]] = None
    enantiomorph_id: Optional[int] = None
    enantiomorph_fixed: Optional[bool] = None
    chiral: Optional[bool] = None
    cycle_type: Optional[List[int]] = None
    centre: Optional[CentreKind] = None
    emphasis_orbits: Optional[Dict[str, List[int]]] = None
    composition: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        d = _enum_values(asdict(self))
        return {key: value for key, value in d.items() if value is not None}


@dataclass
class AnalysisReport:
    """Document written by `tessella analyse`."""
    source: str
    records: List[RecordAnalysis] = field(default_factory=list)
    enantiomorph_orbits: Optional[List[List[int]]] = None

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "schema": SCHEMA,
            "source": self.source,
            "records": [r.to_dict() for r in self.records],
        }
        if self.enantiomorph_orbits is not None:
            d["enantiomorph_orbits"] = self.enantiomorph_orbits
        return d
