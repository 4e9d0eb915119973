"""
Report Writer
=============
Writes the JSON and SVG documents tessella produces and reads record
files back. JSON is written with sorted keys, two-space indent and a
trailing newline so identical inputs give identical bytes.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from loguru import logger

from core.low_index import SubgroupRecord
from utils.errors import SchemaError
from .schemas import SCHEMA

PathLike = Union[str, Path]


def dumps(document: Any) -> str:
    """Canonical JSON text."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def records_document(records: Sequence[SubgroupRecord], **meta: Any) -> Dict[str, Any]:
    """records.json layout: schema, metadata and the record list."""
    doc: Dict[str, Any] = {"schema": SCHEMA, "count": len(records)}
    doc.update(meta)
    doc["records"] = [r.to_dict() for r in records]
    return doc


class ReportWriter:
    """
    Writes documents under an output directory.

    Directories are created on demand.
    """

    def __init__(self, output_dir: PathLike = "."):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def _target(self, name: PathLike) -> Path:
        path = Path(name)
        if not path.is_absolute():
            path = self.output_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def write_json(self, name: PathLike, document: Dict[str, Any]) -> Path:
        """
        Args:
            name: file name (relative to output_dir) or absolute path
            document: JSON-serialisable dict; gains "schema" if missing

        Returns:
            Path written
        """
        if "schema" not in document:
            document = {"schema": SCHEMA, **document}
        path = self._target(name)
        path.write_text(dumps(document), encoding="utf-8")
        logger.info(f"Wrote {path}")
        return path

    def write_records(self, name: PathLike, records: Sequence[SubgroupRecord], **meta: Any) -> Path:
        return self.write_json(name, records_document(records, **meta))

    def write_svg(self, name: PathLike, svg: str) -> Path:
        path = self._target(name)
        path.write_text(svg, encoding="utf-8")
        logger.info(f"Wrote {path}")
        return path


class RecordReader:
    """
    Reads records.json files (or single record documents) back into
    SubgroupRecords.
    """

    def __init__(self, base_dir: PathLike = "."):
        self.base_dir = Path(base_dir)

    def read_document(self, name: PathLike) -> Dict[str, Any]:
        """
        Raises:
            FileNotFoundError: file missing
            SchemaError: not JSON, or wrong schema tag
        """
        path = Path(name)
        if not path.is_absolute():
            path = self.base_dir / path
        if not path.exists():
            raise FileNotFoundError(f"Record file not found: {path}")
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path} is not valid JSON: {e}") from e
        if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
            raise SchemaError(f"{path} does not carry schema {SCHEMA}")
        return doc

    def read_records(self, name: PathLike, ids: Optional[Sequence[int]] = None) -> List[SubgroupRecord]:
        """
        Args:
            name: records.json path
            ids: keep only these record ids

        Returns:
            Records in file order
        """
        doc = self.read_document(name)
        raw = doc["records"] if "records" in doc else [doc]
        records = [SubgroupRecord.from_dict(r) for r in raw]
        if ids is not None:
            wanted = set(ids)
            records = [r for r in records if r.id in wanted]
        return records
