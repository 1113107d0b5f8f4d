"""
Artifact writer - CSV tables and summary.json for one run.
Floats are printed with 17 significant digits so identical runs give identical bytes.
"""

import csv
import hashlib
import io
import json
import logging
from numbers import Integral, Real
from pathlib import Path
from typing import Any, Dict, List, Sequence

from ..core.constants import FLOAT_FORMAT, SUMMARY_FILE
from ..schemas.output import RunSummary, SummarySchema

logger = logging.getLogger(__name__)


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, Real):
        return FLOAT_FORMAT % float(value)
    if value is None:
        return ""
    return str(value)


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()


class ArtifactWriter:
    """Writes the tables of one command into its output directory."""

    def __init__(self, directory: str, formats: Sequence[str] = ("csv", "json")):
        self.directory = Path(directory)
        self.formats = set(formats)
        self.written: Dict[str, str] = {}

    def write_csv(self, name: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
        if "csv" not in self.formats:
            return
        text = render_csv(header, rows)
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / name
        with open(path, "w", newline="") as f:
            f.write(text)
        self.written[name] = hashlib.sha256(text.encode("utf-8")).hexdigest()
        logger.info("wrote %s (%d rows)", path, len(rows))

    def write_summary(self, summary: RunSummary) -> Dict[str, Any]:
        """Record artifact digests in the summary and write it when json output is enabled."""
        summary.artifacts.update(self.written)
        data = summary.to_dict()
        is_valid, errors = SummarySchema.validate(data)
        if not is_valid:
            raise ValueError(f"summary does not match its schema: {errors}")
        if "json" in self.formats:
            self.directory.mkdir(parents=True, exist_ok=True)
            path = self.directory / SUMMARY_FILE
            with open(path, "w") as f:
                json.dump(data, f, indent=2, sort_keys=False, default=_json_default)
                f.write("\n")
            logger.info("wrote %s", path)
        return data

    @property
    def files(self) -> List[str]:
        return sorted(self.written)


def _json_default(value: Any) -> Any:
    # numpy scalars and arrays
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serialisable")
