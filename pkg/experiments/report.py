"""
Report tables

A report is an ordered list of rows. Each row carries parameter columns
followed by measured columns; every measurement is paired with a method tag
column ``<name>_method``. Output is CSV (RFC 4180 quoting) or JSON lines with
a fixed column order and no timestamps, so identical inputs give identical
bytes.
"""

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

logger = logging.getLogger(__name__)

EXACT = "exact"
LOWER = "lower"
CALIBRATED_UPPER = "calibrated-upper"
ESTIMATE = "estimate"
METHOD_TAGS = (EXACT, LOWER, CALIBRATED_UPPER, ESTIMATE)
METHOD_SUFFIX = "_method"


def format_value(value: Any) -> str:
    """Deterministic text for a cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True, default=_json_default)
    return str(value)


def _json_default(value: Any):
    if hasattr(value, "item"):
        return value.item()
    if hasattr(value, "value"):
        return value.value
    raise TypeError(f"Cannot serialise {type(value).__name__}")


@dataclass
class ReportRow:
    """Ordered record of parameter columns and tagged measurements."""

    params: Dict[str, Any] = field(default_factory=dict)
    measurements: Dict[str, Tuple[Any, str]] = field(default_factory=dict)

    def measure(self, name: str, value: Any, method: str) -> "ReportRow":
        if method not in METHOD_TAGS:
            raise ValueError(f"Unknown method tag: {method}")
        self.measurements[name] = (value, method)
        return self

    def value(self, name: str) -> Any:
        if name in self.params:
            return self.params[name]
        return self.measurements[name][0]

    def as_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = dict(self.params)
        for name, (value, method) in self.measurements.items():
            record[name] = value
            record[name + METHOD_SUFFIX] = method
        return record


@dataclass
class Report:
    """Named table of rows with run metadata."""

    title: str
    rows: List[ReportRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    passed: bool = True

    def add(self, row: ReportRow) -> ReportRow:
        self.rows.append(row)
        return row

    def sort(self, *keys: str) -> "Report":
        self.rows.sort(key=lambda row: tuple(row.value(k) for k in keys))
        return self

    def columns(self) -> List[str]:
        columns: List[str] = []
        for row in self.rows:
            for name in row.as_record():
                if name not in columns:
                    columns.append(name)
        return columns

    def column(self, name: str) -> List[Any]:
        return [row.value(name) for row in self.rows]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        columns = self.columns()
        writer = csv.writer(buffer, lineterminator="\r\n")
        writer.writerow(columns)
        for row in self.rows:
            record = row.as_record()
            writer.writerow([format_value(record.get(c)) for c in columns])
        return buffer.getvalue()

    def to_json_lines(self) -> str:
        lines = [
            json.dumps(
                {"report": self.title, "metadata": self.metadata},
                sort_keys=True,
                default=_json_default,
            )
        ]
        for row in self.rows:
            lines.append(json.dumps(row.as_record(), default=_json_default))
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json_lines()
        raise ValueError(f"Unknown report format: {fmt}")


def write_report(report: Report, path: Optional[str], fmt: str) -> str:
    """Write the report to ``path`` (stdout when None); returns the text."""
    text = report.render(fmt)
    if path:
        with open(path, "w", newline="") as handle:
            handle.write(text)
        logger.info(f"Wrote {len(report.rows)} rows to {path}")
    else:
        print(text, end="")
    return text
