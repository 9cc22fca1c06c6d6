"""
Report Emission
===============
Renders command results as JSON or CSV with explicit numeric precision.

Every report echoes the effective configuration. CSV output is long format
(one metric per line) except the support table, which is one line per row
so it can be read back with `read_support_report`.
"""

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..errors import InputError
from ..exact_tests import ExactTest, Margin, PValueSupport
from .config import OutputFormat

LIST_SEPARATOR = ";"
FULL_PRECISION = 17
CONFIG_PREFIX = "# config "
SUPPORT_COLUMNS = ("id", "c", "n1", "n2", "status", "reason", "values", "masses")


@dataclass
class Report:
    """
    Result of one subcommand.

    `sections` maps a section name to its rows; `keys` names the column
    that identifies a row within its section.
    """
    command: str
    config: Dict[str, Any]
    summary: Dict[str, Any] = field(default_factory=dict)
    sections: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    keys: Dict[str, str] = field(default_factory=dict)
    wide: bool = False
    # columns written at FULL_PRECISION whatever the requested precision
    exact_columns: Tuple[str, ...] = ()

    def add_section(self, name: str, rows: List[Dict[str, Any]], key: str = "id"):
        self.sections[name] = rows
        self.keys[name] = key

    def precision_for(self, column: str, precision: int) -> int:
        return FULL_PRECISION if column in self.exact_columns else precision


def _plain(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    return value


def round_significant(value: float, precision: int) -> Optional[float]:
    """Round to `precision` significant digits; None for inf and nan."""
    if not math.isfinite(value):
        return None
    return float(f"{value:.{precision}g}")


def format_value(value: Any, precision: int) -> str:
    """Text form of a report value for CSV."""
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.{precision}g}"
    if isinstance(value, (list, tuple)):
        return LIST_SEPARATOR.join(format_value(v, precision) for v in value)
    return str(value)


def _json_value(value: Any, precision: int) -> Any:
    value = _plain(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return round_significant(value, precision)
    if isinstance(value, (list, tuple)):
        return [_json_value(v, precision) for v in value]
    if isinstance(value, dict):
        return {str(k): _json_value(v, precision) for k, v in value.items()}
    return str(value)


def render_json(report: Report, precision: int) -> str:
    payload = {
        "command": report.command,
        "config": report.config,
        "summary": _json_value(report.summary, precision),
        "sections": {
            name: [
                {column: _json_value(value, report.precision_for(column, precision))
                 for column, value in row.items()}
                for row in rows
            ]
            for name, rows in report.sections.items()
        },
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def render_csv(report: Report, precision: int) -> str:
    buffer = io.StringIO()
    buffer.write(CONFIG_PREFIX + json.dumps(report.config, sort_keys=True) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")

    if report.wide:
        for name, rows in report.sections.items():
            if not rows:
                writer.writerow(SUPPORT_COLUMNS if name == "supports" else ())
                continue
            columns = list(rows[0].keys())
            writer.writerow(columns)
            for row in rows:
                writer.writerow(
                    [format_value(row.get(c), report.precision_for(c, precision)) for c in columns]
                )
        return buffer.getvalue()

    writer.writerow(("section", "id", "metric", "value"))
    for metric, value in report.summary.items():
        writer.writerow(("summary", "", metric, format_value(value, precision)))
    for name, rows in report.sections.items():
        key = report.keys.get(name, "id")
        for index, row in enumerate(rows):
            row_id = format_value(row.get(key, index), precision)
            for metric, value in row.items():
                if metric == key:
                    continue
                text = format_value(value, report.precision_for(metric, precision))
                writer.writerow((name, row_id, metric, text))
    return buffer.getvalue()


def render(report: Report, fmt: OutputFormat, precision: int) -> str:
    if fmt is OutputFormat.CSV:
        return render_csv(report, precision)
    return render_json(report, precision)


def emit(text: str, out: Optional[Path] = None):
    """Write rendered output to a file, or stdout when out is None."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")


def _support_from_fields(row: Dict[str, Any], where: str) -> PValueSupport:
    try:
        values = row["values"]
        masses = row["masses"]
        if isinstance(values, str):
            values = [float(v) for v in values.split(LIST_SEPARATOR) if v]
            masses = [float(v) for v in masses.split(LIST_SEPARATOR) if v]
        margin = Margin(c=int(row["c"]), n1=int(row["n1"]), n2=int(row["n2"]))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{where}: malformed support row ({e})") from None
    return PValueSupport(
        values=tuple(float(v) for v in values),
        masses=tuple(float(v) for v in masses),
        margin=margin,
        kind=ExactTest.FISHER,
    )


def read_support_report(source: Union[str, Path]) -> Dict[str, PValueSupport]:
    """
    Parse `support` output (JSON or CSV) back into supports keyed by id.

    Support values and masses are written at full precision, so they read
    back equal to the supports they came from.
    """
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}", path=str(path)) from None
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        rows = payload.get("sections", {}).get("supports", [])
        return {str(r["id"]): _support_from_fields(r, f"row {r.get('id')!r}") for r in rows}

    lines = [line for line in text.splitlines() if not line.startswith("#")]
    supports: Dict[str, PValueSupport] = {}
    for line_number, row in enumerate(csv.DictReader(lines), start=3):
        supports[row["id"]] = _support_from_fields(row, f"line {line_number}")
    return supports


__all__ = [
    'Report',
    'FULL_PRECISION',
    'round_significant',
    'format_value',
    'render_json',
    'render_csv',
    'render',
    'emit',
    'read_support_report',
]
