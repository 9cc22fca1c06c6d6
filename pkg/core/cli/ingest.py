"""
Count Matrix Ingestion
======================
Reads tab-separated two-group count files and removes rows that carry no
information before analysis.

File format: one header line, then `id  x1  x2  n1  n2` per row.
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Tuple, Union

import numpy as np

from ..errors import InputError
from ..exact_tests import CountPair, PValueSupport, fet_pvalue, fet_support

logger = logging.getLogger(__name__)

COLUMNS = ("id", "x1", "x2", "n1", "n2")


@dataclass(frozen=True)
class CountRow:
    """One row of a count matrix file."""
    id: str
    pair: CountPair
    line_number: int = 0

    @property
    def c(self) -> int:
        return self.pair.c

    @property
    def support(self) -> PValueSupport:
        return fet_support(self.pair.n1, self.pair.n2, self.pair.c)

    @property
    def pvalue(self) -> float:
        return fet_pvalue(self.pair)


@dataclass
class CleanedRows:
    """Rows kept for analysis and rows removed, with the reason."""
    kept: List[CountRow] = field(default_factory=list)
    removed: List[Tuple[CountRow, str]] = field(default_factory=list)

    @property
    def supports(self) -> Tuple[PValueSupport, ...]:
        return tuple(row.support for row in self.kept)

    @property
    def pvalues(self) -> np.ndarray:
        return np.array([row.pvalue for row in self.kept], dtype=float)

    @property
    def ids(self) -> List[str]:
        return [row.id for row in self.kept]


def _parse_count(value: str, name: str, line_number: int) -> int:
    try:
        count = int(value)
    except ValueError:
        raise InputError(f"{name} is not an integer: {value!r}", line_number=line_number) from None
    if count < 0:
        raise InputError(f"{name} must be non-negative, got {count}", line_number=line_number)
    return count


def parse_count_lines(lines: Iterable[str]) -> List[CountRow]:
    """
    Parse count matrix lines; the first non-blank line is the header.

    Raises:
        InputError: malformed line, non-integer count, x > n or duplicate id,
            with the offending line number
    """
    rows: List[CountRow] = []
    seen = set()
    header_seen = False
    reader = csv.reader(lines, delimiter="\t")
    for fields in reader:
        line_number = reader.line_num
        if not fields or all(not f.strip() for f in fields):
            continue
        if not header_seen:
            header_seen = True
            if len(fields) != len(COLUMNS):
                raise InputError(
                    f"header must have {len(COLUMNS)} columns ({' '.join(COLUMNS)}), got {len(fields)}",
                    line_number=line_number,
                )
            continue
        if len(fields) != len(COLUMNS):
            raise InputError(
                f"expected {len(COLUMNS)} tab-separated fields, got {len(fields)}",
                line_number=line_number,
            )

        row_id = fields[0].strip()
        if not row_id:
            raise InputError("empty identifier", line_number=line_number)
        if row_id in seen:
            raise InputError(f"duplicate identifier {row_id!r}", line_number=line_number)
        seen.add(row_id)

        x1, x2, n1, n2 = (
            _parse_count(value.strip(), name, line_number)
            for value, name in zip(fields[1:], COLUMNS[1:])
        )
        try:
            pair = CountPair(x1=x1, x2=x2, n1=n1, n2=n2)
        except InputError as e:
            raise InputError(e.message, line_number=line_number) from None
        rows.append(CountRow(id=row_id, pair=pair, line_number=line_number))

    if not header_seen:
        raise InputError("count matrix is empty; expected a header line")
    return rows


def read_count_matrix(path: Union[str, Path]) -> List[CountRow]:
    """Read a count matrix file."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            rows = parse_count_lines(handle)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}", path=str(path)) from None
    logger.info(f"read {len(rows)} rows from {path}")
    return rows


def removal_reason(row: CountRow) -> str:
    """Why a row carries no information, or '' when it is kept."""
    if row.c <= 1:
        return f"total count {row.c} <= 1"
    if not row.support.is_informative:
        return "only attainable p-value is 1"
    return ""


def clean_rows(rows: Iterable[CountRow]) -> CleanedRows:
    """Drop rows with c <= 1 or a support of {1}, logging each one."""
    cleaned = CleanedRows()
    for row in rows:
        reason = removal_reason(row)
        if reason:
            logger.info(f"removed row {row.id!r} (line {row.line_number}): {reason}")
            cleaned.removed.append((row, reason))
        else:
            cleaned.kept.append(row)
    return cleaned


__all__ = [
    'COLUMNS',
    'CountRow',
    'CleanedRows',
    'parse_count_lines',
    'read_count_matrix',
    'removal_reason',
    'clean_rows',
]
