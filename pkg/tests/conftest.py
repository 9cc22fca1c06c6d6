"""
Pytest configuration and fixtures
==================================
"""

import os
from pathlib import Path
from typing import Callable, List, Sequence, Tuple

import pytest

from core.exact_tests import Margin, PValueSupport, fet_support

# Keep environment defaults predictable
os.environ["DPI0_ALPHA"] = "0.05"
os.environ["DPI0_SEED"] = "20240101"
os.environ["DPI0_REPS"] = "1000"
os.environ["DPI0_PRECISION"] = "6"
os.environ["DPI0_FORMAT"] = "json"
os.environ["DPI0_WORKERS"] = "1"
os.environ["DPI0_LOG_LEVEL"] = "WARNING"

COUNT_HEADER = "id\tx1\tx2\tn1\tn2\n"

CountRecord = Tuple[str, int, int, int, int]


@pytest.fixture
def example_supports() -> List[PValueSupport]:
    """Supports of three FET rows with n1 = n2 = 5 and totals 2, 3, 4."""
    return [fet_support(5, 5, c) for c in (2, 3, 4)]


@pytest.fixture
def two_point_support() -> Callable[[float], PValueSupport]:
    """Factory for a support {v, 1} with F(v) = v."""
    def make(v: float) -> PValueSupport:
        return PValueSupport(values=(v, 1.0), masses=(v, 1.0 - v), margin=Margin(c=2))
    return make


@pytest.fixture
def write_counts(tmp_path: Path) -> Callable[..., Path]:
    """Write rows of (id, x1, x2, n1, n2) as a count matrix file."""
    def write(rows: Sequence[CountRecord], name: str = "counts.tsv") -> Path:
        path = tmp_path / name
        lines = [COUNT_HEADER] + ["\t".join(str(v) for v in row) + "\n" for row in rows]
        path.write_text("".join(lines), encoding="utf-8")
        return path
    return write


@pytest.fixture
def example_counts(write_counts) -> Path:
    """The three example rows (totals 2, 3, 4) plus a row with total 1."""
    return write_counts([
        ("g1", 0, 2, 5, 5),
        ("g2", 0, 3, 5, 5),
        ("g3", 0, 4, 5, 5),
        ("g4", 1, 0, 5, 5),
    ])


@pytest.fixture
def informative_counts(write_counts) -> Path:
    """Rows whose supports keep eta_j below 1 on the default grid start."""
    return write_counts([
        ("a", 0, 8, 10, 10),
        ("b", 4, 4, 10, 10),
        ("c", 1, 7, 10, 10),
        ("d", 3, 5, 10, 10),
        ("e", 2, 6, 10, 10),
        ("f", 4, 4, 10, 10),
    ])
