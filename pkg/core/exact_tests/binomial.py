"""
Binomial Test
=============
Conditional sign test for two-group counts: X1 | c ~ Binomial(c, 1/2)
under the null, with the same minimum-likelihood two-sided rule as FET.
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..errors import InputError
from .support import (
    EXACT_LIMIT,
    ExactTest,
    Margin,
    Pmf,
    PValueSupport,
    anchored_log_pmf,
    build_support,
)


def binomial_null_pmf(c: int) -> Pmf:
    """Binomial(c, 1/2) pmf; exact rationals up to c = EXACT_LIMIT."""
    if c <= EXACT_LIMIT:
        return [Fraction(math.comb(c, y), 2 ** c) for y in range(c + 1)]
    return np.exp(binomial_null_logpmf(c))


def binomial_null_logpmf(c: int) -> np.ndarray:
    """Binomial(c, 1/2) log-pmf, mirrored bitwise about c / 2."""
    y = np.arange(c, dtype=float)
    return anchored_log_pmf(np.log(c - y) - np.log(y + 1.0), c // 2)


@lru_cache(maxsize=1024)
def bt_support(c: int) -> PValueSupport:
    """Support of the two-sided binomial test with total c."""
    if c < 1:
        raise InputError(f"total c must be at least 1, got {c}")
    if c <= EXACT_LIMIT:
        return build_support(binomial_null_pmf(c), Margin(c=c), ExactTest.BINOMIAL)
    return build_support(binomial_null_logpmf(c), Margin(c=c), ExactTest.BINOMIAL, log=True)


def bt_pvalue(x: int, c: int) -> float:
    """Two-sided binomial test p-value of x successes out of c."""
    if not 0 <= x <= c:
        raise InputError(f"x={x} must lie in [0, c={c}]")
    return bt_support(c).outcome_pvalues[x]


__all__ = [
    'binomial_null_pmf',
    'binomial_null_logpmf',
    'bt_support',
    'bt_pvalue',
]
