"""
Fisher's Exact Test
===================
Two-sided conditional test of q1 = q2 for two binomial groups.

Given margins (n1, n2, c) the group-1 cell y is hypergeometric under the
null. The two-sided p-value sums the null mass of every table no more
likely than the observed one.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..errors import InputError
from .support import (
    EXACT_LIMIT,
    CountPair,
    ExactTest,
    Margin,
    Pmf,
    PValueSupport,
    anchored_log_pmf,
    build_support,
)

logger = logging.getLogger(__name__)


def hypergeometric_pmf(n1: int, n2: int, c: int) -> Pmf:
    """
    Null pmf of the group-1 cell over its attainable range.

    Exact rationals up to n1 + n2 = EXACT_LIMIT, floats beyond (which may
    underflow to 0 in the far tails; see hypergeometric_logpmf).
    """
    margin = Margin(c=c, n1=n1, n2=n2)
    n = n1 + n2
    if n <= EXACT_LIMIT:
        total = math.comb(n, c)
        return [
            Fraction(math.comb(n1, int(y)) * math.comb(n2, c - int(y)), total)
            for y in margin.outcomes
        ]
    return np.exp(hypergeometric_logpmf(n1, n2, c))


def hypergeometric_logpmf(n1: int, n2: int, c: int) -> np.ndarray:
    """
    Normalised null log-pmf of the group-1 cell.

    Consecutive-term ratios come from exact integer products, so with
    n1 = n2 the outcomes y and c - y receive bitwise equal values.
    """
    margin = Margin(c=c, n1=n1, n2=n2)
    y = margin.outcomes[:-1].astype(float)
    log_ratio = np.log((n1 - y) * (c - y)) - np.log((y + 1.0) * (n2 - c + y + 1.0))
    first, last = margin.first_outcome, margin.last_outcome
    mode = min(max((c + 1) * (n1 + 1) // (n1 + n2 + 2), first), last)
    return anchored_log_pmf(log_ratio, mode - first)


@lru_cache(maxsize=4096)
def fet_support(n1: int, n2: int, c: int) -> PValueSupport:
    """
    Support of the two-sided FET p-value for margins (n1, n2, c).

    Example:
        fet_support(5, 5, 4).values  # (0.0476..., 0.5238..., 1.0)
    """
    _check_margin(n1, n2, c)
    margin = Margin(c=c, n1=n1, n2=n2)
    if n1 + n2 <= EXACT_LIMIT:
        support = build_support(hypergeometric_pmf(n1, n2, c), margin, ExactTest.FISHER)
    else:
        support = build_support(
            hypergeometric_logpmf(n1, n2, c), margin, ExactTest.FISHER, log=True
        )
    logger.debug(f"FET support n1={n1} n2={n2} c={c}: {len(support.values)} values")
    return support


def fet_pvalue(t: CountPair) -> float:
    """
    Two-sided FET p-value of an observed count pair.

    Degenerate margins (c = 0 or c = n1 + n2) have a single attainable
    table and return 1.
    """
    if not isinstance(t, CountPair):
        raise InputError(f"expected CountPair, got {type(t).__name__}")
    support = fet_support(int(t.n1), int(t.n2), int(t.c))
    return support.outcome_pvalues[t.x1 - support.margin.first_outcome]


def _check_margin(n1: int, n2: int, c: int):
    if n1 < 0 or n2 < 0:
        raise InputError(f"group sizes must be non-negative, got n1={n1}, n2={n2}")
    if not 0 <= c <= n1 + n2:
        raise InputError(f"total c={c} must lie in [0, {n1 + n2}]")


__all__ = [
    'hypergeometric_pmf',
    'hypergeometric_logpmf',
    'fet_support',
    'fet_pvalue',
]
