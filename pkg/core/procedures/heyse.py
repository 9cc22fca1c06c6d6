"""
Heyse Procedures
================
BH modified for discrete p-values: m * p_(i) is replaced by the sum of
every test's null CDF evaluated at p_(i).
"""

import logging
from typing import Sequence

import numpy as np

from ..errors import InputError
from ..estimator import as_pvalues
from ..exact_tests import PValueSupport
from .step_up import RejectionReport, check_alpha, check_pi0, stable_order, step_up_report

logger = logging.getLogger(__name__)


def cdf_sums(supports: Sequence[PValueSupport], points: np.ndarray) -> np.ndarray:
    """s(t) = sum_j F_j(t) at each point."""
    total = np.zeros(points.size)
    for s in supports:
        total += s.cdf(points)
    return total


def bhh(pvalues: Sequence[float], supports: Sequence[PValueSupport], alpha: float) -> RejectionReport:
    """
    Heyse's BH: adjusted p_(i) = min over k >= i of min(1, s(p_(k)) / k).

    Since F_j(t) <= t, rejections always contain those of BH.
    """
    return adaptive_bhh(pvalues, supports, 1.0, alpha, procedure="bhh")


def adaptive_bhh(
    pvalues: Sequence[float],
    supports: Sequence[PValueSupport],
    pi0_hat: float,
    alpha: float,
    procedure: str = "abhh",
) -> RejectionReport:
    """Adaptive BHH: s(p_(k)) / k scaled by pi0_hat before the tail minimum."""
    check_alpha(alpha)
    check_pi0(pi0_hat)
    p = as_pvalues(pvalues)
    if len(supports) != p.size:
        raise InputError(f"got {len(supports)} supports for {p.size} p-values")
    order = stable_order(p)
    scores = cdf_sums(supports, p[order]) / p.size
    return step_up_report(p, order, scores, alpha, procedure, pi0_hat)


__all__ = [
    'cdf_sums',
    'bhh',
    'adaptive_bhh',
]
