"""
Step-up Procedures
==================
Linear step-up FDR procedures on ordered p-values.

Features:
- Benjamini-Hochberg (BH)
- Adaptive BH with a plug-in pi0 estimate
- k_hat from the step-up cutoffs; adjusted p-values reported alongside
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import InputError
from ..estimator import as_pvalues

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RejectionReport:
    """
    Outcome of a step-up procedure.

    `adjusted` is indexed like the input; `order` sorts the input ascending
    (ties by original index); `rejected` holds original indices, ascending.
    """
    alpha: float
    order: np.ndarray
    adjusted: np.ndarray
    k_hat: int
    rejected: np.ndarray
    procedure: str = "bh"
    pi0_hat: float = 1.0

    @property
    def m(self) -> int:
        return int(self.adjusted.size)

    @property
    def rejected_mask(self) -> np.ndarray:
        mask = np.zeros(self.m, dtype=bool)
        mask[self.rejected] = True
        return mask


def check_alpha(alpha: float):
    if not 0.0 < alpha < 1.0:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}", alpha=alpha)


def check_pi0(pi0_hat: float):
    if not 0.0 < pi0_hat <= 1.0:
        raise InputError(f"pi0_hat must lie in (0, 1], got {pi0_hat}", pi0_hat=pi0_hat)


def stable_order(p: np.ndarray) -> np.ndarray:
    """Ascending order with ties broken by original index."""
    return np.argsort(p, kind="stable")


def step_up_report(
    p: np.ndarray,
    order: np.ndarray,
    scores: np.ndarray,
    alpha: float,
    procedure: str,
    pi0_hat: float = 1.0,
) -> RejectionReport:
    """
    Step up on per-rank scores and report adjusted p-values.

    scores[i] is the statistic of the (i+1)-th smallest p-value on the
    p-value scale (p_(i) for BH). k_hat is the largest rank i with
    pi0_hat * scores[i-1] <= i * alpha / m, compared exactly as written;
    the adjusted value is min over k >= i of min(1, pi0_hat * m * scores[k] / k).
    """
    m = p.size
    ranks = np.arange(1, m + 1, dtype=float)
    passing = np.flatnonzero(pi0_hat * scores <= ranks * alpha / m)
    k_hat = int(passing[-1]) + 1 if passing.size else 0

    ratios = pi0_hat * m * scores / ranks
    adjusted_sorted = np.minimum(np.minimum.accumulate(ratios[::-1])[::-1], 1.0)
    adjusted = np.empty(m)
    adjusted[order] = adjusted_sorted

    rejected = np.sort(order[:k_hat])
    logger.debug(f"{procedure}: m={m} alpha={alpha} k_hat={k_hat}")
    return RejectionReport(
        alpha=alpha,
        order=order,
        adjusted=adjusted,
        k_hat=k_hat,
        rejected=rejected,
        procedure=procedure,
        pi0_hat=pi0_hat,
    )


def bh(pvalues: Sequence[float], alpha: float) -> RejectionReport:
    """
    Benjamini-Hochberg: reject H_(1..k_hat), k_hat = max{i : p_(i) <= i alpha / m}.

    Example:
        bh([0.01, 0.02, 0.5], 0.05).k_hat  # 2
    """
    return adaptive_bh(pvalues, 1.0, alpha, procedure="bh")


def adaptive_bh(
    pvalues: Sequence[float],
    pi0_hat: float,
    alpha: float,
    procedure: str = "abh",
) -> RejectionReport:
    """
    Adaptive BH: k_hat = max{i : pi0_hat * p_(i) <= i alpha / m}.

    pi0_hat = 1 gives exactly the BH report.
    """
    check_alpha(alpha)
    check_pi0(pi0_hat)
    p = as_pvalues(pvalues)
    order = stable_order(p)
    scores = p[order]
    return step_up_report(p, order, scores, alpha, procedure, pi0_hat)


__all__ = [
    'RejectionReport',
    'check_alpha',
    'check_pi0',
    'stable_order',
    'step_up_report',
    'bh',
    'adaptive_bh',
]
