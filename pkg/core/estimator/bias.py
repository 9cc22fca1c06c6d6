"""
Bias Oracles
============
Closed-form expectations and biases of the pi0 estimators, conditional on
the realised supports.

Features:
- Storey bias under continuous nulls (B1) and discrete nulls (B2)
- Expectation and bias of each trial estimate beta(tau_j)
- Brute-force joint-outcome enumeration for small m
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ConfigurationError, InputError
from ..exact_tests import PValueSupport, alt_cdf
from .grid import TuningGrid
from .pi0 import beta_trials

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BiasOracle:
    """Oracle values per tuning parameter tau_j."""
    taus: Tuple[float, ...]
    pi0: float
    b1: np.ndarray              # Storey +1 bias with uniform nulls
    b2: np.ndarray              # Storey +1 bias with the discrete nulls
    expected_betas: np.ndarray  # E[beta(tau_j)], uncapped
    beta_biases: np.ndarray     # E[beta(tau_j)] - pi0

    @property
    def extra_discreteness_bias(self) -> np.ndarray:
        """B2 - B1, never negative."""
        return self.b2 - self.b1

    @property
    def pi0_hat_bias(self) -> float:
        """Bias of the mean of the uncapped trial estimates."""
        return float(np.mean(self.beta_biases))


def null_probabilities(truth: Sequence, m: int) -> np.ndarray:
    """
    Per-test probability of being a true null.

    Booleans are labels (True = null); floats in [0, 1] are prior
    probabilities, e.g. pi0 for iid Bernoulli labels.
    """
    w = np.asarray(truth, dtype=float)
    if w.shape != (m,):
        raise InputError(f"expected {m} truth labels, got shape {w.shape}")
    if np.any(w < 0.0) or np.any(w > 1.0):
        raise InputError("truth values must be labels or probabilities in [0, 1]")
    return w


def _alt_odds(alt_odds: Optional[Sequence[Optional[float]]], w: np.ndarray) -> List[Optional[float]]:
    m = w.size
    odds: List[Optional[float]] = [None] * m if alt_odds is None else list(alt_odds)
    if len(odds) != m:
        raise InputError(f"expected {m} alternative odds ratios, got {len(odds)}")
    for i in range(m):
        if w[i] < 1.0 and odds[i] is None:
            raise ConfigurationError(
                f"test {i} may be a false null but has no alternative odds ratio",
                index=i,
            )
    return odds


def bias_oracles(
    supports: Sequence[PValueSupport],
    grid: TuningGrid,
    truth: Sequence,
    alt_odds: Optional[Sequence[Optional[float]]] = None,
) -> BiasOracle:
    """
    Exact B1, B2, E[beta(tau_j)] and Bias[beta(tau_j)] for each tau_j.

    Null CDFs come from the supports, alternative CDFs from Fisher's
    noncentral law with the given odds ratios. Bias is E[beta] - pi0 with
    pi0 the mean null probability.

    Raises:
        ConfigurationError: a possibly-false test has no odds ratio
    """
    m = len(supports)
    if grid.m != m:
        raise InputError(f"grid covers {grid.m} tests, got {m} supports")
    w = null_probabilities(truth, m)
    odds = _alt_odds(alt_odds, w)
    pi0 = float(w.mean())

    n = grid.n
    b1 = np.empty(n)
    b2 = np.empty(n)
    expected = np.empty(n)
    for j, tau in enumerate(grid.taus):
        eta = float(grid.etas[j])
        lambdas = grid.lambdas[:, j]
        scale_tau = 1.0 / (m * (1.0 - tau))

        null_gap = 0.0
        alt_tail = 0.0
        beta_sum = 0.0
        for i, s in enumerate(supports):
            lam = float(lambdas[i])
            f_tau = s.cdf(tau)
            null_gap += w[i] * (tau - f_tau)
            if w[i] < 1.0:
                g_tau = alt_cdf(s, odds[i], tau)
                alt_tail += (1.0 - w[i]) * (1.0 - g_tau)
            if lam < 1.0:
                term = w[i] * (1.0 - s.cdf(lam))
                if w[i] < 1.0:
                    term += (1.0 - w[i]) * (1.0 - alt_cdf(s, odds[i], lam))
                beta_sum += term / (1.0 - lam)

        b1[j] = scale_tau + scale_tau * alt_tail
        b2[j] = b1[j] + scale_tau * null_gap
        if eta >= 1.0:
            expected[j] = np.inf
        else:
            scale_eta = 1.0 / (m * (1.0 - eta))
            expected[j] = scale_eta + (1.0 - tau) * scale_eta * beta_sum

    return BiasOracle(
        taus=grid.taus,
        pi0=pi0,
        b1=b1,
        b2=b2,
        expected_betas=expected,
        beta_biases=expected - pi0,
    )


def _pvalue_law(s: PValueSupport, psi: Optional[float]) -> List[Tuple[float, float]]:
    if psi is None or psi == 1.0:
        return list(zip(s.values, s.masses))
    weights = s.outcome_weights(psi)
    return list(zip(s.outcome_pvalues, weights))


def enumerate_expected_beta(
    supports: Sequence[PValueSupport],
    grid: TuningGrid,
    truth: Sequence[bool],
    alt_odds: Optional[Sequence[Optional[float]]] = None,
    cap: bool = False,
) -> np.ndarray:
    """
    E[beta(tau_j)] by summing over every joint outcome of the m tests.

    Cost grows as the product of the outcome counts; meant for small m.
    """
    m = len(supports)
    labels = np.asarray(truth, dtype=bool)
    if labels.shape != (m,):
        raise InputError(f"expected {m} truth labels, got shape {labels.shape}")
    odds = _alt_odds(alt_odds, labels.astype(float))
    laws = [
        _pvalue_law(s, None if labels[i] else odds[i])
        for i, s in enumerate(supports)
    ]

    total = np.zeros(grid.n)
    for joint in itertools.product(*laws):
        prob = float(np.prod([mass for _, mass in joint]))
        if prob == 0.0:
            continue
        total += prob * beta_trials([p for p, _ in joint], grid, cap=cap)
    return total


__all__ = [
    'BiasOracle',
    'null_probabilities',
    'bias_oracles',
    'enumerate_expected_beta',
]
