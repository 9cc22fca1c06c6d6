"""
Pi0 Estimators
==============
Estimators of the proportion of true null hypotheses.

Features:
- Discrete-support estimator: trial estimates beta(tau_j) averaged over
  the tuning grid, each built from per-test thresholds lambda_ij
- Storey's threshold estimator and its +1 modification (baselines)
- Guided comparator with eta_j replaced by tau_j
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from ..errors import ConfigurationError, InputError
from .grid import TuningGrid

logger = logging.getLogger(__name__)


class Pi0Method(Enum):
    """Estimator tags carried by Pi0Estimate."""
    H = "H"
    STOREY = "storey"
    STOREY_S = "storey_s"
    GUIDED = "guided"


@dataclass(frozen=True)
class Pi0Estimate:
    """Trial estimates and the final estimate of pi0."""
    betas: Tuple[float, ...]
    pi0_hat: float
    method: Pi0Method
    taus: Tuple[float, ...] = ()


def as_pvalues(pvalues: Sequence[float]) -> np.ndarray:
    """Validate p-values and return them as a float array."""
    p = np.asarray(pvalues, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InputError("p-values must be a non-empty one-dimensional sequence")
    if np.any(np.isnan(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise InputError("p-values must lie in [0, 1]")
    return p


def _check_against_grid(p: np.ndarray, grid: TuningGrid):
    if p.size != grid.m:
        raise InputError(f"got {p.size} p-values for a grid over {grid.m} tests")
    if grid.n == 0:
        raise ConfigurationError("tuning grid is empty")


def beta_trials(pvalues: Sequence[float], grid: TuningGrid, cap: bool = True) -> np.ndarray:
    """
    All trial estimates beta(tau_1), ..., beta(tau_n).

    beta(tau_j) = 1/(m(1-eta_j)) + (1-tau_j)/(m(1-eta_j)) * sum_i I(p_i > lambda_ij)/(1-lambda_ij)

    With cap=True each value is truncated to 1 and eta_j = 1 gives 1. With
    cap=False the raw value is returned (inf when eta_j = 1).
    """
    p = as_pvalues(pvalues)
    _check_against_grid(p, grid)
    m = p.size
    lambdas = grid.lambdas
    taus = grid.tau_array
    etas = grid.etas

    with np.errstate(divide="ignore", invalid="ignore"):
        weights = np.where(p[:, None] > lambdas, 1.0 / (1.0 - lambdas), 0.0)
        sums = weights.sum(axis=0)
        scale = 1.0 / (m * (1.0 - etas))
        raw = scale + (1.0 - taus) * scale * sums
    raw = np.where(etas >= 1.0, np.inf, raw)

    if not cap:
        return raw
    return np.minimum(raw, 1.0)


def beta_trial(pvalues: Sequence[float], grid: TuningGrid, j: int) -> float:
    """Trial estimate beta(tau_j) for the j-th (0-based) tuning parameter."""
    if not 0 <= j < grid.n:
        raise ConfigurationError(f"tuning index {j} outside [0, {grid.n})")
    return float(beta_trials(pvalues, grid)[j])


def pi0_hat_H(pvalues: Sequence[float], grid: TuningGrid) -> Pi0Estimate:
    """
    Final estimate: mean of the capped trial estimates.

    Example:
        grid = build_grid(supports, taus=[0.3, 0.5])
        estimate = pi0_hat_H(pvalues, grid)
        estimate.pi0_hat, estimate.betas
    """
    betas = beta_trials(pvalues, grid)
    return Pi0Estimate(
        betas=tuple(float(b) for b in betas),
        pi0_hat=float(betas.mean()),
        method=Pi0Method.H,
        taus=grid.taus,
    )


def pi0_hat_guided(pvalues: Sequence[float], grid: TuningGrid, cap: bool = True) -> Pi0Estimate:
    """
    Comparator with eta_j and the weights 1/(1-lambda_ij) replaced by tau_j.

    The indicators keep the guiding thresholds lambda_ij, so the result
    never exceeds pi0_hat_H on the same input. When every tau_j is a point
    of every support it coincides with storey_pi0_s(tau_j).
    """
    p = as_pvalues(pvalues)
    _check_against_grid(p, grid)
    m = p.size
    taus = grid.tau_array
    counts = (p[:, None] > grid.lambdas).sum(axis=0)
    raw = (1.0 + counts) / (m * (1.0 - taus))
    betas = np.minimum(raw, 1.0) if cap else raw
    return Pi0Estimate(
        betas=tuple(float(b) for b in betas),
        pi0_hat=float(betas.mean()),
        method=Pi0Method.GUIDED,
        taus=grid.taus,
    )


def _check_tau(tau: float):
    if not 0.0 < tau < 1.0:
        raise ConfigurationError(f"tau must lie in (0, 1), got {tau}", tau=tau)


def storey_pi0(pvalues: Sequence[float], tau: float, cap: bool = True) -> float:
    """Storey's estimator: #{p_i > tau} / (m(1 - tau))."""
    _check_tau(tau)
    p = as_pvalues(pvalues)
    value = float(np.count_nonzero(p > tau)) / (p.size * (1.0 - tau))
    return min(value, 1.0) if cap else value


def storey_pi0_s(pvalues: Sequence[float], tau: float, cap: bool = True) -> float:
    """Modified Storey estimator: (1 + #{p_i > tau}) / (m(1 - tau))."""
    _check_tau(tau)
    p = as_pvalues(pvalues)
    value = (1.0 + np.count_nonzero(p > tau)) / (p.size * (1.0 - tau))
    return min(float(value), 1.0) if cap else float(value)


__all__ = [
    'Pi0Method',
    'Pi0Estimate',
    'as_pvalues',
    'beta_trials',
    'beta_trial',
    'pi0_hat_H',
    'pi0_hat_guided',
    'storey_pi0',
    'storey_pi0_s',
]
