"""
Leave-one-out Estimates
=======================
pi0 estimates with the k-th p-value set to 0, for every k.

These are the quantities whose reciprocal expectation must stay below
1/pi0 for the adaptive procedure to keep FDR control.
"""

from typing import Sequence

import numpy as np

from ..errors import InputError
from ..estimator import TuningGrid, as_pvalues


def leave_one_out_betas(pvalues: Sequence[float], grid: TuningGrid, cap: bool = True) -> np.ndarray:
    """
    Trial estimates beta_k(tau_j) for every k; shape (m, n).

    Row k equals beta_trials on p with p_k replaced by 0.
    """
    p = as_pvalues(pvalues)
    m = p.size
    if m != grid.m:
        raise InputError(f"got {m} p-values for a grid over {grid.m} tests")
    lambdas = grid.lambdas
    taus = grid.tau_array
    etas = grid.etas

    with np.errstate(divide="ignore", invalid="ignore"):
        weights = np.where(p[:, None] > lambdas, 1.0 / (1.0 - lambdas), 0.0)
        reduced = weights.sum(axis=0)[None, :] - weights
        scale = 1.0 / (m * (1.0 - etas))
        raw = scale + (1.0 - taus) * scale * reduced
    raw = np.where(etas[None, :] >= 1.0, np.inf, raw)
    return np.minimum(raw, 1.0) if cap else raw


def leave_one_out_estimates(pvalues: Sequence[float], grid: TuningGrid) -> np.ndarray:
    """pi0_hat_k for k = 0..m-1; never larger than pi0_hat on the full vector."""
    return leave_one_out_betas(pvalues, grid).mean(axis=1)


__all__ = [
    'leave_one_out_betas',
    'leave_one_out_estimates',
]
