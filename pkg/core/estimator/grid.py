"""
Tuning Grid
===========
Per-test thresholds for the discrete pi0 estimator.

For tuning parameters nu <= tau_1 <= ... <= tau_n < 1:
- lambda_ij: smallest attainable p-value of test i at or above tau_j
- eta_j: max_i lambda_ij
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ConfigurationError
from ..exact_tests import PValueSupport, supports_nu

logger = logging.getLogger(__name__)

DEFAULT_TAU_STEP = 0.05
DEFAULT_TAU_UPPER = 0.95


@dataclass(frozen=True, eq=False)
class TuningGrid:
    """Tuning parameters with the thresholds they induce on each support."""
    taus: Tuple[float, ...]
    lambdas: np.ndarray  # shape (m, n)
    etas: np.ndarray     # shape (n,)
    nu: float

    @property
    def m(self) -> int:
        return int(self.lambdas.shape[0])

    @property
    def n(self) -> int:
        return len(self.taus)

    @property
    def tau_array(self) -> np.ndarray:
        return np.asarray(self.taus, dtype=float)

    def degenerate_columns(self) -> List[int]:
        """Indices j with eta_j = 1."""
        return [j for j in range(self.n) if self.etas[j] >= 1.0]


def default_taus(
    nu: float,
    step: float = DEFAULT_TAU_STEP,
    upper: float = DEFAULT_TAU_UPPER,
) -> List[float]:
    """
    Default tuning grid: max(nu, step * j) over [nu, upper], deduplicated.

    Example:
        default_taus(0.3)  # [0.3, 0.35, 0.4, ..., 0.95]
    """
    if not 0.0 <= nu < 1.0:
        raise ConfigurationError(f"nu must lie in [0, 1), got {nu}", nu=nu)
    count = int(round(upper / step))
    taus = sorted({max(nu, round(step * j, 10)) for j in range(1, count + 1)})
    return taus


def build_grid(
    supports: Sequence[PValueSupport],
    taus: Optional[Sequence[float]] = None,
) -> TuningGrid:
    """
    Build lambda_ij and eta_j for every support and tuning parameter.

    Args:
        supports: one p-value support per test
        taus: non-decreasing tuning parameters in [nu, 1); defaults to
            default_taus(nu)

    Raises:
        ConfigurationError: if nu = 1, the grid is empty or unordered, or
            some tau lies outside [nu, 1)
    """
    if not supports:
        raise ConfigurationError("cannot build a tuning grid without tests")
    nu = supports_nu(supports)
    if nu >= 1.0:
        raise ConfigurationError(
            "every p-value of some test is 1 (nu = 1); remove uninformative rows first",
            nu=nu,
        )
    if taus is None:
        taus = default_taus(nu)
    taus = [float(t) for t in taus]
    if not taus:
        raise ConfigurationError("tuning grid is empty")
    if any(b < a for a, b in zip(taus, taus[1:])):
        raise ConfigurationError(f"tuning parameters must be non-decreasing, got {taus}")
    for tau in taus:
        if tau < nu or tau >= 1.0:
            raise ConfigurationError(
                f"tuning parameter tau={tau:.6g} outside [nu, 1) with nu={nu:.6g}",
                tau=tau,
                nu=nu,
            )

    lambdas = np.array([[s.smallest_at_least(tau) for tau in taus] for s in supports])
    etas = lambdas.max(axis=0)
    grid = TuningGrid(taus=tuple(taus), lambdas=lambdas, etas=etas, nu=nu)

    degenerate = grid.degenerate_columns()
    if degenerate:
        logger.debug(f"eta_j = 1 for tau indices {degenerate}; those trial estimates are fixed at 1")
    return grid


__all__ = [
    'TuningGrid',
    'default_taus',
    'build_grid',
    'DEFAULT_TAU_STEP',
    'DEFAULT_TAU_UPPER',
]
