"""
Estimator Module
================
Estimation of the proportion of true null hypotheses from discrete p-values.

Components:
- TuningGrid / build_grid: per-test thresholds lambda_ij and maxima eta_j
- beta_trials / pi0_hat_H: trial estimates and their average
- storey_pi0 / storey_pi0_s: threshold baselines
- bias_oracles: exact expectations and biases conditional on the supports
"""

from .grid import (
    TuningGrid,
    default_taus,
    build_grid,
    DEFAULT_TAU_STEP,
    DEFAULT_TAU_UPPER,
)

from .pi0 import (
    Pi0Method,
    Pi0Estimate,
    as_pvalues,
    beta_trials,
    beta_trial,
    pi0_hat_H,
    pi0_hat_guided,
    storey_pi0,
    storey_pi0_s,
)

from .bias import (
    BiasOracle,
    null_probabilities,
    bias_oracles,
    enumerate_expected_beta,
)


__all__ = [
    # Grid
    'TuningGrid',
    'default_taus',
    'build_grid',
    'DEFAULT_TAU_STEP',
    'DEFAULT_TAU_UPPER',

    # Estimators
    'Pi0Method',
    'Pi0Estimate',
    'as_pvalues',
    'beta_trials',
    'beta_trial',
    'pi0_hat_H',
    'pi0_hat_guided',
    'storey_pi0',
    'storey_pi0_s',

    # Oracles
    'BiasOracle',
    'null_probabilities',
    'bias_oracles',
    'enumerate_expected_beta',
]
