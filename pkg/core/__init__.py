"""
Discrete pi0 - Core Module
==========================
Proportion of true nulls and FDR control for discrete p-values.

Modules:
- exact_tests: Fisher's exact and binomial test supports and CDFs
- estimator: tuning grids, pi0 estimators, bias oracles
- procedures: BH, adaptive BH, Heyse's BHH and its adaptive form
- simulate: Monte Carlo FDR, power and bias experiments
- cli: ingestion, configuration and reports for the command line
"""

from . import errors
from . import exact_tests
from . import estimator
from . import procedures
from . import simulate
from . import cli

__version__ = "1.0.0"

__all__ = [
    'errors',
    'exact_tests',
    'estimator',
    'procedures',
    'simulate',
    'cli',
]
