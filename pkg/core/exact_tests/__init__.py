"""
Exact Tests Module
==================
Exact two-sided p-values and full p-value supports for discrete tests.

Components:
- PValueSupport: attainable p-values with null point masses
- fet_pvalue / fet_support: Fisher's exact test
- bt_pvalue / bt_support: conditional binomial (sign) test
- null_cdf / alt_cdf: step CDFs under the null and noncentral alternatives
"""

from .support import (
    ExactTest,
    Margin,
    CountPair,
    PValueSupport,
    null_cdf,
    alt_cdf,
    fisher_noncentral_pmf,
    anchored_log_pmf,
    classify_outcomes,
    build_support,
    supports_nu,
    TIE_TOLERANCE,
    EXACT_LIMIT,
)

from .fisher import (
    hypergeometric_pmf,
    hypergeometric_logpmf,
    fet_support,
    fet_pvalue,
)

from .binomial import (
    binomial_null_pmf,
    binomial_null_logpmf,
    bt_support,
    bt_pvalue,
)


__all__ = [
    # Supports
    'ExactTest',
    'Margin',
    'CountPair',
    'PValueSupport',
    'null_cdf',
    'alt_cdf',
    'fisher_noncentral_pmf',
    'anchored_log_pmf',
    'classify_outcomes',
    'build_support',
    'supports_nu',
    'TIE_TOLERANCE',
    'EXACT_LIMIT',

    # Fisher's exact test
    'hypergeometric_pmf',
    'hypergeometric_logpmf',
    'fet_support',
    'fet_pvalue',

    # Binomial test
    'binomial_null_pmf',
    'binomial_null_logpmf',
    'bt_support',
    'bt_pvalue',
]
