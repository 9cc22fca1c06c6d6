"""
Procedures Module
=================
Step-up FDR procedures for continuous and discrete p-values.

Components:
- bh / adaptive_bh: linear step-up with optional pi0 plug-in
- bhh / adaptive_bhh: Heyse's discrete modification
- leave_one_out_estimates: pi0 estimates with one p-value set to 0
- ProcedureTag / apply_procedure: dispatch by name
"""

from .step_up import (
    RejectionReport,
    check_alpha,
    check_pi0,
    stable_order,
    step_up_report,
    bh,
    adaptive_bh,
)

from .heyse import (
    cdf_sums,
    bhh,
    adaptive_bhh,
)

from .leave_one_out import (
    leave_one_out_betas,
    leave_one_out_estimates,
)

from .registry import (
    ProcedureTag,
    estimate_pi0_for,
    apply_procedure,
    DEFAULT_STOREY_TAU,
)


__all__ = [
    # Step-up
    'RejectionReport',
    'check_alpha',
    'check_pi0',
    'stable_order',
    'step_up_report',
    'bh',
    'adaptive_bh',

    # Heyse
    'cdf_sums',
    'bhh',
    'adaptive_bhh',

    # Leave-one-out
    'leave_one_out_betas',
    'leave_one_out_estimates',

    # Registry
    'ProcedureTag',
    'estimate_pi0_for',
    'apply_procedure',
    'DEFAULT_STOREY_TAU',
]
