"""
Simulate Module
===============
Monte Carlo engine for two-group count experiments with known truth.

Components:
- SimScenario / ScenarioPresets: ground truth and the verification battery
- gen_dataset: one replicate of tables, p-values and supports
- run_fdr_experiment: empirical FDR, power and pi0 estimates
- bias_experiment: oracle against empirical bias
- check_condition_two / lemma1_bound_check: control conditions
"""

from .scenario import (
    MarginMode,
    SimScenario,
    ReplicateRecord,
    SimResult,
    ScenarioPresets,
)

from .streams import (
    stream_rng,
    replicate_rng,
    design_rng,
    auxiliary_rng,
)

from .engine import (
    Dataset,
    design_totals,
    design_supports,
    design_grid,
    gen_dataset,
    pi0_estimates,
    map_replicates,
    mean_se,
    run_fdr_experiment,
    oracle_pi0_bias,
    randomized_pvalues,
    BiasRow,
    BiasReport,
    bias_experiment,
)

from .checks import (
    ConditionTwoRow,
    ConditionTwoReport,
    check_condition_two,
    Lemma1Check,
    lemma1_bound_check,
)


__all__ = [
    # Scenarios
    'MarginMode',
    'SimScenario',
    'ReplicateRecord',
    'SimResult',
    'ScenarioPresets',

    # Streams
    'stream_rng',
    'replicate_rng',
    'design_rng',
    'auxiliary_rng',

    # Engine
    'Dataset',
    'design_totals',
    'design_supports',
    'design_grid',
    'gen_dataset',
    'pi0_estimates',
    'map_replicates',
    'mean_se',
    'run_fdr_experiment',
    'oracle_pi0_bias',
    'randomized_pvalues',
    'BiasRow',
    'BiasReport',
    'bias_experiment',

    # Checks
    'ConditionTwoRow',
    'ConditionTwoReport',
    'check_condition_two',
    'Lemma1Check',
    'lemma1_bound_check',
]
