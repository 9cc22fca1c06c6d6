"""
Subcommands
===========
Drivers behind `support`, `estimate`, `analyze` and `simulate`.

Each command takes a RunConfig and returns a Report; rendering and
output are left to the caller.
"""

import logging
from typing import Any, Dict, List, Sequence

from ..errors import ConfigurationError, InputError
from ..estimator import (
    beta_trials,
    build_grid,
    pi0_hat_guided,
    pi0_hat_H,
    storey_pi0,
    storey_pi0_s,
)
from ..exact_tests import supports_nu
from ..procedures import apply_procedure
from ..simulate import (
    BiasReport,
    ConditionTwoReport,
    SimResult,
    bias_experiment,
    check_condition_two,
    lemma1_bound_check,
    run_fdr_experiment,
)
from .config import Experiment, RunConfig
from .ingest import CleanedRows, clean_rows, read_count_matrix, removal_reason
from .report import Report

logger = logging.getLogger(__name__)

LEMMA1_ETAS = tuple(round(0.01 * k, 2) for k in range(1, 100))


def _load_rows(config: RunConfig) -> CleanedRows:
    if config.input is None:
        raise ConfigurationError("an input count matrix is required (--input)")
    cleaned = clean_rows(read_count_matrix(config.input))
    if not cleaned.kept:
        raise InputError(f"no informative rows left in {config.input} after cleaning")
    return cleaned


def cmd_support(config: RunConfig) -> Report:
    """One line per input row: margin, kept/removed status and its support."""
    if config.input is None:
        raise ConfigurationError("an input count matrix is required (--input)")
    rows = read_count_matrix(config.input)
    report = Report(
        command="support",
        config=config.effective(),
        wide=True,
        exact_columns=("values", "masses"),
    )

    table: List[Dict[str, Any]] = []
    kept = []
    for row in rows:
        reason = removal_reason(row)
        if reason:
            logger.info(f"removed row {row.id!r} (line {row.line_number}): {reason}")
        else:
            kept.append(row.support)
        support = row.support
        table.append({
            "id": row.id,
            "c": row.c,
            "n1": row.pair.n1,
            "n2": row.pair.n2,
            "status": "removed" if reason else "kept",
            "reason": reason,
            "values": list(support.values),
            "masses": list(support.masses),
        })

    report.summary = {
        "rows": len(rows),
        "kept": len(kept),
        "removed": len(rows) - len(kept),
        "nu": supports_nu(kept) if kept else None,
    }
    report.add_section("supports", table)
    return report


def cmd_estimate(config: RunConfig) -> Report:
    """pi0_hat_H with its trial estimates and the Storey baselines."""
    cleaned = _load_rows(config)
    supports = cleaned.supports
    p = cleaned.pvalues
    grid = build_grid(supports, config.taus)

    estimate = pi0_hat_H(p, grid)
    guided = pi0_hat_guided(p, grid)
    raw = beta_trials(p, grid, cap=False)

    report = Report(command="estimate", config=config.effective())
    report.summary = {
        "m": grid.m,
        "removed": len(cleaned.removed),
        "nu": grid.nu,
        "pi0_hat_H": estimate.pi0_hat,
        "pi0_hat_guided": guided.pi0_hat,
        "storey_tau": config.storey_tau,
        "storey": storey_pi0(p, config.storey_tau),
        "storey_s": storey_pi0_s(p, config.storey_tau),
    }
    report.add_section("trials", [
        {
            "tau": tau,
            "eta": float(grid.etas[j]),
            "beta": estimate.betas[j],
            "beta_raw": float(raw[j]),
            "guided_beta": guided.betas[j],
            "storey": storey_pi0(p, tau) if tau > 0 else None,
            "storey_s": storey_pi0_s(p, tau) if tau > 0 else None,
        }
        for j, tau in enumerate(grid.taus)
    ], key="tau")
    logger.info(f"pi0_hat_H = {estimate.pi0_hat:.6g} over {grid.m} tests and {grid.n} tuning parameters")
    return report


def cmd_analyze(config: RunConfig) -> Report:
    """Run one step-up procedure and report the per-hypothesis decisions."""
    tags = config.tags
    if len(tags) != 1:
        raise ConfigurationError(f"analyze runs one procedure, got {len(tags)}: {config.procedure}")
    tag = tags[0]

    cleaned = _load_rows(config)
    supports = cleaned.supports
    p = cleaned.pvalues
    grid = build_grid(supports, config.taus)
    pi0_h = pi0_hat_H(p, grid).pi0_hat

    result = apply_procedure(
        tag,
        p,
        config.alpha,
        supports=supports,
        grid=grid,
        storey_tau=config.storey_tau,
    )
    rejected = result.rejected_mask

    report = Report(command="analyze", config=config.effective())
    report.summary = {
        "procedure": tag.value,
        "alpha": config.alpha,
        "m": result.m,
        "removed": len(cleaned.removed),
        "k_hat": result.k_hat,
        "pi0_hat": result.pi0_hat,
        "pi0_hat_H": pi0_h,
    }
    report.add_section("hypotheses", [
        {
            "id": row.id,
            "x1": row.pair.x1,
            "x2": row.pair.x2,
            "c": row.c,
            "p": float(p[i]),
            "adjusted": float(result.adjusted[i]),
            "rejected": bool(rejected[i]),
        }
        for i, row in enumerate(cleaned.kept)
    ])
    logger.info(f"{tag.value}: {result.k_hat} of {result.m} hypotheses rejected at alpha {config.alpha}")
    return report


def _fdr_rows(result: SimResult) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "procedure": result.procedure,
        "fdr": result.fdr,
        "fdr_se": result.fdr_se,
        "power": result.power,
        "power_se": result.power_se,
        "oracle_bias_H": result.oracle_bias,
    }
    for key in result.pi0_means:
        row[f"pi0_{key}_mean"] = result.pi0_means[key]
        row[f"pi0_{key}_se"] = result.pi0_ses[key]
        row[f"pi0_{key}_bias"] = result.pi0_biases[key]
    return row


def _replicate_rows(results: Sequence[SimResult]) -> List[Dict[str, Any]]:
    return [
        {
            "id": f"{result.procedure}:{record.index}",
            "m": record.m,
            "m0": record.m0,
            "R": record.rejections,
            "V": record.false_rejections,
        }
        for result in results
        for record in result.replicates
    ]


def _bias_rows(bias: BiasReport) -> List[Dict[str, Any]]:
    return [
        {
            "tau": row.tau,
            "eta": row.eta,
            "oracle_beta": row.oracle_beta,
            "empirical_beta": row.empirical_beta,
            "beta_se": row.beta_se,
            "oracle_b1": row.oracle_b1,
            "empirical_b1": row.empirical_b1,
            "b1_se": row.b1_se,
            "oracle_b2": row.oracle_b2,
            "empirical_b2": row.empirical_b2,
            "b2_se": row.b2_se,
            "min_gap": row.min_gap,
            "agrees": row.agrees(),
        }
        for row in bias.rows
    ]


def _condition_two_rows(check: ConditionTwoReport) -> List[Dict[str, Any]]:
    return [
        {
            "k": row.k,
            "replicates": row.replicates,
            "inverse_pi0": row.inverse_pi0,
            "inverse_pi0_se": row.inverse_pi0_se,
            "inverse_betas": list(row.inverse_betas),
            "inverse_beta_ses": list(row.inverse_beta_ses),
        }
        for row in check.rows
    ]


def cmd_simulate(config: RunConfig) -> Report:
    """
    Run the configured experiment.

    The scenario is validated before any replicate runs.
    """
    scenario = config.to_scenario()
    report = Report(command="simulate", config=config.effective())
    experiment = config.experiment

    if experiment is Experiment.FDR:
        results = [
            run_fdr_experiment(scenario, tag, workers=config.workers)
            for tag in config.tags
        ]
        report.summary = {
            "experiment": experiment.value,
            "reps": scenario.reps,
            "within_alpha": all(r.fdr_within(scenario.alpha) for r in results),
        }
        report.add_section("procedures", [_fdr_rows(r) for r in results], key="procedure")
        report.add_section("replicates", _replicate_rows(results))

    elif experiment is Experiment.BIAS:
        bias = bias_experiment(scenario, workers=config.workers)
        report.summary = {
            "experiment": experiment.value,
            "reps": bias.reps,
            "agrees": bias.agrees(),
            "gap_nonnegative": bias.gap_nonnegative,
            "pi0_oracle_bias_H": bias.oracle.pi0_hat_bias,
            **{f"pi0_{key}_mean": value for key, value in bias.pi0_means.items()},
        }
        report.add_section("taus", _bias_rows(bias), key="tau")

    elif experiment is Experiment.CONDITION_TWO:
        check = check_condition_two(scenario, workers=config.workers)
        report.summary = {
            "experiment": experiment.value,
            "reps": scenario.reps,
            "target": check.target,
            "passed": check.passed,
            "passed_per_tau": check.passed_per_tau,
        }
        report.add_section("tests", _condition_two_rows(check), key="k")

    else:
        etas = tuple(config.taus) if config.taus is not None else LEMMA1_ETAS
        checks = [lemma1_bound_check(m0, eta) for m0 in range(1, scenario.m + 1) for eta in etas]
        report.summary = {
            "experiment": experiment.value,
            "cases": len(checks),
            "consistent": all(c.consistent for c in checks),
            "holds": all(c.holds for c in checks),
            "max_difference": max(abs(c.closed_form - c.pmf_sum) for c in checks),
        }
        report.add_section("cases", [
            {
                "id": f"{c.m0}:{c.eta:g}",
                "m0": c.m0,
                "eta": c.eta,
                "closed_form": c.closed_form,
                "pmf_sum": c.pmf_sum,
                "bound": c.bound,
            }
            for c in checks
        ])
    return report


COMMANDS = {
    "support": cmd_support,
    "estimate": cmd_estimate,
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
}


__all__ = [
    'cmd_support',
    'cmd_estimate',
    'cmd_analyze',
    'cmd_simulate',
    'COMMANDS',
    'LEMMA1_ETAS',
]
