"""
Simulation Engine
=================
Dataset generation and replicate loops for FDR and bias experiments.

Features:
- Fixed-margin and unconditional two-group count designs
- Removal of uninformative rows (c <= 1 or support {1})
- Deterministic replicate streams, optional process pool
- Empirical B1 through randomised null p-values
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from ..errors import ConfigurationError, DegenerateScenarioError
from ..estimator import (
    BiasOracle,
    TuningGrid,
    beta_trials,
    bias_oracles,
    build_grid,
    pi0_hat_guided,
    pi0_hat_H,
    storey_pi0,
    storey_pi0_s,
)
from ..exact_tests import Margin, PValueSupport, fet_support, fisher_noncentral_pmf
from ..procedures import ProcedureTag, apply_procedure
from .scenario import MarginMode, ReplicateRecord, SimResult, SimScenario
from .streams import auxiliary_rng, design_rng, replicate_rng

logger = logging.getLogger(__name__)

T = TypeVar("T")

MAX_DESIGN_DRAWS = 1000
ORACLE_MARGIN_SAMPLES = 20
AGREEMENT_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class Dataset:
    """One replicate's tables after uninformative rows are removed."""
    n1: int
    n2: int
    x1: np.ndarray
    x2: np.ndarray
    truth: np.ndarray        # True where the null holds
    pvalues: np.ndarray
    supports: Tuple[PValueSupport, ...]
    kept: np.ndarray         # row indices before cleaning

    @property
    def m(self) -> int:
        return int(self.pvalues.size)

    @property
    def m0(self) -> int:
        return int(np.count_nonzero(self.truth))

    @property
    def totals(self) -> np.ndarray:
        return self.x1 + self.x2


def _usable_total(n1: int, n2: int, c: int) -> bool:
    return c >= 2 and fet_support(n1, n2, c).is_informative


@lru_cache(maxsize=64)
def design_totals(scenario: SimScenario) -> Tuple[int, ...]:
    """
    Row totals shared by every fixed-margin replicate.

    Drawn once from the design stream as Binomial(n1 + n2, base_rate),
    redrawing any total whose support is uninformative.
    """
    if scenario.totals is not None:
        return scenario.totals
    n1, n2 = scenario.n1, scenario.n2
    rng = design_rng(scenario.seed)
    totals = []
    for i in range(scenario.m):
        for _ in range(MAX_DESIGN_DRAWS):
            c = int(rng.binomial(n1 + n2, scenario.base_rate))
            if _usable_total(n1, n2, c):
                break
        else:
            raise DegenerateScenarioError(
                f"scenario '{scenario.name}': no informative total for row {i} "
                f"after {MAX_DESIGN_DRAWS} draws",
                scenario=scenario.name,
            )
        totals.append(c)
    logger.debug(f"designed totals for '{scenario.name}': {totals}")
    return tuple(totals)


@lru_cache(maxsize=64)
def design_supports(scenario: SimScenario) -> Tuple[PValueSupport, ...]:
    return tuple(fet_support(scenario.n1, scenario.n2, c) for c in design_totals(scenario))


@lru_cache(maxsize=64)
def design_grid(scenario: SimScenario) -> TuningGrid:
    return build_grid(design_supports(scenario), scenario.taus)


@lru_cache(maxsize=4096)
def _cell_cdf(n1: int, n2: int, c: int, psi: float) -> np.ndarray:
    return np.cumsum(fisher_noncentral_pmf(Margin(c=c, n1=n1, n2=n2), psi))


def _assemble(
    scenario: SimScenario,
    x1: np.ndarray,
    x2: np.ndarray,
    truth: np.ndarray,
) -> Dataset:
    n1, n2 = scenario.n1, scenario.n2
    totals = x1 + x2
    keep = np.array([_usable_total(n1, n2, int(c)) for c in totals], dtype=bool)
    dropped = int(np.count_nonzero(~keep))
    if dropped:
        logger.debug(f"removed {dropped} uninformative rows")
    if not keep.any():
        raise DegenerateScenarioError(
            f"scenario '{scenario.name}': every row is uninformative",
            scenario=scenario.name,
        )

    kept = np.flatnonzero(keep)
    supports = tuple(fet_support(n1, n2, int(totals[i])) for i in kept)
    pvalues = np.array([
        s.outcome_pvalues[int(x1[i]) - s.margin.first_outcome]
        for s, i in zip(supports, kept)
    ])
    return Dataset(
        n1=n1,
        n2=n2,
        x1=x1[kept],
        x2=x2[kept],
        truth=truth[kept],
        pvalues=pvalues,
        supports=supports,
        kept=kept,
    )


def gen_dataset(scenario: SimScenario, index: int) -> Dataset:
    """
    Draw replicate `index`: labels first, then one table per row.

    Fixed margins: the first-group count follows Fisher's noncentral law
    (odds ratio 1 for nulls, `effect` otherwise) given the designed total.
    Unconditional: x2 ~ Binomial(n2, base_rate) and x1 ~ Binomial(n1, q1)
    where q1 has `effect` times the odds of base_rate for false nulls.
    """
    rng = replicate_rng(scenario.seed, index)
    m, n1, n2 = scenario.m, scenario.n1, scenario.n2
    truth = rng.random(m) < scenario.pi0

    if scenario.margin_mode is MarginMode.FIXED:
        totals = np.asarray(design_totals(scenario), dtype=int)
        u = rng.random(m)
        x1 = np.empty(m, dtype=int)
        for i in range(m):
            c = int(totals[i])
            psi = 1.0 if truth[i] else scenario.effect
            cum = _cell_cdf(n1, n2, c, psi)
            k = min(int(np.searchsorted(cum, u[i], side="right")), cum.size - 1)
            x1[i] = max(0, c - n2) + k
        x2 = totals - x1
    else:
        base_odds = scenario.base_rate / (1.0 - scenario.base_rate)
        odds1 = np.where(truth, 1.0, scenario.effect) * base_odds
        x1 = rng.binomial(n1, odds1 / (1.0 + odds1))
        x2 = rng.binomial(n2, scenario.base_rate, size=m)

    return _assemble(scenario, np.asarray(x1, dtype=int), np.asarray(x2, dtype=int), truth)


def _grid_for(scenario: SimScenario, dataset: Dataset) -> TuningGrid:
    if scenario.margin_mode is MarginMode.FIXED:
        return design_grid(scenario)
    return build_grid(dataset.supports, scenario.taus)


def pi0_estimates(pvalues: np.ndarray, grid: TuningGrid, storey_tau: float) -> Dict[str, float]:
    """Every pi0 estimator on one p-value vector, keyed by name."""
    return {
        "H": pi0_hat_H(pvalues, grid).pi0_hat,
        "guided": pi0_hat_guided(pvalues, grid).pi0_hat,
        "storey": storey_pi0(pvalues, storey_tau),
        "storey_s": storey_pi0_s(pvalues, storey_tau),
    }


def map_replicates(func: Callable[[int], T], reps: int, workers: int = 1) -> List[T]:
    """
    Apply func to replicate indices 0..reps-1, results in index order.

    `func` must be picklable when workers > 1.
    """
    if workers < 1:
        raise ConfigurationError(f"workers must be at least 1, got {workers}")
    if workers == 1 or reps == 1:
        return [func(i) for i in range(reps)]
    chunksize = max(1, reps // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, range(reps), chunksize=chunksize))


def mean_se(values: Sequence[float]) -> Tuple[float, float]:
    """Sample mean and its standard error; se is 0 for a single value."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return math.nan, math.nan
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


def fdr_replicate(
    scenario: SimScenario,
    procedure: ProcedureTag,
    pi0_override: Optional[float],
    index: int,
) -> ReplicateRecord:
    dataset = gen_dataset(scenario, index)
    grid = _grid_for(scenario, dataset)
    report = apply_procedure(
        procedure,
        dataset.pvalues,
        scenario.alpha,
        supports=dataset.supports,
        grid=grid,
        pi0_override=pi0_override,
        storey_tau=scenario.storey_tau,
    )
    false_rejections = int(np.count_nonzero(report.rejected_mask & dataset.truth))
    return ReplicateRecord(
        index=index,
        m=dataset.m,
        m0=dataset.m0,
        rejections=report.k_hat,
        false_rejections=false_rejections,
        pi0_estimates=pi0_estimates(dataset.pvalues, grid, scenario.storey_tau),
    )


def run_fdr_experiment(
    scenario: SimScenario,
    procedure: "str | ProcedureTag",
    pi0_override: Optional[float] = None,
    workers: int = 1,
    oracle: bool = True,
) -> SimResult:
    """
    Empirical FDR, power and pi0 estimates of one procedure.

    FDR is the mean of V / max(R, 1), power the mean of true rejections
    over max(m1, 1); standard errors use ddof = 1.

    Example:
        result = run_fdr_experiment(SimScenario(pi0=0.8, reps=500), "abh")
        result.fdr, result.fdr_se, result.power
    """
    tag = ProcedureTag.parse(procedure)
    if pi0_override is not None and not 0.0 < pi0_override <= 1.0:
        raise ConfigurationError(f"pi0 override must lie in (0, 1], got {pi0_override}")
    logger.info(f"running {scenario.reps} replicates of '{scenario.name}' with {tag.value}")

    records = map_replicates(partial(fdr_replicate, scenario, tag, pi0_override), scenario.reps, workers)

    fdr, fdr_se = mean_se([r.fdp for r in records])
    power, power_se = mean_se([r.power for r in records])
    pi0_means: Dict[str, float] = {}
    pi0_ses: Dict[str, float] = {}
    pi0_biases: Dict[str, float] = {}
    for key in records[0].pi0_estimates:
        values = np.array([r.pi0_estimates[key] for r in records])
        truth = np.array([r.m0 / r.m for r in records])
        pi0_means[key], pi0_ses[key] = mean_se(values)
        pi0_biases[key] = float(np.mean(values - truth))

    logger.info(f"'{scenario.name}' {tag.value}: FDR {fdr:.4f} (se {fdr_se:.4f}), power {power:.4f}")
    return SimResult(
        scenario=scenario,
        procedure=tag.value,
        fdr=fdr,
        fdr_se=fdr_se,
        power=power,
        power_se=power_se,
        pi0_means=pi0_means,
        pi0_ses=pi0_ses,
        pi0_biases=pi0_biases,
        oracle_bias=oracle_pi0_bias(scenario) if oracle else None,
        replicates=records,
    )


def oracle_pi0_bias(scenario: SimScenario, samples: int = ORACLE_MARGIN_SAMPLES) -> Optional[float]:
    """
    Exact bias of the mean uncapped trial estimate under Bernoulli(pi0) labels.

    Fixed margins use the designed supports; unconditional runs average the
    oracle over the realised supports of the first `samples` replicates.
    None when some eta_j = 1 makes the expectation infinite.
    """
    if scenario.margin_mode is MarginMode.FIXED:
        cases = [(design_supports(scenario), design_grid(scenario))]
    else:
        cases = []
        for index in range(min(scenario.reps, samples)):
            dataset = gen_dataset(scenario, index)
            cases.append((dataset.supports, build_grid(dataset.supports, scenario.taus)))
    values = [
        bias_oracles(
            supports,
            grid,
            truth=[scenario.pi0] * len(supports),
            alt_odds=[scenario.effect] * len(supports),
        ).pi0_hat_bias
        for supports, grid in cases
    ]
    value = float(np.mean(values))
    return value if math.isfinite(value) else None


def randomized_pvalues(
    pvalues: np.ndarray,
    supports: Sequence[PValueSupport],
    rng: np.random.Generator,
) -> np.ndarray:
    """
    U = F(p-) + V (F(p) - F(p-)) with V ~ Uniform(0, 1).

    Exactly uniform under the null and never larger than p.
    """
    v = rng.random(len(supports))
    lower = np.array([s.previous_value(float(p)) for s, p in zip(supports, pvalues)])
    return lower + v * (pvalues - lower)


@dataclass
class BiasRow:
    """Oracle against empirical values for one tau_j."""
    tau: float
    eta: float
    oracle_beta: float
    empirical_beta: float
    beta_se: float
    oracle_b1: float
    empirical_b1: float
    b1_se: float
    oracle_b2: float
    empirical_b2: float
    b2_se: float
    min_gap: float           # smallest per-replicate B2 - B1 sample

    def agrees(self, n_se: float = 3.0) -> bool:
        """Empirical means within n_se standard errors of the oracles."""
        checks = [
            (self.oracle_b1, self.empirical_b1, self.b1_se),
            (self.oracle_b2, self.empirical_b2, self.b2_se),
        ]
        if math.isfinite(self.oracle_beta):
            checks.append((self.oracle_beta, self.empirical_beta, self.beta_se))
        return all(abs(emp - exact) <= n_se * se + AGREEMENT_SLACK for exact, emp, se in checks)


@dataclass
class BiasReport:
    """Bias experiment outcome."""
    scenario: SimScenario
    oracle: BiasOracle
    rows: List[BiasRow]
    pi0_means: Dict[str, float]
    pi0_ses: Dict[str, float]
    reps: int = 0
    notes: List[str] = field(default_factory=list)

    def agrees(self, n_se: float = 3.0) -> bool:
        return all(row.agrees(n_se) for row in self.rows)

    @property
    def gap_nonnegative(self) -> bool:
        return all(row.min_gap >= 0.0 for row in self.rows)


def bias_replicate(
    scenario: SimScenario,
    grid: TuningGrid,
    index: int,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, Dict[str, float]]:
    """Per-tau samples of the uncapped beta, B1 and B2 for one replicate."""
    dataset = gen_dataset(scenario, index)
    p = dataset.pvalues
    m = dataset.m
    share = dataset.m0 / m
    taus = grid.tau_array

    betas = beta_trials(p, grid, cap=False)
    u = randomized_pvalues(p, dataset.supports, auxiliary_rng(scenario.seed, index))
    mixed = np.where(dataset.truth, u, p)
    scale = 1.0 / (m * (1.0 - taus))
    b2 = (1.0 + (p[:, None] > taus).sum(axis=0)) * scale - share
    b1 = (1.0 + (mixed[:, None] > taus).sum(axis=0)) * scale - share
    return betas, b1, b2, pi0_estimates(p, grid, scenario.storey_tau)


def bias_experiment(scenario: SimScenario, workers: int = 1) -> BiasReport:
    """
    Compare exact bias oracles with Monte Carlo means.

    Labels are iid Bernoulli(pi0), so the oracles use pi0 as each test's
    null probability. Needs fixed margins.
    """
    if scenario.margin_mode is not MarginMode.FIXED:
        raise ConfigurationError("the bias experiment needs fixed margins")
    supports = design_supports(scenario)
    grid = design_grid(scenario)
    oracle = bias_oracles(
        supports,
        grid,
        truth=[scenario.pi0] * scenario.m,
        alt_odds=[scenario.effect] * scenario.m,
    )
    logger.info(f"running {scenario.reps} bias replicates of '{scenario.name}'")

    samples = map_replicates(partial(bias_replicate, scenario, grid), scenario.reps, workers)
    betas = np.vstack([s[0] for s in samples])
    b1 = np.vstack([s[1] for s in samples])
    b2 = np.vstack([s[2] for s in samples])
    gaps = b2 - b1

    rows: List[BiasRow] = []
    notes: List[str] = []
    for j, tau in enumerate(grid.taus):
        eta = float(grid.etas[j])
        if math.isfinite(oracle.expected_betas[j]):
            beta_mean, beta_se = mean_se(betas[:, j])
        else:
            beta_mean, beta_se = math.inf, 0.0
            notes.append(f"tau {tau:g}: eta = 1, E[beta] is infinite")
        b1_mean, b1_se = mean_se(b1[:, j])
        b2_mean, b2_se = mean_se(b2[:, j])
        rows.append(BiasRow(
            tau=float(tau),
            eta=eta,
            oracle_beta=float(oracle.expected_betas[j]),
            empirical_beta=beta_mean,
            beta_se=beta_se,
            oracle_b1=float(oracle.b1[j]),
            empirical_b1=b1_mean,
            b1_se=b1_se,
            oracle_b2=float(oracle.b2[j]),
            empirical_b2=b2_mean,
            b2_se=b2_se,
            min_gap=float(gaps[:, j].min()),
        ))

    pi0_means: Dict[str, float] = {}
    pi0_ses: Dict[str, float] = {}
    for key in samples[0][3]:
        pi0_means[key], pi0_ses[key] = mean_se([s[3][key] for s in samples])

    report = BiasReport(
        scenario=scenario,
        oracle=oracle,
        rows=rows,
        pi0_means=pi0_means,
        pi0_ses=pi0_ses,
        reps=scenario.reps,
        notes=notes,
    )
    if not report.agrees():
        logger.warning(f"'{scenario.name}': empirical bias disagrees with the oracle beyond 3 SE")
    return report


__all__ = [
    'Dataset',
    'design_totals',
    'design_supports',
    'design_grid',
    'gen_dataset',
    'pi0_estimates',
    'map_replicates',
    'mean_se',
    'fdr_replicate',
    'run_fdr_experiment',
    'oracle_pi0_bias',
    'randomized_pvalues',
    'BiasRow',
    'BiasReport',
    'bias_replicate',
    'bias_experiment',
]
