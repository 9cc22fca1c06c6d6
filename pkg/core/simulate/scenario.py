"""
Simulation Scenarios
====================
Ground-truth configurations and result records for Monte Carlo runs.

Features:
- Validated, hashable scenario records
- Per-replicate diagnostics and aggregated results
- Presets for the verification battery
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ..errors import ConfigurationError
from ..exact_tests import fet_support

logger = logging.getLogger(__name__)


class MarginMode(Enum):
    """How table margins are produced per replicate."""
    FIXED = "fixed"                  # designed totals, cell drawn conditionally
    UNCONDITIONAL = "unconditional"  # both group counts drawn, totals vary


@dataclass(frozen=True)
class SimScenario:
    """
    Ground truth of a two-group count experiment.

    Labels are iid Bernoulli(pi0) per replicate. True nulls share the group
    rate `base_rate`; false nulls have odds ratio `effect` between groups.
    In fixed-margin mode the row totals are `totals` or, when omitted,
    drawn once from the design stream of `seed` and shared by every
    replicate.
    """
    m: int = 200
    pi0: float = 0.8
    n1: int = 20
    n2: int = 20
    effect: float = 4.0
    alpha: float = 0.05
    taus: Optional[Tuple[float, ...]] = None
    reps: int = 1000
    seed: int = 20240101
    margin_mode: MarginMode = MarginMode.FIXED
    base_rate: float = 0.3
    totals: Optional[Tuple[int, ...]] = None
    storey_tau: float = 0.5
    name: str = "scenario"

    def __post_init__(self):
        if isinstance(self.margin_mode, str):
            try:
                object.__setattr__(self, "margin_mode", MarginMode(self.margin_mode))
            except ValueError:
                valid = ", ".join(mode.value for mode in MarginMode)
                raise ConfigurationError(
                    f"unknown margin mode {self.margin_mode!r}; valid modes: {valid}"
                ) from None
        if self.taus is not None:
            object.__setattr__(self, "taus", tuple(float(t) for t in self.taus))
        if self.totals is not None:
            object.__setattr__(self, "totals", tuple(int(c) for c in self.totals))
        self._validate()

    def _validate(self):
        problems: List[str] = []
        if self.m < 1:
            problems.append(f"m must be at least 1, got {self.m}")
        if not 0.0 < self.pi0 <= 1.0:
            problems.append(f"pi0 must lie in (0, 1], got {self.pi0}")
        if self.n1 < 1 or self.n2 < 1:
            problems.append(f"group sizes must be positive, got n1={self.n1}, n2={self.n2}")
        if self.effect <= 0:
            problems.append(f"effect (odds ratio) must be positive, got {self.effect}")
        if not 0.0 < self.alpha < 1.0:
            problems.append(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.reps < 1:
            problems.append(f"reps must be at least 1, got {self.reps}")
        if self.seed < 0:
            problems.append(f"seed must be non-negative, got {self.seed}")
        if not 0.0 < self.base_rate < 1.0:
            problems.append(f"base_rate must lie in (0, 1), got {self.base_rate}")
        if not 0.0 < self.storey_tau < 1.0:
            problems.append(f"storey_tau must lie in (0, 1), got {self.storey_tau}")
        if self.taus is not None and not self.taus:
            problems.append("taus must not be empty")
        if self.totals is not None:
            if len(self.totals) != self.m:
                problems.append(f"expected {self.m} totals, got {len(self.totals)}")
            elif any(not 0 <= c <= self.n1 + self.n2 for c in self.totals):
                problems.append(f"totals must lie in [0, {self.n1 + self.n2}]")
            elif any(not fet_support(self.n1, self.n2, c).is_informative for c in self.totals):
                problems.append("every designed total must give an informative support (inf S < 1)")
        if problems:
            raise ConfigurationError(f"invalid scenario '{self.name}': " + "; ".join(problems))

        if self.effect == 1.0 and self.pi0 < 1.0:
            logger.warning(
                f"scenario '{self.name}': effect = 1 makes false nulls indistinguishable from nulls"
            )

    def replace(self, **changes: Any) -> "SimScenario":
        """Copy with some fields changed."""
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["margin_mode"] = self.margin_mode.value
        data["taus"] = list(self.taus) if self.taus is not None else None
        data["totals"] = list(self.totals) if self.totals is not None else None
        return data


@dataclass
class ReplicateRecord:
    """Diagnostics of one replicate."""
    index: int
    m: int
    m0: int
    rejections: int          # R
    false_rejections: int    # V
    pi0_estimates: Dict[str, float] = field(default_factory=dict)

    @property
    def fdp(self) -> float:
        return self.false_rejections / max(self.rejections, 1)

    @property
    def power(self) -> float:
        """True rejections over max(m1, 1); 0 when every hypothesis is null."""
        return (self.rejections - self.false_rejections) / max(self.m - self.m0, 1)


@dataclass
class SimResult:
    """Aggregated outcome of a Monte Carlo FDR experiment."""
    scenario: SimScenario
    procedure: str
    fdr: float
    fdr_se: float
    power: float
    power_se: float
    pi0_means: Dict[str, float]
    pi0_ses: Dict[str, float]
    pi0_biases: Dict[str, float]
    oracle_bias: Optional[float] = None   # E[pi0_hat_H] - pi0 for uncapped trials
    replicates: List[ReplicateRecord] = field(default_factory=list, repr=False)

    @property
    def reps(self) -> int:
        return len(self.replicates)

    def fdr_within(self, level: float, n_se: float = 3.0) -> bool:
        """Empirical FDR <= level + n_se standard errors."""
        return self.fdr <= level + n_se * self.fdr_se


def _common_taus(n1: int, n2: int, c: int) -> Tuple[float, ...]:
    return tuple(v for v in fet_support(n1, n2, c).values if 0.1 < v < 0.9)


class ScenarioPresets:
    """Canned scenarios for the verification battery."""

    @staticmethod
    def fdr_battery(reps: int = 2000, seed: int = 20240101) -> List[SimScenario]:
        """m = 200, n1 = n2 = 20, psi = 4, alpha = 0.05, pi0 in {0.5, 0.8, 1}."""
        return [
            SimScenario(
                m=200,
                pi0=pi0,
                n1=20,
                n2=20,
                effect=4.0,
                alpha=0.05,
                reps=reps,
                seed=seed + k,
                margin_mode=MarginMode.FIXED,
                name=f"fdr_pi0_{pi0:g}",
            )
            for k, pi0 in enumerate((0.5, 0.8, 1.0))
        ]

    @staticmethod
    def condition_two(m: int, reps: int = 100_000, seed: int = 7) -> SimScenario:
        """
        All-null scenario with few tests for the leave-one-out check.

        Tuning parameters sit on common support points, so lambda_ij = eta_j
        = tau_j and the reciprocal bound is at its tightest.
        """
        return SimScenario(
            m=m,
            pi0=1.0,
            n1=10,
            n2=10,
            effect=1.0,
            taus=_common_taus(10, 10, 8),
            reps=reps,
            seed=seed + m,
            totals=(8,) * m,
            name=f"condition_two_m{m}",
        )

    @staticmethod
    def bias_all_null(reps: int = 10_000, seed: int = 11) -> SimScenario:
        """
        All-null scenario whose tuning parameters lie in every support.

        All rows share the margin (10, 10, 8), so taus drawn from that
        support are common points of every S_i.
        """
        return SimScenario(
            m=20,
            pi0=1.0,
            n1=10,
            n2=10,
            effect=1.0,
            taus=_common_taus(10, 10, 8),
            reps=reps,
            seed=seed,
            totals=(8,) * 20,
            name="bias_all_null",
        )

    @staticmethod
    def bias_mixed(reps: int = 10_000, seed: int = 13) -> SimScenario:
        """Mixed scenario with designed totals and a short tuning grid."""
        return SimScenario(
            m=50,
            pi0=0.8,
            n1=20,
            n2=20,
            effect=4.0,
            taus=(0.2, 0.4, 0.5),
            reps=reps,
            seed=seed,
            base_rate=0.4,
            name="bias_mixed",
        )


__all__ = [
    'MarginMode',
    'SimScenario',
    'ReplicateRecord',
    'SimResult',
    'ScenarioPresets',
]
