"""
P-value Supports
================
Attainable p-values of a discrete two-sided exact test.

Features:
- Immutable support records with their null point masses
- Minimum-likelihood two-sided classification of outcomes
- Null and alternative (noncentral) distribution functions
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp
from scipy.stats import binom, nchypergeom_fisher

from ..errors import InputError

logger = logging.getLogger(__name__)

# Relative tie tolerance for log-space pmf comparison.
TIE_TOLERANCE = 1e-12

# Largest n1 + n2 (or c for the binomial test) handled with exact rationals.
EXACT_LIMIT = 64

Pmf = Union[List[Fraction], np.ndarray]


class ExactTest(Enum):
    """Exact tests with a supported p-value construction."""
    FISHER = "fisher"
    BINOMIAL = "binomial"


@dataclass(frozen=True)
class Margin:
    """Conditioning margin of one test: total count c and group trial sizes."""
    c: int
    n1: Optional[int] = None
    n2: Optional[int] = None

    @property
    def first_outcome(self) -> int:
        if self.n2 is None:
            return 0
        return max(0, self.c - self.n2)

    @property
    def last_outcome(self) -> int:
        if self.n1 is None:
            return self.c
        return min(self.n1, self.c)

    @property
    def outcomes(self) -> np.ndarray:
        return np.arange(self.first_outcome, self.last_outcome + 1)


@dataclass(frozen=True)
class CountPair:
    """Observed counts of one two-group comparison."""
    x1: int
    x2: int
    n1: int
    n2: int

    def __post_init__(self):
        for name in ("x1", "x2", "n1", "n2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InputError(f"{name} must be an integer, got {value!r}")
            if value < 0:
                raise InputError(f"{name} must be non-negative, got {value}")
        if self.x1 > self.n1:
            raise InputError(f"x1={self.x1} exceeds n1={self.n1}")
        if self.x2 > self.n2:
            raise InputError(f"x2={self.x2} exceeds n2={self.n2}")

    @property
    def c(self) -> int:
        return self.x1 + self.x2

    @property
    def margin(self) -> Margin:
        return Margin(c=self.c, n1=self.n1, n2=self.n2)


@dataclass(frozen=True)
class PValueSupport:
    """
    Attainable p-values S of one discrete test.

    `values` are strictly increasing and end at 1; `masses` are the null
    probabilities of each value. `outcome_pvalues[y - margin.first_outcome]`
    is the p-value of cell outcome y.

    Example:
        support = fet_support(5, 5, 4)
        support.values          # (0.0476..., 0.5238..., 1.0)
        support.cdf(0.6)        # 0.5238...
    """
    values: Tuple[float, ...]
    masses: Tuple[float, ...]
    margin: Margin
    kind: ExactTest = ExactTest.FISHER
    outcome_pvalues: Tuple[float, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if values.ndim != 1 or values.size == 0 or values.size != masses.size:
            raise InputError("support values and masses must be non-empty and of equal length")
        if np.any(np.diff(values) <= 0):
            raise InputError("support values must be strictly increasing")
        if values[0] <= 0 or values[-1] != 1.0:
            raise InputError("support values must lie in (0, 1] and end at 1")
        if np.any(masses <= 0) or abs(masses.sum() - 1.0) > 1e-12:
            raise InputError("support masses must be positive and sum to 1")
        object.__setattr__(self, "_values", values)
        object.__setattr__(self, "_cumulative", np.concatenate(([0.0], np.cumsum(masses))))

    @property
    def q(self) -> float:
        """Smallest attainable p-value, inf S."""
        return self.values[0]

    @property
    def is_informative(self) -> bool:
        """False when the only attainable p-value is 1."""
        return self.q < 1.0

    def cdf(self, t):
        """Null CDF F(t); accepts scalars or arrays."""
        idx = np.searchsorted(self._values, t, side="right")
        result = self._cumulative[idx]
        return float(result) if np.ndim(result) == 0 else result

    def smallest_at_least(self, tau: float, tolerance: float = 1e-12) -> float:
        """Smallest support value >= tau (tau itself when it is a support point)."""
        idx = int(np.searchsorted(self._values, tau - tolerance, side="left"))
        if idx >= self._values.size:
            return 1.0
        return float(self._values[idx])

    def previous_value(self, p: float) -> float:
        """Largest support value strictly below p, or 0."""
        idx = int(np.searchsorted(self._values, p, side="left"))
        return float(self._values[idx - 1]) if idx > 0 else 0.0

    def outcome_weights(self, psi: float) -> np.ndarray:
        """Alternative law of the cell outcome for odds (or rate) ratio psi."""
        if psi <= 0:
            raise InputError(f"psi must be positive, got {psi}")
        if self.kind is ExactTest.BINOMIAL:
            return binom.pmf(self.margin.outcomes, self.margin.c, psi / (1.0 + psi))
        return fisher_noncentral_pmf(self.margin, psi)


def null_cdf(s: PValueSupport, t: float) -> float:
    """
    Null CDF of a discrete p-value: total mass of support values <= t.

    Right-continuous step function with F(s) = s at every support point.
    """
    if not 0.0 <= t <= 1.0:
        raise InputError(f"t must lie in [0, 1], got {t}")
    return s.cdf(t)


def alt_cdf(s: PValueSupport, psi: float, t: float) -> float:
    """
    P(p <= t) when the cell follows the noncentral law with ratio psi.

    For Fisher's exact test this is Fisher's noncentral hypergeometric
    distribution on the same margins; psi = 1 is the null CDF.
    """
    if not 0.0 <= t <= 1.0:
        raise InputError(f"t must lie in [0, 1], got {t}")
    if psi == 1.0:
        return s.cdf(t)
    if not s.outcome_pvalues:
        raise InputError("support carries no outcome map; rebuild it with fet_support/bt_support")
    weights = s.outcome_weights(psi)
    hits = np.asarray(s.outcome_pvalues) <= t
    return float(min(1.0, weights[hits].sum()))


def fisher_noncentral_pmf(margin: Margin, psi: float) -> np.ndarray:
    """Fisher's noncentral hypergeometric pmf over the margin's outcomes."""
    if margin.n1 is None or margin.n2 is None:
        raise InputError("Fisher's noncentral law needs both group sizes")
    if psi <= 0:
        raise InputError(f"psi must be positive, got {psi}")
    law = nchypergeom_fisher(margin.n1 + margin.n2, margin.n1, margin.c, psi)
    pmf = law.pmf(margin.outcomes)
    return pmf / pmf.sum()


def anchored_log_pmf(log_ratio: np.ndarray, mode: int) -> np.ndarray:
    """
    Normalised log-pmf from log ratios of consecutive terms.

    `log_ratio[k]` is log(pmf[k + 1] / pmf[k]); sums run outward from index
    `mode`, so mirrored ratios give bitwise mirrored log-pmf values.
    """
    log_pmf = np.zeros(log_ratio.size + 1)
    log_pmf[mode + 1:] = np.cumsum(log_ratio[mode:])
    log_pmf[:mode] = -np.cumsum(log_ratio[:mode][::-1])[::-1]
    return log_pmf - logsumexp(log_pmf)


def classify_outcomes(pmf: Pmf, log: bool = False) -> Tuple[List[float], List[float], List[float]]:
    """
    Apply the minimum-likelihood two-sided rule to a pmf.

    Outcomes with equal pmf form one class; the p-value of a class is the
    total mass of all outcomes no more likely than it. Exact rationals are
    compared exactly. Float pmfs (log-pmfs when `log` is set) are ranked and
    accumulated in log space, with ties within a relative TIE_TOLERANCE.

    A class whose p-value would not be a positive double strictly above the
    previous one is merged into the next class, so far tails of huge tables
    share the smallest representable p-value instead of collapsing to 0.

    Returns:
        (support values, class masses, p-value per outcome)
    """
    exact = not isinstance(pmf, np.ndarray)
    if exact:
        key = list(pmf)
    else:
        with np.errstate(divide="ignore"):
            key = np.asarray(pmf, dtype=float) if log else np.log(pmf)
        key = key - logsumexp(key)
    order = sorted(range(len(key)), key=lambda k: key[k])

    groups: List[List[int]] = []
    for k in order:
        if groups and _tied(key[groups[-1][0]], key[k], exact):
            groups[-1].append(k)
        else:
            groups.append([k])

    accumulate = _ExactMass() if exact else _LogMass()
    values: List[float] = []
    masses: List[float] = []
    classes: List[List[int]] = []
    pending: List[int] = []
    for members in groups:
        pending.extend(members)
        value, mass = accumulate.add([key[k] for k in members])
        if mass > 0 and value > (values[-1] if values else 0.0):
            values.append(value)
            masses.append(mass)
            classes.append(pending)
            pending = []
            accumulate.close_class()

    if pending:
        _, mass = accumulate.add([])
        if classes:
            classes[-1].extend(pending)
            masses[-1] += mass
        else:
            values, masses, classes = [1.0], [1.0], [pending]

    values[-1] = 1.0
    outcome_pvalues: List[float] = [1.0] * len(key)
    for value, members in zip(values, classes):
        for k in members:
            outcome_pvalues[k] = value
    return values, masses, outcome_pvalues


class _ExactMass:
    """Running total and open-class mass in exact rationals."""

    def __init__(self):
        self.running = Fraction(0)
        self.open = Fraction(0)

    def add(self, pieces: List[Fraction]) -> Tuple[float, float]:
        piece = sum(pieces, Fraction(0))
        self.running += piece
        self.open += piece
        return float(self.running), float(self.open)

    def close_class(self):
        self.open = Fraction(0)


class _LogMass:
    """Running total and open-class mass kept as log-probabilities."""

    def __init__(self):
        self.running = -np.inf
        self.open = -np.inf

    def add(self, pieces: List[float]) -> Tuple[float, float]:
        if pieces:
            piece = float(logsumexp(pieces))
            self.running = np.logaddexp(self.running, piece)
            self.open = np.logaddexp(self.open, piece)
        return math.exp(self.running), math.exp(self.open)

    def close_class(self):
        self.open = -np.inf


def _tied(reference, candidate, exact: bool) -> bool:
    if exact:
        return candidate == reference
    # log(1 + x) ~ x for the relative tolerance
    return candidate <= reference + TIE_TOLERANCE


def build_support(pmf: Pmf, margin: Margin, kind: ExactTest, log: bool = False) -> PValueSupport:
    """Wrap a classified pmf (or log-pmf) into a PValueSupport."""
    values, masses, outcome_pvalues = classify_outcomes(pmf, log=log)
    return PValueSupport(
        values=tuple(values),
        masses=tuple(masses),
        margin=margin,
        kind=kind,
        outcome_pvalues=tuple(outcome_pvalues),
    )


def supports_nu(supports: Sequence[PValueSupport]) -> float:
    """nu = max_i inf S_i."""
    if not supports:
        raise InputError("at least one support is required")
    return max(s.q for s in supports)


__all__ = [
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
]
