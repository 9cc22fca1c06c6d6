"""
Procedure Registry
==================
Named procedures and a single entry point that estimates pi0 when needed
and runs the chosen step-up procedure.
"""

import logging
from enum import Enum
from typing import Optional, Sequence

from ..errors import ConfigurationError
from ..estimator import TuningGrid, build_grid, pi0_hat_H, storey_pi0_s
from ..exact_tests import PValueSupport
from .heyse import adaptive_bhh
from .step_up import RejectionReport, adaptive_bh

logger = logging.getLogger(__name__)

DEFAULT_STOREY_TAU = 0.5


class ProcedureTag(Enum):
    """Step-up procedures by name."""
    BH = "bh"
    ABH_H = "abh_H"
    ABH_STOREY = "abh_storey"
    BHH = "bhh"
    ABHH_H = "abhh_H"

    @classmethod
    def parse(cls, value: "str | ProcedureTag") -> "ProcedureTag":
        """Parse a tag, accepting `abh` and `abhh` as short forms."""
        if isinstance(value, cls):
            return value
        key = str(value).strip()
        key = _ALIASES.get(key.lower(), key)
        for tag in cls:
            if tag.value.lower() == key.lower():
                return tag
        valid = ", ".join(t.value for t in cls)
        raise ConfigurationError(f"unknown procedure {value!r}; valid tags: {valid}", procedure=value)

    @property
    def is_adaptive(self) -> bool:
        return self in (ProcedureTag.ABH_H, ProcedureTag.ABH_STOREY, ProcedureTag.ABHH_H)

    @property
    def uses_supports(self) -> bool:
        return self in (ProcedureTag.BHH, ProcedureTag.ABHH_H)


_ALIASES = {
    "abh": "abh_H",
    "abhh": "abhh_H",
}


def estimate_pi0_for(
    tag: ProcedureTag,
    pvalues: Sequence[float],
    grid: Optional[TuningGrid],
    storey_tau: float = DEFAULT_STOREY_TAU,
) -> float:
    """Plug-in pi0 for an adaptive procedure; 1 for the others."""
    if not tag.is_adaptive:
        return 1.0
    if tag is ProcedureTag.ABH_STOREY:
        return storey_pi0_s(pvalues, storey_tau)
    if grid is None:
        raise ConfigurationError(f"procedure {tag.value} needs a tuning grid")
    return pi0_hat_H(pvalues, grid).pi0_hat


def apply_procedure(
    tag: "str | ProcedureTag",
    pvalues: Sequence[float],
    alpha: float,
    supports: Optional[Sequence[PValueSupport]] = None,
    grid: Optional[TuningGrid] = None,
    pi0_override: Optional[float] = None,
    storey_tau: float = DEFAULT_STOREY_TAU,
) -> RejectionReport:
    """
    Run a procedure by tag.

    Example:
        report = apply_procedure("abh", pvalues, 0.05, supports=supports)
        report.k_hat, report.pi0_hat
    """
    tag = ProcedureTag.parse(tag)
    if tag.uses_supports and supports is None:
        raise ConfigurationError(f"procedure {tag.value} needs the p-value supports")
    if tag in (ProcedureTag.ABH_H, ProcedureTag.ABHH_H) and grid is None and pi0_override is None:
        if supports is None:
            raise ConfigurationError(f"procedure {tag.value} needs supports or a tuning grid")
        grid = build_grid(supports)

    if pi0_override is not None and tag.is_adaptive:
        pi0_hat = float(pi0_override)
    else:
        pi0_hat = estimate_pi0_for(tag, pvalues, grid, storey_tau)

    if tag.uses_supports:
        return adaptive_bhh(pvalues, supports, pi0_hat, alpha, procedure=tag.value)
    return adaptive_bh(pvalues, pi0_hat, alpha, procedure=tag.value)


__all__ = [
    'ProcedureTag',
    'estimate_pi0_for',
    'apply_procedure',
    'DEFAULT_STOREY_TAU',
]
