"""
Run Configuration
=================
Validated run parameters for the command-line front end.

Values are merged in order of precedence: command-line flags, then the
JSON config file, then environment defaults.
"""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..errors import ConfigurationError
from ..procedures import DEFAULT_STOREY_TAU, ProcedureTag
from ..simulate import MarginMode, SimScenario

logger = logging.getLogger(__name__)

SCENARIO_FIELDS = ("m", "pi0", "n1", "n2", "effect", "margin_mode", "base_rate", "totals", "name")


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class Experiment(str, Enum):
    FDR = "fdr"
    BIAS = "bias"
    CONDITION_TWO = "condition-two"
    LEMMA1 = "lemma1"


class ScenarioConfig(BaseModel):
    """Ground truth block of a simulation run."""
    model_config = ConfigDict(extra="forbid")

    m: int = Field(200, ge=1)
    pi0: float = Field(0.8, gt=0.0, le=1.0)
    n1: int = Field(20, ge=1)
    n2: int = Field(20, ge=1)
    effect: float = Field(4.0, gt=0.0)
    margin_mode: MarginMode = MarginMode.FIXED
    base_rate: float = Field(0.3, gt=0.0, lt=1.0)
    totals: Optional[List[int]] = None
    name: str = "cli"


class RunConfig(BaseModel):
    """
    Parameters of one subcommand run.

    Example:
        config = RunConfig(input="counts.tsv", taus=[0.3, 0.5], procedure=["abh"])
    """
    model_config = ConfigDict(extra="forbid")

    input: Optional[Path] = None
    alpha: float = Field(0.05, gt=0.0, lt=1.0)
    taus: Optional[List[float]] = None
    procedure: List[str] = Field(default_factory=lambda: [ProcedureTag.ABH_H.value])
    storey_tau: float = Field(DEFAULT_STOREY_TAU, gt=0.0, lt=1.0)
    out: Optional[Path] = None
    format: OutputFormat = OutputFormat.JSON
    precision: int = Field(6, ge=1, le=17)
    seed: int = Field(20240101, ge=0)
    reps: int = Field(1000, ge=1)
    workers: int = Field(1, ge=1)
    experiment: Experiment = Experiment.FDR
    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)

    @field_validator("taus")
    @classmethod
    def _taus_ordered(cls, taus: Optional[List[float]]) -> Optional[List[float]]:
        if taus is None:
            return None
        if not taus:
            raise ValueError("taus must not be empty")
        if any(not 0.0 <= t < 1.0 for t in taus):
            raise ValueError("every tau must lie in [0, 1)")
        if any(b < a for a, b in zip(taus, taus[1:])):
            raise ValueError("taus must be non-decreasing")
        return taus

    @field_validator("procedure", mode="before")
    @classmethod
    def _split_procedures(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @field_validator("procedure")
    @classmethod
    def _known_procedures(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("at least one procedure is required")
        return [ProcedureTag.parse(tag).value for tag in value]

    @property
    def tags(self) -> List[ProcedureTag]:
        return [ProcedureTag.parse(tag) for tag in self.procedure]

    def to_scenario(self) -> SimScenario:
        """Simulation scenario for this run; validated on construction."""
        block = self.scenario
        return SimScenario(
            m=block.m,
            pi0=block.pi0,
            n1=block.n1,
            n2=block.n2,
            effect=block.effect,
            alpha=self.alpha,
            taus=tuple(self.taus) if self.taus is not None else None,
            reps=self.reps,
            seed=self.seed,
            margin_mode=block.margin_mode,
            base_rate=block.base_rate,
            totals=tuple(block.totals) if block.totals is not None else None,
            storey_tau=self.storey_tau,
            name=block.name,
        )

    def effective(self) -> Dict[str, Any]:
        """JSON-ready view echoed into reports."""
        return self.model_dump(mode="json")


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Load a JSON config file as a plain mapping."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e.strerror}", path=str(path)) from None
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"config file {path} is not valid JSON: {e.msg} (line {e.lineno})") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    return data


def _merge(base: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = _merge(dict(merged[key]), value)
        else:
            merged[key] = value
    return merged


def resolve_config(
    defaults: Mapping[str, Any],
    config_file: Optional[Union[str, Path]] = None,
    flags: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """
    Build the effective RunConfig.

    Flag values of None are treated as unset. Scenario keys given as flags
    (m, pi0, effect, margin_mode, ...) are routed into the scenario block.

    Raises:
        ConfigurationError: unreadable file or any invalid value
    """
    data: Dict[str, Any] = dict(defaults)
    if config_file is not None:
        data = _merge(data, read_config_file(config_file))
        logger.debug(f"loaded config file {config_file}")

    top: Dict[str, Any] = {}
    scenario: Dict[str, Any] = {}
    for key, value in (flags or {}).items():
        if key in SCENARIO_FIELDS:
            scenario[key] = value
        else:
            top[key] = value
    data = _merge(data, top)
    data = _merge(data, {"scenario": scenario})

    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}"
            for error in e.errors()
        )
        raise ConfigurationError(f"invalid configuration: {problems}") from None


__all__ = [
    'OutputFormat',
    'Experiment',
    'ScenarioConfig',
    'RunConfig',
    'read_config_file',
    'resolve_config',
]
