"""
Discrete pi0 - Main Entry Point
===============================
Command-line interface for estimating the proportion of true nulls from
discrete tests, running step-up FDR procedures, and Monte Carlo checks.

Usage:
    discrete-pi0 support  --input counts.tsv
    discrete-pi0 estimate --input counts.tsv --taus 0.3,0.5
    discrete-pi0 analyze  --input counts.tsv --procedure abh --alpha 0.05
    discrete-pi0 simulate --experiment fdr --procedure bh,abh_H --reps 2000
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from core.cli import COMMANDS, emit, render, resolve_config
from core.errors import ConfigurationError, DiscretePi0Error, InputError

load_dotenv()

logger = logging.getLogger("discrete_pi0")

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_INPUT_ERROR = 65     # EX_DATAERR
EXIT_CONFIG_ERROR = 78    # EX_CONFIG


# =============================================================================
# Configuration
# =============================================================================

class Config:
    """Environment defaults; the config file and flags override them."""

    ALPHA: float = float(os.getenv("DPI0_ALPHA", "0.05"))
    SEED: int = int(os.getenv("DPI0_SEED", "20240101"))
    REPS: int = int(os.getenv("DPI0_REPS", "1000"))
    PRECISION: int = int(os.getenv("DPI0_PRECISION", "6"))
    FORMAT: str = os.getenv("DPI0_FORMAT", "json")
    WORKERS: int = int(os.getenv("DPI0_WORKERS", "1"))
    LOG_LEVEL: str = os.getenv("DPI0_LOG_LEVEL", "INFO")

    @classmethod
    def defaults(cls) -> Dict[str, Any]:
        return {
            "alpha": cls.ALPHA,
            "seed": cls.SEED,
            "reps": cls.REPS,
            "precision": cls.PRECISION,
            "format": cls.FORMAT,
            "workers": cls.WORKERS,
        }


config = Config()


# =============================================================================
# Arguments
# =============================================================================

def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", dest="config_file", default=None, help="JSON config file")
    common.add_argument("--input", default=None, help="tab-separated count matrix: id x1 x2 n1 n2")
    common.add_argument("--alpha", type=float, default=None, help="target FDR level")
    common.add_argument("--taus", type=_float_list, default=None, help="tuning parameters, e.g. 0.3,0.5")
    common.add_argument("--procedure", default=None, help="bh, abh_H, abh_storey, bhh, abhh_H (comma list for simulate)")
    common.add_argument("--storey-tau", dest="storey_tau", type=float, default=None)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--precision", type=int, default=None, help="significant digits in reports")
    common.add_argument("--log-level", dest="log_level", default=None)

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--experiment", choices=["fdr", "bias", "condition-two", "lemma1"], default=None)
    sim.add_argument("--reps", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--m", type=int, default=None, help="number of hypotheses")
    sim.add_argument("--pi0", type=float, default=None, help="true proportion of nulls")
    sim.add_argument("--n1", type=int, default=None)
    sim.add_argument("--n2", type=int, default=None)
    sim.add_argument("--effect", type=float, default=None, help="odds ratio of false nulls")
    sim.add_argument("--margin-mode", dest="margin_mode", choices=["fixed", "unconditional"], default=None)
    sim.add_argument("--base-rate", dest="base_rate", type=float, default=None)
    sim.add_argument("--workers", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="discrete-pi0",
        description="Proportion of true nulls and FDR control for discrete p-values.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("support", parents=[common], help="p-value supports per row")
    subparsers.add_parser("estimate", parents=[common], help="estimate pi0")
    subparsers.add_parser("analyze", parents=[common], help="run a step-up procedure")
    subparsers.add_parser("simulate", parents=[common, sim], help="Monte Carlo experiments")
    return parser


def _flags(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"command", "config_file", "log_level"}
    return {key: value for key, value in vars(args).items() if key not in skip}


# =============================================================================
# Run
# =============================================================================

def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and emit its report."""
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, (args.log_level or config.LOG_LEVEL).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    try:
        run_config = resolve_config(Config.defaults(), args.config_file, _flags(args))
        report = COMMANDS[args.command](run_config)
        emit(render(report, run_config.format, run_config.precision), run_config.out)
    except InputError as e:
        logger.error(f"input error: {e.message}")
        return EXIT_INPUT_ERROR
    except ConfigurationError as e:
        logger.error(f"configuration error: {e.message}")
        return EXIT_CONFIG_ERROR
    except DiscretePi0Error as e:
        logger.error(f"error: {e.message}")
        return EXIT_UNEXPECTED
    except Exception:
        logger.exception("unexpected failure")
        return EXIT_UNEXPECTED
    return EXIT_OK


def main():
    """Console script entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
