"""
CLI Module
==========
Command-line front end: ingestion, configuration, drivers and reports.

Components:
- read_count_matrix / clean_rows: tab-separated counts in, informative rows out
- RunConfig / resolve_config: flags over config file over environment
- cmd_support / cmd_estimate / cmd_analyze / cmd_simulate: subcommands
- render / emit / read_support_report: JSON and CSV output
"""

from .ingest import (
    COLUMNS,
    CountRow,
    CleanedRows,
    parse_count_lines,
    read_count_matrix,
    removal_reason,
    clean_rows,
)

from .config import (
    OutputFormat,
    Experiment,
    ScenarioConfig,
    RunConfig,
    read_config_file,
    resolve_config,
)

from .report import (
    Report,
    round_significant,
    format_value,
    render_json,
    render_csv,
    render,
    emit,
    read_support_report,
)

from .commands import (
    cmd_support,
    cmd_estimate,
    cmd_analyze,
    cmd_simulate,
    COMMANDS,
)


__all__ = [
    # Ingestion
    'COLUMNS',
    'CountRow',
    'CleanedRows',
    'parse_count_lines',
    'read_count_matrix',
    'removal_reason',
    'clean_rows',

    # Configuration
    'OutputFormat',
    'Experiment',
    'ScenarioConfig',
    'RunConfig',
    'read_config_file',
    'resolve_config',

    # Reports
    'Report',
    'round_significant',
    'format_value',
    'render_json',
    'render_csv',
    'render',
    'emit',
    'read_support_report',

    # Commands
    'cmd_support',
    'cmd_estimate',
    'cmd_analyze',
    'cmd_simulate',
    'COMMANDS',
]
