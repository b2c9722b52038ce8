"""Command-line surface: run configuration, subcommands and report emission."""

from finsler_lab.cli.commands import (
    EXIT_CHECK_FAILED,
    EXIT_COMPUTATION,
    EXIT_CONFIG,
    EXIT_OK,
    build_parser,
    run_command,
)
from finsler_lab.cli.config import (
    Command,
    GridSpec,
    OutputFormat,
    PointEntry,
    RunConfig,
    build_run_config,
)
from finsler_lab.cli.output import (
    CSV_HEADER,
    SCHEMA_VERSION,
    emit_report,
    parse_csv_report,
    render_csv,
    render_json,
)

__all__ = [
    "CSV_HEADER",
    "EXIT_CHECK_FAILED",
    "EXIT_COMPUTATION",
    "EXIT_CONFIG",
    "EXIT_OK",
    "SCHEMA_VERSION",
    "Command",
    "GridSpec",
    "OutputFormat",
    "PointEntry",
    "RunConfig",
    "build_parser",
    "build_run_config",
    "emit_report",
    "parse_csv_report",
    "render_csv",
    "render_json",
    "run_command",
]
