"""Scenario orchestration, configuration, output files and the CLI."""

from .config import ConfigError, RunConfig, load_config
from .scenarios import PoleReport, ScenarioReport, Series, report_pole, run_correlation, run_emission, run_survival
from .selftest import SelftestSummary, run_selftests

__all__ = [
    "ConfigError",
    "RunConfig",
    "load_config",
    "Series",
    "ScenarioReport",
    "PoleReport",
    "run_survival",
    "run_emission",
    "run_correlation",
    "report_pole",
    "run_selftests",
    "SelftestSummary",
]
