"""Configuration management."""

from .loader import load_config, read_config_data
from .models import (
    DiagnosticsSettings,
    LoggingConfig,
    McmcSettings,
    MleSettings,
    OutputSettings,
    RestrictionRow,
    RunConfig,
    ScenarioGrid,
)

__all__ = [
    "DiagnosticsSettings",
    "LoggingConfig",
    "McmcSettings",
    "MleSettings",
    "OutputSettings",
    "RestrictionRow",
    "RunConfig",
    "ScenarioGrid",
    "load_config",
    "read_config_data",
]
