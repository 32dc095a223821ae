"""Configuration file loader with environment variable support."""

import re
from pathlib import Path
from typing import Any, Optional

import yaml
from envyaml import EnvYAML
from pydantic import ValidationError

from ..errors import ConfigurationError
from .models import RunConfig


def _process_env_defaults(data: Any) -> Any:
    """
    Recursively process data to handle $VAR:default_value syntax.

    EnvYAML leaves unset variables as literal strings, so "$VAR:default" is
    replaced by "default" here.
    """
    if isinstance(data, dict):
        return {k: _process_env_defaults(v) for k, v in data.items()}
    elif isinstance(data, list):
        return [_process_env_defaults(item) for item in data]
    elif isinstance(data, str):
        match = re.match(r"^\$([A-Z_][A-Z0-9_]*):(.+)$", data)
        if match:
            return match.group(2)
        return data
    else:
        return data


def read_config_data(config_path: Path) -> dict[str, Any]:
    """
    Read a JSON or YAML run document with environment variable substitution.

    JSON is a subset of YAML, so both go through EnvYAML.
    """
    config_path = config_path.expanduser()
    if not config_path.exists():
        raise ConfigurationError(f"Configuration file not found: {config_path}")

    # strict=False allows unset variables to remain as $VAR strings
    env_config = EnvYAML(str(config_path), strict=False)

    with open(config_path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f) or {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"Configuration root must be a mapping: {config_path}")

    config_data = {k: env_config[k] for k in raw if k in env_config}
    return _process_env_defaults(config_data)


def load_config(
    config_path: Optional[Path] = None, overrides: Optional[dict[str, Any]] = None
) -> RunConfig:
    """
    Load a run configuration, applying CLI overrides on top of the file.

    Args:
        config_path: Path to a JSON or YAML document; None starts from defaults
        overrides: Dotted-key override values from CLI flags

    Returns:
        Validated RunConfig object

    Raises:
        ConfigurationError: If the file is missing or validation fails
    """
    config_data = read_config_data(config_path) if config_path is not None else {}

    if overrides:
        config_data = _apply_overrides(config_data, overrides)

    try:
        return RunConfig(**config_data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e


def _apply_overrides(config_data: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Apply CLI overrides to configuration data; None values are skipped."""
    for key, value in overrides.items():
        if value is None:
            continue
        if "." in key:
            parts = key.split(".")
            current = config_data
            for part in parts[:-1]:
                if part not in current or not isinstance(current[part], dict):
                    current[part] = {}
                current = current[part]
            current[parts[-1]] = value
        else:
            config_data[key] = value
    return config_data
