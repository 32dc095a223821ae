"""Report and manifest writers."""

from .manifest import MANIFEST_NAME, build_manifest, write_manifest
from .reports import (
    estimates_frame,
    estimates_table,
    mse_table,
    scenario_frame,
    sd_bias_table,
    to_jsonable,
    write_frame,
    write_json,
)

__all__ = [
    "MANIFEST_NAME",
    "build_manifest",
    "estimates_frame",
    "estimates_table",
    "mse_table",
    "scenario_frame",
    "sd_bias_table",
    "to_jsonable",
    "write_frame",
    "write_json",
]
