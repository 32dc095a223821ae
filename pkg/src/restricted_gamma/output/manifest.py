"""Reproducibility manifest written next to every report."""

from pathlib import Path
from typing import Any

import numpy as np
import scipy

from .. import __version__
from ..config.models import RunConfig
from .reports import write_json

MANIFEST_NAME = "manifest.json"


def build_manifest(cfg: RunConfig, command: str, **details: Any) -> dict[str, Any]:
    """
    Config echo, seed and library versions.

    No timestamps or host information, so identical runs give identical files.
    """
    return {
        "command": command,
        "version": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "seed": cfg.seed,
        "mle_mode": cfg.mle.mode.value,
        "proposal_form": cfg.mcmc.proposal_form.value,
        "config": cfg.model_dump(mode="json"),
        "details": details,
    }


def write_manifest(out_dir: Path, manifest: dict[str, Any]) -> Path:
    return write_json(manifest, out_dir / MANIFEST_NAME)
