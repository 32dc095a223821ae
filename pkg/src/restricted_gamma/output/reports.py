"""Tabular and JSON report writers."""

import json
import math
from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Any, Literal

import numpy as np
import pandas as pd
import structlog

from ..models.data import FitResult, ScenarioReport

logger = structlog.get_logger(__name__)

FLOAT_FORMAT = "%.10g"


def to_jsonable(value: Any) -> Any:
    """Convert numpy values, enums and paths into plain JSON types; NaN becomes None."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (np.floating, float)):
        f = float(value)
        return None if math.isnan(f) or math.isinf(f) else f
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_json(obj: Any, path: Path) -> Path:
    """Write JSON with sorted keys so reruns are byte-identical."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.debug("Wrote JSON", path=str(path))
    return path


def write_frame(frame: pd.DataFrame, path: Path, fmt: Literal["csv", "json"] = "csv") -> Path:
    """Write a table as CSV (fixed float format) or as a JSON list of records."""
    path = path.with_suffix(f".{fmt}")
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    else:
        write_json(frame.to_dict(orient="records"), path)
    logger.debug("Wrote table", path=str(path), rows=len(frame))
    return path


def estimates_frame(fits: Sequence[FitResult], names: Sequence[str]) -> pd.DataFrame:
    """Long table: one row per (estimator, coefficient) with estimate and standard error."""
    rows = [
        {
            "estimator": fit.estimator_tag.value,
            "coefficient": name,
            "estimate": float(fit.beta_hat[j]),
            "std_error": float(fit.std_errors[j]),
        }
        for fit in fits
        for j, name in enumerate(names)
    ]
    return pd.DataFrame(rows, columns=["estimator", "coefficient", "estimate", "std_error"])


def estimates_table(fits: Sequence[FitResult], names: Sequence[str]) -> pd.DataFrame:
    """Wide table of "estimate (se)" cells, coefficients down and estimators across."""
    table = pd.DataFrame({"coefficient": list(names)})
    for fit in fits:
        table[fit.estimator_tag.value] = [
            f"{b:.4f} ({s:.4f})" for b, s in zip(fit.beta_hat, fit.std_errors)
        ]
    return table


def scenario_frame(report: ScenarioReport) -> pd.DataFrame:
    """Long form: zeta, n, rho, estimator, mse, bias_1..p, sd_1..p, failures."""
    rows = []
    for cell in report.cells:
        row: dict[str, Any] = {
            "zeta": cell.zeta,
            "n": cell.n,
            "rho": cell.rho,
            "estimator": cell.estimator.value,
            "mse": cell.mse,
        }
        row.update({f"bias_{j + 1}": float(b) for j, b in enumerate(cell.bias)})
        row.update({f"sd_{j + 1}": float(s) for j, s in enumerate(cell.sd)})
        row["failures"] = cell.failures
        rows.append(row)
    return pd.DataFrame(rows)


def mse_table(report: ScenarioReport) -> pd.DataFrame:
    """MSE with one row per (zeta, n, rho) and one column per estimator."""
    long = scenario_frame(report)
    estimators = list(dict.fromkeys(long["estimator"]))
    keys = ["zeta", "n", "rho"]
    wide = long.pivot(index=keys, columns="estimator", values="mse")
    order = pd.MultiIndex.from_frame(long[keys].drop_duplicates())
    return wide.reindex(index=order, columns=estimators).reset_index().rename_axis(columns=None)


def sd_bias_table(report: ScenarioReport) -> pd.DataFrame:
    """One row per (zeta, n, rho, estimator) with "sd (bias)" cells per coefficient."""
    rows = []
    for cell in report.cells:
        row: dict[str, Any] = {
            "zeta": cell.zeta,
            "n": cell.n,
            "rho": cell.rho,
            "estimator": cell.estimator.value,
        }
        for j, (s, b) in enumerate(zip(cell.sd, cell.bias)):
            row[f"beta_{j + 1}"] = f"{s:.5f} ({b:.5f})"
        rows.append(row)
    return pd.DataFrame(rows)
