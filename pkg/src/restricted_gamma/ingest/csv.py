"""CSV ingestion into a validated Dataset."""

from collections.abc import Sequence
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
import structlog

from ..errors import (
    DegeneracyError,
    IngestionError,
    MissingColumnError,
    MissingFileError,
    NonNumericCellError,
    NonPositiveResponseError,
)
from ..models.data import Dataset

logger = structlog.get_logger(__name__)

INTERCEPT_NAME = "(Intercept)"


def _numeric_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    values = pd.to_numeric(frame[column], errors="coerce")
    bad = np.flatnonzero(values.isna().to_numpy())
    if bad.size:
        row = int(bad[0]) + 1
        raise NonNumericCellError(
            f"non-numeric value {frame[column].iloc[bad[0]]!r} in column {column!r}, data row {row}",
            row=row,
            column=column,
        )
    return values.to_numpy(dtype=float)


def load_csv(
    path: Path,
    response: str,
    covariates: Optional[Sequence[str]] = None,
    intercept: bool = True,
    zeta: float = 1.0,
    standardize: bool = False,
) -> Dataset:
    """
    Read a header-row CSV into a Dataset.

    Rows are numbered from 1 after the header in error messages.

    Args:
        path: CSV file
        response: Response column name
        covariates: Covariate columns in design order; all other columns when empty
        intercept: Prepend an all-ones column named "(Intercept)"
        zeta: Known precision parameter
        standardize: Center covariates and scale them to unit sample variance

    Returns:
        Dataset with covariate names taken from the header

    Raises:
        MissingFileError: If the file does not exist
        MissingColumnError: If a configured column is not in the header
        NonNumericCellError: If a cell does not parse as a number
        NonPositiveResponseError: If a response value is not positive
    """
    path = Path(path).expanduser()
    if not path.is_file():
        raise MissingFileError(f"dataset not found: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise IngestionError(f"cannot parse {path}: {e}") from e
    frame.columns = [str(c).strip() for c in frame.columns]

    names = list(covariates) if covariates else [c for c in frame.columns if c != response]
    for column in [response, *names]:
        if column not in frame.columns:
            raise MissingColumnError(f"column {column!r} not found in {path}", column=column)

    y = _numeric_column(frame, response)
    nonpositive = np.flatnonzero(y <= 0)
    if nonpositive.size:
        row = int(nonpositive[0]) + 1
        raise NonPositiveResponseError(
            f"response {response!r} is {y[nonpositive[0]]} at data row {row}", row=row
        )

    X = np.column_stack([_numeric_column(frame, c) for c in names]) if names else np.empty((len(y), 0))
    if standardize:
        X = _standardize(X, names)
    if intercept:
        X = np.column_stack([np.ones(len(y)), X])
        names = [INTERCEPT_NAME, *names]

    logger.info("Dataset loaded", path=str(path), rows=len(y), columns=names, response=response)
    return Dataset(X, y, zeta, covariate_names=tuple(names), response_name=response)


def _standardize(X: np.ndarray, names: Sequence[str]) -> np.ndarray:
    sd = X.std(axis=0, ddof=1)
    constant = np.flatnonzero(~(sd > 0))
    if constant.size:
        column = names[int(constant[0])]
        raise DegeneracyError(f"cannot standardize constant column {column!r}", column=column)
    return (X - X.mean(axis=0)) / sd
