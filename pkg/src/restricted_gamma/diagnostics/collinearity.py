"""Multicollinearity measures for a design matrix."""

from collections.abc import Sequence
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from ..errors import DegeneracyError
from ..models.data import CollinearityReport, Dataset, FitResult
from ..numerics import condition_number
from ..regression import weighted_crossproduct


def correlation_matrix(X: ArrayLike, names: Optional[Sequence[str]] = None) -> np.ndarray:
    """
    Pearson correlations between the columns of X.

    Raises:
        DegeneracyError: If a column is constant, naming it
    """
    x = np.atleast_2d(np.asarray(X, dtype=float))
    labels = list(names) if names is not None else [f"x{j + 1}" for j in range(x.shape[1])]
    constant = np.flatnonzero(np.ptp(x, axis=0) == 0)
    if constant.size:
        column = labels[int(constant[0])]
        raise DegeneracyError(f"column {column!r} is constant", column=column)
    corr = np.clip(np.corrcoef(x, rowvar=False), -1.0, 1.0)
    corr = np.atleast_2d(0.5 * (corr + corr.T))
    np.fill_diagonal(corr, 1.0)
    return corr


def multicollinearity_condition_number(data: Dataset, fit: FitResult) -> CollinearityReport:
    """
    Condition numbers of Xᵀ diag(μ̂²) X and of XᵀX.

    Raises:
        SingularityError: If either cross-product is singular
    """
    return CollinearityReport(
        weighted=condition_number(weighted_crossproduct(data, fit.mu_hat)),
        unweighted=condition_number(data.X.T @ data.X),
    )
