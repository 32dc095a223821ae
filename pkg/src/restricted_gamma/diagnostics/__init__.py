"""Goodness-of-fit and multicollinearity diagnostics."""

from .collinearity import correlation_matrix, multicollinearity_condition_number
from .goodness import (
    ad_null_statistics,
    ad_pvalue_bootstrap,
    ad_statistic,
    bootstrap_pvalue,
    fit_gamma_univariate,
    gamma_goodness_of_fit,
)

__all__ = [
    "ad_null_statistics",
    "ad_pvalue_bootstrap",
    "ad_statistic",
    "bootstrap_pvalue",
    "correlation_matrix",
    "fit_gamma_univariate",
    "gamma_goodness_of_fit",
    "multicollinearity_condition_number",
]
