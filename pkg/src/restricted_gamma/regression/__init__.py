"""Gamma regression model core and classical estimators."""

from .estimators import (
    MleOptions,
    canonical_form,
    fit_mle,
    fit_ridge,
    initial_beta,
    mle_std_errors,
    ridge_k1,
    ridge_k2,
)
from .likelihood import (
    expected_information,
    gamma_log_density,
    linear_predictor,
    log_likelihood,
    mean_response,
    observed_information,
    score,
    weighted_crossproduct,
)

__all__ = [
    "MleOptions",
    "canonical_form",
    "expected_information",
    "fit_mle",
    "fit_ridge",
    "gamma_log_density",
    "initial_beta",
    "linear_predictor",
    "log_likelihood",
    "mean_response",
    "mle_std_errors",
    "observed_information",
    "ridge_k1",
    "ridge_k2",
    "score",
    "weighted_crossproduct",
]
