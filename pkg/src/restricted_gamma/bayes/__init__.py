"""Bayesian estimation of the gamma regression coefficients."""

from .mcmc import McmcConfig, log_posterior_kernel, run_begrc, run_beugrc, summarize
from .priors import PriorSpec, default_hyperparameters, default_proposal_cov

__all__ = [
    "McmcConfig",
    "PriorSpec",
    "default_hyperparameters",
    "default_proposal_cov",
    "log_posterior_kernel",
    "run_begrc",
    "run_beugrc",
    "summarize",
]
