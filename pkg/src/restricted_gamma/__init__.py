"""Restricted gamma regression - MLE, gamma ridge and constrained Bayesian estimators."""

__version__ = "0.1.0"
