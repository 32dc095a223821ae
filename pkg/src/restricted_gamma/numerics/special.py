"""Special functions with the domain checks the estimators rely on."""

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..errors import DomainError


def _as_positive(x: ArrayLike, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be finite and strictly positive")
    return arr


def log_gamma(x: ArrayLike) -> float | np.ndarray:
    """
    Natural logarithm of the gamma function.

    Args:
        x: Positive finite argument (scalar or array)

    Returns:
        ln Γ(x), same shape as the input

    Raises:
        DomainError: If any argument is non-positive or non-finite
    """
    arr = _as_positive(x, "log_gamma argument")
    out = special.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def digamma(x: ArrayLike) -> float | np.ndarray:
    """Derivative of ln Γ for positive arguments."""
    arr = _as_positive(x, "digamma argument")
    out = special.digamma(arr)
    return float(out) if out.ndim == 0 else out


def reg_lower_inc_gamma(a: ArrayLike, x: ArrayLike) -> float | np.ndarray:
    """
    Regularized lower incomplete gamma function P(a, x).

    This is the CDF of a unit-scale gamma law with shape ``a`` evaluated at ``x``.

    Args:
        a: Positive shape
        x: Non-negative evaluation point (``inf`` allowed)

    Returns:
        P(a, x) in [0, 1]

    Raises:
        DomainError: If ``a`` is not positive or ``x`` is negative or NaN
    """
    a_arr = _as_positive(a, "shape")
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(x_arr)) or np.any(x_arr < 0):
        raise DomainError("evaluation point must be non-negative")
    out = special.gammainc(a_arr, x_arr)
    return float(out) if np.ndim(out) == 0 else out


def log_ndtr(x: ArrayLike) -> float | np.ndarray:
    """Log of the standard normal CDF, accurate in the far left tail."""
    out = special.log_ndtr(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def ndtr(x: ArrayLike) -> float | np.ndarray:
    """Standard normal CDF."""
    out = special.ndtr(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def ndtri(p: ArrayLike) -> float | np.ndarray:
    """Inverse of the standard normal CDF."""
    out = special.ndtri(np.asarray(p, dtype=float))
    return float(out) if np.ndim(out) == 0 else out
