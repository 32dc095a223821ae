"""Gamma regression with log link in the (ζ, μ) parametrization."""

import numpy as np
from numpy.typing import ArrayLike

from ..errors import ContractError, DomainError, NumericRangeError
from ..models.data import Dataset
from ..numerics import log_gamma

# exp() overflows double precision just above 709
ETA_LIMIT = 700.0


def linear_predictor(X: ArrayLike, beta: ArrayLike) -> np.ndarray:
    """η = Xβ with the overflow guard applied."""
    x = np.atleast_2d(np.asarray(X, dtype=float))
    b = np.asarray(beta, dtype=float).reshape(-1)
    if x.shape[1] != b.shape[0]:
        raise ContractError(f"X has {x.shape[1]} columns but beta has {b.shape[0]} entries")
    eta = x @ b
    bad = np.flatnonzero(~(np.abs(eta) <= ETA_LIMIT))
    if bad.size:
        row = int(bad[0])
        raise NumericRangeError(f"linear predictor {eta[row]:.4g} out of range at row {row}", row=row)
    return eta


def mean_response(X: ArrayLike, beta: ArrayLike) -> np.ndarray:
    """
    Mean responses μ_i = exp(X_iᵀβ).

    Raises:
        NumericRangeError: If some |η_i| exceeds 700, naming the first such row
    """
    return np.exp(linear_predictor(X, beta))


def gamma_log_density(y: ArrayLike, zeta: float, mu: ArrayLike) -> float | np.ndarray:
    """
    Log density of the gamma law with mean μ and precision ζ.

    (1/ζ − 1) ln y − y/(μζ) − (1/ζ) ln(ζμ) − ln Γ(1/ζ)

    Raises:
        DomainError: If y, ζ or μ is not strictly positive
    """
    y_arr = np.asarray(y, dtype=float)
    mu_arr = np.asarray(mu, dtype=float)
    if np.any(~(y_arr > 0)) or np.any(~(mu_arr > 0)) or not zeta > 0:
        raise DomainError("gamma density needs y > 0, zeta > 0 and mu > 0")
    shape = 1.0 / zeta
    out = (
        (shape - 1.0) * np.log(y_arr)
        - y_arr / (mu_arr * zeta)
        - shape * np.log(zeta * mu_arr)
        - log_gamma(shape)
    )
    return float(out) if np.ndim(out) == 0 else out


def log_likelihood(data: Dataset, beta: ArrayLike) -> float:
    """Sum of the per-observation log densities at μ(β)."""
    mu = mean_response(data.X, beta)
    return float(np.sum(gamma_log_density(data.y, data.zeta, mu)))


def score(data: Dataset, beta: ArrayLike) -> np.ndarray:
    """
    Gradient of the log-likelihood: (1/ζ) Σ_i (y_i e^{−X_iᵀβ} − 1) X_i.

    The sign is the one obtained by differentiating ``log_likelihood``.
    """
    eta = linear_predictor(data.X, beta)
    return data.X.T @ (data.y * np.exp(-eta) - 1.0) / data.zeta


def weighted_crossproduct(data: Dataset, mu: ArrayLike) -> np.ndarray:
    """Xᵀ diag(μ²) X."""
    m = np.asarray(mu, dtype=float).reshape(-1)
    if m.shape[0] != data.n:
        raise ContractError(f"mu has {m.shape[0]} entries, expected {data.n}")
    if np.any(~(m > 0)):
        raise DomainError("mu must be positive")
    xtwx = data.X.T @ (data.X * (m**2)[:, None])
    return 0.5 * (xtwx + xtwx.T)


def observed_information(data: Dataset, beta: ArrayLike) -> np.ndarray:
    """Negative Hessian of the log-likelihood: (1/ζ) Xᵀ diag(y/μ) X."""
    eta = linear_predictor(data.X, beta)
    w = data.y * np.exp(-eta)
    info = data.X.T @ (data.X * w[:, None]) / data.zeta
    return 0.5 * (info + info.T)


def expected_information(data: Dataset) -> np.ndarray:
    """Fisher information (1/ζ) XᵀX; it does not depend on β under the log link."""
    return data.X.T @ data.X / data.zeta
