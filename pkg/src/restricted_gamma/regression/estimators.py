"""Fisher-scoring / IRLS maximum likelihood and the gamma ridge estimator."""

from dataclasses import dataclass
from typing import Literal

import numpy as np
import structlog
from numpy.typing import ArrayLike

from ..errors import ContractError, DegeneratePenaltyError, SingularityError
from ..models.data import CanonicalForm, Dataset, EstimatorTag, FitResult, MleMode
from ..numerics import inv_spd, solve_spd, sym_eigen
from .likelihood import (
    log_likelihood,
    mean_response,
    observed_information,
    score,
    weighted_crossproduct,
)

logger = structlog.get_logger(__name__)

# relative size of a log-likelihood change lost to rounding
LOGLIK_RESOLUTION = 1e3 * np.finfo(float).eps
HALVING_RESOLUTION = np.sqrt(np.finfo(float).eps)


@dataclass(frozen=True)
class MleOptions:
    """Stopping rule and iteration variant for ``fit_mle``."""

    max_iter: int = 100
    tol: float = 1e-8
    mode: MleMode = MleMode.LIKELIHOOD_CONSISTENT
    max_halvings: int = 30


def initial_beta(data: Dataset) -> np.ndarray:
    """Least squares of ln y on X."""
    beta, *_ = np.linalg.lstsq(data.X, np.log(data.y), rcond=None)
    return beta


def _reweighted_least_squares(data: Dataset, beta: np.ndarray, opts: MleOptions) -> tuple[np.ndarray, int, bool]:
    for it in range(1, opts.max_iter + 1):
        mu = mean_response(data.X, beta)
        xtwx = weighted_crossproduct(data, mu)
        # working response M = Xβ + (y − μ)/μ²
        working = data.X @ beta + (data.y - mu) / mu**2
        rhs = data.X.T @ (working * mu**2)
        new_beta = solve_spd(xtwx, rhs)
        step = float(np.max(np.abs(new_beta - beta)))
        beta = new_beta
        logger.debug("IRLS iteration", iteration=it, step=step)
        if step < opts.tol:
            return beta, it, True
    return beta, opts.max_iter, False


def _newton_direction(data: Dataset, beta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    grad = score(data, beta)
    return grad, solve_spd(observed_information(data, beta), grad)


def _settled(grad: np.ndarray, direction: np.ndarray, loglik: float, tol: float) -> bool:
    # Newton decrement gᵀI⁻¹g below what the log-likelihood can resolve
    floor = LOGLIK_RESOLUTION * max(1.0, abs(loglik))
    return float(np.max(np.abs(direction))) < tol or float(grad @ direction) <= floor


def _likelihood_consistent(
    data: Dataset, beta: np.ndarray, opts: MleOptions
) -> tuple[np.ndarray, int, bool]:
    current = log_likelihood(data, beta)
    for it in range(1, opts.max_iter + 1):
        grad, direction = _newton_direction(data, beta)
        if _settled(grad, direction, current, opts.tol):
            return beta + direction, it - 1, True
        step = 1.0
        for _ in range(opts.max_halvings):
            candidate = beta + step * direction
            try:
                value = log_likelihood(data, candidate)
            except ArithmeticError:
                value = -np.inf
            if value >= current:
                break
            step *= 0.5
        else:
            decrement = float(grad @ direction)
            converged = decrement <= HALVING_RESOLUTION * max(1.0, abs(current))
            logger.debug("Step halving exhausted", iteration=it, decrement=decrement, converged=converged)
            return beta, it, converged
        beta, current = candidate, value
        logger.debug("Newton iteration", iteration=it, loglik=current, step_size=step)
    grad, direction = _newton_direction(data, beta)
    if _settled(grad, direction, current, opts.tol):
        return beta + direction, opts.max_iter, True
    return beta, opts.max_iter, False


def fit_mle(data: Dataset, opts: MleOptions | None = None) -> FitResult:
    """
    Maximum-likelihood fit of the gamma regression coefficients.

    Two iteration variants are available. ``paper-faithful`` repeats
    β ← (XᵀWX)⁻¹ XᵀW M with W = diag(μ̂²) and M_i = X_iᵀβ + (y_i − μ̂_i)/μ̂_i²
    until the sup-norm of the step drops below ``tol``; its fixed point solves
    Xᵀ(y − μ̂) = 0. ``likelihood-consistent`` takes Newton steps on the
    log-likelihood (with step halving) until the sup-norm of the Newton step
    drops below ``tol`` or the Newton decrement gᵀI⁻¹g falls to the rounding
    level of the log-likelihood; the last Newton step is applied on exit. When
    step halving cannot improve the log-likelihood the fit counts as converged
    only if the decrement is within √ε of the log-likelihood.

    Args:
        data: Dataset to fit
        opts: Iteration options (defaults: 100 iterations, tol 1e-8, likelihood-consistent)

    Returns:
        FitResult tagged MLE; ``converged`` is False rather than an exception when
        ``max_iter`` is exhausted

    Raises:
        SingularityError: If the weighted cross-product is singular
    """
    opts = opts or MleOptions()
    beta0 = initial_beta(data)
    if opts.mode == MleMode.PAPER_FAITHFUL:
        beta, iterations, converged = _reweighted_least_squares(data, beta0, opts)
    else:
        beta, iterations, converged = _likelihood_consistent(data, beta0, opts)

    mu = mean_response(data.X, beta)
    xtwx = weighted_crossproduct(data, mu)
    std_errors = np.sqrt(np.clip(np.diag(inv_spd(xtwx)) * data.zeta, 0.0, None))
    if not converged:
        logger.warning("MLE did not converge", mode=opts.mode.value, iterations=iterations)
    return FitResult(
        beta_hat=beta,
        std_errors=std_errors,
        mu_hat=mu,
        iterations=iterations,
        converged=converged,
        estimator_tag=EstimatorTag.MLE,
        mode=opts.mode,
    )


def mle_std_errors(
    data: Dataset, fit: FitResult, method: Literal["weighted", "expected"] = "weighted"
) -> np.ndarray:
    """
    Standard errors of an MLE fit.

    ``weighted`` is sqrt diag of ζ (Xᵀ diag(μ̂²) X)⁻¹, ``expected`` uses the
    Fisher information of the stated likelihood, ζ (XᵀX)⁻¹.

    Raises:
        ContractError: If the fit did not converge or the method is unknown
    """
    if not fit.converged:
        raise ContractError("standard errors need a converged MLE fit")
    if method == "weighted":
        cov = inv_spd(weighted_crossproduct(data, fit.mu_hat))
    elif method == "expected":
        cov = inv_spd(data.X.T @ data.X)
    else:
        raise ContractError(f"unknown standard error method: {method}")
    return np.sqrt(np.clip(np.diag(cov) * data.zeta, 0.0, None))


def canonical_form(
    data: Dataset, fit: FitResult, convention: Literal["transpose", "direct"] = "transpose"
) -> CanonicalForm:
    """
    Eigendecomposition of Xᵀ diag(μ̂²) X with the MLE in eigen-coordinates.

    ``convention="transpose"`` gives α = Λᵀβ̂; ``"direct"`` gives α = Λβ̂.

    Raises:
        SingularityError: If the weighted cross-product has a non-positive eigenvalue
    """
    eig = sym_eigen(weighted_crossproduct(data, fit.mu_hat))
    if eig.min <= 0:
        raise SingularityError(f"weighted cross-product has eigenvalue {eig.min:.3e}")
    vectors = eig.eigenvectors
    alpha = vectors.T @ fit.beta_hat if convention == "transpose" else vectors @ fit.beta_hat
    return CanonicalForm(eigenvalues=eig.eigenvalues, eigenvectors=vectors, alpha=alpha)


def ridge_k1(cf: CanonicalForm, zeta: float) -> float:
    """k₁ = λ_min ζ / min_j α_j²."""
    if cf.alpha_min_sq <= 0:
        raise DegeneratePenaltyError("some canonical coefficient is zero, k1 undefined")
    return cf.lambda_min * zeta / cf.alpha_min_sq


def ridge_k2(cf: CanonicalForm, zeta: float, n: int, p: int) -> float:
    """k₂ = max_j λ_max / ((n − p)ζ + λ_j α_j²)."""
    denominators = (n - p) * zeta + cf.eigenvalues * cf.alpha**2
    if np.any(denominators <= 0):
        raise DegeneratePenaltyError("non-positive denominator in k2")
    return float(np.max(cf.lambda_max / denominators))


def fit_ridge(
    data: Dataset,
    mle_fit: FitResult,
    k: float | ArrayLike,
    tag: EstimatorTag = EstimatorTag.CUSTOM_RIDGE,
) -> FitResult:
    """
    Gamma ridge estimator (XᵀWX + diag(k))⁻¹ XᵀWX β̂_MLE with W = diag(μ̂²).

    Args:
        data: Dataset the MLE was fitted on
        mle_fit: Converged MLE fit supplying β̂ and μ̂
        k: Non-negative scalar (expanded to k·I) or per-coefficient penalties
        tag: Estimator tag for the result

    Returns:
        FitResult with sandwich standard errors ζ A⁻¹ XᵀWX A⁻¹, A = XᵀWX + diag(k)
    """
    if not mle_fit.converged:
        raise ContractError("ridge estimator needs a converged MLE fit")
    penalty = np.broadcast_to(np.asarray(k, dtype=float), (data.p,)).copy()
    if np.any(penalty < 0) or not np.all(np.isfinite(penalty)):
        raise ContractError("ridge penalty must be finite and non-negative")

    xtwx = weighted_crossproduct(data, mle_fit.mu_hat)
    a_k = xtwx + np.diag(penalty)
    beta = solve_spd(a_k, xtwx @ mle_fit.beta_hat)
    a_inv = inv_spd(a_k)
    cov = data.zeta * a_inv @ xtwx @ a_inv
    std_errors = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return FitResult(
        beta_hat=beta,
        std_errors=std_errors,
        mu_hat=mean_response(data.X, beta),
        iterations=mle_fit.iterations,
        converged=True,
        estimator_tag=tag,
        mode=mle_fit.mode,
        penalty=penalty,
    )
