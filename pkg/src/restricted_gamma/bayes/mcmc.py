"""Metropolis-Hastings samplers for the restricted and unrestricted posteriors."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import structlog
from numpy.typing import ArrayLike

from ..constraints import LinearRestrictions, TmvnSpec, gibbs_sweep
from ..errors import ContractError, NumericRangeError
from ..models.data import (
    Chain,
    Dataset,
    EstimatorTag,
    FitResult,
    PosteriorSummary,
    ProposalCovariance,
    ProposalMode,
)
from ..numerics import RngStream, cholesky_lower
from ..regression import fit_mle, linear_predictor
from .priors import PriorSpec, default_proposal_cov

logger = structlog.get_logger(__name__)

MIN_KEPT_DRAWS = 100


@dataclass(frozen=True)
class McmcConfig:
    """
    Chain length and proposal settings.

    An explicit ``proposal_cov`` wins over ``proposal_form``, which selects
    ζ(XᵀX)⁻¹ (default) or (1/ζ)(Xᵀ diag(μ̂²) X)⁻¹ at the MLE;
    ``proposal_scale`` multiplies either.
    """

    n_iter: int = 15000
    burn_in: int = 2000
    proposal_cov: Optional[np.ndarray] = field(default=None, compare=False)
    proposal_mode: ProposalMode = ProposalMode.PAPER_FAITHFUL_TN
    proposal_form: ProposalCovariance = ProposalCovariance.EXPECTED_INFORMATION
    proposal_scale: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_iter < 1 or not 0 <= self.burn_in < self.n_iter:
            raise ContractError(f"need 0 <= burn_in < n_iter, got {self.burn_in}, {self.n_iter}")
        if not self.proposal_scale > 0:
            raise ContractError("proposal_scale must be positive")


def log_posterior_kernel(data: Dataset, beta: ArrayLike, prior: PriorSpec) -> float:
    """
    Unnormalized log posterior.

    −(1/ζ) Σ_i [y_i e^{−η_i} + η_i] − ½ (β − μ_β)ᵀ Σ_β⁻¹ (β − μ_β), or −∞ when
    the prior is restricted and β violates the restrictions.

    Raises:
        NumericRangeError: If some |η_i| exceeds the overflow guard
    """
    b = np.asarray(beta, dtype=float).reshape(-1)
    if prior.restrictions is not None and not prior.restrictions.satisfies(b):
        return -math.inf
    eta = linear_predictor(data.X, b)
    loglik = -float(np.sum(data.y * np.exp(-eta) + eta)) / data.zeta
    d = b - prior.mean
    return loglik - 0.5 * float(d @ prior.precision @ d)


def _metropolis(
    data: Dataset,
    prior: PriorSpec,
    cfg: McmcConfig,
    rng: np.random.Generator,
    start: np.ndarray,
    propose: Callable[[np.ndarray], np.ndarray],
    tag: EstimatorTag,
    mode: Optional[ProposalMode],
) -> Chain:
    state = start.copy()
    current = log_posterior_kernel(data, state, prior)
    draws = np.empty((cfg.n_iter, data.p))
    accepted = 0
    for t in range(cfg.n_iter):
        candidate = propose(state)
        log_u = math.log(rng.random())
        try:
            proposed = log_posterior_kernel(data, candidate, prior)
        except NumericRangeError:
            proposed = -math.inf
        if proposed > -math.inf and log_u < proposed - current:
            state, current = candidate, proposed
            accepted += 1
        draws[t] = state
    rate = accepted / cfg.n_iter
    logger.info("Chain finished", estimator=tag.value, n_iter=cfg.n_iter, acceptance_rate=rate)
    return Chain(
        draws=draws,
        acceptance_rate=rate,
        burn_in=cfg.burn_in,
        estimator_tag=tag,
        proposal_mode=mode,
    )


def _resolve(
    data: Dataset, cfg: McmcConfig, mle_fit: Optional[FitResult], rng: Optional[np.random.Generator]
) -> tuple[FitResult, np.ndarray, np.random.Generator]:
    fit = mle_fit if mle_fit is not None else fit_mle(data)
    if cfg.proposal_cov is not None:
        cov = cfg.proposal_cov
    else:
        cov = default_proposal_cov(data, fit.mu_hat, cfg.proposal_form)
    gen = rng if rng is not None else RngStream(cfg.seed).generator()
    return fit, np.asarray(cov, dtype=float) * cfg.proposal_scale, gen


def _random_walk(rng: np.random.Generator, cov: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    chol = cholesky_lower(cov)

    def propose(state: np.ndarray) -> np.ndarray:
        return state + chol @ rng.standard_normal(state.shape[0])

    return propose


def run_begrc(
    data: Dataset,
    prior: PriorSpec,
    cfg: McmcConfig,
    rng: Optional[np.random.Generator] = None,
    mle_fit: Optional[FitResult] = None,
) -> Chain:
    """
    Posterior chain under the truncated prior.

    In ``paper-faithful-tn`` mode each proposal is one Gibbs cycle of
    TN(β⁽ᵗ⁻¹⁾, Σ_pro, R, r) started at the current state and the move is
    accepted as if the proposal were symmetric. In ``exact-indicator-rw`` mode
    the proposal is the untruncated N(β⁽ᵗ⁻¹⁾, Σ_pro) and infeasible proposals
    are rejected through the −∞ kernel.

    Args:
        data: Dataset with known ζ
        prior: Prior carrying the restriction system
        cfg: Chain settings
        rng: Random generator; defaults to the stream of ``cfg.seed``
        mle_fit: MLE fit used for the start and the default proposal covariance

    Returns:
        Chain of length ``cfg.n_iter``; every draw satisfies the restrictions

    Raises:
        FeasibilityUnresolvedError: If no feasible start can be found from β̂_MLE
    """
    restrictions = prior.restrictions or LinearRestrictions.unrestricted(data.p)
    prior = prior.with_restrictions(restrictions)
    fit, cov, gen = _resolve(data, cfg, mle_fit, rng)
    start = restrictions.feasible_start(fit.beta_hat)

    if cfg.proposal_mode == ProposalMode.PAPER_FAITHFUL_TN:
        proposal = TmvnSpec(start, cov, restrictions)

        def propose(state: np.ndarray) -> np.ndarray:
            return gibbs_sweep(gen, proposal.with_mean(state), state)

    else:
        propose = _random_walk(gen, cov)

    logger.debug("Starting restricted chain", mode=cfg.proposal_mode.value, m=restrictions.m)
    return _metropolis(data, prior, cfg, gen, start, propose, EstimatorTag.BEGRC, cfg.proposal_mode)


def run_beugrc(
    data: Dataset,
    prior: PriorSpec,
    cfg: McmcConfig,
    rng: Optional[np.random.Generator] = None,
    mle_fit: Optional[FitResult] = None,
) -> Chain:
    """Posterior chain under the untruncated prior with a normal random-walk proposal."""
    fit, cov, gen = _resolve(data, cfg, mle_fit, rng)
    propose = _random_walk(gen, cov)
    return _metropolis(
        data, prior.without_restrictions(), cfg, gen, fit.beta_hat, propose, EstimatorTag.BEUGRC, None
    )


def summarize(chain: Chain) -> PosteriorSummary:
    """
    Posterior mean, standard deviation and central 95% interval after burn-in.

    Raises:
        ContractError: If fewer than 100 draws remain after burn-in
    """
    kept = chain.kept
    if kept.shape[0] < MIN_KEPT_DRAWS:
        raise ContractError(f"only {kept.shape[0]} draws after burn-in, need {MIN_KEPT_DRAWS}")
    lower, upper = np.quantile(kept, [0.025, 0.975], axis=0)
    return PosteriorSummary(
        posterior_mean=kept.mean(axis=0),
        posterior_sd=kept.std(axis=0, ddof=1),
        lower=lower,
        upper=upper,
        n_draws=int(kept.shape[0]),
    )
