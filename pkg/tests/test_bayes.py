"""Tests for priors, the posterior kernel and the Metropolis-Hastings samplers."""

import math

import numpy as np
import pytest
from scipy import stats

from restricted_gamma.bayes import (
    McmcConfig,
    PriorSpec,
    default_hyperparameters,
    default_proposal_cov,
    log_posterior_kernel,
    run_begrc,
    run_beugrc,
    summarize,
)
from restricted_gamma.constraints import LinearRestrictions, TmvnSpec, sample_tmvn
from restricted_gamma.errors import ContractError, SingularityError
from restricted_gamma.models import Chain, Dataset, EstimatorTag, ProposalCovariance, ProposalMode
from restricted_gamma.numerics import RngStream
from restricted_gamma.regression import fit_mle, log_likelihood
from restricted_gamma.simulation import gen_design, gen_response

SHORT = McmcConfig(n_iter=1500, burn_in=300, seed=3)


def _orthonormal(gen, n, p):
    q, _ = np.linalg.qr(gen.normal(size=(n, p)))
    return q


class TestHyperparameters:
    def test_orthonormal_design(self, rng):
        X = _orthonormal(rng, 20, 3)
        mean, cov = default_hyperparameters(X)
        np.testing.assert_array_equal(mean, np.zeros(3))
        np.testing.assert_allclose(cov, np.eye(3), atol=1e-10)

    def test_inverse_residual(self, rng):
        X = rng.normal(size=(30, 4))
        _, cov = default_hyperparameters(X)
        np.testing.assert_allclose(cov @ (X.T @ X), np.eye(4), atol=1e-8)

    def test_singular_design(self):
        X = np.column_stack([np.ones(5), np.ones(5)])
        with pytest.raises(SingularityError):
            default_hyperparameters(X)

    def test_proposal_covariance_orthonormal(self, rng):
        X = _orthonormal(rng, 20, 3)
        data = Dataset(X, np.ones(20), 1.0)
        for form in ProposalCovariance:
            np.testing.assert_allclose(
                default_proposal_cov(data, np.ones(20), form), np.eye(3), atol=1e-10
            )

    def test_proposal_covariance_zeta_scaling(self, rng):
        X = _orthonormal(rng, 20, 3)
        half = Dataset(X, np.ones(20), 0.5)
        np.testing.assert_allclose(default_proposal_cov(half, np.ones(20)), 0.5 * np.eye(3), atol=1e-10)
        weighted = default_proposal_cov(half, np.ones(20), ProposalCovariance.WEIGHTED_CROSSPRODUCT)
        np.testing.assert_allclose(weighted, 2.0 * np.eye(3), atol=1e-10)

    def test_expected_information_ignores_fitted_means(self, gamma_dataset, gamma_fit):
        cov = default_proposal_cov(gamma_dataset, gamma_fit.mu_hat)
        np.testing.assert_allclose(
            cov @ (gamma_dataset.X.T @ gamma_dataset.X) / gamma_dataset.zeta, np.eye(3), atol=1e-8
        )
        np.testing.assert_array_equal(cov, default_proposal_cov(gamma_dataset, 1e3 * gamma_fit.mu_hat))

    def test_weighted_crossproduct_residual(self, gamma_dataset, gamma_fit):
        cov = default_proposal_cov(
            gamma_dataset, gamma_fit.mu_hat, ProposalCovariance.WEIGHTED_CROSSPRODUCT
        )
        xtwx = gamma_dataset.X.T @ (gamma_dataset.X * gamma_fit.mu_hat[:, None] ** 2)
        np.testing.assert_allclose(
            cov @ xtwx * gamma_dataset.zeta, np.eye(3), atol=1e-8
        )


class TestKernel:
    def test_infeasible_is_minus_infinity(self, gamma_dataset):
        prior = PriorSpec(np.zeros(3), np.eye(3), LinearRestrictions(-np.eye(3), -np.ones(3)))
        assert log_posterior_kernel(gamma_dataset, np.zeros(3), prior) == -math.inf

    def test_direct_formula(self):
        X = np.array([[1.0, 0.0], [1.0, 1.0]])
        data = Dataset(X, [2.0, 0.5], 0.5)
        beta = np.array([0.1, -0.2])
        eta = X @ beta
        expected = -np.sum(data.y * np.exp(-eta) + eta) / 0.5 - 0.5 * beta @ beta
        prior = PriorSpec(np.zeros(2), np.eye(2))
        assert log_posterior_kernel(data, beta, prior) == pytest.approx(expected, rel=1e-14)

    def test_differences_match_likelihood(self, gamma_dataset, rng):
        mean, cov = default_hyperparameters(gamma_dataset.X)
        prior = PriorSpec(mean, cov)
        precision = np.linalg.inv(cov)
        for _ in range(20):
            a, b = rng.normal(scale=0.3, size=(2, 3))
            lhs = log_posterior_kernel(gamma_dataset, a, prior) - log_posterior_kernel(
                gamma_dataset, b, prior
            )
            rhs = (log_likelihood(gamma_dataset, a) - log_likelihood(gamma_dataset, b)) - 0.5 * (
                a @ precision @ a - b @ precision @ b
            )
            assert lhs == pytest.approx(rhs, abs=1e-10 * max(1.0, abs(lhs)))


class TestConfig:
    def test_defaults(self):
        cfg = McmcConfig()
        assert (cfg.n_iter, cfg.burn_in, cfg.proposal_scale) == (15000, 2000, 1.0)
        assert cfg.proposal_mode == ProposalMode.PAPER_FAITHFUL_TN
        assert cfg.proposal_form == ProposalCovariance.EXPECTED_INFORMATION

    def test_burn_in_inside_chain(self):
        with pytest.raises(ContractError):
            McmcConfig(n_iter=100, burn_in=100)


def _bounded_prior(data: Dataset, bound: float) -> PriorSpec:
    mean, cov = default_hyperparameters(data.X)
    return PriorSpec(mean, cov, LinearRestrictions(-np.eye(data.p), -bound * np.ones(data.p)))


class TestBegrc:
    @pytest.mark.parametrize("mode", list(ProposalMode))
    def test_every_draw_feasible(self, gamma_dataset, gamma_fit, mode):
        prior = _bounded_prior(gamma_dataset, -0.1)
        cfg = McmcConfig(n_iter=1500, burn_in=300, proposal_mode=mode, seed=1)
        chain = run_begrc(gamma_dataset, prior, cfg, mle_fit=gamma_fit)
        assert chain.estimator_tag == EstimatorTag.BEGRC
        assert chain.proposal_mode == mode
        assert chain.draws.shape == (1500, 3)
        assert all(prior.restrictions.satisfies(d) for d in chain.draws)
        assert 0.0 < chain.acceptance_rate < 1.0

    def test_random_restriction_systems(self, gamma_dataset, gamma_fit):
        gen = np.random.default_rng(17)
        mean, cov = default_hyperparameters(gamma_dataset.X)
        for i in range(10):
            m = 6 if i == 0 else int(gen.integers(1, 6))
            R = gen.normal(size=(m, 3))
            center = gamma_fit.beta_hat + gen.normal(scale=0.2, size=3)
            r = R @ center + gen.uniform(0.05, 0.5, size=m)
            restrictions = LinearRestrictions(R, r)
            cfg = McmcConfig(n_iter=400, burn_in=100, seed=i)
            chain = run_begrc(
                gamma_dataset, PriorSpec(mean, cov, restrictions), cfg, mle_fit=gamma_fit
            )
            assert all(restrictions.satisfies(d) for d in chain.kept)

    def test_tiny_box_confines_posterior(self, gamma_dataset, gamma_fit):
        center = np.array([0.5, 0.3, -0.2])
        half = 0.01
        R = np.vstack([np.eye(3), -np.eye(3)])
        r = np.concatenate([center + half, -(center - half)])
        mean, cov = default_hyperparameters(gamma_dataset.X)
        prior = PriorSpec(mean, cov, LinearRestrictions(R, r))
        summary = summarize(run_begrc(gamma_dataset, prior, SHORT, mle_fit=gamma_fit))
        assert np.all(np.abs(summary.posterior_mean - center) <= half)

    def test_deterministic_under_seed(self, gamma_dataset, gamma_fit):
        prior = _bounded_prior(gamma_dataset, -0.1)
        a = run_begrc(gamma_dataset, prior, SHORT, mle_fit=gamma_fit)
        b = run_begrc(gamma_dataset, prior, SHORT, mle_fit=gamma_fit)
        np.testing.assert_array_equal(a.draws, b.draws)

    def test_unrestricted_random_walk_matches_beugrc(self, gamma_dataset, gamma_fit):
        mean, cov = default_hyperparameters(gamma_dataset.X)
        cfg = McmcConfig(
            n_iter=500, burn_in=100, proposal_mode=ProposalMode.EXACT_INDICATOR_RW, seed=8
        )
        restricted = run_begrc(
            gamma_dataset,
            PriorSpec(mean, cov, LinearRestrictions.unrestricted(3)),
            cfg,
            RngStream(8).generator(),
            gamma_fit,
        )
        free = run_beugrc(gamma_dataset, PriorSpec(mean, cov), cfg, RngStream(8).generator(), gamma_fit)
        np.testing.assert_array_equal(restricted.draws, free.draws)


class TestBeugrc:
    def test_flat_prior_large_sample_agrees_with_mle(self):
        gen = np.random.default_rng(12)
        n = 5000
        X = gen.normal(size=(n, 2))
        beta = np.array([0.5, -0.3])
        y = gen.gamma(4.0, np.exp(X @ beta) * 0.25)
        data = Dataset(X, y, 0.25)
        fit = fit_mle(data)
        prior = PriorSpec(np.zeros(2), 1e6 * np.eye(2))
        chain = run_beugrc(data, prior, McmcConfig(n_iter=3000, burn_in=500, seed=2), mle_fit=fit)
        assert chain.estimator_tag == EstimatorTag.BEUGRC
        np.testing.assert_allclose(summarize(chain).posterior_mean, fit.beta_hat, atol=0.05)

    def test_starts_from_mle_when_not_given(self, gamma_dataset):
        mean, cov = default_hyperparameters(gamma_dataset.X)
        chain = run_beugrc(gamma_dataset, PriorSpec(mean, cov), McmcConfig(n_iter=200, burn_in=50))
        assert chain.n_iter == 200
        assert 0.0 <= chain.acceptance_rate <= 1.0


def _collinear_dataset(seed: int, rho: float, n: int = 25, zeta: float = 0.25) -> Dataset:
    gen = np.random.default_rng(seed)
    X = gen_design(gen, n, 4, rho)
    return Dataset(X, gen_response(gen, X, np.ones(4), zeta), zeta)


def _importance_moments(data: Dataset, prior: PriorSpec, fit, draws: int = 200_000):
    """Self-normalized importance sampling of the unrestricted posterior from a wide t law."""
    center = fit.beta_hat / (1.0 + data.zeta)
    shape = 2.0 * data.zeta / (1.0 + data.zeta) * np.linalg.inv(data.X.T @ data.X)
    proposal = stats.multivariate_t(loc=center, shape=shape, df=5, seed=0)
    B = proposal.rvs(size=draws)
    eta = B @ data.X.T
    loglik = -np.sum(data.y * np.exp(-eta) + eta, axis=1) / data.zeta
    d = B - prior.mean
    log_w = loglik - 0.5 * np.einsum("ij,jk,ik->i", d, prior.precision, d) - proposal.logpdf(B)
    w = np.exp(log_w - log_w.max())
    w /= w.sum()
    mean = w @ B
    sd = np.sqrt(w @ (B - mean) ** 2)
    return mean, sd


class TestPosteriorTargets:
    @pytest.mark.parametrize("rho", [0.8, 0.99])
    def test_beugrc_acceptance_rate(self, rho):
        data = _collinear_dataset(3, rho)
        mean, cov = default_hyperparameters(data.X)
        chain = run_beugrc(data, PriorSpec(mean, cov), McmcConfig(n_iter=3000, burn_in=500, seed=4))
        assert 0.05 < chain.acceptance_rate < 0.95

    def test_beugrc_matches_importance_sampling(self):
        data = _collinear_dataset(11, 0.99)
        fit = fit_mle(data)
        mean, cov = default_hyperparameters(data.X)
        prior = PriorSpec(mean, cov)
        target_mean, target_sd = _importance_moments(data, prior, fit)
        for seed in (1, 2, 3):
            chain = run_beugrc(data, prior, McmcConfig(seed=seed), mle_fit=fit)
            summary = summarize(chain)
            assert np.all(np.abs(summary.posterior_mean - target_mean) < 0.2 * target_sd)
            np.testing.assert_allclose(summary.posterior_sd, target_sd, rtol=0.2)

    def test_begrc_flat_likelihood_is_truncated_prior(self, gamma_dataset):
        data = Dataset(gamma_dataset.X, gamma_dataset.y, 1e8)
        fit = fit_mle(data)
        mean, cov = default_hyperparameters(data.X)
        box = LinearRestrictions(np.vstack([np.eye(3), -np.eye(3)]), np.concatenate([np.ones(3), np.zeros(3)]))
        cfg = McmcConfig(
            n_iter=20_000,
            burn_in=2000,
            proposal_cov=cov,
            proposal_mode=ProposalMode.EXACT_INDICATOR_RW,
            seed=6,
        )
        chain = run_begrc(data, PriorSpec(mean, cov, box), cfg, mle_fit=fit)
        oracle = sample_tmvn(np.random.default_rng(8), TmvnSpec(mean, cov, box), 40_000, burn=100)
        summary = summarize(chain)
        np.testing.assert_allclose(summary.posterior_mean, oracle.mean(axis=0), atol=0.015)
        np.testing.assert_allclose(summary.posterior_sd, oracle.std(axis=0), atol=0.015)


class TestSummarize:
    def test_constant_chain(self):
        draws = np.tile([1.0, -2.0], (300, 1))
        summary = summarize(Chain(draws, 0.0, 100, EstimatorTag.BEUGRC))
        np.testing.assert_array_equal(summary.posterior_mean, [1.0, -2.0])
        np.testing.assert_array_equal(summary.posterior_sd, [0.0, 0.0])
        assert summary.n_draws == 200

    def test_discards_burn_in(self, rng):
        draws = rng.normal(size=(400, 2))
        summary = summarize(Chain(draws, 0.5, 150, EstimatorTag.BEGRC))
        np.testing.assert_allclose(summary.posterior_mean, draws[150:].mean(axis=0))
        assert np.all(summary.lower <= summary.upper)

    def test_too_short(self):
        with pytest.raises(ContractError):
            summarize(Chain(np.zeros((150, 2)), 0.0, 100, EstimatorTag.BEGRC))


# published BEGRC column for the body-fat data, intercept first
BODYFAT_BEGRC = [-0.2492, 0.0016, 0.0042, 0.0107, 0.0172, 0.0441, -0.1636, 0.1459, 0.1240, 0.1938]
BODYFAT_RESTRICTIONS = [
    {"coeffs": {"anthro3a": 1.0}, "bound": 0.0},
    {"coeffs": {"anthro3b": 1.0}, "bound": 0.0, "sense": "ge"},
    {"coeffs": {"anthro3c": 1.0}, "bound": 0.0, "sense": "ge"},
    {"coeffs": {"anthro4": 1.0}, "bound": 0.0, "sense": "ge"},
]


@pytest.mark.slow
class TestBodyFat:
    def test_restricted_posterior_means(self, bodyfat_data):
        fit = fit_mle(bodyfat_data)
        restrictions = LinearRestrictions.from_rows(
            BODYFAT_RESTRICTIONS, bodyfat_data.covariate_names
        )
        mean, cov = default_hyperparameters(bodyfat_data.X)
        chain = run_begrc(
            bodyfat_data, PriorSpec(mean, cov, restrictions), McmcConfig(seed=2024), mle_fit=fit
        )
        assert all(restrictions.satisfies(d) for d in chain.kept)
        summary = summarize(chain)
        np.testing.assert_allclose(summary.posterior_mean, BODYFAT_BEGRC, atol=0.05)
        assert summary.posterior_mean[6] <= 0
        assert np.all(summary.posterior_mean[7:] >= 0)
