"""Tests for the truncated normal samplers."""

import numpy as np
import pytest
from scipy import stats

from restricted_gamma.constraints import (
    LinearRestrictions,
    TmvnSpec,
    gibbs_sweep,
    sample_tmvn,
    sample_tn_univariate,
)
from restricted_gamma.errors import (
    ContractError,
    DegenerateTruncationError,
    InfeasibleStateError,
)

INF = np.inf

# interior, one-sided, narrow and far-tail truncations
UNIVARIATE_CASES = [
    (0.0, 1.0, -INF, INF),
    (0.0, 1.0, 0.0, INF),
    (0.0, 1.0, -1.0, 1.0),
    (0.0, 1.0, 2.0, 3.0),
    (0.0, 1.0, -5.0, -4.0),
    (1.0, 2.0, -INF, 0.0),
    (0.0, 1.0, 0.1, 0.3),
    (0.0, 1.0, 4.0, INF),
    (0.0, 1.0, -INF, -6.0),
    (2.0, 0.5, -1.0, 1.9),
    (0.0, 1.0, -0.2, 0.2),
    (0.0, 1.0, 8.0, 8.5),
]


def _ks(draws, mu, sigma, lo, hi):
    a, b = (lo - mu) / sigma, (hi - mu) / sigma
    return stats.kstest(draws, stats.truncnorm(a, b, loc=mu, scale=sigma).cdf).statistic


BOX = LinearRestrictions(
    np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]), np.array([1.0, 1.0, 0.0, 0.0])
)
BOX_COV = np.array([[1.0, 0.5], [0.5, 1.0]])


def _box_oracle(n: int) -> np.ndarray:
    gen = np.random.default_rng(99)
    draws = gen.multivariate_normal(np.zeros(2), BOX_COV, size=n)
    keep = np.all((draws >= 0) & (draws <= 1), axis=1)
    return draws[keep]


class TestUnivariate:
    @pytest.mark.parametrize("mu,sigma,lo,hi", UNIVARIATE_CASES)
    def test_matches_truncated_cdf(self, rng, mu, sigma, lo, hi):
        draws = sample_tn_univariate(rng, mu, sigma, lo, hi, size=20_000)
        assert np.all((draws >= lo) & (draws <= hi))
        assert _ks(draws, mu, sigma, lo, hi) < 0.02

    @pytest.mark.slow
    @pytest.mark.parametrize("mu,sigma,lo,hi", UNIVARIATE_CASES)
    def test_matches_truncated_cdf_large(self, rng, mu, sigma, lo, hi):
        draws = sample_tn_univariate(rng, mu, sigma, lo, hi, size=100_000)
        assert _ks(draws, mu, sigma, lo, hi) < 0.01

    def test_half_normal_mean(self, rng):
        draws = sample_tn_univariate(rng, 0.0, 1.0, 0.0, INF, size=100_000)
        assert draws.mean() == pytest.approx(np.sqrt(2 / np.pi), abs=0.01)

    def test_untruncated_mean(self, rng):
        draws = sample_tn_univariate(rng, 0.0, 1.0, -INF, INF, size=100_000)
        assert abs(draws.mean()) < 0.02

    def test_scalar_draw(self, rng):
        x = sample_tn_univariate(rng, 0.0, 1.0, 0.5, 0.6)
        assert isinstance(x, float)
        assert 0.5 <= x <= 0.6

    def test_contract_errors(self, rng):
        with pytest.raises(ContractError):
            sample_tn_univariate(rng, 0.0, 1.0, 1.0, 1.0)
        with pytest.raises(ContractError):
            sample_tn_univariate(rng, 0.0, 0.0, 0.0, 1.0)

    def test_no_mass(self, rng):
        with pytest.raises(DegenerateTruncationError):
            sample_tn_univariate(rng, 0.0, 1.0, 40.0, 41.0)


class TestTmvnSpec:
    def test_precision_cached(self):
        spec = TmvnSpec(np.zeros(2), BOX_COV, BOX)
        np.testing.assert_allclose(spec.precision @ spec.covariance, np.eye(2), atol=1e-12)
        moved = spec.with_mean([0.5, 0.5])
        np.testing.assert_array_equal(moved.precision, spec.precision)
        np.testing.assert_array_equal(moved.mean, [0.5, 0.5])

    def test_recentring_shares_factorization(self, monkeypatch):
        spec = TmvnSpec(np.zeros(2), BOX_COV, BOX)

        def fail(*args, **kwargs):
            raise AssertionError("re-centring must not refactorize")

        monkeypatch.setattr("restricted_gamma.constraints.tmvn.inv_spd", fail)
        monkeypatch.setattr("restricted_gamma.constraints.tmvn.cholesky_lower", fail)
        moved = spec.with_mean(np.array([0.2, 0.7]))
        assert moved.precision is spec.precision
        assert moved.covariance is spec.covariance
        assert moved.restrictions is spec.restrictions
        with pytest.raises(ContractError):
            spec.with_mean(np.zeros(3))

    def test_rejects_wrong_precision(self):
        with pytest.raises(ContractError):
            TmvnSpec(np.zeros(2), BOX_COV, BOX, precision=np.eye(2))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ContractError):
            TmvnSpec(np.zeros(3), np.eye(3), BOX)


class TestGibbs:
    def test_sweep_rejects_infeasible_state(self, rng):
        spec = TmvnSpec(np.zeros(2), BOX_COV, BOX)
        with pytest.raises(InfeasibleStateError):
            gibbs_sweep(rng, spec, np.array([2.0, 0.5]))

    def test_single_coordinate_reduces_to_univariate(self, rng):
        spec = TmvnSpec(np.zeros(1), np.eye(1), LinearRestrictions(-np.eye(1), np.array([-0.8])))
        draws = sample_tmvn(rng, spec, 20_000, burn=10)[:, 0]
        assert np.all(draws >= 0.8)
        assert draws.mean() == pytest.approx(stats.truncnorm(0.8, INF).mean(), abs=0.02)

    def test_unrestricted_moments(self, rng):
        mean = np.array([1.0, -2.0])
        spec = TmvnSpec(mean, BOX_COV, LinearRestrictions.unrestricted(2))
        draws = sample_tmvn(rng, spec, 20_000, burn=10)
        np.testing.assert_allclose(draws.mean(axis=0), mean, atol=0.05)
        np.testing.assert_allclose(np.cov(draws, rowvar=False), BOX_COV, atol=0.06)

    def test_box_matches_rejection_oracle(self, rng):
        spec = TmvnSpec(np.zeros(2), BOX_COV, BOX)
        draws = sample_tmvn(rng, spec, 20_000, burn=100)
        assert all(BOX.satisfies(d) for d in draws)
        oracle = _box_oracle(200_000)
        np.testing.assert_allclose(draws.mean(axis=0), oracle.mean(axis=0), atol=0.02)
        np.testing.assert_allclose(
            np.cov(draws, rowvar=False), np.cov(oracle, rowvar=False), atol=0.05
        )

    @pytest.mark.slow
    def test_box_matches_rejection_oracle_large(self, rng):
        spec = TmvnSpec(np.zeros(2), BOX_COV, BOX)
        draws = sample_tmvn(rng, spec, 100_000, burn=100)
        oracle = _box_oracle(1_000_000)
        np.testing.assert_allclose(draws.mean(axis=0), oracle.mean(axis=0), atol=0.02)
        np.testing.assert_allclose(
            np.cov(draws, rowvar=False), np.cov(oracle, rowvar=False), atol=0.05
        )

    def test_chains_from_different_starts_agree(self):
        spec = TmvnSpec(np.zeros(2), BOX_COV, BOX)
        a = sample_tmvn(np.random.default_rng(1), spec, 10_000, burn=0, init=[0.05, 0.05])
        b = sample_tmvn(np.random.default_rng(2), spec, 10_000, burn=0, init=[0.95, 0.95])
        np.testing.assert_allclose(a.mean(axis=0), b.mean(axis=0), atol=0.03)

    def test_triangle_with_more_rows_than_coordinates(self, rng):
        triangle = LinearRestrictions(
            np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]]), np.array([0.0, 0.0, 1.0])
        )
        spec = TmvnSpec(np.array([2.0, -1.0]), np.eye(2), triangle)
        draws = sample_tmvn(rng, spec, 2_000, burn=50, thin=2)
        assert all(triangle.satisfies(d) for d in draws)

    def test_default_init_is_feasible_start(self, rng):
        spec = TmvnSpec(np.zeros(2), np.eye(2), LinearRestrictions(-np.eye(2), -np.ones(2)))
        draws = sample_tmvn(rng, spec, 10, burn=0)
        assert np.all(draws >= 1.0)

    def test_rejects_infeasible_init(self, rng):
        spec = TmvnSpec(np.zeros(2), BOX_COV, BOX)
        with pytest.raises(InfeasibleStateError):
            sample_tmvn(rng, spec, 5, init=[3.0, 3.0])

    def test_deterministic_under_seed(self):
        spec = TmvnSpec(np.zeros(2), BOX_COV, BOX)
        a = sample_tmvn(np.random.default_rng(4), spec, 50)
        b = sample_tmvn(np.random.default_rng(4), spec, 50)
        np.testing.assert_array_equal(a, b)
