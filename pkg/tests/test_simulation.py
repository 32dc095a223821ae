"""Tests for design generation, replication aggregation and the grid runner."""

import numpy as np
import pytest

from restricted_gamma.bayes import McmcConfig
from restricted_gamma.config import ScenarioGrid
from restricted_gamma.errors import ContractError
from restricted_gamma.models import EstimatorTag
from restricted_gamma.simulation import (
    ScenarioCell,
    aggregate_cell,
    gen_design,
    gen_response,
    grid_cells,
    run_grid,
    run_scenario,
)

QUICK_MCMC = McmcConfig(n_iter=400, burn_in=100)


def _cell(**kwargs) -> ScenarioCell:
    values = dict(
        zeta=0.25, n=40, rho=0.5, beta_true=(1.0, 1.0, 1.0), replications=5, restriction_bound=0.8
    )
    values.update(kwargs)
    return ScenarioCell(**values)


class TestDesign:
    def test_independent_columns(self, rng):
        X = gen_design(rng, 20000, 3, 0.0)
        corr = np.corrcoef(X, rowvar=False)
        np.testing.assert_allclose(corr, np.eye(3), atol=0.03)
        np.testing.assert_allclose(X.var(axis=0), np.ones(3), atol=0.05)

    @pytest.mark.parametrize("rho", [0.5, 0.9, 0.99])
    def test_pairwise_correlation(self, rng, rho):
        X = gen_design(rng, 20000, 4, rho)
        corr = np.corrcoef(X, rowvar=False)
        off = corr[~np.eye(4, dtype=bool)]
        np.testing.assert_allclose(off, rho**2, atol=0.02)
        np.testing.assert_allclose(X.var(axis=0), np.ones(4), atol=0.05)

    @pytest.mark.parametrize("rho", [-0.1, 1.0])
    def test_rho_range(self, rng, rho):
        with pytest.raises(ContractError):
            gen_design(rng, 10, 2, rho)

    def test_response_moments(self, rng):
        n = 100000
        X = np.ones((n, 1))
        y = gen_response(rng, X, [np.log(2.0)], 0.25)
        assert np.all(y > 0)
        assert y.mean() == pytest.approx(2.0, abs=0.02)
        assert y.var() == pytest.approx(0.25 * 4.0, abs=0.03)


class TestGridCells:
    def test_nesting_order(self):
        grid = ScenarioGrid(zetas=[0.25, 0.5], ns=[10, 20], rhos=[0.8, 0.9], beta_true=[1.0, 1.0])
        cells = list(grid_cells(grid))
        assert len(cells) == 8
        assert [c.index for c in cells[:3]] == [(0, 0, 0), (0, 0, 1), (0, 1, 0)]
        assert (cells[-1].zeta, cells[-1].n, cells[-1].rho) == (0.5, 20, 0.9)
        assert all(c.beta_true == (1.0, 1.0) for c in cells)


class TestAggregate:
    def test_exact_estimates(self):
        cell = _cell()
        report = aggregate_cell(cell, EstimatorTag.MLE, [np.ones(3)] * 5)
        assert report.mse == 0.0
        np.testing.assert_array_equal(report.bias, np.zeros(3))
        np.testing.assert_array_equal(report.sd, np.zeros(3))
        assert (report.failures, report.replications) == (0, 5)

    def test_mse_decomposition(self, rng):
        cell = _cell()
        estimates = list(1.0 + rng.normal(scale=0.3, size=(12, 3)) + 0.1)
        report = aggregate_cell(cell, EstimatorTag.GRE1, estimates)
        reps = len(estimates)
        decomposed = float(np.sum(report.bias**2) + (reps - 1) / reps * np.sum(report.sd**2))
        assert report.mse == pytest.approx(decomposed, rel=1e-12)

    def test_failures_are_excluded(self):
        cell = _cell()
        estimates = [np.full(3, 2.0), None, np.full(3, 0.0), None]
        report = aggregate_cell(cell, EstimatorTag.BEGRC, estimates)
        assert report.failures == 2
        assert report.replications == 4
        assert report.mse == pytest.approx(3.0)

    def test_single_success_has_no_sd(self):
        report = aggregate_cell(_cell(), EstimatorTag.MLE, [np.ones(3), None])
        assert np.all(np.isnan(report.sd))
        assert report.mse == 0.0

    def test_all_failed(self):
        report = aggregate_cell(_cell(), EstimatorTag.MLE, [None, None])
        assert np.isnan(report.mse)
        assert report.failures == 2


class TestRunners:
    def test_scenario_reports_every_estimator(self):
        tags = [EstimatorTag.MLE, EstimatorTag.GRE1, EstimatorTag.GRE2]
        reports = run_scenario(_cell(), tags, base_seed=11)
        assert [r.estimator for r in reports] == tags
        assert all(r.failures == 0 for r in reports)
        assert all(np.isfinite(r.mse) for r in reports)

    def test_ridge_shrinks_under_collinearity(self):
        cell = _cell(n=25, rho=0.99, replications=30)
        reports = run_scenario(cell, [EstimatorTag.MLE, EstimatorTag.GRE2], base_seed=5)
        assert reports[1].mse <= reports[0].mse

    def test_deterministic_across_workers(self):
        grid = ScenarioGrid(
            zetas=[0.25],
            ns=[30],
            rhos=[0.5, 0.9],
            beta_true=[1.0, 1.0, 1.0],
            replications=3,
            base_seed=7,
            estimators=[EstimatorTag.MLE, EstimatorTag.GRE1, EstimatorTag.BEGRC],
        )
        serial = run_grid(grid, mcmc=QUICK_MCMC, workers=1)
        parallel = run_grid(grid, mcmc=QUICK_MCMC, workers=2)
        assert len(serial.cells) == 6
        for a, b in zip(serial.cells, parallel.cells):
            assert (a.rho, a.estimator) == (b.rho, b.estimator)
            assert a.mse == b.mse
            np.testing.assert_array_equal(a.bias, b.bias)

    def test_seed_changes_results(self):
        grid = ScenarioGrid(
            zetas=[0.5], ns=[20], rhos=[0.8], beta_true=[1.0, 1.0], replications=3,
            estimators=[EstimatorTag.MLE],
        )
        a = run_grid(grid.model_copy(update={"base_seed": 1}))
        b = run_grid(grid.model_copy(update={"base_seed": 2}))
        assert a.cells[0].mse != b.cells[0].mse

    def test_cell_lookup(self):
        grid = ScenarioGrid(
            zetas=[0.25], ns=[20], rhos=[0.8], beta_true=[1.0, 1.0], replications=2, base_seed=0,
            estimators=[EstimatorTag.MLE],
        )
        report = run_grid(grid)
        assert report.cell(0.25, 20, 0.8, EstimatorTag.MLE) is report.cells[0]


@pytest.mark.slow
class TestCollinearStudy:
    RHOS = [0.8, 0.9, 0.95, 0.99]

    def _grid(self, estimators, seed, replications=100):
        return ScenarioGrid(
            zetas=[0.25],
            ns=[25],
            rhos=self.RHOS,
            beta_true=[1.0, 1.0, 1.0, 1.0],
            replications=replications,
            base_seed=seed,
            estimators=estimators,
            restriction_bound=0.8,
        )

    def test_desk_scale_mse(self):
        tags = [EstimatorTag.MLE, EstimatorTag.BEUGRC, EstimatorTag.BEGRC]
        report = run_grid(self._grid(tags, seed=2024), workers=4)
        for rho in self.RHOS:
            mle, beugrc, begrc = (report.cell(0.25, 25, rho, tag) for tag in tags)
            assert begrc.mse < beugrc.mse
            if rho >= 0.95:
                assert begrc.mse < mle.mse
        mle, beugrc, begrc = (report.cell(0.25, 25, 0.99, tag) for tag in tags)
        # ζ·tr E[(XᵀX)⁻¹] is about 1.9 for this design
        assert 1.5 <= mle.mse <= 7.0
        assert beugrc.mse < mle.mse
        # the N(0, (XᵀX)⁻¹) prior pulls posterior means to about β̂/(1 + ζ)
        assert begrc.mse <= 0.2
        assert beugrc.bias.mean() < -0.1

    def test_mle_error_grows_with_correlation(self):
        totals = np.zeros(len(self.RHOS))
        for seed in range(5):
            report = run_grid(self._grid([EstimatorTag.MLE], seed=seed), workers=4)
            totals += [c.mse for c in report.cells]
        assert list(totals) == sorted(totals)
