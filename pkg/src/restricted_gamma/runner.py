"""End-to-end fit, simulate and diagnose workflows."""

import logging
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
import structlog

from .bayes import (
    McmcConfig,
    PriorSpec,
    default_hyperparameters,
    run_begrc,
    run_beugrc,
    summarize,
)
from .config.models import RunConfig
from .constraints import LinearRestrictions
from .diagnostics import (
    correlation_matrix,
    gamma_goodness_of_fit,
    multicollinearity_condition_number,
)
from .errors import ConfigurationError, ContractError, ConvergenceError
from .ingest import INTERCEPT_NAME, load_csv
from .models.data import Chain, Dataset, EstimatorTag, FitResult
from .numerics import RngStream
from .output import (
    build_manifest,
    estimates_frame,
    estimates_table,
    mse_table,
    scenario_frame,
    sd_bias_table,
    write_frame,
    write_json,
    write_manifest,
)
from .regression import (
    MleOptions,
    canonical_form,
    fit_mle,
    fit_ridge,
    mean_response,
    mle_std_errors,
    ridge_k1,
    ridge_k2,
)
from .simulation import run_grid

logger = structlog.get_logger(__name__)

BEUGRC_SLOT = 1
BEGRC_SLOT = 2
BOOTSTRAP_SLOT = 3


class Runner:
    """Runs one configured workflow and writes its reports."""

    def __init__(self, config: RunConfig, log_level: int = logging.WARNING):
        """
        Initialize the runner.

        Args:
            config: Validated run configuration
            log_level: Level installed in simulation worker processes
        """
        self.config = config
        self.log_level = log_level
        self.out_dir = Path(config.output.path).expanduser()

    @property
    def mle_options(self) -> MleOptions:
        mle = self.config.mle
        return MleOptions(max_iter=mle.max_iter, tol=mle.tol, mode=mle.mode)

    @property
    def mcmc_config(self) -> McmcConfig:
        mcmc = self.config.mcmc
        return McmcConfig(
            n_iter=mcmc.n_iter,
            burn_in=mcmc.burn_in,
            proposal_mode=mcmc.proposal_mode,
            proposal_form=mcmc.proposal_form,
            proposal_scale=mcmc.proposal_scale,
            seed=self.config.seed,
        )

    def _load(self) -> Dataset:
        cfg = self.config
        if cfg.data is None:
            raise ConfigurationError("no dataset configured (data)")
        if cfg.zeta is None:
            raise ConfigurationError("zeta must be configured for a real dataset")
        return load_csv(
            cfg.data,
            cfg.response,
            cfg.covariates,
            intercept=cfg.intercept,
            zeta=cfg.zeta,
            standardize=cfg.standardize,
        )

    def _fit_mle(self, data: Dataset) -> FitResult:
        fit = fit_mle(data, self.mle_options)
        if not fit.converged:
            raise ConvergenceError(
                f"MLE ({fit.mode.value if fit.mode else ''}) did not converge "
                f"in {fit.iterations} iterations"
            )
        return fit

    def _stream(self, slot: int) -> np.random.Generator:
        return RngStream.for_key(self.config.seed, slot).generator()

    def fit(self) -> int:
        """Fit every configured estimator on the dataset and write the estimates."""
        cfg = self.config
        data = self._load()
        mle = self._fit_mle(data)
        mle = FitResult(
            beta_hat=mle.beta_hat,
            std_errors=mle_std_errors(data, mle, cfg.mle.std_errors),
            mu_hat=mle.mu_hat,
            iterations=mle.iterations,
            converged=mle.converged,
            estimator_tag=mle.estimator_tag,
            mode=mle.mode,
        )
        details: dict[str, Any] = {
            "n": data.n,
            "p": data.p,
            "covariates": list(data.covariate_names),
            "mle_iterations": mle.iterations,
            "mle_converged": mle.converged,
        }
        fits: list[FitResult] = []
        chains: dict[str, Chain] = {}
        tags = list(cfg.estimators)
        if cfg.ridge_k is not None and EstimatorTag.CUSTOM_RIDGE not in tags:
            tags.append(EstimatorTag.CUSTOM_RIDGE)

        for tag in tags:
            log = logger.bind(estimator=tag.value)
            if tag == EstimatorTag.MLE:
                fits.append(mle)
            elif tag in (EstimatorTag.GRE1, EstimatorTag.GRE2):
                cf = canonical_form(data, mle)
                if tag == EstimatorTag.GRE1:
                    k = ridge_k1(cf, data.zeta)
                    details["k1"] = k
                else:
                    k = ridge_k2(cf, data.zeta, data.n, data.p)
                    details["k2"] = k
                fits.append(fit_ridge(data, mle, k, tag))
                log.info("Ridge fitted", k=k)
            elif tag == EstimatorTag.CUSTOM_RIDGE:
                if cfg.ridge_k is None:
                    raise ConfigurationError("custom-ridge needs ridge_k")
                fits.append(fit_ridge(data, mle, cfg.ridge_k, tag))
                details["ridge_k"] = cfg.ridge_k
            else:
                chain = self._posterior(data, mle, tag)
                chains[tag.value] = chain
                summary = summarize(chain)
                fits.append(
                    FitResult(
                        beta_hat=summary.posterior_mean,
                        std_errors=summary.posterior_sd,
                        mu_hat=mean_response(data.X, summary.posterior_mean),
                        iterations=chain.n_iter,
                        converged=True,
                        estimator_tag=tag,
                    )
                )
                details[f"{tag.value}_acceptance_rate"] = chain.acceptance_rate

        names = data.covariate_names
        fmt = cfg.output.format
        write_frame(estimates_frame(fits, names), self.out_dir / "estimates", fmt)
        write_frame(estimates_table(fits, names), self.out_dir / "estimates_table", fmt)
        if chains:
            write_frame(self._posterior_frame(chains, names), self.out_dir / "posterior", fmt)
        write_manifest(self.out_dir, build_manifest(cfg, "fit", **details))
        logger.info("Fit finished", output=str(self.out_dir), estimators=[t.value for t in tags])
        return 0

    def _posterior(self, data: Dataset, mle: FitResult, tag: EstimatorTag) -> Chain:
        mean, cov = default_hyperparameters(data.X)
        if tag == EstimatorTag.BEUGRC:
            return run_beugrc(
                data, PriorSpec(mean, cov), self.mcmc_config, self._stream(BEUGRC_SLOT), mle
            )
        try:
            restrictions = LinearRestrictions.from_rows(
                self.config.restrictions, data.covariate_names
            )
        except ContractError as e:
            raise ConfigurationError(str(e)) from e
        if restrictions.m == 0:
            logger.warning("BEGRC requested without restrictions")
        return run_begrc(
            data,
            PriorSpec(mean, cov, restrictions),
            self.mcmc_config,
            self._stream(BEGRC_SLOT),
            mle,
        )

    @staticmethod
    def _posterior_frame(chains: dict[str, Chain], names: tuple[str, ...]) -> pd.DataFrame:
        rows = []
        for tag, chain in chains.items():
            summary = summarize(chain)
            for j, name in enumerate(names):
                rows.append(
                    {
                        "estimator": tag,
                        "coefficient": name,
                        "mean": summary.posterior_mean[j],
                        "sd": summary.posterior_sd[j],
                        "lower_2.5": summary.lower[j],
                        "upper_97.5": summary.upper[j],
                        "acceptance_rate": chain.acceptance_rate,
                    }
                )
        return pd.DataFrame(rows)

    def simulate(self) -> int:
        """Run the Monte Carlo grid and write the MSE and sd(bias) tables."""
        cfg = self.config
        report = run_grid(
            cfg.grid,
            mle=self.mle_options,
            mcmc=self.mcmc_config,
            workers=cfg.workers,
            log_level=self.log_level,
        )
        fmt = cfg.output.format
        write_frame(mse_table(report), self.out_dir / "mse", fmt)
        write_frame(sd_bias_table(report), self.out_dir / "sd_bias", fmt)
        write_frame(scenario_frame(report), self.out_dir / "scenario", fmt)
        write_manifest(
            self.out_dir,
            build_manifest(
                cfg,
                "simulate",
                cells=len(report.cells),
                total_failures=report.total_failures,
            ),
        )
        dead = [c for c in report.cells if c.failures == c.replications]
        if dead:
            c = dead[0]
            raise ConvergenceError(
                f"every replication failed in cell zeta={c.zeta}, n={c.n}, rho={c.rho}, "
                f"estimator={c.estimator.value}"
            )
        return 0

    def diagnose(self) -> int:
        """Goodness of fit, correlation matrix and condition numbers."""
        cfg = self.config
        data = self._load()
        names = list(data.covariate_names)
        keep = [j for j, name in enumerate(names) if name != INTERCEPT_NAME]
        corr = correlation_matrix(data.X[:, keep], [names[j] for j in keep]) if keep else None

        gof = gamma_goodness_of_fit(self._stream(BOOTSTRAP_SLOT), data.y, cfg.diagnostics.bootstrap)
        mle = self._fit_mle(data)
        collinearity = multicollinearity_condition_number(data, mle)

        fmt = cfg.output.format
        if corr is not None:
            corr_frame = pd.DataFrame(corr, columns=[names[j] for j in keep])
            corr_frame.insert(0, "covariate", [names[j] for j in keep])
            write_frame(corr_frame, self.out_dir / "correlation", fmt)
        results = {
            "anderson_darling": {
                "statistic": gof.ad_statistic,
                "p_value": gof.p_value,
                "fitted_shape": gof.fitted_shape,
                "fitted_scale": gof.fitted_scale,
                "n_bootstrap": gof.n_bootstrap,
                "clamped": gof.clamped,
            },
            "condition_number": {
                "weighted": collinearity.weighted,
                "unweighted": collinearity.unweighted,
            },
        }
        write_json(results, self.out_dir / "diagnostics.json")
        write_manifest(self.out_dir, build_manifest(cfg, "diagnose", n=data.n, p=data.p))
        logger.info(
            "Diagnostics finished",
            ad_statistic=gof.ad_statistic,
            p_value=gof.p_value,
            condition_weighted=collinearity.weighted,
            condition_unweighted=collinearity.unweighted,
        )
        return 0

    def run(self, command: Optional[str] = None) -> int:
        command = command or self.config.command
        if command == "fit":
            return self.fit()
        if command == "simulate":
            return self.simulate()
        if command == "diagnose":
            return self.diagnose()
        raise ConfigurationError(f"unknown command: {command!r}")
