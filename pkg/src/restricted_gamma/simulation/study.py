"""Replication sweeps over the (ζ, n, ρ) grid and their aggregation."""

import logging
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog

from ..bayes import (
    McmcConfig,
    PriorSpec,
    default_hyperparameters,
    run_begrc,
    run_beugrc,
    summarize,
)
from ..config.models import ScenarioGrid
from ..constraints import LinearRestrictions
from ..errors import RestrictedGammaError
from ..logs import configure_logging
from ..models.data import CellReport, Dataset, EstimatorTag, ScenarioReport
from ..numerics import RngStream
from ..regression import MleOptions, canonical_form, fit_mle, fit_ridge, ridge_k1, ridge_k2
from .design import gen_design, gen_response

logger = structlog.get_logger(__name__)

DATA_SLOT = 0
BEUGRC_SLOT = 1
BEGRC_SLOT = 2


@dataclass(frozen=True)
class ScenarioCell:
    """One (ζ, n, ρ) combination with its grid indices."""

    zeta: float
    n: int
    rho: float
    beta_true: tuple[float, ...]
    replications: int
    restriction_bound: float
    index: tuple[int, int, int] = (0, 0, 0)


@dataclass(frozen=True)
class _Job:
    cell: ScenarioCell
    replication: int
    estimators: tuple[EstimatorTag, ...]
    base_seed: int
    mle: MleOptions
    mcmc: McmcConfig


def grid_cells(grid: ScenarioGrid) -> Iterator[ScenarioCell]:
    """Cells in (ζ, n, ρ) nesting order."""
    for zi, zeta in enumerate(grid.zetas):
        for ni, n in enumerate(grid.ns):
            for ri, rho in enumerate(grid.rhos):
                yield ScenarioCell(
                    zeta=zeta,
                    n=n,
                    rho=rho,
                    beta_true=tuple(grid.beta_true),
                    replications=grid.replications,
                    restriction_bound=grid.restriction_bound,
                    index=(zi, ni, ri),
                )


def _stream(job: _Job, slot: int) -> np.random.Generator:
    return RngStream.for_key(job.base_seed, *job.cell.index, job.replication, slot).generator()


def run_replication(job: _Job) -> dict[EstimatorTag, Optional[np.ndarray]]:
    """
    Simulate one dataset and fit every requested estimator on it.

    A missing estimate (None) marks a failed fit; when the MLE does not
    converge every estimator of the replication fails.
    """
    cell = job.cell
    beta_true = np.asarray(cell.beta_true)
    p = beta_true.shape[0]
    rng = _stream(job, DATA_SLOT)
    X = gen_design(rng, cell.n, p, cell.rho)
    y = gen_response(rng, X, beta_true, cell.zeta)
    out: dict[EstimatorTag, Optional[np.ndarray]] = {tag: None for tag in job.estimators}

    log = logger.bind(zeta=cell.zeta, n=cell.n, rho=cell.rho, replication=job.replication)
    try:
        data = Dataset(X, y, cell.zeta)
        fit = fit_mle(data, job.mle)
    except RestrictedGammaError as e:
        log.warning("Replication failed", error=str(e))
        return out
    if not fit.converged:
        log.warning("Replication failed", error="MLE did not converge")
        return out

    for tag in job.estimators:
        try:
            if tag == EstimatorTag.MLE:
                out[tag] = fit.beta_hat
            elif tag in (EstimatorTag.GRE1, EstimatorTag.GRE2):
                cf = canonical_form(data, fit)
                k = (
                    ridge_k1(cf, data.zeta)
                    if tag == EstimatorTag.GRE1
                    else ridge_k2(cf, data.zeta, data.n, data.p)
                )
                out[tag] = fit_ridge(data, fit, k, tag).beta_hat
            elif tag in (EstimatorTag.BEUGRC, EstimatorTag.BEGRC):
                mean, cov = default_hyperparameters(data.X)
                if tag == EstimatorTag.BEUGRC:
                    chain = run_beugrc(
                        data, PriorSpec(mean, cov), job.mcmc, _stream(job, BEUGRC_SLOT), fit
                    )
                else:
                    # β_j ≥ bound for every j
                    restrictions = LinearRestrictions(
                        -np.eye(p), -cell.restriction_bound * np.ones(p)
                    )
                    chain = run_begrc(
                        data,
                        PriorSpec(mean, cov, restrictions),
                        job.mcmc,
                        _stream(job, BEGRC_SLOT),
                        fit,
                    )
                out[tag] = summarize(chain).posterior_mean
        except RestrictedGammaError as e:
            log.warning("Estimator failed", estimator=tag.value, error=str(e))
    return out


def aggregate_cell(
    cell: ScenarioCell, estimator: EstimatorTag, estimates: Sequence[Optional[np.ndarray]]
) -> CellReport:
    """
    Reduce replication estimates to MSE, bias and sample standard deviation.

    MSE averages ‖β̂_k − β_true‖² over the successful replications; the
    standard deviation uses the reps − 1 divisor and is NaN below two successes.
    """
    beta_true = np.asarray(cell.beta_true)
    p = beta_true.shape[0]
    ok = [e for e in estimates if e is not None]
    failures = len(estimates) - len(ok)
    if ok:
        B = np.vstack(ok)
        mse = float(np.mean(np.sum((B - beta_true) ** 2, axis=1)))
        bias = B.mean(axis=0) - beta_true
        sd = B.std(axis=0, ddof=1) if len(ok) > 1 else np.full(p, np.nan)
    else:
        mse, bias, sd = float("nan"), np.full(p, np.nan), np.full(p, np.nan)
    return CellReport(
        zeta=cell.zeta,
        n=cell.n,
        rho=cell.rho,
        estimator=estimator,
        mse=mse,
        bias=bias,
        sd=sd,
        failures=failures,
        replications=len(estimates),
    )


def _execute(jobs: list[_Job], workers: int, log_level: int) -> Iterable[dict]:
    if workers <= 1:
        return map(run_replication, jobs)
    executor = ProcessPoolExecutor(
        max_workers=workers, initializer=configure_logging, initargs=(log_level,)
    )
    with executor:
        # map preserves submission order, so aggregation is independent of scheduling
        return list(executor.map(run_replication, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def _run_cells(
    cells: list[ScenarioCell],
    estimators: Sequence[EstimatorTag],
    base_seed: int,
    mle: MleOptions,
    mcmc: McmcConfig,
    workers: int,
    log_level: int,
) -> list[CellReport]:
    tags = tuple(estimators)
    jobs = [
        _Job(cell, k, tags, base_seed, mle, mcmc)
        for cell in cells
        for k in range(cell.replications)
    ]
    results = list(_execute(jobs, workers, log_level))

    reports: list[CellReport] = []
    offset = 0
    for cell in cells:
        block = results[offset : offset + cell.replications]
        offset += cell.replications
        for tag in tags:
            report = aggregate_cell(cell, tag, [r[tag] for r in block])
            reports.append(report)
            logger.info(
                "Cell aggregated",
                zeta=cell.zeta,
                n=cell.n,
                rho=cell.rho,
                estimator=tag.value,
                mse=report.mse,
                failures=report.failures,
            )
    return reports


def run_scenario(
    cell: ScenarioCell,
    estimators: Sequence[EstimatorTag],
    base_seed: int = 0,
    mle: Optional[MleOptions] = None,
    mcmc: Optional[McmcConfig] = None,
    workers: int = 1,
    log_level: int = logging.WARNING,
) -> list[CellReport]:
    """
    Run every replication of one cell and aggregate per estimator.

    Replication k of cell (i_ζ, i_n, i_ρ) draws its data from the stream keyed
    (base_seed; i_ζ, i_n, i_ρ, k, 0) and its chains from slots 1 and 2, so the
    result does not depend on ``workers``.
    """
    return _run_cells(
        [cell], estimators, base_seed, mle or MleOptions(), mcmc or McmcConfig(), workers, log_level
    )


def run_grid(
    grid: ScenarioGrid,
    mle: Optional[MleOptions] = None,
    mcmc: Optional[McmcConfig] = None,
    workers: int = 1,
    log_level: int = logging.WARNING,
) -> ScenarioReport:
    """
    Run the whole grid.

    Args:
        grid: Grid values, replication count and estimators
        mle: MLE options for every replication
        mcmc: Chain settings for the Bayesian estimators
        workers: Worker processes; 1 runs in-process
        log_level: Logging level installed in worker processes

    Returns:
        ScenarioReport with one cell per (ζ, n, ρ, estimator) in grid order
    """
    base_seed = grid.base_seed or 0
    cells = list(grid_cells(grid))
    logger.info(
        "Running simulation grid",
        cells=len(cells),
        replications=grid.replications,
        estimators=[t.value for t in grid.estimators],
        workers=workers,
    )
    reports = _run_cells(
        cells,
        grid.estimators,
        base_seed,
        mle or MleOptions(),
        mcmc or McmcConfig(),
        workers,
        log_level,
    )
    report = ScenarioReport(cells=reports, base_seed=base_seed)
    if report.total_failures:
        logger.warning("Replications failed", total=report.total_failures)
    return report
