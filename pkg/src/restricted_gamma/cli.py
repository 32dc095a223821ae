"""CLI interface for restricted gamma regression."""

import json
import sys
from pathlib import Path
from typing import Any, Callable

import click
import structlog

from . import __version__
from .config import load_config
from .config.models import RunConfig
from .errors import RestrictedGammaError, error_payload
from .logs import configure_logging as _configure, level_from
from .models.data import EstimatorTag, MleMode, ProposalCovariance, ProposalMode
from .runner import Runner

logger = structlog.get_logger()


def _common_options(func: Callable[..., None]) -> Callable[..., None]:
    """Options shared by every command; each maps onto a dotted config key."""
    options = [
        click.option(
            "--config",
            "-c",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            help="Path to a JSON or YAML run document",
        ),
        click.option("--output", "-o", type=click.Path(path_type=Path), help="Output directory"),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), help="Report format"),
        click.option("--seed", type=int, help="Base random seed"),
        click.option(
            "--mle-mode",
            type=click.Choice([m.value for m in MleMode]),
            help="Maximum-likelihood iteration variant",
        ),
        click.option("--n-iter", type=int, help="MCMC iterations"),
        click.option("--burn-in", type=int, help="MCMC burn-in iterations"),
        click.option(
            "--proposal-mode",
            type=click.Choice([m.value for m in ProposalMode]),
            help="Restricted-chain proposal",
        ),
        click.option(
            "--proposal-form",
            type=click.Choice([f.value for f in ProposalCovariance]),
            help="Proposal covariance",
        ),
        click.option("--proposal-scale", type=float, help="Multiplier on the proposal covariance"),
        click.option(
            "--estimator",
            "estimators",
            multiple=True,
            type=click.Choice([t.value for t in EstimatorTag]),
            help="Estimator to run (repeatable)",
        ),
        click.option("-v", "--verbose", count=True, help="Increase verbosity (-v, -vv)"),
        click.option("--pretty", is_flag=True, help="Human-readable logs instead of JSON lines"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _data_options(func: Callable[..., None]) -> Callable[..., None]:
    options = [
        click.option("--data", type=click.Path(path_type=Path), help="Dataset CSV"),
        click.option("--response", help="Response column"),
        click.option("--covariate", "covariates", multiple=True, help="Covariate column (repeatable)"),
        click.option("--intercept/--no-intercept", default=None, help="Prepend an intercept column"),
        click.option(
            "--standardize/--no-standardize", default=None, help="Standardize covariates"
        ),
        click.option("--zeta", type=float, help="Known precision parameter"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _overrides(params: dict[str, Any]) -> dict[str, Any]:
    """Map CLI parameters onto dotted config keys; unset flags are dropped."""
    mapping = {
        "output": "output.path",
        "fmt": "output.format",
        "seed": "seed",
        "mle_mode": "mle.mode",
        "n_iter": "mcmc.n_iter",
        "burn_in": "mcmc.burn_in",
        "proposal_mode": "mcmc.proposal_mode",
        "proposal_form": "mcmc.proposal_form",
        "proposal_scale": "mcmc.proposal_scale",
        "estimators": "estimators",
        "data": "data",
        "response": "response",
        "covariates": "covariates",
        "intercept": "intercept",
        "standardize": "standardize",
        "zeta": "zeta",
        "replications": "grid.replications",
        "workers": "workers",
        "bootstrap": "diagnostics.bootstrap",
    }
    out: dict[str, Any] = {}
    for name, key in mapping.items():
        value = params.get(name)
        if value is None or value == ():
            continue
        if isinstance(value, Path):
            value = str(value)
        elif isinstance(value, tuple):
            value = list(value)
        out[key] = value
    if "estimators" in out and params.get("command") == "simulate":
        out["grid.estimators"] = out.pop("estimators")
    return out


def _execute(command: str, params: dict[str, Any]) -> None:
    verbose: int = params.get("verbose", 0)
    pretty: bool = params.get("pretty", False)
    configure_logging(verbose, pretty)
    try:
        logger.info("Loading configuration", command=command)
        cfg = load_config(params.get("config"), _overrides({**params, "command": command}))
        level = set_logging_level(cfg, verbose, pretty)
        code = Runner(cfg, level).run(command)
    except RestrictedGammaError as e:
        logger.error("Run failed", error=str(e), error_type=type(e).__name__)
        click.echo(json.dumps(error_payload(e), sort_keys=True), err=True)
        sys.exit(e.exit_code)
    except Exception as e:
        logger.error("Fatal error", error=str(e), exc_info=verbose >= 2)
        click.echo(json.dumps(error_payload(e), sort_keys=True), err=True)
        sys.exit(1)
    sys.exit(code)


@click.group()
@click.version_option(__version__, prog_name="restricted-gamma")
def cli() -> None:
    """Gamma regression under multicollinearity and linear inequality restrictions."""
    pass


@cli.command()
@_data_options
@_common_options
def fit(**params: Any) -> None:
    """Fit MLE, ridge and Bayesian estimators to a dataset."""
    _execute("fit", params)


@cli.command()
@click.option("--replications", type=int, help="Replications per grid cell")
@click.option("--workers", type=int, help="Worker processes")
@_common_options
def simulate(**params: Any) -> None:
    """Run the Monte Carlo grid."""
    _execute("simulate", params)


@cli.command()
@click.option("--bootstrap", type=int, help="Bootstrap replicates for the A² p-value")
@_data_options
@_common_options
def diagnose(**params: Any) -> None:
    """Goodness of fit and multicollinearity diagnostics for a dataset."""
    _execute("diagnose", params)


def configure_logging(verbose: int, pretty: bool = False) -> None:
    """Configure structlog with initial settings."""
    _configure(level_from(verbose, "WARNING"), pretty)


def set_logging_level(cfg: RunConfig, verbose: int, pretty: bool = False) -> int:
    """Set logging level based on CLI flags or config; returns the level."""
    log_level = level_from(verbose, cfg.logging.level)
    _configure(log_level, pretty)
    return log_level


def main() -> None:
    """Entry point for CLI."""
    cli()


if __name__ == "__main__":
    main()
