"""Configuration data models using Pydantic."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..models.data import EstimatorTag, MleMode, ProposalCovariance, ProposalMode

DEFAULT_ESTIMATORS = [
    EstimatorTag.MLE,
    EstimatorTag.GRE1,
    EstimatorTag.GRE2,
    EstimatorTag.BEUGRC,
    EstimatorTag.BEGRC,
]


class MleSettings(BaseModel):
    """Maximum-likelihood iteration settings."""

    max_iter: int = Field(100, ge=1)
    tol: float = Field(1e-8, gt=0)
    mode: MleMode = MleMode.LIKELIHOOD_CONSISTENT
    std_errors: Literal["weighted", "expected"] = "weighted"


class McmcSettings(BaseModel):
    """Metropolis-Hastings chain settings."""

    n_iter: int = Field(15000, ge=1)
    burn_in: int = Field(2000, ge=0)
    proposal_mode: ProposalMode = ProposalMode.PAPER_FAITHFUL_TN
    proposal_form: ProposalCovariance = ProposalCovariance.EXPECTED_INFORMATION
    proposal_scale: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def _burn_in_inside_chain(self) -> "McmcSettings":
        if self.burn_in >= self.n_iter:
            raise ValueError("mcmc.burn_in must be smaller than mcmc.n_iter")
        return self


class RestrictionRow(BaseModel):
    """One linear restriction; coefficients are keyed by covariate name or given in full."""

    coeffs: dict[str, float] | list[float]
    bound: float
    sense: Literal["le", "ge"] = "le"


class ScenarioGrid(BaseModel):
    """Monte Carlo design: every (zeta, n, rho) combination is one cell."""

    zetas: list[float] = Field(default=[0.25, 0.5])
    ns: list[int] = Field(default=[25, 50, 100, 200])
    rhos: list[float] = Field(default=[0.8, 0.9, 0.95, 0.99])
    beta_true: list[float] = Field(default=[1.0, 1.0, 1.0, 1.0])
    replications: int = Field(100, ge=1)
    base_seed: Optional[int] = Field(None, ge=0)
    estimators: list[EstimatorTag] = Field(default_factory=lambda: list(DEFAULT_ESTIMATORS))
    restriction_bound: float = 0.8

    @field_validator("rhos")
    @classmethod
    def _rho_range(cls, rhos: list[float]) -> list[float]:
        if any(not 0.0 <= rho < 1.0 for rho in rhos):
            raise ValueError("every rho must lie in [0, 1)")
        return rhos

    @field_validator("zetas")
    @classmethod
    def _zeta_positive(cls, zetas: list[float]) -> list[float]:
        if any(zeta <= 0 for zeta in zetas):
            raise ValueError("every zeta must be positive")
        return zetas

    @model_validator(mode="after")
    def _enough_rows(self) -> "ScenarioGrid":
        if not self.beta_true:
            raise ValueError("beta_true must not be empty")
        if any(n < len(self.beta_true) for n in self.ns):
            raise ValueError("every n must be at least the number of coefficients")
        return self


class DiagnosticsSettings(BaseModel):
    """Goodness-of-fit options."""

    bootstrap: int = Field(1000, ge=200)


class OutputSettings(BaseModel):
    """Where and how reports are written."""

    path: Path = Path("results")
    format: Literal["csv", "json"] = "csv"


class LoggingConfig(BaseModel):
    """Logging configuration."""

    level: str = "WARNING"


class RunConfig(BaseSettings):
    """Main configuration model."""

    command: Optional[Literal["fit", "simulate", "diagnose"]] = None
    data: Optional[Path] = None
    response: str = "y"
    covariates: list[str] = Field(default_factory=list)
    intercept: bool = True
    standardize: bool = False
    zeta: Optional[float] = Field(None, gt=0)
    estimators: list[EstimatorTag] = Field(default_factory=lambda: list(DEFAULT_ESTIMATORS))
    ridge_k: Optional[float | list[float]] = None
    restrictions: list[RestrictionRow] = Field(default_factory=list)
    seed: int = Field(0, ge=0)
    workers: int = Field(1, ge=1)

    mle: MleSettings = Field(default_factory=MleSettings)
    mcmc: McmcSettings = Field(default_factory=McmcSettings)
    grid: ScenarioGrid = Field(default_factory=ScenarioGrid)
    diagnostics: DiagnosticsSettings = Field(default_factory=DiagnosticsSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    model_config = SettingsConfigDict(
        env_prefix="RESTRICTED_GAMMA_",
        env_nested_delimiter="__",
        case_sensitive=False,
    )

    @model_validator(mode="after")
    def _grid_seed(self) -> "RunConfig":
        if self.grid.base_seed is None:
            self.grid.base_seed = self.seed
        return self
