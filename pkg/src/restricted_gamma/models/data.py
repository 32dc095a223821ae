"""Core data models for restricted-gamma."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import structlog

from ..errors import ContractError, DomainError

logger = structlog.get_logger(__name__)


class EstimatorTag(str, Enum):
    """Estimators produced by the library."""

    MLE = "MLE"
    GRE1 = "GRE1"
    GRE2 = "GRE2"
    CUSTOM_RIDGE = "custom-ridge"
    BEUGRC = "BEUGRC"
    BEGRC = "BEGRC"


class MleMode(str, Enum):
    """Maximum-likelihood iteration variants."""

    PAPER_FAITHFUL = "paper-faithful"
    LIKELIHOOD_CONSISTENT = "likelihood-consistent"


class ProposalMode(str, Enum):
    """Metropolis-Hastings proposal for the restricted sampler."""

    PAPER_FAITHFUL_TN = "paper-faithful-tn"
    EXACT_INDICATOR_RW = "exact-indicator-rw"


class ProposalCovariance(str, Enum):
    """Form of the random-walk proposal covariance."""

    EXPECTED_INFORMATION = "expected-information"
    WEIGHTED_CROSSPRODUCT = "weighted-crossproduct"


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Dataset:
    """Design matrix, positive responses and the known precision ζ."""

    X: np.ndarray
    y: np.ndarray
    zeta: float
    covariate_names: tuple[str, ...] = ()
    response_name: str = "y"

    def __post_init__(self) -> None:
        x = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if x.shape[0] != y.shape[0]:
            raise ContractError(f"X has {x.shape[0]} rows but y has {y.shape[0]} entries")
        n, p = x.shape
        if p < 1 or n < p:
            raise ContractError(f"need n >= p >= 1, got n={n}, p={p}")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
            raise DomainError("design and response must be finite")
        if np.any(y <= 0):
            raise DomainError(f"responses must be positive (row {int(np.argmax(y <= 0))})")
        if not (np.isfinite(self.zeta) and self.zeta > 0):
            raise DomainError(f"zeta must be positive, got {self.zeta}")

        names = tuple(self.covariate_names) or tuple(f"x{j + 1}" for j in range(p))
        if len(names) != p:
            raise ContractError(f"{len(names)} covariate names for {p} columns")

        object.__setattr__(self, "X", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "zeta", float(self.zeta))
        object.__setattr__(self, "covariate_names", names)

        if n == p:
            logger.warning("Saturated design, n equals p", n=n, p=p)
        rank = int(np.linalg.matrix_rank(x))
        if rank < p:
            logger.warning("Design matrix is column-rank deficient", rank=rank, p=p)

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def p(self) -> int:
        return int(self.X.shape[1])


@dataclass(frozen=True)
class FitResult:
    """Point estimate from a classical estimator."""

    beta_hat: np.ndarray
    std_errors: np.ndarray
    mu_hat: np.ndarray
    iterations: int
    converged: bool
    estimator_tag: EstimatorTag
    mode: Optional[MleMode] = None
    penalty: Optional[np.ndarray] = None


@dataclass(frozen=True)
class CanonicalForm:
    """Eigen-coordinates of Xᵀ diag(μ̂²) X and the MLE expressed in them."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    alpha: np.ndarray

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def alpha_min_sq(self) -> float:
        return float(np.min(self.alpha**2))


@dataclass(frozen=True)
class Chain:
    """Metropolis-Hastings output including the burn-in rows."""

    draws: np.ndarray
    acceptance_rate: float
    burn_in: int
    estimator_tag: EstimatorTag
    proposal_mode: Optional[ProposalMode] = None

    @property
    def n_iter(self) -> int:
        return int(self.draws.shape[0])

    @property
    def kept(self) -> np.ndarray:
        """Draws after the burn-in marker."""
        return self.draws[self.burn_in :]


@dataclass(frozen=True)
class PosteriorSummary:
    """Coordinatewise posterior mean, sd and central 95% interval."""

    posterior_mean: np.ndarray
    posterior_sd: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    n_draws: int


@dataclass(frozen=True)
class GofReport:
    """Anderson-Darling goodness of fit against an ML-fitted gamma."""

    ad_statistic: float
    p_value: float
    fitted_shape: float
    fitted_scale: float
    n_bootstrap: int
    clamped: bool = False


@dataclass(frozen=True)
class CollinearityReport:
    """Condition numbers under both readings of the weight matrix."""

    weighted: float
    unweighted: float


@dataclass(frozen=True)
class CellReport:
    """Aggregated replication results for one (ζ, n, ρ, estimator) cell."""

    zeta: float
    n: int
    rho: float
    estimator: EstimatorTag
    mse: float
    bias: np.ndarray
    sd: np.ndarray
    failures: int
    replications: int


@dataclass
class ScenarioReport:
    """All cells of a simulation grid in grid order."""

    cells: list[CellReport] = field(default_factory=list)
    base_seed: int = 0

    def cell(self, zeta: float, n: int, rho: float, estimator: EstimatorTag) -> CellReport:
        for c in self.cells:
            if c.zeta == zeta and c.n == n and c.rho == rho and c.estimator == estimator:
                return c
        raise KeyError((zeta, n, rho, estimator))

    @property
    def total_failures(self) -> int:
        return sum(c.failures for c in self.cells)
