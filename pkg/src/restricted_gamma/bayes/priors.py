"""Normal and truncated-normal priors for the regression coefficients."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from ..constraints import LinearRestrictions
from ..errors import ContractError
from ..models.data import Dataset, ProposalCovariance
from ..numerics import inv_spd
from ..regression import weighted_crossproduct


@dataclass(frozen=True)
class PriorSpec:
    """
    N(mean, covariance) prior, truncated to {Rβ ≤ r} when restrictions are given.

    The prior precision is computed once at construction.
    """

    mean: np.ndarray
    covariance: np.ndarray
    restrictions: Optional[LinearRestrictions] = None
    precision: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.covariance, dtype=float)
        if cov.shape != (mean.shape[0], mean.shape[0]):
            raise ContractError(f"prior covariance shape {cov.shape} does not match mean")
        if self.restrictions is not None and self.restrictions.p != mean.shape[0]:
            raise ContractError("restrictions and prior mean have different dimensions")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "precision", inv_spd(cov))

    @property
    def restricted(self) -> bool:
        return self.restrictions is not None and self.restrictions.m > 0

    def without_restrictions(self) -> "PriorSpec":
        return PriorSpec(self.mean, self.covariance)

    def with_restrictions(self, restrictions: LinearRestrictions) -> "PriorSpec":
        return PriorSpec(self.mean, self.covariance, restrictions)


def default_hyperparameters(X: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """
    Zero prior mean and covariance (XᵀX)⁻¹.

    Raises:
        SingularityError: If XᵀX is singular
    """
    x = np.atleast_2d(np.asarray(X, dtype=float))
    return np.zeros(x.shape[1]), inv_spd(x.T @ x)


def default_proposal_cov(
    data: Dataset,
    mu_hat: ArrayLike,
    form: ProposalCovariance = ProposalCovariance.EXPECTED_INFORMATION,
) -> np.ndarray:
    """
    Random-walk proposal covariance at the MLE.

    ``expected-information`` is the inverse Fisher information ζ(XᵀX)⁻¹ of the
    log-link gamma likelihood; it does not depend on μ̂.
    ``weighted-crossproduct`` is (1/ζ)(Xᵀ diag(μ̂²) X)⁻¹, whose scale follows
    the fitted means and collapses when μ̂ spans several orders of magnitude.

    Raises:
        SingularityError: If the cross-product is singular
    """
    if form == ProposalCovariance.EXPECTED_INFORMATION:
        return data.zeta * inv_spd(data.X.T @ data.X)
    if form == ProposalCovariance.WEIGHTED_CROSSPRODUCT:
        return inv_spd(weighted_crossproduct(data, mu_hat)) / data.zeta
    raise ContractError(f"unknown proposal covariance form: {form}")
