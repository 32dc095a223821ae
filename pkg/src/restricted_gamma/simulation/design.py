"""Correlated designs and gamma responses for the Monte Carlo study."""

import math

import numpy as np
from numpy.typing import ArrayLike

from ..errors import ContractError
from ..numerics import sample_gamma
from ..regression import mean_response


def gen_design(rng: np.random.Generator, n: int, p: int, rho: float) -> np.ndarray:
    """
    Design with pairwise column correlation ρ².

    x_ij = √(1 − ρ²) w_ij + ρ w_{i,p+1} with w an n × (p+1) matrix of
    independent standard normals whose last column is shared.
    """
    if not 0.0 <= rho < 1.0:
        raise ContractError(f"rho must lie in [0, 1), got {rho}")
    if n < 1 or p < 1:
        raise ContractError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    w = rng.standard_normal((n, p + 1))
    return math.sqrt(1.0 - rho * rho) * w[:, :p] + rho * w[:, [p]]


def gen_response(
    rng: np.random.Generator, X: ArrayLike, beta: ArrayLike, zeta: float
) -> np.ndarray:
    """Draw y_i ~ Gamma(shape 1/ζ, scale μ_i ζ), so E y_i = μ_i and Var y_i = ζ μ_i²."""
    mu = mean_response(X, beta)
    return np.asarray(sample_gamma(rng, 1.0 / zeta, mu * zeta, size=mu.shape))
