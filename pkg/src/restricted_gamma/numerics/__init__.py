"""Special functions, random streams and dense symmetric linear algebra."""

from .linalg import (
    SymmetricEigen,
    cholesky_lower,
    condition_number,
    inv_spd,
    solve_spd,
    sym_eigen,
)
from .rng import RngStream, sample_gamma, sample_standard_normal, stream_id_for
from .special import digamma, log_gamma, log_ndtr, ndtr, ndtri, reg_lower_inc_gamma

__all__ = [
    "RngStream",
    "SymmetricEigen",
    "cholesky_lower",
    "condition_number",
    "digamma",
    "inv_spd",
    "log_gamma",
    "log_ndtr",
    "ndtr",
    "ndtri",
    "reg_lower_inc_gamma",
    "sample_gamma",
    "sample_standard_normal",
    "solve_spd",
    "stream_id_for",
    "sym_eigen",
]
