"""Dense symmetric linear algebra: eigendecomposition, SPD solves, conditioning."""

from dataclasses import dataclass
from typing import Literal

import numpy as np
import structlog
from numpy.typing import ArrayLike
from scipy import linalg as sla

from ..errors import ContractError, SingularityError

logger = structlog.get_logger(__name__)

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class SymmetricEigen:
    """Eigenpairs of a symmetric matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Return V diag(λ) Vᵀ."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])


def _check_symmetric(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if not np.all(np.abs(a - a.T) <= SYMMETRY_TOL * scale):
        raise ContractError("matrix is not symmetric")


def _jacobi(a: np.ndarray, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations; returns unsorted eigenvalues and vectors."""
    a = a.copy()
    p = a.shape[0]
    v = np.eye(p)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= 1e-15 * max(1.0, np.linalg.norm(a)):
            break
        for i in range(p - 1):
            for j in range(i + 1, p):
                if a[i, j] == 0.0:
                    continue
                theta = (a[j, j] - a[i, i]) / (2.0 * a[i, j])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_i = c * a[:, i] - s * a[:, j]
                rot_j = s * a[:, i] + c * a[:, j]
                a[:, i], a[:, j] = rot_i, rot_j
                rot_i = c * a[i, :] - s * a[j, :]
                rot_j = s * a[i, :] + c * a[j, :]
                a[i, :], a[j, :] = rot_i, rot_j
                vi = c * v[:, i] - s * v[:, j]
                vj = s * v[:, i] + c * v[:, j]
                v[:, i], v[:, j] = vi, vj
    else:
        logger.warning("Jacobi sweeps exhausted", max_sweeps=max_sweeps)
    return np.diag(a).copy(), v


def sym_eigen(a: ArrayLike, method: Literal["lapack", "jacobi"] = "lapack") -> SymmetricEigen:
    """
    Eigendecomposition of a symmetric matrix.

    Args:
        a: Symmetric p×p matrix (symmetric within 1e-10)
        method: "lapack" (``numpy.linalg.eigh``) or "jacobi" (cyclic rotations)

    Returns:
        SymmetricEigen with ascending eigenvalues and orthonormal eigenvectors

    Raises:
        ContractError: If the input is not square and symmetric
    """
    mat = np.asarray(a, dtype=float)
    _check_symmetric(mat)
    mat = 0.5 * (mat + mat.T)
    if method == "lapack":
        values, vectors = np.linalg.eigh(mat)
    elif method == "jacobi":
        values, vectors = _jacobi(mat)
        order = np.argsort(values, kind="stable")
        values, vectors = values[order], vectors[:, order]
    else:
        raise ContractError(f"unknown eigen method: {method}")
    return SymmetricEigen(eigenvalues=values, eigenvectors=vectors)


def cholesky_lower(a: ArrayLike) -> np.ndarray:
    """
    Lower Cholesky factor of an SPD matrix.

    Raises:
        SingularityError: With the 0-based pivot at which factorization failed
    """
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {mat.shape}")
    factor, info = sla.lapack.dpotrf(mat, lower=1, clean=1)
    if info > 0:
        raise SingularityError(
            f"matrix is not positive definite (leading minor {info} fails)", pivot=info - 1
        )
    if info < 0:
        raise ContractError(f"invalid argument {-info} to Cholesky factorization")
    return factor


def solve_spd(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    """
    Solve A X = B for symmetric positive definite A via Cholesky.

    Args:
        a: SPD p×p matrix
        b: p-vector or p×k matrix

    Returns:
        Solution with the shape of ``b``

    Raises:
        SingularityError: If A is not positive definite
    """
    factor = cholesky_lower(a)
    rhs = np.asarray(b, dtype=float)
    if rhs.shape[0] != factor.shape[0]:
        raise ContractError(f"right-hand side has {rhs.shape[0]} rows, expected {factor.shape[0]}")
    return sla.cho_solve((factor, True), rhs)


def inv_spd(a: ArrayLike) -> np.ndarray:
    """Inverse of an SPD matrix, symmetrized."""
    mat = np.asarray(a, dtype=float)
    inv = solve_spd(mat, np.eye(mat.shape[0]))
    return 0.5 * (inv + inv.T)


def condition_number(a: ArrayLike) -> float:
    """
    Square root of the ratio of the largest to the smallest eigenvalue.

    Raises:
        SingularityError: If the smallest eigenvalue is not positive
    """
    eig = sym_eigen(a)
    if eig.min <= 0:
        raise SingularityError(f"smallest eigenvalue {eig.min:.3e} is not positive")
    return float(np.sqrt(eig.max / eig.min))
