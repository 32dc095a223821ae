"""Linear inequality restriction systems Rβ ≤ r."""

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
import structlog
from numpy.typing import ArrayLike

from ..errors import ContractError, FeasibilityUnresolvedError, InfeasibleStateError

logger = structlog.get_logger(__name__)

BOUNDARY_TOL = 1e-12
INTERVAL_TOL = 1e-10
INTERIOR_NUDGE = 1e-6


def _row_field(row: Any, name: str) -> Any:
    if isinstance(row, Mapping):
        return row.get(name)
    return getattr(row, name, None)


@dataclass(frozen=True)
class LinearRestrictions:
    """
    Restriction system {β : Rβ ≤ r} with m rows over p coefficients.

    m may exceed p. A system with m = 0 places no restriction.
    """

    R: np.ndarray
    r: np.ndarray

    def __post_init__(self) -> None:
        R = np.asarray(self.R, dtype=float)
        r = np.asarray(self.r, dtype=float).reshape(-1)
        if R.ndim != 2:
            raise ContractError("R must be a matrix")
        if R.shape[0] != r.shape[0]:
            raise ContractError(f"R has {R.shape[0]} rows but r has {r.shape[0]} entries")
        if not (np.all(np.isfinite(R)) and np.all(np.isfinite(r))):
            raise ContractError("restriction coefficients and bounds must be finite")
        zero_rows = np.flatnonzero(np.all(R == 0.0, axis=1) & (r < 0))
        if zero_rows.size:
            raise FeasibilityUnresolvedError(
                f"restriction row {int(zero_rows[0])} reads 0 <= {r[zero_rows[0]]}, "
                "the restriction system is empty",
                proved_empty=True,
            )
        R.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "r", r)

    @property
    def m(self) -> int:
        return int(self.R.shape[0])

    @property
    def p(self) -> int:
        return int(self.R.shape[1])

    @classmethod
    def unrestricted(cls, p: int) -> "LinearRestrictions":
        return cls(np.zeros((0, p)), np.zeros(0))

    @classmethod
    def from_rows(cls, rows: Iterable[Any], names: Sequence[str]) -> "LinearRestrictions":
        """
        Build a system from configuration rows.

        Each row has ``coeffs`` (a mapping from coefficient name to value, or a
        full-length list), ``bound`` and ``sense`` ("le" or "ge"). ``ge`` rows are
        negated into ≤ form. Names not mentioned in a mapping get coefficient 0,
        which keeps an intercept unrestricted.

        Args:
            rows: Restriction rows
            names: Coefficient names in design-column order

        Raises:
            ContractError: On unknown names, wrong list length or an unknown sense
        """
        index = {name: j for j, name in enumerate(names)}
        p = len(names)
        R_rows: list[np.ndarray] = []
        bounds: list[float] = []
        for i, row in enumerate(rows):
            coeffs = _row_field(row, "coeffs")
            sense = str(_row_field(row, "sense") or "le").lower()
            bound = float(_row_field(row, "bound"))
            vec = np.zeros(p)
            if isinstance(coeffs, Mapping):
                for name, value in coeffs.items():
                    if name not in index:
                        raise ContractError(f"restriction row {i} names unknown coefficient {name!r}")
                    vec[index[name]] = float(value)
            else:
                values = np.asarray(list(coeffs), dtype=float)
                if values.shape != (p,):
                    raise ContractError(
                        f"restriction row {i} has {values.size} coefficients, expected {p}"
                    )
                vec = values
            if sense == "ge":
                vec, bound = -vec, -bound
            elif sense != "le":
                raise ContractError(f"restriction row {i} has unknown sense {sense!r}")
            R_rows.append(vec)
            bounds.append(bound)
        if not R_rows:
            return cls.unrestricted(p)
        return cls(np.vstack(R_rows), np.asarray(bounds))

    def _check_beta(self, beta: ArrayLike) -> np.ndarray:
        b = np.asarray(beta, dtype=float).reshape(-1)
        if b.shape[0] != self.p:
            raise ContractError(f"beta has {b.shape[0]} entries, restrictions expect {self.p}")
        return b

    def satisfies(self, beta: ArrayLike) -> bool:
        """True iff every row holds within the boundary tolerance."""
        b = self._check_beta(beta)
        if self.m == 0:
            return True
        return bool(np.all(self.R @ b <= self.r + BOUNDARY_TOL))

    def _raw_interval(self, j: int, beta: np.ndarray) -> tuple[float, float]:
        col = self.R[:, j]
        slack = self.r - self.R @ beta + col * beta[j]
        pos = col > 0
        neg = col < 0
        hi = float(np.min(slack[pos] / col[pos])) if pos.any() else np.inf
        lo = float(np.max(slack[neg] / col[neg])) if neg.any() else -np.inf
        return lo, hi

    def coordinate_interval(self, j: int, beta: ArrayLike) -> tuple[float, float]:
        """
        Range of β_j keeping the system satisfied with the other coordinates fixed.

        Raises:
            InfeasibleStateError: If the interval is empty, which means ``beta``
                violates a row that does not involve coordinate j
        """
        b = self._check_beta(beta)
        if not 0 <= j < self.p:
            raise ContractError(f"coordinate {j} out of range for p={self.p}")
        lo, hi = self._raw_interval(j, b)
        if lo > hi + INTERVAL_TOL:
            raise InfeasibleStateError(f"empty interval ({lo:.6g}, {hi:.6g}) for coordinate {j}")
        return lo, hi

    def _single_coordinate_conflict(self) -> int | None:
        nonzero = self.R != 0
        single = nonzero.sum(axis=1) == 1
        for j in range(self.p):
            rows = single & nonzero[:, j]
            if not rows.any():
                continue
            col = self.R[rows, j]
            bounds = self.r[rows] / col
            hi = bounds[col > 0].min() if (col > 0).any() else np.inf
            lo = bounds[col < 0].max() if (col < 0).any() else -np.inf
            if lo > hi + INTERVAL_TOL:
                return j
        return None

    def _project_violated(self, beta: np.ndarray) -> np.ndarray:
        for i in range(self.m):
            row = self.R[i]
            excess = float(row @ beta - self.r[i])
            if excess > 0:
                norm = float(np.linalg.norm(row))
                beta = beta - (excess + INTERIOR_NUDGE * norm) / (norm * norm) * row
        return beta

    def feasible_start(self, hint: ArrayLike, max_passes: int = 100) -> np.ndarray:
        """
        Locate a point of the system by cyclic coordinate projection from ``hint``.

        Each pass clamps every coordinate into its feasible interval, stepping
        ``INTERIOR_NUDGE`` inside the boundary (the midpoint when the interval is
        narrower than two nudges). Coordinates whose interval is empty are left
        alone; if the pass ends infeasible, each violated row is then projected
        onto, ``INTERIOR_NUDGE`` past its boundary. A feasible hint is returned
        unchanged.

        Raises:
            FeasibilityUnresolvedError: If no feasible point was reached;
                ``proved_empty`` is set when two single-coordinate rows contradict
        """
        beta = self._check_beta(hint).copy()
        if self.satisfies(beta):
            return beta

        conflict = self._single_coordinate_conflict()
        if conflict is not None:
            raise FeasibilityUnresolvedError(
                f"restriction system is empty: bounds on coordinate {conflict} contradict",
                proved_empty=True,
            )

        for sweep in range(1, max_passes + 1):
            for j in range(self.p):
                lo, hi = self._raw_interval(j, beta)
                if lo > hi:
                    continue
                if hi - lo <= 2 * INTERIOR_NUDGE:
                    beta[j] = 0.5 * (lo + hi)
                elif beta[j] < lo + INTERIOR_NUDGE:
                    beta[j] = lo + INTERIOR_NUDGE
                elif beta[j] > hi - INTERIOR_NUDGE:
                    beta[j] = hi - INTERIOR_NUDGE
            if self.satisfies(beta):
                logger.debug("Feasible start located", passes=sweep)
                return beta
            beta = self._project_violated(beta)
            if self.satisfies(beta):
                logger.debug("Feasible start located", passes=sweep)
                return beta

        raise FeasibilityUnresolvedError(
            f"no feasible point found after {max_passes} projection passes; "
            "supply an interior starting point"
        )
