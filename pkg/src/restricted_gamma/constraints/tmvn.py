"""Truncated normal samplers: univariate rejection schemes and the Gibbs-cycle driver."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog
from numpy.typing import ArrayLike

from ..errors import ContractError, DegenerateTruncationError, InfeasibleStateError
from ..numerics import cholesky_lower, inv_spd, log_ndtr
from .restrictions import INTERVAL_TOL, LinearRestrictions

logger = structlog.get_logger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)
LOG_MASS_FLOOR = math.log(1e-300)
NARROW_WIDTH = 0.5
NORMAL_TAIL_LIMIT = 0.25


def _log_interval_mass(a: float, b: float) -> float:
    """log(Φ(b) − Φ(a)) for a < b, evaluated on the side away from the far tail."""
    if a > 0:
        a, b = -b, -a
    log_b = float(log_ndtr(b))
    log_a = float(log_ndtr(a))
    if log_a == -np.inf:
        return log_b
    diff = log_a - log_b
    if diff >= 0:
        return -np.inf
    return log_b + math.log(-math.expm1(diff))


def _accept_normal(rng: np.random.Generator, a: float, b: float, k: int) -> np.ndarray:
    z = rng.standard_normal(k)
    return z[(z >= a) & (z <= b)]


def _accept_uniform(rng: np.random.Generator, a: float, b: float, k: int, shift: float) -> np.ndarray:
    # density bound exp(-shift²/2) at the point of the interval closest to 0
    z = rng.uniform(a, b, k)
    u = rng.random(k)
    return z[u <= np.exp((shift * shift - z * z) / 2.0)]


def _accept_exponential(rng: np.random.Generator, a: float, b: float, k: int) -> np.ndarray:
    lam = (a + math.sqrt(a * a + 4.0)) / 2.0
    z = a + rng.exponential(1.0 / lam, k)
    u = rng.random(k)
    return z[(u <= np.exp(-((z - lam) ** 2) / 2.0)) & (z <= b)]


def _standard_tn(rng: np.random.Generator, a: float, b: float, size: int) -> np.ndarray:
    """Draws from N(0, 1) truncated to [a, b]."""
    if b <= 0:
        return -_standard_tn(rng, -b, -a, size)

    if a < 0:
        if b - a >= SQRT_2PI:
            def propose(k: int) -> np.ndarray:
                return _accept_normal(rng, a, b, k)
        else:
            def propose(k: int) -> np.ndarray:
                return _accept_uniform(rng, a, b, k, 0.0)
    elif math.isfinite(b) and b - a < NARROW_WIDTH:
        def propose(k: int) -> np.ndarray:
            return _accept_uniform(rng, a, b, k, a)
    elif a <= NORMAL_TAIL_LIMIT:
        def propose(k: int) -> np.ndarray:
            return _accept_normal(rng, a, b, k)
    else:
        def propose(k: int) -> np.ndarray:
            return _accept_exponential(rng, a, b, k)

    out = np.empty(size)
    filled = 0
    while filled < size:
        accepted = propose(size - filled)
        take = min(accepted.size, size - filled)
        out[filled : filled + take] = accepted[:take]
        filled += take
    return out


def sample_tn_univariate(
    rng: np.random.Generator,
    mu: float,
    sigma: float,
    lo: float,
    hi: float,
    size: Optional[int] = None,
) -> float | np.ndarray:
    """
    Draw from N(mu, sigma²) conditioned on [lo, hi].

    The rejection scheme is chosen on the standardized interval [a, b]
    (mirrored when b ≤ 0): an interval covering 0 uses normal proposals when it
    is wider than √(2π) and uniform proposals otherwise; a narrow interval
    (width < 0.5) away from 0 uses uniform proposals; a one-sided region with
    a ≤ 0.25 uses normal proposals; deeper tails use a translated exponential
    with rate (a + √(a² + 4))/2.

    Args:
        rng: Random generator
        mu: Mean of the untruncated normal
        sigma: Standard deviation, positive
        lo: Lower bound, may be -inf
        hi: Upper bound, may be +inf
        size: Number of draws; None returns a float

    Raises:
        ContractError: If sigma ≤ 0 or lo ≥ hi
        DegenerateTruncationError: If the interval has normal mass below 1e-300
    """
    if not sigma > 0:
        raise ContractError(f"sigma must be positive, got {sigma}")
    if not lo < hi:
        raise ContractError(f"need lo < hi, got ({lo}, {hi})")
    a = (lo - mu) / sigma
    b = (hi - mu) / sigma
    if _log_interval_mass(a, b) < LOG_MASS_FLOOR:
        raise DegenerateTruncationError(
            f"interval [{lo:.6g}, {hi:.6g}] has no mass under N({mu:.6g}, {sigma:.6g}²)"
        )
    n = 1 if size is None else int(size)
    x = np.clip(mu + sigma * _standard_tn(rng, a, b, n), lo, hi)
    return float(x[0]) if size is None else x


@dataclass(frozen=True)
class TmvnSpec:
    """
    Normal law N(mean, covariance) restricted to {Rβ ≤ r}.

    ``precision`` is the cached inverse covariance. It is computed when omitted;
    ``with_mean`` carries it over so a moving center costs no inversion.
    """

    mean: np.ndarray
    covariance: np.ndarray
    restrictions: LinearRestrictions
    precision: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.covariance, dtype=float)
        p = mean.shape[0]
        if cov.shape != (p, p):
            raise ContractError(f"covariance shape {cov.shape} does not match mean length {p}")
        if self.restrictions.p != p:
            raise ContractError(f"restrictions act on {self.restrictions.p} coefficients, not {p}")
        if self.precision is None:
            cholesky_lower(cov)
            precision = inv_spd(cov)
        else:
            precision = np.asarray(self.precision, dtype=float)
            residual = np.max(np.abs(precision @ cov - np.eye(p)))
            scale = max(1.0, np.linalg.norm(precision, np.inf) * np.linalg.norm(cov, np.inf))
            if residual > 1e-8 * scale:
                raise ContractError("precision is not the inverse of the covariance")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "precision", precision)

    @property
    def p(self) -> int:
        return int(self.mean.shape[0])

    def with_mean(self, mean: ArrayLike) -> "TmvnSpec":
        """Same law centred at ``mean``; covariance and precision are shared unchecked."""
        center = np.asarray(mean, dtype=float).reshape(-1)
        if center.shape != self.mean.shape:
            raise ContractError(f"mean of length {center.shape[0]}, expected {self.p}")
        moved = object.__new__(TmvnSpec)
        object.__setattr__(moved, "mean", center)
        object.__setattr__(moved, "covariance", self.covariance)
        object.__setattr__(moved, "restrictions", self.restrictions)
        object.__setattr__(moved, "precision", self.precision)
        return moved


def gibbs_sweep(rng: np.random.Generator, spec: TmvnSpec, state: ArrayLike) -> np.ndarray:
    """
    One Gibbs cycle over coordinates 0..p-1 in order.

    Coordinate j is drawn from N(m_j, 1/Ω_jj) truncated to its feasible
    interval, where m_j = μ_j − Σ_{k≠j} Ω_jk (x_k − μ_k) / Ω_jj and Ω is the
    precision matrix.

    Raises:
        InfeasibleStateError: If ``state`` violates the restrictions
    """
    x = np.array(state, dtype=float).reshape(-1)
    res = spec.restrictions
    if not res.satisfies(x):
        raise InfeasibleStateError("Gibbs sweep started from an infeasible state")
    omega = spec.precision
    mu = spec.mean
    assert omega is not None
    for j in range(spec.p):
        w = omega[j, j]
        d = x - mu
        m_j = mu[j] - (omega[j] @ d - w * d[j]) / w
        s_j = 1.0 / math.sqrt(w)
        if res.m == 0:
            x[j] = sample_tn_univariate(rng, m_j, s_j, -np.inf, np.inf)
            continue
        lo, hi = res.coordinate_interval(j, x)
        if hi - lo <= INTERVAL_TOL:
            x[j] = 0.5 * (lo + hi)
        else:
            x[j] = sample_tn_univariate(rng, m_j, s_j, lo, hi)
    return x


def sample_tmvn(
    rng: np.random.Generator,
    spec: TmvnSpec,
    n_draws: int,
    burn: int = 100,
    thin: int = 1,
    init: Optional[ArrayLike] = None,
) -> np.ndarray:
    """
    Gibbs draws from the truncated multivariate normal.

    Args:
        rng: Random generator
        spec: Target law
        n_draws: Number of rows returned
        burn: Sweeps discarded before the first kept draw
        thin: Sweeps between kept draws
        init: Feasible starting point; defaults to a feasible point near the mean

    Returns:
        n_draws × p matrix, every row satisfying the restrictions

    Raises:
        FeasibilityUnresolvedError: If no starting point can be found
    """
    if n_draws < 1 or burn < 0 or thin < 1:
        raise ContractError("need n_draws >= 1, burn >= 0 and thin >= 1")
    if init is None:
        state = spec.restrictions.feasible_start(spec.mean)
    else:
        state = np.asarray(init, dtype=float).reshape(-1)
        if not spec.restrictions.satisfies(state):
            raise InfeasibleStateError("initial state violates the restrictions")

    for _ in range(burn):
        state = gibbs_sweep(rng, spec, state)
    draws = np.empty((n_draws, spec.p))
    for i in range(n_draws):
        for _ in range(thin):
            state = gibbs_sweep(rng, spec, state)
        draws[i] = state
    logger.debug("Sampled truncated normal", n_draws=n_draws, burn=burn, thin=thin)
    return draws
