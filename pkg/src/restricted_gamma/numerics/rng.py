"""Seeded, splittable random streams and the base variate generators."""

import hashlib
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

_MASK64 = (1 << 64) - 1


def stream_id_for(*indices: int) -> int:
    """Hash an index tuple into a 64-bit stream identifier."""
    digest = hashlib.blake2b(
        b"".join(int(i).to_bytes(8, "little", signed=False) for i in indices), digest_size=8
    ).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class RngStream:
    """
    Identifier of an independent random stream.

    A stream is a (base_seed, stream_id) pair. ``generator()`` always returns a
    fresh ``numpy.random.Generator`` positioned at the start of the stream, so two
    calls reproduce the same draws. Distinct stream ids are spawned children of
    the same ``SeedSequence`` and are statistically independent.
    """

    base_seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.base_seed <= _MASK64 and 0 <= self.stream_id <= _MASK64):
            raise DomainError("seed and stream id must be unsigned 64-bit integers")

    @classmethod
    def for_key(cls, base_seed: int, *indices: int) -> "RngStream":
        """Stream for a multi-index key such as (zeta, n, rho, replication)."""
        return cls(base_seed=base_seed, stream_id=stream_id_for(*indices))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.base_seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(seq))

    def child(self, index: int) -> "RngStream":
        """Derived substream, deterministic in (self, index)."""
        return RngStream(self.base_seed, stream_id_for(self.stream_id, index))


def sample_standard_normal(
    rng: np.random.Generator, size: int | tuple[int, ...] | None = None
) -> float | np.ndarray:
    """Standard normal draw(s)."""
    out = rng.standard_normal(size)
    return float(out) if size is None else out


def sample_gamma(
    rng: np.random.Generator,
    shape: float,
    scale: float | np.ndarray,
    size: int | tuple[int, ...] | None = None,
) -> float | np.ndarray:
    """
    Gamma variate(s) with the given shape and scale (mean = shape·scale).

    numpy's generator uses Marsaglia-Tsang squeeze rejection for shape ≥ 1 and
    a boosted draw for shape < 1.

    Raises:
        DomainError: If shape or any scale is not positive and finite
    """
    scale_arr = np.asarray(scale, dtype=float)
    if not (np.isfinite(shape) and shape > 0):
        raise DomainError(f"gamma shape must be positive, got {shape}")
    if not np.all(np.isfinite(scale_arr)) or np.any(scale_arr <= 0):
        raise DomainError("gamma scale must be positive")
    if size is None and scale_arr.ndim == 0:
        return float(rng.gamma(shape, float(scale_arr)))
    return rng.gamma(shape, scale_arr, size=size)
