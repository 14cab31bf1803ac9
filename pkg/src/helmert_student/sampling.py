"""Seeded standard-normal batches, standardization maps and sample statistics.

Reproducibility contract
------------------------
A batch of ``trials x n`` draws is cut into chunks of ``CHUNK_TRIALS`` trials.
Chunk ``c`` is filled by its own PCG64 stream seeded with
``splitmix64(master_seed ^ splitmix64(c))``, and normal variates come from
NumPy's ziggurat sampler on that stream. Chunks never share state, so the
grid is identical no matter how many workers fill it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CapacityError, DegeneracyError, DomainError, UsageError

CHUNK_TRIALS = 1024
MEMORY_BUDGET_VALUES = 200_000_000  # float64 values, 1.6 GB

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer; a bijective 64-bit mixing function."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def chunk_seed(seed: int, chunk: int) -> int:
    return splitmix64((seed & _MASK64) ^ splitmix64(chunk))


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise UsageError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) <= _MASK64:
        raise UsageError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


Draw = Callable[[np.random.Generator, tuple[int, int]], np.ndarray]


def _standard_normal(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    return rng.standard_normal(shape)


def chunked_draws(seed: int, trials: int, n: int, draw: Draw, workers: int = 1) -> np.ndarray:
    """Fill a ``(trials, n)`` grid chunk by chunk with ``draw(rng, shape)``."""
    seed = _check_seed(seed)
    if trials < 1:
        raise UsageError(f"trials must be >= 1, got {trials}")
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")
    if trials * n > MEMORY_BUDGET_VALUES:
        raise CapacityError(
            f"{trials} x {n} draws exceed the memory budget of {MEMORY_BUDGET_VALUES} values"
        )
    out = np.empty((trials, n), dtype=np.float64)
    nchunks = -(-trials // CHUNK_TRIALS)

    def fill(c: int) -> None:
        lo = c * CHUNK_TRIALS
        hi = min(trials, lo + CHUNK_TRIALS)
        rng = np.random.Generator(np.random.PCG64(chunk_seed(seed, c)))
        out[lo:hi] = draw(rng, (hi - lo, n))

    if workers <= 1 or nchunks == 1:
        for c in range(nchunks):
            fill(c)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(nchunks)))
    return out


@dataclass(frozen=True)
class SampleBatch:
    trials: int
    n: int
    values: np.ndarray
    seed: int


def standard_normal_batch(seed: int, trials: int, n: int, workers: int = 1) -> SampleBatch:
    """I.i.d. N(0, 1) draws in a ``(trials, n)`` grid, deterministic in ``seed``."""
    values = chunked_draws(seed, trials, n, _standard_normal, workers)
    values.setflags(write=False)
    return SampleBatch(trials, n, values, int(seed))


@dataclass(frozen=True)
class NormalParams:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise DomainError("mu and sigma must be finite")
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")


def standardize(x, p: NormalParams):
    """Map a N(mu, sigma^2) value to N(0, 1): ``(x - mu) / sigma``."""
    return (x - p.mu) / p.sigma


def destandardize(z, p: NormalParams):
    """Inverse of :func:`standardize`: ``mu + sigma * z``."""
    return p.mu + p.sigma * z


@dataclass(frozen=True)
class SampleStats:
    mean: float
    sample_variance: float
    w: float


def sample_stats(v) -> SampleStats:
    """Mean, sample variance ``S^2`` and ``W = sum (v_i - mean)^2`` (two-pass)."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise UsageError("sample_stats expects a 1-d vector")
    n = arr.size
    if n < 2:
        raise DegeneracyError(f"sample variance is undefined for n={n}; need n >= 2")
    mean = float(arr.sum() / n)
    w = float(np.sum((arr - mean) ** 2))
    return SampleStats(mean, w / (n - 1), w)


def batch_stats(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise ``(mean, W)`` of a ``(trials, n)`` grid, same formulas as :func:`sample_stats`."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[-1]
    if n < 2:
        raise DegeneracyError(f"sample variance is undefined for n={n}; need n >= 2")
    mean = values.sum(axis=-1) / n
    w = np.sum((values - mean[..., None]) ** 2, axis=-1)
    return mean, w
