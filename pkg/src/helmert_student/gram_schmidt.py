"""Gram-Schmidt construction of an orthogonal matrix with an averaging first row.

The seed is the identity with its first row replaced by ``(1/sqrt(n), ...)``.
Its rows are orthonormalized top to bottom with modified Gram-Schmidt. The
result is a valid alternative to the Helmert matrix, but its entries have
no short closed form; :func:`entry_complexity` puts a number on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, UsageError
from .helmert_core import check_order
from .sampling import sample_stats

_ZERO_NORM = 1e-12
_ZERO_ENTRY = 1e-12


def gs_seed_matrix(n: int) -> np.ndarray:
    n = check_order(n)
    seed = np.eye(n)
    seed[0, :] = 1.0 / math.sqrt(n)
    return seed


def _fix_sign(row: np.ndarray) -> np.ndarray:
    # last nonzero entry negative, as in the Helmert rows
    nz = np.flatnonzero(np.abs(row) > _ZERO_ENTRY)
    if nz.size and row[nz[-1]] > 0:
        return -row
    return row


def gram_schmidt_orthogonalize(n: int) -> np.ndarray:
    """Orthonormalize the rows of :func:`gs_seed_matrix` (MGS, top to bottom).

    Row 1 is copied from the seed unchanged.
    """
    seed = gs_seed_matrix(n)
    q = np.empty_like(seed)
    q[0] = seed[0]
    for k in range(1, seed.shape[0]):
        v = seed[k].copy()
        for j in range(k):
            v -= (q[j] @ v) * q[j]
        norm = np.linalg.norm(v)
        if norm < _ZERO_NORM:
            raise DegeneracyError(f"row {k + 1} vanished during orthogonalization")
        q[k] = _fix_sign(v / norm)
    return q


def entry_complexity(m) -> int:
    """Number of distinct ``|entry|`` values at 12 significant digits.

    Magnitudes below 1e-12 count as zero so that rounding residue does not
    masquerade as extra values.
    """
    a = np.abs(np.asarray(m, dtype=np.float64)).ravel()
    a = np.where(a < _ZERO_ENTRY, 0.0, a)
    return len({float(f"{x:.11e}") for x in a})


@dataclass(frozen=True)
class EquivalenceVerdict:
    passed: bool
    first_coord: float
    sqrt_n_mean: float
    tail_sum_squares: float
    w: float


def transform_equivalence_check(n: int, z, g: np.ndarray | None = None, rtol: float = 1e-10):
    """Check ``(G z)_1 = sqrt(n) mean(z)`` and ``sum_{i>=2} (G z)_i^2 = W``.

    Here the averaging row comes first, unlike ``O_n`` where it is last.
    Both comparisons are relative with an absolute floor scaled by
    ``sum z_i^2``, since either side may be exactly zero.
    """
    n = check_order(n)
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (n,):
        raise UsageError(f"expected a vector of length n={n}, got shape {z.shape}")
    if g is None:
        g = gram_schmidt_orthogonalize(n)
    y = g @ z
    stats = sample_stats(z)
    target = math.sqrt(n) * stats.mean
    tail = float(np.sum(y[1:] ** 2))
    scale = max(1.0, float(z @ z))
    ok_first = abs(y[0] - target) <= rtol * max(abs(target), math.sqrt(scale))
    ok_tail = abs(tail - stats.w) <= rtol * max(stats.w, scale)
    return EquivalenceVerdict(bool(ok_first and ok_tail), float(y[0]), target, tail, stats.w)
