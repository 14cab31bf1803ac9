"""Construction, application and exact certification of the Helmert matrix.

For an order ``n >= 2`` the matrix ``O_n`` has rows

    row i (1 <= i <= n-1):  (1, ..., 1, -i, 0, ..., 0) / sqrt(i (i+1))
    row n:                  (1, ..., 1) / sqrt(n)

Every entry is ``coefficient / sqrt(radicand)`` with integer coefficient and
radicand, and all entries of one row share a radicand. The exact checker
uses this to certify ``O_n O_n^T = I`` with integer arithmetic only: the dot
product of rows ``i`` and ``j`` equals ``sum_k c_ik c_jk / sqrt(r_i r_j)``.

Indices in the public API, in messages and in reports are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, OrderTooSmallError, UsageError

MIN_ORDER = 2
MAX_ORDER = 10**6
DENSE_CERT_MAX_ORDER = 16_384  # 2 GiB of int64 coefficients

_INT64_MAX = np.iinfo(np.int64).max


def check_order(n: int) -> int:
    """Validate a matrix order and return it as a plain ``int``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise UsageError(f"order must be an integer, got {n!r}")
    n = int(n)
    if n < MIN_ORDER:
        raise OrderTooSmallError(f"order n={n} is below the minimum order {MIN_ORDER}")
    if n > MAX_ORDER:
        raise CapacityError(f"order n={n} exceeds the supported maximum {MAX_ORDER}")
    return n


@dataclass(frozen=True)
class SymbolicEntry:
    """Exact matrix entry ``coefficient / sqrt(radicand)``."""

    coefficient: int
    radicand: int

    def __post_init__(self) -> None:
        if self.radicand < 1:
            raise UsageError(f"radicand must be >= 1, got {self.radicand}")

    @property
    def value(self) -> float:
        return self.coefficient / math.sqrt(self.radicand)

    def __str__(self) -> str:
        if self.coefficient == 0:
            return "0"
        return f"{self.coefficient}/√{self.radicand}"


def symbolic_entry(n: int, i: int, j: int) -> SymbolicEntry:
    """Return entry ``(i, j)`` (1-based) of ``O_n`` in exact form."""
    n = check_order(n)
    if not (1 <= i <= n and 1 <= j <= n):
        raise UsageError(f"index ({i}, {j}) out of range for order {n}; valid range is 1..{n}")
    if i == n:
        return SymbolicEntry(1, n)
    radicand = i * (i + 1)
    if j <= i:
        return SymbolicEntry(1, radicand)
    if j == i + 1:
        return SymbolicEntry(-i, radicand)
    return SymbolicEntry(0, 1)


@dataclass(frozen=True)
class SymbolicMatrix:
    """Integer coefficient table plus one radicand per row.

    ``coefficients[i-1, j-1]`` is the coefficient of entry ``(i, j)`` and
    ``radicands[i-1]`` is the radicand shared by row ``i``. Zero entries carry
    the row radicand here, which does not change their value.
    """

    coefficients: np.ndarray
    radicands: np.ndarray

    @property
    def order(self) -> int:
        return self.coefficients.shape[0]

    def entry(self, i: int, j: int) -> SymbolicEntry:
        c = int(self.coefficients[i - 1, j - 1])
        return SymbolicEntry(c, int(self.radicands[i - 1]) if c else 1)

    def to_dense(self) -> np.ndarray:
        return self.coefficients / np.sqrt(self.radicands.astype(np.float64))[:, None]

    def perturbed(self, i: int, j: int, delta: int = 1) -> "SymbolicMatrix":
        """Copy with coefficient ``(i, j)`` (1-based) shifted by ``delta``."""
        coefficients = self.coefficients.copy()
        coefficients[i - 1, j - 1] += delta
        return SymbolicMatrix(coefficients, self.radicands.copy())


def symbolic_matrix(n: int) -> SymbolicMatrix:
    """Vectorized table of :func:`symbolic_entry` over all ``(i, j)``."""
    n = check_order(n)
    i = np.arange(1, n + 1, dtype=np.int64)[:, None]
    j = np.arange(1, n + 1, dtype=np.int64)[None, :]
    coefficients = np.where(j <= i, 1, np.where(j == i + 1, -i, 0)).astype(np.int64)
    coefficients[n - 1, :] = 1
    radicands = np.arange(1, n + 1, dtype=np.int64) * np.arange(2, n + 2, dtype=np.int64)
    radicands[n - 1] = n
    return SymbolicMatrix(coefficients, radicands)


def build_dense(n: int) -> np.ndarray:
    """Return ``O_n`` as an ``(n, n)`` float64 array.

    Each entry is evaluated once as ``c / sqrt(r)``, so the base cases match
    their closed forms to the last bit.
    """
    return symbolic_matrix(n).to_dense()


# ---------------------------------------------------------------------------
# exact certification


@dataclass(frozen=True)
class ExactGramEntry:
    """Entry ``p_ij`` of ``O_n O_n^T`` as ``integer_sum / sqrt(shared_radicand)``."""

    i: int
    j: int
    integer_sum: int
    shared_radicand: int


def gram_case(n: int, i: int, j: int) -> int:
    """Classify a row pair into the four cases of the orthogonality argument.

    1: diagonal, i < n.   2: diagonal, i = n.
    3: one of the rows is the averaging row n.   4: off-diagonal, both < n.
    """
    if i == j:
        return 2 if i == n else 1
    if i == n or j == n:
        return 3
    return 4


@dataclass(frozen=True)
class CertificationVerdict:
    order: int
    passed: bool
    failing: ExactGramEntry | None = None
    expected_sum: int | None = None
    pairs_checked: int = 0

    @property
    def failing_pair(self) -> tuple[int, int] | None:
        return None if self.failing is None else (self.failing.i, self.failing.j)

    @property
    def failing_case(self) -> int | None:
        if self.failing is None:
            return None
        return gram_case(self.order, self.failing.i, self.failing.j)

    def to_dict(self) -> dict:
        out = {"n": self.order, "passed": self.passed, "pairs_checked": self.pairs_checked}
        if self.failing is not None:
            out["failing_pair"] = [self.failing.i, self.failing.j]
            out["case"] = self.failing_case
            out["integer_sum"] = self.failing.integer_sum
            out["expected_sum"] = self.expected_sum
            out["shared_radicand"] = self.failing.shared_radicand
        return out


def _check_capacity(table: SymbolicMatrix) -> None:
    n = table.order
    if n > MAX_ORDER:
        raise CapacityError(f"order {n} exceeds {MAX_ORDER}")
    big = int(np.abs(table.coefficients).max(initial=0))
    if big * big * n > _INT64_MAX:
        raise CapacityError("row dot products could overflow 64-bit integers")
    if n > DENSE_CERT_MAX_ORDER:
        raise CapacityError(
            f"order {n} needs an {n}x{n} integer table; dense certification stops at "
            f"{DENSE_CERT_MAX_ORDER}"
        )


def _first_failure(table: SymbolicMatrix, gram: np.ndarray) -> CertificationVerdict:
    n = table.order
    expected = np.diag(table.radicands)
    bad = np.argwhere(np.triu(gram != expected))
    npairs = n * (n + 1) // 2
    if bad.size == 0:
        return CertificationVerdict(n, True, pairs_checked=npairs)
    a, b = (int(v) for v in bad[0])
    entry = ExactGramEntry(
        a + 1, b + 1, int(gram[a, b]), int(table.radicands[a]) * int(table.radicands[b])
    )
    return CertificationVerdict(n, False, entry, int(expected[a, b]), npairs)


def verify_orthogonality_exact(
    n: int | None = None, table: SymbolicMatrix | None = None
) -> CertificationVerdict:
    """Certify ``O_n O_n^T = I`` with integer arithmetic only.

    For every row pair the integer sum ``sum_k c_ik c_jk`` is compared with
    the value that makes ``p_ij`` equal to the identity entry: the row's
    radicand on the diagonal (``i(i+1)`` for ``i < n``, ``n`` for the
    averaging row), and zero off the diagonal. ``table`` lets callers
    certify an arbitrary coefficient table, e.g. a perturbed one; the first
    failing pair in row-major order over the upper triangle is reported.
    """
    if table is None:
        if n is None:
            raise UsageError("give an order or a coefficient table")
        table = symbolic_matrix(n)
    _check_capacity(table)
    gram = table.coefficients @ table.coefficients.T
    return _first_failure(table, gram)


def certify_orders(orders: Iterable[int]) -> list[CertificationVerdict]:
    """Exact certification of many orders, sharing work between them.

    Rows ``1..n-1`` of ``O_n`` coincide with rows ``1..n-1`` of ``O_N``
    (``N > n``) truncated to ``n`` columns, and row ``i`` vanishes beyond
    column ``i+1``. Their Gram block is therefore a leading block of the
    Gram matrix of the largest order. Each order's own table is still built
    independently and compared coefficient by coefficient against the shared
    block before reuse; the averaging-row pairs are summed afresh.
    """
    orders = [check_order(n) for n in orders]
    if not orders:
        return []
    top = max(orders)
    big = symbolic_matrix(top)
    _check_capacity(big)
    helmert_rows = big.coefficients[: top - 1]
    shared_gram = helmert_rows @ helmert_rows.T
    verdicts = []
    for n in orders:
        table = symbolic_matrix(n)
        head = table.coefficients[: n - 1]
        reusable = np.array_equal(head, big.coefficients[: n - 1, :n]) and not np.any(
            big.coefficients[: n - 1, n:]
        )
        if not reusable:
            verdicts.append(verify_orthogonality_exact(table=table))
            continue
        gram = np.empty((n, n), dtype=np.int64)
        gram[: n - 1, : n - 1] = shared_gram[: n - 1, : n - 1]
        last = table.coefficients[n - 1]
        cross = head @ last
        gram[: n - 1, n - 1] = cross
        gram[n - 1, : n - 1] = cross
        gram[n - 1, n - 1] = last @ last
        verdicts.append(_first_failure(table, gram))
    return verdicts


# ---------------------------------------------------------------------------
# matrix-free application


def _as_input(n: int, z: Sequence[float] | np.ndarray) -> np.ndarray:
    n = check_order(n)
    arr = np.asarray(z, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != n:
        got = "a scalar" if arr.ndim == 0 else f"length {arr.shape[-1]}"
        raise UsageError(f"expected vectors of length n={n}, got {got}")
    return arr


def _row_scales(n: int) -> np.ndarray:
    i = np.arange(1, n, dtype=np.float64)
    return np.sqrt(i * (i + 1.0))


def apply(n: int, z: Sequence[float] | np.ndarray) -> np.ndarray:
    """Compute ``O_n z`` in O(n) via prefix sums.

    ``y_i = (P_i - i z_{i+1}) / sqrt(i(i+1))`` for ``i < n`` and
    ``y_n = sqrt(n) * mean(z)`` with ``P_i = z_1 + ... + z_i``. Works along the
    last axis, so a ``(trials, n)`` batch is transformed row by row.
    """
    z = _as_input(n, z)
    prefix = np.cumsum(z, axis=-1)
    i = np.arange(1, n, dtype=np.float64)
    y = np.empty_like(z)
    y[..., : n - 1] = (prefix[..., : n - 1] - i * z[..., 1:]) / _row_scales(n)
    # pairwise-summed total: the running prefix drifts by ~n*eps, too much for y_n
    y[..., n - 1] = math.sqrt(n) * (np.sum(z, axis=-1) / n)
    return y


def apply_transpose(n: int, y: Sequence[float] | np.ndarray) -> np.ndarray:
    """Compute ``O_n^T y`` in O(n) via suffix sums.

    ``x_k = sum_{i=k}^{n-1} a_i - (k-1) a_{k-1} + y_n / sqrt(n)`` where
    ``a_i = y_i / sqrt(i(i+1))`` and the middle term is absent for ``k = 1``.
    """
    y = _as_input(n, y)
    a = y[..., : n - 1] / _row_scales(n)
    suffix = np.cumsum(a[..., ::-1], axis=-1)[..., ::-1]
    x = np.empty_like(y)
    x[..., : n - 1] = suffix
    x[..., n - 1] = 0.0
    k_minus_1 = np.arange(1, n, dtype=np.float64)
    x[..., 1:] -= k_minus_1 * a
    x += (y[..., n - 1] / math.sqrt(n))[..., None]
    return x
