"""Empirical tests: ECDF, one-sample Kolmogorov-Smirnov, Pearson correlation,
and a quantile-binned chi-square test of independence."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dist_functions import P_VALUE_FLOOR, chi2_sf, kolmogorov_survival
from .errors import DegeneracyError, InsufficientSampleError, UsageError

CDF = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class EcdfSample:
    values: np.ndarray
    size: int

    @classmethod
    def from_sample(cls, sample) -> "EcdfSample":
        values = np.sort(np.asarray(sample, dtype=np.float64).ravel(), kind="stable")
        if values.size == 0:
            raise UsageError("empty sample")
        return cls(values, values.size)

    def __call__(self, x):
        """Fraction of the sample that is ``<= x``."""
        return np.searchsorted(self.values, x, side="right") / self.size


@dataclass(frozen=True)
class KsResult:
    d_statistic: float
    sample_size: int
    p_value: float
    p_below_floor: bool = False


def _floored(p: float) -> tuple[float, bool]:
    if p < P_VALUE_FLOOR:
        return 0.0, True
    return float(p), False


def ks_test(sample, cdf: CDF) -> KsResult:
    """One-sample two-sided KS test of ``sample`` against ``cdf``.

    The p-value uses the asymptotic Kolmogorov law with the finite-sample
    scaling ``sqrt(N) + 0.12 + 0.11 / sqrt(N)``.
    """
    ecdf = EcdfSample.from_sample(sample)
    N = ecdf.size
    f = np.asarray(cdf(ecdf.values), dtype=np.float64)
    i = np.arange(1, N + 1, dtype=np.float64)
    d_plus = np.max(i / N - f)
    d_minus = np.max(f - (i - 1) / N)
    d = float(min(1.0, max(0.0, d_plus, d_minus)))
    root = math.sqrt(N)
    p, flag = _floored(kolmogorov_survival((root + 0.12 + 0.11 / root) * d))
    return KsResult(d, N, p, flag)


def pearson_r(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise UsageError("pearson_r needs two 1-d vectors of equal length")
    if a.size < 2:
        raise UsageError("pearson_r needs at least two points")
    da = a - a.mean()
    db = b - b.mean()
    saa = float(da @ da)
    sbb = float(db @ db)
    if saa == 0.0 or sbb == 0.0:
        raise DegeneracyError("correlation is undefined for a constant vector")
    r = float(da @ db) / math.sqrt(saa * sbb)
    return min(1.0, max(-1.0, r))


def quantile_bins(v, bins: int) -> np.ndarray:
    """Equal-count bin labels ``0..bins-1``; ties are split by stable sorted rank."""
    v = np.asarray(v)
    order = np.argsort(v, kind="stable")
    labels = np.empty(v.size, dtype=np.int64)
    labels[order] = (np.arange(v.size, dtype=np.int64) * bins) // v.size
    return labels


@dataclass(frozen=True)
class ContingencyResult:
    statistic: float
    dof: int
    p_value: float
    p_below_floor: bool = False


def contingency_independence(a, b, bins: int) -> ContingencyResult:
    """Chi-square independence test on a ``bins x bins`` quantile table."""
    if bins < 2:
        raise UsageError(f"bins must be >= 2, got {bins}")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise UsageError("contingency_independence needs two 1-d vectors of equal length")
    N = a.size
    if N < 5 * bins * bins:
        raise InsufficientSampleError(
            f"N={N} is below 5*bins^2={5 * bins * bins}; expected cell counts would drop under 5"
        )
    table = np.zeros((bins, bins), dtype=np.int64)
    np.add.at(table, (quantile_bins(a, bins), quantile_bins(b, bins)), 1)
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / N
    stat = float(np.sum((table - expected) ** 2 / expected))
    dof = (bins - 1) ** 2
    p, flag = _floored(chi2_sf(dof, stat))
    return ContingencyResult(stat, dof, p, flag)


@dataclass(frozen=True)
class IndependenceResult:
    pearson_ab: float
    pearson_a2b: float
    contingency_stat: float
    contingency_dof: int
    contingency_p: float
    contingency_p_below_floor: bool = False


def independence_checks(a, b, bins: int) -> IndependenceResult:
    """corr(a, b), corr(a^2, b) and the binned contingency test."""
    a = np.asarray(a, dtype=np.float64)
    table = contingency_independence(a, b, bins)
    return IndependenceResult(
        pearson_r(a, b),
        pearson_r(a * a, b),
        table.statistic,
        table.dof,
        table.p_value,
        table.p_below_floor,
    )
