"""Reference distribution functions: standard normal, chi-square, Kolmogorov.

All functions accept a scalar or an array and return the same shape (a
Python float for scalar input).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, UsageError

_SQRT2 = math.sqrt(2.0)
_TINY = 1e-300
_EPS = np.finfo(np.float64).eps
_MAX_ITER = 100_000

# Survival probabilities below this are reported as 0 with a flag.
P_VALUE_FLOOR = 1e-12

_erfc = np.frompyfunc(math.erfc, 1, 1)


def _finish(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


def normal_cdf(x):
    """Standard normal CDF, ``0.5 * erfc(-x / sqrt(2))``."""
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise UsageError("normal_cdf needs finite input")
    out = 0.5 * np.asarray(_erfc(-arr / _SQRT2), dtype=np.float64)
    out = np.where(arr <= -40.0, 0.0, np.where(arr >= 40.0, 1.0, out))
    return _finish(out, arr.ndim == 0)


def _check_dof(k) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError(f"degrees of freedom must be a positive integer, got {k!r}")
    return int(k)


def _log_prefactor(a: float, x: np.ndarray) -> np.ndarray:
    # log(x^a e^-x / Gamma(a)), valid for x > 0
    return a * np.log(x) - x - math.lgamma(a)


def _gamma_p_series(a: float, x: np.ndarray) -> np.ndarray:
    """P(a, x) by its power series; intended for x < a + 1."""
    term = np.full_like(x, 1.0 / a)
    total = term.copy()
    ap = a
    active = np.ones(x.shape, dtype=bool)
    for _ in range(_MAX_ITER):
        ap += 1.0
        term = np.where(active, term * x / ap, 0.0)
        total += term
        active &= np.abs(term) >= np.abs(total) * _EPS
        if not active.any():
            break
    else:
        raise ArithmeticError(f"incomplete gamma series did not converge for a={a}")
    return total * np.exp(_log_prefactor(a, x))


def _gamma_q_contfrac(a: float, x: np.ndarray) -> np.ndarray:
    """Q(a, x) by its continued fraction (modified Lentz); for x >= a + 1."""
    b = x + 1.0 - a
    c = np.full_like(x, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = b + an / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = np.where(active, d * c, 1.0)
        h *= delta
        active &= np.abs(delta - 1.0) >= _EPS
        if not active.any():
            break
    else:
        raise ArithmeticError(f"incomplete gamma continued fraction did not converge for a={a}")
    return np.exp(_log_prefactor(a, x)) * h


def regularized_gamma(a: float, x, upper: bool = False):
    """Regularized incomplete gamma ``P(a, x)`` (or ``Q = 1 - P`` if ``upper``).

    Series below ``x = a + 1``, continued fraction above; each branch
    returns its own tail directly so neither loses precision to ``1 - p``.
    """
    if not a > 0:
        raise DomainError(f"shape a must be positive, got {a}")
    arr = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("incomplete gamma needs x >= 0")
    flat = arr.reshape(-1)
    lower = np.zeros_like(flat)
    upper_vals = np.ones_like(flat)
    pos = flat > 0
    small = pos & (flat < a + 1.0)
    large = pos & ~small
    inf = np.isinf(flat)
    large &= ~inf
    if small.any():
        p = _gamma_p_series(a, flat[small])
        lower[small] = p
        upper_vals[small] = 1.0 - p
    if large.any():
        q = _gamma_q_contfrac(a, flat[large])
        lower[large] = 1.0 - q
        upper_vals[large] = q
    lower[inf] = 1.0
    upper_vals[inf] = 0.0
    out = upper_vals if upper else lower
    out = np.clip(out, 0.0, 1.0).reshape(arr.shape)
    return _finish(out, arr.ndim == 0)


def chi2_cdf(k: int, x):
    """CDF of the chi-square distribution with ``k`` degrees of freedom."""
    k = _check_dof(k)
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("chi2_cdf is defined for x >= 0")
    return regularized_gamma(k / 2.0, arr / 2.0)


def chi2_sf(k: int, x):
    """Survival function ``1 - chi2_cdf(k, x)``, computed without cancellation."""
    k = _check_dof(k)
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("chi2_sf is defined for x >= 0")
    return regularized_gamma(k / 2.0, arr / 2.0, upper=True)


def chi2_cdf_function(k: int):
    """Return ``x -> chi2_cdf(k, x)`` for use as a KS reference CDF."""
    k = _check_dof(k)
    return lambda x: chi2_cdf(k, x)


def kolmogorov_survival(lam: float) -> float:
    """Asymptotic Kolmogorov survival ``Q(lam) = 2 sum (-1)^(k-1) exp(-2 k^2 lam^2)``.

    The series is cut once a term drops below 1e-12 and the result is
    clamped to [0, 1].
    """
    lam = float(lam)
    if math.isnan(lam) or lam < 0:
        raise DomainError(f"kolmogorov_survival needs lambda >= 0, got {lam}")
    # Q(0.2) = 1 - 5e-13; below that the alternating series only adds rounding noise.
    if lam < 0.2:
        return 1.0
    total = 0.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < 1e-12:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))
