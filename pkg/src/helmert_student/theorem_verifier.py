"""Monte Carlo verification of Student's theorem and its negative controls.

Every claim is checked on ``cfg.trials`` independent samples of size
``cfg.n``. A claim passes when every p-value is at least ``alpha`` and every
bounded statistic lies within its bound (bounds are closed). A pass means the
data are *consistent with* the claim; Monte Carlo can never prove it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import helmert_core
from .dist_functions import chi2_cdf_function, normal_cdf
from .errors import ConfigError
from .sampling import (
    NormalParams,
    batch_stats,
    chunked_draws,
    destandardize,
    standard_normal_batch,
)
from .stat_tests import independence_checks, ks_test, pearson_r

CLAIM_IDS = ("T2.1", "T2.2", "T2.3", "T1.1", "T1.3", "coords")
MIN_TRIALS = 1000
IDENTITY_RTOL = 1e-10
MEAN_ATOL = 1e-12

_STATEMENTS = {
    "T2.1": "sqrt(n)*mean(Z) ~ N(0,1)",
    "T2.2": "mean(Z) and W are independent",
    "T2.3": "W ~ chi2(n-1)",
    "T1.1": "mean(X) ~ N(mu, sigma^2/n)",
    "T1.3": "(n-1)S^2/sigma^2 ~ chi2(n-1)",
    "coords": "Y = O_n Z has i.i.d. N(0,1) coordinates",
}


@dataclass(frozen=True)
class VerificationConfig:
    n: int = 5
    trials: int = 50_000
    seed: int = 42
    alpha: float = 0.001
    bins: int = 4
    params: NormalParams | None = None
    workers: int = 1  # affects speed only, never results

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")
        if self.bins < 2:
            raise ConfigError(f"bins must be >= 2, got {self.bins}")
        floor = max(MIN_TRIALS, 25 * self.bins * self.bins)
        if self.trials < floor:
            raise ConfigError(f"trials must be >= {floor} for bins={self.bins}, got {self.trials}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "alpha": self.alpha,
            "bins": self.bins,
        }
        if self.params is not None:
            out["mu"] = self.params.mu
            out["sigma"] = self.params.sigma
        return out


@dataclass
class ClaimResult:
    claim_id: str
    statistics: dict[str, float] = field(default_factory=dict)
    p_values: dict[str, float] = field(default_factory=dict)
    bounds: dict[str, float] = field(default_factory=dict)
    passed: bool = False
    statement: str = ""
    control: str | None = None

    @property
    def verdict(self) -> str:
        word = "consistent with" if self.passed else "inconsistent with"
        return f"{word} {self.statement}"

    def to_dict(self) -> dict:
        out = {
            "claim_id": self.claim_id,
            "passed": self.passed,
            "verdict": self.verdict,
            "statistics": self.statistics,
            "p_values": self.p_values,
            "bounds": self.bounds,
        }
        if self.control is not None:
            out["control"] = self.control
        return out


def _finalize(result: ClaimResult, alpha: float) -> ClaimResult:
    ok = all(p >= alpha for p in result.p_values.values())
    for name, bound in result.bounds.items():
        ok &= abs(result.statistics[name]) <= bound
    result.passed = bool(ok)
    return result


def _draws(cfg: VerificationConfig) -> np.ndarray:
    return standard_normal_batch(cfg.seed, cfg.trials, cfg.n, cfg.workers).values


def _centered_exponential(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    return rng.standard_exponential(shape) - 1.0


def centered_exponential_draws(cfg: VerificationConfig) -> np.ndarray:
    """Exp(1) - 1 draws: mean 0, variance 1, but skewed. Same chunked seeding."""
    return chunked_draws(cfg.seed, cfg.trials, cfg.n, _centered_exponential, cfg.workers)


def _corr_bound(trials: int) -> float:
    return 4.0 / math.sqrt(trials)


def verify_claim1(cfg: VerificationConfig, z: np.ndarray | None = None, scale_n: int | None = None):
    """KS test of ``sqrt(n) * mean(Z)`` against N(0, 1).

    ``scale_n`` replaces the ``n`` under the square root (negative control).
    """
    z = _draws(cfg) if z is None else z
    mean, _ = batch_stats(z)
    root = math.sqrt(cfg.n if scale_n is None else scale_n)
    ks = ks_test(root * mean, normal_cdf)
    res = ClaimResult(
        "T2.1",
        statistics={"ks_d": ks.d_statistic},
        p_values={"ks": ks.p_value},
        statement=_STATEMENTS["T2.1"],
    )
    if scale_n is not None:
        res.control = f"wrong scaling sqrt({scale_n})"
    return _finalize(res, cfg.alpha)


def verify_claim2(cfg: VerificationConfig, z: np.ndarray | None = None, control: str | None = None):
    """Independence of ``mean(Z)`` and ``W``: two correlations and a contingency test."""
    z = _draws(cfg) if z is None else z
    mean, w = batch_stats(z)
    ind = independence_checks(mean, w, cfg.bins)
    bound = _corr_bound(cfg.trials)
    res = ClaimResult(
        "T2.2",
        statistics={
            "corr_mean_w": ind.pearson_ab,
            "corr_mean2_w": ind.pearson_a2b,
            "contingency_stat": ind.contingency_stat,
            "contingency_dof": float(ind.contingency_dof),
        },
        p_values={"contingency": ind.contingency_p},
        bounds={"corr_mean_w": bound, "corr_mean2_w": bound},
        statement=_STATEMENTS["T2.2"],
        control=control,
    )
    return _finalize(res, cfg.alpha)


def verify_claim3(cfg: VerificationConfig, z: np.ndarray | None = None, dof: int | None = None):
    """KS test of ``W`` against chi2(n-1) (or chi2(``dof``) as a negative control)."""
    z = _draws(cfg) if z is None else z
    _, w = batch_stats(z)
    k = cfg.n - 1 if dof is None else dof
    ks = ks_test(w, chi2_cdf_function(k))
    res = ClaimResult(
        "T2.3",
        statistics={"ks_d": ks.d_statistic, "dof": float(k)},
        p_values={"ks": ks.p_value},
        statement=_STATEMENTS["T2.3"],
    )
    if dof is not None:
        res.control = f"wrong dof chi2({dof})"
    return _finalize(res, cfg.alpha)


def verify_general(cfg: VerificationConfig, z: np.ndarray | None = None) -> list[ClaimResult]:
    """Theorem 1 on ``X = mu + sigma Z``; also checks ``(n-1)S^2/sigma^2 = W(Z)`` per trial."""
    if cfg.params is None:
        raise ConfigError("verify_general needs NormalParams (mu, sigma)")
    p = cfg.params
    z = _draws(cfg) if z is None else z
    x = destandardize(z, p)
    xbar, wx = batch_stats(x)
    _, wz = batch_stats(z)
    scaled_mean = (xbar - p.mu) / p.sigma * math.sqrt(cfg.n)
    # (n-1) S^2 is W of the raw sample
    scaled_var = wx / (p.sigma * p.sigma)
    rel = np.abs(scaled_var - wz) / np.maximum(np.abs(wz), np.finfo(np.float64).tiny)
    max_rel = float(rel.max())

    ks_mean = ks_test(scaled_mean, normal_cdf)
    t11 = ClaimResult(
        "T1.1",
        statistics={"ks_d": ks_mean.d_statistic},
        p_values={"ks": ks_mean.p_value},
        statement=_STATEMENTS["T1.1"],
    )
    ks_var = ks_test(scaled_var, chi2_cdf_function(cfg.n - 1))
    t13 = ClaimResult(
        "T1.3",
        statistics={"ks_d": ks_var.d_statistic, "identity_max_rel_err": max_rel},
        p_values={"ks": ks_var.p_value},
        bounds={"identity_max_rel_err": IDENTITY_RTOL},
        statement=_STATEMENTS["T1.3"],
    )
    return [_finalize(t11, cfg.alpha), _finalize(t13, cfg.alpha)]


def verify_transformed_coords(cfg: VerificationConfig, z: np.ndarray | None = None) -> ClaimResult:
    """Marginal KS tests and pairwise correlations of ``Y = O_n Z``.

    Also records the per-trial identities ``Y_n = sqrt(n) mean(Z)`` and
    ``sum_{i<n} Y_i^2 = W`` as bounded statistics.
    """
    n = cfg.n
    z = _draws(cfg) if z is None else z
    y = helmert_core.apply(n, z)
    mean, w = batch_stats(z)

    stats: dict[str, float] = {}
    pvals: dict[str, float] = {}
    bounds: dict[str, float] = {}
    for i in range(n):
        ks = ks_test(y[:, i], normal_cdf)
        stats[f"ks_d_y{i + 1}"] = ks.d_statistic
        pvals[f"ks_y{i + 1}"] = ks.p_value
    corr_bound = _corr_bound(cfg.trials)
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            worst = max(worst, abs(pearson_r(y[:, i], y[:, j])))
    stats["max_abs_pairwise_corr"] = worst
    bounds["max_abs_pairwise_corr"] = corr_bound

    mean_gap = np.abs(y[:, -1] - math.sqrt(n) * mean)
    mean_tol = MEAN_ATOL * np.maximum(1.0, np.abs(mean) * math.sqrt(n))
    stats["mean_identity_excess"] = float(np.max(mean_gap - mean_tol).clip(min=0.0))
    bounds["mean_identity_excess"] = 0.0
    tail = np.sum(y[:, :-1] ** 2, axis=1)
    rel = np.abs(tail - w) / np.maximum(w, np.finfo(np.float64).tiny)
    stats["w_identity_max_rel_err"] = float(rel.max())
    bounds["w_identity_max_rel_err"] = IDENTITY_RTOL

    res = ClaimResult("coords", stats, pvals, bounds, statement=_STATEMENTS["coords"])
    return _finalize(res, cfg.alpha)


@dataclass
class TheoremReport:
    config: VerificationConfig
    results: list[ClaimResult]
    certification: helmert_core.CertificationVerdict | None = None
    duration_ms: float = 0.0

    @property
    def overall_pass(self) -> bool:
        ok = all(r.passed for r in self.results)
        if self.certification is not None:
            ok &= self.certification.passed
        return ok

    def result(self, claim_id: str) -> ClaimResult:
        for r in self.results:
            if r.claim_id == claim_id:
                return r
        raise KeyError(claim_id)

    def to_dict(self) -> dict:
        out: dict = {"config": self.config.to_dict()}
        if self.certification is not None:
            out["certification"] = self.certification.to_dict()
        out["results"] = [r.to_dict() for r in self.results]
        out["overall_pass"] = self.overall_pass
        out["duration_ms"] = self.duration_ms
        return out


def run_all(cfg: VerificationConfig, claims: set[str] | None = None) -> TheoremReport:
    """Exact certification of ``O_n`` plus every requested claim.

    Theorem 1 claims run only when ``cfg.params`` is set. ``claims`` narrows
    the run to a subset of :data:`CLAIM_IDS`.
    """
    if claims is not None:
        unknown = set(claims) - set(CLAIM_IDS)
        if unknown:
            raise ConfigError(f"unknown claim ids: {sorted(unknown)}")
    wanted = set(CLAIM_IDS) if claims is None else set(claims)
    start = time.perf_counter()
    z = _draws(cfg)
    results: list[ClaimResult] = []
    if "T2.1" in wanted:
        results.append(verify_claim1(cfg, z))
    if "T2.2" in wanted:
        results.append(verify_claim2(cfg, z))
    if "T2.3" in wanted:
        results.append(verify_claim3(cfg, z))
    if cfg.params is not None and wanted & {"T1.1", "T1.3"}:
        results.extend(r for r in verify_general(cfg, z) if r.claim_id in wanted)
    if "coords" in wanted:
        results.append(verify_transformed_coords(cfg, z))
    cert = helmert_core.verify_orthogonality_exact(cfg.n)
    elapsed = (time.perf_counter() - start) * 1000.0
    return TheoremReport(cfg, results, cert, elapsed)


@dataclass
class ControlOutcome:
    """One falsification run: the targeted claim must fail, the others pass."""

    name: str
    target: str
    results: list[ClaimResult]

    @property
    def target_failed(self) -> bool:
        return not next(r for r in self.results if r.claim_id == self.target).passed

    @property
    def others_passed(self) -> bool:
        return all(r.passed for r in self.results if r.claim_id != self.target)

    @property
    def as_expected(self) -> bool:
        return self.target_failed and self.others_passed

    def to_dict(self) -> dict:
        return {
            "control": self.name,
            "target": self.target,
            "as_expected": self.as_expected,
            "results": [r.to_dict() for r in self.results],
        }


def run_negative_controls(cfg: VerificationConfig) -> list[ControlOutcome]:
    """Wrong scaling, wrong dof, and skewed inputs, each aimed at one claim.

    Only the targeted claim sees the falsified hypothesis or input; the
    other two Theorem 2 claims run on the normal draws as usual.
    """
    z = _draws(cfg)
    honest = {
        "T2.1": verify_claim1(cfg, z),
        "T2.2": verify_claim2(cfg, z),
        "T2.3": verify_claim3(cfg, z),
    }

    def swap(target: str, falsified: ClaimResult) -> list[ClaimResult]:
        return [falsified if cid == target else r for cid, r in honest.items()]

    expo = centered_exponential_draws(cfg)
    return [
        ControlOutcome(
            "wrong_scaling", "T2.1", swap("T2.1", verify_claim1(cfg, z, scale_n=cfg.n + 1))
        ),
        ControlOutcome("wrong_dof", "T2.3", swap("T2.3", verify_claim3(cfg, z, dof=cfg.n))),
        ControlOutcome(
            "exponential_inputs",
            "T2.2",
            swap("T2.2", verify_claim2(cfg, expo, control="centered exponential inputs")),
        ),
    ]

