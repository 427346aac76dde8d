"""Extreme-value tail analysis: GPD, tail estimator, VaR/ES, POT pipeline.

The generalized Pareto distribution G(x) = 1 - (1 + xi x / beta)^(-1/xi)
(exponential branch 1 - e^(-x/beta) at xi = 0) approximates the law of
excesses over a high threshold. The tail estimator
F(x) = 1 - (N_u/n)(1 + xi (x-u)/beta)^(-1/xi) inverts in closed form to the
quantile / VaR estimator, and ES follows from the GPD mean-excess formula
ES_p = (VaR_p + beta - xi u) / (1 - xi).

The peaks-over-threshold pipeline selects the threshold (default: empirical
90th percentile, strict exceedance), fits the GPD to the excesses by MLE
and reads off point VaR/ES per probability level; interval estimates come
from a nonparametric bootstrap of the exceedances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _optimize
from .core import CalibrationResult, RngStream, require_finite
from .errors import (
    InvalidParam,
    InvalidProbability,
    OptimizerFailed,
    OutOfSupport,
    ShapeTooHeavy,
    TooFewExceedances,
)

_XI_ZERO = 1e-8  # |xi| below this uses the exponential branch for continuity


@dataclass(frozen=True)
class GpdParams:
    """Shape xi (any real) and scale beta > 0."""

    xi: float
    beta: float

    def __post_init__(self):
        require_finite(xi=self.xi, beta=self.beta)
        if self.beta <= 0:
            raise InvalidParam(f"GpdParams: beta must be > 0, got {self.beta}")

    @property
    def upper_endpoint(self) -> float:
        return -self.beta / self.xi if self.xi < -_XI_ZERO else np.inf


@dataclass(frozen=True)
class TailReport:
    """POT output: threshold, exceedance counts, GPD fit and the requested
    VaR/ES levels (with optional bootstrap percentile intervals)."""

    threshold: float
    n: int
    n_exceed: int
    gpd: GpdParams
    p_levels: tuple[float, ...]
    var: tuple[float, ...]
    es: tuple[float, ...]
    var_ci: tuple[tuple[float, float], ...] | None = None
    es_ci: tuple[tuple[float, float], ...] | None = None


def _check_support(x: np.ndarray, params: GpdParams) -> None:
    if np.any(x < 0):
        raise OutOfSupport("gpd: excesses must be >= 0")
    if np.any(x >= params.upper_endpoint):
        raise OutOfSupport(f"gpd: x beyond the upper endpoint {params.upper_endpoint:.6g}")


def gpd_cdf(x, params: GpdParams):
    """GPD distribution function on excesses x >= 0."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    _check_support(x, params)
    if abs(params.xi) < _XI_ZERO:
        out = 1.0 - np.exp(-x / params.beta)
    else:
        # exp/log1p keeps the power branch accurate arbitrarily close to
        # the exponential limit
        out = 1.0 - np.exp(-np.log1p(params.xi * x / params.beta) / params.xi)
    return float(out[0]) if scalar else out


def gpd_pdf(x, params: GpdParams):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    _check_support(x, params)
    if abs(params.xi) < _XI_ZERO:
        out = np.exp(-x / params.beta) / params.beta
    else:
        out = np.exp(-(1.0 / params.xi + 1.0) * np.log1p(params.xi * x / params.beta)) / params.beta
    return float(out[0]) if scalar else out


def gpd_quantile(p, params: GpdParams):
    """Inverse of gpd_cdf on (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or np.any(p >= 1):
        raise InvalidProbability("gpd_quantile: p must lie in (0, 1)")
    if abs(params.xi) < _XI_ZERO:
        return -params.beta * np.log1p(-p)
    return params.beta / params.xi * (np.power(1.0 - p, -params.xi) - 1.0)


def gpd_fit(exceedances, n_starts_extra: bool = True) -> CalibrationResult:
    """MLE of (xi, log beta) on excesses y = x - u > 0.

    The support constraint 1 + xi y / beta > 0 is enforced by rejecting
    infeasible points inside the search; the exponential fit (xi = 0 with
    beta at the sample mean) is always among the starting points, so the
    fitted likelihood can never fall below the nested exponential fit.
    """
    y = np.asarray(exceedances, dtype=float)
    if y.ndim != 1 or y.size < 30:
        raise TooFewExceedances(f"gpd_fit: need at least 30 exceedances, got {y.size}")
    if np.any(y < 0):
        raise InvalidParam("gpd_fit: excesses must be >= 0")
    m = y.mean()
    s2 = y.var()
    if s2 == 0 or m == 0 or np.ptp(y) == 0:
        raise OptimizerFailed("gpd_fit: degenerate exceedance sample")
    y_max = y.max()

    def ll(vec: np.ndarray) -> float:
        xi, lb = vec
        if not np.all(np.isfinite(vec)) or abs(xi) > 20:
            return -np.inf
        beta = np.exp(lb)
        if xi < 0 and y_max >= -beta / xi:
            return -np.inf
        if abs(xi) < _XI_ZERO:
            return float(-y.size * lb - y.sum() / beta)
        t = 1.0 + xi * y / beta
        if np.any(t <= 0):
            return -np.inf
        return float(-y.size * lb - (1.0 + 1.0 / xi) * np.sum(np.log(t)))

    xi0 = 0.5 * (1.0 - m * m / s2)  # method of moments
    starts = [np.array([xi0, np.log(m * max(1.0 - xi0, 0.1))]), np.array([0.0, np.log(m)])]
    if n_starts_extra:
        starts.append(np.array([0.3, np.log(m)]))
    best, best_ll, iters, ok = _optimize.maximize(ll, starts, maxiter=2000)
    params = GpdParams(float(best[0]), float(np.exp(best[1])))
    guess = GpdParams(float(xi0), float(m * max(1.0 - xi0, 0.1)))
    return CalibrationResult(params, best_ll, guess, iterations=iters, converged=ok)


def tail_cdf(x, fit: GpdParams, u: float, n: int, n_exceed: int):
    """Tail estimator F(x) = 1 - (N_u/n)(1 + xi (x-u)/beta)^(-1/xi), x >= u."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x < u):
        raise OutOfSupport("tail_cdf: defined for x >= u")
    if not 0 < n_exceed <= n:
        raise InvalidParam("tail_cdf: need 0 < n_exceed <= n")
    survival = (n_exceed / n) * (1.0 - gpd_cdf(x - u, fit))
    out = 1.0 - survival
    return float(out[0]) if scalar else out


def var_estimate(p: float, fit: GpdParams, u: float, n: int, n_exceed: int) -> float:
    """Tail quantile exceeded with probability p:
    VaR_p = u + (beta/xi)((n/N_u * p)^(-xi) - 1), exponential limit
    u + beta ln(N_u/(n p)) at xi = 0. Requires p below the exceedance
    frequency N_u/n so the estimate lies above the threshold."""
    if not 0 < n_exceed <= n:
        raise InvalidParam("var_estimate: need 0 < n_exceed <= n")
    if not 0.0 < p < n_exceed / n:
        raise InvalidProbability(
            f"var_estimate: p must lie in (0, N_u/n) = (0, {n_exceed / n:.6g}), got {p}"
        )
    ratio = n / n_exceed * p
    if abs(fit.xi) < _XI_ZERO:
        return float(u - fit.beta * np.log(ratio))
    return float(u + fit.beta / fit.xi * (ratio ** (-fit.xi) - 1.0))


def es_estimate(p: float, fit: GpdParams, u: float, n: int, n_exceed: int) -> float:
    """Expected shortfall ES_p = VaR_p + E(X - VaR_p | X > VaR_p)
    = (VaR_p + beta - xi u) / (1 - xi); infinite for xi >= 1."""
    if fit.xi >= 1.0:
        raise ShapeTooHeavy(f"es_estimate: xi = {fit.xi:.4f} >= 1 gives an infinite mean excess")
    var_p = var_estimate(p, fit, u, n, n_exceed)
    return float((var_p + fit.beta - fit.xi * u) / (1.0 - fit.xi))


def select_threshold(losses: np.ndarray, quantile: float) -> float:
    """Empirical order-statistic threshold; exceedance is strict, so
    quantile 0.90 on n = 1000 distinct losses leaves exactly 100 excesses."""
    if not 0 < quantile < 1:
        raise InvalidParam("select_threshold: quantile must lie in (0, 1)")
    k = int(np.floor(quantile * losses.size))
    if k < 1 or k >= losses.size:
        raise InvalidParam("select_threshold: quantile leaves no exceedances")
    return float(np.sort(losses)[k - 1])


def mean_excess_data(losses: np.ndarray, n_points: int = 30) -> np.ndarray:
    """(threshold, mean excess) pairs over a grid of candidate thresholds;
    plot data for threshold diagnostics."""
    losses = np.asarray(losses, dtype=float)
    qs = np.linspace(0.5, 0.98, n_points)
    out = []
    for q in qs:
        u = float(np.quantile(losses, q))
        exc = losses[losses > u] - u
        if exc.size >= 5:
            out.append((u, float(exc.mean())))
    return np.asarray(out)


def pot_pipeline(
    losses,
    p_levels,
    threshold_quantile: float = 0.90,
    threshold: float | None = None,
    n_boot: int = 1000,
    rng: RngStream | None = None,
    ci_level: float = 0.95,
) -> TailReport:
    """Peaks-over-threshold in three steps: select the threshold, fit the
    GPD to the strict exceedances, compute VaR/ES per level.

    ``threshold`` overrides the quantile policy when given explicitly.
    ``n_boot`` > 0 adds bootstrap percentile intervals (resampling the
    exceedances with a split deterministic stream).
    """
    losses = np.asarray(losses, dtype=float)
    if losses.ndim != 1:
        raise InvalidParam("pot_pipeline: losses must be 1-d")
    n = losses.size
    if threshold is None and n < 300:
        raise InvalidParam("pot_pipeline: need n >= 300 for the quantile policy")
    u = float(threshold) if threshold is not None else select_threshold(losses, threshold_quantile)
    excesses = losses[losses > u] - u
    if excesses.size < 30:
        raise TooFewExceedances(f"pot_pipeline: only {excesses.size} exceedances above u = {u:.6g}")
    fit = gpd_fit(excesses)
    n_exceed = excesses.size
    p_levels = tuple(float(p) for p in np.atleast_1d(p_levels))
    var = tuple(var_estimate(p, fit.params, u, n, n_exceed) for p in p_levels)
    es = tuple(es_estimate(p, fit.params, u, n, n_exceed) for p in p_levels)
    var_ci = es_ci = None
    if n_boot > 0:
        gen = (rng or RngStream(0)).generator()
        var_bs = np.empty((n_boot, len(p_levels)))
        es_bs = np.empty((n_boot, len(p_levels)))
        var_bs.fill(np.nan)
        es_bs.fill(np.nan)
        for bidx in range(n_boot):
            sample = excesses[gen.integers(0, n_exceed, n_exceed)]
            try:
                bf = gpd_fit(sample, n_starts_extra=False)
            except (OptimizerFailed, TooFewExceedances):
                continue
            for j, p in enumerate(p_levels):
                try:
                    var_bs[bidx, j] = var_estimate(p, bf.params, u, n, n_exceed)
                    es_bs[bidx, j] = es_estimate(p, bf.params, u, n, n_exceed)
                except (ShapeTooHeavy, InvalidProbability):
                    pass
        lo_q, hi_q = (1.0 - ci_level) / 2.0, (1.0 + ci_level) / 2.0
        var_ci = tuple(
            (float(np.nanquantile(var_bs[:, j], lo_q)), float(np.nanquantile(var_bs[:, j], hi_q)))
            for j in range(len(p_levels))
        )
        es_ci = tuple(
            (float(np.nanquantile(es_bs[:, j], lo_q)), float(np.nanquantile(es_bs[:, j], hi_q)))
            for j in range(len(p_levels))
        )
    return TailReport(u, n, n_exceed, fit.params, p_levels, var, es, var_ci, es_ci)
