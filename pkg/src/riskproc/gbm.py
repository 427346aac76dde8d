"""Geometric Brownian motion.

Exact simulation of the level process, closed-form maximum likelihood on
log-returns, confidence intervals for the return mean and variance,
simulated (bootstrap) parameter distributions and analytic horizon
percentiles of the lognormal terminal value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    CalibrationResult,
    LogReturns,
    PathSet,
    RngStream,
    paths_from_log_increments,
    require_finite,
)
from .errors import DegenerateSeries, InvalidParam
from .specfun import chi2_quantile, normal_quantile


@dataclass(frozen=True)
class GbmParams:
    """Drift per year and volatility per square-root year."""

    mu: float
    sigma: float

    def __post_init__(self):
        require_finite(mu=self.mu, sigma=self.sigma)
        if self.sigma < 0:
            raise InvalidParam(f"GbmParams: sigma must be >= 0, got {self.sigma}")

    def step_moments(self, dt: float) -> tuple[float, float]:
        """Mean and variance of one log-return over a step of length dt."""
        return (self.mu - 0.5 * self.sigma**2) * dt, self.sigma**2 * dt


def simulate(
    params: GbmParams,
    s0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
) -> PathSet:
    """Exact sampling of S(t_{i+1}) = S(t_i) exp((mu - sigma^2/2) dt + sigma sqrt(dt) Z).

    No discretisation error at any step size. Paths stay strictly positive.
    Parallel runs must use split streams, one per worker.
    """
    if s0 <= 0 or dt <= 0 or n_steps < 1 or n_paths < 1:
        raise InvalidParam("gbm.simulate: need s0 > 0, dt > 0, n_steps >= 1, n_paths >= 1")
    z = rng.generator().standard_normal((n_paths, n_steps))
    increments = (params.mu - 0.5 * params.sigma**2) * dt + params.sigma * np.sqrt(dt) * z
    return paths_from_log_increments(s0, increments, dt, rng)


def log_likelihood(x: LogReturns, params: GbmParams) -> float:
    """Gaussian log-likelihood of log-returns under the given parameters."""
    m, v = params.step_moments(x.dt)
    if v <= 0:
        raise InvalidParam("gbm.log_likelihood: needs sigma > 0")
    r = x.values - m
    n = x.values.size
    return float(-0.5 * n * np.log(2.0 * np.pi * v) - 0.5 * np.sum(r * r) / v)


def calibrate(x: LogReturns) -> CalibrationResult:
    """Closed-form MLE from the sample mean and biased variance of returns.

    m = sum(x)/n and v = sum((x-m)^2)/n map back to the process scale via
    sigma = sqrt(v/dt) and mu = m/dt + sigma^2/2. The drift estimate uses
    only the first and last level of the underlying series (the inner
    observations cancel telescopically), which is why drift uncertainty
    shrinks only with the total observation window.
    """
    r = x.values
    n = r.size
    if n < 2:
        raise InvalidParam("gbm.calibrate: need n >= 2")
    m = r.mean()
    v = np.mean((r - m) ** 2)
    if v == 0 or np.ptp(r) == 0:
        raise DegenerateSeries("gbm.calibrate: zero sample variance")
    sigma = np.sqrt(v / x.dt)
    mu = m / x.dt + 0.5 * sigma**2
    params = GbmParams(float(mu), float(sigma))
    ll = log_likelihood(x, params)
    stderr = {
        "mu": float(np.sqrt(v / n) / x.dt),
        "sigma": float(sigma / np.sqrt(2.0 * n)),
    }
    return CalibrationResult(params, ll, params, iterations=0, converged=True, stderr_estimates=stderr)


def ci_mean(x: LogReturns, level: float) -> tuple[float, float]:
    """Confidence interval for the per-step return mean: C_n/n +- z sqrt(v/n)."""
    if not 0 < level < 1:
        raise InvalidParam("ci_mean: level must be in (0, 1)")
    r = x.values
    n = r.size
    if n < 2:
        raise InvalidParam("ci_mean: need n >= 2")
    m = r.mean()
    v = np.mean((r - m) ** 2)
    z = float(normal_quantile((1.0 + level) / 2.0))
    half = z * np.sqrt(v) / np.sqrt(n)
    return float(m - half), float(m + half)


def ci_variance(x: LogReturns, level: float) -> tuple[float, float]:
    """Confidence interval for the per-step return variance.

    (n v / q_U, n v / q_L) with q_L, q_U the chi-squared quantiles at
    (1 -+ level)/2 on n degrees of freedom -- n, not n - 1, matching the
    divide-by-n variance convention.
    """
    if not 0 < level < 1:
        raise InvalidParam("ci_variance: level must be in (0, 1)")
    r = x.values
    n = r.size
    if n < 2:
        raise InvalidParam("ci_variance: need n >= 2")
    v = np.mean((r - r.mean()) ** 2)
    if v == 0:
        raise DegenerateSeries("ci_variance: zero sample variance")
    q_lo = float(chi2_quantile((1.0 - level) / 2.0, n))
    q_hi = float(chi2_quantile((1.0 + level) / 2.0, n))
    return float(n * v / q_hi), float(n * v / q_lo)


def bootstrap_params(
    params: GbmParams,
    n_obs: int,
    dt: float,
    n_boot: int,
    rng: RngStream,
) -> np.ndarray:
    """Simulated sampling distribution of (m, v).

    Each replication draws a fresh path of ``n_obs`` returns from ``params``
    and re-estimates the per-step mean and biased variance. Returns an
    (n_boot, 2) array of estimates.
    """
    if n_boot < 1 or n_obs < 1:
        raise InvalidParam("bootstrap_params: need n_boot >= 1 and n_obs >= 1")
    if dt <= 0:
        raise InvalidParam("bootstrap_params: need dt > 0")
    m, v = params.step_moments(dt)
    gen = rng.generator()
    out = np.empty((n_boot, 2))
    for b in range(n_boot):
        r = m + np.sqrt(v) * gen.standard_normal(n_obs)
        mb = r.mean()
        out[b, 0] = mb
        out[b, 1] = np.mean((r - mb) ** 2)
    return out


def horizon_percentile(params: GbmParams, s0: float, horizon: float, p: float) -> float:
    """Lognormal quantile of S(T): s0 exp((mu - sigma^2/2) T + sigma sqrt(T) z_p)."""
    if s0 <= 0 or horizon <= 0:
        raise InvalidParam("horizon_percentile: need s0 > 0 and horizon > 0")
    if not 0 < p < 1:
        raise InvalidParam("horizon_percentile: need p in (0, 1)")
    z = float(normal_quantile(p))
    return float(s0 * np.exp((params.mu - 0.5 * params.sigma**2) * horizon + params.sigma * np.sqrt(horizon) * z))
