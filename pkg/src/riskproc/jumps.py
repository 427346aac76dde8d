"""GBM with compound-Poisson lognormal jumps.

Log-returns follow x = mu_star*dt + sigma*sqrt(dt)*eps + dJ_star, where
dJ_star sums the log jump sizes arriving in the step minus its mean
lam*dt*mu_y, so jump shocks have zero mean, and
mu_star = mu + lam*mu_y - sigma^2/2. The one-step density is an infinite
Poisson-weighted mixture of Gaussians, which the likelihood truncates once
the cumulative Poisson mass reaches 1 - 1e-12 (hard cap 200 terms).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from . import _optimize, gbm
from .core import (
    CalibrationResult,
    LogReturns,
    PathSet,
    RngStream,
    paths_from_log_increments,
    require_finite,
)
from .errors import InvalidParam

_MAX_TERMS = 200


@dataclass(frozen=True)
class JumpGbmParams:
    """Diffusion drift/vol plus jump intensity (per year) and lognormal
    jump-size parameters (mean and std of log Y)."""

    mu: float
    sigma: float
    lam: float
    mu_y: float
    sigma_y: float

    def __post_init__(self):
        require_finite(mu=self.mu, sigma=self.sigma, lam=self.lam,
                       mu_y=self.mu_y, sigma_y=self.sigma_y)
        if self.sigma < 0 or self.lam < 0 or self.sigma_y < 0:
            raise InvalidParam("JumpGbmParams: sigma, lam and sigma_y must be >= 0")


def simulate(
    params: JumpGbmParams,
    s0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
) -> PathSet:
    """Per step: n ~ Poisson(lam dt) jumps, jump sum n*mu_y + sigma_y*sqrt(n)*Z',
    compensated by lam*dt*mu_y; exponentiated cumulative returns.

    With lam = 0 the output is bit-identical to gbm.simulate on the same
    stream (the diffusion block is drawn first).
    """
    if s0 <= 0 or dt <= 0 or n_steps < 1 or n_paths < 1:
        raise InvalidParam("jumps.simulate: need s0 > 0, dt > 0, n_steps >= 1, n_paths >= 1")
    gen = rng.generator()
    z = gen.standard_normal((n_paths, n_steps))
    counts = gen.poisson(params.lam * dt, size=(n_paths, n_steps))
    zj = gen.standard_normal((n_paths, n_steps))
    jump_star = (
        counts * params.mu_y
        + params.sigma_y * np.sqrt(counts) * zj
        - params.lam * dt * params.mu_y
    )
    mu_star = params.mu + params.lam * params.mu_y - 0.5 * params.sigma**2
    increments = mu_star * dt + params.sigma * np.sqrt(dt) * z + jump_star
    return paths_from_log_increments(s0, increments, dt, rng)


def _mixture_terms(params: JumpGbmParams, dt: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Poisson log-weights and component moments, truncated at 1 - 1e-12 mass."""
    if dt <= 0:
        raise InvalidParam("jumps: need dt > 0")
    if params.sigma <= 0:
        raise InvalidParam("jumps: density needs sigma > 0")
    rate = params.lam * dt
    if rate == 0.0:
        j = np.array([0])
        log_w = np.array([0.0])
    else:
        j = np.arange(_MAX_TERMS + 1)
        log_w = j * np.log(rate) - rate - gammaln(j + 1.0)
        cum = np.cumsum(np.exp(log_w))
        keep = int(np.searchsorted(cum, 1.0 - 1e-12)) + 1
        j = j[:keep]
        log_w = log_w[:keep]
    means = (params.mu - 0.5 * params.sigma**2) * dt + j * params.mu_y
    variances = params.sigma**2 * dt + j * params.sigma_y**2
    return log_w, means, variances


def mixture_logpdf(x, params: JumpGbmParams, dt: float) -> np.ndarray:
    """Log of the Poisson-weighted Gaussian-mixture return density."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    log_w, means, variances = _mixture_terms(params, dt)
    z2 = (x[:, None] - means[None, :]) ** 2 / variances[None, :]
    log_terms = log_w[None, :] - 0.5 * (np.log(2.0 * np.pi * variances)[None, :] + z2)
    return logsumexp(log_terms, axis=1)


def mixture_density(x, params: JumpGbmParams, dt: float):
    """Density of one log-return over a step dt; nonnegative, integrates to 1."""
    out = np.exp(mixture_logpdf(x, params, dt))
    return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out


def mixture_cdf(x, params: JumpGbmParams, dt: float):
    """Mixture CDF (exact Gaussian-component sum, no quadrature)."""
    from .specfun import normal_cdf

    x = np.atleast_1d(np.asarray(x, dtype=float))
    log_w, means, variances = _mixture_terms(params, dt)
    w = np.exp(log_w)
    w = w / w.sum()
    z = (x[:, None] - means[None, :]) / np.sqrt(variances)[None, :]
    return normal_cdf(z) @ w


def log_likelihood(x: LogReturns, params: JumpGbmParams) -> float:
    return float(np.sum(mixture_logpdf(x.values, params, x.dt)))


_LAMBDA_GRID = (0.1, 1.0, 5.0, 10.0, 25.0)  # per year; multimodality guard


def calibrate(x: LogReturns) -> CalibrationResult:
    """Poisson-mixture MLE with a coarse multi-start grid over the intensity.

    The likelihood can be multimodal in lam, so each fit starts from every
    grid intensity plus a jump-free start matching the plain Gaussian fit;
    the best final vertex wins. Positivity of sigma, lam and sigma_y is
    enforced through log transforms.
    """
    r = x.values
    dt = x.dt
    n = r.size
    if n < 100:
        raise InvalidParam("jumps.calibrate: need n >= 100")
    base = gbm.calibrate(x)
    m0 = r.mean()
    v0 = np.mean((r - m0) ** 2)
    sd0 = np.sqrt(v0)

    def ll(vec: np.ndarray) -> float:
        a, ls, ll_rate, muy, lsy = vec
        if not np.all(np.isfinite(vec)):
            return -np.inf
        sigma_step = np.exp(ls)  # sigma * sqrt(dt)
        rate = np.exp(ll_rate)   # lam * dt
        sigma_y = np.exp(lsy)
        if rate > 50.0:
            return -np.inf
        p = JumpGbmParams(
            mu=a / dt + 0.5 * sigma_step**2 / dt,
            sigma=sigma_step / np.sqrt(dt),
            lam=rate / dt,
            mu_y=muy,
            sigma_y=sigma_y,
        )
        return float(np.sum(mixture_logpdf(r, p, dt)))

    skew_sign = 1.0 if np.mean((r - m0) ** 3) >= 0 else -1.0
    starts = []
    for lam0 in _LAMBDA_GRID:
        starts.append(np.array([
            m0,
            np.log(sd0 / np.sqrt(2.0)),
            np.log(lam0 * dt),
            skew_sign * 2.0 * sd0,
            np.log(sd0),
        ]))
    # jump-free start: recovers the Gaussian likelihood when no jumps help
    starts.insert(0, np.array([m0, np.log(sd0), np.log(1e-12), 0.0, np.log(sd0 / 10.0)]))

    best, best_ll, iters, ok = _optimize.maximize(ll, starts, maxiter=4000)
    a, ls, ll_rate, muy, lsy = best
    sigma = np.exp(ls) / np.sqrt(dt)
    lam = np.exp(ll_rate) / dt
    params = JumpGbmParams(a / dt + 0.5 * sigma**2, sigma, lam, muy, np.exp(lsy))
    # the jump-free start is the recorded guess: the fit can only improve on
    # it, which pins the nesting inequality against the plain Gaussian fit
    guess = JumpGbmParams(base.params.mu, base.params.sigma, 1e-12 / dt, 0.0, sd0 / 10.0)
    return CalibrationResult(params, float(best_ll), guess, iterations=iters, converged=ok)
