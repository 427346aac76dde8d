"""NGARCH(1,1) return process; plain GARCH(1,1) is the gamma = 0 case.

The conditional-variance recursion and the likelihood live in per-step
units: a return over one step is x_i = mu*dt + sigma_i * z_i with z_i
standard normal and

    sigma_i^2 = omega + alpha * sigma_{i-1}^2
              + beta * (eps_{i-1} - gamma * sigma_{i-1})^2,

where eps_i = x_i - mu*dt is the observed innovation. A positive gamma
reduces the impact of good news and increases the impact of bad news on the
next-step variance. Stationarity requires alpha + beta*(1 + gamma^2) < 1.

The recursion is path dependent, so likelihood evaluation cannot be
vectorised over time; independent fits may still run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import expit, logit

from . import _optimize
from .core import CalibrationResult, LogReturns, PathSet, RngStream, require_finite
from .errors import DegenerateSeries, InvalidParam, StationarityViolated


@dataclass(frozen=True)
class NgarchParams:
    """mu is annualised drift (per-step mean mu*dt); the variance parameters
    omega, alpha, beta, gamma and sigma0_sq are in per-step units."""

    mu: float
    omega: float
    alpha: float
    beta: float
    gamma: float
    sigma0_sq: float

    def __post_init__(self):
        require_finite(
            mu=self.mu, omega=self.omega, alpha=self.alpha, beta=self.beta,
            gamma=self.gamma, sigma0_sq=self.sigma0_sq,
        )
        if self.omega <= 0 or self.alpha < 0 or self.beta < 0:
            raise InvalidParam("NgarchParams: need omega > 0, alpha >= 0, beta >= 0")
        if self.sigma0_sq <= 0:
            raise InvalidParam("NgarchParams: need sigma0_sq > 0")
        if self.persistence >= 1.0:
            raise StationarityViolated(
                f"NgarchParams: alpha + beta*(1+gamma^2) = {self.persistence:.6f} >= 1"
            )

    @property
    def persistence(self) -> float:
        return self.alpha + self.beta * (1.0 + self.gamma**2)

    @property
    def stationary_variance(self) -> float:
        """Per-step unconditional innovation variance omega / (1 - persistence)."""
        return self.omega / (1.0 - self.persistence)


class NgarchSimulation(NamedTuple):
    paths: PathSet
    variances: np.ndarray  # (n_paths, n_steps + 1), column 0 = sigma0_sq


def simulate(
    params: NgarchParams,
    s0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
    shocks: np.ndarray | None = None,
) -> NgarchSimulation:
    """Arithmetic-return paths S_{i+1} = S_i (1 + mu*dt + sigma_i z_i).

    Returns the level paths together with the per-path conditional-variance
    series. ``shocks`` overrides the standard-normal draws (testing hook,
    e.g. all zeros isolates the deterministic variance recursion).
    """
    if s0 <= 0 or dt <= 0 or n_steps < 1 or n_paths < 1:
        raise InvalidParam("garch.simulate: need s0 > 0, dt > 0, n_steps >= 1, n_paths >= 1")
    if shocks is None:
        z = rng.generator().standard_normal((n_paths, n_steps))
    else:
        z = np.asarray(shocks, dtype=float)
        if z.shape != (n_paths, n_steps):
            raise InvalidParam("garch.simulate: shocks must have shape (n_paths, n_steps)")
    levels = np.empty((n_paths, n_steps + 1))
    variances = np.empty((n_paths, n_steps + 1))
    levels[:, 0] = s0
    h = np.full(n_paths, params.sigma0_sq)
    variances[:, 0] = h
    drift = params.mu * dt
    for i in range(n_steps):
        sig = np.sqrt(h)
        eps = sig * z[:, i]
        levels[:, i + 1] = levels[:, i] * (1.0 + drift + eps)
        h = params.omega + params.alpha * h + params.beta * (eps - params.gamma * sig) ** 2
        variances[:, i + 1] = h
    paths = PathSet(levels, dt=dt, seed=rng.seed, stream_id=rng.stream_id, scheme="exact")
    return NgarchSimulation(paths, variances)


def _neg_loglik_terms(x: np.ndarray, mean_step: float, omega: float, alpha: float,
                      beta: float, gamma: float, h0: float) -> float:
    """Sum of -log sigma_i^2 - eps_i^2 / sigma_i^2 over the sample (times 1/2)."""
    eps = (x - mean_step).tolist()
    h = h0
    total = 0.0
    log = math.log
    sqrt = math.sqrt
    for e in eps:
        total += -log(h) - e * e / h
        root = e - gamma * sqrt(h)
        h = omega + alpha * h + beta * root * root
    return 0.5 * total


def log_likelihood(x, params: NgarchParams, dt: float | None = None) -> float:
    """Full Gaussian log-likelihood of per-step returns under the recursion."""
    if isinstance(x, LogReturns):
        dt = x.dt
        x = x.values
    if dt is None:
        raise InvalidParam("garch.log_likelihood: dt required for raw arrays")
    x = np.asarray(x, dtype=float)
    core = _neg_loglik_terms(
        x, params.mu * dt, params.omega, params.alpha, params.beta, params.gamma, params.sigma0_sq
    )
    return float(core - 0.5 * x.size * np.log(2.0 * np.pi))


def _unpack(vec: np.ndarray) -> tuple[float, float, float, float, float]:
    """Map unconstrained R^5 into {omega > 0, alpha, beta >= 0, persistence < 1}."""
    m, w, u0, u1, gamma = vec
    omega = np.exp(w)
    s = expit(u0)  # alpha + beta (1 + gamma^2)
    a = expit(u1)
    alpha = s * a
    beta = s * (1.0 - a) / (1.0 + gamma**2)
    return m, omega, alpha, beta, gamma


def calibrate(x, dt: float | None = None) -> CalibrationResult:
    """MLE of (mu, omega, alpha, beta, gamma) by derivative-free search.

    The stationarity constraint is enforced through a log/logit
    reparameterisation of the searched space, so every visited point is
    admissible. sigma0^2 is pinned at the sample variance. Initial guess:
    mu at the sample mean, lagged-variance coefficient alpha = 0.85, news
    coefficient beta = 0.05, gamma = 0 and omega from the
    stationary-variance identity; a near-constant-variance start is also
    tried so the fit can never fall below the iid-Gaussian likelihood of
    the same data.
    """
    if isinstance(x, LogReturns):
        dt = x.dt
        x = x.values
    if dt is None:
        raise InvalidParam("garch.calibrate: dt required for raw arrays")
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 50:
        raise InvalidParam("garch.calibrate: need n >= 50")
    mbar = x.mean()
    vbar = np.mean((x - mbar) ** 2)
    if vbar == 0 or np.ptp(x) == 0:
        raise DegenerateSeries("garch.calibrate: zero sample variance")

    const = -0.5 * n * np.log(2.0 * np.pi)

    def ll(vec: np.ndarray) -> float:
        m, omega, alpha, beta, gamma = _unpack(vec)
        if not np.isfinite(omega) or omega <= 0:
            return -np.inf
        return _neg_loglik_terms(x, m, omega, alpha, beta, gamma, vbar) + const

    start = np.array([mbar, np.log(0.10 * vbar), logit(0.90), logit(0.85 / 0.90), 0.0])
    flat = np.array([mbar, np.log(vbar), logit(1e-6), logit(0.5), 0.0])
    best, best_ll, iters, ok = _optimize.maximize(ll, [start, flat], maxiter=4000)

    m, omega, alpha, beta, gamma = _unpack(best)
    params = NgarchParams(m / dt, omega, alpha, beta, gamma, vbar)
    g0 = _unpack(start)
    guess = NgarchParams(g0[0] / dt, g0[1], g0[2], g0[3], g0[4], vbar)
    return CalibrationResult(params, best_ll, guess, iterations=iters, converged=ok)
