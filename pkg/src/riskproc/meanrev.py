"""Mean-reverting families: Vasicek, exponential Vasicek and CIR.

The Vasicek transition is exact over any step: x_i = c + b x_{i-1} + delta*eps
with c = theta(1 - e^(-alpha dt)), b = e^(-alpha dt) and
delta = sigma sqrt((1 - e^(-2 alpha dt)) / (2 alpha)) -- an AR(1) process.
Calibration is the OLS regression of the series on its lag, which is also
the Gaussian maximum-likelihood estimator. A fitted b outside (0, 1) is the
"no mean reversion detected" diagnostic and surfaces as a typed error, never
a silent clamp.

CIR offers a full-truncation Euler scheme and exact sampling from the
noncentral chi-squared transition; its likelihood is evaluated in log space
through the exponentially scaled Bessel I.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _optimize
from .core import CalibrationResult, PathSet, RngStream, TimeSeries, require_finite
from .errors import (
    DegenerateSeries,
    InvalidParam,
    NonPositiveLevel,
    NonStationaryEstimate,
)
from .specfun import bessel_i_scaled


@dataclass(frozen=True)
class VasicekParams:
    """Reversion speed per year, long-term mean and volatility."""

    alpha: float
    theta: float
    sigma: float

    def __post_init__(self):
        require_finite(alpha=self.alpha, theta=self.theta, sigma=self.sigma)
        if self.alpha <= 0 or self.sigma <= 0:
            raise InvalidParam("VasicekParams: need alpha > 0 and sigma > 0")


@dataclass(frozen=True)
class ExpVasicekParams(VasicekParams):
    """Vasicek parameters of the log process x = exp(y)."""

    @property
    def m(self) -> float:
        """Drift midpoint of the level equation: theta + sigma^2/(2 alpha)."""
        return self.theta + self.sigma**2 / (2.0 * self.alpha)


@dataclass(frozen=True)
class CirParams:
    alpha: float
    theta: float
    sigma: float

    def __post_init__(self):
        require_finite(alpha=self.alpha, theta=self.theta, sigma=self.sigma)
        if self.alpha <= 0 or self.theta <= 0 or self.sigma <= 0:
            raise InvalidParam("CirParams: need alpha, theta, sigma > 0")

    @property
    def feller_satisfied(self) -> bool:
        """sigma^2 <= 2 alpha theta keeps the origin inaccessible."""
        return bool(self.sigma**2 <= 2.0 * self.alpha * self.theta)


def discrete_coefficients(params: VasicekParams, dt: float) -> tuple[float, float, float]:
    """Exact AR(1) coefficients (c, b, delta) of the Vasicek transition."""
    if dt <= 0:
        raise InvalidParam("discrete_coefficients: need dt > 0")
    b = np.exp(-params.alpha * dt)
    c = params.theta * (1.0 - b)
    delta = params.sigma * np.sqrt((1.0 - b * b) / (2.0 * params.alpha))
    return float(c), float(b), float(delta)


def params_from_discrete(c: float, b: float, delta: float, dt: float,
                         cls=VasicekParams) -> VasicekParams:
    """Invert (c, b, delta) to (alpha, theta, sigma).

    alpha = -ln(b)/dt, theta = c/(1-b), sigma = delta / sqrt((b^2-1) dt / (2 ln b)).
    Raises NonStationaryEstimate when b is outside (0, 1).
    """
    if dt <= 0:
        raise InvalidParam("params_from_discrete: need dt > 0")
    if not 0.0 < b < 1.0:
        raise NonStationaryEstimate(f"params_from_discrete: b = {b:.6f} outside (0, 1)")
    if delta <= 0:
        raise DegenerateSeries("params_from_discrete: zero innovation volatility")
    alpha = -np.log(b) / dt
    theta = c / (1.0 - b)
    sigma = delta / np.sqrt((b * b - 1.0) * dt / (2.0 * np.log(b)))
    return cls(float(alpha), float(theta), float(sigma))


def vasicek_conditional_moments(params: VasicekParams, x0, horizon: float) -> tuple:
    """Mean theta + (x0-theta) e^(-alpha t) and variance
    sigma^2 (1 - e^(-2 alpha t)) / (2 alpha) of x(t) given x(0) = x0."""
    decay = np.exp(-params.alpha * horizon)
    mean = params.theta + (x0 - params.theta) * decay
    var = params.sigma**2 * (1.0 - decay * decay) / (2.0 * params.alpha)
    return mean, var


def vasicek_simulate(
    params: VasicekParams,
    x0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
) -> PathSet:
    """Exact-transition sampling of the AR(1) recursion; no step-size bias."""
    if dt <= 0 or n_steps < 1 or n_paths < 1:
        raise InvalidParam("vasicek_simulate: need dt > 0, n_steps >= 1, n_paths >= 1")
    c, b, delta = discrete_coefficients(params, dt)
    eps = rng.generator().standard_normal((n_paths, n_steps))
    values = np.empty((n_paths, n_steps + 1))
    values[:, 0] = x0
    x = np.full(n_paths, float(x0))
    for i in range(n_steps):
        x = c + b * x + delta * eps[:, i]
        values[:, i + 1] = x
    return PathSet(values, dt=dt, seed=rng.seed, stream_id=rng.stream_id, scheme="exact")


def _ar1_log_likelihood(n: int, delta_sq: float) -> float:
    return float(-0.5 * n * np.log(2.0 * np.pi * delta_sq) - 0.5 * n)


def vasicek_calibrate_ols(x, dt: float, cls=VasicekParams) -> CalibrationResult:
    """OLS regression of x_i on x_{i-1}; identical to the Gaussian MLE.

    delta^2 is the mean squared residual (divide by the number of
    transitions). The reported log-likelihood is the exact AR(1) transition
    likelihood at the fitted coefficients.
    """
    x = np.asarray(x.values if isinstance(x, TimeSeries) else x, dtype=float)
    if x.ndim != 1 or x.size < 10:
        raise InvalidParam("vasicek_calibrate_ols: need a 1-d series with n >= 10")
    x_prev, x_next = x[:-1], x[1:]
    n = x_next.size
    if np.ptp(x_prev) == 0:
        raise DegenerateSeries("vasicek_calibrate_ols: constant lagged series")
    design = np.column_stack([np.ones(n), x_prev])
    (c_hat, b_hat), *_ = np.linalg.lstsq(design, x_next, rcond=None)
    resid = x_next - c_hat - b_hat * x_prev
    delta_sq = float(np.mean(resid * resid))
    if delta_sq == 0:
        raise DegenerateSeries("vasicek_calibrate_ols: zero residual variance")
    params = params_from_discrete(float(c_hat), float(b_hat), float(np.sqrt(delta_sq)), dt, cls)
    sxx = float(np.sum((x_prev - x_prev.mean()) ** 2))
    stderr = {
        "b": float(np.sqrt(delta_sq / sxx)),
        "c": float(np.sqrt(delta_sq * np.mean(x_prev**2) / sxx)),
    }
    return CalibrationResult(
        params, _ar1_log_likelihood(n, delta_sq), params,
        iterations=0, converged=True, stderr_estimates=stderr,
    )


def vasicek_calibrate_mle(x, dt: float, cls=VasicekParams) -> CalibrationResult:
    """Closed-form Gaussian MLE of (b, theta, delta^2) for the AR(1) form.

    b = (n sum x_i x_{i-1} - sum x_i sum x_{i-1}) / (n sum x_{i-1}^2 - (sum x_{i-1})^2),
    theta = sum(x_i - b x_{i-1}) / (n (1 - b)),
    delta^2 = mean of (x_i - b x_{i-1} - theta (1 - b))^2.
    Algebraically identical to the OLS route.
    """
    x = np.asarray(x.values if isinstance(x, TimeSeries) else x, dtype=float)
    if x.ndim != 1 or x.size < 10:
        raise DegenerateSeries("vasicek_calibrate_mle: need a 1-d series with n >= 10")
    x_prev, x_next = x[:-1], x[1:]
    n = x_next.size
    s_prev = x_prev.sum()
    s_next = x_next.sum()
    denom = n * np.sum(x_prev * x_prev) - s_prev * s_prev
    if denom == 0:
        raise DegenerateSeries("vasicek_calibrate_mle: constant lagged series")
    b_hat = (n * np.sum(x_next * x_prev) - s_next * s_prev) / denom
    if not 0.0 < b_hat < 1.0:
        raise NonStationaryEstimate(f"vasicek_calibrate_mle: b = {b_hat:.6f} outside (0, 1)")
    theta_hat = np.sum(x_next - b_hat * x_prev) / (n * (1.0 - b_hat))
    resid = x_next - b_hat * x_prev - theta_hat * (1.0 - b_hat)
    delta_sq = float(np.mean(resid * resid))
    if delta_sq == 0:
        raise DegenerateSeries("vasicek_calibrate_mle: zero residual variance")
    params = params_from_discrete(
        float(theta_hat * (1.0 - b_hat)), float(b_hat), float(np.sqrt(delta_sq)), dt, cls
    )
    return CalibrationResult(params, _ar1_log_likelihood(n, delta_sq), params)


# ---------------------------------------------------------------------------
# Exponential Vasicek
# ---------------------------------------------------------------------------

def exp_vasicek_calibrate(x, dt: float, method: str = "ols") -> CalibrationResult:
    """Calibrate the log-level series with the Vasicek estimators.

    Reports the level-space log-likelihood (log-space likelihood minus the
    Jacobian sum of log levels) so comparisons against other level models
    are like-for-like. The fitted parameters include the level-equation
    midpoint m = theta + sigma^2/(2 alpha).
    """
    x = np.asarray(x.values if isinstance(x, TimeSeries) else x, dtype=float)
    if np.any(x <= 0):
        raise NonPositiveLevel("exp_vasicek_calibrate: levels must be > 0")
    y = np.log(x)
    fit = {"ols": vasicek_calibrate_ols, "mle": vasicek_calibrate_mle}[method](
        y, dt, cls=ExpVasicekParams
    )
    jacobian = float(np.sum(np.log(x[1:])))
    return CalibrationResult(
        fit.params, fit.log_likelihood - jacobian, fit.initial_guess,
        iterations=fit.iterations, converged=fit.converged,
        stderr_estimates=fit.stderr_estimates,
    )


def exp_vasicek_simulate(
    params: VasicekParams,
    x0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
) -> PathSet:
    """Simulate y as Vasicek from log(x0) and exponentiate; always positive."""
    if x0 <= 0:
        raise NonPositiveLevel("exp_vasicek_simulate: x0 must be > 0")
    log_paths = vasicek_simulate(params, float(np.log(x0)), n_steps, n_paths, dt, rng)
    return PathSet(
        np.exp(log_paths.values), dt=dt, seed=rng.seed, stream_id=rng.stream_id, scheme="exact"
    )


# ---------------------------------------------------------------------------
# CIR
# ---------------------------------------------------------------------------

def _cir_cq(params: CirParams, dt: float) -> tuple[float, float]:
    c = 2.0 * params.alpha / (params.sigma**2 * (1.0 - np.exp(-params.alpha * dt)))
    q = 2.0 * params.alpha * params.theta / params.sigma**2 - 1.0
    return c, q


def cir_conditional_moments(params: CirParams, x0, horizon: float) -> tuple:
    """Exact conditional mean and variance of x(t) given x(0) = x0."""
    a, th, s = params.alpha, params.theta, params.sigma
    e1 = np.exp(-a * horizon)
    mean = th + (x0 - th) * e1
    var = x0 * s * s / a * (e1 - e1 * e1) + th * s * s / (2.0 * a) * (1.0 - e1) ** 2
    return mean, var


def cir_simulate(
    params: CirParams,
    x0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
    scheme: str = "exact",
) -> PathSet:
    """Exact noncentral chi-squared transitions, or full-truncation Euler.

    Exact: x(t_i) ~ chi2'(2q+2, 2u) / (2c) with u = c x(t_{i-1}) e^(-alpha dt).
    Euler: x(t_i) = alpha theta dt + (1 - alpha dt) x(t_{i-1})
    + sigma sqrt(max(x, 0) dt) eps, clamping only inside the square root.
    """
    if x0 <= 0:
        raise InvalidParam("cir_simulate: need x0 > 0")
    if dt <= 0 or n_steps < 1 or n_paths < 1:
        raise InvalidParam("cir_simulate: need dt > 0, n_steps >= 1, n_paths >= 1")
    values = np.empty((n_paths, n_steps + 1))
    values[:, 0] = x0
    x = np.full(n_paths, float(x0))
    gen = rng.generator()
    if scheme == "exact":
        c, q = _cir_cq(params, dt)
        df = 2.0 * q + 2.0
        decay = np.exp(-params.alpha * dt)
        for i in range(n_steps):
            nc = 2.0 * c * x * decay
            x = gen.noncentral_chisquare(df, nc) / (2.0 * c)
            values[:, i + 1] = x
    elif scheme == "euler":
        if params.alpha * dt >= 1.0:
            raise InvalidParam("cir_simulate: Euler scheme requires alpha*dt < 1")
        eps = gen.standard_normal((n_paths, n_steps))
        for i in range(n_steps):
            x = (
                params.alpha * params.theta * dt
                + (1.0 - params.alpha * dt) * x
                + params.sigma * np.sqrt(np.maximum(x, 0.0) * dt) * eps[:, i]
            )
            values[:, i + 1] = x
    else:
        raise InvalidParam(f"cir_simulate: unknown scheme {scheme!r}")
    return PathSet(values, dt=dt, seed=rng.seed, stream_id=rng.stream_id, scheme=scheme)


def cir_transition_logpdf(x_next, x_prev, params: CirParams, dt: float) -> np.ndarray:
    """Log of f(x_next | x_prev) = c e^(-u-v) (v/u)^(q/2) I_q(2 sqrt(uv)),
    with u = c x_prev e^(-alpha dt) on the conditioning point and
    v = c x_next on the forward point, assembled with scaled Bessel I."""
    if dt <= 0:
        raise InvalidParam("cir_transition_logpdf: need dt > 0")
    x_next = np.atleast_1d(np.asarray(x_next, dtype=float))
    x_prev = np.asarray(x_prev, dtype=float)
    if np.any(x_next <= 0) or np.any(x_prev <= 0):
        raise InvalidParam("cir_transition_logpdf: needs x > 0 on both points")
    c, q = _cir_cq(params, dt)
    u = c * x_prev * np.exp(-params.alpha * dt)
    v = c * x_next
    s = 2.0 * np.sqrt(u * v)
    # log I_q(s) = log ive(q, s) + s
    log_iq = np.log(bessel_i_scaled(q, s)) + s
    return np.log(c) - u - v + 0.5 * q * (np.log(v) - np.log(u)) + log_iq


def cir_transition_pdf(x_next, x_prev, params: CirParams, dt: float):
    out = np.exp(cir_transition_logpdf(x_next, x_prev, params, dt))
    return float(out[0]) if np.ndim(x_next) == 0 else out


def cir_log_likelihood(x, params: CirParams, dt: float) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(cir_transition_logpdf(x[1:], x[:-1], params, dt)))


def cir_initial_guess(x, dt: float) -> CirParams:
    """Moment starting point: alpha from the AR(1) coefficient, theta at the
    sample mean, sigma from the long-term variance identity
    sigma = sqrt(2 alpha Var(x) / theta)."""
    x = np.asarray(x, dtype=float)
    x_prev, x_next = x[:-1], x[1:]
    sxx = np.sum((x_prev - x_prev.mean()) ** 2)
    if sxx == 0:
        raise DegenerateSeries("cir_initial_guess: constant series")
    b = np.sum((x_prev - x_prev.mean()) * (x_next - x_next.mean())) / sxx
    b = min(max(b, 1e-6), 1.0 - 1e-6)  # initialiser only; the MLE moves freely
    alpha0 = -np.log(b) / dt
    theta0 = float(np.mean(x))
    var = float(np.var(x))
    if theta0 <= 0 or var == 0:
        raise DegenerateSeries("cir_initial_guess: needs positive mean and variance")
    sigma0 = np.sqrt(2.0 * alpha0 * var / theta0)
    return CirParams(float(alpha0), theta0, float(sigma0))


def cir_calibrate(x, dt: float) -> CalibrationResult:
    """Exact-transition MLE under log transforms keeping all three
    parameters positive."""
    x = np.asarray(x.values if isinstance(x, TimeSeries) else x, dtype=float)
    if x.ndim != 1 or x.size < 50:
        raise InvalidParam("cir_calibrate: need a 1-d series with n >= 50")
    if np.any(x <= 0):
        raise NonPositiveLevel("cir_calibrate: levels must be > 0")
    guess = cir_initial_guess(x, dt)

    def ll(vec: np.ndarray) -> float:
        if not np.all(np.isfinite(vec)):
            return -np.inf
        p = CirParams(*np.exp(vec))
        return cir_log_likelihood(x, p, dt)

    start = np.log([guess.alpha, guess.theta, guess.sigma])
    best, best_ll, iters, ok = _optimize.maximize(ll, [start], maxiter=3000)
    params = CirParams(*np.exp(best))
    return CalibrationResult(params, best_ll, guess, iterations=iters, converged=ok)
