"""Vasicek with compound-Poisson Gaussian jumps, single or double stream.

The SDE adds dJ(t) (and optionally -dJ_-(t)) to the Ornstein-Uhlenbeck
dynamics, so the long-run mean shifts to
theta_Y = theta + (lambda_up mu_up - lambda_dn mu_dn) / alpha while the
variance stays bounded. Over a small step the transition density is the
two- or three-component Gaussian mixture weighted by the arrival
intensities, which is what the likelihood uses; simulation instead draws
full Poisson counts with exact arrival-time decay inside each step, so the
sampled law (and hence every moment) carries no step-size bias. The O(dt)
gap between the two treatments is bounded in tests.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad

from . import _optimize
from .core import CalibrationResult, PathSet, RngStream, require_finite
from .errors import IntensityTooLarge, InvalidParam, NonStationaryEstimate, QuadratureFailure
from .meanrev import (
    VasicekParams,
    discrete_coefficients,
    vasicek_calibrate_ols,
    vasicek_conditional_moments,
)


@dataclass(frozen=True)
class JumpVasicekParams:
    """Vasicek core plus an upward jump stream and an optional downward one.

    mu_dn > 0 means downward jumps of mean size mu_dn; both streams are
    zeroed for the plain single-jump model by leaving the _dn fields at 0.
    """

    alpha: float
    theta: float
    sigma: float
    lambda_up: float = 0.0
    mu_up: float = 0.0
    sigma_up: float = 0.0
    lambda_dn: float = 0.0
    mu_dn: float = 0.0
    sigma_dn: float = 0.0

    def __post_init__(self):
        require_finite(alpha=self.alpha, theta=self.theta, sigma=self.sigma,
                       lambda_up=self.lambda_up, mu_up=self.mu_up, sigma_up=self.sigma_up,
                       lambda_dn=self.lambda_dn, mu_dn=self.mu_dn, sigma_dn=self.sigma_dn)
        if self.alpha <= 0 or self.sigma <= 0:
            raise InvalidParam("JumpVasicekParams: need alpha > 0 and sigma > 0")
        if self.lambda_up < 0 or self.lambda_dn < 0 or self.sigma_up < 0 or self.sigma_dn < 0:
            raise InvalidParam("JumpVasicekParams: intensities and jump stds must be >= 0")

    @property
    def base(self) -> VasicekParams:
        return VasicekParams(self.alpha, self.theta, self.sigma)

    @property
    def long_run_mean(self) -> float:
        """theta_Y: the actual long-term level once jump drift is folded in."""
        return self.theta + (self.lambda_up * self.mu_up - self.lambda_dn * self.mu_dn) / self.alpha

    def terminal_moments(self, x0: float, horizon: float) -> tuple[float, float]:
        """Exact mean theta_Y + (x0 - theta_Y) e^(-alpha t) and variance
        (sigma^2 + sum lambda (mu^2 + s^2)) (1 - e^(-2 alpha t)) / (2 alpha)."""
        decay = np.exp(-self.alpha * horizon)
        mean = self.long_run_mean + (x0 - self.long_run_mean) * decay
        rate2 = (
            self.sigma**2
            + self.lambda_up * (self.mu_up**2 + self.sigma_up**2)
            + self.lambda_dn * (self.mu_dn**2 + self.sigma_dn**2)
        )
        var = rate2 * (1.0 - decay * decay) / (2.0 * self.alpha)
        return float(mean), float(var)


def _jump_contribution(
    gen: np.random.Generator,
    lam: float,
    mu_j: float,
    sigma_j: float,
    alpha: float,
    dt: float,
    shape: tuple[int, int],
) -> np.ndarray:
    """Sum of jump sizes arriving in each step, decayed to the step end.

    Arrival times within a step are uniform given the count, so each jump
    is damped by e^(-alpha (dt - arrival)); this reproduces the exact law of
    the jump integral at any step size.
    """
    if lam == 0.0:
        return np.zeros(shape)
    counts = gen.poisson(lam * dt, size=shape)
    total = int(counts.sum())
    out = np.zeros(shape[0] * shape[1])
    if total:
        arrivals = gen.uniform(size=total)
        sizes = mu_j + sigma_j * gen.standard_normal(total)
        damped = sizes * np.exp(-alpha * dt * (1.0 - arrivals))
        idx = np.repeat(np.arange(out.size), counts.ravel())
        np.add.at(out, idx, damped)
    return out.reshape(shape)


def simulate(
    params: JumpVasicekParams,
    x0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
) -> PathSet:
    """Exact OU step plus per-step Poisson jump sums (up minus down).

    With both intensities at zero the output is bit-identical to
    meanrev.vasicek_simulate on the same stream. Sampling stays exact at any
    intensity, but (lambda_up + lambda_dn)*dt >= 0.5 draws a warning: the
    small-step mixture likelihood paired with this simulator is only
    meaningful for rarer jumps.
    """
    if dt <= 0 or n_steps < 1 or n_paths < 1:
        raise InvalidParam("meanrev_jumps.simulate: need dt > 0, n_steps >= 1, n_paths >= 1")
    if (params.lambda_up + params.lambda_dn) * dt >= 0.5:
        warnings.warn(
            "meanrev_jumps.simulate: (lambda_up + lambda_dn)*dt >= 0.5; the"
            " companion mixture transition density will not describe these steps",
            stacklevel=2,
        )
    c, b, delta = discrete_coefficients(params.base, dt)
    gen = rng.generator()
    eps = gen.standard_normal((n_paths, n_steps))
    shape = (n_paths, n_steps)
    up = _jump_contribution(gen, params.lambda_up, params.mu_up, params.sigma_up,
                            params.alpha, dt, shape)
    dn = _jump_contribution(gen, params.lambda_dn, params.mu_dn, params.sigma_dn,
                            params.alpha, dt, shape)
    values = np.empty((n_paths, n_steps + 1))
    values[:, 0] = x0
    x = np.full(n_paths, float(x0))
    for i in range(n_steps):
        x = c + b * x + delta * eps[:, i] + (up[:, i] - dn[:, i])
        values[:, i + 1] = x
    return PathSet(values, dt=dt, seed=rng.seed, stream_id=rng.stream_id, scheme="exact")


def _mixture(params: JumpVasicekParams, x_prev: float, dt: float):
    """Weights, means and variances of the small-step transition mixture."""
    p_up = params.lambda_up * dt
    p_dn = params.lambda_dn * dt
    if p_up + p_dn >= 1.0:
        raise IntensityTooLarge(
            "meanrev_jumps: (lambda_up + lambda_dn)*dt must stay below 1 for the mixture density"
        )
    m, v = vasicek_conditional_moments(params.base, x_prev, dt)
    weights = np.array([1.0 - p_up - p_dn, p_up, p_dn])
    means = np.array([m, m + params.mu_up, m - params.mu_dn])
    variances = np.array([v, v + params.sigma_up**2, v + params.sigma_dn**2])
    keep = weights > 0.0
    return weights[keep], means[keep], variances[keep]


def transition_logpdf(x_next, x_prev: float, params: JumpVasicekParams, dt: float) -> np.ndarray:
    """Log of the intensity-weighted Gaussian mixture transition density."""
    if dt <= 0:
        raise InvalidParam("transition_logpdf: need dt > 0")
    x_next = np.atleast_1d(np.asarray(x_next, dtype=float))
    weights, means, variances = _mixture(params, x_prev, dt)
    z2 = (x_next[:, None] - means[None, :]) ** 2 / variances[None, :]
    log_terms = np.log(weights)[None, :] - 0.5 * (np.log(2.0 * np.pi * variances)[None, :] + z2)
    m = log_terms.max(axis=1, keepdims=True)
    return (m + np.log(np.sum(np.exp(log_terms - m), axis=1, keepdims=True))).ravel()


def transition_pdf(x_next, x_prev: float, params: JumpVasicekParams, dt: float):
    out = np.exp(transition_logpdf(x_next, x_prev, params, dt))
    return float(out[0]) if np.ndim(x_next) == 0 else out


def transition_cdf(x_next, x_prev: float, params: JumpVasicekParams, dt: float):
    """Exact mixture CDF (Gaussian components, no quadrature)."""
    from .specfun import normal_cdf

    x_next = np.atleast_1d(np.asarray(x_next, dtype=float))
    weights, means, variances = _mixture(params, x_prev, dt)
    z = (x_next[:, None] - means[None, :]) / np.sqrt(variances)[None, :]
    return normal_cdf(z) @ weights


def transition_mgf(u: float, x_prev: float, params: JumpVasicekParams, dt: float) -> float:
    """Moment generating function of x(t+dt) given x(t), by quadrature.

    exp(m u + v u^2/2) times the jump factor
    exp(sum_streams lambda * int_0^dt (M_Y(u e^(-alpha w)) - 1) dw), with
    Gaussian jump-size MGFs; the integral is evaluated adaptively. Serves
    as a moment oracle through finite differences in u.
    """
    if dt <= 0:
        raise InvalidParam("transition_mgf: need dt > 0")
    m, v = vasicek_conditional_moments(params.base, x_prev, dt)
    exponent = m * u + 0.5 * v * u * u

    def jump_integral(lam: float, mu_j: float, sigma_j: float) -> float:
        if lam == 0.0 or u == 0.0:
            return 0.0
        def integrand(w: float) -> float:
            s = u * np.exp(-params.alpha * w)
            return np.exp(mu_j * s + 0.5 * sigma_j**2 * s * s) - 1.0
        val, err = quad(integrand, 0.0, dt, limit=200)
        if err > 1e-10 * max(1.0, abs(val)):
            raise QuadratureFailure(f"transition_mgf: estimated error {err:.2e}")
        return lam * val

    exponent += jump_integral(params.lambda_up, params.mu_up, params.sigma_up)
    exponent += jump_integral(params.lambda_dn, -params.mu_dn, params.sigma_dn)
    return float(np.exp(exponent))


def log_likelihood(x, params: JumpVasicekParams, dt: float) -> float:
    """Markov likelihood: sum of log transition densities along the series."""
    x = np.asarray(x, dtype=float)
    value = _vectorised_log_likelihood(x, params, dt)
    if value == -np.inf:
        raise IntensityTooLarge(
            "meanrev_jumps.log_likelihood: (lambda_up + lambda_dn)*dt must stay below 1"
        )
    return value


def _vectorised_log_likelihood(x: np.ndarray, params: JumpVasicekParams, dt: float) -> float:
    """Same mixture likelihood with the x_prev dependence vectorised."""
    p_up = params.lambda_up * dt
    p_dn = params.lambda_dn * dt
    if p_up + p_dn >= 1.0:
        return -np.inf
    x_prev, x_next = x[:-1], x[1:]
    m, v = vasicek_conditional_moments(params.base, x_prev, dt)
    weights = np.array([1.0 - p_up - p_dn, p_up, p_dn])
    offsets = np.array([0.0, params.mu_up, -params.mu_dn])
    variances = np.array([v, v + params.sigma_up**2, v + params.sigma_dn**2])
    keep = weights > 0.0
    log_terms = (
        np.log(weights[keep])[None, :]
        - 0.5 * np.log(2.0 * np.pi * variances[keep])[None, :]
        - 0.5 * (x_next[:, None] - m[:, None] - offsets[None, keep]) ** 2 / variances[keep][None, :]
    )
    mx = log_terms.max(axis=1, keepdims=True)
    return float(np.sum(mx + np.log(np.sum(np.exp(log_terms - mx), axis=1, keepdims=True))))


def calibrate(x, dt: float, double_jumps: bool = False) -> CalibrationResult:
    """Transition-mixture MLE.

    The Vasicek block starts from the OLS regression; the jump block starts
    from the residual exceedances beyond three residual standard
    deviations (their frequency sets lambda, their mean and spread set the
    size distribution). Intensities and spreads stay positive through log
    transforms.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 200:
        raise InvalidParam("meanrev_jumps.calibrate: need a 1-d series with n >= 200")
    try:
        base = vasicek_calibrate_ols(x, dt).params
    except NonStationaryEstimate:
        base = VasicekParams(1.0, float(x.mean()), max(float(np.diff(x).std()), 1e-12) / np.sqrt(dt))
    c, b, delta = discrete_coefficients(base, dt)
    resid = x[1:] - c - b * x[:-1]
    up_mask = resid > 3.0 * delta
    dn_mask = resid < -3.0 * delta

    def stream_guess(mask: np.ndarray, sign: float) -> tuple[float, float, float]:
        n_exc = int(mask.sum())
        if n_exc >= 2:
            vals = sign * resid[mask]
            return n_exc / (x.size * dt), float(vals.mean()), float(max(vals.std(), delta / 4.0))
        return 0.5 / (x.size * dt), 4.0 * delta, delta

    lam_up0, mu_up0, s_up0 = stream_guess(up_mask, +1.0)
    guess = JumpVasicekParams(base.alpha, base.theta, base.sigma,
                              lam_up0, mu_up0, s_up0)
    if double_jumps:
        lam_dn0, mu_dn0, s_dn0 = stream_guess(dn_mask, -1.0)
        guess = replace(guess, lambda_dn=lam_dn0, mu_dn=mu_dn0, sigma_dn=s_dn0)

    def unpack(vec: np.ndarray) -> JumpVasicekParams:
        # with two streams the jump means are sign-constrained (up positive,
        # down positive-meaning-downward), otherwise the streams lose their
        # identity and can both chase the same tail
        la, th, ls, llu, mu_u, lsu = vec[:6]
        mu_up = np.exp(mu_u) if double_jumps else mu_u
        p = JumpVasicekParams(np.exp(la), th, np.exp(ls), np.exp(llu), mu_up, np.exp(lsu))
        if double_jumps:
            lld, mu_d, lsd = vec[6:]
            p = replace(p, lambda_dn=np.exp(lld), mu_dn=np.exp(mu_d), sigma_dn=np.exp(lsd))
        return p

    def ll(vec: np.ndarray) -> float:
        if not np.all(np.isfinite(vec)):
            return -np.inf
        try:
            return _vectorised_log_likelihood(x, unpack(vec), dt)
        except InvalidParam:
            return -np.inf

    mu_up_start = np.log(max(guess.mu_up, delta / 10.0)) if double_jumps else guess.mu_up
    start = [np.log(guess.alpha), guess.theta, np.log(guess.sigma),
             np.log(guess.lambda_up), mu_up_start, np.log(guess.sigma_up)]
    if double_jumps:
        start += [np.log(guess.lambda_dn), np.log(max(guess.mu_dn, delta / 10.0)),
                  np.log(guess.sigma_dn)]
    best, best_ll, iters, ok = _optimize.maximize(ll, [np.array(start)], maxiter=6000)
    params = unpack(best)
    return CalibrationResult(params, best_ll, guess, iterations=iters, converged=ok)


def exp_simulate(
    params: JumpVasicekParams,
    x0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
) -> PathSet:
    """Exponentiated variant: simulate y with jump-Vasicek dynamics from
    log(x0) and output e^y, which is strictly positive."""
    if x0 <= 0:
        raise InvalidParam("meanrev_jumps.exp_simulate: need x0 > 0")
    log_paths = simulate(params, float(np.log(x0)), n_steps, n_paths, dt, rng)
    return PathSet(np.exp(log_paths.values), dt=dt, seed=rng.seed,
                   stream_id=rng.stream_id, scheme="exact")


def exp_calibrate(x, dt: float, double_jumps: bool = False) -> CalibrationResult:
    """Calibrate the exponentiated variant on the log-series."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise InvalidParam("meanrev_jumps.exp_calibrate: levels must be > 0")
    return calibrate(np.log(x), dt, double_jumps=double_jumps)
