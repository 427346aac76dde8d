"""Fat tails through Brownian subordination: Variance Gamma and NIG.

The VG log-return over a horizon t is mu_bar*t + theta_bar*tau + sigma_bar*
W(tau) with tau ~ Gamma(t/nu, nu), a market-activity time with mean t and
variance nu*t. Its density is a normal variance-mean mixture with Gamma
mixing weights; in closed form it involves the modified Bessel function
K with order t/nu - 1/2:

    f(x) = 2 exp(theta_bar (x - mu_bar t) / sigma_bar^2)
           / (sigma_bar sqrt(2 pi) nu^(t/nu) Gamma(t/nu))
           * (|x - mu_bar t| / A)^(t/nu - 1/2) * K_(t/nu - 1/2)(|x - mu_bar t| A / sigma_bar^2),
    A = sqrt(2 sigma_bar^2 / nu + theta_bar^2).

The NIG law has parameters (alpha tail, beta asymmetry, delta scale, mu
location), scales over a horizon as delta -> delta*t, mu -> mu*t, and mixes
a Brownian motion over an inverse-Gaussian activity time.

All density work is assembled in log space with the exponentially scaled
Bessel functions; densities, moments and quantiles are pure functions, and
simulation across paths must use split streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import _optimize
from .core import (
    CalibrationResult,
    LogReturns,
    PathSet,
    RngStream,
    paths_from_log_increments,
    require_finite,
)
from .errors import InvalidParam, QuadratureFailure
from .specfun import bessel_k_scaled, ln_gamma

NU_FLOOR_PER_DT = 1e-4  # nu >= 1e-4*dt keeps the fit off the Gaussian-degenerate edge


@dataclass(frozen=True)
class VgParams:
    """Calendar drift, market-time drift, Brownian volatility and the
    variance rate of the Gamma subordinator."""

    mu_bar: float
    theta_bar: float
    sigma_bar: float
    nu: float

    def __post_init__(self):
        require_finite(mu_bar=self.mu_bar, theta_bar=self.theta_bar,
                       sigma_bar=self.sigma_bar, nu=self.nu)
        if self.sigma_bar <= 0:
            raise InvalidParam(f"VgParams: sigma_bar must be > 0, got {self.sigma_bar}")
        if self.nu <= 0:
            raise InvalidParam(f"VgParams: nu must be > 0, got {self.nu}")


@dataclass(frozen=True)
class NigParams:
    """Tail heaviness alpha, asymmetry beta, scale delta, location mu."""

    alpha: float
    beta: float
    delta: float
    mu: float

    def __post_init__(self):
        require_finite(alpha=self.alpha, beta=self.beta, delta=self.delta, mu=self.mu)
        if self.alpha < abs(self.beta):
            raise InvalidParam(f"NigParams: need alpha >= |beta|, got ({self.alpha}, {self.beta})")
        if self.delta <= 0:
            raise InvalidParam(f"NigParams: delta must be > 0, got {self.delta}")

    @property
    def gamma0(self) -> float:
        return float(np.sqrt(self.alpha**2 - self.beta**2))


# ---------------------------------------------------------------------------
# Variance Gamma
# ---------------------------------------------------------------------------

def vg_logpdf(x, params: VgParams, dt: float) -> np.ndarray:
    """Log density of a VG increment over a horizon dt.

    At x = mu_bar*dt the density has an integrable singularity whenever
    dt/nu <= 1/2; evaluation nudges such points by 1e-12*max(1, |mu_bar dt|),
    which is measure zero in any likelihood but keeps the value finite.
    """
    if dt <= 0:
        raise InvalidParam("vg_logpdf: need dt > 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s, t, nu = params.sigma_bar, params.theta_bar, params.nu
    center = params.mu_bar * dt
    eta = dt / nu - 0.5
    a = np.sqrt(2.0 * s * s / nu + t * t)
    dev = x - center
    eps0 = 1e-12 * max(1.0, abs(center))
    absdev = np.maximum(np.abs(dev), eps0)
    z = absdev * a / (s * s)
    # log K_eta(z) = log kve(eta, z) - z
    log_k = np.log(bessel_k_scaled(eta, z)) - z
    return (
        np.log(2.0)
        + t * dev / (s * s)
        - np.log(s)
        - 0.5 * np.log(2.0 * np.pi)
        - (dt / nu) * np.log(nu)
        - float(ln_gamma(dt / nu))
        + eta * (np.log(absdev) - np.log(a))
        + log_k
    )


def vg_density(x, params: VgParams, dt: float):
    out = np.exp(vg_logpdf(x, params, dt))
    return float(out[0]) if np.ndim(x) == 0 else out


def vg_moments(params: VgParams, dt: float) -> tuple[float, float, float, float]:
    """Mean, variance, skewness and kurtosis of the increment over dt.

    Exact central-moment expressions, no small-theta approximation:
    skewness and kurtosis are the full standardised ratios.
    """
    if dt <= 0:
        raise InvalidParam("vg_moments: need dt > 0")
    t, s, nu = params.theta_bar, params.sigma_bar, params.nu
    mean = (params.mu_bar + t) * dt
    var = (nu * t * t + s * s) * dt
    m3 = (2.0 * t**3 * nu**2 + 3.0 * s * s * nu * t) * dt
    m4 = (3.0 * nu * s**4 + 12.0 * t * t * s * s * nu * nu + 6.0 * t**4 * nu**3) * dt + (
        3.0 * s**4 + 6.0 * t * t * s * s * nu + 3.0 * t**4 * nu * nu
    ) * dt * dt
    skew = m3 / var**1.5
    kurt = m4 / (var * var)
    return float(mean), float(var), float(skew), float(kurt)


def vg_initial_guess(x: LogReturns) -> VgParams:
    """Moment-matched starting point for the VG fit.

    sigma = sqrt(V/dt), nu = (K/3 - 1) dt, theta = S sigma sqrt(dt)/(3 nu),
    mu = M/dt - theta, from the sample mean M, biased variance V, skewness S
    and kurtosis K. Near-Gaussian samples (K <= 3) clamp nu at the floor.
    """
    r = x.values
    dt = x.dt
    m = r.mean()
    d = r - m
    v = np.mean(d * d)
    if v == 0:
        raise InvalidParam("vg_initial_guess: zero sample variance")
    skew = np.mean(d**3) / v**1.5
    kurt = np.mean(d**4) / (v * v)
    sigma = np.sqrt(v / dt)
    nu = max((kurt / 3.0 - 1.0) * dt, NU_FLOOR_PER_DT * dt)
    theta = skew * sigma * np.sqrt(dt) / (3.0 * nu)
    mu = m / dt - theta
    return VgParams(float(mu), float(theta), float(sigma), float(nu))


def vg_log_likelihood(x: LogReturns, params: VgParams) -> float:
    return float(np.sum(vg_logpdf(x.values, params, x.dt)))


def vg_calibrate(x: LogReturns) -> CalibrationResult:
    """VG MLE from the moment-matched guess.

    Positivity of sigma and the nu floor are enforced with log transforms;
    the converged log-likelihood can only improve on the initial guess.
    """
    r = x.values
    dt = x.dt
    if r.size < 100:
        raise InvalidParam("vg_calibrate: need n >= 100")
    guess = vg_initial_guess(x)
    floor = NU_FLOOR_PER_DT * dt

    def ll(vec: np.ndarray) -> float:
        mu, theta, ls, lnu = vec
        if not np.all(np.isfinite(vec)):
            return -np.inf
        p = VgParams(mu, theta, np.exp(ls), floor + np.exp(lnu))
        return float(np.sum(vg_logpdf(r, p, dt)))

    start = np.array([
        guess.mu_bar, guess.theta_bar, np.log(guess.sigma_bar),
        np.log(max(guess.nu - floor, floor)),
    ])
    best, best_ll, iters, ok = _optimize.maximize(ll, [start], maxiter=4000)
    params = VgParams(best[0], best[1], float(np.exp(best[2])), float(floor + np.exp(best[3])))
    return CalibrationResult(params, best_ll, guess, iterations=iters, converged=ok)


def vg_simulate(
    params: VgParams,
    s0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
) -> PathSet:
    """Subordinated-path simulation.

    Per step: tau ~ Gamma(dt/nu, nu) (mean dt), then the increment
    mu_bar*dt + theta_bar*tau + sigma_bar*sqrt(tau)*Z. The Gamma block is
    drawn before the normal block.
    """
    if s0 <= 0 or dt <= 0 or n_steps < 1 or n_paths < 1:
        raise InvalidParam("vg_simulate: need s0 > 0, dt > 0, n_steps >= 1, n_paths >= 1")
    gen = rng.generator()
    tau = gen.gamma(dt / params.nu, params.nu, size=(n_paths, n_steps))
    z = gen.standard_normal((n_paths, n_steps))
    increments = params.mu_bar * dt + params.theta_bar * tau + params.sigma_bar * np.sqrt(tau) * z
    return paths_from_log_increments(s0, increments, dt, rng)


def _integration_window(params: VgParams, dt: float, width: float = 60.0) -> tuple[float, float]:
    mean, var, _, _ = vg_moments(params, dt)
    half = width * np.sqrt(var)
    return mean - half, mean + half


def vg_cdf(x: float, params: VgParams, dt: float) -> float:
    """CDF by adaptive quadrature of the closed-form density."""
    lo, hi = _integration_window(params, dt)
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    center = params.mu_bar * dt
    pts = [center] if lo < center < x else None
    val, err = quad(lambda u: vg_density(u, params, dt), lo, x, points=pts, limit=200)
    if err > 1e-7:
        raise QuadratureFailure(f"vg_cdf: estimated error {err:.2e}")
    return float(min(max(val, 0.0), 1.0))


def vg_percentiles(params: VgParams, dt_grid, probs) -> np.ndarray:
    """Quantiles of the VG increment per horizon: rows follow dt_grid,
    columns follow probs. Obtained by numeric inversion of the quadrature
    CDF; serialises naturally as a horizon-by-probability table.
    """
    dt_grid = np.atleast_1d(np.asarray(dt_grid, dtype=float))
    probs = np.atleast_1d(np.asarray(probs, dtype=float))
    if np.any(probs <= 0) or np.any(probs >= 1):
        raise InvalidParam("vg_percentiles: probs must lie in (0, 1)")
    if np.any(dt_grid <= 0):
        raise InvalidParam("vg_percentiles: horizons must be > 0")
    out = np.empty((dt_grid.size, probs.size))
    for i, t in enumerate(dt_grid):
        lo, hi = _integration_window(params, t)
        for k, p in enumerate(probs):
            out[i, k] = brentq(lambda u: vg_cdf(u, params, t) - p, lo, hi, xtol=1e-10)
    return out


# ---------------------------------------------------------------------------
# Normal Inverse Gaussian
# ---------------------------------------------------------------------------

def nig_logpdf(x, params: NigParams, dt: float) -> np.ndarray:
    """Log NIG density at horizon dt (delta and mu scale linearly with dt)."""
    if dt <= 0:
        raise InvalidParam("nig_logpdf: need dt > 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    alpha, beta = params.alpha, params.beta
    delta = params.delta * dt
    mu = params.mu * dt
    g0 = params.gamma0
    dev = x - mu
    root = np.sqrt(delta * delta + dev * dev)
    z = alpha * root
    log_k1 = np.log(bessel_k_scaled(1.0, z)) - z
    return (
        np.log(alpha)
        + np.log(delta)
        - np.log(np.pi)
        + delta * g0
        + beta * dev
        + log_k1
        - np.log(root)
    )


def nig_density(x, params: NigParams, dt: float):
    out = np.exp(nig_logpdf(x, params, dt))
    return float(out[0]) if np.ndim(x) == 0 else out


def nig_moments(params: NigParams, dt: float) -> tuple[float, float, float, float]:
    """Mean, variance, skewness and kurtosis at horizon dt:
    E = (mu + delta beta / gamma0) dt, V = delta alpha^2 / gamma0^3 dt,
    S = 3 beta / (alpha sqrt(delta dt gamma0)),
    K = 3 + 3 (1 + 4 (beta/alpha)^2) / (delta dt gamma0).
    """
    if dt <= 0:
        raise InvalidParam("nig_moments: need dt > 0")
    alpha, beta = params.alpha, params.beta
    delta = params.delta * dt
    mu = params.mu * dt
    g0 = params.gamma0
    if g0 == 0:
        raise InvalidParam("nig_moments: moments need alpha > |beta|")
    mean = mu + delta * beta / g0
    var = delta * alpha**2 / g0**3
    skew = 3.0 * beta / (alpha * np.sqrt(delta * g0))
    kurt = 3.0 + 3.0 * (1.0 + 4.0 * (beta / alpha) ** 2) / (delta * g0)
    return float(mean), float(var), float(skew), float(kurt)


def nig_moment_guess(x: LogReturns) -> NigParams:
    """Close the four standardised-moment equations for (alpha,beta,delta,mu).

    With rho = beta/alpha, the skew/kurtosis ratio gives
    rho^2 = S^2 / (3 K_ex - 4 S^2), which is admissible only when
    3 K_ex > 5 S^2; otherwise the guess falls back to a symmetric fit.
    """
    r = x.values
    dt = x.dt
    m = r.mean()
    d = r - m
    v = np.mean(d * d)
    if v == 0:
        raise InvalidParam("nig_moment_guess: zero sample variance")
    s = np.mean(d**3) / v**1.5
    k_ex = max(np.mean(d**4) / (v * v) - 3.0, 1e-3)
    if 3.0 * k_ex - 5.0 * s * s > 0:
        rho2 = s * s / (3.0 * k_ex - 4.0 * s * s)
        rho = np.sign(s) * np.sqrt(rho2)
    else:
        rho = 0.0
    dg = 3.0 * (1.0 + 4.0 * rho * rho) / k_ex  # delta_t * gamma0
    g0 = np.sqrt(dg / (v * (1.0 - rho * rho)))
    delta_t = dg / g0
    alpha = g0 / np.sqrt(1.0 - rho * rho)
    beta = rho * alpha
    mu_t = m - delta_t * beta / g0
    return NigParams(float(alpha), float(beta), float(delta_t / dt), float(mu_t / dt))


def nig_log_likelihood(x: LogReturns, params: NigParams) -> float:
    return float(np.sum(nig_logpdf(x.values, params, x.dt)))


def nig_calibrate(x: LogReturns) -> CalibrationResult:
    """NIG MLE from the moment guess; alpha > |beta| enforced through the
    (log gamma0, atanh rho, log delta) parameterisation."""
    r = x.values
    dt = x.dt
    if r.size < 100:
        raise InvalidParam("nig_calibrate: need n >= 100")
    guess = nig_moment_guess(x)

    def ll(vec: np.ndarray) -> float:
        lg, rr, ld, mu = vec
        if not np.all(np.isfinite(vec)):
            return -np.inf
        g0 = np.exp(lg)
        rho = np.tanh(rr)
        alpha = g0 / np.sqrt(1.0 - rho * rho)
        p = NigParams(alpha, rho * alpha, np.exp(ld), mu)
        return float(np.sum(nig_logpdf(r, p, dt)))

    rho_g = min(max(guess.beta / guess.alpha, -0.999), 0.999)
    start = np.array([np.log(guess.gamma0), np.arctanh(rho_g), np.log(guess.delta), guess.mu])
    best, best_ll, iters, ok = _optimize.maximize(ll, [start], maxiter=4000)
    g0 = float(np.exp(best[0]))
    rho = float(np.tanh(best[1]))
    alpha = g0 / np.sqrt(1.0 - rho * rho)
    params = NigParams(alpha, rho * alpha, float(np.exp(best[2])), float(best[3]))
    return CalibrationResult(params, best_ll, guess, iterations=iters, converged=ok)


def nig_simulate(
    params: NigParams,
    s0: float,
    n_steps: int,
    n_paths: int,
    dt: float,
    rng: RngStream,
) -> PathSet:
    """Variance-mean mixture sampling of NIG increments.

    Per step the inverse-Gaussian activity time z has mean delta*dt/gamma0
    and shape (delta*dt)^2, and the increment is mu*dt + beta*z + sqrt(z)*Z,
    reproducing the NIG(alpha, beta, delta*dt, mu*dt) law exactly. The IG
    block is drawn before the normal block.
    """
    if s0 <= 0 or dt <= 0 or n_steps < 1 or n_paths < 1:
        raise InvalidParam("nig_simulate: need s0 > 0, dt > 0, n_steps >= 1, n_paths >= 1")
    g0 = params.gamma0
    if g0 == 0:
        raise InvalidParam("nig_simulate: needs alpha > |beta|")
    gen = rng.generator()
    delta_t = params.delta * dt
    n = n_paths * n_steps
    ig = _inverse_gaussian_block(gen, delta_t / g0, delta_t**2, n).reshape(n_paths, n_steps)
    z = gen.standard_normal((n_paths, n_steps))
    increments = params.mu * dt + params.beta * ig + np.sqrt(ig) * z
    return paths_from_log_increments(s0, increments, dt, rng)


def _inverse_gaussian_block(gen: np.random.Generator, mu: float, lam: float, n: int) -> np.ndarray:
    # Same transform-plus-acceptance recipe as core.inverse_gaussian_variate,
    # drawing from an already-positioned generator.
    y = gen.standard_normal(n) ** 2
    x = mu + (mu * mu * y - mu * np.sqrt(4.0 * mu * lam * y + (mu * y) ** 2)) / (2.0 * lam)
    u = gen.uniform(size=n)
    return np.where(u <= mu / (mu + x), x, mu * mu / np.where(x > 0, x, np.finfo(float).tiny))


def nig_cdf(x: float, params: NigParams, dt: float) -> float:
    """CDF by adaptive quadrature of the closed-form density."""
    mean, var, _, _ = nig_moments(params, dt)
    lo = mean - 60.0 * np.sqrt(var)
    hi = mean + 60.0 * np.sqrt(var)
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    val, err = quad(lambda u: nig_density(u, params, dt), lo, x, limit=200)
    if err > 1e-7:
        raise QuadratureFailure(f"nig_cdf: estimated error {err:.2e}")
    return float(min(max(val, 0.0), 1.0))
