"""Special functions backing the analytic transition densities.

Thin, domain-checked wrappers over the scipy.special machine kernels, plus a
log-space noncentral chi-squared density. Likelihood code must assemble
densities in log space from the exponentially scaled Bessel variants; raw
densities underflow for long series.

All functions are pure and safe for unrestricted concurrent use.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

from .errors import DomainError


def ln_gamma(x):
    """log Gamma(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("ln_gamma: requires x > 0")
    return _sp.gammaln(x)


def bessel_k(eta: float, x):
    """Modified Bessel function of the third kind K_eta(x), x > 0.

    Symmetric in the order: K_{-eta} = K_eta.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("bessel_k: requires x > 0")
    return _sp.kv(abs(eta), x)


def bessel_k_scaled(eta: float, x):
    """exp(x) * K_eta(x); avoids underflow of K for large x."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("bessel_k_scaled: requires x > 0")
    return _sp.kve(abs(eta), x)


def bessel_i(q: float, x):
    """Modified Bessel function of the first kind I_q(x), x >= 0, q > -1."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("bessel_i: requires x >= 0")
    if q <= -1:
        raise DomainError("bessel_i: requires q > -1")
    return _sp.iv(q, x)


def bessel_i_scaled(q: float, x):
    """exp(-x) * I_q(x); avoids overflow of I for large x."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("bessel_i_scaled: requires x >= 0")
    if q <= -1:
        raise DomainError("bessel_i_scaled: requires q > -1")
    return _sp.ive(q, x)


def noncentral_chi2_pdf(x, dof: float, noncentrality: float):
    """Density of the noncentral chi-squared law, assembled in log space.

    Reduces to the central chi-squared density when the noncentrality is
    zero. Values at x = 0 use the exact limit of the density.
    """
    if dof <= 0:
        raise DomainError("noncentral_chi2_pdf: requires dof > 0")
    if noncentrality < 0:
        raise DomainError("noncentral_chi2_pdf: requires noncentrality >= 0")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("noncentral_chi2_pdf: requires x >= 0")
    scalar = x.ndim == 0
    x = np.atleast_1d(x).astype(float)
    out = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    half = dof / 2.0
    if noncentrality == 0.0:
        log_pdf = (half - 1.0) * np.log(xp) - xp / 2.0 - half * np.log(2.0) - _sp.gammaln(half)
    else:
        order = half - 1.0
        s = np.sqrt(noncentrality * xp)
        # log I_order(s) = log ive(order, s) + s
        log_pdf = (
            -np.log(2.0)
            - (xp + noncentrality) / 2.0
            + (order / 2.0) * (np.log(xp) - np.log(noncentrality))
            + np.log(_sp.ive(order, s))
            + s
        )
    out[pos] = np.exp(log_pdf)
    # exact x -> 0 limits: 0 above two dof, the exponential intercept at two
    if np.any(~pos):
        if dof == 2.0:
            out[~pos] = 0.5 * np.exp(-noncentrality / 2.0)
        elif dof < 2.0:
            out[~pos] = np.inf
    return out[0] if scalar else out


def normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)


def normal_cdf(x):
    return _sp.ndtr(np.asarray(x, dtype=float))


def normal_quantile(p):
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or np.any(p >= 1):
        raise DomainError("normal_quantile: requires p in (0, 1)")
    return _sp.ndtri(p)


def chi2_quantile(p, dof: float):
    """Quantile of the chi-squared law with ``dof`` degrees of freedom."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or np.any(p >= 1):
        raise DomainError("chi2_quantile: requires p in (0, 1)")
    if dof <= 0:
        raise DomainError("chi2_quantile: requires dof > 0")
    return 2.0 * _sp.gammaincinv(dof / 2.0, p)
