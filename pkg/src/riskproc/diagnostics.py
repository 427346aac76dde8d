"""Pre-calibration analysis of a series.

Sample moments, autocorrelation / partial autocorrelation, QQ-plot data, a
fixed-lag augmented Dickey-Fuller stationarity test with hardcoded 1% / 5%
critical values, and the three-sigma innovation outlier cleaning applied
before mean-reversion testing.

The variance convention everywhere is the maximum-likelihood one (divide by
n); pass ``unbiased=True`` where exposed to divide by n - 1 instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LogReturns, TimeSeries
from .errors import DegenerateSeries, InvalidParam, SingularRegression
from .specfun import normal_quantile

ADF_CRITICAL_1PCT = -3.44
ADF_CRITICAL_5PCT = -2.87


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    n: int


@dataclass(frozen=True)
class AdfReport:
    statistic: float
    lags: int
    reject_1pct: bool
    reject_5pct: bool
    critical_1pct: float = ADF_CRITICAL_1PCT
    critical_5pct: float = ADF_CRITICAL_5PCT


def _as_array(x) -> np.ndarray:
    if isinstance(x, (TimeSeries, LogReturns)):
        x = x.values
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidParam("expected a 1-d series")
    return x


def moment_summary(x, unbiased: bool = False) -> MomentSummary:
    """Mean, variance, skewness and excess kurtosis of a sample.

    Skewness and kurtosis are standardised by the biased variance to the
    powers 3/2 and 2 regardless of the ``unbiased`` toggle, which only
    affects the reported variance.
    """
    x = _as_array(x)
    n = x.size
    if n < 2:
        raise InvalidParam("moment_summary: need n >= 2")
    m = x.mean()
    d = x - m
    v = np.mean(d * d)
    if v == 0:
        return MomentSummary(float(m), 0.0, 0.0, 0.0, n)
    skew = np.mean(d**3) / v**1.5
    kurt = np.mean(d**4) / (v * v) - 3.0
    var_out = v * n / (n - 1) if unbiased else v
    return MomentSummary(float(m), float(var_out), float(skew), float(kurt), n)


def acf(x, max_lag: int) -> np.ndarray:
    """Autocorrelation function for lags 0..max_lag.

    ACF(k) = sum_{i<=n-k} (x_i - m)(x_{i+k} - m) / ((n - k) v) with m, v the
    sample mean and biased variance, so ACF(0) = 1 exactly.
    """
    x = _as_array(x)
    n = x.size
    if not 0 <= max_lag < n:
        raise InvalidParam("acf: need 0 <= max_lag < n")
    m = x.mean()
    d = x - m
    v = np.mean(d * d)
    if v == 0 or np.ptp(x) == 0:
        raise DegenerateSeries("acf: zero sample variance")
    out = np.empty(max_lag + 1)
    for k in range(max_lag + 1):
        out[k] = np.dot(d[: n - k], d[k:]) / ((n - k) * v)
    return out


def pacf(x, max_lag: int) -> np.ndarray:
    """Partial autocorrelations for lags 1..max_lag via Durbin-Levinson."""
    x = _as_array(x)
    n = x.size
    if not 1 <= max_lag < n / 2:
        raise InvalidParam("pacf: need 1 <= max_lag < n/2")
    rho = acf(x, max_lag)
    out = np.empty(max_lag)
    phi_prev = np.array([rho[1]])
    out[0] = rho[1]
    for k in range(2, max_lag + 1):
        num = rho[k] - np.dot(phi_prev, rho[k - 1 : 0 : -1])
        den = 1.0 - np.dot(phi_prev, rho[1:k])
        if den == 0:
            raise DegenerateSeries("pacf: Durbin-Levinson recursion degenerate")
        phi_kk = num / den
        phi = np.empty(k)
        phi[: k - 1] = phi_prev - phi_kk * phi_prev[::-1]
        phi[k - 1] = phi_kk
        phi_prev = phi
        out[k - 1] = phi_kk
    return out


def adf_test(x, lags: int = 1) -> AdfReport:
    """Augmented Dickey-Fuller test with intercept and no trend.

    Regresses the first difference on a constant, the lagged level and
    ``lags`` lagged differences; the statistic is the t-ratio of the lagged
    level coefficient, compared with the -3.44 / -2.87 critical values.
    A more negative statistic is stronger evidence against a unit root.
    """
    x = _as_array(x)
    if lags < 0:
        raise InvalidParam("adf_test: lags must be >= 0")
    n = x.size
    if n <= 10 * (lags + 2):
        raise InvalidParam("adf_test: need n > 10*(lags+2)")
    dx = np.diff(x)
    t0 = lags  # first usable index into dx
    y = dx[t0:]
    rows = y.size
    cols = [np.ones(rows), x[t0 : n - 1]]
    for j in range(1, lags + 1):
        cols.append(dx[t0 - j : dx.size - j])
    design = np.column_stack(cols)
    gram = design.T @ design
    if np.linalg.matrix_rank(gram) < design.shape[1]:
        raise SingularRegression("adf_test: rank-deficient regression")
    coef, residues, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        raise SingularRegression("adf_test: rank-deficient regression")
    resid = y - design @ coef
    dof = rows - design.shape[1]
    if dof <= 0:
        raise SingularRegression("adf_test: not enough observations")
    sigma2 = resid @ resid / dof
    try:
        cov = sigma2 * np.linalg.inv(gram)
    except np.linalg.LinAlgError as exc:
        raise SingularRegression("adf_test: singular design matrix") from exc
    se = np.sqrt(cov[1, 1])
    if se == 0 or not np.isfinite(se):
        raise SingularRegression("adf_test: zero standard error on the level term")
    stat = float(coef[1] / se)
    return AdfReport(
        statistic=stat,
        lags=lags,
        reject_1pct=stat < ADF_CRITICAL_1PCT,
        reject_5pct=stat < ADF_CRITICAL_5PCT,
    )


def clean_outliers(series: TimeSeries) -> TimeSeries:
    """Drop observations whose arrival innovation exceeds 3x its volatility.

    Innovations are first differences; their standard deviation sets the
    3-sigma rule. A bad quote shows up as two consecutive flagged
    innovations (the spike up and the snap back), in which case the single
    point between them is the offender and is dropped; an isolated flagged
    innovation drops the point it lands on. The output is re-linked on the
    same fixed grid. Applying the cleaning repeatedly reaches a fixpoint in
    at most n passes.
    """
    x = series.values
    n = x.size
    if n < 10:
        raise InvalidParam("clean_outliers: need n >= 10")
    d = np.diff(x)
    sigma = d.std()
    if sigma == 0:
        return series
    flagged = np.abs(d) > 3.0 * sigma
    drop = np.zeros(n, dtype=bool)
    i = 0
    while i < d.size:
        if flagged[i]:
            if i == 0 and (d.size == 1 or not flagged[1]):
                drop[0] = True  # lone break on the first innovation: bad initial quote
            else:
                drop[i + 1] = True
                if i + 1 < d.size and flagged[i + 1]:
                    i += 1  # departure innovation explained by the same point
        i += 1
    if not drop.any():
        return series
    kept = x[~drop]
    return TimeSeries(kept, series.dt)


def qq_data(x, reference: str = "normal", sample: np.ndarray | None = None) -> np.ndarray:
    """Quantile-quantile pairs (theoretical_q, sample_q).

    Sorted sample values are paired with reference quantiles at the
    plotting positions (i - 0.5)/n. ``reference`` is ``"normal"`` for the
    standard normal or ``"empirical"`` with a comparison ``sample``.
    """
    x = _as_array(x)
    n = x.size
    if n < 3:
        raise InvalidParam("qq_data: need n >= 3")
    positions = (np.arange(1, n + 1) - 0.5) / n
    sample_q = np.sort(x)
    if reference == "normal":
        theo_q = normal_quantile(positions)
    elif reference == "empirical":
        if sample is None:
            raise InvalidParam("qq_data: empirical reference needs a sample")
        ref = np.sort(_as_array(sample))
        m = ref.size
        ref_positions = (np.arange(1, m + 1) - 0.5) / m
        theo_q = np.interp(positions, ref_positions, ref)
    else:
        raise InvalidParam(f"qq_data: unknown reference {reference!r}")
    return np.column_stack([theo_q, sample_q])
