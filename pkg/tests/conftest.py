"""Shared statistical helpers for the test suite."""

import numpy as np
import pytest


def ks_statistic(sample: np.ndarray, cdf_values: np.ndarray) -> float:
    """Two-sided KS statistic given model CDF values at the sample points."""
    n = sample.size
    order = np.argsort(sample)
    c = cdf_values[order]
    ecdf_hi = np.arange(1, n + 1) / n
    ecdf_lo = np.arange(0, n) / n
    return float(max(np.max(ecdf_hi - c), np.max(c - ecdf_lo)))


def ks_critical(n: int, significance: float = 0.001) -> float:
    """Asymptotic Kolmogorov critical value at the given significance."""
    return float(np.sqrt(-0.5 * np.log(significance / 2.0)) / np.sqrt(n))


def assert_ks(sample: np.ndarray, cdf, significance: float = 0.001) -> None:
    """Assert the sample passes a two-sided KS test against callable cdf."""
    sample = np.asarray(sample, dtype=float)
    d = ks_statistic(sample, np.asarray(cdf(sample), dtype=float))
    crit = ks_critical(sample.size, significance)
    assert d < crit, f"KS statistic {d:.5f} >= critical {crit:.5f}"


def sample_mean_se(x: np.ndarray) -> float:
    return float(x.std(ddof=1) / np.sqrt(x.size))


def sample_var_se(x: np.ndarray) -> float:
    """Standard error of the sample variance, from the sample's own m4."""
    v = x.var()
    m4 = np.mean((x - x.mean()) ** 4)
    return float(np.sqrt(max(m4 - v * v, 0.0) / x.size))


@pytest.fixture
def rng_stream():
    from riskproc.core import RngStream

    return RngStream(20260808)
