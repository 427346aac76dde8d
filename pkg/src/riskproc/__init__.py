"""Stochastic-process toolkit for risk factors.

Simulation, maximum-likelihood calibration and tail-risk measurement for
the classic single-series families: geometric Brownian motion, NGARCH,
jump diffusion, Variance Gamma, Normal Inverse Gaussian, Vasicek,
exponential Vasicek, CIR, Vasicek with jumps, plus a peaks-over-threshold
VaR / expected-shortfall pipeline.
"""

from . import (
    cli,
    core,
    diagnostics,
    errors,
    evt,
    garch,
    gbm,
    jumps,
    meanrev,
    meanrev_jumps,
    specfun,
    subordinated,
)
from .core import (
    CalibrationResult,
    LogReturns,
    PathSet,
    RngStream,
    TimeSeries,
    to_log_returns,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationResult",
    "LogReturns",
    "PathSet",
    "RngStream",
    "TimeSeries",
    "to_log_returns",
    "cli",
    "core",
    "diagnostics",
    "errors",
    "evt",
    "garch",
    "gbm",
    "jumps",
    "meanrev",
    "meanrev_jumps",
    "specfun",
    "subordinated",
]
