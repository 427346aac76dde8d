"""Shared domain types, time conventions and the deterministic RNG contract.

Time is always measured in years; ``dt`` is the fixed spacing between two
consecutive observations (1/252 daily, 1/52 weekly). All types are immutable
values and safe to share read-only across threads.

Randomness comes from the counter-based Philox4x64 bit generator keyed by the
pair ``(seed, stream_id)``. The same pair reproduces the same variate
sequence on every run and platform; distinct ``stream_id`` values give
statistically independent streams, so parallel simulations must split
streams, never share one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import InvalidParam, NonPositiveLevel

_U64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    # Finalizer of the SplitMix64 sequence; mixes stream ids for split().
    z = (z + 0x9E3779B97F4A7C15) & _U64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class RngStream:
    """Handle for one deterministic random stream.

    A stream is single-owner: draw from it sequentially in one place. Use
    :meth:`substream` / :meth:`split` to derive independent child streams
    for parallel work.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        key = [self.seed & _U64, self.stream_id & _U64]
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, k: int) -> "RngStream":
        """Child stream ``k``; deterministic and independent of this one."""
        mixed = _splitmix64(((self.stream_id & _U64) ^ _splitmix64(k & _U64)) ^ (k & _U64))
        return RngStream(self.seed, mixed)

    def split(self, n: int) -> list["RngStream"]:
        return [self.substream(k) for k in range(n)]


@dataclass(frozen=True)
class TimeSeries:
    """Ordered (timestamp, level) observations with a fixed step in years.

    ``timestamps`` may be omitted, in which case the uniform grid
    ``t0 + i*dt`` is generated. When given explicitly they must be strictly
    increasing with spacing equal to ``dt`` within 1e-9 relative.
    """

    values: np.ndarray
    dt: float
    timestamps: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.dt <= 0 or not np.isfinite(self.dt):
            raise InvalidParam(f"TimeSeries: dt must be a positive real, got {self.dt}")
        if values.ndim != 1 or values.size < 2:
            raise InvalidParam("TimeSeries: need a 1-d array of at least 2 observations")
        if not np.all(np.isfinite(values)):
            raise InvalidParam("TimeSeries: all values must be finite")
        if self.timestamps is None:
            object.__setattr__(self, "timestamps", np.arange(values.size) * self.dt)
        else:
            ts = np.asarray(self.timestamps, dtype=float)
            if ts.shape != values.shape:
                raise InvalidParam("TimeSeries: timestamps and values must align")
            steps = np.diff(ts)
            if np.any(steps <= 0):
                raise InvalidParam("TimeSeries: timestamps must be strictly increasing")
            if np.any(np.abs(steps - self.dt) > 1e-9 * self.dt):
                raise InvalidParam("TimeSeries: spacing inconsistent with dt")
            object.__setattr__(self, "timestamps", ts)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class LogReturns:
    """Log-return observations x_i = log s(t_i) - log s(t_{i-1})."""

    values: np.ndarray
    dt: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.dt <= 0 or not np.isfinite(self.dt):
            raise InvalidParam(f"LogReturns: dt must be a positive real, got {self.dt}")
        if values.ndim != 1 or values.size < 1:
            raise InvalidParam("LogReturns: need a 1-d array of at least 1 return")
        if not np.all(np.isfinite(values)):
            raise InvalidParam("LogReturns: all values must be finite")

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class PathSet:
    """Matrix of simulated sample paths with seed and scheme provenance.

    ``values`` has shape (n_paths, n_steps + 1); column 0 holds the initial
    value on every path.
    """

    values: np.ndarray
    dt: float
    seed: int
    stream_id: int = 0
    scheme: str = "exact"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise InvalidParam("PathSet: values must be a 2-d matrix")
        if not np.all(np.isfinite(values)):
            raise InvalidParam("PathSet: all entries must be finite")
        if np.any(values[:, 0] != values[0, 0]):
            raise InvalidParam("PathSet: column 0 must be the constant initial value")
        if self.scheme not in ("exact", "euler"):
            raise InvalidParam(f"PathSet: unknown scheme {self.scheme!r}")

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    @property
    def n_steps(self) -> int:
        return self.values.shape[1] - 1

    @property
    def terminal(self) -> np.ndarray:
        return self.values[:, -1]


@dataclass(frozen=True)
class CalibrationResult:
    """Fitted parameter set plus the convergence report of the fit.

    Whenever ``converged`` is true the reported log-likelihood is at least
    the log-likelihood of the initial guess.
    """

    params: Any
    log_likelihood: float
    initial_guess: Any
    iterations: int = 0
    converged: bool = True
    stderr_estimates: dict[str, float] | None = None

    @property
    def n_params(self) -> int:
        fields = getattr(self.params, "__dataclass_fields__", None)
        return len(fields) if fields else 0

    def aic(self, k: int | None = None) -> float:
        """Akaike information criterion 2k - 2 log L."""
        k = self.n_params if k is None else k
        return 2.0 * k - 2.0 * self.log_likelihood


def to_log_returns(series: TimeSeries) -> LogReturns:
    """Log returns of a strictly positive level series.

    Raises NonPositiveLevel if any level is <= 0.
    """
    if np.any(series.values <= 0):
        raise NonPositiveLevel("to_log_returns: all levels must be > 0")
    return LogReturns(np.diff(np.log(series.values)), series.dt)


def levels_from_log_returns(returns: LogReturns, s0: float = 1.0) -> TimeSeries:
    """Inverse of :func:`to_log_returns`: cumulative exponentiation from s0."""
    if s0 <= 0:
        raise NonPositiveLevel("levels_from_log_returns: s0 must be > 0")
    levels = s0 * np.exp(np.concatenate(([0.0], np.cumsum(returns.values))))
    return TimeSeries(levels, returns.dt)


def standard_normal(rng: RngStream, n: int) -> np.ndarray:
    """n iid N(0,1) variates, deterministic for fixed (seed, stream_id)."""
    if n < 0:
        raise InvalidParam("standard_normal: n must be >= 0")
    return rng.generator().standard_normal(n)


def gamma_variate(rng: RngStream, shape: float, scale: float, n: int) -> np.ndarray:
    """n iid Gamma(shape, scale) variates (mean shape*scale).

    Sampling uses the Marsaglia-Tsang squeeze-and-reject method, valid for
    every shape; shapes below one are boosted through the U^(1/shape)
    transform, so the tiny shapes needed by gamma subordinators are exact.
    """
    if shape <= 0 or scale <= 0:
        raise InvalidParam(f"gamma_variate: shape and scale must be > 0, got ({shape}, {scale})")
    if n < 0:
        raise InvalidParam("gamma_variate: n must be >= 0")
    return rng.generator().gamma(shape, scale, n)


def inverse_gaussian_variate(rng: RngStream, mu: float, lam: float, n: int) -> np.ndarray:
    """n iid inverse-Gaussian IG(mu, lam) variates (mean mu, variance mu^3/lam).

    Recipe (one chi-squared transform plus an acceptance step):

    1. draw z ~ N(0,1) and set y = z^2, a chi-squared with one degree of
       freedom;
    2. compute the smaller root of the quadratic the IG density induces,
       x = mu + mu^2 y/(2 lam) - mu/(2 lam) * sqrt(4 mu lam y + mu^2 y^2);
    3. draw u ~ U(0,1); return x if u <= mu/(mu + x), else mu^2/x.
    """
    if mu <= 0 or lam <= 0:
        raise InvalidParam(f"inverse_gaussian_variate: mu and lam must be > 0, got ({mu}, {lam})")
    if n < 0:
        raise InvalidParam("inverse_gaussian_variate: n must be >= 0")
    gen = rng.generator()
    y = gen.standard_normal(n) ** 2
    x = mu + (mu * mu * y - mu * np.sqrt(4.0 * mu * lam * y + (mu * y) ** 2)) / (2.0 * lam)
    u = gen.uniform(size=n)
    return np.where(u <= mu / (mu + x), x, mu * mu / np.where(x > 0, x, np.finfo(float).tiny))


def paths_from_log_increments(
    s0: float, increments: np.ndarray, dt: float, rng: RngStream, scheme: str = "exact"
) -> PathSet:
    """Assemble a level PathSet from per-step log increments.

    Shared by every returns-space simulator so that models which nest each
    other reduce to bit-identical paths when the extra features are off.
    """
    if s0 <= 0:
        raise InvalidParam("paths_from_log_increments: s0 must be > 0")
    n_paths, n_steps = increments.shape
    levels = np.empty((n_paths, n_steps + 1))
    levels[:, 0] = s0
    levels[:, 1:] = s0 * np.exp(np.cumsum(increments, axis=1))
    return PathSet(levels, dt=dt, seed=rng.seed, stream_id=rng.stream_id, scheme=scheme)


def require_finite(**named: float) -> None:
    """Raise InvalidParam if any named scalar is not finite."""
    for name, value in named.items():
        if not np.isfinite(value):
            raise InvalidParam(f"{name} must be finite, got {value}")
