"""Derivative-free likelihood maximisation shared by the calibration routines."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import OptimizerFailed


def maximize(
    log_likelihood: Callable[[np.ndarray], float],
    starts: Sequence[np.ndarray],
    maxiter: int | None = None,
) -> tuple[np.ndarray, float, int, bool]:
    """Nelder-Mead maximisation from one or more starting points.

    Returns (best_x, best_ll, iterations_of_winner, converged). The best
    vertex can only improve on its start, so the winning log-likelihood is
    always >= the log-likelihood at the first (primary) start.
    """

    def objective(x: np.ndarray) -> float:
        ll = log_likelihood(x)
        if not np.isfinite(ll):
            return 1e300
        return -ll

    best = None
    for x0 in starts:
        x0 = np.asarray(x0, dtype=float)
        # likelihood changes below 1e-8 are far inside every reported
        # tolerance; tighter simplex criteria just burn evaluations
        options = {"xatol": 1e-6, "fatol": 1e-8, "adaptive": x0.size > 4}
        if maxiter is not None:
            options["maxiter"] = maxiter
        res = minimize(objective, x0, method="Nelder-Mead", options=options)
        if best is None or res.fun < best.fun:
            best = res
    if best is None or not np.isfinite(best.fun) or best.fun >= 1e299:
        raise OptimizerFailed("maximize: no start produced a finite likelihood")
    if not best.success:
        raise OptimizerFailed(f"maximize: did not converge after {best.nit} iterations")
    return best.x, -best.fun, int(best.nit), bool(best.success)
