"""Mean-reverting families on a credit-spread-like series.

Cleans outliers, tests stationarity with the fixed-critical-value ADF test,
inspects ACF/PACF, then calibrates Vasicek, exponential Vasicek and CIR on
the same series and compares their long-run pictures.
"""

from pathlib import Path

import numpy as np

from riskproc import meanrev
from riskproc.core import RngStream, TimeSeries
from riskproc.diagnostics import acf, adf_test, clean_outliers, pacf

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

dt = 1 / 52
rng = RngStream(2024)

# --- a spread-like series: exponential Vasicek with a few bad quotes --------
core = meanrev.VasicekParams(alpha=5.0, theta=3.9, sigma=1.4)
levels = meanrev.exp_vasicek_simulate(core, 55.0, 520, 1, dt, rng).values[0]
bad = levels.copy()
bad[100] *= 1.9
bad[350] *= 0.4
series = TimeSeries(bad, dt)

cleaned = clean_outliers(series)
print(f"outlier cleaning removed {len(series) - len(cleaned)} of {len(series)} points")

log_levels = np.log(cleaned.values)
report = adf_test(log_levels, lags=1)
print(f"ADF statistic {report.statistic:.4f}  (1%: {report.critical_1pct}, 5%: {report.critical_5pct})")
print("unit root rejected at 5%:", report.reject_5pct)

np.savetxt(OUT / "spread_acf_pacf.csv",
           np.column_stack([np.arange(1, 21), acf(log_levels, 20)[1:], pacf(log_levels, 20)]),
           delimiter=",", header="lag,acf,pacf", comments="")

# --- three calibrations on the same cleaned series ---------------------------
vas = meanrev.vasicek_calibrate_ols(cleaned.values, dt)
exp_vas = meanrev.exp_vasicek_calibrate(cleaned.values, dt)
cir = meanrev.cir_calibrate(cleaned.values, dt)

print("\nVasicek     :", vas.params)
print("exp-Vasicek :", exp_vas.params, " m =", round(exp_vas.params.m, 4))
print("CIR         :", cir.params, " Feller satisfied:", cir.params.feller_satisfied)

# like-for-like level-space AIC (3 parameters each)
for name, res in (("vasicek", vas), ("exp-vasicek", exp_vas), ("cir", cir)):
    print(f"AIC {name:12s} {res.aic(3):12.2f}")

# --- long-run comparison: simulate each fitted model forward -----------------
last = float(cleaned.values[-1])
rows = [("model", "p05", "median", "p95")]
sims = {
    "vasicek": meanrev.vasicek_simulate(vas.params, last, 260, 4000, dt, rng.substream(1)),
    "exp-vasicek": meanrev.exp_vasicek_simulate(exp_vas.params, last, 260, 4000, dt, rng.substream(2)),
    "cir": meanrev.cir_simulate(cir.params, last, 260, 4000, dt, rng.substream(3)),
}
with open(OUT / "mean_reversion_five_year_fan.csv", "w", newline="\n") as fh:
    fh.write("model,p05,median,p95\n")
    for name, ps in sims.items():
        q = np.quantile(ps.terminal, [0.05, 0.5, 0.95])
        fh.write(f"{name},{q[0]!r},{q[1]!r},{q[2]!r}\n")
        print(f"{name:12s} five-year fan: 5% {q[0]:7.2f}  median {q[1]:7.2f}  95% {q[2]:7.2f}")
