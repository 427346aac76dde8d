"""Batch front end.

Reads a two-column CSV (ISO-8601 date, decimal level), runs one of
diagnose / calibrate / simulate / risk / select and writes JSON/CSV
artifacts to the output directory. The observation step is always set by an
explicit frequency flag (daily = 1/252, weekly = 1/52, or --dt), never
inferred from calendar gaps; dates are validated for monotonicity only.

Fixed (config, seed) pairs produce byte-identical artifacts run to run.
Library errors surface as machine-readable codes on stderr with a nonzero
exit status; there are no silent fallbacks.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import diagnostics, evt, garch, gbm, jumps, meanrev, meanrev_jumps, subordinated
from .core import RngStream, TimeSeries, to_log_returns
from .errors import NonMonotoneDates, ParseError, ToolkitError

SCHEMA_VERSION = 1

DAILY_DT = 1.0 / 252.0
WEEKLY_DT = 1.0 / 52.0

MODELS = ("gbm", "ngarch", "jumps", "vg", "nig", "vasicek", "exp-vasicek", "cir", "jump-vasicek")

# free parameters per family: the AIC rank metric is 2k - 2 logL
K_PARAMS = {
    "gbm": 2,
    "ngarch": 5,
    "jumps": 5,
    "vg": 4,
    "nig": 4,
    "vasicek": 3,
    "exp-vasicek": 3,
    "cir": 3,
    "jump-vasicek": 6,
}

_MODEL_CELL = {
    "gbm": ("no_mean_reversion", "normal_tails"),
    "ngarch": ("no_mean_reversion", "fat_tails"),
    "jumps": ("no_mean_reversion", "fat_tails"),
    "vg": ("no_mean_reversion", "fat_tails"),
    "nig": ("no_mean_reversion", "fat_tails"),
    "vasicek": ("mean_reversion", "normal_tails"),
    "exp-vasicek": ("mean_reversion", "fat_tails"),
    "cir": ("mean_reversion", "fat_tails"),
    "jump-vasicek": ("mean_reversion", "fat_tails"),
}


@dataclass
class RunConfig:
    command: str
    input_path: str
    model: str | None = None
    dt: float = DAILY_DT
    seed: int = 0
    n_paths: int = 100
    n_steps: int | None = None
    horizon: float | None = None
    p_levels: tuple[float, ...] = (0.05, 0.5, 0.95)
    output_dir: str = "."
    format: str = "json"
    double_jumps: bool = False
    max_lag: int = 20
    adf_lags: int = 1
    threshold_quantile: float = 0.90
    threshold: float | None = None
    n_boot: int = 1000

    def __post_init__(self):
        if self.dt <= 0:
            raise ParseError(f"dt must be > 0, got {self.dt}")
        if any(not 0 < p < 1 for p in self.p_levels):
            raise ParseError(f"p levels must lie in (0, 1), got {self.p_levels}")


def ingest_csv(path: str, dt: float) -> TimeSeries:
    """Two columns: ISO-8601 date, decimal value; optional header; UTF-8."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not valid UTF-8") from exc
    lines = [(i + 1, line.strip()) for i, line in enumerate(text.splitlines()) if line.strip()]
    if not lines:
        raise ParseError(f"{path} is empty")

    def parse_line(line_no: int, line: str) -> tuple[_dt.date, float]:
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ParseError("expected two comma-separated columns", line_no)
        try:
            stamp = _dt.date.fromisoformat(parts[0])
        except ValueError:
            try:
                stamp = _dt.datetime.fromisoformat(parts[0])
            except ValueError:
                raise ParseError(f"bad ISO-8601 date {parts[0]!r}", line_no) from None
        try:
            value = float(parts[1])
        except ValueError:
            raise ParseError(f"bad decimal value {parts[1]!r}", line_no) from None
        return stamp, value

    start = 0
    try:
        parse_line(*lines[0])
    except ParseError:
        if len(lines) == 1:
            raise
        start = 1  # header row
    dates = []
    values = []
    for line_no, line in lines[start:]:
        stamp, value = parse_line(line_no, line)
        dates.append(stamp)
        values.append(value)
    if len(values) < 2:
        raise ParseError(f"{path}: need at least 2 observations")
    for a, b in zip(dates, dates[1:]):
        if type(a) is not type(b) or not a < b:
            raise NonMonotoneDates(f"{path}: dates must be strictly increasing")
    return TimeSeries(np.asarray(values), dt)


# ---------------------------------------------------------------------------
# serialisation helpers (deterministic byte-for-byte output)
# ---------------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj]
    return obj


def _write_json(path: Path, payload: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(payload), fh, sort_keys=True, indent=2)
        fh.write("\n")


def _fmt(x) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, (float, np.floating)) else str(v) for v in row))
            fh.write("\n")


def _params_dict(model: str, params) -> dict:
    out = asdict(params)
    if model == "cir":
        out["feller_satisfied"] = params.feller_satisfied
    if model == "exp-vasicek":
        out["m"] = params.m
    if model == "jump-vasicek":
        out["long_run_mean"] = params.long_run_mean
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _calibrate_model(model: str, series: TimeSeries, double_jumps: bool):
    if model in ("gbm", "ngarch", "jumps", "vg", "nig"):
        returns = to_log_returns(series)
        if model == "gbm":
            return gbm.calibrate(returns)
        if model == "ngarch":
            return garch.calibrate(returns)
        if model == "jumps":
            return jumps.calibrate(returns)
        if model == "vg":
            return subordinated.vg_calibrate(returns)
        return subordinated.nig_calibrate(returns)
    if model == "vasicek":
        return meanrev.vasicek_calibrate_ols(series.values, series.dt)
    if model == "exp-vasicek":
        return meanrev.exp_vasicek_calibrate(series.values, series.dt)
    if model == "cir":
        return meanrev.cir_calibrate(series.values, series.dt)
    if model == "jump-vasicek":
        return meanrev_jumps.calibrate(series.values, series.dt, double_jumps=double_jumps)
    raise ParseError(f"unknown model {model!r}")


def _simulate_model(model: str, params, series: TimeSeries, cfg: RunConfig, rng: RngStream):
    last = float(series.values[-1])
    n_steps = cfg.n_steps
    if n_steps is None:
        horizon = cfg.horizon if cfg.horizon is not None else 1.0
        n_steps = max(1, int(round(horizon / cfg.dt)))
    args = (params, last, n_steps, cfg.n_paths, cfg.dt, rng)
    if model == "gbm":
        return gbm.simulate(*args)
    if model == "ngarch":
        return garch.simulate(*args).paths
    if model == "jumps":
        return jumps.simulate(*args)
    if model == "vg":
        return subordinated.vg_simulate(*args)
    if model == "nig":
        return subordinated.nig_simulate(*args)
    if model == "vasicek":
        return meanrev.vasicek_simulate(*args)
    if model == "exp-vasicek":
        return meanrev.exp_vasicek_simulate(*args)
    if model == "cir":
        return meanrev.cir_simulate(*args)
    if model == "jump-vasicek":
        return meanrev_jumps.simulate(*args)
    raise ParseError(f"unknown model {model!r}")


def _cmd_diagnose(cfg: RunConfig, out: Path) -> None:
    series = ingest_csv(cfg.input_path, cfg.dt)
    returns = to_log_returns(series) if np.all(series.values > 0) else None
    x = returns.values if returns is not None else np.diff(series.values)
    summary = diagnostics.moment_summary(x)
    adf = diagnostics.adf_test(series.values, lags=cfg.adf_lags)
    max_lag = min(cfg.max_lag, x.size - 1)
    acf_vals = diagnostics.acf(x, max_lag)
    pacf_vals = diagnostics.pacf(x, min(max_lag, (x.size - 1) // 2))
    qq = diagnostics.qq_data((x - x.mean()) / x.std(), "normal")
    _write_json(out / "diagnose_summary.json", {
        "command": "diagnose",
        "input": cfg.input_path,
        "dt": cfg.dt,
        "n": len(series),
        "moments": asdict(summary),
        "adf": asdict(adf),
        "on_returns": returns is not None,
    })
    _write_csv(out / "acf.csv", ["lag", "acf"], [(k, v) for k, v in enumerate(acf_vals)])
    _write_csv(out / "pacf.csv", ["lag", "pacf"], [(k + 1, v) for k, v in enumerate(pacf_vals)])
    _write_csv(out / "qq.csv", ["theoretical_q", "sample_q"], qq)


def _cmd_calibrate(cfg: RunConfig, out: Path) -> None:
    series = ingest_csv(cfg.input_path, cfg.dt)
    model = cfg.model or "gbm"
    result = _calibrate_model(model, series, cfg.double_jumps)
    k = K_PARAMS[model] + (3 if model == "jump-vasicek" and cfg.double_jumps else 0)
    payload = {
        "command": "calibrate",
        "model": model,
        "input": cfg.input_path,
        "dt": cfg.dt,
        "n": len(series),
        "params": _params_dict(model, result.params),
        "initial_guess": _params_dict(model, result.initial_guess),
        "log_likelihood": result.log_likelihood,
        "aic": result.aic(k),
        "iterations": result.iterations,
        "converged": result.converged,
    }
    if result.stderr_estimates:
        payload["stderr"] = result.stderr_estimates
    _write_json(out / f"calibrate_{model}.json", payload)


def _cmd_simulate(cfg: RunConfig, out: Path) -> None:
    series = ingest_csv(cfg.input_path, cfg.dt)
    model = cfg.model or "gbm"
    result = _calibrate_model(model, series, cfg.double_jumps)
    rng = RngStream(cfg.seed)
    paths = _simulate_model(model, result.params, series, cfg, rng)
    steps = np.arange(paths.n_steps + 1)
    times = steps * cfg.dt
    header = ["step", "t"] + [f"path_{j}" for j in range(paths.n_paths)]
    rows = (
        [int(i), float(times[i])] + [float(v) for v in paths.values[:, i]]
        for i in range(paths.n_steps + 1)
    )
    _write_csv(out / f"simulate_{model}_paths.csv", header, rows)
    qs = np.quantile(paths.values, cfg.p_levels, axis=0)
    header = ["step", "t"] + [f"p_{p:g}" for p in cfg.p_levels]
    rows = (
        [int(i), float(times[i])] + [float(qs[j, i]) for j in range(len(cfg.p_levels))]
        for i in range(paths.n_steps + 1)
    )
    _write_csv(out / f"simulate_{model}_percentiles.csv", header, rows)


def _cmd_risk(cfg: RunConfig, out: Path) -> None:
    series = ingest_csv(cfg.input_path, cfg.dt)
    returns = to_log_returns(series)
    losses = -returns.values
    report = evt.pot_pipeline(
        losses,
        cfg.p_levels,
        threshold_quantile=cfg.threshold_quantile,
        threshold=cfg.threshold,
        n_boot=cfg.n_boot,
        rng=RngStream(cfg.seed),
    )
    if cfg.format == "csv":
        header = ["schema_version", "threshold", "n", "n_exceed", "xi", "beta", "p", "var", "es"]
        rows = [
            [SCHEMA_VERSION, report.threshold, report.n, report.n_exceed,
             report.gpd.xi, report.gpd.beta, p, v, e]
            for p, v, e in zip(report.p_levels, report.var, report.es)
        ]
        _write_csv(out / "risk_report.csv", header, rows)
        return
    levels = []
    for j, p in enumerate(report.p_levels):
        entry = {"p": p, "var": report.var[j], "es": report.es[j]}
        if report.var_ci is not None:
            entry["var_ci"] = list(report.var_ci[j])
            entry["es_ci"] = list(report.es_ci[j])
        levels.append(entry)
    _write_json(out / "risk_report.json", {
        "command": "risk",
        "input": cfg.input_path,
        "threshold": report.threshold,
        "n": report.n,
        "n_exceed": report.n_exceed,
        "gpd": {"xi": report.gpd.xi, "beta": report.gpd.beta},
        "levels": levels,
    })


def model_select_report(series: TimeSeries, adf_lags: int = 1, double_jumps: bool = False) -> dict:
    """Classify the series in the mean-reversion x fat-tails grid.

    The ADF test on (log-)levels picks the row; the excess-kurtosis screen
    on returns decides whether the fat-tailed families of that row are
    admissible; every admissible family is fitted and ranked by AIC. The
    chosen cell is the cell of the AIC-best fit. Failed fits are reported,
    not hidden.
    """
    if len(series) < 300:
        raise ParseError("model_select_report: need n >= 300")
    positive = bool(np.all(series.values > 0))
    level_input = np.log(series.values) if positive else series.values
    adf = diagnostics.adf_test(level_input, lags=adf_lags)
    mean_reverting = adf.reject_5pct
    x = to_log_returns(series).values if positive else np.diff(series.values)
    summary = diagnostics.moment_summary(x)
    kurt_band = 3.0 * np.sqrt(24.0 / x.size)
    fat = summary.excess_kurtosis > kurt_band

    if mean_reverting:
        candidates = ["vasicek"]
        if fat:
            candidates += (["exp-vasicek", "cir"] if positive else []) + ["jump-vasicek"]
    else:
        candidates = ["gbm"] if positive else []
        if fat and positive:
            candidates += ["ngarch", "jumps", "vg", "nig"]
    ranking = []
    for model in candidates:
        k = K_PARAMS[model] + (3 if model == "jump-vasicek" and double_jumps else 0)
        try:
            res = _calibrate_model(model, series, double_jumps)
            ranking.append({
                "model": model,
                "aic": res.aic(k),
                "log_likelihood": res.log_likelihood,
                "k": k,
                "converged": res.converged,
                "error": None,
            })
        except ToolkitError as exc:
            ranking.append({
                "model": model, "aic": None, "log_likelihood": None, "k": k,
                "converged": False, "error": exc.code,
            })
    ok = [r for r in ranking if r["aic"] is not None]
    ok.sort(key=lambda r: r["aic"])
    failed = [r for r in ranking if r["aic"] is None]
    ranking = ok + failed
    chosen = _MODEL_CELL[ok[0]["model"]] if ok else (
        "mean_reversion" if mean_reverting else "no_mean_reversion",
        "fat_tails" if fat else "normal_tails",
    )
    table = {
        "no_mean_reversion": {"normal_tails": ["gbm"], "fat_tails": ["jumps", "ngarch", "vg", "nig"]},
        "mean_reversion": {"normal_tails": ["vasicek"], "fat_tails": ["exp-vasicek", "cir", "jump-vasicek"]},
    }
    return {
        "command": "select",
        "n": len(series),
        "adf": asdict(adf),
        "excess_kurtosis": summary.excess_kurtosis,
        "kurtosis_band": float(kurt_band),
        "mean_reversion": bool(mean_reverting),
        "fat_tails": bool(fat),
        "ranking": ranking,
        "best_model": ok[0]["model"] if ok else None,
        "chosen_cell": {"row": chosen[0], "column": chosen[1]},
        "table": table,
    }


def _cmd_select(cfg: RunConfig, out: Path) -> None:
    series = ingest_csv(cfg.input_path, cfg.dt)
    payload = model_select_report(series, adf_lags=cfg.adf_lags, double_jumps=cfg.double_jumps)
    payload["input"] = cfg.input_path
    _write_json(out / "model_select.json", payload)


_COMMANDS = {
    "diagnose": _cmd_diagnose,
    "calibrate": _cmd_calibrate,
    "simulate": _cmd_simulate,
    "risk": _cmd_risk,
    "select": _cmd_select,
}


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _COMMANDS[cfg.command](cfg, out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskproc",
        description="Calibrate, simulate and risk-measure stochastic process models on a CSV series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", help="CSV file: ISO-8601 date, decimal value")
        freq = p.add_mutually_exclusive_group()
        freq.add_argument("--daily", action="store_true", help="dt = 1/252 (default)")
        freq.add_argument("--weekly", action="store_true", help="dt = 1/52")
        freq.add_argument("--dt", type=float, default=None, help="explicit step in years")
        p.add_argument("--output-dir", default=".")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if name in ("calibrate", "simulate"):
            p.add_argument("--model", choices=MODELS, required=True)
            p.add_argument("--double-jumps", action="store_true")
        if name == "simulate":
            p.add_argument("--n-paths", type=int, default=100)
            p.add_argument("--n-steps", type=int, default=None)
            p.add_argument("--horizon", type=float, default=None, help="years; used when --n-steps is absent")
            p.add_argument("--p-levels", default="0.05,0.5,0.95")
        if name == "risk":
            p.add_argument("--p-levels", default="0.01,0.001")
            p.add_argument("--threshold-quantile", type=float, default=0.90)
            p.add_argument("--threshold", type=float, default=None)
            p.add_argument("--n-boot", type=int, default=1000)
        if name == "diagnose":
            p.add_argument("--max-lag", type=int, default=20)
            p.add_argument("--adf-lags", type=int, default=1)
        if name == "select":
            p.add_argument("--adf-lags", type=int, default=1)
            p.add_argument("--double-jumps", action="store_true")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.dt is not None:
        dt = args.dt
    elif args.weekly:
        dt = WEEKLY_DT
    else:
        dt = DAILY_DT
    cfg = RunConfig(command=args.command, input_path=args.input, dt=dt,
                    seed=args.seed, output_dir=args.output_dir, format=args.format)
    if hasattr(args, "model"):
        cfg.model = args.model
    if hasattr(args, "double_jumps"):
        cfg.double_jumps = args.double_jumps
    if hasattr(args, "n_paths"):
        cfg.n_paths = args.n_paths
        cfg.n_steps = args.n_steps
        cfg.horizon = args.horizon
    if hasattr(args, "p_levels"):
        try:
            cfg.p_levels = tuple(float(tok) for tok in args.p_levels.split(",") if tok)
        except ValueError:
            raise ParseError(f"bad --p-levels {args.p_levels!r}") from None
        if any(not 0 < p < 1 for p in cfg.p_levels):
            raise ParseError(f"p levels must lie in (0, 1): {args.p_levels!r}")
    if hasattr(args, "max_lag"):
        cfg.max_lag = args.max_lag
    if hasattr(args, "adf_lags"):
        cfg.adf_lags = args.adf_lags
    if hasattr(args, "threshold_quantile"):
        cfg.threshold_quantile = args.threshold_quantile
        cfg.threshold = args.threshold
        cfg.n_boot = args.n_boot
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return run(cfg)
    except ToolkitError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
