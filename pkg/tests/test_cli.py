import json
from pathlib import Path

import numpy as np
import pytest

from riskproc import cli, evt, gbm, meanrev, meanrev_jumps
from riskproc.cli import ingest_csv, model_select_report
from riskproc.core import RngStream, TimeSeries, to_log_returns
from riskproc.errors import NonMonotoneDates, ParseError

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


class TestIngestCsv:
    def test_two_rows_daily(self, tmp_path):
        f = tmp_path / "mini.csv"
        f.write_text("2020-01-01,100\n2020-01-02,101\n")
        ts = ingest_csv(str(f), cli.DAILY_DT)
        assert len(ts) == 2
        assert ts.dt == pytest.approx(1 / 252)
        assert np.array_equal(ts.values, [100.0, 101.0])

    def test_header_is_skipped(self, tmp_path):
        f = tmp_path / "h.csv"
        f.write_text("date,value\n2020-01-01,100\n2020-01-02,101\n2020-01-03,99\n")
        assert len(ingest_csv(str(f), 1 / 252)) == 3

    def test_empty_file(self, tmp_path):
        f = tmp_path / "empty.csv"
        f.write_text("")
        with pytest.raises(ParseError):
            ingest_csv(str(f), 1 / 252)

    def test_shuffled_dates(self, tmp_path):
        f = tmp_path / "bad.csv"
        f.write_text("2020-01-02,100\n2020-01-01,101\n")
        with pytest.raises(NonMonotoneDates):
            ingest_csv(str(f), 1 / 252)

    def test_bad_value_reports_line(self, tmp_path):
        f = tmp_path / "badval.csv"
        f.write_text("2020-01-01,100\n2020-01-02,oops\n")
        with pytest.raises(ParseError, match="line 2"):
            ingest_csv(str(f), 1 / 252)

    def test_bad_date_reports_line(self, tmp_path):
        f = tmp_path / "baddate.csv"
        f.write_text("2020-01-01,100\nnot-a-date,101\n")
        with pytest.raises(ParseError, match="line 2"):
            ingest_csv(str(f), 1 / 252)


def run_cli(argv):
    return cli.main(argv)


class TestCommands:
    def test_calibrate_gbm_matches_library(self, tmp_path):
        out = tmp_path / "out"
        code = run_cli(["calibrate", str(DATA / "gbm_fixture.csv"), "--model", "gbm",
                        "--daily", "--output-dir", str(out)])
        assert code == 0
        payload = json.loads((out / "calibrate_gbm.json").read_text())
        assert payload["schema_version"] == 1
        series = ingest_csv(str(DATA / "gbm_fixture.csv"), 1 / 252)
        direct = gbm.calibrate(to_log_returns(series))
        assert payload["params"]["mu"] == pytest.approx(direct.params.mu, rel=1e-12)
        assert payload["params"]["sigma"] == pytest.approx(direct.params.sigma, rel=1e-12)
        assert payload["aic"] == pytest.approx(direct.aic(2), rel=1e-12)

    def test_calibrate_gbm_golden_bytes(self, tmp_path):
        out = tmp_path / "out"
        run_cli(["calibrate", str(DATA / "gbm_fixture.csv"), "--model", "gbm",
                 "--daily", "--output-dir", str(out)])
        produced = (out / "calibrate_gbm.json").read_bytes().replace(
            str(DATA / "gbm_fixture.csv").encode(), b"tests/data/gbm_fixture.csv"
        )
        golden = (GOLDEN / "calibrate_gbm.json").read_bytes()
        assert produced == golden

    def test_diagnose_ar1_fixture_rejects_unit_root(self, tmp_path):
        out = tmp_path / "out"
        code = run_cli(["diagnose", str(DATA / "ar1_fixture.csv"), "--weekly",
                        "--output-dir", str(out)])
        assert code == 0
        payload = json.loads((out / "diagnose_summary.json").read_text())
        assert payload["adf"]["reject_5pct"] is True
        for name in ("acf.csv", "pacf.csv", "qq.csv"):
            assert (out / name).exists()
        acf_rows = (out / "acf.csv").read_text().strip().splitlines()
        assert acf_rows[0] == "lag,acf"
        assert float(acf_rows[1].split(",")[1]) == pytest.approx(1.0)

    def test_risk_matches_module(self, tmp_path):
        out = tmp_path / "out"
        code = run_cli(["risk", str(DATA / "heavytail_fixture.csv"), "--daily",
                        "--p-levels", "0.01", "--n-boot", "0", "--output-dir", str(out)])
        assert code == 0
        payload = json.loads((out / "risk_report.json").read_text())
        series = ingest_csv(str(DATA / "heavytail_fixture.csv"), 1 / 252)
        losses = -to_log_returns(series).values
        report = evt.pot_pipeline(losses, [0.01], n_boot=0)
        assert payload["levels"][0]["var"] == pytest.approx(report.var[0], rel=1e-12)
        assert payload["levels"][0]["es"] == pytest.approx(report.es[0], rel=1e-12)
        assert payload["n_exceed"] == report.n_exceed

    def test_risk_csv_format(self, tmp_path):
        out = tmp_path / "out"
        run_cli(["risk", str(DATA / "heavytail_fixture.csv"), "--daily", "--format", "csv",
                 "--p-levels", "0.01,0.001", "--n-boot", "0", "--output-dir", str(out)])
        rows = (out / "risk_report.csv").read_text().strip().splitlines()
        assert rows[0].startswith("schema_version,threshold,n,n_exceed,xi,beta,p,var,es")
        assert len(rows) == 3  # one row per p-level

    def test_simulate_writes_paths_and_percentiles(self, tmp_path):
        out = tmp_path / "out"
        code = run_cli(["simulate", str(DATA / "gbm_fixture.csv"), "--model", "gbm",
                        "--daily", "--seed", "7", "--n-paths", "25", "--n-steps", "30",
                        "--p-levels", "0.05,0.5,0.95", "--output-dir", str(out)])
        assert code == 0
        paths = (out / "simulate_gbm_paths.csv").read_text().strip().splitlines()
        assert paths[0] == "step,t," + ",".join(f"path_{j}" for j in range(25))
        assert len(paths) == 32
        fan = (out / "simulate_gbm_percentiles.csv").read_text().strip().splitlines()
        assert fan[0] == "step,t,p_0.05,p_0.5,p_0.95"

    def test_error_surfaces_with_code(self, tmp_path, capsys):
        import datetime

        f = tmp_path / "neg.csv"
        day = datetime.date(2020, 1, 1)
        lines = []
        for v in ["5", "-1"] + ["5"] * 58:
            lines.append(f"{day.isoformat()},{v}")
            day += datetime.timedelta(days=1)
        f.write_text("\n".join(lines) + "\n")
        code = run_cli(["calibrate", str(f), "--model", "cir", "--weekly",
                        "--output-dir", str(tmp_path / "o")])
        assert code == 1
        err = capsys.readouterr().err
        assert "NonPositiveLevel" in err

    def test_unknown_model_rejected_by_parser(self, tmp_path):
        with pytest.raises(SystemExit):
            run_cli(["calibrate", "x.csv", "--model", "heston"])


class TestDeterminism:
    def test_byte_identical_artifacts_across_runs(self, tmp_path):
        def run_all(base):
            base.mkdir()
            run_cli(["diagnose", str(DATA / "ar1_fixture.csv"), "--weekly",
                     "--output-dir", str(base / "d")])
            run_cli(["calibrate", str(DATA / "gbm_fixture.csv"), "--model", "gbm",
                     "--daily", "--output-dir", str(base / "c")])
            run_cli(["simulate", str(DATA / "gbm_fixture.csv"), "--model", "gbm",
                     "--daily", "--seed", "11", "--n-paths", "10", "--n-steps", "20",
                     "--output-dir", str(base / "s")])
            run_cli(["risk", str(DATA / "heavytail_fixture.csv"), "--daily",
                     "--seed", "11", "--n-boot", "25", "--output-dir", str(base / "r")])
            run_cli(["select", str(DATA / "gbm_fixture.csv"), "--daily",
                     "--output-dir", str(base / "m")])

        run_all(tmp_path / "a")
        run_all(tmp_path / "b")
        files_a = sorted((tmp_path / "a").rglob("*.*"))
        files_b = sorted((tmp_path / "b").rglob("*.*"))
        assert [f.name for f in files_a] == [f.name for f in files_b]
        for fa, fb in zip(files_a, files_b):
            assert fa.read_bytes() == fb.read_bytes(), fa.name


class TestModelSelect:
    def test_gbm_fixture_selects_gbm_cell(self, tmp_path):
        out = tmp_path / "out"
        code = run_cli(["select", str(DATA / "gbm_fixture.csv"), "--daily",
                        "--output-dir", str(out)])
        assert code == 0
        payload = json.loads((out / "model_select.json").read_text())
        assert payload["chosen_cell"]["row"] == "no_mean_reversion"
        assert payload["best_model"] == "gbm"

    def test_gbm_inputs_win_their_cell(self):
        wins = 0
        reps = 100
        for k in range(reps):
            ps = gbm.simulate(gbm.GbmParams(0.05, 0.2), 100.0, 400, 1, 1 / 252,
                              RngStream(7000 + k))
            series = TimeSeries(ps.values[0], 1 / 252)
            report = model_select_report(series)
            cell = report["chosen_cell"]
            wins += cell["row"] == "no_mean_reversion" and cell["column"] == "normal_tails"
        assert wins >= 90

    def test_vasicek_inputs_select_mean_reversion(self):
        wins = 0
        reps = 100
        for k in range(reps):
            ps = meanrev.vasicek_simulate(meanrev.VasicekParams(5.0, 0.04, 0.015),
                                          0.04, 600, 1, 1 / 52, RngStream(8000 + k))
            series = TimeSeries(ps.values[0], 1 / 52)
            report = model_select_report(series)
            wins += report["chosen_cell"]["row"] == "mean_reversion"
        assert wins >= 90

    def test_jump_vasicek_inputs_select_fat_mean_reversion(self):
        p = meanrev_jumps.JumpVasicekParams(8.0, 50.0, 25.0,
                                            lambda_up=10.0, mu_up=15.0, sigma_up=2.0)
        wins = 0
        reps = 20
        for k in range(reps):
            ps = meanrev_jumps.simulate(p, 50.0, 750, 1, 1 / 52, RngStream(9000 + k))
            series = TimeSeries(ps.values[0], 1 / 52)
            report = model_select_report(series)
            cell = report["chosen_cell"]
            wins += cell["row"] == "mean_reversion" and cell["column"] == "fat_tails"
        assert wins >= 16  # >= 80%
