"""Acceptance gate: ten criteria, each printed as one pass/fail line.

Every tolerance is pinned here; the statistical checks run on fixed seeds so
the suite is deterministic end to end. Budgets are wall-clock upper bounds.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import ncx2

from conftest import assert_ks, sample_mean_se, sample_var_se
from riskproc import cli, evt, garch, gbm, jumps, meanrev, meanrev_jumps, subordinated
from riskproc.core import LogReturns, RngStream

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def _report(number: int, label: str, started: float, budget: float | None = None):
    elapsed = time.perf_counter() - started
    if budget is not None:
        assert elapsed < budget, f"criterion {number} exceeded its {budget}s budget: {elapsed:.1f}s"
    print(f"ACCEPTANCE {number} PASS ({elapsed:.3f}s): {label}")


def test_a01_parameter_transform_golden():
    meanrev.params_from_discrete(0.3625, 0.9054, 0.1894, 0.02)  # warm the code path
    t0 = time.perf_counter()
    p = meanrev.params_from_discrete(0.3625, 0.9054, 0.1894, 0.02)
    elapsed = time.perf_counter() - t0
    assert abs(p.alpha - 4.9701) < 2e-3
    assert abs(p.theta - 3.8307) < 2e-3
    assert abs(p.sigma - 1.4061) < 2e-3
    assert elapsed < 1e-3
    print(f"ACCEPTANCE 1 PASS ({elapsed * 1e6:.0f}us): discrete-coefficient transform golden")


def test_a02_vg_density_against_mixture_oracle():
    t0 = time.perf_counter()

    def oracle(x, p, dt):
        # oracle accuracy of 1e-9 relative leaves a 1000x margin on the
        # 1e-6 comparison; the integrand is written out by hand so the
        # adaptive quadrature is not throttled by distribution-object calls
        a = dt / p.nu
        log_norm_const = -0.5 * math.log(2.0 * math.pi) - math.log(p.sigma_bar)
        log_gamma_const = -a * math.log(p.nu) - math.lgamma(a)
        center = p.mu_bar * dt

        def integrand(g):
            dev = x - center - p.theta_bar * g
            return math.exp(
                log_norm_const - 0.5 * math.log(g) - dev * dev / (2.0 * p.sigma_bar**2 * g)
                + log_gamma_const + (a - 1.0) * math.log(g) - g / p.nu
            )

        cut = 20.0 * max(dt, p.nu)
        v1, _ = quad(integrand, 0.0, cut, limit=200, epsabs=1e-12, epsrel=1e-9)
        v2, _ = quad(integrand, cut, np.inf, limit=200, epsabs=1e-12, epsrel=1e-9)
        return v1 + v2

    configs = [
        (subordinated.VgParams(0.0, 0.6, 0.9, 0.4), 1.0),
        (subordinated.VgParams(0.0, 0.0, 0.9, 0.4), 1.0),
        (subordinated.VgParams(0.1, -0.2, 0.5, 0.3), 1.0),
        (subordinated.VgParams(0.0, 1.0, 1.4, 0.4), 1.0),
        (subordinated.VgParams(-0.05, 0.1, 0.25, 0.8), 0.25),
    ]
    for p, dt in configs:
        mean, var, _, _ = subordinated.vg_moments(p, dt)
        xs = np.linspace(mean - 5 * math.sqrt(var), mean + 5 * math.sqrt(var), 50)
        for x in xs:
            want = oracle(float(x), p, dt)
            got = subordinated.vg_density(float(x), p, dt)
            assert got == pytest.approx(want, rel=1e-6)
    _report(2, "VG closed form vs mixture-integral oracle on 5x50 grid", t0, budget=10.0)


def test_a03_density_normalization_suite():
    t0 = time.perf_counter()
    # VG
    for p, dt in [
        (subordinated.VgParams(0.0, 0.6, 0.9, 0.4), 1.0),
        (subordinated.VgParams(0.0, 0.0, 0.9, 0.4), 1.0),
        (subordinated.VgParams(0.3, -0.4, 0.7, 0.2), 0.5),
        (subordinated.VgParams(0.0, 1.0, 1.4, 0.4), 2.0),
        (subordinated.VgParams(0.05, 0.1, 0.3, 1.5), 1.0),
    ]:
        mean, var, _, _ = subordinated.vg_moments(p, dt)
        w = 60 * math.sqrt(var)
        val, _ = quad(lambda x: subordinated.vg_density(x, p, dt),
                      mean - w, mean + w, points=[p.mu_bar * dt], limit=400)
        assert val == pytest.approx(1.0, abs=1e-6)
    # NIG
    for p, dt in [
        (subordinated.NigParams(5.0, -1.0, 0.8, 0.1), 1.0),
        (subordinated.NigParams(2.0, 0.0, 1.5, 0.0), 1.0),
        (subordinated.NigParams(10.0, 6.0, 0.5, -0.2), 1.0),
        (subordinated.NigParams(8.0, -3.0, 1.0, 0.0), 0.5),
        (subordinated.NigParams(30.0, -10.0, 0.3, 0.05), 2.0),
    ]:
        m, v, _, _ = subordinated.nig_moments(p, dt)
        w = 60 * math.sqrt(v)
        val, _ = quad(lambda x: subordinated.nig_density(x, p, dt), m - w, m + w, limit=400)
        assert val == pytest.approx(1.0, abs=1e-6)
    # jump mixture
    for p, dt in [
        (jumps.JumpGbmParams(0.0, 0.15, 10.0, 0.03, 0.001), 1 / 252),
        (jumps.JumpGbmParams(0.05, 0.2, 0.0, 0.0, 0.0), 1 / 252),
        (jumps.JumpGbmParams(0.1, 0.3, 25.0, -0.05, 0.02), 1 / 52),
        (jumps.JumpGbmParams(0.0, 0.1, 100.0, 0.01, 0.005), 1 / 252),
        (jumps.JumpGbmParams(-0.1, 0.25, 5.0, 0.08, 0.03), 1 / 12),
    ]:
        m0 = (p.mu - 0.5 * p.sigma**2) * dt
        w = 40 * math.sqrt(p.sigma**2 * dt) + 30 * (abs(p.mu_y) + p.sigma_y) * max(1.0, p.lam * dt)
        val, _ = quad(lambda x: jumps.mixture_density(x, p, dt), m0 - w, m0 + w, limit=400)
        assert val == pytest.approx(1.0, abs=1e-6)
    # CIR transition
    for p, x_prev, dt in [
        (meanrev.CirParams(1.2902, 51.7894, 4.4966), 51.79, 1 / 52),
        (meanrev.CirParams(1.2902, 51.7894, 4.4966), 30.0, 1 / 12),
        (meanrev.CirParams(2.0, 0.04, 0.3), 0.04, 1 / 52),
        (meanrev.CirParams(0.5, 10.0, 1.5), 15.0, 0.5),
        (meanrev.CirParams(5.0, 1.0, 0.8), 0.5, 1 / 252),
    ]:
        mean, var = meanrev.cir_conditional_moments(p, x_prev, dt)
        hi = mean + 80 * math.sqrt(var)
        val, _ = quad(lambda x: meanrev.cir_transition_pdf(x, x_prev, p, dt),
                      1e-12, hi, limit=500, points=[mean])
        assert val == pytest.approx(1.0, abs=1e-6)
    # jump-Vasicek transition
    for p, x_prev, dt in [
        (meanrev_jumps.JumpVasicekParams(8.0, 50.0, 25.0, 5.0, 15.0, 2.0), 50.0, 1 / 52),
        (meanrev_jumps.JumpVasicekParams(1.0, 50.0, 8.0, 1.0, 8.0, 3.0), 60.0, 1 / 52),
        (meanrev_jumps.JumpVasicekParams(4.0, 10.0, 3.0, 3.0, 2.0, 0.5, 2.0, 1.5, 0.3), 10.0, 1 / 52),
        (meanrev_jumps.JumpVasicekParams(2.0, 0.05, 0.02, 6.0, 0.01, 0.002), 0.05, 1 / 252),
        (meanrev_jumps.JumpVasicekParams(8.0, 50.0, 25.0), 42.0, 1 / 52),
    ]:
        m, v = meanrev.vasicek_conditional_moments(p.base, x_prev, dt)
        spread = math.sqrt(v) * 40 + 10 * (p.mu_up + p.sigma_up + p.mu_dn + p.sigma_dn)
        val, _ = quad(lambda x: meanrev_jumps.transition_pdf(x, x_prev, p, dt),
                      m - spread, m + spread, limit=500)
        assert val == pytest.approx(1.0, abs=1e-6)
    _report(3, "density normalization (VG/NIG/jump-mixture/CIR/jump-Vasicek, 5 configs each)", t0, budget=60.0)


def test_a04_cir_cross_checks():
    t0 = time.perf_counter()
    p = meanrev.CirParams(1.2902, 51.7894, 4.4966)
    for x_prev, dt in [(51.79, 1 / 52), (30.0, 1 / 12), (70.0, 1 / 4)]:
        a, th, s = p.alpha, p.theta, p.sigma
        c = 2 * a / (s**2 * (1 - math.exp(-a * dt)))
        q = 2 * a * th / s**2 - 1
        u = c * x_prev * math.exp(-a * dt)
        mean, var = meanrev.cir_conditional_moments(p, x_prev, dt)
        xs = np.linspace(max(mean - 6 * math.sqrt(var), 1e-6), mean + 6 * math.sqrt(var), 60)
        mine = meanrev.cir_transition_pdf(xs, x_prev, p, dt)
        ref = 2 * c * ncx2.pdf(2 * c * xs, 2 * q + 2, 2 * u)
        assert np.max(np.abs(mine - ref) / ref) < 1e-10
    ps = meanrev.cir_simulate(p, 51.79, 1, 10**5, 1 / 52, RngStream(1001))
    a, th, s = p.alpha, p.theta, p.sigma
    c = 2 * a / (s**2 * (1 - math.exp(-a / 52)))
    q = 2 * a * th / s**2 - 1
    u = c * 51.79 * math.exp(-a / 52)
    assert_ks(ps.values[:, 1], lambda x: ncx2.cdf(2 * c * x, 2 * q + 2, 2 * u))
    _report(4, "CIR transition equals noncentral chi-squared; sampler passes KS", t0, budget=30.0)


def test_a05_moment_suite():
    t0 = time.perf_counter()
    n = 10**6
    # GBM terminal moments
    p = gbm.GbmParams(0.05, 0.2)
    ps = gbm.simulate(p, 100.0, 4, n, 0.25, RngStream(1101))
    st = ps.terminal
    assert abs(st.mean() - 100.0 * math.exp(0.05)) < 3 * sample_mean_se(st)
    target_var = math.exp(2 * 0.05) * 100.0**2 * (math.exp(0.04) - 1.0)
    assert abs(st.var() - target_var) < 3 * sample_var_se(st)
    # NGARCH: pooled innovation variance at gamma = 0 equals omega-bar
    vbar = 1e-4
    gp = garch.NgarchParams(0.0, vbar * (1 - 0.7 - 0.1), 0.7, 0.1, 0.0, vbar)
    sim = garch.simulate(gp, 1.0, 10_000, 100, 1 / 252, RngStream(1102))
    rets = sim.paths.values[:, 1:] / sim.paths.values[:, :-1] - 1.0
    per_path = rets.var(axis=1)
    se = per_path.std(ddof=1) / math.sqrt(per_path.size)
    assert abs(per_path.mean() - vbar) < 3 * se
    # jumps one-step moments
    jp = jumps.JumpGbmParams(0.1, 0.2, 25.0, 0.04, 0.02)
    dt = 1 / 252
    inc = np.log(jumps.simulate(jp, 1.0, 1, n, dt, RngStream(1103)).values[:, 1])
    mu_star = jp.mu + jp.lam * jp.mu_y - 0.5 * jp.sigma**2
    assert abs(inc.mean() - mu_star * dt) < 3 * sample_mean_se(inc)
    target = jp.sigma**2 * dt + jp.lam * dt * (jp.mu_y**2 + jp.sigma_y**2)
    assert abs(inc.var() - target) < 3 * sample_var_se(inc)
    # VG one-step moments
    vp = subordinated.VgParams(0.0, 1.0, 1.4, 0.4)
    inc = np.log(subordinated.vg_simulate(vp, 1.0, 1, n, 1.0, RngStream(1104)).values[:, 1])
    mean, var, _, _ = subordinated.vg_moments(vp, 1.0)
    assert abs(inc.mean() - mean) < 3 * sample_mean_se(inc)
    assert abs(inc.var() - var) < 3 * sample_var_se(inc)
    # NIG one-step moments
    np_ = subordinated.NigParams(8.0, -3.0, 1.0, 0.0)
    inc = np.log(subordinated.nig_simulate(np_, 1.0, 1, n, 1.0, RngStream(1105)).values[:, 1])
    mean, var, _, _ = subordinated.nig_moments(np_, 1.0)
    assert abs(inc.mean() - mean) < 3 * sample_mean_se(inc)
    assert abs(inc.var() - var) < 3 * sample_var_se(inc)
    # Vasicek terminal moments
    vk = meanrev.VasicekParams(1.5, 0.04, 0.03)
    horizon = 5.0 / vk.alpha
    xt = meanrev.vasicek_simulate(vk, 0.10, 40, n, horizon / 40, RngStream(1106)).terminal
    mean, var = meanrev.vasicek_conditional_moments(vk, 0.10, horizon)
    assert abs(xt.mean() - mean) < 3 * sample_mean_se(xt)
    assert abs(xt.var() - var) < 3 * sample_var_se(xt)
    # CIR terminal moments (exact scheme)
    cp = meanrev.CirParams(1.2902, 51.7894, 4.4966)
    xt = meanrev.cir_simulate(cp, 30.0, 20, n, 0.1, RngStream(1107)).terminal
    mean, var = meanrev.cir_conditional_moments(cp, 30.0, 2.0)
    assert abs(xt.mean() - mean) < 3 * sample_mean_se(xt)
    assert abs(xt.var() - var) < 3 * sample_var_se(xt)
    # jump-Vasicek terminal moments against the shifted long-run law
    jv = meanrev_jumps.JumpVasicekParams(8.0, 50.0, 25.0, 5.0, 15.0, 2.0)
    horizon = 10.0 / jv.alpha
    xt = meanrev_jumps.simulate(jv, 50.0, 40, n, horizon / 40, RngStream(1108)).terminal
    mean, var = jv.terminal_moments(50.0, horizon)
    theta_y = jv.theta + jv.lambda_up * jv.mu_up / jv.alpha
    assert mean == pytest.approx(theta_y + (50.0 - theta_y) * math.exp(-8.0 * horizon), rel=1e-12)
    rate2 = jv.sigma**2 + jv.lambda_up * (jv.mu_up**2 + jv.sigma_up**2)
    assert var == pytest.approx(rate2 * (1 - math.exp(-2 * jv.alpha * horizon)) / (2 * jv.alpha), rel=1e-12)
    assert abs(xt.mean() - mean) < 3 * sample_mean_se(xt)
    assert abs(xt.var() - var) < 3 * sample_var_se(xt)
    _report(5, "10^6-sample moment suite across all eight simulators", t0, budget=300.0)


def test_a06_recovery_suite():
    t0 = time.perf_counter()
    # GBM
    dt = 1 / 252
    ps = gbm.simulate(gbm.GbmParams(0.08, 0.3), 1.0, 100_000, 1, dt, RngStream(7))
    r = LogReturns(np.diff(np.log(ps.values[0])), dt)
    fit = gbm.calibrate(r).params
    assert abs(fit.sigma - 0.3) < 3 * 0.3 / math.sqrt(2 * 100_000)
    # NGARCH persistence
    true = garch.NgarchParams(0.0, 1e-5 * (1 - 0.85 - 0.05 * 1.25), 0.85, 0.05, 0.5, 1e-5)
    sim = garch.simulate(true, 1.0, 100_000, 1, dt, RngStream(8))
    rets = sim.paths.values[0, 1:] / sim.paths.values[0, :-1] - 1.0
    res = garch.calibrate(rets, dt=dt)
    assert abs(res.params.persistence - true.persistence) < 0.05
    # jumps
    jt = jumps.JumpGbmParams(0.0, 0.15, 0.1 / dt, 0.05, 0.01)
    ps = jumps.simulate(jt, 1.0, 50_000, 1, dt, RngStream(104))
    r = LogReturns(np.diff(np.log(ps.values[0])), dt)
    jres = jumps.calibrate(r)
    assert jres.params.lam * dt == pytest.approx(0.1, rel=0.30)
    assert jres.params.mu_y == pytest.approx(0.05, rel=0.20)
    # VG at the fitted-FX scale
    vt = subordinated.VgParams(-0.0001 / dt, -0.0001 / dt, 0.0061 / math.sqrt(dt), 0.4 * dt)
    ps = subordinated.vg_simulate(vt, 1.0, 2500, 1, dt, RngStream(204))
    vres = subordinated.vg_calibrate(LogReturns(np.diff(np.log(ps.values[0])), dt))
    assert vres.params.nu == pytest.approx(vt.nu, rel=0.5)
    assert vres.params.sigma_bar == pytest.approx(vt.sigma_bar, rel=0.10)
    # NIG
    nt = subordinated.NigParams(8.0, -3.0, 1.0, 0.0)
    ps = subordinated.nig_simulate(nt, 1.0, 1, 50_000, 1.0, RngStream(213))
    nres = subordinated.nig_calibrate(LogReturns(np.log(ps.values[:, 1]), 1.0))
    assert nres.params.delta == pytest.approx(1.0, rel=0.15)
    assert nres.params.beta / nres.params.alpha == pytest.approx(-0.375, abs=0.1)
    # Vasicek
    vkt = meanrev.VasicekParams(2.0, 0.05, 0.02)
    ps = meanrev.vasicek_simulate(vkt, 0.05, 10_000, 1, 1 / 52, RngStream(4))
    vkr = meanrev.vasicek_calibrate_ols(ps.values[0], 1 / 52).params
    assert vkr.alpha == pytest.approx(2.0, rel=0.20)
    assert vkr.theta == pytest.approx(0.05, rel=0.10)
    assert vkr.sigma == pytest.approx(0.02, rel=0.05)
    # exponential Vasicek via its log series
    ev = meanrev.VasicekParams(3.0, 1.2, 0.8)
    ps = meanrev.exp_vasicek_simulate(ev, math.exp(1.2), 10_000, 1, 1 / 52, RngStream(7))
    evr = meanrev.exp_vasicek_calibrate(ps.values[0], 1 / 52).params
    assert evr.theta == pytest.approx(1.2, rel=0.10)
    assert evr.sigma == pytest.approx(0.8, rel=0.05)
    # CIR at the fitted index scale
    ct = meanrev.CirParams(1.2902, 51.7894, 4.4966)
    x = meanrev.cir_simulate(ct, 49.33, 500, 1, 1 / 52, RngStream(18)).values[0]
    cres = meanrev.cir_calibrate(x, 1 / 52).params
    assert cres.theta == pytest.approx(ct.theta, rel=0.10)
    assert cres.sigma == pytest.approx(ct.sigma, rel=0.10)
    assert cres.alpha == pytest.approx(ct.alpha, rel=0.50)
    # jump-Vasicek
    jvt = meanrev_jumps.JumpVasicekParams(8.0, 50.0, 25.0, 5.0, 15.0, 2.0)
    ps = meanrev_jumps.simulate(jvt, 50.0, 10_000, 1, 1 / 52, RngStream(406))
    jvr = meanrev_jumps.calibrate(ps.values[0], 1 / 52).params
    assert jvr.lambda_up == pytest.approx(5.0, rel=0.40)
    assert jvr.mu_up == pytest.approx(15.0, rel=0.20)
    # GPD
    gen = RngStream(900).generator()
    y = evt.gpd_quantile(gen.uniform(size=5000), evt.GpdParams(0.3, 2.0))
    gres = evt.gpd_fit(np.asarray(y)).params
    assert abs(gres.xi - 0.3) < 0.1
    assert gres.beta == pytest.approx(2.0, rel=0.10)
    _report(6, "seeded simulate-then-calibrate recovery for all ten families", t0, budget=600.0)


def test_a07_evt_identities():
    t0 = time.perf_counter()
    fit = evt.GpdParams(0.25, 1.7)
    u, n, n_exc = 4.0, 2000, 180
    for p in (0.05, 0.01, 0.001):
        x = evt.var_estimate(p, fit, u, n, n_exc)
        assert evt.tail_cdf(x, fit, u, n, n_exc) == pytest.approx(1.0 - p, abs=1e-12)
    fix = evt.GpdParams(0.5, 1.0)
    assert evt.var_estimate(0.01, fix, 0.0, 100, 100) == pytest.approx(18.0, rel=1e-12)
    es = evt.es_estimate(0.01, fix, 0.0, 100, 100)
    assert es == pytest.approx(38.0, rel=1e-12)
    draws = evt.gpd_quantile(RngStream(904).generator().uniform(size=10**7), fix)
    tail = draws[draws > 18.0]
    assert abs(tail.mean() - es) < 3 * tail.std(ddof=1) / math.sqrt(tail.size)
    _report(7, "EVT inversion identity, VaR=18, ES=38 vs 10^7-draw conditional mean", t0)


def test_a08_nesting_inequalities():
    t0 = time.perf_counter()
    dt = 1 / 252
    gen = RngStream(1301).generator()
    r = LogReturns(gen.standard_t(4, 3000) * 0.01, dt)
    assert jumps.calibrate(r).log_likelihood >= gbm.calibrate(r).log_likelihood - 1e-6
    sim = garch.simulate(garch.NgarchParams(0.0, 2e-5, 0.8, 0.1, 0.3, 2e-4),
                         1.0, 4000, 1, dt, RngStream(1302))
    rets = sim.paths.values[0, 1:] / sim.paths.values[0, :-1] - 1.0
    gres = garch.calibrate(rets, dt=dt)
    v = rets.var()
    gauss_ll = -0.5 * rets.size * (math.log(2 * math.pi * v) + 1.0)
    assert gres.log_likelihood >= gauss_ll - 1e-6
    y = evt.gpd_quantile(RngStream(1303).generator().uniform(size=2000), evt.GpdParams(0.2, 1.0))
    fit = evt.gpd_fit(np.asarray(y))
    exp_ll = -y.size * (1.0 + math.log(y.mean()))
    assert fit.log_likelihood >= exp_ll - 1e-6
    _report(8, "nesting inequalities (jumps>=GBM, NGARCH>=const-vol, GPD>=exponential)", t0)


def test_a09_adf_size_and_power():
    t0 = time.perf_counter()
    from riskproc.diagnostics import adf_test

    size_rejections = 0
    power_rejections = 0
    reps = 500
    for k in range(reps):
        gen = RngStream(1400 + k).generator()
        walk = np.cumsum(gen.standard_normal(2000))
        size_rejections += adf_test(walk, lags=1).reject_5pct
        eps = gen.standard_normal(2000)
        ar = np.empty(2000)
        ar[0] = eps[0]
        for i in range(1, 2000):
            ar[i] = 0.7 * ar[i - 1] + eps[i]
        power_rejections += adf_test(ar, lags=1).reject_5pct
    assert size_rejections / reps <= 0.07
    assert power_rejections / reps >= 0.95
    _report(9, f"ADF size {size_rejections / reps:.3f} <= 7%, power {power_rejections / reps:.3f} >= 95% over 500 replications", t0, budget=120.0)


def test_a10_cli_determinism(tmp_path):
    t0 = time.perf_counter()

    def run_all(base: Path):
        base.mkdir()
        assert cli.main(["diagnose", str(DATA / "ar1_fixture.csv"), "--weekly",
                         "--output-dir", str(base / "d")]) == 0
        assert cli.main(["calibrate", str(DATA / "gbm_fixture.csv"), "--model", "gbm",
                         "--daily", "--output-dir", str(base / "c")]) == 0
        assert cli.main(["simulate", str(DATA / "gbm_fixture.csv"), "--model", "gbm",
                         "--daily", "--seed", "11", "--n-paths", "20", "--n-steps", "40",
                         "--output-dir", str(base / "s")]) == 0
        assert cli.main(["risk", str(DATA / "heavytail_fixture.csv"), "--daily",
                         "--seed", "11", "--n-boot", "50", "--output-dir", str(base / "r")]) == 0
        assert cli.main(["select", str(DATA / "gbm_fixture.csv"), "--daily",
                         "--output-dir", str(base / "m")]) == 0

    run_all(tmp_path / "run1")
    run_all(tmp_path / "run2")
    files1 = sorted((tmp_path / "run1").rglob("*.*"))
    files2 = sorted((tmp_path / "run2").rglob("*.*"))
    assert [f.name for f in files1] == [f.name for f in files2]
    for f1, f2 in zip(files1, files2):
        assert f1.read_bytes() == f2.read_bytes(), f1.name
    # and the calibrate artifact matches the frozen golden byte for byte
    produced = (tmp_path / "run1" / "c" / "calibrate_gbm.json").read_bytes().replace(
        str(DATA / "gbm_fixture.csv").encode(), b"tests/data/gbm_fixture.csv"
    )
    assert produced == (GOLDEN / "calibrate_gbm.json").read_bytes()
    _report(10, "CLI artifacts byte-identical across consecutive runs and vs golden", t0)
