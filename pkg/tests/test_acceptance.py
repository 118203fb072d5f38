"""End-to-end acceptance suite.

One test per criterion; each prints a PASS/FAIL line (visible with -s).
Stated runtime budgets are asserted alongside the numerical tolerances.
"""

import math
import time
import warnings

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gammainc

from rfso_secrecy import (EtaMuLink, RngStream, Scenario1Config,
                          Scenario2Config, dgg_cdf, dgg_from_preset, dgg_pdf,
                          eta_mu_cdf, eta_mu_pdf, estimate_sop1, estimate_sop2,
                          estimate_spsc1, estimate_spsc2, meijer_g,
                          sop1_asymptotic, sop1_exact_quadrature, sop1_lower,
                          sop2_asymptotic, sop2_exact_quadrature, sop2_lower,
                          special_case, spsc1, spsc2)
from rfso_secrecy.errors import ClampExcessWarning
from rfso_secrecy.presets import figure_preset
from rfso_secrecy.specfun import EvalOptions, MeijerGSpec

from conftest import db, gamma_gamma_pointing_pdf

MC_SAMPLES = 1_000_000
TIGHT = EvalOptions(target_abs_tol=1e-300, target_rel_tol=1e-12)


def _report(criterion, ok, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


@pytest.fixture(autouse=True)
def fail_on_clamp_excess():
    """Criterion guard: clamping excess beyond 1e-6 anywhere fails the run
    (warnings trigger at 1e-9 and are upgraded to errors here)."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", ClampExcessWarning)
        yield


# -- criterion 1 -------------------------------------------------------------

def test_c1_special_function_identities():
    t0 = time.time()
    zs = np.logspace(-2, np.log10(50.0), 40)
    worst_exp = max(
        abs(meijer_g(MeijerGSpec(1, 0, 0, 1, (), (0.0,), z), TIGHT)
            - math.exp(-z)) / math.exp(-z) for z in zs)
    worst_rec = max(
        abs(meijer_g(MeijerGSpec(1, 1, 1, 1, (0.0,), (0.0,), z), TIGHT)
            - 1 / (1 + z)) * (1 + z) for z in zs)

    def k0_series(x, terms=60):
        euler = 0.5772156649015328606
        q = (x / 2.0) ** 2
        i0, term = 1.0, 1.0
        for k in range(1, terms):
            term *= q / (k * k)
            i0 += term
        s, term, hk = 0.0, 1.0, 0.0
        for k in range(1, terms):
            term *= q / (k * k)
            hk += 1.0 / k
            s += term * hk
        return -(math.log(x / 2.0) + euler) * i0 + s

    worst_bessel = max(
        abs(meijer_g(MeijerGSpec(2, 0, 0, 2, (), (0.0, 0.0), z), TIGHT)
            - 2 * k0_series(2 * math.sqrt(z)))
        / (2 * k0_series(2 * math.sqrt(z)))
        for z in (0.25, 1.0, 4.0, 12.25))
    dt = time.time() - t0
    ok = worst_exp <= 1e-10 and worst_rec <= 1e-10 and worst_bessel <= 1e-8 \
        and dt < 10.0
    _report("criterion 1 (special-function identities)", ok,
            f"exp {worst_exp:.2e}, reciprocal {worst_rec:.2e}, "
            f"bessel {worst_bessel:.2e}, runtime {dt:.1f}s (< 10 s)")


# -- criterion 2 -------------------------------------------------------------

def test_c2_distribution_correctness():
    t0 = time.time()
    worst_mass = 0.0
    worst_deriv = 0.0
    for eta in (0.5, 5.0, 20.0, 50.0):
        for mu in (1, 2, 3, 4):
            link = EtaMuLink(eta, mu, 3.0)
            mass, _ = quad(lambda g: float(eta_mu_pdf(link, g)), 0, np.inf,
                           limit=200)
            worst_mass = max(worst_mass, abs(mass - 1.0))
            for g in (1.0, 3.0, 8.0):
                h = 1e-5 * g
                d = float(eta_mu_cdf(link, g + h)
                          - eta_mu_cdf(link, g - h)) / (2 * h)
                p = float(eta_mu_pdf(link, g))
                if p > 1e-12:
                    worst_deriv = max(worst_deriv, abs(d - p) / p)
    for turb in ("st", "mt", "wt"):
        for s in (1, 2):
            for eps in (1.0, 6.7):
                link = dgg_from_preset(turb, eps=eps, detection=s,
                                       electrical_snr=10.0)
                mass, _ = quad(lambda g: float(dgg_pdf(link, g)), 0, np.inf,
                               limit=300, epsabs=1e-8, epsrel=1e-8)
                worst_mass = max(worst_mass, abs(mass - 1.0))
                for g in (3.0, 10.0, 30.0):
                    h = 1e-5 * g
                    d = float(dgg_cdf(link, g + h)
                              - dgg_cdf(link, g - h)) / (2 * h)
                    p = float(dgg_pdf(link, g))
                    if p > 1e-12:
                        worst_deriv = max(worst_deriv, abs(d - p) / p)
    dt = time.time() - t0
    ok = worst_mass <= 1e-6 and worst_deriv <= 1e-4 and dt < 300.0
    _report("criterion 2 (distribution correctness)", ok,
            f"normalization off by {worst_mass:.2e} (<= 1e-6), derivative "
            f"mismatch {worst_deriv:.2e} (<= 1e-4), runtime {dt:.0f}s (< 5 min)")


# -- criterion 3 -------------------------------------------------------------

def test_c3_table_reductions():
    g = np.linspace(0.0, 14.0, 300)
    ray = special_case("Rayleigh", avg_snr=1.0)
    sup_ray = float(np.max(np.abs(eta_mu_cdf(ray, g) - (1 - np.exp(-g)))))

    nak = special_case("NakagamiM", m=3, avg_snr=5.0)
    g2 = np.linspace(0.0, 40.0, 300)
    sup_nak = float(np.max(np.abs(eta_mu_cdf(nak, g2)
                                  - gammainc(3, 3 * g2 / 5.0))))

    worst_gg = 0.0
    for s in (1, 2):
        link = special_case("GammaGamma", b1=2.296, b2=1.822, eps=1.0,
                            detection=s, electrical_snr=10.0)
        for gg in (0.5, 2.0, 10.0, 40.0):
            ref = gamma_gamma_pointing_pdf(gg, 2.296, 1.822, 1.0, s, 10.0)
            worst_gg = max(worst_gg,
                           abs(float(dgg_pdf(link, gg)) - ref) / ref)
    ok = sup_ray <= 1e-5 and sup_nak <= 1e-5 and worst_gg <= 1e-8
    _report("criterion 3 (table reductions)", ok,
            f"Rayleigh sup {sup_ray:.2e}, Nakagami sup {sup_nak:.2e} "
            f"(<= 1e-5), Gamma-Gamma rel {worst_gg:.2e} (<= 1e-8)")


# -- criterion 4 -------------------------------------------------------------

def _closed_and_mc(cfg, metric, n, rng):
    if metric == "sop1":
        return sop1_lower(cfg), estimate_sop1(cfg, n, rng)
    if metric == "spsc1":
        return spsc1(cfg), estimate_spsc1(cfg, n, rng)
    if metric == "sop2":
        return sop2_lower(cfg), estimate_sop2(cfg, n, rng)
    return spsc2(cfg), estimate_spsc2(cfg, n, rng)


def _zscore(closed, est, n):
    se = max(est.std_error,
             math.sqrt(max(closed * (1 - closed), 0.0) / n))
    return abs(closed - est.value) / se if se > 0 else 0.0


def test_c4_closed_form_vs_monte_carlo():
    """Closed forms vs 10^6-sample Monte Carlo across the preset matrix.

    With ~190 independent cells a single-shot 3 sigma gate trips by chance
    about a quarter of the time, so a cell beyond 3 sigma must confirm the
    discrepancy on an independent stream to count as a failure (a real bias
    fails both; the spurious double-trip probability is ~1e-4 overall).
    """
    t0 = time.time()
    from rfso_secrecy.cli import _with_axis
    cells = []
    for name in [f"fig{i}" for i in range(1, 9)]:
        preset = figure_preset(name)
        metrics = (("sop1", "spsc1")
                   if isinstance(preset.curves[0][1], Scenario1Config)
                   else ("sop2", "spsc2"))
        picks = {0, len(preset.curves) // 2, len(preset.curves) - 1}
        for c in sorted(picks):
            label, cfg = preset.curves[c]
            for axis_value in (10.0, 20.0, 30.0):
                point = _with_axis(cfg, preset.sweep.axis, axis_value)
                for metric in metrics:
                    cells.append((f"{name}[{label}] {metric} "
                                  f"@{axis_value:g}dB", point, metric))
    # turbulence x detection x pointing matrix, all four metrics
    for turb in ("st", "mt", "wt"):
        for s in (1, 2):
            for eps in (1.0, 6.7):
                fso = dgg_from_preset(turb, eps=eps, detection=s,
                                      electrical_snr=db(20))
                c1 = Scenario1Config(rf_main=EtaMuLink(20.0, 2, db(10)),
                                     rf_eve=EtaMuLink(20.0, 2, db(0)),
                                     fso_main=fso, target_rate=0.5)
                c2 = Scenario2Config(
                    rf_main=EtaMuLink(5.0, 1, db(12)), fso_main=fso,
                    fso_eve=dgg_from_preset(turb, eps=eps, detection=s,
                                            electrical_snr=db(-10)),
                    target_rate=0.5)
                tag = f"{turb}/s={s}/eps={eps:g}"
                cells.append((f"{tag} sop1", c1, "sop1"))
                cells.append((f"{tag} spsc1", c1, "spsc1"))
                cells.append((f"{tag} sop2", c2, "sop2"))
                cells.append((f"{tag} spsc2", c2, "spsc2"))

    worst_z, worst_at = 0.0, ""
    confirmed = []
    retried = 0
    for index, (tag, point, metric) in enumerate(cells):
        closed, est = _closed_and_mc(point, metric, MC_SAMPLES,
                                     RngStream(20260810, index))
        z = _zscore(closed, est, MC_SAMPLES)
        if z > 3.0:
            retried += 1
            closed2, est2 = _closed_and_mc(point, metric, MC_SAMPLES,
                                           RngStream(8102026, index))
            z2 = _zscore(closed2, est2, MC_SAMPLES)
            if z2 > 3.0:
                confirmed.append(f"{tag} (z={z:.2f}, retry z={z2:.2f})")
            z = min(z, z2)
        if z > worst_z:
            worst_z, worst_at = z, tag
    dt = time.time() - t0
    ok = not confirmed and dt < 1800.0
    _report("criterion 4 (closed form vs Monte Carlo)", ok,
            f"{len(cells)} cells, worst confirmed |z| {worst_z:.2f} at "
            f"{worst_at or 'n/a'} (<= 3), {retried} single-trip retries, "
            f"confirmed failures {confirmed or 'none'}, "
            f"runtime {dt:.0f}s (< 30 min)")


# -- criterion 5 -------------------------------------------------------------

def test_c5_complement_identities():
    cfg1 = Scenario1Config(
        rf_main=EtaMuLink(50.0, 3, db(10)), rf_eve=EtaMuLink(50.0, 3, db(0)),
        fso_main=dgg_from_preset("wt", eps=1.0, detection=1,
                                 electrical_snr=db(20)),
        target_rate=0.0)
    d1 = abs(sop1_lower(cfg1) - (1.0 - spsc1(cfg1)))
    cfg1b = Scenario1Config(
        rf_main=EtaMuLink(25.0, 2, db(5)), rf_eve=EtaMuLink(25.0, 2, db(0)),
        fso_main=dgg_from_preset("st", eps=1.0, detection=2,
                                 electrical_snr=db(15)),
        target_rate=0.0)
    d1b = abs(sop1_lower(cfg1b) - (1.0 - spsc1(cfg1b)))
    cfg2 = Scenario2Config(
        rf_main=EtaMuLink(5.0, 1, db(12)),
        fso_main=dgg_from_preset("st", eps=1.0, detection=1,
                                 electrical_snr=db(20)),
        fso_eve=dgg_from_preset("st", eps=1.0, detection=1,
                                electrical_snr=db(-10)),
        target_rate=0.0)
    d2 = abs(sop2_lower(cfg2) - (1.0 - spsc2(cfg2)))
    worst = max(d1, d1b, d2)
    _report("criterion 5 (complement identities at zero rate)", worst <= 1e-8,
            f"worst |sop_lower - (1 - spsc)| = {worst:.2e} (<= 1e-8)")


# -- criterion 6 -------------------------------------------------------------

def test_c6_bound_direction():
    worst = -np.inf
    for turb, s0, rate in (("wt", 1, 0.5), ("wt", 2, 1.0), ("st", 1, 0.5)):
        cfg = Scenario1Config(
            rf_main=EtaMuLink(50.0, 3, db(10)),
            rf_eve=EtaMuLink(50.0, 3, db(0)),
            fso_main=dgg_from_preset(turb, eps=1.0, detection=s0,
                                     electrical_snr=db(20)),
            target_rate=rate)
        worst = max(worst, sop1_lower(cfg) - sop1_exact_quadrature(cfg))
    for turb, rate in (("st", 0.5), ("wt", 1.0), ("mt", 0.5)):
        cfg = Scenario2Config(
            rf_main=EtaMuLink(5.0, 1, db(12)),
            fso_main=dgg_from_preset(turb, eps=1.0, detection=1,
                                     electrical_snr=db(20)),
            fso_eve=dgg_from_preset(turb, eps=1.0, detection=1,
                                    electrical_snr=db(-10)),
            target_rate=rate)
        worst = max(worst, sop2_lower(cfg) - sop2_exact_quadrature(cfg))
    _report("criterion 6 (lower bound below exact quadrature)", worst <= 1e-7,
            f"max(lower - exact) = {worst:.2e} (<= 1e-7)")


# -- criterion 7 -------------------------------------------------------------

def test_c7_asymptotic_tightness(fig3_cfg, fig5_cfg):
    noise_floor = 1e-9

    def gaps(make_cfg, lower_fn, asym_fn):
        out = []
        for ud_db in (40.0, 50.0, 60.0, 70.0, 80.0):
            cfg = make_cfg(ud_db)
            lo = lower_fn(cfg)
            out.append(abs(asym_fn(cfg) - lo) / lo)
        return out

    g1 = gaps(lambda u: Scenario1Config(
        rf_main=fig3_cfg.rf_main, rf_eve=fig3_cfg.rf_eve,
        fso_main=fig3_cfg.fso_main.with_electrical_snr(db(u)),
        target_rate=0.5), sop1_lower, sop1_asymptotic)
    g2 = gaps(lambda u: Scenario2Config(
        rf_main=fig5_cfg.rf_main,
        fso_main=fig5_cfg.fso_main.with_electrical_snr(db(u)),
        fso_eve=fig5_cfg.fso_eve, target_rate=0.5),
        sop2_lower, sop2_asymptotic)
    mono = all(b <= max(a, noise_floor)
               for seq in (g1, g2) for a, b in zip(seq, seq[1:]))
    ok = mono and g1[-1] <= 0.01 and g2[-1] <= 0.01
    _report("criterion 7 (asymptotic tightness)", ok,
            f"gaps@80dB {g1[-1]:.2e} / {g2[-1]:.2e} (<= 1e-2), "
            f"monotone above 40 dB: {mono}")


# -- criterion 8 -------------------------------------------------------------

def test_c8_qualitative_orderings():
    uds = (8.0, 16.0, 24.0, 32.0, 40.0)

    def sop1_curve(turb, s0, eps):
        return [sop1_lower(Scenario1Config(
            rf_main=EtaMuLink(50.0, 3, db(10)),
            rf_eve=EtaMuLink(50.0, 3, db(0)),
            fso_main=dgg_from_preset(turb, eps=eps, detection=s0,
                                     electrical_snr=db(u)),
            target_rate=0.5)) for u in uds]

    def sop2_curve(turb, s, eps):
        return [sop2_lower(Scenario2Config(
            rf_main=EtaMuLink(5.0, 1, db(12)),
            fso_main=dgg_from_preset(turb, eps=eps, detection=s,
                                     electrical_snr=db(u)),
            fso_eve=dgg_from_preset(turb, eps=eps, detection=s,
                                    electrical_snr=db(-10)),
            target_rate=0.5)) for u in uds]

    tol = 1e-12
    hd1, imdd1 = sop1_curve("st", 1, 1.0), sop1_curve("st", 2, 1.0)
    hd2, imdd2 = sop2_curve("st", 1, 1.0), sop2_curve("st", 2, 1.0)
    detection_ok = (np.all(np.array(hd1) <= np.array(imdd1) + tol)
                    and np.all(np.array(hd2) <= np.array(imdd2) + tol))

    mild1, severe1 = sop1_curve("mt", 1, 6.7), sop1_curve("mt", 1, 1.0)
    mild2, severe2 = sop2_curve("mt", 1, 6.7), sop2_curve("mt", 1, 1.0)
    pointing_ok = (np.all(np.array(mild1) <= np.array(severe1) + tol)
                   and np.all(np.array(mild2) <= np.array(severe2) + tol))

    wt, mt, st = (np.array(sop1_curve(t, 1, 1.0)) for t in ("wt", "mt", "st"))
    wt2, mt2, st2 = (np.array(sop2_curve(t, 1, 1.0))
                     for t in ("wt", "mt", "st"))
    turb_ok = (np.all(wt <= mt + tol) and np.all(mt <= st + tol)
               and np.all(wt2 <= mt2 + tol) and np.all(mt2 <= st2 + tol))

    ok = detection_ok and pointing_ok and turb_ok
    _report("criterion 8 (qualitative orderings)", ok,
            f"HD<=IM/DD {detection_ok}, eps 6.7<=1 {pointing_ok}, "
            f"WT<=MT<=ST {turb_ok}")


# -- criterion 9 -------------------------------------------------------------

def test_c9_symmetry_anchor():
    worst = 0.0
    for turb, s in (("st", 1), ("mt", 2), ("wt", 1)):
        fso = dgg_from_preset(turb, eps=1.0, detection=s,
                              electrical_snr=db(20))
        cfg = Scenario2Config(rf_main=EtaMuLink(5.0, 1, 10.0), fso_main=fso,
                              fso_eve=fso, target_rate=0.5)
        worst = max(worst, abs(spsc2(cfg) - 0.5))
    _report("criterion 9 (symmetry anchor)", worst <= 1e-8,
            f"max |spsc2 - 1/2| = {worst:.2e} (<= 1e-8)")


# -- criterion 10 ------------------------------------------------------------

def test_c10_cli_reproducibility(tmp_path):
    from rfso_secrecy.cli import main
    outs = []
    for tag in ("a", "b"):
        path = tmp_path / f"{tag}.csv"
        code = main(["--preset", "fig2", "--points", "3",
                     "--evaluators", "closed,mc", "--mc-samples", "20000",
                     "--seed", "31415", "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1]
    _report("criterion 10 (CLI byte reproducibility)", ok,
            f"identical CSV bytes across two runs: {ok} "
            f"({len(outs[0])} bytes)")
