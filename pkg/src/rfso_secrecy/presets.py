"""Ready-to-run parameter sets reproducing the reference result curves.

Each figure preset bundles a curve family (one scenario config per curve)
with a default sweep axis.  Axis ranges default to 0..40 dB in 2 dB steps
where the source material leaves them implicit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .channels import (DggLink, EtaMuLink, dgg_from_preset, special_case)
from .errors import ConfigError
from .secrecy import Scenario1Config, Scenario2Config

__all__ = ["SweepSpec", "FigurePreset", "figure_preset", "PRESET_NAMES"]

METRICS = ("sop1", "sop2", "spsc1", "spsc2")
EVALUATORS = ("closed", "asymptotic", "exact_quadrature", "mc")
AXES = ("phi_sr_db", "phi_se_db", "Ud_db", "Ue_db", "target_rate", "eps")


def _db(x: float) -> float:
    return 10.0 ** (x / 10.0)


@dataclass(frozen=True)
class SweepSpec:
    """One-axis sweep request."""

    axis: str
    start: float
    stop: float
    points: int
    metrics: tuple = ("sop1",)
    evaluators: tuple = ("closed",)
    mc_samples: int = 100_000
    seed: int = 12345

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigError(f"unknown sweep axis {self.axis!r}; "
                              f"choose one of {AXES}")
        if not self.start < self.stop:
            raise ConfigError("sweep requires start < stop")
        if self.points < 2:
            raise ConfigError("sweep requires points >= 2")
        for m in self.metrics:
            if m not in METRICS:
                raise ConfigError(f"unknown metric {m!r}; choose from {METRICS}")
        if not self.metrics:
            raise ConfigError("at least one metric required")
        for e in self.evaluators:
            if e not in EVALUATORS:
                raise ConfigError(f"unknown evaluator {e!r}; "
                                  f"choose from {EVALUATORS}")
        if not self.evaluators:
            raise ConfigError("at least one evaluator required")
        if self.mc_samples < 1:
            raise ConfigError("mc_samples must be >= 1")


@dataclass(frozen=True)
class FigurePreset:
    name: str
    curves: tuple  # of (label, Scenario1Config | Scenario2Config)
    sweep: SweepSpec


_TURBS = ("wt", "mt", "st")


def _scenario1(eta0, mu0, phi_sr_db, eta_e, mu_e, phi_se_db, turb, eps, s0,
               ud_db, rate=0.5):
    return Scenario1Config(
        rf_main=EtaMuLink(eta0, mu0, _db(phi_sr_db)),
        rf_eve=EtaMuLink(eta_e, mu_e, _db(phi_se_db)),
        fso_main=dgg_from_preset(turb, eps=eps, detection=s0,
                                 electrical_snr=_db(ud_db)),
        target_rate=rate)


def _scenario2(eta0, mu0, phi_sr_db, turb, eps, s0, ud_db, se, ue_db,
               rate=0.5):
    return Scenario2Config(
        rf_main=EtaMuLink(eta0, mu0, _db(phi_sr_db)),
        fso_main=dgg_from_preset(turb, eps=eps, detection=s0,
                                 electrical_snr=_db(ud_db)),
        fso_eve=dgg_from_preset(turb, eps=eps, detection=se,
                                electrical_snr=_db(ue_db)),
        target_rate=rate)


def _fig1():
    curves = tuple(
        (f"phi_se_db={se_db:g}",
         _scenario1(20.0, 2, 10.0, 20.0, 2, se_db, "wt", 1.0, 1, 10.0))
        for se_db in (10.0, 0.0, -10.0))
    sweep = SweepSpec(axis="phi_sr_db", start=0.0, stop=40.0, points=21,
                      metrics=("spsc1",))
    return FigurePreset("fig1", curves, sweep)


def _fig2():
    curves = tuple(
        (f"Ue_db={ue_db:g}",
         _scenario2(2.0, 1, 10.0, "st", 1.0, 1, 20.0, 1, ue_db))
        for ue_db in (30.0, 10.0, -10.0))
    sweep = SweepSpec(axis="Ud_db", start=0.0, stop=40.0, points=21,
                      metrics=("spsc2",))
    return FigurePreset("fig2", curves, sweep)


def _fig3():
    curves = tuple(
        (f"{turb}/s0={s0}",
         _scenario1(50.0, 3, 10.0, 50.0, 3, 0.0, turb, 1.0, s0, 20.0))
        for turb in _TURBS for s0 in (1, 2))
    sweep = SweepSpec(axis="Ud_db", start=0.0, stop=40.0, points=21,
                      metrics=("sop1",))
    return FigurePreset("fig3", curves, sweep)


def _fig4():
    curves = tuple(
        (f"{turb}/s0={s0}",
         _scenario1(25.0, 2, 5.0, 25.0, 2, 0.0, turb, 1.0, s0, 10.0))
        for turb in _TURBS for s0 in (1, 2))
    sweep = SweepSpec(axis="Ud_db", start=0.0, stop=40.0, points=21,
                      metrics=("spsc1",))
    return FigurePreset("fig4", curves, sweep)


def _fig5():
    curves = tuple(
        (f"{turb}/s={s}",
         _scenario2(5.0, 1, 12.0, turb, 1.0, s, 20.0, s, -10.0))
        for turb in _TURBS for s in (1, 2))
    sweep = SweepSpec(axis="Ud_db", start=0.0, stop=40.0, points=21,
                      metrics=("sop2",))
    return FigurePreset("fig5", curves, sweep)


def _fig6():
    curves = tuple(
        (f"{turb}/eps={eps:g}",
         _scenario1(25.0, 4, 5.0, 25.0, 4, 0.0, turb, eps, 1, 10.0))
        for turb in _TURBS for eps in (1.0, 6.7))
    sweep = SweepSpec(axis="Ud_db", start=0.0, stop=40.0, points=21,
                      metrics=("sop1",))
    return FigurePreset("fig6", curves, sweep)


def _fig7():
    curves = tuple(
        (f"{turb}/eps={eps:g}",
         _scenario2(2.0, 1, 10.0, turb, eps, 1, 20.0, 1, -12.0))
        for turb in _TURBS for eps in (1.0, 6.7))
    sweep = SweepSpec(axis="Ud_db", start=0.0, stop=40.0, points=21,
                      metrics=("sop2",))
    return FigurePreset("fig7", curves, sweep)


def _fig8():
    curves = tuple(
        (f"{turb}/eps={eps:g}",
         _scenario2(2.0, 1, 10.0, turb, eps, 1, 20.0, 1, -10.0))
        for turb in _TURBS for eps in (1.0, 6.7))
    sweep = SweepSpec(axis="Ud_db", start=0.0, stop=40.0, points=21,
                      metrics=("spsc2",))
    return FigurePreset("fig8", curves, sweep)


def _special_fso(kind: str, eps: float, s0: int, ud_db: float) -> DggLink:
    if kind == "k":
        return special_case("KDistribution", b2=1.8, eps=eps, detection=s0,
                            electrical_snr=_db(ud_db))
    if kind == "dw":
        return special_case("DoubleWeibull", eps=eps, detection=s0,
                            electrical_snr=_db(ud_db))
    if kind == "gg":
        return special_case("GammaGamma", b1=2.296, b2=1.822, eps=eps,
                            detection=s0, electrical_snr=_db(ud_db))
    if kind == "dgg":
        return dgg_from_preset("mt", eps=eps, detection=s0,
                               electrical_snr=_db(ud_db))
    raise ConfigError(f"unknown FSO special case {kind!r}")


def _fig9():
    # Special-case overlays with an RF-side eavesdropper.  The
    # Nakagami/Lognormal row is omitted: the Lognormal limit is unreachable
    # (see the `lognormal` preset, which reports exactly that).
    eps, s0, ud_db = 6.7, 1, 5.0
    rayleigh = special_case("Rayleigh", avg_snr=_db(0.0))

    def cfg(rf_main, rf_eve, fso):
        return Scenario1Config(rf_main=rf_main, rf_eve=rf_eve, fso_main=fso,
                               target_rate=0.5)

    curves = (
        ("rayleigh/k", cfg(rayleigh, special_case("Rayleigh", avg_snr=_db(-5.0)),
                           _special_fso("k", eps, s0, ud_db))),
        ("rayleigh/double-weibull",
         cfg(rayleigh, special_case("Rayleigh", avg_snr=_db(-5.0)),
             _special_fso("dw", eps, s0, ud_db))),
        ("nakagami/dgg-mt",
         cfg(EtaMuLink(20.0, 2, _db(0.0)), EtaMuLink(20.0, 2, _db(-5.0)),
             _special_fso("dgg", eps, s0, ud_db))),
        ("eta-mu/gamma-gamma",
         cfg(EtaMuLink(100.0, 2, _db(0.0)), EtaMuLink(100.0, 2, _db(-5.0)),
             _special_fso("gg", eps, s0, ud_db))),
    )
    sweep = SweepSpec(axis="phi_sr_db", start=0.0, stop=40.0, points=21,
                      metrics=("sop1",))
    return FigurePreset("fig9", curves, sweep)


def _fig10():
    eps, s = 1.0, 1
    ue_db, ud_db = -5.0, 20.0

    def cfg(rf_main, fso_kind):
        return Scenario2Config(
            rf_main=rf_main,
            fso_main=_special_fso(fso_kind, eps, s, ud_db),
            fso_eve=_special_fso(fso_kind, eps, s, ue_db),
            target_rate=0.5)

    rayleigh = special_case("Rayleigh", avg_snr=_db(12.0))
    curves = (
        ("rayleigh/k", cfg(rayleigh, "k")),
        ("rayleigh/double-weibull", cfg(rayleigh, "dw")),
        ("nakagami/dgg-mt", cfg(EtaMuLink(20.0, 2, _db(12.0)), "dgg")),
        ("rayleigh/gamma-gamma", cfg(rayleigh, "gg")),
    )
    sweep = SweepSpec(axis="Ud_db", start=0.0, stop=40.0, points=21,
                      metrics=("sop2",))
    return FigurePreset("fig10", curves, sweep)


def _turbulence_only(name: str):
    curves = ((name, _scenario1(50.0, 3, 10.0, 50.0, 3, 0.0, name, 1.0, 1,
                                20.0)),)
    sweep = SweepSpec(axis="Ud_db", start=0.0, stop=40.0, points=21,
                      metrics=("sop1",))
    return FigurePreset(name, curves, sweep)


_BUILDERS = {
    "fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4,
    "fig5": _fig5, "fig6": _fig6, "fig7": _fig7, "fig8": _fig8,
    "fig9": _fig9, "fig10": _fig10,
    "st": lambda: _turbulence_only("st"),
    "mt": lambda: _turbulence_only("mt"),
    "wt": lambda: _turbulence_only("wt"),
}

PRESET_NAMES = tuple(_BUILDERS) + ("lognormal",)


def figure_preset(name: str) -> FigurePreset:
    """Resolve a named preset into configs plus a default sweep."""
    key = name.lower()
    if key == "lognormal":
        # Table row kept for honesty: constructing it is impossible here.
        special_case("Lognormal")
        raise AssertionError("unreachable")  # pragma: no cover
    try:
        return _BUILDERS[key]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from "
                          f"{', '.join(PRESET_NAMES)}") from None
