"""Shared fixtures and small statistical helpers."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import kv

from rfso_secrecy import (EtaMuLink, Scenario1Config, Scenario2Config,
                          dgg_from_preset)


def db(x):
    return 10.0 ** (x / 10.0)


def ks_statistic(samples, cdf_values):
    """Two-sided Kolmogorov-Smirnov distance for pre-sorted samples."""
    n = len(samples)
    F = np.asarray(cdf_values)
    i = np.arange(n)
    return float(np.max(np.maximum(F - i / n, (i + 1) / n - F)))


def gamma_gamma_pointing_pdf(g, b1, b2, eps, s, U):
    """Independent oracle: Gamma-Gamma irradiance with pointing error,
    composed by direct quadrature of the product density."""
    e2 = eps * eps

    def f_ia(x):
        if x <= 0:
            return 0.0
        return (2.0 * (b1 * b2) ** ((b1 + b2) / 2)
                * x ** ((b1 + b2) / 2 - 1.0)
                * kv(b1 - b2, 2.0 * math.sqrt(b1 * b2 * x))
                / (math.gamma(b1) * math.gamma(b2)))

    def f_i(y):
        val, _ = quad(lambda u: u ** (e2 - 2.0) * f_ia(y / u), 0.0, 1.0,
                      limit=200, epsabs=1e-13, epsrel=1e-12)
        return e2 * val

    c = e2 / (e2 + 1.0)  # E[I] for unit-mean Gamma-Gamma
    i_of_g = c * (g / U) ** (1.0 / s)
    di_dg = c * (g / U) ** (1.0 / s - 1.0) / (s * U)
    return f_i(i_of_g) * di_dg


@pytest.fixture(scope="session")
def wt_link():
    return dgg_from_preset("wt", eps=1.0, detection=1, electrical_snr=db(20))


@pytest.fixture(scope="session")
def st_link():
    return dgg_from_preset("st", eps=1.0, detection=1, electrical_snr=db(20))


@pytest.fixture(scope="session")
def mt_link_imdd():
    return dgg_from_preset("mt", eps=1.0, detection=2, electrical_snr=db(20))


@pytest.fixture(scope="session")
def fig3_cfg(wt_link):
    """Scenario-1 reference configuration (WT / heterodyne), U_d = 20 dB."""
    return Scenario1Config(rf_main=EtaMuLink(50.0, 3, db(10)),
                           rf_eve=EtaMuLink(50.0, 3, db(0)),
                           fso_main=wt_link, target_rate=0.5)


@pytest.fixture(scope="session")
def fig5_cfg(st_link):
    """Scenario-2 reference configuration (ST / heterodyne), U_d = 20 dB."""
    return Scenario2Config(
        rf_main=EtaMuLink(5.0, 1, db(12)),
        fso_main=st_link,
        fso_eve=dgg_from_preset("st", eps=1.0, detection=1,
                                electrical_snr=db(-10)),
        target_rate=0.5)
