"""Closed-form secrecy metrics, their asymptotics, and quadrature oracles.

Scenario 1: the eavesdropper taps the RF hop; the legitimate SNR is the DF
minimum of both hops.  Scenario 2: the first hop is secure and the
eavesdropper taps the FSO hop through an identically shaped DGG channel.

Every closed form here is a finite sum of Mellin-Barnes integrals.  The
integrals whose kernels mix the RF exponential decay with the FSO
G-function carry one gamma factor of non-unit slope Gamma(z - tau*v): the
Laplace transform of a G-function in gamma^tau only collapses to a plain
Meijer G when tau = 1, so the slope-tau kernel is evaluated directly.  (It
reduces exactly to the plain-G expression for the Gamma-Gamma special cases,
where tau = 1.)  Each metric has an independent quadrature oracle in this
module and a Monte Carlo oracle in :mod:`rfso_secrecy.montecarlo`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import exp, fsum, lgamma, log

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln, gammasgn

from .channels import DggLink, EtaMuLink, dgg_pdf, eta_mu_pdf
from .dualhop import DualHopChannel, min_combine_cdf
from .errors import AccuracyError, ClampExcessWarning, ParameterError
from .specfun import (EvalOptions, MellinBarnesIntegral, TIGHT_OPTIONS,
                      perturb_integer_spaced)

__all__ = [
    "Scenario1Config",
    "Scenario2Config",
    "sop1_lower",
    "sop1_asymptotic",
    "sop1_exact_quadrature",
    "sop2_lower",
    "sop2_asymptotic",
    "sop2_exact_quadrature",
    "spsc1",
    "spsc2",
]

# Metrics outside [0,1] by more than this raise a ClampExcessWarning; the
# test suite fails on any excess beyond 1e-6.
_CLAMP_FLAG = 1e-9


@dataclass(frozen=True)
class Scenario1Config:
    """Main RF + FSO links, RF eavesdropper, target secrecy rate (bits/s/Hz)."""

    rf_main: EtaMuLink
    rf_eve: EtaMuLink
    fso_main: DggLink
    target_rate: float = 0.5

    def __post_init__(self):
        if self.target_rate < 0:
            raise ParameterError("target_rate must be >= 0")

    @property
    def phi1(self) -> float:
        return 2.0 ** self.target_rate


@dataclass(frozen=True)
class Scenario2Config:
    """Main RF + FSO links, FSO eavesdropper sharing the main link's DGG
    shape (detection type and electrical SNR may differ)."""

    rf_main: EtaMuLink
    fso_main: DggLink
    fso_eve: DggLink
    target_rate: float = 0.5

    def __post_init__(self):
        if self.target_rate < 0:
            raise ParameterError("target_rate must be >= 0")
        if self.fso_main.shape_key() != self.fso_eve.shape_key():
            raise ParameterError(
                "fso_main and fso_eve must share all DGG shape parameters "
                "(a, b, omega, lambda, eps); only detection and electrical "
                "SNR may differ")

    @property
    def phi2(self) -> float:
        return 2.0 ** (2.0 * self.target_rate)


def _clamp_unit(x: float, label: str) -> float:
    excess = max(0.0 - x, x - 1.0, 0.0)
    if excess > _CLAMP_FLAG:
        warnings.warn(f"{label} clamped to [0,1]; excess {excess:.3e}",
                      ClampExcessWarning, stacklevel=3)
    return min(1.0, max(0.0, x))


# ---------------------------------------------------------------------------
# scenario 1
# ---------------------------------------------------------------------------

def _sop1_terms(cfg: Scenario1Config, fso_tail):
    """Shared assembly for the scenario-1 outage sum.

    fso_tail(z1, ln_w_array) must return the value of the size-(4,) FSO
    integral block for each (N0, Ne) pair, either the full slope-tau kernel
    (lower bound) or its leading residues (asymptote).
    """
    rf0, rfe, fso = cfg.rf_main, cfg.rf_eve, cfg.fso_main
    phi1 = cfg.phi1
    lnphi = log(phi1)
    tau = fso.tau
    B3 = exp(fso.log_B3)
    pairs = [(N0, Ne) for N0 in (1, 2) for Ne in (1, 2)]
    F = {pair: phi1 * rf0.decay[pair[0]] + rfe.decay[pair[1]]
         for pair in pairs}

    g_cache = {}
    for z1 in range(1, rf0.mu + rfe.mu):
        ln_w = np.array([fso.log_B4 + tau * (lnphi - log(fso.electrical_snr)
                                             - log(F[p])) for p in pairs])
        vals = fso_tail(z1, ln_w)
        for p, v in zip(pairs, vals):
            g_cache[(z1, p)] = float(v)

    terms = []
    for N0, Ne in pairs:
        for v in range(rf0.mu):
            for w in range(rfe.mu):
                for x in range(rf0.mu - v):
                    z1 = rfe.mu - w + x
                    Fp = F[(N0, Ne)]
                    coeff = ((rf0.decay[N0] * phi1) ** x / exp(lgamma(x + 1))
                             * rfe.X[(Ne, w)] * rf0.Y[(N0, v)] / Fp ** z1)
                    inner = exp(lgamma(z1)) - B3 * g_cache[(z1, (N0, Ne))]
                    terms.append(coeff * inner)
    return 1.0 - rf0.coeff_A * rfe.coeff_A * fsum(terms)


def sop1_lower(cfg: Scenario1Config,
               options: EvalOptions = TIGHT_OPTIONS) -> float:
    """Lower-bound secure outage probability for the RF-side eavesdropper."""
    fso = cfg.fso_main
    base_num = [(j, 1.0) for j in fso.j4] + [(0.0, -1.0)]
    base_den = [(1.0, -1.0)] + [(j, 1.0) for j in fso.j3]

    def tail(z1, ln_w):
        mb = MellinBarnesIntegral(base_num + [(float(z1), -fso.tau)], base_den)
        return mb.value_many(ln_w, options)

    return _clamp_unit(_sop1_terms(cfg, tail), "sop1_lower")


def sop1_asymptotic(cfg: Scenario1Config,
                    options: EvalOptions = TIGHT_OPTIONS) -> float:
    """High-electrical-SNR asymptote: leading residue of each FSO block.

    The residue at the smallest lower parameter dominates, so the distance
    to the outage floor falls off like U_d^(-tau*min(j4)).
    """
    fso = cfg.fso_main
    tol = options.pole_separation_tol

    def tail(z1, ln_w):
        return _residue_tail_sop1(fso, z1, np.asarray(ln_w), tol)

    return _clamp_unit(_sop1_terms(cfg, tail), "sop1_asymptotic")


def _residue_tail_sop1(fso, z1, ln_w, tol):
    j4 = list(fso.j4)
    bad = perturb_integer_spaced(j4, tol)
    if bad:
        warnings.warn("integer-spaced residue parameters; perturbing by 1e-6",
                      ClampExcessWarning, stacklevel=2)
        up = [j + (1e-6 if i in bad else 0.0) for i, j in enumerate(j4)]
        dn = [j - (1e-6 if i in bad else 0.0) for i, j in enumerate(j4)]
        return 0.5 * (_sop1_residues(up, fso.j3, fso.tau, z1, ln_w)
                      + _sop1_residues(dn, fso.j3, fso.tau, z1, ln_w))
    return _sop1_residues(j4, fso.j3, fso.tau, z1, ln_w)


def _sop1_residues(j4, j3, tau, z1, ln_w):
    out = np.zeros_like(ln_w)
    for p, jp in enumerate(j4):
        lg = gammaln(jp) + gammaln(z1 + tau * jp) - gammaln(1.0 + jp)
        sg = 1.0
        for h, jh in enumerate(j4):
            if h == p:
                continue
            x = jh - jp
            sg *= gammasgn(x)
            lg += gammaln(x)
        dead = False
        for jh in j3:
            x = jh - jp
            s = gammasgn(x)
            if s == 0.0:
                dead = True  # denominator pole kills this residue
                break
            sg *= s
            lg -= gammaln(x)
        if not dead:
            out = out + sg * np.exp(lg + jp * ln_w)
    return out


def sop1_exact_quadrature(cfg: Scenario1Config, abs_tol: float = 1e-7) -> float:
    """Exact outage probability by adaptive quadrature of
    int F_d(phi1*g + phi1 - 1) f_re(g) dg; the closed form bounds it below."""
    phi1 = cfg.phi1
    shift = phi1 - 1.0
    channel = DualHopChannel(cfg.rf_main, cfg.fso_main)

    def integrand(g):
        return (min_combine_cdf(channel, phi1 * g + shift)
                * float(eta_mu_pdf(cfg.rf_eve, g)))

    val, err = quad(integrand, 0.0, np.inf, limit=300,
                    epsabs=abs_tol * 1e-2, epsrel=1e-9)
    if err > abs_tol:
        raise AccuracyError("outage quadrature did not reach tolerance",
                            best_estimate=val, error_bound=err)
    return _clamp_unit(val, "sop1_exact_quadrature")


def spsc1(cfg: Scenario1Config, options: EvalOptions = TIGHT_OPTIONS) -> float:
    """Probability of strictly positive secrecy capacity, RF eavesdropper:
    Pr(min-combined SNR > eavesdropper SNR)."""
    rf0, rfe, fso = cfg.rf_main, cfg.rf_eve, cfg.fso_main
    tau, s = fso.tau, fso.s
    B3 = exp(fso.log_B3)
    B1s = exp(fso.log_B1) / s
    lnU = log(fso.electrical_snr)

    sf_num = [(j, 1.0) for j in fso.j4] + [(0.0, 1.0)]
    sf_den = [(1.0, 1.0)] + [(j, 1.0) for j in fso.j3]
    pdf_num = [(j, 1.0) for j in fso.j1]
    pdf_den = [(fso.j2, 1.0)]

    lam_single = {N0: rf0.decay[N0] for N0 in (1, 2)}
    lam_pair = {(N0, Ne): rf0.decay[N0] + rfe.decay[Ne]
                for N0 in (1, 2) for Ne in (1, 2)}

    def survival_block(z, lams):
        """int g^(z-1) e^(-lam g) * (1 - F_fso)(g) dg, without the lam^-z."""
        mb = MellinBarnesIntegral(sf_num + [(float(z), -tau)], sf_den)
        ln_w = np.array([fso.log_B4 - tau * lnU - tau * log(l) for l in lams])
        return B3 * mb.value_many(ln_w, options)

    def density_block(z, lams):
        """int g^(z-1) e^(-lam g) * f_fso-kernel(g) dg, without the lam^-z."""
        mb = MellinBarnesIntegral(pdf_num + [(float(z), -tau / s)], pdf_den)
        ln_w = np.array([fso.log_B2t_tau - (tau / s) * (lnU + log(l))
                         for l in lams])
        return B1s * mb.value_many(ln_w, options)

    lams1 = [lam_single[1], lam_single[2]]
    pairs = [(1, 1), (1, 2), (2, 1), (2, 2)]
    lams2 = [lam_pair[p] for p in pairs]

    R1 = {z: survival_block(z, lams1) for z in range(1, rf0.mu + 1)}
    R2 = {z: density_block(z, lams1) for z in range(0, rf0.mu)}
    R3 = {z: survival_block(z, lams2) for z in range(1, rf0.mu + rfe.mu)}
    R4 = {z: density_block(z, lams2) for z in range(0, rf0.mu + rfe.mu - 1)}

    terms = []
    for i0, N0 in enumerate((1, 2)):
        l0 = rf0.decay[N0]
        for v in range(rf0.mu):
            z2 = rf0.mu - v
            terms.append(rf0.X[(N0, v)] * R1[z2][i0] / l0**z2)
            for x in range(rf0.mu - v):
                terms.append(l0**x / exp(lgamma(x + 1)) * rf0.Y[(N0, v)]
                             * R2[x][i0] / l0**x)
            for ie, (Np, Ne) in enumerate(pairs):
                if Np != N0:
                    continue
                H = lam_pair[(N0, Ne)]
                le = rfe.decay[Ne]
                for w in range(rfe.mu):
                    for y in range(rfe.mu - w):
                        z3 = z2 + y
                        outer = (-rfe.coeff_A * le**y / exp(lgamma(y + 1))
                                 * rfe.Y[(Ne, w)])
                        terms.append(outer * rf0.X[(N0, v)]
                                     * R3[z3][ie] / H**z3)
                        for x in range(rf0.mu - v):
                            z4 = x + y
                            terms.append(outer * l0**x / exp(lgamma(x + 1))
                                         * rf0.Y[(N0, v)] * R4[z4][ie] / H**z4)
    return _clamp_unit(rf0.coeff_A * fsum(terms), "spsc1")


# ---------------------------------------------------------------------------
# scenario 2
# ---------------------------------------------------------------------------

def _fso_crossing_integral(cfg: Scenario2Config, phi: float,
                           options: EvalOptions) -> float:
    """Pr(main FSO SNR <= phi * eavesdropper FSO SNR) as one G-value."""
    main, eve = cfg.fso_main, cfg.fso_eve
    numer = ([(j, 1.0) for j in eve.j4] + [(0.0, 1.0)]
             + [(j, -1.0) for j in main.j4])
    denom = ([(1.0, 1.0)] + [(j, 1.0) for j in eve.j3]
             + [(j, -1.0) for j in main.j3])
    ln_z = (eve.log_B4 - main.log_B4
            + main.tau * (log(main.electrical_snr)
                          - log(eve.electrical_snr) - log(phi)))
    mb = MellinBarnesIntegral(numer, denom)
    return exp(main.log_B3 + eve.log_B3) * mb.value(ln_z, options)


def sop2_lower(cfg: Scenario2Config,
               options: EvalOptions = TIGHT_OPTIONS) -> float:
    """Lower-bound secure outage probability for the FSO-side eavesdropper."""
    phi2 = cfg.phi2
    rf_ok = float(cfg.rf_main.survival(phi2 - 1.0))
    fso_ok = 1.0 - _fso_crossing_integral(cfg, phi2, options)
    return _clamp_unit(1.0 - rf_ok * fso_ok, "sop2_lower")


def sop2_asymptotic(cfg: Scenario2Config,
                    options: EvalOptions = TIGHT_OPTIONS) -> float:
    """High-U_d asymptote: large-argument expansion of the crossing
    G-function over its descending-parameter residues."""
    main, eve = cfg.fso_main, cfg.fso_eve
    phi2 = cfg.phi2
    tol = options.pole_separation_tol
    ln_z = (eve.log_B4 - main.log_B4
            + main.tau * (log(main.electrical_snr)
                          - log(eve.electrical_snr) - log(phi2)))

    j4 = list(main.j4)
    bad = perturb_integer_spaced(j4, tol)
    if bad:
        warnings.warn("integer-spaced residue parameters; perturbing by 1e-6",
                      ClampExcessWarning, stacklevel=2)
        up = [j + (1e-6 if i in bad else 0.0) for i, j in enumerate(j4)]
        dn = [j - (1e-6 if i in bad else 0.0) for i, j in enumerate(j4)]
        S = 0.5 * (_sop2_residues(up, main, eve, ln_z)
                   + _sop2_residues(dn, main, eve, ln_z))
    else:
        S = _sop2_residues(j4, main, eve, ln_z)
    crossing = exp(main.log_B3 + eve.log_B3) * S
    rf_ok = float(cfg.rf_main.survival(phi2 - 1.0))
    return _clamp_unit(1.0 - rf_ok * (1.0 - crossing), "sop2_asymptotic")


def _sop2_residues(j4_main, main, eve, ln_z):
    """Sum over upper parameters a_p = 1 - j4 of the standard z -> infinity
    expansion of the crossing G-function."""
    upper = [1.0 - j for j in j4_main] + [1.0] + list(eve.j3)
    lower = list(eve.j4) + [0.0] + [1.0 - j for j in main.j3]
    n = len(j4_main)
    m = len(eve.j4) + 1
    total = 0.0
    for p in range(n):
        ap = upper[p]
        lg = 0.0
        sg = 1.0
        dead = False
        for h in range(n):
            if h == p:
                continue
            x = ap - upper[h]
            sg *= gammasgn(x)
            lg += gammaln(x)
        for h in range(m):
            x = 1.0 + lower[h] - ap
            sg *= gammasgn(x)
            lg += gammaln(x)
        for h in range(n, len(upper)):
            x = 1.0 + upper[h] - ap
            s = gammasgn(x)
            if s == 0.0:
                dead = True
                break
            sg *= s
            lg -= gammaln(x)
        if not dead:
            for h in range(m, len(lower)):
                x = ap - lower[h]
                s = gammasgn(x)
                if s == 0.0:
                    dead = True
                    break
                sg *= s
                lg -= gammaln(x)
        if dead:
            continue
        total += sg * exp(lg + (ap - 1.0) * ln_z)
    return total


def sop2_exact_quadrature(cfg: Scenario2Config, abs_tol: float = 1e-7) -> float:
    """Exact outage probability for scenario 2 by adaptive quadrature."""
    phi2 = cfg.phi2
    shift = phi2 - 1.0
    rf_fail = 1.0 - float(cfg.rf_main.survival(shift))
    from .channels import dgg_cdf  # local import avoids a cycle at module load

    def integrand(g):
        return (float(dgg_cdf(cfg.fso_main, phi2 * g + shift))
                * float(dgg_pdf(cfg.fso_eve, g)))

    val, err = quad(integrand, 0.0, np.inf, limit=300,
                    epsabs=abs_tol * 1e-2, epsrel=1e-9)
    if err > abs_tol:
        raise AccuracyError("outage quadrature did not reach tolerance",
                            best_estimate=val, error_bound=err)
    return _clamp_unit(val * (1.0 - rf_fail) + rf_fail, "sop2_exact_quadrature")


def spsc2(cfg: Scenario2Config, options: EvalOptions = TIGHT_OPTIONS) -> float:
    """Probability of strictly positive secrecy capacity, FSO eavesdropper:
    Pr(main FSO SNR > eavesdropper FSO SNR)."""
    return _clamp_unit(1.0 - _fso_crossing_integral(cfg, 1.0, options),
                       "spsc2")
