"""Fading-channel models for the two hops.

RF hop: eta-mu multipath fading (integer mu), expanded into the
two-branch exponential-sum form, so PDF/CDF are elementary.

FSO hop: double generalized Gamma (DGG) turbulence with a pointing-error
factor and either heterodyne (s=1) or intensity-modulation/direct-detection
(s=2) conversion to electrical SNR.  PDF/CDF are Meijer G-functions
evaluated through :mod:`rfso_secrecy.specfun`.

All stored SNRs are linear; dB conversion happens at the CLI boundary only.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, lgamma, log, pi, sqrt
from typing import Iterator

import numpy as np

from .errors import ParameterError, UnsupportedCaseError
from .specfun import MellinBarnesIntegral, delta_expand, delta_expand_list

__all__ = [
    "EtaMuLink",
    "DggLink",
    "RngStream",
    "TURBULENCE_PRESETS",
    "eta_mu_pdf",
    "eta_mu_cdf",
    "eta_mu_sample",
    "dgg_pdf",
    "dgg_cdf",
    "dgg_sample",
    "dgg_sample_inverse_cdf",
    "special_case",
]

# Surrogate for the eta -> 0 (or infinity) limits of the table reductions.
# The expansion is singular at eta = 1, and its distance to the Rayleigh /
# Nakagami-m limit laws shrinks like eta, so 1e-6 keeps the sup-error of the
# reductions near 1e-6 while staying well-conditioned in doubles.
ETA_LIMIT_SURROGATE = 1e-6

# Turbulence fits for the DGG model.  lambda1/lambda2 must equal a1/a2
# exactly for the Meijer G forms, so a1 is stored as that ratio (the quoted
# field fits 1.86 and 2.17 are what the integer pairs 17/9 and 28/13
# approximate).
TURBULENCE_PRESETS = {
    "st": dict(a1=17.0 / 9.0, a2=1.0, b1=0.5, b2=1.8,
               omega1=1.51, omega2=1.0, lambda1=17, lambda2=9),
    "mt": dict(a1=28.0 / 13.0, a2=1.0, b1=0.55, b2=2.35,
               omega1=1.58, omega2=0.97, lambda1=28, lambda2=13),
    "wt": dict(a1=2.1, a2=2.1, b1=4.0, b2=4.5,
               omega1=1.07, omega2=1.06, lambda1=1, lambda2=1),
}


@dataclass
class RngStream:
    """Deterministic random stream: identical (seed, stream_id) pairs
    reproduce identical sample sequences."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        self._gen = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(entropy=self.seed,
                                   spawn_key=(self.stream_id,))))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def substreams(self, count: int) -> Iterator["RngStream"]:
        for i in range(count):
            yield RngStream(self.seed, self.stream_id + i)


class EtaMuLink:
    """One eta-mu faded RF hop (main channel or eavesdropper).

    eta is the in-phase/quadrature power ratio (eta != 1; the expansion is
    singular there), mu the integer number of multipath cluster pairs,
    avg_snr the linear mean SNR.
    """

    def __init__(self, eta: float, mu: int, avg_snr: float):
        if not eta > 0:
            raise ParameterError("eta must be positive")
        if mu != int(mu) or mu < 1:
            raise ParameterError(
                "mu must be a positive integer; the exponential-sum expansion "
                "of the eta-mu density does not admit non-integer mu")
        if not avg_snr > 0:
            raise ParameterError("avg_snr must be positive")
        self.eta = float(eta)
        self.mu = int(mu)
        self.avg_snr = float(avg_snr)
        self.k = (2.0 + 1.0 / eta + eta) / 4.0
        self.bigK = (1.0 / eta - eta) / 4.0
        if abs(self.bigK) <= 1e-9:
            raise ParameterError(
                "eta too close to 1: the two-branch expansion degenerates "
                "(use a value away from 1, e.g. the table-reduction surrogates)")
        mu = self.mu
        k, K, phi = self.k, self.bigK, self.avg_snr
        self.coeff_A = k**mu / (K**mu * exp(lgamma(mu)))
        self.decay = {1: 2.0 * mu * (k - K) / phi, 2: 2.0 * mu * (k + K) / phi}
        self.X = {}
        self.Y = {}
        for N in (1, 2):
            shifted = k - K if N == 1 else k + K
            for v in range(mu):
                sgn = (-1.0)**v if N == 1 else (-1.0)**mu
                self.X[(N, v)] = sgn * (
                    exp(lgamma(mu + v) - lgamma(v + 1) - lgamma(mu - v))
                    * mu**(mu - v) / (4.0**v * phi**(mu - v) * K**v))
                self.Y[(N, v)] = sgn * (
                    exp(lgamma(mu + v) - lgamma(v + 1)) * K**(-v)
                    / (2.0**(mu + v) * shifted**(mu - v)))

    def with_avg_snr(self, avg_snr: float) -> "EtaMuLink":
        return EtaMuLink(self.eta, self.mu, avg_snr)

    def survival(self, gamma) -> np.ndarray:
        """P(SNR > gamma); complement of the CDF, shared with the secrecy sums."""
        g = np.asarray(gamma, dtype=float)
        out = np.zeros_like(g)
        for N in (1, 2):
            l = self.decay[N]
            for v in range(self.mu):
                poly = np.zeros_like(g)
                fact = 1.0
                for x in range(self.mu - v):
                    if x:
                        fact *= x
                    poly += (l * g)**x / fact
                out += self.Y[(N, v)] * poly * np.exp(-l * g)
        out = self.coeff_A * out
        # the coefficient identity A * sum(Y) = 1 holds only to rounding;
        # pin the exact endpoint
        return np.where(g == 0.0, 1.0, out)

    def __repr__(self):
        return (f"EtaMuLink(eta={self.eta}, mu={self.mu}, "
                f"avg_snr={self.avg_snr})")


def eta_mu_pdf(link: EtaMuLink, gamma) -> np.ndarray:
    """Density of the instantaneous SNR."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ParameterError("gamma must be >= 0")
    out = np.zeros_like(g)
    for N in (1, 2):
        for v in range(link.mu):
            out += (link.X[(N, v)] * g**(link.mu - v - 1)
                    * np.exp(-link.decay[N] * g))
    return link.coeff_A * out


def eta_mu_cdf(link: EtaMuLink, gamma) -> np.ndarray:
    """Distribution of the instantaneous SNR."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ParameterError("gamma must be >= 0")
    return 1.0 - link.survival(g)


def eta_mu_sample(link: EtaMuLink, rng: RngStream, n: int) -> np.ndarray:
    """Draw SNRs from the physical Gaussian construction.

    The density with parameter mu corresponds to 2*mu in-phase plus 2*mu
    quadrature Gaussian components (mu counts cluster *pairs*); drawing only
    mu of each yields a visibly different law, so mind the factor of two.
    Variances are scaled so the sample mean equals avg_snr.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    gen = rng.generator
    c = link.avg_snr / (2.0 * link.mu * (1.0 + link.eta))
    out = np.empty(n)
    done = 0
    while done < n:
        m = min(n - done, 1 << 20)
        P = gen.normal(0.0, sqrt(link.eta * c), size=(m, 2 * link.mu))
        Q = gen.normal(0.0, sqrt(c), size=(m, 2 * link.mu))
        out[done:done + m] = (P * P).sum(axis=1) + (Q * Q).sum(axis=1)
        done += m
    return out


class DggLink:
    """One DGG-faded FSO hop with pointing error and detection law.

    Shape pairs (a1, b1), (a2, b2) with scales omega1, omega2 describe the
    two irradiance factors; lambda1/lambda2 must equal a1/a2 exactly (the
    ladder expansions assume it).  eps is the pointing-error ratio,
    detection "hd" (s=1) or "imdd" (s=2), electrical_snr the linear
    electrical SNR of the hop.
    """

    def __init__(self, a1, a2, b1, b2, omega1, omega2, lambda1, lambda2,
                 eps, detection, electrical_snr):
        for name, val in (("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2),
                          ("omega1", omega1), ("omega2", omega2), ("eps", eps),
                          ("electrical_snr", electrical_snr)):
            if not val > 0:
                raise ParameterError(f"{name} must be positive")
        if lambda1 != int(lambda1) or lambda2 != int(lambda2) \
                or lambda1 < 1 or lambda2 < 1:
            raise ParameterError("lambda1, lambda2 must be positive integers")
        if abs(lambda1 * a2 - lambda2 * a1) > 1e-9 * lambda1 * a2:
            raise ParameterError(
                "lambda1/lambda2 must equal a1/a2 (the ladder expansion of "
                "the G-function parameters requires it exactly)")
        if detection in ("hd", 1):
            self.detection, self.s = "hd", 1
        elif detection in ("imdd", 2):
            self.detection, self.s = "imdd", 2
        else:
            raise ParameterError("detection must be 'hd' (s=1) or 'imdd' (s=2)")

        self.a1, self.a2 = float(a1), float(a2)
        self.b1, self.b2 = float(b1), float(b2)
        self.omega1, self.omega2 = float(omega1), float(omega2)
        self.lambda1, self.lambda2 = int(lambda1), int(lambda2)
        self.eps = float(eps)
        self.electrical_snr = float(electrical_snr)

        lam1, lam2, e2 = self.lambda1, self.lambda2, self.eps**2
        self.tau = self.a2 * lam1
        self.psi = delta_expand(lam2, self.b1) + delta_expand(lam1, self.b2)
        self.j1 = [e2 / self.tau] + self.psi
        self.j2 = 1.0 + e2 / self.tau
        self.log_zeta = sum(lgamma(1.0 / self.tau + p) for p in self.psi)
        self.log_B1 = (log(e2) + (self.b1 - 0.5) * log(lam2)
                       + (self.b2 - 0.5) * log(lam1)
                       + (1.0 - (lam1 + lam2) / 2.0) * log(2.0 * pi)
                       - lgamma(self.b1) - lgamma(self.b2))
        self.log_B2 = (lam2 * log(self.b1) + lam1 * log(self.b2)
                       - lam1 * log(lam1) - lam2 * log(lam2)
                       - lam2 * log(self.omega1) - lam1 * log(self.omega2))
        # log of B2 * t^tau; the omega scales cancel out of this combination
        self.log_B2t_tau = self.tau * (self.log_B1 + self.log_zeta
                                       - log(1.0 + e2))
        s = self.s
        self.delta_order = s * (lam1 + lam2 + 1)
        self.j3 = delta_expand(s, self.j2)
        self.j4 = delta_expand_list(s, self.j1)
        self.log_B3 = (log(e2) + (self.b1 - 0.5) * log(lam2)
                       + (self.b2 - 0.5) * log(lam1)
                       + (1.0 - s * (lam1 + lam2) / 2.0) * log(2.0 * pi)
                       + (self.b1 + self.b2 - 2.0) * log(s)
                       - log(self.tau) - lgamma(self.b1) - lgamma(self.b2))
        self.log_B4 = s * (self.log_B2t_tau - (lam1 + lam2) * log(s))

        # Mellin-Barnes integrands reused by every evaluation on this link
        self._pdf_mb = MellinBarnesIntegral(
            [(j, 1.0) for j in self.j1], [(self.j2, 1.0)])
        self._cdf_mb = MellinBarnesIntegral(
            [(j, 1.0) for j in self.j4] + [(0.0, -1.0)],
            [(1.0, -1.0)] + [(j, 1.0) for j in self.j3])
        self._sf_mb = MellinBarnesIntegral(
            [(j, 1.0) for j in self.j4] + [(0.0, 1.0)],
            [(1.0, 1.0)] + [(j, 1.0) for j in self.j3])

    # -- derived scale quantities -------------------------------------------

    def shape_key(self):
        return (self.a1, self.a2, self.b1, self.b2, self.omega1, self.omega2,
                self.lambda1, self.lambda2, self.eps)

    def with_electrical_snr(self, u: float) -> "DggLink":
        return DggLink(self.a1, self.a2, self.b1, self.b2, self.omega1,
                       self.omega2, self.lambda1, self.lambda2, self.eps,
                       self.detection, u)

    def ln_pdf_argument(self, gamma):
        return (self.log_B2t_tau
                + (self.tau / self.s) * (np.log(gamma) - log(self.electrical_snr)))

    def ln_cdf_argument(self, gamma):
        return (self.log_B4
                + self.tau * (np.log(gamma) - log(self.electrical_snr)))

    def snr_moment(self, r: float) -> float:
        """E[SNR^r] from the Mellin transform of the density."""
        sig = r * self.s / self.tau
        lnK = self.log_B2t_tau - (self.tau / self.s) * log(self.electrical_snr)
        m = self.log_B1 - log(self.tau) - sig * lnK - lgamma(self.j2 + sig)
        for j in self.j1:
            m += lgamma(j + sig)
        return exp(m)

    def sampler_scale(self) -> float:
        """Scale constant c of the physical sampler SNR = U*(I/c)^s,
        calibrated so the sampler's first moment matches the analytic mean."""
        s, e2 = self.s, self.eps**2
        log_EIs = (lgamma(self.b1 + s / self.a1) - lgamma(self.b1)
                   - (s / self.a1) * log(self.b1)
                   + lgamma(self.b2 + s / self.a2) - lgamma(self.b2)
                   - (s / self.a2) * log(self.b2)
                   + log(e2) - log(e2 + s))
        return exp((log(self.electrical_snr) + log_EIs
                    - log(self.snr_moment(1.0))) / s)

    def __repr__(self):
        return (f"DggLink(a1={self.a1:.6g}, a2={self.a2:.6g}, b1={self.b1}, "
                f"b2={self.b2}, lambda=({self.lambda1},{self.lambda2}), "
                f"eps={self.eps}, detection={self.detection!r}, "
                f"U={self.electrical_snr:.6g})")


def dgg_pdf(link: DggLink, gamma) -> np.ndarray:
    """Density of the electrical SNR on the FSO hop."""
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    if np.any(g <= 0):
        raise ParameterError("gamma must be > 0")
    vals = link._pdf_mb.value_many(link.ln_pdf_argument(g))
    out = exp(link.log_B1) / link.s * vals / g
    return out if np.ndim(gamma) else float(out[0])


def dgg_cdf(link: DggLink, gamma) -> np.ndarray:
    """Distribution of the electrical SNR on the FSO hop (0 at gamma = 0)."""
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    if np.any(g < 0):
        raise ParameterError("gamma must be >= 0")
    out = np.zeros_like(g)
    pos = g > 0
    if np.any(pos):
        vals = link._cdf_mb.value_many(link.ln_cdf_argument(g[pos]))
        out[pos] = exp(link.log_B3) * vals
    return out if np.ndim(gamma) else float(out[0])


def dgg_survival(link: DggLink, gamma) -> np.ndarray:
    """P(SNR > gamma) through the complementary-CDF G-form (not 1 - cdf), so
    the deep upper tail keeps relative accuracy."""
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    if np.any(g < 0):
        raise ParameterError("gamma must be >= 0")
    out = np.ones_like(g)
    pos = g > 0
    if np.any(pos):
        vals = link._sf_mb.value_many(link.ln_cdf_argument(g[pos]))
        out[pos] = exp(link.log_B3) * vals
    return out if np.ndim(gamma) else float(out[0])


def dgg_sample(link: DggLink, rng: RngStream, n: int) -> np.ndarray:
    """Physical sampler: product of two generalized-Gamma irradiances and a
    pointing-error factor V^(1/eps^2), mapped through SNR = U*(I/c)^s."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    gen = rng.generator
    Ix = gen.gamma(link.b1, 1.0 / link.b1, size=n) ** (1.0 / link.a1)
    Iy = gen.gamma(link.b2, 1.0 / link.b2, size=n) ** (1.0 / link.a2)
    Ip = gen.uniform(size=n) ** (1.0 / link.eps**2)
    c = link.sampler_scale()
    return link.electrical_snr * (Ix * Iy * Ip / c) ** link.s


def dgg_sample_inverse_cdf(link: DggLink, rng: RngStream, n: int,
                           grid_points: int = 4096) -> np.ndarray:
    """Inverse-CDF sampler through the analytic distribution.

    Slower and grid-limited (~1e-4 accuracy), but independent of the physical
    product construction: disagreement between the two samplers localizes a
    defect to the distribution model rather than the secrecy algebra.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    med = link.electrical_snr
    lo, hi = med * 1e-12, med * 1e12
    while dgg_cdf(link, lo) > 1e-9:
        lo *= 1e-3
    while dgg_cdf(link, hi) < 1.0 - 1e-9:
        hi *= 1e3
    grid = np.exp(np.linspace(log(lo), log(hi), grid_points))
    F = dgg_cdf(link, grid)
    F = np.maximum.accumulate(F)
    u = rng.generator.uniform(size=n)
    return np.interp(u, F, grid)


def special_case(name: str, **params):
    """Named reductions of the two fading families.

    RF side: Rayleigh / NakagamiM (eta -> 0 surrogate), OneSidedGaussian and
    Hoyt are rejected (mu = 0.5 is not representable).  FSO side:
    DoubleWeibull, GammaGamma, KDistribution; Lognormal is rejected (its
    a -> 0, b -> infinity limit is numerically unreachable here).
    """
    key = name.strip().lower().replace("-", "").replace("_", "")
    if key == "rayleigh":
        return EtaMuLink(ETA_LIMIT_SURROGATE, 1, params["avg_snr"])
    if key in ("nakagamim", "nakagami"):
        m = params["m"]
        if m != int(m):
            raise UnsupportedCaseError(
                "Nakagami-m requires integer m here (mu must be integer)")
        return EtaMuLink(ETA_LIMIT_SURROGATE, int(m), params["avg_snr"])
    if key in ("onesidedgaussian", "hoyt", "nakagamiq"):
        raise UnsupportedCaseError(
            f"{name}: requires mu = 0.5, which the integer-mu expansion "
            "cannot represent")
    if key == "doubleweibull":
        return DggLink(a1=params.get("a1", 2.1), a2=params.get("a2", 2.1),
                       b1=1.0, b2=1.0,
                       omega1=params.get("omega1", 1.07),
                       omega2=params.get("omega2", 1.06),
                       lambda1=params.get("lambda1", 1),
                       lambda2=params.get("lambda2", 1),
                       eps=params["eps"], detection=params["detection"],
                       electrical_snr=params["electrical_snr"])
    if key == "gammagamma":
        return DggLink(a1=1.0, a2=1.0, b1=params["b1"], b2=params["b2"],
                       omega1=1.0, omega2=1.0, lambda1=1, lambda2=1,
                       eps=params["eps"], detection=params["detection"],
                       electrical_snr=params["electrical_snr"])
    if key == "kdistribution":
        return DggLink(a1=1.0, a2=1.0, b1=1.0, b2=params.get("b2", 1.8),
                       omega1=1.0, omega2=1.0, lambda1=1, lambda2=1,
                       eps=params["eps"], detection=params["detection"],
                       electrical_snr=params["electrical_snr"])
    if key == "lognormal":
        raise UnsupportedCaseError(
            "Lognormal: the a1, a2 -> 0 with b1, b2 -> infinity limit is "
            "numerically unreachable in this parameterization")
    raise UnsupportedCaseError(f"unknown special case {name!r}")


def dgg_from_preset(preset: str, eps: float, detection,
                    electrical_snr: float) -> DggLink:
    """Construct a DGG link from one of the st/mt/wt turbulence presets."""
    try:
        kw = TURBULENCE_PRESETS[preset.lower()]
    except KeyError:
        raise ParameterError(f"unknown turbulence preset {preset!r}") from None
    return DggLink(eps=eps, detection=detection,
                   electrical_snr=electrical_snr, **kw)
