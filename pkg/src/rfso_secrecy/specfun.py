"""Meijer G-function evaluation and gamma-family helpers.

The evaluator works on the Mellin-Barnes representation

    (1/2*pi*i) * int  prod Gamma(a_j + B_j v) / prod Gamma(c_j + D_j v) * z^(-v) dv

taken along a vertical line whose abscissa is placed at the (real-axis)
saddle point of the integrand.  Saddle placement is what preserves relative
accuracy when the result is exponentially small; a fixed abscissa loses all
significant digits to cancellation as soon as |log z| is large.

Plain Meijer G-functions are the special case where every slope is +/-1.
The channel and secrecy modules also build integrands with one non-unit
slope (Laplace-transform kernels Gamma(z - tau*v)); the engine treats those
identically.

All gamma products accumulate in the log domain: the channel formulas
multiply 40+ gamma factors (the moderate-turbulence CDF under intensity
modulation carries 84 lower parameters), which overflow doubles in linear
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, log, pi
from typing import Sequence

import numpy as np
from scipy.special import digamma, gammaln, gammasgn, loggamma

from .errors import (AccuracyError, DegenerateParameterError, ParameterError,
                     PoleCollisionError)

__all__ = [
    "EvalOptions",
    "MeijerGSpec",
    "MellinBarnesIntegral",
    "TIGHT_OPTIONS",
    "delta_expand",
    "delta_expand_list",
    "log_gamma_complex",
    "meijer_g",
    "perturb_integer_spaced",
]

# Strips narrower than this are escaped by hopping the contour across the
# offending descending-factor pole(s) and adding the crossed residues: a line
# (or arc) inside a width-w strip passes within w of a pole and would need
# O(T/w) quadrature nodes to resolve the spike.
_NARROW_STRIP = 1e-6
# Off-axis probe used when a denominator gamma argument sits near a real pole.
_PROBE = 0.25j


@dataclass(frozen=True)
class EvalOptions:
    """Accuracy controls for a single Meijer G / Mellin-Barnes evaluation."""

    target_abs_tol: float = 1e-12
    target_rel_tol: float = 1e-10
    max_quadrature_nodes: int = 1 << 18
    pole_separation_tol: float = 1e-8

    def __post_init__(self):
        if not (self.target_abs_tol > 0 and self.target_rel_tol > 0
                and self.pole_separation_tol > 0):
            raise ParameterError("all tolerances must be strictly positive")
        if self.max_quadrature_nodes < 64:
            raise ParameterError("max_quadrature_nodes must be >= 64")


# Options used by the channel/secrecy formulas: effectively relative-error
# driven, so probabilities stay accurate next to 0 and 1.
TIGHT_OPTIONS = EvalOptions(target_abs_tol=1e-280, target_rel_tol=1e-11)


@dataclass(frozen=True)
class MeijerGSpec:
    """Order and parameters of one Meijer G evaluation G^{m,n}_{p,q}(z | a; b)."""

    m: int
    n: int
    p: int
    q: int
    a_params: tuple
    b_params: tuple
    argument: float

    def __post_init__(self):
        object.__setattr__(self, "a_params", tuple(float(x) for x in self.a_params))
        object.__setattr__(self, "b_params", tuple(float(x) for x in self.b_params))
        if min(self.m, self.n, self.p, self.q) < 0:
            raise ParameterError("orders m, n, p, q must be non-negative")
        if self.m > self.q or self.n > self.p:
            raise ParameterError("Meijer G orders require m <= q and n <= p")
        if len(self.a_params) != self.p or len(self.b_params) != self.q:
            raise ParameterError("parameter list lengths must equal p and q")
        if not (self.argument > 0):
            raise ParameterError("argument must be a positive real")
        for a in self.a_params[:self.n]:
            for b in self.b_params[:self.m]:
                d = a - b
                if d >= 0.5 and abs(d - round(d)) < 1e-12:
                    raise PoleCollisionError(
                        f"a={a} and b={b} differ by a positive integer; "
                        "the defining contour does not exist")


def log_gamma_complex(z: complex) -> complex:
    """Principal-branch log-gamma for complex z (poles rejected)."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real):
        raise ParameterError(f"log-gamma pole at z={z.real}")
    return complex(loggamma(z))


def delta_expand(p: int, q: float) -> list:
    """[q/p, (q+1)/p, ..., (q+p-1)/p] -- the p-point arithmetic ladder."""
    if p != int(p) or p < 1:
        raise ParameterError("p must be a positive integer")
    p = int(p)
    return [(q + i) / p for i in range(p)]


def delta_expand_list(sigma: int, values: Sequence[float]) -> list:
    """Concatenation of delta_expand(sigma, x) over x in values."""
    values = list(values)
    if not values:
        raise ParameterError("values must be non-empty")
    out = []
    for x in values:
        out.extend(delta_expand(sigma, x))
    return out


class MellinBarnesIntegral:
    """A gamma-product contour integrand with positive real argument.

    numer / denom are sequences of (offset, slope) pairs, each standing for a
    factor Gamma(offset + slope*v).  The vertical-line integral converges iff
    the numerator slope mass exceeds the denominator's; the admissible strip
    is bounded by the rightmost ascending-factor pole and the leftmost
    descending-factor pole.
    """

    def __init__(self, numer, denom=()):
        self.numer = tuple((float(a), float(b)) for a, b in numer)
        self.denom = tuple((float(a), float(b)) for a, b in denom)
        if not self.numer:
            raise ParameterError("at least one numerator gamma factor required")
        if any(b == 0 for _, b in self.numer + self.denom):
            raise ParameterError("gamma factor slopes must be nonzero")
        L, R = -np.inf, np.inf
        for a, b in self.numer:
            if b > 0:
                L = max(L, -a / b)
            else:
                R = min(R, a / (-b))
        self.strip = (L, R)
        self.decay = (pi / 2.0) * (sum(abs(b) for _, b in self.numer)
                                   - sum(abs(b) for _, b in self.denom))
        if self.decay <= 0:
            raise ParameterError("contour integral diverges: numerator slope "
                                 "mass does not dominate the denominator")
        if L >= R:
            raise DegenerateParameterError(
                "numerator pole families interlace; no separating contour")
        self._na = np.array([a for a, _ in self.numer])
        self._nb = np.array([b for _, b in self.numer])
        self._da = np.array([a for a, _ in self.denom])
        self._db = np.array([b for _, b in self.denom])

    # -- contour placement -------------------------------------------------

    def _dlog(self, c: float, lnz: float) -> float:
        """d/dc of the log-integrand magnitude on the real axis."""
        out = -lnz
        x = self._na + self._nb * c
        # numerator arguments are positive everywhere inside the strip
        out += float(np.sum(self._nb * digamma(np.maximum(x, 1e-12))))
        if self._da.size:
            xd = self._da + self._db * c + _PROBE
            out -= float(np.sum(self._db * digamma(xd).real))
        return out

    def _saddle(self, lnz: float) -> float:
        L, R = self.strip
        if np.isfinite(L) and np.isfinite(R):
            w = R - L
            lo, hi = L + 0.02 * w, R - 0.02 * w
        elif np.isfinite(L):
            lo = L + 1e-3
            hi = max(L + 1.0, 1.0)
            for _ in range(400):
                if self._dlog(hi, lnz) > 0:
                    break
                hi *= 2.0
        else:
            hi = R - 1e-3
            lo = min(R - 1.0, -1.0)
            for _ in range(400):
                if self._dlog(lo, lnz) < 0:
                    break
                lo *= 2.0
        if self._dlog(lo, lnz) >= 0:
            return lo
        if self._dlog(hi, lnz) <= 0:
            return hi
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if self._dlog(mid, lnz) > 0:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    def _truncation(self, c: float) -> float:
        """Height at which the integrand tail is negligible for ~1e-15 work."""
        rho = float(np.sum(self._na + self._nb * c - 0.5))
        if self._da.size:
            rho -= float(np.sum(self._da + self._db * c - 0.5))
        lam = 50.0
        T = (lam + max(rho, 0.0) * log(2.0)) / self.decay
        for _ in range(4):
            T = (lam + max(rho, 0.0) * np.log1p(abs(T))) / self.decay
        return max(T, 4.0 / self.decay)

    def _log_integrand(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v, dtype=complex)
        for a, b in self.numer:
            out += loggamma(a + b * v)
        for a, b in self.denom:
            out -= loggamma(a + b * v)
        return out

    # -- evaluation --------------------------------------------------------

    def value(self, ln_argument: float,
              options: EvalOptions = TIGHT_OPTIONS) -> float:
        return float(self.value_many(np.array([float(ln_argument)]), options)[0])

    def value_many(self, ln_arguments, options: EvalOptions = TIGHT_OPTIONS):
        """Evaluate at several log-arguments with one gamma pass per group of
        nearby arguments (they share contour and nodes)."""
        lnz = np.atleast_1d(np.asarray(ln_arguments, dtype=float))
        out = np.empty_like(lnz)
        if lnz.size == 0:
            return out
        order = np.argsort(lnz, kind="stable")
        start = 0
        for i in range(1, lnz.size + 1):
            if i == lnz.size or lnz[order[i]] - lnz[order[start]] > 4.0:
                idx = order[start:i]
                try:
                    out[idx] = self._value_group(lnz[idx], options)
                except AccuracyError:
                    if idx.size == 1:
                        raise
                    # exponentially spread results cannot share one contour:
                    # re-run the group one argument (one saddle) at a time
                    for j in idx:
                        out[j] = self._value_group(lnz[j:j + 1], options)[0]
                start = i
        return out

    def _hop_contour(self):
        """For a near-degenerate strip: place the contour in the first wide
        gap to the right and report the descending-factor poles it crossed."""
        L, _ = self.strip
        poles = []
        for idx, (a, b) in enumerate(self.numer):
            if b < 0:
                k = 0
                while True:
                    v0 = (a + k) / (-b)
                    if v0 > L + 8.0:
                        break
                    poles.append((v0, idx, k))
                    k += 1
        poles.sort()
        positions = [p[0] for p in poles] + [L + 9.0]
        best_gap, c = -1.0, positions[-1] - 0.5
        for i in range(len(positions) - 1):
            width = positions[i + 1] - positions[i]
            if width >= 0.5:
                c = positions[i] + 0.5 * width
                break
            if width > best_gap:
                best_gap = width
                c = positions[i] + 0.5 * width
        crossed = tuple(p for p in poles if p[0] < c)
        return c, crossed

    def _crossed_residues(self, crossed, lnz: np.ndarray) -> np.ndarray:
        out = np.zeros_like(lnz)
        for v0, idx, k in crossed:
            b_here = self.numer[idx][1]
            # residue of Gamma(a + b v) at v0 = (a+k)/(-b) is (-1)^k/(k! b)
            lg = -gammaln(k + 1.0) - log(abs(b_here))
            sg = (1.0 if k % 2 == 0 else -1.0) * (1.0 if b_here > 0 else -1.0)
            dead = False
            for j, (aj, bj) in enumerate(self.numer):
                if j == idx:
                    continue  # the residue factor itself
                x = aj + bj * v0
                s = gammasgn(x)
                if s == 0.0:
                    raise DegenerateParameterError(
                        "coincident poles while hopping a degenerate strip")
                sg *= s
                lg += gammaln(x)
            for aj, bj in self.denom:
                x = aj + bj * v0
                s = gammasgn(x)
                if s == 0.0:
                    dead = True  # denominator pole: residue vanishes
                    break
                sg *= s
                lg -= gammaln(x)
            if not dead:
                out = out + sg * np.exp(lg - v0 * lnz)
        return out

    def _value_group(self, lnz: np.ndarray, options: EvalOptions) -> np.ndarray:
        L, R = self.strip
        crossed = ()
        if np.isfinite(L) and np.isfinite(R) and (R - L) < _NARROW_STRIP:
            c, crossed = self._hop_contour()
        else:
            c = self._saddle(float(np.median(lnz)))
        T = self._truncation(c)
        correction = (self._crossed_residues(crossed, lnz) if crossed
                      else 0.0)

        n = 256
        t = np.linspace(0.0, T, n + 1)
        v = c + 1j * t
        g = self._log_integrand(v)
        vals = self._assemble(t, v, g, lnz, T) - correction
        prev = None
        passes = 0
        while True:
            n *= 2
            if n > options.max_quadrature_nodes:
                bound = (float(np.max(np.abs(vals - prev)))
                         if prev is not None else np.inf)
                raise AccuracyError(
                    "contour quadrature did not converge within "
                    f"{options.max_quadrature_nodes} nodes",
                    best_estimate=vals, error_bound=bound)
            t_new = (np.arange(n // 2) + 0.5) * (T / (n // 2))
            v2 = c + 1j * t_new
            g2 = self._log_integrand(v2)
            t = np.concatenate([t, t_new])
            v = np.concatenate([v, v2])
            g = np.concatenate([g, g2])
            prev = vals
            vals = self._assemble(t, v, g, lnz, T) - correction
            err = np.abs(vals - prev)
            tol = np.maximum(options.target_abs_tol,
                             options.target_rel_tol * np.abs(vals))
            if np.all(err <= tol):
                passes += 1
                if passes >= 2:
                    return vals
            else:
                passes = 0

    @staticmethod
    def _assemble(t, v, g, lnz, T):
        """Uniform-grid trapezoid of (1/pi) Re f(t); node order is irrelevant
        for the rule but fixed, so results are reproducible bit for bit."""
        n = t.size - 1
        h = T / n
        w = np.ones(t.size)
        w[np.argmin(t)] = 0.5
        w[np.argmax(t)] = 0.5
        out = np.empty_like(lnz)
        for j, lz in enumerate(lnz):
            lf = g - v * lz
            M = float(lf.real.max())
            s = float(np.sum(w * np.exp(lf - M).real))
            mag = M + log(abs(s) * h / pi) if s != 0.0 else -np.inf
            if mag > 709.0:
                raise AccuracyError("contour integral overflowed double precision",
                                    best_estimate=np.sign(s) * np.inf,
                                    error_bound=np.inf)
            out[j] = np.sign(s) * exp(mag) if np.isfinite(mag) else 0.0
        return out


# -- Meijer G front end ------------------------------------------------------


def _spec_factors(spec: MeijerGSpec):
    """Express the G-function as gamma factors of the contour variable.

    Parameter groups are sorted first, which makes evaluation invariant (bit
    for bit) under permutations inside each group.
    """
    bm = sorted(spec.b_params[:spec.m])
    bq = sorted(spec.b_params[spec.m:])
    an = sorted(spec.a_params[:spec.n])
    ap = sorted(spec.a_params[spec.n:])
    numer = [(b, 1.0) for b in bm] + [(1.0 - a, -1.0) for a in an]
    denom = [(1.0 - b, -1.0) for b in bq] + [(a, 1.0) for a in ap]
    return numer, denom, bm, bq, an, ap


def _residue_series_ok(spec: MeijerGSpec, bm, tol: float) -> bool:
    """Power-series fast path applies only to cleanly separated lower
    parameters (no pair equal or integer-spaced) and small arguments, where
    the series has no growing terms to cancel.

    Dense parameter ladders (the DGG channel vectors) technically clear any
    tiny separation tolerance yet still lose all precision to the huge
    Gamma(near-pole) factors, so the gate also demands O(1) gaps and few
    parameters; everything else goes to the contour, which has no such
    pathology.
    """
    if spec.m == 0 or spec.m > 6 or spec.argument > 1.0:
        return False
    if spec.p > spec.q or (spec.p == spec.q and spec.argument >= 1.0):
        return False
    gap_floor = max(tol, 0.05)
    for i in range(len(bm)):
        for j in range(i + 1, len(bm)):
            d = abs(bm[i] - bm[j])
            if d <= gap_floor or abs(d - round(d)) <= gap_floor:
                return False
    return True


def _residue_series(spec: MeijerGSpec, bm, bq, an, ap,
                    options: EvalOptions) -> float:
    """Sum of residues over the left pole families v = -b_h - k."""
    lnz = log(spec.argument)
    total = 0.0
    for h, bh in enumerate(bm):
        acc = 0.0
        small = 0
        converged = False
        for k in range(4000):
            lg = -gammaln(k + 1.0)
            sg = 1.0 if k % 2 == 0 else -1.0
            dead = False
            for j, bj in enumerate(bm):
                if j == h:
                    continue
                x = bj - bh - k
                s = gammasgn(x)
                if s == 0.0:
                    raise DegenerateParameterError(
                        "integer-spaced lower parameters in residue series")
                sg *= s
                lg += gammaln(x)
            for a in an:
                x = 1.0 - a + bh + k
                sg *= gammasgn(x)
                lg += gammaln(x)
            for b in bq:
                x = 1.0 - b + bh + k
                if gammasgn(x) == 0.0:
                    dead = True  # denominator pole: residue term vanishes
                    break
                sg *= gammasgn(x)
                lg -= gammaln(x)
            if not dead:
                for a in ap:
                    x = a - bh - k
                    if gammasgn(x) == 0.0:
                        dead = True
                        break
                    sg *= gammasgn(x)
                    lg -= gammaln(x)
            term = 0.0 if dead else sg * exp(lg + (bh + k) * lnz)
            acc += term
            if abs(term) <= max(options.target_abs_tol,
                                options.target_rel_tol * abs(acc)) * 1e-2:
                small += 1
                if small >= 3:
                    converged = True
                    break
            else:
                small = 0
        if not converged:
            raise AccuracyError("residue series did not converge",
                                best_estimate=total + acc, error_bound=np.inf)
        total += acc
    return total


def meijer_g(spec: MeijerGSpec, options: EvalOptions | None = None) -> float:
    """Evaluate G^{m,n}_{p,q}(z | a; b) for positive real z.

    Deterministic for fixed inputs.  Raises AccuracyError (carrying the best
    estimate and an error bound) when the node budget runs out, and
    PoleCollisionError / DegenerateParameterError for inadmissible parameters.
    """
    opts = options or EvalOptions()
    numer, denom, bm, bq, an, ap = _spec_factors(spec)
    if _residue_series_ok(spec, bm, opts.pole_separation_tol):
        return _residue_series(spec, bm, bq, an, ap, opts)
    integral = MellinBarnesIntegral(numer, denom)
    return integral.value(log(spec.argument), opts)


def perturb_integer_spaced(values, tol: float) -> set:
    """Indices whose entries sit an integer away from an earlier entry.

    Residue-sum asymptotics divide by Gamma(b_h - b_p); integer spacing makes
    those formulas degenerate.  Callers nudge the reported entries by +/-eps
    and average the two evaluations.
    """
    vals = list(values)
    bad = set()
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            d = vals[i] - vals[j]
            if abs(d - round(d)) <= tol:
                bad.add(j)
    return bad
