"""Monte Carlo estimators for every secrecy metric.

These are the independent oracles for the closed forms: the event logic goes
through the instantaneous secrecy-capacity functions (scenario 2) or the raw
SNR comparison (scenario 1), never through the secrecy module's algebra.

Counting is Bernoulli, so splitting a run across k disjoint sub-streams and
summing the integer event counts reproduces the concatenated run exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .channels import (RngStream, dgg_sample, dgg_sample_inverse_cdf,
                       eta_mu_sample)
from .dualhop import instantaneous_sc_scenario2
from .errors import ParameterError
from .secrecy import Scenario1Config, Scenario2Config

__all__ = [
    "MCEstimate",
    "estimate_sop1",
    "estimate_sop2",
    "estimate_spsc1",
    "estimate_spsc2",
]

_Z95 = 1.959963984540054


@dataclass(frozen=True)
class MCEstimate:
    """A Bernoulli estimate with its standard error and 95% interval."""

    value: float
    std_error: float
    n_samples: int
    ci95_low: float
    ci95_high: float

    @classmethod
    def from_counts(cls, hits: int, n: int) -> "MCEstimate":
        p = hits / n
        se = sqrt(p * (1.0 - p) / n)
        if hits < 10 or n - hits < 10:
            # Wilson interval: the normal interval collapses near 0 and 1
            z2 = _Z95 * _Z95
            mid = (p + z2 / (2 * n)) / (1 + z2 / n)
            half = (_Z95 * sqrt(p * (1 - p) / n + z2 / (4 * n * n))
                    / (1 + z2 / n))
            lo, hi = mid - half, mid + half
        else:
            lo, hi = p - _Z95 * se, p + _Z95 * se
        return cls(value=p, std_error=se, n_samples=n,
                   ci95_low=max(0.0, min(lo, p)),
                   ci95_high=min(1.0, max(hi, p)))


def _split(n: int, streams: int):
    base, extra = divmod(n, streams)
    return [base + (1 if i < extra else 0) for i in range(streams)]


def _count_streams(n: int, rng: RngStream, n_streams: int, counter) -> MCEstimate:
    if n < 1:
        raise ParameterError("n must be >= 1")
    if n_streams < 1:
        raise ParameterError("n_streams must be >= 1")
    hits = 0
    for sub, ni in zip(rng.substreams(n_streams), _split(n, n_streams)):
        if ni:
            hits += counter(sub, ni)
    return MCEstimate.from_counts(hits, n)


def _fso_sampler(use_inverse_cdf: bool):
    return dgg_sample_inverse_cdf if use_inverse_cdf else dgg_sample


def estimate_sop1(cfg: Scenario1Config, n: int, rng: RngStream,
                  exact_event: bool = False, n_streams: int = 1,
                  inverse_cdf_fso: bool = False) -> MCEstimate:
    """Outage frequency for scenario 1.

    exact_event=False counts the lower-bound event (no additive shift),
    which is what the closed-form bound computes; True counts the true
    outage event.  inverse_cdf_fso switches the FSO draw to the analytic
    inverse CDF to separate sampler defects from secrecy-algebra defects.
    """
    phi1 = cfg.phi1
    shift = (phi1 - 1.0) if exact_event else 0.0
    fso_draw = _fso_sampler(inverse_cdf_fso)

    def counter(sub: RngStream, ni: int) -> int:
        g_r0 = eta_mu_sample(cfg.rf_main, sub, ni)
        g_d0 = fso_draw(cfg.fso_main, sub, ni)
        g_re = eta_mu_sample(cfg.rf_eve, sub, ni)
        g_d = np.minimum(g_r0, g_d0)
        return int(np.count_nonzero(g_d <= phi1 * g_re + shift))

    return _count_streams(n, rng, n_streams, counter)


def estimate_sop2(cfg: Scenario2Config, n: int, rng: RngStream,
                  exact_event: bool = False, n_streams: int = 1,
                  inverse_cdf_fso: bool = False) -> MCEstimate:
    """Outage frequency for scenario 2.

    The exact event evaluates the instantaneous secrecy capacity of the DF
    pair directly; the lower-bound event drops the additive shift on both
    component comparisons.
    """
    phi2 = cfg.phi2
    rate = cfg.target_rate
    fso_draw = _fso_sampler(inverse_cdf_fso)

    def counter(sub: RngStream, ni: int) -> int:
        g_r0 = eta_mu_sample(cfg.rf_main, sub, ni)
        g_d0 = fso_draw(cfg.fso_main, sub, ni)
        g_de = fso_draw(cfg.fso_eve, sub, ni)
        if exact_event:
            sc = instantaneous_sc_scenario2(g_r0, g_d0, g_de)
            return int(np.count_nonzero(sc < rate))
        event = (g_r0 <= phi2 - 1.0) | (g_d0 <= phi2 * g_de)
        return int(np.count_nonzero(event))

    return _count_streams(n, rng, n_streams, counter)


def estimate_spsc1(cfg: Scenario1Config, n: int, rng: RngStream,
                   n_streams: int = 1, inverse_cdf_fso: bool = False
                   ) -> MCEstimate:
    """Frequency of strictly positive secrecy capacity for scenario 1."""
    fso_draw = _fso_sampler(inverse_cdf_fso)

    def counter(sub: RngStream, ni: int) -> int:
        g_r0 = eta_mu_sample(cfg.rf_main, sub, ni)
        g_d0 = fso_draw(cfg.fso_main, sub, ni)
        g_re = eta_mu_sample(cfg.rf_eve, sub, ni)
        return int(np.count_nonzero(np.minimum(g_r0, g_d0) > g_re))

    return _count_streams(n, rng, n_streams, counter)


def estimate_spsc2(cfg: Scenario2Config, n: int, rng: RngStream,
                   n_streams: int = 1, inverse_cdf_fso: bool = False
                   ) -> MCEstimate:
    """Frequency of strictly positive secrecy capacity for scenario 2."""
    fso_draw = _fso_sampler(inverse_cdf_fso)

    def counter(sub: RngStream, ni: int) -> int:
        g_d0 = fso_draw(cfg.fso_main, sub, ni)
        g_de = fso_draw(cfg.fso_eve, sub, ni)
        return int(np.count_nonzero(g_d0 > g_de))

    return _count_streams(n, rng, n_streams, counter)
