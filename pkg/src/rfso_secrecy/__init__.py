"""Secrecy analysis of dual-hop RF-FSO links.

The RF hop fades as eta-mu, the FSO hop as double generalized Gamma with
pointing errors; decode-and-forward relaying joins them.  The package
evaluates secure outage probability and the probability of strictly
positive secrecy capacity for eavesdroppers on either hop, in closed form
(Meijer G / Mellin-Barnes), by high-SNR asymptotics, by direct quadrature,
and by Monte Carlo simulation.
"""

from .channels import (DggLink, EtaMuLink, RngStream, TURBULENCE_PRESETS,
                       dgg_cdf, dgg_from_preset, dgg_pdf, dgg_sample,
                       dgg_sample_inverse_cdf, eta_mu_cdf, eta_mu_pdf,
                       eta_mu_sample, special_case)
from .dualhop import (DualHopChannel, instantaneous_sc_scenario1,
                      instantaneous_sc_scenario2, min_combine_cdf,
                      min_combine_pdf)
from .errors import (AccuracyError, ClampExcessWarning, ConfigError,
                     DegenerateParameterError, ParameterError,
                     PoleCollisionError, RfsoError, UnsupportedCaseError)
from .montecarlo import (MCEstimate, estimate_sop1, estimate_sop2,
                         estimate_spsc1, estimate_spsc2)
from .presets import FigurePreset, SweepSpec, figure_preset
from .secrecy import (Scenario1Config, Scenario2Config, sop1_asymptotic,
                      sop1_exact_quadrature, sop1_lower, sop2_asymptotic,
                      sop2_exact_quadrature, sop2_lower, spsc1, spsc2)
from .specfun import (EvalOptions, MeijerGSpec, MellinBarnesIntegral,
                      delta_expand, delta_expand_list, log_gamma_complex,
                      meijer_g)

__version__ = "0.1.0"
