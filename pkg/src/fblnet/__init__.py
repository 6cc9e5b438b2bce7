"""Finite-blocklength performance of Poisson-network downlinks.

Analytic average coding rate and outage expressions for a PPP cellular
downlink with a fixed serving distance, plus a Monte Carlo simulator that
checks each of them independently.
"""

from ._accel import get_backend, set_backend
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    FblnetError,
    SeriesDivergenceError,
    UnsupportedError,
)
from .fbl import (
    avg_capacity,
    avg_coding_rate,
    avg_dispersion,
    awgn_capacity,
    channel_dispersion,
    coding_rate_fbl,
    outage_approx,
    outage_ibl,
    outage_lower,
    outage_upper,
)
from .interference import lt_B, lt_B_eta4, lt_B_quadrature, lt_B_series, lt_zeta
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, integrate, q_func, q_func_inv
from .params import (
    CONSTANT_MODULUS,
    DEFAULT_MOMENTS,
    GAUSSIAN_CODEBOOK,
    Estimate,
    FblParams,
    MonteCarloConfig,
    NetworkParams,
    RateResult,
    SinrThreshold,
    SymbolMomentModel,
)

__version__ = "0.1.0"
