"""Finite-blocklength coding rate and outage of the PPP downlink.

Per-realization quantities use the normal approximation
R = log2(1 + g) - sqrt(V(g) / n) Q^{-1}(eps); the network averages integrate
the SINR tail exp(-x / gamma0) L_zeta(x) against the capacity or dispersion
change of variables. The o(1/sqrt(n)) remainder is taken as zero throughout.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .interference import lt_zeta
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, q_func_inv, quad_estimate
from .params import DEFAULT_MOMENTS, FblParams, NetworkParams, RateResult, SinrThreshold, SymbolMomentModel

LOG2E = math.log2(math.e)
LOG2E_SQ = LOG2E * LOG2E
DISPERSION_SUP = 0.5 * LOG2E_SQ
"""Supremum of the channel dispersion, approached as the SNR grows."""


def _nonneg(snr, name="snr"):
    arr = np.asarray(snr, dtype=float)
    if np.any(~(arr >= 0)):
        raise DomainError(f"{name} must be >= 0")
    return arr


def _out(arr):
    return float(arr) if arr.ndim == 0 else arr


def awgn_capacity(snr):
    """log2(1 + snr) in bits per channel use; scalar or array."""
    return _out(np.log1p(_nonneg(snr)) * LOG2E)


def channel_dispersion(snr):
    """Dispersion (snr/2) (snr+2)/(snr+1)^2 log2^2(e); scalar or array."""
    g = _nonneg(snr)
    return _out(0.5 * g * (g + 2.0) / (g + 1.0) ** 2 * LOG2E_SQ)


def channel_dispersion_complement(snr):
    """Same dispersion written as log2^2(e)/2 * (1 - 1/(1+snr)^2)."""
    g = _nonneg(snr)
    return _out(DISPERSION_SUP * (1.0 - 1.0 / (1.0 + g) ** 2))


def fbl_penalty_scale(fbl: FblParams) -> float:
    """Q^{-1}(eps) / sqrt(n), the factor multiplying sqrt(V)."""
    return q_func_inv(fbl.epsilon) / math.sqrt(fbl.blocklength_n)


def coding_rate_fbl(snr: float, fbl: FblParams) -> RateResult:
    """Normal-approximation coding rate of one channel realization."""
    snr = float(_nonneg(snr))
    return RateResult(awgn_capacity(snr), math.sqrt(channel_dispersion(snr)) * fbl_penalty_scale(fbl))


def coding_rate_unclamped(snr, fbl: FblParams) -> np.ndarray:
    """Vectorized log2(1+g) - sqrt(V(g)/n) Q^{-1}(eps), without the clamp at zero."""
    g = _nonneg(snr)
    return np.log1p(g) * LOG2E - np.sqrt(0.5 * g * (g + 2.0) / (g + 1.0) ** 2 * LOG2E_SQ) * fbl_penalty_scale(fbl)


def _tail_cutoff(gamma0: float, spec: QuadratureSpec) -> float:
    # beyond this x, exp(-x / gamma0) < abs_tol / 100
    return gamma0 * math.log(100.0 / spec.abs_tol)


def sinr_ccdf(x: float, params: NetworkParams, moments: SymbolMomentModel = DEFAULT_MOMENTS,
              spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """P(gamma > x) = exp(-x / gamma0) L_zeta(x) under Rayleigh serving fading."""
    if x <= 0:
        return 1.0
    e = math.exp(-x / params.gamma0)
    return e * lt_zeta(x, params, moments, spec) if e > 0.0 else 0.0


def avg_capacity(params: NetworkParams, moments: SymbolMomentModel = DEFAULT_MOMENTS,
                 spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Network-averaged Shannon capacity E[log2(1 + gamma)] in bits per use.

    Integrates P(gamma > 2^c - 1) over c in [0, c_max]; past c_max the
    Rayleigh factor alone bounds the integrand below abs_tol / 100, and it
    decays doubly exponentially in c, so the dropped tail is certified.
    """
    gamma0 = params.gamma0
    c_max = math.log2(1.0 + _tail_cutoff(gamma0, spec))
    f = lambda c: sinr_ccdf(math.expm1(c * math.log(2.0)), params, moments, spec)  # noqa: E731
    knee = math.log2(1.0 + gamma0)
    res = quad_estimate(f, 0.0, c_max, spec, points=[knee] if knee < c_max else None)
    return res.value


def avg_dispersion(params: NetworkParams, moments: SymbolMomentModel = DEFAULT_MOMENTS,
                   spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Network-averaged channel dispersion E[V(gamma)].

    The dispersion-CDF integral has an integrable blow-up at its upper end;
    substituting the SINR level u for the dispersion level v removes it:
    dv = log2^2(e) (1+u)^-3 du. The result is integrated over w = ln(1 + u).
    """
    gamma0 = params.gamma0
    u_max = min(_tail_cutoff(gamma0, spec), math.sqrt(50.0 / spec.abs_tol))
    w_max = math.log1p(u_max)

    def f(w):
        u = math.expm1(w)
        return sinr_ccdf(u, params, moments, spec) * math.exp(-2.0 * w)

    knee = math.log1p(gamma0)
    res = quad_estimate(f, 0.0, w_max, spec, points=[knee] if knee < w_max else None)
    return LOG2E_SQ * res.value


def avg_coding_rate(params: NetworkParams, fbl: FblParams, moments: SymbolMomentModel = DEFAULT_MOMENTS,
                    spec: QuadratureSpec = DEFAULT_QUADRATURE) -> RateResult:
    """Average coding rate: mean capacity minus sqrt(mean dispersion / n) Q^{-1}(eps)."""
    cap = avg_capacity(params, moments, spec)
    disp = avg_dispersion(params, moments, spec)
    return RateResult(cap, math.sqrt(disp) * fbl_penalty_scale(fbl))


def outage_ibl(params: NetworkParams, thr: SinrThreshold, moments: SymbolMomentModel = DEFAULT_MOMENTS,
               spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Infinite-blocklength outage P(gamma < T)."""
    return min(1.0, max(0.0, 1.0 - sinr_ccdf(thr.T, params, moments, spec)))


def outage_lower(params: NetworkParams, thr: SinrThreshold, fbl: FblParams,
                 moments: SymbolMomentModel = DEFAULT_MOMENTS, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Lower bound on the finite-blocklength outage; equals :func:`outage_ibl` for b = 0."""
    return outage_ibl(params, thr, moments, spec)


def outage_shift(fbl: FblParams) -> float:
    """Rate back-off a = sqrt(log2^2(e) / (2n)) Q^{-1}(eps) used by the upper bound."""
    return math.sqrt(LOG2E_SQ / (2.0 * fbl.blocklength_n)) * q_func_inv(fbl.epsilon)


def outage_upper(params: NetworkParams, thr: SinrThreshold, fbl: FblParams,
                 moments: SymbolMomentModel = DEFAULT_MOMENTS, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Upper bound on the finite-blocklength outage, P(log2(1+gamma) - a < R)."""
    shifted = SinrThreshold((1.0 + thr.T) * 2.0 ** outage_shift(fbl) - 1.0)
    return outage_ibl(params, shifted, moments, spec)


outage_approx = outage_upper
"""The upper bound doubles as the outage approximation for moderate or large SINR."""
