"""Laplace transform of the aggregate PPP interference power.

Three independent evaluation routes are provided: the alternating power
series in z, the eta = 4 arctan closed form, and a quadrature of the
probability generating functional. The closed form is exact only for
exponential power marks (m_k = k!); constant-modulus marks go through the
quadrature. ``lt_zeta`` is the production entry point used by the analytic
performance expressions.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DomainError, SeriesDivergenceError, UnsupportedError
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, quad_estimate
from .params import DEFAULT_MOMENTS, NetworkParams, SymbolMomentModel

DEFAULT_TRUNCATION_K = 30
SERIES_TOL = 1e-8


class LaplaceSeries(NamedTuple):
    """Truncated series value with its convergence diagnostics.

    ``last_term`` and ``max_term`` are magnitudes of exponent terms a_k z^k.
    ``converged`` requires a negligible last term and no catastrophic
    cancellation among the retained terms.
    """

    value: float
    exponent: float
    last_term: float
    max_term: float
    converged: bool


def _check_z(z: float) -> float:
    z = float(z)
    if not (z >= 0 and math.isfinite(z)):
        raise DomainError(f"Laplace argument must be finite and >= 0, got {z}")
    return z


def series_coefficient(k: int, params: NetworkParams, moments: SymbolMomentModel = DEFAULT_MOMENTS) -> float:
    """a_k of the exponent series sum_k a_k z^k."""
    lam, r0, eta, p = params.lambda_density, params.r0, params.eta, params.tx_power
    log_mag = (math.log(2.0 * math.pi * lam * r0 * r0) + k * math.log(p / r0**eta)
               + moments.log_moment(k) - math.log(eta * k - 2.0) - math.lgamma(k + 1))
    mag = math.exp(log_mag)
    return -mag if k % 2 else mag


def lt_B_series(
    z: float,
    params: NetworkParams,
    moments: SymbolMomentModel = DEFAULT_MOMENTS,
    truncation_K: int = DEFAULT_TRUNCATION_K,
) -> LaplaceSeries:
    """exp(sum_{k=1..K} a_k z^k) with a divergence check on the trailing terms."""
    z = _check_z(z)
    if truncation_K < 1 or int(truncation_K) != truncation_K:
        raise DomainError(f"truncation_K must be a positive integer, got {truncation_K}")
    if z == 0.0 or params.lambda_density == 0.0:
        return LaplaceSeries(1.0, 0.0, 0.0, 0.0, True)

    lam, r0, eta = params.lambda_density, params.r0, params.eta
    log_scale = math.log(2.0 * math.pi * lam * r0 * r0)
    log_x = math.log(z * params.tx_power) - eta * math.log(r0)
    total = 0.0
    mags = []
    for k in range(1, int(truncation_K) + 1):
        log_mag = log_scale + k * log_x + moments.log_moment(k) - math.log(eta * k - 2.0) - math.lgamma(k + 1)
        mag = math.exp(log_mag) if log_mag < 700.0 else math.inf
        mags.append(mag)
        total += -mag if k % 2 else mag

    last = mags[-1]
    if len(mags) >= 4 and mags[-1] > mags[-2] > mags[-3] > mags[-4]:
        raise SeriesDivergenceError(f"series terms still growing at k={truncation_K} (z={z:g})", last)
    max_term = max(mags)
    rounding = max_term * len(mags) * 2.2e-16
    converged = math.isfinite(total) and last <= SERIES_TOL and rounding <= SERIES_TOL
    value = math.exp(total) if math.isfinite(total) else math.nan
    return LaplaceSeries(value, total, last, max_term, converged)


def lt_B_eta4(z: float, params: NetworkParams) -> float:
    """Closed-form transform for eta = 4 and exponential power marks.

    Summing the series with m_k = k! gives -pi lambda sqrt(zP) atan(sqrt(zP) / r0^2)
    for the exponent.
    """
    z = _check_z(z)
    if params.eta != 4.0:
        raise UnsupportedError(f"closed form requires eta = 4, got eta = {params.eta}")
    s = math.sqrt(z * params.tx_power)
    return math.exp(-math.pi * params.lambda_density * s * math.atan(s / params.r0**2))


def _mark_kernel(kind: str):
    # (1 - E[exp(-y|s|^2)]) / y, finite at y = 0
    if kind == "constant_modulus":
        return lambda y: -math.expm1(-y) / y if y > 0 else 1.0
    if kind == "gaussian_codebook":
        return lambda y: 1.0 / (1.0 + y)
    raise UnsupportedError("the quadrature transform needs a parametric symbol model, not an explicit moment list")


def lt_B_exponent_quadrature(
    z: float,
    params: NetworkParams,
    moments: SymbolMomentModel = DEFAULT_MOMENTS,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """-log L_B(z) = 2 pi lambda int_{r0}^inf (1 - E[exp(-z P r^-eta |s|^2)]) r dr.

    Integrated over w = (r0 / r)^(eta - 2) in (0, 1], which leaves a bounded,
    smooth integrand for every eta > 2.
    """
    z = _check_z(z)
    kernel = _mark_kernel(moments.kind)
    if z == 0.0 or params.lambda_density == 0.0:
        return 0.0
    eta = params.eta
    c0 = z * params.tx_power * params.r0 ** (-eta)
    p = eta / (eta - 2.0)
    f = lambda w: c0 * kernel(c0 * w**p)  # noqa: E731
    knee = c0 ** (-1.0 / p)
    points = [knee] if knee < 1.0 else None
    res = quad_estimate(f, 0.0, 1.0, spec, points)
    return 2.0 * math.pi * params.lambda_density * params.r0**2 / (eta - 2.0) * res.value


def lt_B_quadrature(
    z: float,
    params: NetworkParams,
    moments: SymbolMomentModel = DEFAULT_MOMENTS,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Laplace transform of the interference power from the PGFL integral."""
    return math.exp(-lt_B_exponent_quadrature(z, params, moments, spec))


def lt_B(
    z: float,
    params: NetworkParams,
    moments: SymbolMomentModel = DEFAULT_MOMENTS,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Most reliable available evaluation of E[exp(-z B)]."""
    if moments.kind == "explicit":
        res = lt_B_series(z, params, moments, min(DEFAULT_TRUNCATION_K, len(moments.explicit_moments)))
        if not res.converged:
            raise SeriesDivergenceError(
                f"explicit-moment series not converged at z={z:g}", res.last_term)
        return res.value
    if params.eta == 4.0 and moments.kind == "gaussian_codebook":
        return lt_B_eta4(z, params)
    return lt_B_quadrature(z, params, moments, spec)


def lt_zeta(
    z: float,
    params: NetworkParams,
    moments: SymbolMomentModel = DEFAULT_MOMENTS,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Laplace transform of the normalized interference zeta = B / (P r0^-eta)."""
    z = _check_z(z)
    return lt_B(z / params.serving_gain, params, moments, spec)
