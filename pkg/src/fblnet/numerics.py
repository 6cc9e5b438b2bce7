"""Gaussian tail functions and adaptive quadrature."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate as _sci_integrate
from scipy.special import erfc

from .errors import ConvergenceError, DomainError

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError(f"quadrature tolerances must be > 0, got rel={self.rel_tol}, abs={self.abs_tol}")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise DomainError(f"max_subdivisions must be a positive integer, got {self.max_subdivisions}")


DEFAULT_QUADRATURE = QuadratureSpec()


def q_func(x):
    """Gaussian tail probability Q(x) = P(Z > x).

    Accepts scalars or arrays. Evaluated through ``erfc`` so the upper tail
    keeps full relative precision instead of cancelling against 1.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("q_func requires finite input")
    out = 0.5 * erfc(arr / _SQRT2)
    return float(out) if out.ndim == 0 else out


# Acklam's rational approximation to the normal quantile, used as a starting point.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _upper_quantile_guess(p: float) -> float:
    # Q^{-1}(p) for p <= 0.5, i.e. minus the lower normal quantile
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return -num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return -num / den


def q_func_inv(p: float) -> float:
    """Inverse Gaussian tail, x such that Q(x) = p, for 0 < p < 1.

    A rational starting guess is polished by Newton steps on log Q(x),
    falling back to bisection whenever a step leaves the current bracket.
    """
    p = float(p)
    if not (0.0 < p < 1.0):
        raise DomainError(f"q_func_inv requires 0 < p < 1, got {p!r}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -q_func_inv(1.0 - p)

    log_p = math.log(p)
    x = _upper_quantile_guess(p)
    lo, hi = 0.0, 40.0
    for _ in range(100):
        qx = 0.5 * math.erfc(x / _SQRT2)
        g = math.log(qx) - log_p
        # g is decreasing in x
        if g > 0.0:
            lo = max(lo, x)
        else:
            hi = min(hi, x)
        dg = -math.exp(-0.5 * x * x) / _SQRT2PI / qx
        x_new = x - g / dg
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 4e-16 * max(1.0, abs(x)):
            return x_new
        x = x_new
    return x


class QuadResult(NamedTuple):
    value: float
    error: float
    evaluations: int


def quad_estimate(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    points: Sequence[float] | None = None,
) -> QuadResult:
    """Adaptive Gauss-Kronrod estimate of the integral of ``f`` with its error bound.

    An infinite ``upper`` is handled by mapping ``x = lower + (1 - t) / t`` onto
    ``t`` in (0, 1].
    """
    lower = float(lower)
    upper = float(upper)
    if math.isnan(lower) or math.isnan(upper) or math.isinf(lower):
        raise DomainError(f"invalid integration limits [{lower}, {upper}]")
    if upper == lower:
        return QuadResult(0.0, 0.0, 0)
    if upper < lower:
        res = quad_estimate(f, upper, lower, spec, points)
        return QuadResult(-res.value, res.error, res.evaluations)

    if math.isinf(upper):
        g = lambda t: f(lower + (1.0 - t) / t) / (t * t)  # noqa: E731
        a, b = 0.0, 1.0
        if points:
            points = [1.0 / (1.0 + (p - lower)) for p in points if p > lower]
    else:
        g, a, b = f, lower, upper

    kwargs = {}
    if points:
        inner = sorted({float(p) for p in points if a < p < b})
        if inner:
            kwargs["points"] = inner

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _sci_integrate.IntegrationWarning)
        value, err, info, *_ = _sci_integrate.quad(
            g, a, b,
            epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=int(spec.max_subdivisions),
            full_output=1, **kwargs,
        )
    bound = max(spec.abs_tol, spec.rel_tol * abs(value))
    if not math.isfinite(value) or err > bound:
        raise ConvergenceError(
            f"quadrature on [{lower}, {upper}] did not converge within {spec.max_subdivisions} subdivisions",
            value, err,
        )
    return QuadResult(float(value), float(err), int(info["neval"]))


def integrate(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    points: Sequence[float] | None = None,
) -> float:
    """Integrate ``f`` over [lower, upper]; ``upper`` may be ``math.inf``.

    Raises :class:`ConvergenceError` when the reported error exceeds
    ``max(abs_tol, rel_tol * |result|)``.
    """
    return quad_estimate(f, lower, upper, spec, points).value
