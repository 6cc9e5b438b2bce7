"""Monte Carlo ground truth for the analytic expressions.

All estimators share one sampled population per (network geometry, seed,
sample count): the normalized interference zeta of every sample and the
serving-link fading |h0|^2. SINR, rate and outage estimates are reductions
over that population.

The simulated annulus stops at r_max. The interference beyond r_max is
replaced by its mean, which is exact to first order; the residual error is
second order in the neglected tail's standard deviation, which
:func:`default_r_max` keeps below ``tail_std_tol`` in zeta units.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .. import _accel
from ..errors import UnsupportedError
from ..fbl import coding_rate_unclamped, LOG2E, LOG2E_SQ
from ..params import (
    DEFAULT_MOMENTS,
    Estimate,
    FblParams,
    MonteCarloConfig,
    NetworkParams,
    SinrThreshold,
    SymbolMomentModel,
)
from ._kernels import KERNELS
from ._rng import TAG_GEOMETRY, TAG_MARK, sample_key_np, uniform_np

MIN_R_MAX_FACTOR = 4.0


@dataclass(frozen=True)
class SampleStream:
    """Random stream of one Monte Carlo sample, addressed by (seed, index)."""

    seed: int
    index: int

    @property
    def key(self) -> np.ndarray:
        return sample_key_np(self.seed, np.array([self.index], dtype=np.uint64))

    def uniforms(self, tag, start: int, count: int) -> np.ndarray:
        counters = np.arange(start, start + count, dtype=np.uint64)
        return uniform_np(np.repeat(self.key, count), tag, counters)


@dataclass(frozen=True)
class GeometrySample:
    """Interferer distances of one PPP realization, in arrival order (ascending)."""

    distances: np.ndarray

    def __len__(self) -> int:
        return len(self.distances)


def _check_moments(moments: SymbolMomentModel) -> bool:
    if moments.kind == "explicit":
        raise UnsupportedError("Monte Carlo needs a samplable symbol model, not an explicit moment list")
    return moments.kind == "gaussian_codebook"


def tail_zeta_mean(params: NetworkParams, r_max: float) -> float:
    """Mean normalized interference from beyond r_max (unit-mean marks)."""
    eta = params.eta
    return 2.0 * math.pi * params.lambda_density * params.r0**eta * r_max ** (2.0 - eta) / (eta - 2.0)


def tail_zeta_std(params: NetworkParams, moments: SymbolMomentModel, r_max: float) -> float:
    eta = params.eta
    m2 = moments.moment(2)
    var = 2.0 * math.pi * params.lambda_density * m2 * params.r0 ** (2 * eta) * r_max ** (2.0 - 2.0 * eta) / (2.0 * eta - 2.0)
    return math.sqrt(var)


def default_r_max(params: NetworkParams, tail_std_tol: float = 1e-4) -> float:
    """Smallest annulus radius whose neglected tail has zeta-std below ``tail_std_tol``.

    Sized for exponential marks (E|s|^4 = 2), which covers constant modulus
    too. Never less than ``MIN_R_MAX_FACTOR * r0``.
    """
    floor = MIN_R_MAX_FACTOR * params.r0
    if params.lambda_density == 0.0:
        return floor
    eta = params.eta
    scale = params.r0**eta * math.sqrt(4.0 * math.pi * params.lambda_density / (2.0 * eta - 2.0))
    return max(floor, (scale / tail_std_tol) ** (1.0 / (eta - 1.0)))


def resolve_r_max(params: NetworkParams, cfg: MonteCarloConfig) -> float:
    r_max = cfg.r_max if cfg.r_max is not None else default_r_max(params, cfg.tail_std_tol)
    if not r_max > params.r0:
        raise ValueError(f"r_max ({r_max}) must exceed r0 ({params.r0})")
    return r_max


def sample_ppp_annulus(params: NetworkParams, cfg: MonteCarloConfig, stream: SampleStream) -> GeometrySample:
    """Interferer distances in (r0, r_max] for one sample.

    Points are generated as successive arrivals, so the count is Poisson with
    mean lambda pi (r_max^2 - r0^2) and, given the count, the unordered radii are
    i.i.d. with density 2r / (r_max^2 - r0^2).
    """
    r_max = resolve_r_max(params, cfg)
    lam = params.lambda_density
    if lam == 0.0:
        return GeometrySample(np.empty(0))
    r0_sq, rmax_sq = params.r0**2, r_max**2
    expected = lam * math.pi * (rmax_sq - r0_sq)
    chunk = max(16, int(expected + 6.0 * math.sqrt(expected) + 16))
    arrivals = np.empty(0)
    last = 0.0
    start = 0
    while True:
        u = stream.uniforms(TAG_GEOMETRY, start, chunk)
        block = last + np.cumsum(-np.log(u))
        arrivals = np.concatenate([arrivals, block])
        last = block[-1]
        start += chunk
        if r0_sq + last / (lam * math.pi) > rmax_sq:
            break
    r_sq = r0_sq + arrivals / (lam * math.pi)
    return GeometrySample(np.sqrt(r_sq[r_sq <= rmax_sq]))


def interference_power(geom: GeometrySample, params: NetworkParams,
                       moments: SymbolMomentModel = DEFAULT_MOMENTS,
                       stream: SampleStream | None = None) -> float:
    """Aggregate interference power sum_i P r_i^-eta |s_i|^2 over one geometry.

    Exponential marks are drawn from ``stream``; constant-modulus marks are 1.
    """
    exp_marks = _check_moments(moments)
    if len(geom) == 0:
        return 0.0
    gains = params.tx_power * geom.distances ** (-params.eta)
    if exp_marks:
        if stream is None:
            raise ValueError("a SampleStream is required to draw exponential power marks")
        gains = gains * -np.log(stream.uniforms(TAG_MARK, 0, len(geom)))
    return float(np.sum(gains))


@dataclass(frozen=True)
class ZetaSamples:
    """Per-sample normalized interference (tail mean included), point counts and |h0|^2."""

    zeta: np.ndarray
    counts: np.ndarray
    fading: np.ndarray
    r_max: float
    tail_mean: float


def _run_kernel(seed, n, workers, kernel_args):
    kernel = KERNELS[_accel.get_backend()]
    if workers == 1 or n < 2 * workers:
        return kernel(seed, 0, n, *kernel_args)
    bounds = np.linspace(0, n, workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda ab: kernel(seed, int(ab[0]), int(ab[1]), *kernel_args),
                              zip(bounds[:-1], bounds[1:])))
    return tuple(np.concatenate(arrs) for arrs in zip(*parts))


@lru_cache(maxsize=8)
def _zeta_population(seed, n, workers, lam, r0, eta, exp_marks, r_max, backend):
    inv_density = 1.0 / (lam * math.pi) if lam > 0 else 0.0
    zeta, counts, fade = _run_kernel(seed, n, workers, (inv_density, r0 * r0, r_max * r_max, 0.5 * eta, exp_marks))
    for a in (zeta, counts, fade):
        a.setflags(write=False)
    return zeta, counts, fade


def simulate_zeta(params: NetworkParams, moments: SymbolMomentModel, cfg: MonteCarloConfig) -> ZetaSamples:
    """Sample the normalized interference population for ``cfg``.

    zeta = B / (P r0^-eta) does not depend on P or N0, so populations are
    cached and shared across SNR sweeps.
    """
    exp_marks = _check_moments(moments)
    r_max = resolve_r_max(params, cfg)
    zeta, counts, fade = _zeta_population(cfg.seed, cfg.num_samples, cfg.workers, params.lambda_density,
                                          params.r0, params.eta, exp_marks, r_max, _accel.get_backend())
    tail = tail_zeta_mean(params, r_max) if params.lambda_density > 0 else 0.0
    return ZetaSamples(zeta + tail if tail else zeta, counts, fade, r_max, tail)


def mc_sinr(params: NetworkParams, moments: SymbolMomentModel, cfg: MonteCarloConfig) -> np.ndarray:
    """Per-sample SINR |h0|^2 / (1/gamma0 + zeta)."""
    pop = simulate_zeta(params, moments, cfg)
    return pop.fading / (1.0 / params.gamma0 + pop.zeta)


def mc_laplace_B_grid(zs: Sequence[float], params: NetworkParams,
                      moments: SymbolMomentModel = DEFAULT_MOMENTS,
                      cfg: MonteCarloConfig = MonteCarloConfig()) -> list[Estimate]:
    """Sample means of exp(-z B) for several z over one shared population."""
    pop = simulate_zeta(params, moments, cfg)
    b = params.serving_gain * pop.zeta
    out = []
    for z in zs:
        if z < 0:
            raise ValueError(f"Laplace argument must be >= 0, got {z}")
        out.append(Estimate.from_samples(np.exp(-float(z) * b)))
    return out


def mc_laplace_B(z: float, params: NetworkParams, moments: SymbolMomentModel = DEFAULT_MOMENTS,
                 cfg: MonteCarloConfig = MonteCarloConfig()) -> Estimate:
    return mc_laplace_B_grid([z], params, moments, cfg)[0]


def mc_capacity(params: NetworkParams, moments: SymbolMomentModel = DEFAULT_MOMENTS,
                cfg: MonteCarloConfig = MonteCarloConfig()) -> Estimate:
    """Monte Carlo E[log2(1 + gamma)]."""
    return Estimate.from_samples(np.log1p(mc_sinr(params, moments, cfg)) * LOG2E)


def mc_dispersion(params: NetworkParams, moments: SymbolMomentModel = DEFAULT_MOMENTS,
                  cfg: MonteCarloConfig = MonteCarloConfig()) -> Estimate:
    """Monte Carlo E[V(gamma)]."""
    g = mc_sinr(params, moments, cfg)
    return Estimate.from_samples(0.5 * LOG2E_SQ * g * (g + 2.0) / (g + 1.0) ** 2)


def mc_avg_coding_rate(params: NetworkParams, fbl: FblParams, moments: SymbolMomentModel = DEFAULT_MOMENTS,
                       cfg: MonteCarloConfig = MonteCarloConfig()) -> Estimate:
    """Sample mean of the per-realization coding rate, clamped at zero."""
    rate = coding_rate_unclamped(mc_sinr(params, moments, cfg), fbl)
    return Estimate.from_samples(np.maximum(rate, 0.0))


def mc_outage(params: NetworkParams, thr: SinrThreshold, fbl: FblParams,
              moments: SymbolMomentModel = DEFAULT_MOMENTS,
              cfg: MonteCarloConfig = MonteCarloConfig()) -> Estimate:
    """Fraction of samples whose unclamped coding rate falls below log2(1 + T)."""
    rate = coding_rate_unclamped(mc_sinr(params, moments, cfg), fbl)
    return Estimate.from_indicator(int(np.count_nonzero(rate < thr.rate)), rate.size)


def mc_outage_ibl(params: NetworkParams, thr: SinrThreshold, moments: SymbolMomentModel = DEFAULT_MOMENTS,
                  cfg: MonteCarloConfig = MonteCarloConfig()) -> Estimate:
    """Fraction of samples with SINR below T."""
    g = mc_sinr(params, moments, cfg)
    return Estimate.from_indicator(int(np.count_nonzero(g < thr.T)), g.size)
