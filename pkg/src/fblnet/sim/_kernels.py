"""Shot-noise sampling kernels.

Each sample draws the PPP in the annulus (r0, r_max] as the arrival process
of a unit-rate Poisson process mapped through pi * lambda * (r^2 - r0^2), so
the point count is Poisson and no count has to be drawn up front. For every
point the normalized path gain (r / r0)^-eta, optionally scaled by an
exponential power mark, is accumulated in arrival order.

``shot_noise_numba`` and ``shot_noise_numpy`` compute the same thing; the
numpy version advances all samples in lockstep, one arrival per pass.
"""

from __future__ import annotations

import math

import numpy as np

from .._accel import njit
from ._rng import (
    TAG_FADING,
    TAG_GEOMETRY,
    TAG_MARK,
    sample_key,
    sample_key_np,
    uniform,
    uniform_np,
)


@njit(cache=True, nogil=True)
def _shot_noise_nb(seed, start, inv_density, r0_sq, rmax_sq, half_eta, exp_marks,
                   zeta_out, count_out, fade_out):
    for j in range(zeta_out.shape[0]):
        key = sample_key(seed, start + j)
        acc = 0.0
        k = 0
        if inv_density > 0.0:
            arrival = 0.0
            while True:
                arrival -= math.log(uniform(key, TAG_GEOMETRY, k))
                r_sq = r0_sq + arrival * inv_density
                if r_sq > rmax_sq:
                    break
                x = r_sq / r0_sq
                if half_eta == 2.0:
                    g = 1.0 / (x * x)
                else:
                    g = math.exp(-half_eta * math.log(x))
                if exp_marks:
                    g *= -math.log(uniform(key, TAG_MARK, k))
                acc += g
                k += 1
        zeta_out[j] = acc
        count_out[j] = k
        fade_out[j] = -math.log(uniform(key, TAG_FADING, 0))


def shot_noise_numba(seed, start, stop, inv_density, r0_sq, rmax_sq, half_eta, exp_marks):
    n = stop - start
    zeta = np.empty(n)
    counts = np.empty(n, dtype=np.int64)
    fade = np.empty(n)
    _shot_noise_nb(np.uint64(seed), start, inv_density, r0_sq, rmax_sq, half_eta, exp_marks, zeta, counts, fade)
    return zeta, counts, fade


def shot_noise_numpy(seed, start, stop, inv_density, r0_sq, rmax_sq, half_eta, exp_marks):
    n = stop - start
    keys = sample_key_np(seed, np.arange(start, stop, dtype=np.uint64))
    zeta = np.zeros(n)
    counts = np.zeros(n, dtype=np.int64)
    fade = -np.log(uniform_np(keys, TAG_FADING, 0))
    if inv_density <= 0.0:
        return zeta, counts, fade

    arrival = np.zeros(n)
    active = np.arange(n)
    k = 0
    while active.size:
        a = arrival[active] - np.log(uniform_np(keys[active], TAG_GEOMETRY, k))
        r_sq = r0_sq + a * inv_density
        inside = r_sq <= rmax_sq
        active = active[inside]
        arrival[active] = a[inside]
        x = r_sq[inside] / r0_sq
        g = 1.0 / (x * x) if half_eta == 2.0 else np.exp(-half_eta * np.log(x))
        if exp_marks:
            g *= -np.log(uniform_np(keys[active], TAG_MARK, k))
        zeta[active] += g
        counts[active] += 1
        k += 1
    return zeta, counts, fade


KERNELS = {"numba": shot_noise_numba, "numpy": shot_noise_numpy}
