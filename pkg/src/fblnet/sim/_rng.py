"""Counter-based uniform draws keyed by (seed, sample index, stream tag, counter).

Every draw is a pure function of its coordinates, so a sample's randomness
does not depend on which worker produced it or in what order. The mixer is
the SplitMix64 finalizer applied to a Weyl sequence started at a per-sample
key. Scalar versions are numba-compiled; the ``*_np`` versions are their
array twins and produce identical bits.
"""

from __future__ import annotations

import numpy as np

from .._accel import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_S48 = np.uint64(48)
_ONE = np.uint64(1)
_SEED_SALT = np.uint64(0x5851F42D4C957F2D)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53

TAG_GEOMETRY = np.uint64(1)
TAG_MARK = np.uint64(2)
TAG_FADING = np.uint64(3)


@njit(cache=True, nogil=True)
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def sample_key(seed, index):
    return mix64(mix64(np.uint64(seed) ^ _SEED_SALT) + (np.uint64(index) + _ONE) * GOLDEN)


@njit(cache=True, nogil=True)
def uniform(key, tag, counter):
    """Uniform in (0, 1] for draw ``counter`` of stream ``tag``."""
    c = (tag << _S48) + np.uint64(counter) + _ONE
    x = mix64(key + c * GOLDEN)
    return (np.float64(x >> _S11) + 1.0) * _INV53


def mix64_np(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def sample_key_np(seed: int, index: np.ndarray) -> np.ndarray:
    index = np.asarray(index, dtype=np.uint64)
    base = mix64_np(np.asarray(np.uint64(seed) ^ _SEED_SALT, dtype=np.uint64))
    with np.errstate(over="ignore"):
        return mix64_np(base + (index + _ONE) * GOLDEN)


def uniform_np(key: np.ndarray, tag: np.uint64, counter: int | np.ndarray) -> np.ndarray:
    c = (tag << _S48) + np.asarray(counter, dtype=np.uint64) + _ONE
    with np.errstate(over="ignore"):
        x = mix64_np(key + c * GOLDEN)
    return ((x >> _S11).astype(np.float64) + 1.0) * _INV53
