"""Immutable parameter records for the network, the code, and the simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError

LAMBDA_PER_KM2 = 1e-6
"""Conversion factor from BS/km^2 to BS/m^2."""


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x) if x > 0 else -math.inf


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class NetworkParams:
    """PPP downlink geometry and link budget, in meters and watts.

    ``lambda_density`` is in BS per square meter. The serving BS sits at the
    fixed distance ``r0``, which is also the radius of the interference
    exclusion disk.
    """

    lambda_density: float
    r0: float
    eta: float = 4.0
    tx_power: float = 1.0
    noise_power: float = 1e-10

    def __post_init__(self):
        for name in ("lambda_density", "r0", "eta", "tx_power", "noise_power"):
            _check_finite(name, getattr(self, name))
        if self.lambda_density < 0:
            raise DomainError(f"lambda_density must be >= 0, got {self.lambda_density}")
        if self.r0 <= 0:
            raise DomainError(f"r0 must be > 0, got {self.r0}")
        if self.eta <= 2:
            raise DomainError(f"eta must be > 2 for finite interference, got {self.eta}")
        if self.tx_power <= 0:
            raise DomainError(f"tx_power must be > 0, got {self.tx_power}")
        if self.noise_power <= 0:
            raise DomainError(f"noise_power must be > 0, got {self.noise_power}")

    @classmethod
    def from_gamma0(cls, gamma0: float, lambda_density: float, r0: float, eta: float = 4.0,
                    noise_power: float = 1e-10) -> "NetworkParams":
        """Build params hitting a target nominal SNR by choosing the transmit power."""
        if not gamma0 > 0:
            raise DomainError(f"gamma0 must be > 0, got {gamma0}")
        return cls(lambda_density, r0, eta, gamma0 * noise_power * r0**eta, noise_power)

    @property
    def serving_gain(self) -> float:
        """Received serving power without fading, P * r0^-eta."""
        return self.tx_power * self.r0 ** (-self.eta)

    @property
    def gamma0(self) -> float:
        return self.serving_gain / self.noise_power

    @property
    def lambda_per_km2(self) -> float:
        return self.lambda_density / LAMBDA_PER_KM2


@dataclass(frozen=True)
class SymbolMomentModel:
    """Even moments m_k = E|s|^(2k) of the per-interferer power marks.

    ``constant_modulus`` has m_k = 1, ``gaussian_codebook`` has m_k = k!
    (|s|^2 unit-mean exponential). The latter is also the mark law of
    Rayleigh-faded interferers sending unit-modulus symbols, and it is the
    model under which the eta = 4 arctan closed form holds; it is therefore
    the default. ``explicit`` carries a user-supplied finite sequence
    starting at m_1 = 1; it can only be used by the power series.
    """

    kind: str = "gaussian_codebook"
    explicit_moments: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("constant_modulus", "gaussian_codebook", "explicit"):
            raise DomainError(f"unknown symbol model {self.kind!r}")
        if self.kind == "explicit":
            if not self.explicit_moments:
                raise DomainError("explicit symbol model needs explicit_moments")
            object.__setattr__(self, "explicit_moments", tuple(float(m) for m in self.explicit_moments))
            if abs(self.explicit_moments[0] - 1.0) > 1e-12:
                raise DomainError(f"m_1 must equal 1 (unit-power symbols), got {self.explicit_moments[0]}")
            if any(not (m > 0 and math.isfinite(m)) for m in self.explicit_moments):
                raise DomainError("all symbol moments must be positive and finite")
        elif self.explicit_moments is not None:
            raise DomainError(f"explicit_moments given for symbol model {self.kind!r}")

    def log_moment(self, k: int) -> float:
        if k < 1:
            raise DomainError(f"moment index must be >= 1, got {k}")
        if self.kind == "constant_modulus":
            return 0.0
        if self.kind == "gaussian_codebook":
            return math.lgamma(k + 1)
        if k > len(self.explicit_moments):
            raise DomainError(f"explicit model only defines {len(self.explicit_moments)} moments, m_{k} requested")
        return math.log(self.explicit_moments[k - 1])

    def moment(self, k: int) -> float:
        return math.exp(self.log_moment(k))

    def mark_transform(self, c: float) -> float:
        """E[exp(-c |s|^2)], available for the two parametric models."""
        if self.kind == "constant_modulus":
            return math.exp(-c)
        if self.kind == "gaussian_codebook":
            return 1.0 / (1.0 + c)
        raise DomainError("an explicit moment sequence does not determine E[exp(-c|s|^2)]")


CONSTANT_MODULUS = SymbolMomentModel("constant_modulus")
GAUSSIAN_CODEBOOK = SymbolMomentModel("gaussian_codebook")
DEFAULT_MOMENTS = GAUSSIAN_CODEBOOK


@dataclass(frozen=True)
class FblParams:
    blocklength_n: int
    epsilon: float

    def __post_init__(self):
        n = self.blocklength_n
        if isinstance(n, float):
            if not n.is_integer():
                raise DomainError(f"blocklength_n must be an integer, got {n}")
            object.__setattr__(self, "blocklength_n", int(n))
        if self.blocklength_n < 1:
            raise DomainError(f"blocklength_n must be >= 1, got {self.blocklength_n}")
        if not (0.0 < self.epsilon < 0.5):
            raise DomainError(f"epsilon must satisfy 0 < epsilon < 0.5, got {self.epsilon}")


@dataclass(frozen=True)
class SinrThreshold:
    """Linear SINR threshold T; the target rate is log2(1 + T)."""

    T: float

    def __post_init__(self):
        if not (self.T >= 0 and math.isfinite(self.T)):
            raise DomainError(f"SINR threshold must be finite and >= 0, got {self.T}")

    @classmethod
    def from_db(cls, t_db: float) -> "SinrThreshold":
        return cls(db_to_linear(t_db))

    @classmethod
    def from_rate(cls, rate: float) -> "SinrThreshold":
        if rate < 0:
            raise DomainError(f"target rate must be >= 0, got {rate}")
        return cls(2.0**rate - 1.0)

    @property
    def rate(self) -> float:
        return math.log2(1.0 + self.T)


@dataclass(frozen=True)
class RateResult:
    """Coding rate split into its capacity and finite-blocklength penalty terms."""

    capacity_term: float
    penalty_term: float
    clamped: bool = field(init=False)
    rate: float = field(init=False)

    def __post_init__(self):
        raw = self.capacity_term - self.penalty_term
        object.__setattr__(self, "clamped", raw < 0)
        object.__setattr__(self, "rate", max(0.0, raw))

    @property
    def unclamped_rate(self) -> float:
        return self.capacity_term - self.penalty_term


@dataclass(frozen=True)
class MonteCarloConfig:
    """Monte Carlo settings.

    ``r_max`` is the outer radius of the simulated annulus; ``None`` selects
    :func:`fblnet.sim.default_r_max` for the network at hand.
    """

    num_samples: int = 100_000
    seed: int = 0
    workers: int = 1
    r_max: float | None = None
    tail_std_tol: float = 1e-4

    def __post_init__(self):
        if int(self.num_samples) != self.num_samples or self.num_samples < 1:
            raise DomainError(f"num_samples must be a positive integer, got {self.num_samples}")
        object.__setattr__(self, "num_samples", int(self.num_samples))
        if not (0 <= int(self.seed) < 2**64) or int(self.seed) != self.seed:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))
        if int(self.workers) != self.workers or self.workers < 1:
            raise DomainError(f"workers must be a positive integer, got {self.workers}")
        if self.r_max is not None and not (self.r_max > 0 and math.isfinite(self.r_max)):
            raise DomainError(f"r_max must be positive and finite, got {self.r_max}")
        if not self.tail_std_tol > 0:
            raise DomainError(f"tail_std_tol must be > 0, got {self.tail_std_tol}")


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    num_samples: int

    def within(self, reference: float, k: float = 3.0) -> bool:
        """True when ``reference`` lies inside value +- k standard errors."""
        return abs(self.value - reference) <= k * self.std_error

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "Estimate":
        x = np.asarray(samples, dtype=float)
        n = x.size
        if n == 0:
            raise DomainError("cannot form an estimate from zero samples")
        mean = float(x.mean())
        se = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(mean, se, n)

    @classmethod
    def from_indicator(cls, hits: int, n: int) -> "Estimate":
        p = hits / n
        return cls(p, math.sqrt(p * (1.0 - p) / n), n)
