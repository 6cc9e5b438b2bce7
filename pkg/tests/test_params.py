import math

import pytest
from hypothesis import given, strategies as st

from fblnet.errors import DomainError
from fblnet.params import (
    DEFAULT_MOMENTS,
    GAUSSIAN_CODEBOOK,
    Estimate,
    FblParams,
    MonteCarloConfig,
    NetworkParams,
    RateResult,
    SinrThreshold,
    SymbolMomentModel,
    db_to_linear,
    linear_to_db,
)


def test_network_derived_quantities():
    p = NetworkParams(1e-6, 250.0, 4.0, tx_power=2.0, noise_power=1e-10)
    assert p.serving_gain == pytest.approx(2.0 * 250.0**-4)
    assert p.gamma0 == pytest.approx(p.serving_gain / 1e-10)
    assert p.lambda_per_km2 == pytest.approx(1.0)


@given(st.floats(min_value=-30, max_value=60), st.floats(min_value=10, max_value=1000))
def test_from_gamma0_round_trip(gamma0_db, r0):
    g = db_to_linear(gamma0_db)
    assert NetworkParams.from_gamma0(g, 1e-6, r0).gamma0 == pytest.approx(g, rel=1e-12)


@pytest.mark.parametrize("kwargs", [
    {"lambda_density": -1e-6}, {"r0": 0.0}, {"eta": 2.0}, {"tx_power": 0.0},
    {"noise_power": -1.0}, {"r0": math.inf},
])
def test_network_invariants(kwargs):
    base = dict(lambda_density=1e-6, r0=250.0)
    with pytest.raises(DomainError):
        NetworkParams(**{**base, **kwargs})


def test_db_helpers():
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert linear_to_db(100.0) == pytest.approx(20.0)


@pytest.mark.parametrize("n, eps", [(0, 1e-2), (128, 0.0), (128, 0.5), (128, 0.7), (12.5, 1e-2)])
def test_fbl_invariants(n, eps):
    with pytest.raises(DomainError):
        FblParams(n, eps)


def test_fbl_error_message_cites_bound():
    with pytest.raises(DomainError, match=r"0 < epsilon < 0\.5"):
        FblParams(128, 0.7)


def test_threshold_conversions():
    assert SinrThreshold.from_db(0.0).T == pytest.approx(1.0)
    assert SinrThreshold.from_rate(1.0).T == pytest.approx(1.0)
    assert SinrThreshold(3.0).rate == pytest.approx(2.0)
    with pytest.raises(DomainError):
        SinrThreshold(-1.0)
    with pytest.raises(DomainError):
        SinrThreshold.from_rate(-0.5)


def test_moment_models():
    assert DEFAULT_MOMENTS == GAUSSIAN_CODEBOOK == SymbolMomentModel()
    assert SymbolMomentModel("constant_modulus").moment(7) == 1.0
    assert GAUSSIAN_CODEBOOK.moment(5) == pytest.approx(120.0)
    assert GAUSSIAN_CODEBOOK.log_moment(400) == pytest.approx(math.lgamma(401))
    explicit = SymbolMomentModel("explicit", (1.0, 2.0, 6.0))
    assert explicit.moment(3) == 6.0
    with pytest.raises(DomainError):
        explicit.moment(4)


@pytest.mark.parametrize("kind, moments", [
    ("bogus", None), ("explicit", None), ("explicit", (2.0,)), ("explicit", (1.0, -1.0)),
    ("constant_modulus", (1.0,)),
])
def test_moment_model_invariants(kind, moments):
    with pytest.raises(DomainError):
        SymbolMomentModel(kind, moments)


def test_rate_result_clamp():
    r = RateResult(0.5, 0.8)
    assert r.rate == 0.0 and r.clamped
    assert r.unclamped_rate == pytest.approx(-0.3)
    assert not RateResult(1.0, 0.2).clamped


@pytest.mark.parametrize("kwargs", [
    {"num_samples": 0}, {"seed": -1}, {"seed": 2**64}, {"workers": 0}, {"r_max": -5.0},
    {"tail_std_tol": 0.0},
])
def test_mc_config_invariants(kwargs):
    with pytest.raises(DomainError):
        MonteCarloConfig(**kwargs)


def test_estimates():
    e = Estimate.from_samples([1.0, 2.0, 3.0])
    assert e.value == 2.0 and e.std_error == pytest.approx(1.0 / math.sqrt(3))
    assert e.within(2.5) and not e.within(5.0)
    b = Estimate.from_indicator(25, 100)
    assert b.value == 0.25 and b.std_error == pytest.approx(math.sqrt(0.25 * 0.75 / 100))
    with pytest.raises(DomainError):
        Estimate.from_samples([])
