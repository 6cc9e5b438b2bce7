import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fblnet.errors import DomainError, SeriesDivergenceError, UnsupportedError
from fblnet.interference import (
    lt_B,
    lt_B_eta4,
    lt_B_quadrature,
    lt_B_series,
    lt_zeta,
    series_coefficient,
)
from fblnet.params import (
    CONSTANT_MODULUS,
    GAUSSIAN_CODEBOOK,
    NetworkParams,
    SymbolMomentModel,
)

LAM = 1e-6
R0 = 250.0
Z_EX = 3.90625e9  # sqrt(z P) = r0^2 at P = 1
PARAMS = NetworkParams(LAM, R0, 4.0, 1.0)


def pgfl_oracle(z, lam, r0, eta, power, kind):
    """exp(-2 pi lam int_{r0}^inf (1 - E exp(-z P r^-eta |s|^2)) r dr), integrated in r at 30 digits."""
    mpmath.mp.dps = 30
    z, lam, r0, eta, power = map(mpmath.mpf, (z, lam, r0, eta, power))

    def one_minus(r):
        c = z * power * r ** (-eta)
        return -mpmath.expm1(-c) if kind == "constant_modulus" else c / (1 + c)

    knee = (z * power) ** (1 / eta)
    pts = [r0, max(r0, knee), max(r0, knee) * 10, mpmath.inf]
    integral = mpmath.quad(lambda r: one_minus(r) * r, pts)
    return float(mpmath.exp(-2 * mpmath.pi * lam * integral))


# ------------------------------------------------------------------ closed form


def test_closed_form_example_value():
    expected = math.exp(-math.pi * 1e-6 * 62500 * math.pi / 4)
    assert lt_B_eta4(Z_EX, PARAMS) == pytest.approx(expected, abs=1e-12)
    # frozen: exp(-pi^2 / 64) to 10 digits
    assert lt_B_eta4(Z_EX, PARAMS) == pytest.approx(0.8570898111, abs=1e-10)


def test_closed_form_is_exact_for_exponential_marks():
    oracle = pgfl_oracle(Z_EX, LAM, R0, 4, 1, "gaussian_codebook")
    assert lt_B_eta4(Z_EX, PARAMS) == pytest.approx(oracle, rel=1e-12)


def test_closed_form_rejects_other_eta():
    with pytest.raises(UnsupportedError):
        lt_B_eta4(1.0, NetworkParams(LAM, R0, 3.5))


def test_closed_form_limits():
    assert lt_B_eta4(0.0, PARAMS) == 1.0
    zs = np.geomspace(1e6, 1e16, 30)
    vals = [lt_B_eta4(z, PARAMS) for z in zs]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-50


# ------------------------------------------------------------------ quadrature


@pytest.mark.parametrize("kind", ["gaussian_codebook", "constant_modulus"])
@pytest.mark.parametrize("eta", [2.5, 3.0, 4.0, 5.5])
@pytest.mark.parametrize("x", [1e-2, 1.0, 30.0])
def test_quadrature_matches_pgfl_oracle(kind, eta, x):
    params = NetworkParams(LAM, R0, eta, 2.0)
    z = x * R0**eta / params.tx_power
    got = lt_B_quadrature(z, params, SymbolMomentModel(kind))
    assert got == pytest.approx(pgfl_oracle(z, LAM, R0, eta, 2.0, kind), rel=1e-8)


def test_constant_modulus_differs_from_closed_form():
    # frozen oracle value; the closed form only holds for exponential marks
    cm = lt_B_quadrature(Z_EX, PARAMS, CONSTANT_MODULUS)
    assert cm == pytest.approx(0.8443733118, abs=1e-10)
    assert abs(cm - lt_B_eta4(Z_EX, PARAMS)) > 1e-2


def test_quadrature_gaussian_matches_closed_form_over_grid():
    for x in np.logspace(-3, 3, 20):
        z = x * R0**4
        assert lt_B_quadrature(z, PARAMS, GAUSSIAN_CODEBOOK) == pytest.approx(lt_B_eta4(z, PARAMS), rel=1e-9)


# ------------------------------------------------------------------ series


def test_series_coefficient_sign_and_size():
    a1 = series_coefficient(1, PARAMS, GAUSSIAN_CODEBOOK)
    a2 = series_coefficient(2, PARAMS, GAUSSIAN_CODEBOOK)
    assert a1 < 0 < a2
    assert a1 == pytest.approx(-2 * math.pi * LAM * R0**2 / R0**4 / 2)


@pytest.mark.parametrize("x", [1e-3, 1e-2, 0.1, 0.3])
def test_series_agrees_with_closed_form_where_convergent(x):
    z = x * R0**4
    res = lt_B_series(z, PARAMS, GAUSSIAN_CODEBOOK)
    assert res.converged
    assert res.value == pytest.approx(lt_B_eta4(z, PARAMS), rel=1e-10)


def test_series_converges_slowly_at_unit_radius_with_many_terms():
    res = lt_B_series(Z_EX, PARAMS, GAUSSIAN_CODEBOOK, truncation_K=5000)
    assert res.value == pytest.approx(lt_B_eta4(Z_EX, PARAMS), rel=1e-4)


@pytest.mark.parametrize("x", [0.1, 1.0, 3.0])
def test_constant_modulus_series_matches_quadrature(x):
    z = x * R0**4
    res = lt_B_series(z, PARAMS, CONSTANT_MODULUS, truncation_K=60)
    assert res.converged
    assert res.value == pytest.approx(lt_B_quadrature(z, PARAMS, CONSTANT_MODULUS), rel=1e-8)


def test_series_divergence_diagnostic():
    with pytest.raises(SeriesDivergenceError) as info:
        lt_B_series(10 * R0**4, PARAMS, GAUSSIAN_CODEBOOK)
    assert info.value.last_term > 1.0


def test_series_unconverged_flag_when_truncated_early():
    res = lt_B_series(0.5 * R0**4, PARAMS, GAUSSIAN_CODEBOOK, truncation_K=3)
    assert not res.converged


def test_explicit_moments_reproduce_named_model():
    fact = SymbolMomentModel("explicit", tuple(float(math.factorial(k)) for k in range(1, 31)))
    z = 0.2 * R0**4
    assert lt_B(z, PARAMS, fact) == pytest.approx(lt_B_series(z, PARAMS, GAUSSIAN_CODEBOOK).value, rel=1e-14)


def test_explicit_moments_cannot_use_quadrature():
    model = SymbolMomentModel("explicit", (1.0, 2.0))
    with pytest.raises(UnsupportedError):
        lt_B_quadrature(1.0, PARAMS, model)


def test_series_rejects_bad_truncation():
    with pytest.raises(DomainError):
        lt_B_series(1.0, PARAMS, truncation_K=0)


# ------------------------------------------------------------------ dispatch and scaling


@pytest.mark.parametrize("fn", [lt_B, lt_B_quadrature, lambda z, p, m: lt_B_series(z, p, m).value])
def test_zero_argument_and_empty_network(fn):
    assert fn(0.0, PARAMS, GAUSSIAN_CODEBOOK) == 1.0
    assert fn(123.0, NetworkParams(0.0, R0), GAUSSIAN_CODEBOOK) == 1.0


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        lt_B(-1.0, PARAMS)


def test_lt_zeta_is_argument_scaling_of_lt_B():
    for x in (0.01, 1.0, 50.0):
        assert lt_zeta(x, PARAMS) == lt_B(x / PARAMS.serving_gain, PARAMS)
    assert lt_zeta(1.0, PARAMS) == pytest.approx(0.8570898111, abs=1e-10)


def test_lt_zeta_independent_of_transmit_power():
    a = lt_zeta(2.0, NetworkParams(LAM, R0, 3.0, 1.0), CONSTANT_MODULUS)
    b = lt_zeta(2.0, NetworkParams(LAM, R0, 3.0, 40.0), CONSTANT_MODULUS)
    assert a == pytest.approx(b, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=1e-4, max_value=1e3),
    st.floats(min_value=1.0001, max_value=10.0),
    st.sampled_from(["gaussian_codebook", "constant_modulus"]),
    st.sampled_from([2.5, 3.0, 4.0, 6.0]),
)
def test_every_path_in_unit_interval_and_nonincreasing(x, factor, kind, eta):
    params = NetworkParams(LAM, R0, eta)
    model = SymbolMomentModel(kind)
    z = x / params.serving_gain
    lo, hi = lt_B(z * factor, params, model), lt_B(z, params, model)
    assert 0.0 < hi <= 1.0
    assert 0.0 <= lo <= hi


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=1e-3, max_value=100.0), st.floats(min_value=1e-7, max_value=1e-5))
def test_denser_network_lowers_transform(x, lam):
    sparse, dense = NetworkParams(lam, R0), NetworkParams(2 * lam, R0)
    assert lt_zeta(x, dense) < lt_zeta(x, sparse)
