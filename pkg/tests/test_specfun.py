import numpy as np
import pytest

from feshpulse import specfun
from feshpulse.errors import DomainError, ErfiOverflowError, UnderflowWarning


# -----------------------------------------------------------------------------
# Airy function
# -----------------------------------------------------------------------------


def test_airy_at_zero():
    assert specfun.airy_ai(0.0) == pytest.approx(0.3550280538878172,
                                                 rel=1e-14)


def test_airy_first_zero():
    assert abs(specfun.airy_ai(-2.338107410459767)) < 1e-10


def test_airy_scalar_and_array():
    assert isinstance(specfun.airy_ai(1.0), float)
    result = specfun.airy_ai([0.0, 1.0])
    assert isinstance(result, np.ndarray)
    assert result.shape == (2,)


def test_airy_decreasing_on_positive_axis():
    x = np.linspace(0.1, 20, 200)
    ai = specfun.airy_ai(x)
    assert np.all(ai > 0)
    assert np.all(np.diff(ai) < 0)


def test_airy_differential_equation():
    rng = np.random.RandomState(0)
    x = rng.uniform(-10, 5, 50)
    h = 1e-3
    second = (specfun.airy_ai(x + h) - 2 * specfun.airy_ai(x) +
              specfun.airy_ai(x - h)) / h ** 2
    rhs = x * specfun.airy_ai(x)
    scale = np.maximum(np.abs(rhs), 0.1)
    assert np.all(np.abs(second - rhs) / scale < 1e-5)


def test_airy_underflow_returns_zero_with_warning():
    with pytest.warns(UnderflowWarning):
        assert specfun.airy_ai(200.0) == 0.0


def test_airy_rejects_non_finite():
    with pytest.raises(DomainError):
        specfun.airy_ai(np.nan)
    with pytest.raises(DomainError):
        specfun.airy_ai([0.0, np.inf])


def test_airy_rejects_huge_argument():
    with pytest.raises(DomainError):
        specfun.airy_ai(-2e4)


# -----------------------------------------------------------------------------
# Error functions
# -----------------------------------------------------------------------------


def test_erf_values():
    assert specfun.erf(0.0) == 0.0
    assert specfun.erf(1.0) == pytest.approx(0.8427007929497149, rel=1e-12)


def test_erfi_value():
    assert specfun.erfi(1.0) == pytest.approx(1.6504257587975429, rel=1e-12)


def test_erf_and_erfi_are_odd():
    x = np.linspace(-5, 5, 41)
    assert np.allclose(specfun.erf(x) + specfun.erf(-x), 0, atol=1e-15)
    assert np.all(np.abs(specfun.erfi(x) + specfun.erfi(-x)) <=
                  1e-14 * np.abs(specfun.erfi(x)))


def test_erf_derivative():
    x = np.linspace(-3, 3, 25)
    h = 1e-5
    numeric = (specfun.erf(x + h) - specfun.erf(x - h)) / (2 * h)
    exact = 2 / np.sqrt(np.pi) * np.exp(-x ** 2)
    assert np.allclose(numeric, exact, rtol=1e-6)


def test_erfi_overflow_carries_scaled_value():
    with pytest.raises(ErfiOverflowError) as excinfo:
        specfun.erfi(30.0)
    assert excinfo.value.scaled == pytest.approx(specfun.erfi_scaled(30.0))
    # exp(-x**2)*erfi(x) ~ 1/(sqrt(pi)*x) for large x
    assert excinfo.value.scaled == pytest.approx(1 / (np.sqrt(np.pi) * 30),
                                                 rel=1e-3)


def test_erfi_overflow_is_an_overflow_error():
    with pytest.raises(OverflowError):
        specfun.erfi([1.0, -27.0])


def test_erfi_scaled_matches_erfi():
    x = np.array([0.5, 2.0, 5.0])
    assert np.allclose(specfun.erfi_scaled(x),
                       np.exp(-x ** 2) * specfun.erfi(x), rtol=1e-12)


# -----------------------------------------------------------------------------
# sinc and principal-value reciprocal
# -----------------------------------------------------------------------------


def test_sinc_values():
    assert specfun.sinc(0.0) == 1.0
    assert abs(specfun.sinc(np.pi)) < 1e-15
    assert specfun.sinc(np.pi / 2) == pytest.approx(0.6366197723675814,
                                                    rel=1e-15)


def test_sinc_even_and_bounded():
    x = np.linspace(-50, 50, 1001)
    assert np.array_equal(specfun.sinc(x), specfun.sinc(-x))
    assert np.all(np.abs(specfun.sinc(x)) <= 1)


def test_sinc_zeros():
    k = np.arange(1, 20)
    assert np.all(np.abs(specfun.sinc(k * np.pi)) < 1e-12)


def test_pv_reciprocal():
    assert specfun.pv_reciprocal(0.0) == 0.0
    assert np.array_equal(specfun.pv_reciprocal([-2.0, 0.0, 4.0]),
                          [-0.5, 0.0, 0.25])
