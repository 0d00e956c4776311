import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborpr.signals import PHI, MultiSignal, Signal, gaussian, hermite_function
from gaborpr.transforms import (
    Measurements,
    bargmann,
    ff_extension,
    gabor,
    gauss_integral,
    hat_h,
    inner_product,
    magnitude_samples,
    norm,
)

from conftest import signals

# dense trapezoid rule; integrands decay like exp(-pi s^2) so it is spectrally accurate
S = np.linspace(-12, 12, 24001)
DS = S[1] - S[0]


def quad(values):
    return np.sum(values, axis=-1) * DS


def gabor_quad(f, t, w):
    return quad(f(S) * np.exp(-np.pi * (S - t) ** 2 - 2j * np.pi * w * S))


def test_gaussian_integral_closed_form():
    val = gauss_integral(PHI, 0.5 + 0.25j, 0.3 - 0.2j, 0.1)
    a = 1.5 + 0.25j
    expect = np.exp(np.pi * (0.3 - 0.2j) ** 2 / a + 0.1) / np.sqrt(a)
    assert abs(val - expect) < 1e-14


def test_divergent_integral_rejected():
    with pytest.raises(ValueError, match="divergent"):
        gauss_integral(PHI, -1.5, 0.0)


@given(signals(), st.floats(-2.5, 2.5), st.floats(-2.5, 2.5))
@settings(max_examples=30, deadline=None)
def test_gabor_matches_quadrature(f, t, w):
    v = gabor(f, t, w)
    q = gabor_quad(f, t, w)
    assert abs(v - q) <= 1e-9 * (1 + abs(q))


def test_gabor_of_window():
    # V phi(t, w) = 2^{-1/2} exp(-pi t^2 / 2 - pi w^2 / 2 - pi i t w)
    t, w = 0.7, -1.1
    expect = 2**-0.5 * np.exp(-np.pi * (t * t + w * w) / 2 - 1j * np.pi * t * w)
    assert abs(gabor(PHI, t, w) - expect) < 1e-14


@given(signals(), st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=40, deadline=None)
def test_gabor_hat_relation(f, t, w):
    lhs = gabor(f, t, w)
    rhs = np.exp(-np.pi * t * t) * hat_h(f, w + 1j * t)
    assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs), 1e-300)


def test_hat_h_quadrature():
    f = Signal.atom((1.0, 0.5j), 0.6 + 0.3j, 0.2)
    for z in [0.4, -1.0 + 0.3j]:
        q = quad(f(S) * np.exp(-np.pi * S**2 - 2j * np.pi * S * z))
        assert abs(hat_h(f, z) - q) < 1e-10


def test_bargmann_of_window_is_constant():
    z = np.array([0, 1 + 1j, -2.5 + 0.3j])
    np.testing.assert_allclose(bargmann(PHI, z), 2**-0.25, rtol=1e-13)


def test_bargmann_of_hermite_is_monomial():
    # B h_n(z) = (pi^n / n!)^{1/2} z^n
    from math import factorial, pi, sqrt

    z = np.array([0.5, -0.3 + 0.8j])
    for n in range(5):
        np.testing.assert_allclose(bargmann(hermite_function(n), z), sqrt(pi**n / factorial(n)) * z**n, rtol=1e-12)


@given(signals(), st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=30, deadline=None)
def test_bargmann_relation(f, t, w):
    z = t + 1j * w
    lhs = gabor(f, t, -w)
    rhs = 2**-0.25 * np.exp(1j * np.pi * t * w - np.pi * abs(z) ** 2 / 2) * bargmann(f, z)
    assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs), 1e-300)


def test_inner_product_and_norm():
    assert abs(inner_product(PHI, PHI) - 2**-0.5) < 1e-15
    f = Signal.atom((1.0, 1.0), 0.8 + 0.5j, 0.1j)
    q = quad(np.abs(f(S)) ** 2)
    assert abs(norm(f) ** 2 - q) < 1e-12
    g = gaussian(1.3, 0.2)
    q = quad(f(S) * np.conj(g(S)))
    assert abs(inner_product(f, g) - q) < 1e-12


def test_multisignal_transforms_factorise():
    F = MultiSignal((PHI, hermite_function(2)))
    t = np.array([[0.1, -0.5]])
    w = np.array([[0.3, 0.7]])
    expect = gabor(PHI, 0.1, 0.3) * gabor(hermite_function(2), -0.5, 0.7)
    np.testing.assert_allclose(gabor(F, t, w), [expect])
    assert abs(inner_product(F, F) - inner_product(PHI, PHI)) < 1e-14


def test_ff_extension_on_real_line():
    f = Signal.atom((1.0, -0.5j), 1.2 - 0.4j, 0.3)
    theta, z0 = 0.6, 0.2 - 0.1j
    x = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(
        ff_extension(f, theta, z0, x), np.abs(hat_h(f, z0 + x * np.exp(1j * theta))) ** 2, rtol=1e-12
    )
    assert abs(ff_extension(PHI, 0.0, 0.0, 0.0) - 0.5) < 1e-15


def test_ff_extension_is_entire_product():
    # F(z) = hat(z0 + z e) * conj(hat(z0 + conj(z) e)) agrees with the double integral form
    f = hermite_function(1)
    theta, z0, z = 0.3, 0.1j, 0.4 + 0.6j
    e = np.exp(1j * theta)
    hs = f(S) * np.exp(-np.pi * S**2)
    a = quad(hs * np.exp(-2j * np.pi * S * (z0 + z * e)))
    b = quad(np.conj(hs) * np.exp(2j * np.pi * S * (np.conj(z0) + z * np.conj(e))))
    assert abs(ff_extension(f, theta, z0, z) - a * b) < 1e-10


def test_measurements_csv_roundtrip():
    pts = np.array([[0.0, 1.0], [-0.5, 2.0]])
    m = magnitude_samples(PHI, type("S", (), {"points": pts})())
    back = Measurements.from_csv(m.to_csv())
    np.testing.assert_array_equal(back.points, pts)
    np.testing.assert_array_equal(back.magnitudes, m.magnitudes)
    assert m.to_csv().splitlines()[0] == "t,w,magnitude"
    assert list(m)[0][0] == (0.0, 1.0)
