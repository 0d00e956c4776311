import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborpr.entire import (
    PowerSeries,
    ZeroSet,
    canonical_product,
    carlson_gap,
    carlson_gap_general,
    convergence_exponent,
    elementary_factor,
    g_series,
    genus,
    indicator_estimate,
    order_type_estimate,
    quartic_line_product,
    quartic_line_product_log,
    quartic_zero_set,
    residue_component,
)
from gaborpr.sampling import IntersectingLines, density_estimate

N_SIN = 100_000
SIN_ZEROS = ZeroSet(np.concatenate([np.arange(1, N_SIN + 1), -np.arange(1, N_SIN + 1)]).astype(complex))
SIN_TAIL = 2.0 / N_SIN  # sum over |n| > N of n^-2 is below 2/N


def test_elementary_factor():
    assert elementary_factor(0, 0.3) == pytest.approx(0.7)
    assert elementary_factor(3, 1.0) == 0
    z = 0.2 + 0.1j
    assert elementary_factor(2, z) == pytest.approx((1 - z) * np.exp(z + z * z / 2))
    with pytest.raises(ValueError):
        elementary_factor(-1, 0.1)


def test_zero_set_sorting_and_json():
    zs = ZeroSet([3, -1j, 2 + 0j])
    np.testing.assert_array_equal(np.abs(zs.zeros), [1, 2, 3])
    back = ZeroSet.from_dict(zs.to_dict())
    np.testing.assert_array_equal(back.zeros, zs.zeros)
    with pytest.raises(ValueError):
        ZeroSet([0.0, 1.0])
    assert ZeroSet.from_points([0, 1, 2]).origin_zero


def test_power_series_json():
    p = PowerSeries([1, 2j, -3])
    assert PowerSeries.from_dict(p.to_dict())(0.5) == p(0.5)


@pytest.mark.parametrize("z", [0.25, 0.5 + 0.3j, -1.7, 3.3j, 12.5 + 4j])
def test_canonical_product_sine(z):
    pv = canonical_product(SIN_ZEROS, 1, z, tail_tol=1e-2, tail_sum=SIN_TAIL)
    exact = np.sin(np.pi * z) / (np.pi * z)
    assert pv.certified
    assert abs(pv.value - exact) <= pv.rel_bound * abs(pv.value) + 1e-13


def test_canonical_product_zeros_and_nonzeros(rng):
    zs = ZeroSet(np.concatenate([np.arange(1, 2001), -np.arange(1, 2001)]).astype(complex))
    for z0 in [1, -7, 20]:
        assert abs(canonical_product(zs, 1, z0, tail_tol=1, tail_sum=1e-3).value) <= 1e-12
    for z in rng.uniform(0.1, 10, 20) + 1j * rng.uniform(0.1, 1, 20):
        pv = canonical_product(zs, 1, z, tail_tol=1, tail_sum=1e-3)
        assert abs(pv.value) > pv.rel_bound * abs(pv.value)


def test_canonical_product_guards():
    with pytest.raises(ValueError, match="too large"):
        canonical_product(SIN_ZEROS, 1, 6e4, tail_sum=SIN_TAIL)
    with pytest.raises(ValueError, match="tail bound"):
        canonical_product(SIN_ZEROS, 1, 100, tail_tol=1e-9, tail_sum=SIN_TAIL)
    pv = canonical_product(SIN_ZEROS, 1, 0.5, tail_tol=1e-2)
    assert not pv.certified


def test_convergence_exponent():
    e = convergence_exponent(ZeroSet(np.arange(1, 10001).astype(complex)))
    assert abs(e.rho - 1) < 0.05 and e.genus == 1 and not e.low_confidence
    q = convergence_exponent(quartic_zero_set(np.sqrt(np.arange(1, 5001))))
    assert abs(q.rho - 2) < 0.05 and q.genus == 2
    line = ZeroSet(np.arange(1, 3001) ** 0.7 + 0j)
    assert abs(convergence_exponent(line).rho - 1 / 0.7) < 0.05
    assert genus(line) == 1
    assert convergence_exponent(ZeroSet(np.arange(1, 50).astype(complex))).low_confidence
    assert convergence_exponent(ZeroSet(2.0 ** np.arange(1, 200))).genus == 0


def test_convergence_exponent_matches_density():
    lam = np.sqrt(np.arange(1, 20001))
    rho = convergence_exponent(quartic_zero_set(lam)).rho
    gen = IntersectingLines((0, 0), 0.0, math.pi / 2, 1.0, 0.5)
    dens = density_estimate(gen, np.geomspace(10, 140, 20))
    assert abs(rho - dens) < 0.1


def _random_series(rng, deg):
    return PowerSeries(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))


def _residue_oracle(f, m, k):
    out = np.zeros_like(f.coeffs)
    out[k::m] = m * f.coeffs[k::m]
    return out


@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(0, 32))
@settings(max_examples=60, deadline=None)
def test_residue_partition(seed, m, deg):
    f = _random_series(np.random.default_rng(seed), deg)
    total = sum(residue_component(f, m, k).coeffs for k in range(m))
    np.testing.assert_allclose(total, m * f.coeffs, atol=1e-12 * m)
    for k in range(m):
        np.testing.assert_allclose(residue_component(f, m, k).coeffs, _residue_oracle(f, m, k), atol=1e-12 * m)


@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(0, 32))
@settings(max_examples=60, deadline=None)
def test_g_identity(seed, m, deg):
    f = _random_series(np.random.default_rng(seed), deg)
    for k in range(m):
        g = g_series(f, m, k)
        lhs = np.zeros(m * (len(g) - 1) + 1, dtype=complex)
        lhs[::m] = g.coeffs
        fk = residue_component(f, m, k).coeffs
        rhs = np.zeros(len(fk) + m - k, dtype=complex)
        rhs[m - k :] = fk
        n = max(len(lhs), len(rhs))
        lhs, rhs = np.pad(lhs, (0, n - len(lhs))), np.pad(rhs, (0, n - len(rhs)))
        np.testing.assert_allclose(lhs, rhs, atol=1e-12 * m)


def test_residue_component_argument_check():
    with pytest.raises(ValueError):
        residue_component(PowerSeries([1.0]), 3, 3)


def test_indicator_trivial():
    r = np.linspace(1, 10, 10)
    f = lambda z: np.exp(z * z)
    assert indicator_estimate(f, 2, 0.0, r).value == pytest.approx(1.0)
    assert abs(indicator_estimate(f, 2, math.pi / 4, r).value) < 1e-12
    assert indicator_estimate(lambda z: z * z, 2, 0.0, r, log=True).value == pytest.approx(1.0)


def test_indicator_overflow_truncates_grid():
    est = indicator_estimate(lambda z: np.exp(z**2), 2, 0.0, np.linspace(1, 40, 40))
    assert est.overflow and est.r_grid[-1] < 40
    assert est.value == pytest.approx(1.0)


def test_order_type_trivial():
    r = np.linspace(1, 20, 20)
    e = order_type_estimate(np.exp, r)
    assert abs(e.order - 1) < 1e-6 and abs(e.type - 1) < 1e-6
    e = order_type_estimate(lambda z: np.exp(z * z), r)
    assert abs(e.order - 2) < 1e-6 and abs(e.type - 1) < 1e-6


def test_carlson_gap():
    assert carlson_gap(math.pi, math.pi, math.pi, math.pi, 0.9)
    assert not carlson_gap(math.pi, math.pi, math.pi, math.pi, 1.1)
    assert not carlson_gap(math.pi, math.pi, math.pi, math.pi, 1.0)
    with pytest.raises(ValueError):
        carlson_gap(0, 0, 0, 0, 0)


def test_carlson_gap_general_reduces_to_m2():
    H = lambda th: math.pi
    for a in (0.9, 1.0, 1.1):
        assert carlson_gap_general(H, 2, a) == carlson_gap(math.pi, math.pi, math.pi, math.pi, a)


def test_quartic_product_basics():
    lam = np.sqrt(np.arange(1, 1001))
    assert quartic_line_product(lam, lam[0]).value == 0
    assert quartic_line_product(lam, 1j * lam[3]).value == 0
    assert quartic_line_product(lam, 0).value == 1


@pytest.mark.parametrize("x", [0.3, 0.8, 1.2, 2.0])
def test_quartic_product_identities(x):
    lam = np.sqrt(np.arange(1, 100_001))
    # on the diagonal z^4 = -x^4 and the product is sinh(pi x^2)/(pi x^2)
    pv = quartic_line_product(lam, x * np.exp(1j * math.pi / 4))
    exact = math.sinh(math.pi * x * x) / (math.pi * x * x)
    assert abs(pv.value - exact) <= pv.rel_bound * abs(pv.value) + 1e-12
    # on the imaginary axis z^4 = x^4 and it is sin(pi x^2)/(pi x^2)
    pv = quartic_line_product(lam, 1j * x)
    exact = math.sin(math.pi * x * x) / (math.pi * x * x)
    assert abs(pv.value - exact) <= pv.rel_bound * abs(pv.value) + 1e-12


def test_quartic_product_growth():
    lam = np.sqrt(np.arange(1, 20_001))
    e = order_type_estimate(lambda z: quartic_line_product_log(lam, z), np.linspace(3, 8, 12), log=True)
    assert abs(e.order - 2) < 0.1
    assert e.type <= math.pi + 0.1
