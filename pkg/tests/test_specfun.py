import math

import mpmath as mp
import numpy as np
import pytest

from ccfquad.errors import AccuracyError, DomainError, PoleError
from ccfquad.specfun import (
    bessel_j,
    bessel_k,
    bessel_y,
    gamma_fn,
    hankel1,
    hankel1_complex,
    hankel1_scaled,
    hankel_asymptotic,
)

mp.mp.dps = 30

XS = np.array([0.1, 0.7, 3.0, 12.5, 40.0, 333.0, 4999.0])


def rel(a, b):
    return abs(a - b) / abs(b)


def test_j0_at_zero():
    assert bessel_j(0.0, 0.0) == 1.0


def test_half_integer_closed_forms():
    x = XS
    np.testing.assert_allclose(bessel_j(0.5, x), np.sqrt(2 / (np.pi * x)) * np.sin(x), rtol=1e-13, atol=1e-300)
    np.testing.assert_allclose(bessel_y(0.5, x), -np.sqrt(2 / (np.pi * x)) * np.cos(x), rtol=1e-13)
    np.testing.assert_allclose(bessel_k(0.5, x[:5]), np.sqrt(np.pi / (2 * x[:5])) * np.exp(-x[:5]), rtol=1e-13)


def test_j_against_mpmath():
    assert rel(bessel_j(0.6, 10.0), float(mp.besselj(0.6, 10))) < 1e-13


def test_y_against_mpmath():
    assert rel(bessel_y(0.3, 25.0), float(mp.bessely(0.3, 25))) < 1e-12


@pytest.mark.parametrize("nu", [0.0, 1.0, 2.0, 3.0])
def test_y_integer_order(nu):
    for x in (0.5, 7.0, 120.0):
        assert rel(bessel_y(nu, x), float(mp.bessely(nu, x))) < 1e-12


def test_wronskian_random():
    rng = np.random.default_rng(7)
    nu = rng.uniform(0, 5, 100)
    x = rng.uniform(0.1, 500, 100)
    j, y = bessel_j(nu, x), bessel_y(nu, x)
    dj = bessel_j(nu - 1, x) - nu / x * j
    dy = bessel_y(nu - 1, x) - nu / x * y
    w = j * dy - dj * y
    ref = 2 / (np.pi * x)
    assert np.max(np.abs(w - ref) / ref) <= 1e-11


def test_hankel1_parts():
    h = hankel1(0.6, XS)
    assert np.array_equal(h.real, bessel_j(0.6, XS))
    assert np.array_equal(h.imag, bessel_y(0.6, XS))


def test_hankel1_leading_asymptotic():
    x, nu = 2000.0, 0.4
    lead = math.sqrt(2 / (math.pi * x)) * np.exp(1j * (x - nu * math.pi / 2 - math.pi / 4))
    assert abs(hankel1(nu, x) - lead) < 2 / x * abs(lead)


def test_hankel1_modulus_at_100():
    ref = float(mp.sqrt(mp.besselj(0, 100) ** 2 + mp.bessely(0, 100) ** 2))
    assert abs(abs(hankel1(0.0, 100.0)) - ref) < 1e-12


def test_k_against_integral_representation():
    ref = mp.quad(lambda t: mp.exp(-2 * mp.cosh(t)) * mp.cosh(0.3 * t), [0, 2, 5, 8])
    assert rel(bessel_k(0.3, 2.0), float(ref)) < 1e-12


def test_k_small_argument_and_monotone():
    for nu in (0.0, 0.3, 2.5):
        assert rel(bessel_k(nu, 1e-8), float(mp.besselk(nu, mp.mpf("1e-8")))) < 1e-12
        v = bessel_k(nu, np.linspace(0.01, 30, 400))
        assert np.all(v > 0) and np.all(np.diff(v) < 0)


def test_gamma():
    assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-15)
    assert rel(gamma_fn(0.5), math.sqrt(math.pi)) < 1e-14
    assert rel(gamma_fn(0.7), 1.29805533264755778568) < 1e-13
    x = np.array([-3.5, -0.2, 0.3, 4.4, 17.25])
    np.testing.assert_allclose(gamma_fn(x + 1), x * gamma_fn(x), rtol=1e-13)


def test_gamma_pole():
    with pytest.raises(PoleError):
        gamma_fn(-2.0)
    with pytest.raises(PoleError):
        gamma_fn(0.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_j(0.5, -1.0)
    with pytest.raises(DomainError):
        bessel_y(0.5, 0.0)
    with pytest.raises(DomainError):
        bessel_k(0.5, -2.0)
    with pytest.raises(DomainError):
        bessel_j(-0.5, 0.0)


def test_overflow_is_an_error():
    from ccfquad.errors import SpecialFunctionOverflow

    with pytest.raises(SpecialFunctionOverflow):
        bessel_y(10.0, 1e-300)


def test_complex_hankel_on_real_axis():
    x = np.linspace(20, 400, 50)
    for nu in np.linspace(0, 3, 7):
        np.testing.assert_allclose(hankel1_complex(nu, x + 0j), hankel1(nu, x), rtol=1e-11)


def test_complex_hankel_against_mpmath():
    z = 50 + 5j
    ref = complex(mp.hankel1(0.3, mp.mpc(50, 5)))
    assert rel(hankel1_complex(0.3, z), ref) < 1e-10


def test_complex_hankel_decays_upwards():
    mods = [abs(hankel1_complex(0.7, 30 + 1j * t)) for t in (0, 1, 3, 10)]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(mods, mods[1:]))


def test_complex_hankel_refuses_small_argument():
    with pytest.raises(AccuracyError):
        hankel1_complex(0.3, 5 + 1j)
    with pytest.raises(AccuracyError):
        hankel1_complex(0.3, 25 - 1j)


def _hankel_via_k(nu, z):
    # H1_nu(z) = 2 / (i pi) e^{-i nu pi / 2} K_nu(-i z); no J + iY cancellation
    z = mp.mpc(z)
    return 2 / (1j * mp.pi) * mp.exp(-0.5j * nu * mp.pi) * mp.besselk(nu, -1j * z)


def test_scaled_hankel_matches_mpmath_off_axis():
    for z in (3 + 0.5j, 10 + 4j, 25 + 40j, 800 + 3j):
        ref = complex(_hankel_via_k(0.6, z) * mp.exp(-1j * mp.mpc(z)))
        assert rel(hankel1_scaled(0.6, z), ref) < 1e-13


def test_asymptotic_estimate_reported():
    _, est = hankel_asymptotic(0.3, 20.0 + 0j)
    assert est < 1e-12
    _, est = hankel_asymptotic(0.3, 2.0 + 0j)
    assert est > 1e-6


def test_pure():
    a = bessel_y(0.37, XS)
    b = bessel_y(0.37, XS)
    assert np.array_equal(a, b)
