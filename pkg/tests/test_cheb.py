import numpy as np
import pytest
from numpy.polynomial import chebyshev as C

from ccfquad.cheb import (
    ChebSeries,
    Integrand,
    cc_nodes,
    cheb_derivative_at_endpoints,
    cheb_eval,
    hermite_correct,
    interp_coeffs,
    interp_coeffs_direct,
)
from ccfquad.errors import DomainError


def cos_integrand():
    derivs = [np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin]
    return Integrand(np.cos, lambda ell, x: derivs[ell % 4](x))


def test_nodes_endpoints_and_symmetry():
    for N in (2, 3, 8, 33):
        x = cc_nodes(N).nodes
        assert x[0] == 1.0 and x[-1] == 0.0
        np.testing.assert_allclose(x + x[::-1], 1.0, atol=1e-15)
        assert np.all(np.diff(x) < 0)


def test_nodes_reject_small_n():
    with pytest.raises(DomainError):
        cc_nodes(1)


def test_constant_and_linear():
    c = interp_coeffs(lambda x: np.ones_like(x), 6).coeffs
    np.testing.assert_allclose(c, np.eye(7)[0], atol=1e-15)
    c = interp_coeffs(lambda x: 2 * x - 1, 6).coeffs
    np.testing.assert_allclose(c, np.eye(7)[1], atol=1e-15)


@pytest.mark.parametrize("N", [2 ** j for j in range(1, 11)])
def test_fft_matches_direct(N):
    f = lambda x: np.exp(x) / (1 + 4 * x * x)
    a = interp_coeffs(f, N).coeffs
    b = interp_coeffs_direct(f, N).coeffs
    assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(b))


def test_interpolates_at_nodes():
    N = 16
    s = interp_coeffs(np.cos, N)
    x = cc_nodes(N).nodes
    np.testing.assert_allclose(cheb_eval(s, x), np.cos(x), rtol=0, atol=1e-14)


def test_eval_simple_series():
    assert cheb_eval(ChebSeries(np.array([1.0])), 0.3) == 1.0
    for n in range(6):
        e = ChebSeries(np.eye(6)[n])
        assert cheb_eval(e, 1.0) == pytest.approx(1.0)
        assert cheb_eval(e, 0.0) == pytest.approx((-1) ** n)


def test_eval_against_monomial_expansion():
    rng = np.random.default_rng(3)
    c = rng.normal(size=11)
    mono = C.cheb2poly(c)  # in t = 2x - 1
    t = 2 * 0.37 - 1
    ref = np.polyval(mono[::-1], t)
    assert cheb_eval(ChebSeries(c), 0.37) == pytest.approx(ref, rel=1e-13)


def test_eval_domain():
    with pytest.raises(DomainError):
        cheb_eval(ChebSeries(np.ones(3)), 1.2)


def test_endpoint_derivative_closed_forms():
    for n in range(1, 7):
        e = ChebSeries(np.eye(7)[n])
        d0, d1 = cheb_derivative_at_endpoints(e, 1)
        assert d1 == pytest.approx(2 * n * n)
        assert d0 == pytest.approx((-1) ** (n - 1) * 2 * n * n)
    d0, d1 = cheb_derivative_at_endpoints(ChebSeries(np.eye(4)[3]), 2)
    assert d1 == pytest.approx(96.0)


def test_endpoint_derivatives_against_numpy():
    rng = np.random.default_rng(5)
    c = rng.normal(size=9)
    for ell in range(4):
        dc = C.chebder(c, ell) * 2.0 ** ell
        d0, d1 = cheb_derivative_at_endpoints(ChebSeries(c), ell)
        assert d0 == pytest.approx(C.chebval(-1, dc), rel=1e-12)
        assert d1 == pytest.approx(C.chebval(1, dc), rel=1e-12)


def test_hermite_s0_is_identity():
    base = interp_coeffs(np.cos, 4)
    assert hermite_correct(base, cos_integrand(), 4, 0) is base


def test_hermite_polynomial_unchanged():
    f = lambda x: 3 * x ** 3 - x + 0.5
    g = Integrand(f, lambda ell, x: [f(x), 9 * x * x - 1, 18 * x, 18.0, 0.0][ell])
    base = interp_coeffs(f, 5)
    out = hermite_correct(base, g, 5, 2)
    np.testing.assert_allclose(out.coeffs[:6], base.coeffs, atol=1e-13)
    np.testing.assert_allclose(out.coeffs[6:], 0, atol=1e-13)


def test_hermite_cos_n4_s1():
    P = hermite_correct(interp_coeffs(np.cos, 4), cos_integrand(), 4, 1)
    d0, d1 = cheb_derivative_at_endpoints(P, 1)
    assert abs(d0) < 1e-12
    assert abs(d1 + np.sin(1.0)) < 1e-12


@pytest.mark.parametrize("N", [2, 4, 7, 16])
@pytest.mark.parametrize("s", [1, 2, 3])
def test_hermite_conditions(N, s):
    f = cos_integrand()
    P = hermite_correct(interp_coeffs(np.cos, N), f, N, s)
    assert P.degree == N + 2 * s
    x = cc_nodes(N).nodes
    assert np.max(np.abs(cheb_eval(P, x) - np.cos(x))) <= 1e-12
    for ell in range(1, s + 1):
        d0, d1 = cheb_derivative_at_endpoints(P, ell)
        f0, f1 = f.endpoint_derivatives(ell)
        assert abs(d0 - f0) <= 1e-10 * (1 + abs(f0))
        assert abs(d1 - f1) <= 1e-10 * (1 + abs(f1))


def test_finite_difference_derivatives():
    f = Integrand(lambda x: np.exp(0.7 * x))
    for ell, tol in ((1, 1e-11), (2, 1e-9), (3, 1e-7)):
        d0, d1 = f.endpoint_derivatives(ell)
        assert d0 == pytest.approx(0.7 ** ell, rel=tol)
        assert d1 == pytest.approx(0.7 ** ell * np.exp(0.7), rel=tol)


def test_series_immutable():
    s = interp_coeffs(np.cos, 4)
    with pytest.raises(ValueError):
        s.coeffs[0] = 2.0
