import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp

from artifact.errors import PoleError
from artifact.special import (AlphaParam, bessel_j, bessel_k, gamma_n_alpha, gamma_ni_alpha,
                              gegenbauer, gegenbauer_table, harmonic_dimension, log_gamma_signed,
                              radon_limit_constant, sphere_area)


@pytest.mark.parametrize("x, log_abs, sign", [
    (0.5, math.log(math.sqrt(math.pi)), 1),
    (5.0, math.log(24.0), 1),
    (-0.5, math.log(2 * math.sqrt(math.pi)), -1),
])
def test_log_gamma_signed_values(x, log_abs, sign):
    la, s = log_gamma_signed(x)
    assert la == pytest.approx(log_abs, rel=1e-14, abs=1e-14)
    assert s == sign


@settings(max_examples=1000, deadline=None)
@given(st.floats(-10, 10))
def test_gamma_recurrence(x):
    if min(abs(x - round(x)), abs(x + 1 - round(x + 1))) < 1e-6 and round(x) <= 0:
        return
    la1, s1 = log_gamma_signed(x + 1)
    la0, s0 = log_gamma_signed(x)
    lhs = s1 * math.exp(la1)
    rhs = x * s0 * math.exp(la0)
    assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("n, area", [(2, 2 * math.pi), (3, 4 * math.pi), (4, 2 * math.pi ** 2)])
def test_sphere_area(n, area):
    assert sphere_area(n) == pytest.approx(area, rel=1e-15)


def test_gamma_n_alpha_values():
    assert gamma_n_alpha(3, 0.5) == pytest.approx(2.0, rel=1e-14)
    assert gamma_n_alpha(3, 0.0) == 0.0
    assert AlphaParam(0.0).zero_flag
    with pytest.raises(PoleError):
        gamma_n_alpha(3, 1.0)


def test_gamma_n_alpha_matches_constant_quadrature():
    # M^alpha 1 = gamma_n(alpha) * int |theta.u|^{alpha-1} d theta, with the
    # moment E|theta_1|^{alpha-1} = Gamma(n/2) Gamma(alpha/2) / (sqrt(pi) Gamma((n+alpha-1)/2))
    from artifact.harmonics import cosine_multiplier

    n, a = 4, 0.5
    moment = math.gamma(n / 2) * math.gamma(a / 2) / (math.sqrt(math.pi) * math.gamma((n + a - 1) / 2))
    assert gamma_n_alpha(n, a) * moment == pytest.approx(float(cosine_multiplier(0, a, n)), rel=1e-13)


def test_gamma_ni_alpha():
    for n in (3, 4, 5):
        for a in (0.3, 0.5, 1.7):
            assert gamma_ni_alpha(n, n - 1, a) == pytest.approx(gamma_n_alpha(n, a), rel=1e-14)
    assert gamma_ni_alpha(4, 2, 1.0) == pytest.approx(sphere_area(4) / (2 * math.pi ** 1.5), rel=1e-14)
    assert gamma_ni_alpha(3, 1, 0.0) == 0.0


@pytest.mark.parametrize("n, i", [(3, 1), (4, 2), (5, 2), (5, 3)])
def test_radon_limit_constant_is_zero_order_limit(n, i):
    # order-alpha transform of 1: gamma_{n,i}(alpha) E|Pr theta|^{alpha+i-n}, with
    # |Pr theta|^2 ~ Beta((n-i)/2, i/2); the limit alpha -> 0 must be c_i for every n
    a = 1e-7
    moment = math.exp(sp.betaln(a / 2, i / 2) - sp.betaln((n - i) / 2, i / 2))
    assert gamma_ni_alpha(n, i, a) * moment == pytest.approx(radon_limit_constant(i), rel=1e-6)


def test_gegenbauer_values():
    assert gegenbauer(0, 0.7, 0.3) == 1.0
    assert gegenbauer(1, 0.5, 0.3) == pytest.approx(0.3)
    assert gegenbauer(4, 0.5, 1.0) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5, 2.5])
def test_gegenbauer_against_scipy(lam):
    t = np.linspace(-1, 1, 41)
    T = gegenbauer_table(12, lam, t)
    for j in range(13):
        assert np.allclose(T[j], sp.eval_gegenbauer(j, lam, t), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5, 2.0])
def test_gegenbauer_orthogonality(lam):
    # t = cos(phi) turns the weight into sin^{2 lam}(phi): smooth, so 200 nodes suffice
    g, w = np.polynomial.legendre.leggauss(200)
    phi = np.pi * (g + 1) / 2
    w = w * np.pi / 2 * np.sin(phi) ** (2 * lam)
    T = gegenbauer_table(20, lam, np.cos(phi))
    G = (T * w) @ T.T
    norms = np.sqrt(np.outer(np.diag(G), np.diag(G)))
    off = np.abs(G - np.diag(np.diag(G))) / norms
    assert off.max() <= 1e-10


def test_harmonic_dimension():
    assert [harmonic_dimension(3, j) for j in range(5)] == [1, 3, 5, 7, 9]
    assert [harmonic_dimension(4, j) for j in range(4)] == [1, 4, 9, 16]


def test_bessel_closed_forms():
    x = np.linspace(0.1, 30, 200)
    assert np.allclose(bessel_j(0.5, x), np.sqrt(2 / (np.pi * x)) * np.sin(x), rtol=1e-12, atol=1e-14)
    assert np.allclose(bessel_k(0.5, x), np.sqrt(np.pi / (2 * x)) * np.exp(-x), rtol=1e-12, atol=1e-300)
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(1.5, 0.0) == 0.0


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.3])
def test_bessel_odes(nu):
    h = 2e-3
    x = np.linspace(1.0, 10.0, 19)
    for f, sign in ((bessel_j, 1.0), (bessel_k, -1.0)):
        y = {k: f(nu, x + k * h) for k in (-2, -1, 0, 1, 2)}
        d1 = (y[-2] - 8 * y[-1] + 8 * y[1] - y[2]) / (12 * h)
        d2 = (-y[-2] + 16 * y[-1] - 30 * y[0] + 16 * y[1] - y[2]) / (12 * h ** 2)
        resid = x ** 2 * d2 + x * d1 + (sign * x ** 2 - nu ** 2) * y[0]
        scale = np.abs(x ** 2 * d2) + np.abs(x * d1) + np.abs((x ** 2 + nu ** 2) * y[0])
        assert np.max(np.abs(resid) / scale) <= 1e-8
