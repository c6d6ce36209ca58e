import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp

from artifact.errors import PoleError
from artifact.geometry import product_quadrature
from artifact.harmonics import (MultiplierSpec, SphericalTransform, apply_multiplier_grid,
                                bridge_multiplier, cosine, cosine_multiplier, expand, expand_zonal,
                                funk_multiplier, poisson, poisson_direct, q_multipliers)
from artifact.special import radon_limit_constant, zonal_table


def unit(rng, count, n):
    X = rng.standard_normal((count, n))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def test_expand_zonal_oracles():
    E = expand_zonal(lambda t: np.ones_like(t), 4, 8)
    assert np.allclose(E.coeffs, np.eye(9)[0], atol=1e-13)
    E = expand_zonal(lambda t: t ** 2, 3, 8)
    want = np.zeros(9)
    want[0], want[2] = 1 / 3, 2 / 3          # t^2 = 1/3 + (2/3) P_2(t)
    assert np.allclose(E.coeffs, want, atol=1e-14)
    E = expand_zonal(lambda t: zonal_table(6, 5, t)[6], 5, 10)
    assert np.allclose(E.coeffs, np.eye(11)[6], atol=1e-13)


def test_legendre_profile_matches_scipy():
    E = expand_zonal(lambda t: sp.eval_legendre(4, t), 3, 8)
    assert np.allclose(E.coeffs, np.eye(9)[4], atol=1e-14)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_cosine_multiplier_basics(n):
    assert float(cosine_multiplier(0, 0.0, n)) == pytest.approx(
        math.gamma(0.5) / math.gamma((n - 1) / 2), rel=1e-14)
    assert float(cosine_multiplier(0, 0.0, n)) == pytest.approx(radon_limit_constant(n - 1), rel=1e-14)
    assert np.all(np.asarray(cosine_multiplier(np.arange(1, 20, 2), 0.5, n)) == 0)
    with pytest.raises(PoleError):
        MultiplierSpec("cosine", n, {"alpha": 3.0})


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6), st.floats(-4.0, 4.0))
def test_multiplier_inversion_property(n, a):
    if min(abs(a - k) for k in (1, 3)) < 1e-3 or min(abs(2 - n - a - k) for k in (1, 3)) < 1e-3:
        return
    js = np.arange(0, 61, 2)
    try:
        p = np.asarray(cosine_multiplier(js, a, n)) * np.asarray(cosine_multiplier(js, 2 - n - a, n))
    except PoleError:
        return
    assert np.max(np.abs(p - 1)) <= 1e-12


def test_cosine_multiplier_continuous_at_zero():
    js = np.arange(0, 21, 2)
    for n in (3, 4, 5):
        m0 = np.asarray(cosine_multiplier(js, 0.0, n))
        funk = radon_limit_constant(n - 1) * np.asarray(funk_multiplier(js, n))
        assert np.max(np.abs(m0 - funk)) <= 1e-12
        for eps in (1e-4, -1e-4):
            assert np.max(np.abs(np.asarray(cosine_multiplier(js, eps, n)) - m0)) <= 1e-2


def test_funk_inverse_in_coefficients():
    n, J = 4, 20
    rng = np.random.default_rng(1)
    a = np.zeros(J + 1)
    a[::2] = rng.standard_normal(J // 2 + 1)
    E = expand_zonal(lambda t: a @ zonal_table(J, n, t), n, J)
    c = radon_limit_constant(n - 1)
    back = E.apply(MultiplierSpec("scale", n, {"c": c}) * MultiplierSpec("funk", n))
    back = back.apply(MultiplierSpec("scale", n, {"c": c}) * cosine(2 - n, n))
    # c M^{2-n} (c M f) with c M = M^0 gives back c * f
    assert np.max(np.abs(back.coeffs / c - E.coeffs)) <= 1e-12


def test_bridge_multiplier():
    js = np.arange(0, 41, 2)
    assert np.allclose(bridge_multiplier(js, 0.7, 0.7, 4), 1.0, rtol=1e-14)
    a = np.asarray(bridge_multiplier(js, 0.5, -0.5, 4))
    qp, qm = q_multipliers(js, 1.0, 1.5, 4)
    assert np.max(np.abs(np.asarray(qp) * np.asarray(qm) / a - 1)) <= 1e-12
    j = 200
    assert float(bridge_multiplier(j, 0.5, -0.5, 4)) * (j / 2) ** 1.0 == pytest.approx(1.0, rel=0.02)


def test_bridge_multiplier_against_gamma_formula():
    # independent evaluation with scipy's gamma for the j = 0 term
    al, be, n = 0.5, -0.5, 4
    want = (sp.gamma((1 - al) / 2) / sp.gamma((n - 1 + al) / 2)) * (sp.gamma((n - 1 + be) / 2) / sp.gamma((1 - be) / 2))
    assert float(bridge_multiplier(0, al, be, n)) == pytest.approx(want, rel=1e-13)


def test_zonal_application():
    E = expand_zonal(lambda t: np.ones_like(t), 4, 6)
    assert E.apply(cosine(0.0, 4)).coeffs[0] == pytest.approx(radon_limit_constant(3), rel=1e-14)
    F = expand_zonal(lambda t: 1 + t ** 2 + t ** 6, 4, 6)
    back = F.apply(cosine(0.5, 4)).apply(cosine(2 - 4 - 0.5, 4))
    assert np.max(np.abs(back.coeffs - F.coeffs)) <= 1e-12


def test_grid_application_constant_and_zonal_consistency():
    rng = np.random.default_rng(2)
    n, J = 4, 10
    U = unit(rng, 6, n)
    out = apply_multiplier_grid(lambda X: np.ones(len(X)), cosine(0.5, n), J, U)
    assert np.allclose(out, float(cosine_multiplier(0, 0.5, n)), rtol=1e-12)
    prof = lambda t: 1 + 0.4 * t ** 2 + 0.3 * t ** 4 + 0.1 * t ** 8
    axis = np.eye(n)[-1]
    E = expand_zonal(prof, n, J).apply(cosine(0.5, n))
    grid = apply_multiplier_grid(lambda X: prof(X @ axis), cosine(0.5, n), J, U)
    assert np.max(np.abs(grid - E(U))) <= 1e-9


def test_transform_round_trip():
    n, J = 4, 8
    rng = np.random.default_rng(3)
    V = unit(rng, 2, n)
    f = lambda X: 1 + (X @ V[0]) ** 4 + 0.5 * (X @ V[1]) ** 2 * (X @ V[0]) ** 2
    sht = SphericalTransform(n, J)
    c = sht.analysis(f)
    U = unit(rng, 10, n)
    assert np.allclose(sht.evaluate(c, U), f(U), atol=1e-12)
    e = sht.degree_energy(c)
    assert np.all(e[1::2] <= 1e-14 * e.sum()) and np.all(e[5:] <= 1e-14 * e.sum())


def test_poisson_direct_and_multiplier():
    n = 3
    rule = product_quadrature(n, 40)
    rng = np.random.default_rng(4)
    U = unit(rng, 5, n)
    assert np.allclose(poisson_direct(lambda X: np.ones(len(X)), 0.5, U, rule), 1.0, atol=1e-12)
    f = lambda X: np.exp(X[:, 0]) + X[:, 1] ** 2
    assert np.allclose(poisson_direct(f, 0.0, U, rule), rule.integrate(f(rule.nodes)), atol=1e-14)
    for t in (0.3, 0.6):
        direct = poisson_direct(f, t, U, rule)
        via = apply_multiplier_grid(f, poisson(t, n), 30, U)
        assert np.max(np.abs(direct - via)) <= 1e-6


def test_poisson_band_limited_projection_sum():
    n, J, t = 4, 6, 0.4
    rng = np.random.default_rng(5)
    V = unit(rng, 2, n)
    f = lambda X: 1 + (X @ V[0]) ** 2 + (X @ V[1]) ** 6
    H = expand(f, n, J)
    U = unit(rng, 4, n)
    projected = H.apply(poisson(t, n))(U)
    direct = poisson_direct(f, t, U, product_quadrature(n, 60))
    assert np.max(np.abs(projected - direct)) <= 1e-8
