import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.geometry import (SubspaceFrame, body_from_spec, body_volume, callable_body,
                               euclidean_ball, lq_ball, norm_blend, parallel_section_function, product_quadrature,
                               project_orth, ql_ball, random_frame, random_frames,
                               random_rotation_fixing, section_volume, section_volumes,
                               subsphere_quadrature, tabulated_body)


def dfact(k):
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def sphere_moment(n, exps):
    """E prod theta_a^{e_a} for uniform theta on S^{n-1}, all e_a even (Gaussian moments)."""
    M = sum(exps) // 2
    num = math.prod(dfact(e - 1) for e in exps)
    den = math.prod(n + 2 * r for r in range(M))
    return num / den


def test_rule_basics():
    for n in (2, 3, 4, 5):
        rule = product_quadrature(n, 8)
        assert abs(rule.weights.sum() - 1) <= 1e-12
        assert np.all(rule.weights > 0)
        assert np.allclose(np.linalg.norm(rule.nodes, axis=1), 1, atol=1e-14)
    r3 = product_quadrature(3, 8)
    assert r3.integrate(r3.nodes[:, 2] ** 2) == pytest.approx(1 / 3, abs=1e-15)
    r5 = product_quadrature(5, 8)
    assert r5.integrate(r5.nodes[:, 0] ** 2 * r5.nodes[:, 1] ** 2) == pytest.approx(1 / 35, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.lists(st.integers(0, 4), min_size=5, max_size=5))
def test_rule_exact_on_even_monomials(n, half):
    exps = [2 * h for h in half[:n]]
    R = 8
    rule = product_quadrature(n, R)
    if sum(exps) > rule.degree:
        return
    val = rule.integrate(np.prod(rule.nodes ** np.array(exps), axis=1))
    assert val == pytest.approx(sphere_moment(n, exps), rel=1e-12, abs=1e-15)


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 5), st.integers(0, 2 ** 31))
def test_rule_rotation_invariance(n, seed):
    rng = np.random.default_rng(seed)
    rule = product_quadrature(n, 10)
    v = rng.standard_normal(n)
    f = lambda X: (X @ v) ** 4 + (X @ v) ** 2
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    assert rule.integrate(f(rule.nodes @ Q.T)) == pytest.approx(rule.integrate(f(rule.nodes)), rel=1e-12)


def test_subsphere_rules():
    F = random_frame(4, 1, seed=1)
    r = subsphere_quadrature(F, 6)
    assert len(r.nodes) == 2
    assert np.allclose(r.nodes[0], -r.nodes[1])
    assert np.allclose(r.weights, 0.5)
    F2 = random_frame(4, 2, seed=2)
    r2 = subsphere_quadrature(F2, 6)
    assert r2.integrate(np.ones(len(r2.nodes))) == pytest.approx(1.0, abs=1e-14)
    assert r2.integrate((r2.nodes @ F2.basis[0]) ** 2) == pytest.approx(0.5, abs=1e-14)


def test_project_orth():
    xi = SubspaceFrame(np.eye(3)[2:3])
    length, _, flag = project_orth(xi, np.array([0, 0, 1.0]))
    assert length == 0 and flag
    length, d, flag = project_orth(xi, np.array([1.0, 0, 0]))
    assert length == pytest.approx(1) and np.allclose(d, [1, 0, 0]) and not flag
    psi = 0.7
    length, _, _ = project_orth(xi, np.array([math.sin(psi), 0, math.cos(psi)]))
    assert length == pytest.approx(abs(math.sin(psi)), abs=1e-15)


def test_section_and_body_volumes():
    e = np.eye(3)
    assert section_volume(euclidean_ball(4), SubspaceFrame(np.eye(4)[:2]), 8) == pytest.approx(math.pi, abs=1e-12)
    assert section_volume(lq_ball(3, 1.0), SubspaceFrame(e[:2]), 24, kind="orthant") == pytest.approx(2.0, rel=1e-10)
    assert body_volume(euclidean_ball(3)) == pytest.approx(4 * math.pi / 3, rel=1e-13)
    assert body_volume(lq_ball(3, 1.0), product_quadrature(3, 32, "orthant")) == pytest.approx(4 / 3, rel=1e-9)
    assert body_volume(ql_ball(4, 2.0, 2)) == pytest.approx(math.pi ** 2 / 2, rel=1e-12)


def test_ball_sections_frame_independent():
    rng = np.random.default_rng(3)
    F = random_frames(5, 3, 100, rng)
    v = section_volumes(euclidean_ball(5), F, 8)
    assert np.max(np.abs(v - 4 * math.pi / 3)) <= 1e-10


def test_zonal_volume_matches_profile():
    # rho(theta) = (1 + 0.5 theta_n^2)^{-1/2}: vol = sigma_{n-1}/n * E rho^n, profile density in t = theta_n
    n = 4
    K = callable_body(n, lambda X: (1 + 0.5 * np.asarray(X)[..., -1] ** 2) ** -0.5, "zonal")
    g, w = np.polynomial.legendre.leggauss(80)
    phi = np.pi * (g + 1) / 2
    t, dens = np.cos(phi), np.sin(phi) ** (n - 2)
    prof = np.sum(w * dens * (1 + 0.5 * t ** 2) ** (-n / 2)) / np.sum(w * dens)
    sigma = 2 * math.pi ** (n / 2) / math.gamma(n / 2)
    assert body_volume(K, resolution=40) == pytest.approx(sigma / n * prof, rel=1e-10)


def test_parallel_sections():
    B = euclidean_ball(3)
    u = np.array([0, 0, 1.0])
    assert parallel_section_function(B, u, 0.0, 32) == pytest.approx(math.pi, rel=1e-10)
    assert parallel_section_function(B, u, 0.6, 32) == pytest.approx(math.pi * 0.64, rel=1e-10)
    assert parallel_section_function(B, u, 1.5, 32) == 0.0


def test_frames_and_rotations():
    F = random_frame(5, 3, seed=4)
    assert np.max(np.abs(F.basis @ F.basis.T - np.eye(3))) <= 1e-12
    theta = np.array([0.6, 0, 0.8, 0])
    R = random_rotation_fixing(theta, seed=5)
    assert np.allclose(R @ theta, theta, atol=1e-14)
    assert np.allclose(R @ R.T, np.eye(4), atol=1e-13)
    rng = np.random.default_rng(6)
    b = random_frames(4, 1, 100_000, rng)[:, 0, 0] ** 2
    assert abs(b.mean() - 0.25) <= 3 * b.std() / math.sqrt(len(b))


def test_seeded_frames_reproducible():
    assert np.array_equal(random_frame(4, 2, seed=9).basis, random_frame(4, 2, seed=9).basis)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.floats(0.8, 6.0), st.integers(0, 2 ** 31))
def test_bodies_even_and_positive(n, q, seed):
    X = np.random.default_rng(seed).standard_normal((50, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    for K in (lq_ball(n, q), norm_blend([lq_ball(n, q), euclidean_ball(n)], [0.7, 0.3])):
        r = K.radial(X)
        assert np.all(r > 0)
        assert np.allclose(r, K.radial(-X), rtol=0, atol=0)


def test_spec_round_trip_and_tabulated():
    K = norm_blend([lq_ball(4, 4.0), euclidean_ball(4)], [0.9, 0.1])
    K2 = body_from_spec(K.to_spec())
    X = random_frames(4, 1, 20, np.random.default_rng(7))[:, 0]
    assert np.array_equal(K.radial(X), K2.radial(X))
    rule = product_quadrature(3, 17)
    f = lambda X: 1 + 0.2 * X[:, 0] ** 2 + 0.1 * X[:, 1] ** 4
    T = tabulated_body(rule, f(rule.nodes), 16)
    Y = random_frames(3, 1, 20, np.random.default_rng(8))[:, 0]
    assert np.allclose(T.radial(Y), f(Y), atol=1e-12)
    assert np.allclose(T.radial(Y), T.radial(-Y), atol=1e-14)
