import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp

from artifact.bodies import (SphericalMeasure, classify, classify_negative, construct_ib,
                             convex_range_check, grassmann_dual_body, lambda_scan, poisson_approximate,
                             power_lift_body, power_mean_body, recover_generator, scan_flips,
                             section_body, section_ib, uniform_power_mean_radius)
from artifact.geometry import (callable_body, euclidean_ball, lq_ball, random_frame, rotated_body,
                               scaled_body)


def unit(rng, count, n):
    X = rng.standard_normal((count, n))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def smooth_body(n, seed=0):
    V = unit(np.random.default_rng(seed), 2, n)
    return callable_body(n, lambda X: (1 + 0.3 * (np.asarray(X) @ V[0]) ** 2
                                       + 0.2 * (np.asarray(X) @ V[1]) ** 4) ** -0.5)


def test_ball_is_member():
    for n, lam in ((3, 0.5), (4, 1.5), (5, 3.5)):
        r = classify(euclidean_ball(n), lam)
        assert r.verdict == "member"
        # the density of a ball is constant: Gamma((n-lam)/2)/Gamma(lam/2) times positive factors
        assert r.min_value > 0


def test_known_classifications():
    assert classify(lq_ball(5, 4.0), 1.0).verdict == "non_member"
    assert classify(lq_ball(4, 1.0), 0.5).verdict == "member"


def test_negative_orders():
    assert classify_negative(euclidean_ball(3), 1.0).verdict == "member"
    assert classify_negative(lq_ball(3, 1.0), 1.0).verdict == "member"


@pytest.mark.parametrize("n, lam", [(3, 0.5), (4, 1.5), (4, 2.5)])
def test_construct_ib_of_ball_radius(n, lam):
    c = math.pi ** (lam - n / 2) * (n - lam) / lam
    m0 = math.gamma(lam / 2) / math.gamma((n - lam) / 2)
    radius = (m0 / c) ** (1 / lam)
    K = construct_ib(euclidean_ball(n), lam, J=8)
    X = unit(np.random.default_rng(1), 10, n)
    assert np.allclose(K.radial(X), radius, rtol=1e-8)


def test_construct_round_trip_recovers_generator():
    L = smooth_body(4, 2)
    K = construct_ib(L, 1.5, J=24)
    g = recover_generator(K, 1.5, J=24)
    X = unit(np.random.default_rng(3), 20, 4)
    assert np.max(np.abs(g(X) / L.radial(X) ** 2.5 - 1)) <= 1e-6


def test_section_generator_of_ball():
    n, m, lam = 4, 3, 1.5
    eta = random_frame(n, m, seed=4).basis
    Lt = section_ib(euclidean_ball(n), eta, lam)
    s = m - lam - 1
    moment = math.exp(sp.betaln((1 + s) / 2, (n - m) / 2) - sp.betaln(0.5, (n - m) / 2))
    sigma = 2 * math.pi ** ((n - m + 1) / 2) / math.gamma((n - m + 1) / 2)
    radius = ((m - lam) * sigma / (2 * (n - lam)) * moment) ** (1 / (m - lam))
    Y = unit(np.random.default_rng(5), 6, m)
    assert np.allclose(Lt.radial(Y), radius, rtol=1e-12)


def test_section_of_intersection_body():
    L = smooth_body(4, 6)
    eta = random_frame(4, 3, seed=7).basis
    K = construct_ib(L, 1.5, J=24)
    Kt = construct_ib(section_ib(L, eta, 1.5), 1.5, J=24)
    Y = unit(np.random.default_rng(8), 50, 3)
    assert np.max(np.abs(K.radial(Y @ eta) - Kt.radial(Y))) <= 1e-4


def test_poisson_approximation_of_ball():
    mu = SphericalMeasure(3, density=lambda X: np.ones(np.asarray(X).shape[:-1]))
    out = poisson_approximate(mu, 0.5, [0.5, 0.8], K=euclidean_ball(3))
    for p in out:
        r = p["K"].radial(np.eye(3))
        assert np.allclose(r, r[0], rtol=1e-10)
        assert p["distance"] is not None


def test_poisson_approximation_of_atoms_is_member():
    rng = np.random.default_rng(12)
    atoms = unit(rng, 2, 3)
    mu = SphericalMeasure(3, atoms=atoms, atom_masses=np.array([1.0, 0.7]))
    out = poisson_approximate(mu, 0.5, [0.5, 0.7])
    for p in out:
        assert classify(p["K"], 0.5).verdict == "member"


def test_example_generators():
    mu = SphericalMeasure(3, density=lambda X: np.ones(np.asarray(X).shape[:-1]))
    ex = power_mean_body(mu, 0.5, J=16)
    # uniform mu: rho^lambda = E|theta_1|^{-lambda}
    want = (math.gamma(1.5) * math.gamma(0.25) / (math.sqrt(math.pi) * math.gamma(1.25))) ** 2
    assert uniform_power_mean_radius(3, 0.5) == pytest.approx(want, rel=1e-13)
    assert np.allclose(ex.body.radial(np.eye(3)), want, rtol=1e-6)
    assert ex.certified
    frame = random_frame(4, 2, seed=13).basis
    assert grassmann_dual_body(frame, [1.0], 2, 1.0).certified
    assert power_lift_body(lq_ball(3, 1.0), 0.5, 1.0).certified


def test_convex_range_check():
    r = convex_range_check(euclidean_ball(4), 2.0)
    assert r["pass"] and r["relative_difference"] <= 1e-4
    assert classify(lq_ball(4, 4.0), 1.0).verdict == "member"
    assert classify(lq_ball(5, 4.0), 2.0).verdict == "member"


@pytest.mark.parametrize("c", [0.5, 2.0])
def test_scale_invariance(c):
    for K, lam in ((lq_ball(4, 1.5), 1.5), (lq_ball(5, 4.0), 1.0)):
        assert classify(scaled_body(K, c), lam).verdict == classify(K, lam).verdict


@settings(max_examples=4, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_rotation_invariance(seed):
    Q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((4, 4)))
    K = smooth_body(4, 14)
    for lam in (0.5, 2.5):
        assert classify(rotated_body(K, Q), lam).verdict == classify(K, lam).verdict


def test_lambda_scan_flips_once_near_n_minus_3():
    scan = lambda_scan(lq_ball(5, 4.0), lambdas=np.linspace(0.5, 4.5, 9), refine=1)
    flips = scan_flips(scan)
    assert len(flips) == 1
    lo, hi, before, after = flips[0]
    assert (before, after) == ("member", "non_member") or (before, after) == ("non_member", "member")
    assert lo - 0.25 <= 2.0 <= hi + 0.25


def test_sections_of_member_are_members():
    K = lq_ball(4, 1.5)
    for s in range(5):
        eta = random_frame(4, 3, seed=100 + s).basis
        assert classify(section_body(K, eta), 1.5).verdict == "member"
