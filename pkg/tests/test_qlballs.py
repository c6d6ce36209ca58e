import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.errors import IntegrabilityError
from artifact.qlballs import (QlBallSpec, asymptotic_check, asymptotic_constant, classify_qlball,
                              gamma_ql, gamma_ql_at_zero, gamma_ql_positivity_scan, h_blocks, h_pql,
                              region_label)


def sphere_area(k):
    return 2 * math.pi ** (k / 2) / math.gamma(k / 2)


@pytest.mark.parametrize("q, ell", [(1.0, 1), (1.5, 2), (2.0, 3), (4.0, 2), (0.7, 1)])
def test_gamma_at_zero(q, ell):
    want = sphere_area(ell) * math.gamma(ell / q) / q
    assert gamma_ql_at_zero(q, ell) == pytest.approx(want, rel=1e-14)
    assert gamma_ql(q, ell, 0.0) == pytest.approx(want, rel=1e-10)


def test_gamma_closed_forms():
    s = np.linspace(0.0, 12.0, 25)
    for ell in (1, 2, 3):
        assert np.allclose(gamma_ql(2.0, ell, s), math.pi ** (ell / 2) * np.exp(-s ** 2 / 4), rtol=1e-9, atol=1e-14)
    assert np.allclose(gamma_ql(1.0, 1, s), 2 / (1 + s ** 2), rtol=1e-9)
    assert np.allclose(gamma_ql(1.0, 3, s), 8 * math.pi / (1 + s ** 2) ** 2, rtol=1e-9)


def test_positivity_scans():
    for q, ell in ((2.0, 1), (2.0, 3), (1.5, 2), (1.0, 2)):
        assert gamma_ql_positivity_scan(q, ell, s_max=40.0, grid=801)["positive"]
    scan = gamma_ql_positivity_scan(4.0, 1, s_max=40.0, grid=801)
    assert not scan["positive"] and scan["first_sign_change"] is not None
    assert float(gamma_ql(4.0, 1, scan["first_sign_change"])) == pytest.approx(0.0, abs=1e-10)


def test_asymptotic_constants():
    assert asymptotic_constant(1.0, 1) == pytest.approx(2.0, rel=1e-14)
    assert asymptotic_constant(1.0, 3) == pytest.approx(8 * math.pi, rel=1e-14)
    assert asymptotic_constant(2.0, 2) == 0.0
    r = asymptotic_check(1.0, 1)
    assert r["converging"] and r["final_relative_error"] <= 1e-3
    assert asymptotic_check(2.0, 2)["converging"]


@pytest.mark.parametrize("n, ell, p", [(3, 1, -1.0), (4, 2, -1.5), (5, 2, -2.5)])
def test_riesz_transform(n, ell, p):
    # q = 2 is the Euclidean norm: F|x|^p = 2^{n+p} pi^{n/2} Gamma((n+p)/2)/Gamma(-p/2) |xi|^{-n-p}
    a, b = 0.6, 0.8
    want = 2 ** (n + p) * math.pi ** (n / 2) * math.gamma((n + p) / 2) / math.gamma(-p / 2)
    assert h_pql(p, 2.0, ell, a, b, n) == pytest.approx(want, rel=1e-7)


@settings(max_examples=6, deadline=None)
@given(st.floats(0.2, 1.4), st.floats(1.0, 3.5))
def test_h_homogeneity(phi, q):
    n, ell, p = 4, 2, -1.5
    a, b = math.cos(phi), math.sin(phi)
    c = 2.0
    h1 = h_pql(p, q, ell, a, b, n)
    h2 = h_pql(p, q, ell, c * a, c * b, n)
    assert h2 == pytest.approx(c ** (-n - p) * h1, rel=1e-6)


def test_h_symmetry_of_equal_blocks():
    for q in (1.0, 3.0):
        assert h_pql(-1.0, q, 2, 0.3, 0.9, 4) == pytest.approx(h_pql(-1.0, q, 2, 0.9, 0.3, 4), rel=1e-10)


def test_h_blocks_range():
    with pytest.raises(IntegrabilityError):
        h_blocks(-4.0, 3.0, (2, 2), [0.6, 0.8])
    with pytest.raises(IntegrabilityError):
        h_blocks(0.5, 3.0, (2, 2), [0.6, 0.8])


def test_region_labels():
    assert region_label(6, 1.5, 2, 1.0) == "member_all_lambda"
    assert region_label(6, 4.0, 2, 3.0) == "member_convex_range"
    assert region_label(6, 4.0, 2, 1.0) == "non_member_known"
    assert region_label(6, 4.0, 2, 2.5) == "OPEN"


def test_classify_members_and_non_members():
    r = classify_qlball(QlBallSpec(4, 2, 1.0), 1.0)
    assert r.verdict == "member" and r.extra["routes_agree"]
    assert r.extra["fourier_verdict"] == r.extra["sphere_verdict"] == "member"
    r = classify_qlball(QlBallSpec(6, 2, 4.0), 1.0)
    assert r.verdict == "non_member" and r.extra["region"] == "non_member_known"
    assert r.witness is not None
    r = classify_qlball(QlBallSpec(6, 2, 4.0), 3.5)
    assert r.verdict == "member"


def test_open_region_is_flagged():
    r = classify_qlball(QlBallSpec(6, 2, 4.0), 2.5)
    assert r.extra["region"] == "OPEN" and "note" in r.extra
    assert r.verdict in ("member", "non_member", "inconclusive")
