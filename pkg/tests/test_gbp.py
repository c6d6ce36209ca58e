import json

import numpy as np
import pytest

from artifact.errors import NotNonMember
from artifact.gbp import (bump_image, check_gbp_instance, default_gbp_body, forge_counterexample,
                          sample_frames, section_mechanism, verify_certificate)
from artifact.geometry import euclidean_ball, scaled_body


@pytest.fixture(scope="module")
def forged():
    return forge_counterexample(default_gbp_body(5), 4, seed=3, n_frames=60)


def test_scaled_copy_is_consistent():
    B = default_gbp_body(4)
    r = check_gbp_instance(scaled_body(B, 0.9), B, 2, n_frames=40)
    assert r["verdict"] == "consistent"
    assert r["max_margin"] < 0 and r["volume_gap"] < 0
    r = check_gbp_instance(B, B, 2, n_frames=40)
    assert r["verdict"] == "consistent"
    assert r["max_margin"] == 0.0 and abs(r["volume_gap"]) <= 1e-12


def test_ball_is_rejected():
    with pytest.raises(NotNonMember):
        forge_counterexample(euclidean_ball(5), 4, n_frames=10)


def test_section_mechanism_identity():
    axis = np.eye(5)[0]
    frames = sample_frames(5, 3, axis, count=30, witness=5, seed=1)
    r = section_mechanism(5, 3, axis, 4, frames)
    assert r["max_difference"] <= 1e-10 and r["nonnegative"]


def test_bump_image_is_band_limited():
    W = bump_image(5, 4, 3)
    t = np.linspace(-1, 1, 7)
    assert np.allclose(W.evaluate(t), W.evaluate(-t), atol=1e-14)


def test_forged_certificate(forged):
    inst, cert = forged
    assert cert["status"] == "counterexample" and cert["pass"]
    assert cert["sections"]["max_margin"] <= 1e-8
    assert cert["volumes"]["gap"] > 10 * cert["volumes"]["gap_error"]
    assert cert["frames"]["haar"] + cert["frames"]["witness"] == len(cert["sections"]["margins"])
    assert inst.eps == cert["eps"]


def test_certificate_round_trip(forged, tmp_path):
    _, cert = forged
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(cert))
    v = verify_certificate(json.loads(path.read_text()))
    assert v["pass"] and v["reproduced"] and v["verdict"] == "counterexample"


def test_tampered_certificate_fails(forged):
    _, cert = forged
    bad = json.loads(json.dumps(cert))
    bad["sections"]["margins"][0] += 1e-3
    assert not verify_certificate(bad)["pass"]
