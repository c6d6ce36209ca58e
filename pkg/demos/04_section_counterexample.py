"""
Smaller sections, larger volume
===============================

A smooth convex body B in R^5 that is not a 1-intersection body can be
perturbed to a body A whose 4-dimensional central sections are all no larger
than those of B, while A has the larger volume. This script forges such a
pair on a modest number of sampled sections and re-verifies the certificate.
"""

import json

from artifact.gbp import default_gbp_body, forge_counterexample, verify_certificate

B = default_gbp_body(5)
inst, cert = forge_counterexample(B, 4, seed=7, n_frames=100)

print("status              :", cert["status"])
print("eps                 :", cert["eps"])
print("bump power N        :", cert["bump_power"])
print("pairing (phi, h)    :", cert["pairing"]["duality"])
print("largest margin      :", cert["sections"]["max_margin"])
print("vol(A) - vol(B)     :", cert["volumes"]["gap"], "+/-", cert["volumes"]["gap_error"])

# the certificate is plain JSON and carries everything needed to recheck it
check = verify_certificate(json.loads(json.dumps(cert)))
print("recheck             :", check["verdict"], "reproduced =", check["reproduced"])
