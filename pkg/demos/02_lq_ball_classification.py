"""
Which l^q balls are lambda-intersection bodies?
===============================================

For q > 2 the unit ball of l^q in R^n belongs to the class exactly when
lambda >= n - 3, while for q <= 2 it belongs for every lambda in (0, n).
We scan lambda for B_4^5 and B_1.5^4 with the sphere-side classifier and
watch the verdict flip once.
"""

import numpy as np

from artifact.bodies import classify, lambda_scan, scan_flips
from artifact.geometry import lq_ball

for n, q in ((5, 4.0), (4, 1.5)):
    K = lq_ball(n, q)
    print(f"\nB_{q:g}^{n}")
    for lam in (0.5, 1.0, 1.9, 2.0, 2.5, 3.5):
        r = classify(K, lam)
        print(f"  lambda = {lam:<4} {r.verdict:<12} min = {r.min_value:+.3e}  tol = {r.tolerance:.1e}")

# a coarse scan locates the single verdict change near n - 3 = 2
scan = lambda_scan(lq_ball(5, 4.0), lambdas=np.linspace(0.5, 4.5, 9), refine=1)
for lo, hi, a, b in scan_flips(scan):
    print(f"\nverdict changes from {a} to {b} between lambda = {lo:.3f} and {hi:.3f}")
