"""
(q, l)-balls from the Fourier side
==================================

The norm (|x'|^q + |x''|^q)^{1/q} on R^{n-l} x R^l has a Fourier transform
built from the radial kernel gamma_{q,l}, the transform of exp(-|y|^q) on R^l.
We look at the kernel, its large-s behaviour, and the sign of the transform
of ||x||^{-lambda}, which decides membership.
"""

import numpy as np

from artifact.qlballs import (QlBallSpec, asymptotic_check, classify_qlball, gamma_ql,
                              gamma_ql_positivity_scan)

# q = 2 is a Gaussian; q = 1, l = 1 is the Cauchy kernel
s = np.array([0.0, 1.0, 5.0, 10.0])
print("gamma_{2,2}(s)      :", gamma_ql(2.0, 2, s))
print("pi exp(-s^2/4)      :", np.pi * np.exp(-s ** 2 / 4))
print("gamma_{1,1}(s)      :", gamma_ql(1.0, 1, s))
print("2 / (1 + s^2)       :", 2 / (1 + s ** 2))

# positive for q <= 2, changes sign for q > 2
for q in (1.5, 2.0, 4.0):
    scan = gamma_ql_positivity_scan(q, 1, s_max=30.0, grid=601)
    print(f"q = {q}: positive = {scan['positive']}, first sign change = {scan['first_sign_change']}")

# s^{l+q} gamma(s) approaches a constant when q is not an even integer
for row in asymptotic_check(1.5, 3)["rows"]:
    print(f"  s = {row['s']:>5.0f}   relative error to the limit = {row['relative_error']:.2e}")

# classification with both routes where the sphere side is affordable
for spec, lam in ((QlBallSpec(5, 2, 1.5), 2.0), (QlBallSpec(6, 2, 4.0), 1.0), (QlBallSpec(6, 2, 4.0), 2.5)):
    r = classify_qlball(spec, lam)
    print(f"n={spec.n} l={spec.ell} q={spec.q} lambda={lam}: {r.verdict:<12} region = {r.extra['region']}")
