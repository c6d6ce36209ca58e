"""
Cosine transforms as harmonic multipliers
=========================================

The analytic family of cosine transforms acts on the degree-j harmonics of
S^{n-1} by a scalar. This script prints a few multipliers, checks that the
orders alpha and 2 - n - alpha invert each other, and compares the direct
singular quadrature of one transform with its multiplier action.
"""

import numpy as np

from artifact.harmonics import apply_multiplier_grid, cosine, cosine_multiplier
from artifact.transforms import cosine_transform

n = 4
js = np.arange(0, 21, 2)

# multipliers of order 0.5; odd degrees vanish because the kernel is even
print("m_j(0.5) for even j:", np.round(np.asarray(cosine_multiplier(js, 0.5, n)), 6))

# orders alpha and 2 - n - alpha are inverse to each other
for alpha in (-2.5, -0.5, 0.5, 1 + np.pi / 7):
    prod = np.asarray(cosine_multiplier(js, alpha, n)) * np.asarray(cosine_multiplier(js, 2 - n - alpha, n))
    print(f"alpha = {alpha:+.3f}: max |m m' - 1| = {np.max(np.abs(prod - 1)):.1e}")

# a band-limited even function, transformed two ways
rng = np.random.default_rng(0)
v = rng.standard_normal(n)
v /= np.linalg.norm(v)
f = lambda X: 1 + (X @ v) ** 2 + 0.5 * (X @ v) ** 6
U = rng.standard_normal((5, n))
U /= np.linalg.norm(U, axis=1, keepdims=True)

direct = np.array([cosine_transform(f, u, 0.5, 16) for u in U])
spectral = apply_multiplier_grid(f, cosine(0.5, n), 16, U)
print("direct quadrature :", np.round(direct, 10))
print("multiplier action :", np.round(spectral, 10))
print("max relative gap  :", f"{np.max(np.abs(direct / spectral - 1)):.1e}")
