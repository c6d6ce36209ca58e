"""Identity suites run by ``artifact verify``.

Every suite returns a report dict with keys ``identity``, ``parameters``,
``budget``, ``seed``, ``max_err``, ``std_err`` and ``pass``.
"""

from __future__ import annotations

import math

import numpy as np

SUITES = ("inversion", "funk_inversion", "limit", "quadrature", "factorization", "intertwining",
          "restriction", "positivity", "qalpha", "right_inverse", "volumes")


# ---------------------------------------------------------------------------
# test functions used by the suites

def random_even_poly(n: int, degree: int, seed: int, terms: int = 3):
    """``1 + sum_k w_k (theta . v_k)^{2d}`` over even ``2d <= degree``; positive, even."""
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((terms, n))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    W = rng.random(terms)
    D = rng.integers(1, max(degree // 2, 1) + 1, size=terms)
    D[0] = max(degree // 2, 1)

    def f(X):
        X = np.asarray(X, float)
        return 1.0 + sum(w * (X @ v) ** (2 * d) for v, w, d in zip(V, W, D))

    return f


def _unit(rng, count, n):
    X = rng.standard_normal((count, n))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# identity suites

def _report(identity, parameters, budget, seed, max_err, std_err, passed, **extra) -> dict:
    rep = {"identity": identity, "parameters": parameters, "budget": budget, "seed": seed,
           "max_err": float(max_err), "std_err": float(std_err), "pass": bool(passed)}
    rep.update(extra)
    return rep


def suite_inversion(n: int = 4, J: int = 60, alphas=(-2.5, -0.5, 0.5, 1 + math.pi / 7), **_) -> dict:
    """``m_{j,a} m_{j,2-n-a} = 1`` for even j <= J, skipping poles."""
    from .errors import PoleError
    from .harmonics import cosine_multiplier

    js = np.arange(0, J + 1, 2)
    worst, skipped = 0.0, []
    for a in alphas:
        try:
            p = np.asarray(cosine_multiplier(js, a, n), float) * np.asarray(cosine_multiplier(js, 2 - n - a, n), float)
        except PoleError:
            skipped.append(a)
            continue
        worst = max(worst, float(np.max(np.abs(p - 1.0))))
    return _report("multiplier inversion", {"n": n, "J": J, "alphas": list(alphas)}, {}, None,
                   worst, 0.0, worst <= 1e-12, skipped=skipped)


def suite_funk_inversion(n: int = 4, J: int = 16, count: int = 20, seed: int = 0, **_) -> dict:
    """Coefficient round trip ``c_{n-1} M^{2-n} M f = f`` on random even zonal f."""
    from .harmonics import MultiplierSpec, cosine, expand_zonal
    from .special import radon_limit_constant

    rng = np.random.default_rng(seed)
    c = radon_limit_constant(n - 1)
    funk = MultiplierSpec("funk", n)
    worst = 0.0
    for _k in range(count):
        a = np.zeros(J + 1)
        a[::2] = rng.standard_normal(J // 2 + 1)
        F = lambda t, a=a: _zonal_profile(a, n, t)
        E = expand_zonal(F, n, J)
        back = E.apply(funk).apply(cosine(2 - n, n))
        worst = max(worst, float(np.max(np.abs(c * back.coeffs - E.coeffs))) / max(np.max(np.abs(E.coeffs)), 1e-300))
    return _report("Funk inversion round trip", {"n": n, "J": J}, {"functions": count}, seed,
                   worst, 0.0, worst <= 1e-10)


def _zonal_profile(a, n, t):
    from .special import zonal_table

    return a @ zonal_table(len(a) - 1, n, t)


def suite_limit(n: int = 4, i: int = 2, alphas=(1e-1, 1e-2, 1e-3), frames: int = 5, seed: int = 0,
                resolution: int = 16, **_) -> dict:
    """Generalized cosine transform at small order against ``c_i`` times the Radon transform."""
    from .geometry import random_frames
    from .special import radon_limit_constant
    from .transforms import gen_cosine, radon_transform

    rng = np.random.default_rng(seed)
    f = random_even_poly(n, 4, seed)
    F = random_frames(n, i, frames, rng)
    errs = []
    for a in alphas:
        e = 0.0
        for xi in F:
            ref = radon_limit_constant(i) * radon_transform(f, xi, resolution)
            e = max(e, abs(gen_cosine(f, xi, a, resolution) / ref - 1.0))
        errs.append(e)
    decreasing = bool(np.all(np.diff(errs) < 0))
    return _report("zero-order limit of generalized cosine", {"n": n, "i": i, "alphas": list(alphas)},
                   {"frames": frames, "resolution": resolution}, seed, errs[-1], 0.0,
                   errs[-1] <= 1e-2 and decreasing, errors=errs, decreasing=decreasing)


def suite_quadrature(n: int = 3, J: int = 16, alpha: float = 0.5, points: int = 10, seed: int = 0,
                     **_) -> dict:
    """Direct cosine transform against multipliers on a band-limited f."""
    from .harmonics import apply_multiplier_grid, cosine
    from .transforms import cosine_transform

    rng = np.random.default_rng(seed)
    f = random_even_poly(n, J, seed)
    U = _unit(rng, points, n)
    res = J + 4
    a = np.array([cosine_transform(f, u, alpha, res) for u in U])
    b = apply_multiplier_grid(f, cosine(alpha, n), J, U)
    rel = float(np.max(np.abs(a / b - 1.0)))
    return _report("cosine transform: quadrature vs multipliers", {"n": n, "J": J, "alpha": alpha},
                   {"points": points, "resolution": res}, seed, rel, 0.0, rel <= 1e-6)


def suite_factorization(n: int = 4, i: int = 2, functions: int = 3, samples: int = 20000, points: int = 3,
                        seed: int = 0, **_) -> dict:
    """Funk transform as dual Radon of complementary sections (Monte Carlo)."""
    from .transforms import verify_factorization

    rng = np.random.default_rng(seed)
    reps = []
    for k in range(functions):
        f = random_even_poly(n, 4, seed + 101 * k)
        U = _unit(rng, points, n)
        r = verify_factorization(f, n, i, U, samples=samples, seed=seed + k, resolution=8)
        r["sup_f"] = float(np.max(f(_unit(rng, 2000, n))))
        reps.append(r)
    ok = all(r["pass"] and r["std_err"] <= 1e-3 * r["sup_f"] for r in reps)
    return _report("Funk = dual Radon of complementary sections", {"n": n, "i": i},
                   {"functions": functions, "samples": samples, "points": points}, seed,
                   max(r["max_err"] for r in reps), max(r["std_err"] for r in reps), ok,
                   ratios=[r["max_err"] / max(r["std_err"], 1e-300) for r in reps])


def suite_intertwining(n: int = 4, i: int = 2, alpha: float = 0.5, frames: int = 5, seed: int = 0,
                       samples: int = 2000, **_) -> dict:
    """Plane sections of ``M^alpha f`` and its dual version on functions of planes."""
    from .geometry import random_frames
    from .transforms import projection_power, verify_dual_intertwining, verify_intertwining

    rng = np.random.default_rng(seed)
    f = random_even_poly(n, 4, seed)
    F = random_frames(n, i, frames, rng)
    r1 = verify_intertwining(f, n, i, alpha, F, J=4, resolution=10)
    phi = projection_power(rng.standard_normal((2, n)), [1.0, 0.5], 4)
    r2 = verify_dual_intertwining(phi, n, i, alpha, _unit(rng, 2, n), J=4, samples=samples, batches=8)
    return _report("intertwining", {"n": n, "i": i, "alpha": alpha}, {"frames": frames, "samples": samples},
                   seed, r1["max_err"], r2["std_err"], r1["pass"] and r2["pass"],
                   sections=r1["max_err"], dual=r2["max_err"], dual_std_err=r2["std_err"])


def suite_restriction(n: int = 4, m: int = 3, k: int = 1, lams=(0.25, 0.5, 1.0), pairs: int = 10,
                      seed: int = 0, **_) -> dict:
    """Restriction identities on random (eta, xi) pairs."""
    from .transforms import verify_restriction

    f = random_even_poly(n, 4, seed)
    errs = {}
    for lam in lams:
        r = verify_restriction(f, n, m, k, lam, pairs=pairs, seed=seed, resolution=10)
        errs[str(lam)] = r["max_err"]
    worst = max(errs.values())
    return _report("restriction", {"n": n, "m": m, "k": k, "lambdas": list(lams)}, {"pairs": pairs},
                   seed, worst, 0.0, worst <= 1e-4, per_lambda=errs)


def positivity_check(n: int, alpha: float, beta: float, functions: int = 200, J: int = 12,
                     seed: int = 0) -> dict:
    """Grid minimum of ``A_{alpha,beta} f`` over random non-negative band-limited f."""
    from .harmonics import MultiplierSpec, bridge_multiplier, multiplier_array, q_multipliers, transform_for

    rng = np.random.default_rng(seed)
    sht = transform_for(n, J)
    mult = multiplier_array(sht, MultiplierSpec("bridge", n, {"alpha": alpha, "beta": beta}))
    worst = math.inf
    for _k in range(functions):
        g = random_even_poly(n, J // 2, int(rng.integers(1 << 31)))
        shift = 0.5 * rng.standard_normal()
        vals = sht.grid_values(lambda X: (g(X) - 1.0 + shift) ** 2)
        out = sht.synthesis(sht.analysis(vals) * mult)
        worst = min(worst, float(out.min() / vals.max()))
    js = np.arange(0, 41, 2)
    mu, nu = alpha - beta, 1.0 - beta
    qp, qm = q_multipliers(js, mu, nu, n)
    a = np.asarray(bridge_multiplier(js, alpha, beta, n), float)
    fact = float(np.max(np.abs(np.asarray(qp, float) * np.asarray(qm, float) - a) / np.abs(a)))
    return {"alpha": alpha, "beta": beta, "min_ratio": worst, "factorization_error": fact,
            "pass": bool(worst >= -1e-8 and fact <= 1e-12)}


def suite_positivity(n: int = 4, pairs=((0.5, -0.5), (1.5, -1.2)), functions: int = 200, J: int = 12,
                     seed: int = 0, **_) -> dict:
    reps = [positivity_check(n, a, b, functions, J, seed) for a, b in pairs]
    return _report("positivity of the bridge operator", {"n": n, "pairs": [list(p) for p in pairs], "J": J},
                   {"functions": functions}, seed, -min(r["min_ratio"] for r in reps),
                   max(r["factorization_error"] for r in reps), all(r["pass"] for r in reps), cases=reps)


def suite_qalpha(n: int = 4, i: int = 2, alpha: float = 0.5, points: int = 2, samples: int = 2000,
                 seed: int = 0, **_) -> dict:
    """``Q^alpha f -> f`` as alpha -> 0 and ``R_i^* R_i^alpha f = c_1^{-1} Q^{alpha+i-1} f``."""
    from .special import gamma_ratio
    from .transforms import dual_radon_grid, gen_cosine, q_alpha

    rng = np.random.default_rng(seed)
    f = random_even_poly(n, 4, seed)
    U = _unit(rng, points, n)
    lim = max(abs(q_alpha(f, u, 1e-3, 16) / f(u[None])[0] - 1.0) for u in U)

    def phi(F):
        F = np.asarray(F)
        flat = F.reshape((-1,) + F.shape[-2:])
        return np.array([gen_cosine(f, x, alpha, 10) for x in flat]).reshape(F.shape[:-2])

    lhs, err = dual_radon_grid(phi, U, i, samples, seed)
    c1 = gamma_ratio((n - i) / 2.0, (n - 1) / 2.0)
    rhs = np.array([q_alpha(f, u, alpha + i - 1, 16) / c1 for u in U])
    diff = np.abs(lhs - rhs)
    ok = bool(lim <= 1e-2 and np.all(diff <= 3 * err + 1e-12))
    return _report("Q^alpha limit and composition", {"n": n, "i": i, "alpha": alpha},
                   {"points": points, "samples": samples}, seed, float(diff.max()), float(err.max()), ok,
                   limit_error=float(lim))


def suite_right_inverse(n: int = 4, i: int = 2, J: int = 4, points: int = 3, rotations: int = 4000,
                        seed: int = 0, **_) -> dict:
    from .transforms import verify_right_inverse

    rng = np.random.default_rng(seed)
    f = random_even_poly(n, J, seed)
    return verify_right_inverse(f, n, i, J, _unit(rng, points, n), n_rotations=rotations, seed=seed)


def suite_volumes(**_) -> dict:
    """Unit-ball sections and the cross-polytope volume."""
    from .geometry import (SubspaceFrame, body_volume, euclidean_ball, lq_ball, product_quadrature,
                           section_volume)

    B = euclidean_ball(4)
    e = np.eye(4)
    v2 = section_volume(B, SubspaceFrame(e[:2]), 8)
    v3 = section_volume(B, SubspaceFrame(e[:3]), 8)
    cross = body_volume(lq_ball(3, 1.0), product_quadrature(3, 32, "orthant"))
    errs = [abs(v2 - math.pi), abs(v3 - 4 * math.pi / 3)]
    ok = max(errs) <= 1e-10 and abs(cross - 4.0 / 3.0) <= 1e-6
    return _report("volume identities", {}, {}, None, max(errs + [abs(cross - 4 / 3)]), 0.0, ok,
                   disc=v2, ball3=v3, cross_polytope=cross)


_SUITE_FUNCS = {name: globals()[f"suite_{name}"] for name in SUITES}


def run_suite(name: str, **params) -> dict:
    if name not in _SUITE_FUNCS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return _SUITE_FUNCS[name](**params)
