"""Counterexamples to the comparison of volumes from i-dimensional sections.

If ``B`` is not an ``(n-i)``-intersection body, the density
``phi = M^{1-i} rho_B^{n-i}`` is negative somewhere.  Lowering ``rho_B^i``
by ``eps M^{1-i} h`` with a bump ``h >= 0`` placed where ``phi < 0`` gives a
body ``A`` whose i-sections are all smaller than those of ``B`` while its
volume is larger.

The bump used here is ``h(theta) = (theta . u0)^{2N}``: even, non-negative,
band-limited and zonal about the witness ``u0``.  Then ``M^{1-i} h`` is a
zonal polynomial, which keeps every quantity exact up to quadrature.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import ClassificationReport, _lam, _plain, choose_transform, classify, membership_density
from .errors import EpsilonExhausted, NotNonMember
from .geometry import (StarBody, body_from_spec, body_volume, midpoint_convexity_check,
                       product_quadrature, random_frames, section_volumes, zonal_perturbation)
from .harmonics import ZonalExpansion, cosine, expand_zonal
from .special import radon_limit_constant, sphere_area
from .transforms import complement_frames, radon_many

DEFAULT_FRAMES = 500
WITNESS_FRAMES = 20


@dataclass
class GbpInstance:
    """Two bodies to compare, with the frames on which sections are tested."""

    n: int
    i: int
    A: StarBody
    B: StarBody
    eps: float
    axis: np.ndarray
    bump_power: int
    frames: np.ndarray = field(repr=False)
    seed: int = 0
    J: int | None = None

    def profile(self) -> ZonalExpansion:
        return bump_image(self.n, self.i, self.bump_power)


def bump(axis, N: int):
    """``theta -> (theta . axis)^{2N}``."""
    axis = np.asarray(axis, float)
    return lambda X: (np.asarray(X) @ axis) ** (2 * N)


def bump_image(n: int, i: int, N: int) -> ZonalExpansion:
    """Zonal profile of ``M^{1-i}`` applied to ``t^{2N}``."""
    return expand_zonal(lambda t: t ** (2 * N), n, 2 * N).apply(cosine(1 - i, n))


def witness_frames(axis, i: int, count: int, rng) -> np.ndarray:
    """Haar-random i-frames constrained to contain ``axis``."""
    axis = np.asarray(axis, float)
    n = axis.size
    out = np.empty((count, i, n))
    for k in range(count):
        M = np.column_stack([axis, rng.standard_normal((n, i - 1))])
        Q, R = np.linalg.qr(M)
        Q = Q * np.sign(np.diag(R))
        out[k] = Q.T
    return out


def sample_frames(n: int, i: int, axis, count: int = DEFAULT_FRAMES, witness: int = WITNESS_FRAMES,
                seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    F = random_frames(n, i, count, rng)
    if axis is not None and witness > 0:
        F = np.concatenate([F, witness_frames(axis, i, witness, rng)])
    return F


# ---------------------------------------------------------------------------
# checks

def _volume_with_error(K: StarBody, resolutions=(28, 36)) -> tuple[float, float]:
    v = [body_volume(K, resolution=r) for r in resolutions]
    return v[-1], abs(v[-1] - v[0])


def _gap_with_error(A: StarBody, B: StarBody, resolutions=(28, 36)) -> tuple[float, float]:
    n = A.dim
    gaps = []
    for r in resolutions:
        rule = product_quadrature(n, r)
        X = rule.nodes
        gaps.append(sphere_area(n) / n * rule.integrate(A.radial(X) ** n - B.radial(X) ** n))
    return gaps[-1], abs(gaps[-1] - gaps[0])


def check_gbp_instance(A: StarBody, B: StarBody, i: int, n_frames: int = DEFAULT_FRAMES, seed: int = 0,
                       frames: np.ndarray | None = None, resolution: int = 18,
                       volume_resolutions=(28, 36), tol: float = 1e-6) -> dict:
    """Evaluate section domination on sampled frames and the volume comparison.

    Returns margins ``vol_i(A cap xi) - vol_i(B cap xi)``, both volumes
    with error estimates and a verdict: ``counterexample`` when all sections
    of A are dominated but A has the larger volume, ``consistent`` when
    both inequalities hold, ``sections_not_dominated`` otherwise.
    """
    n = A.dim
    if frames is None:
        frames = sample_frames(n, i, None, n_frames, 0, seed)
    sa = section_volumes(A, frames, resolution)
    sb = section_volumes(B, frames, resolution)
    margins = sa - sb
    dominated = bool(np.all(margins <= tol))
    va, ea = _volume_with_error(A, volume_resolutions)
    vb, eb = _volume_with_error(B, volume_resolutions)
    gap, eg = _gap_with_error(A, B, volume_resolutions)
    err = max(eg, 1e-14 * max(va, vb))
    volume_holds = gap <= 10.0 * err
    if dominated and gap > 10.0 * err:
        verdict = "counterexample"
    elif dominated:
        verdict = "consistent"
    else:
        verdict = "sections_not_dominated"
    return _plain({
        "n": n, "i": i, "frames": int(len(frames)), "seed": seed, "resolution": resolution,
        "max_margin": float(margins.max()), "min_margin": float(margins.min()),
        "margins": margins, "sections_dominated": dominated,
        "volume_A": va, "volume_B": vb, "volume_errors": [ea, eb],
        "volume_gap": gap, "volume_gap_error": err, "volume_inequality_holds": bool(volume_holds),
        "verdict": verdict,
    })


def section_mechanism(n: int, i: int, axis, N: int, frames: np.ndarray, resolution: int | None = None) -> dict:
    """Plane averages of ``M^{1-i} h`` against averages of h over complements.

    The two agree up to the constant ``c_{n-i} / c_i``, and the second is
    non-negative because h is.
    """
    res = resolution or (N + 2)
    W = bump_image(n, i, N)
    axis = np.asarray(axis, float)
    lhs = radon_many(lambda X: W.evaluate(X @ axis), frames, res)
    comp = complement_frames(frames)
    rhs = radon_limit_constant(n - i) / radon_limit_constant(i) * radon_many(bump(axis, N), comp, res)
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    return {"max_difference": float(np.max(np.abs(lhs - rhs)) / scale),
            "min_complement_mean": float(rhs.min()), "nonnegative": bool(rhs.min() >= -1e-14 * scale)}


# ---------------------------------------------------------------------------
# forging

def _pairings(B: StarBody, i: int, phi_grid, sht, axis, N: int) -> dict:
    n = B.dim
    X = sht.rule.nodes
    w = sht.rule.weights
    h = bump(axis, N)(X)
    W = bump_image(n, i, N).evaluate(X @ axis)
    rb = B.radial(X)
    grid = float(w @ (phi_grid * h))
    dual = float(w @ (rb ** (n - i) * W))
    return {"grid": grid, "duality": dual, "h_mass": float(w @ h)}


def _choose_power(B, i, phi_grid, sht, axis, J) -> tuple[int, list]:
    """Bump exponent giving the most negative pairing (degree 2N <= J)."""
    X = sht.rule.nodes
    w = sht.rule.weights
    t = X @ axis
    trace = []
    for N in range(1, J // 2 + 1):
        trace.append((N, float(w @ (phi_grid * t ** (2 * N)))))
    N = min(trace, key=lambda r: r[1])[0]
    return N, trace


def _local_convexity(K: StarBody, axis, width: float, pairs: int, seed: int) -> dict:
    """Midpoint test on pairs of boundary points clustered around ``axis``."""
    rng = np.random.default_rng(seed)
    n = K.dim
    a = axis[None, :] + width * rng.standard_normal((pairs, n))
    b = a + 0.5 * width * rng.standard_normal((pairs, n))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    x = a * K.radial(a)[:, None]
    y = b * K.radial(b)[:, None]
    g = K.norm(0.5 * (x + y))
    return {"convex": bool(np.nanmax(g) <= 1.0 + 1e-9), "max_midpoint_gauge": float(np.nanmax(g))}


def convexity_report(K: StarBody, axis, width: float, seed: int = 0, pairs: int = 4000) -> dict:
    glob = midpoint_convexity_check(K, n_pairs=pairs, seed=seed)
    loc = _local_convexity(K, np.asarray(axis, float), width, pairs, seed + 1)
    return {"convex": bool(glob["convex"] and loc["convex"]),
            "global_max_gauge": glob["max_midpoint_gauge"], "local_max_gauge": loc["max_midpoint_gauge"]}


def forge_counterexample(B: StarBody, i: int, eps_schedule=None, J: int | None = None,
                         rule: str | None = None, seed: int = 0, n_frames: int = DEFAULT_FRAMES,
                         bump_power: int | None = None, require_convex: bool = True,
                         resolution: int | None = None) -> tuple[GbpInstance, dict]:
    """Build A with smaller i-sections than B but larger volume.

    Parameters
    ----------
    B : StarBody
        Convex body that is not an ``(n-i)``-intersection body.
    i : int
        Section dimension, ``1 <= i < n``.
    eps_schedule : sequence of float, optional
        Candidate perturbation sizes, tried from the largest.  By default a
        geometric sequence below the largest size keeping ``rho_A^i > 0``.
    bump_power : int, optional
        N in ``h = (theta . u0)^{2N}``; by default the N with the most
        negative pairing ``(phi, h)``.
    require_convex : bool
        Prefer the largest eps whose A passes the midpoint tests.

    Returns
    -------
    (GbpInstance, dict)
        The instance and its certificate.

    Raises
    ------
    NotNonMember
        B is (numerically) an ``(n-i)``-intersection body.
    EpsilonExhausted
        No eps in the schedule keeps ``rho_A^i`` positive.
    """
    n = B.dim
    if not 1 <= i < n:
        raise ValueError("need 1 <= i < n")
    lam = float(n - i)
    rep: ClassificationReport = classify(B, lam, J=J, rule=rule)
    if rep.verdict != "non_member" or rep.witness is None:
        raise NotNonMember(f"classify(B, {lam}) returned {rep.verdict}")
    axis = np.asarray(rep.witness, float)
    axis /= np.linalg.norm(axis)
    sht = choose_transform(B, J, rule)
    phi = sht.synthesis(membership_density(B, _lam(lam, n), sht)).ravel()
    if bump_power is None:
        N, trace = _choose_power(B, i, phi, sht, axis, sht.J)
    else:
        N, trace = int(bump_power), []
    pair = _pairings(B, i, phi, sht, axis, N)
    if pair["grid"] >= 0:
        raise NotNonMember("no bump at the witness pairs negatively with the density")

    W = bump_image(n, i, N)
    tt = np.linspace(-1.0, 1.0, 4001)
    w_max = float(np.max(W.evaluate(tt)))
    rb_i_min = float(np.min(B.radial(sht.rule.nodes)) ** i)
    eps_cap = rb_i_min / w_max if w_max > 0 else math.inf
    if eps_schedule is None:
        base = 0.9 * eps_cap if math.isfinite(eps_cap) else 1.0
        eps_schedule = [base * 0.5 ** k for k in range(16)]
    schedule = sorted((float(e) for e in eps_schedule), reverse=True)
    feasible = [e for e in schedule if e < eps_cap]
    if not feasible:
        raise EpsilonExhausted(f"every eps in the schedule exceeds the positivity bound {eps_cap:.3g}")

    width = 1.0 / math.sqrt(max(N, 1))
    chosen, conv, tried = None, None, []
    for e in feasible:
        A = zonal_perturbation(B, i, W, axis, -e)
        c = convexity_report(A, axis, width, seed)
        tried.append({"eps": e, **c})
        if c["convex"] or not require_convex:
            chosen, conv = e, c
            break
    status = "counterexample"
    if chosen is None:
        chosen, conv = feasible[-1], tried[-1]
        status = "star-body counterexample (convexity unverified)"
    A = zonal_perturbation(B, i, W, axis, -chosen)
    frames = sample_frames(n, i, axis, n_frames, WITNESS_FRAMES, seed)
    inst = GbpInstance(n, i, A, B, chosen, axis, N, frames, seed, sht.J)
    cert = build_certificate(inst, rep, pair, conv, tried, trace, status, rho_grid=(phi, sht))
    return inst, cert


def _inner_products(A, B, i, sht) -> dict:
    n = B.dim
    X = sht.rule.nodes
    w = sht.rule.weights
    ra, rb = A.radial(X), B.radial(X)
    pb = float(w @ (rb ** (n - i) * rb ** i))
    pa = float(w @ (rb ** (n - i) * ra ** i))
    na = float(w @ ra ** n) ** (i / n)
    nb = float(w @ rb ** n) ** ((n - i) / n)
    return {"B_B": pb, "B_A": pa, "inequality": bool(pb < pa), "holder_bound": na * nb,
            "holder_ok": bool(pa <= na * nb * (1 + 1e-12))}


def _gap_trend(B, i, W, axis, eps_values) -> list:
    out = []
    for e in eps_values:
        A = zonal_perturbation(B, i, W, axis, -e)
        g, err = _gap_with_error(A, B)
        out.append({"eps": e, "gap": g, "error": err})
    return out


def build_certificate(inst: GbpInstance, rep: ClassificationReport, pair: dict, conv: dict,
                      tried: list, trace: list, status: str, rho_grid=None) -> dict:
    """Assemble the JSON certificate for a forged instance."""
    n, i = inst.n, inst.i
    check = check_gbp_instance(inst.A, inst.B, i, frames=inst.frames, resolution=inst.bump_power + 2)
    mech = section_mechanism(n, i, inst.axis, inst.bump_power, inst.frames)
    phi, sht = rho_grid
    inner = _inner_products(inst.A, inst.B, i, sht)
    W = inst.profile()
    trend = _gap_trend(inst.B, i, W, inst.axis, [inst.eps * 0.25, inst.eps * 0.5, inst.eps])
    gaps = [t["gap"] for t in trend]
    pairing_gap = abs(pair["grid"] - pair["duality"]) / max(abs(pair["grid"]), 1e-300)
    checks = {
        "sections_dominated": check["sections_dominated"],
        "volume_gap_significant": bool(check["volume_gap"] > 10 * check["volume_gap_error"]),
        "pairing_negative": bool(pair["grid"] < 0 and pair["duality"] < 0),
        "pairing_routes_agree": bool(pairing_gap <= 1e-6),
        "inner_product_inequality": inner["inequality"],
        "holder_ok": inner["holder_ok"],
        "mechanism_nonnegative": mech["nonnegative"],
        "gap_increasing_in_eps": bool(np.all(np.diff(gaps) > 0)),
    }
    if not conv.get("convex", False) and status == "counterexample":
        status = "star-body counterexample (convexity unverified)"
    return _plain({
        "kind": "gbp_certificate",
        "n": n, "i": i, "seed": inst.seed, "J": inst.J,
        "bodies": {"A": inst.A.to_spec(), "B": inst.B.to_spec()},
        "eps": inst.eps, "axis": inst.axis, "bump_power": inst.bump_power,
        "classification": {"lambda": rep.lam, "verdict": rep.verdict, "min": rep.min_value,
                           "tolerance": rep.tolerance, "witness": rep.witness},
        "pairing": {**pair, "relative_difference": pairing_gap},
        "inner_products": inner,
        "mechanism": mech,
        "convexity": conv, "eps_trials": tried, "bump_trace": trace,
        "frames": {"haar": int(len(inst.frames) - WITNESS_FRAMES), "witness": WITNESS_FRAMES,
                   "resolution": check["resolution"]},
        "sections": {"max_margin": check["max_margin"], "margins": check["margins"]},
        "volumes": {"A": check["volume_A"], "B": check["volume_B"], "errors": check["volume_errors"],
                    "gap": check["volume_gap"], "gap_error": check["volume_gap_error"]},
        "gap_trend": trend,
        "checks": checks,
        "status": status if all(checks.values()) else "failed",
        "pass": bool(all(checks.values())),
    })


def save_certificate(cert: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(cert, fh, indent=2, sort_keys=True)


def verify_certificate(cert: dict, tol: float = 1e-6) -> dict:
    """Rebuild the bodies and frames of a certificate and recheck it."""
    A = body_from_spec(cert["bodies"]["A"])
    B = body_from_spec(cert["bodies"]["B"])
    n, i = int(cert["n"]), int(cert["i"])
    axis = np.asarray(cert["axis"], float)
    fr = cert["frames"]
    frames = sample_frames(n, i, axis, fr["haar"], fr["witness"], cert["seed"])
    check = check_gbp_instance(A, B, i, frames=frames, resolution=fr["resolution"], tol=tol)
    stored = np.asarray(cert["sections"]["margins"], float)
    reproduced = bool(np.allclose(check["margins"], stored, rtol=0, atol=1e-12 + 1e-9 * np.abs(stored).max()))
    ok = (check["verdict"] == "counterexample") and reproduced
    return _plain({"verdict": check["verdict"], "reproduced": reproduced, "max_margin": check["max_margin"],
                   "volume_gap": check["volume_gap"], "volume_gap_error": check["volume_gap_error"],
                   "pass": bool(ok)})


def default_gbp_body(n: int = 5, blend: float = 0.1) -> StarBody:
    """``||x||^2 = (1 - s) ||x||_4^2 + s |x|^2``: smooth, convex, positively curved."""
    from .geometry import euclidean_ball, lq_ball, norm_blend

    return norm_blend([lq_ball(n, 4.0), euclidean_ball(n)], [1.0 - blend, blend])
