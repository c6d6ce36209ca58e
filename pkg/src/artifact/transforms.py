"""Direct quadrature for spherical Radon and generalized cosine transforms.

Every transform with a kernel depending on ``|Pr_B theta|`` for a subspace B
is evaluated in bi-spherical coordinates

    theta = sqrt(1 - x) a + sqrt(x) b,   a in S(A), b in S(B),  A = B^perp,

where ``x = |Pr_B theta|^2`` has a Beta(dim B / 2, dim A / 2) law.  Powers of
``x`` and ``1 - x`` are absorbed into a Gauss-Jacobi rule, so the
integrable singularities of the kernels cost nothing; for even band-limited
integrands the rule is exact.

Transforms over the Grassmannian (duals) are Monte-Carlo averages over Haar
frames with reported standard errors.  Functions on ``G_{n,i}`` are
callables taking frames of shape ``(..., i, n)``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Callable

import numpy as np
from scipy.special import betaln, poch

from .errors import IntegrabilityError, PoleError
from .geometry import (SubspaceFrame, _haar_orthogonal, orth_complement_basis,
                       product_quadrature, stacked_subsphere_nodes,
                       subsphere_quadrature)
from .harmonics import cosine, expand, transform_for
from .special import (AlphaParam, gamma_n_alpha, gamma_ni_alpha, gamma_ratio,
                      gauss_jacobi01, radon_limit_constant, sphere_area)

DEFAULT_SAMPLES = 20000


def _basis(obj) -> np.ndarray:
    if isinstance(obj, SubspaceFrame):
        return obj.basis
    return np.atleast_2d(np.asarray(obj, float))


def _sub_rule(basis: np.ndarray, resolution: int):
    base = product_quadrature(basis.shape[0], resolution)
    return base.nodes @ basis, base.weights


def bispherical_integral(f: Callable, A, B, pa: float = 0.0, pb: float = 0.0,
                         resolution: int = 16, x_nodes: int | None = None) -> float:
    """Integral of ``f(theta) |Pr_A theta|^pa |Pr_B theta|^pb`` over the sphere of ``A + B``.

    Parameters
    ----------
    f : callable
        Vectorized function of unit vectors ``(..., n)``.
    A, B : SubspaceFrame or ndarray
        Orthonormal bases of two orthogonal subspaces; the integral is over
        the unit sphere of their sum with its probability measure.
    pa, pb : float
        Exponents; must exceed ``-dim A`` and ``-dim B`` respectively.
    resolution : int
        Nodes per level of the sub-sphere rules.
    x_nodes : int, optional
        Gauss-Jacobi nodes in ``x = |Pr_B theta|^2`` (default ``resolution``).
    """
    A, B = _basis(A), _basis(B)
    dA, dB = A.shape[0], B.shape[0]
    ea = (dA - 2 + pa) / 2.0
    eb = (dB - 2 + pb) / 2.0
    if ea <= -1 or eb <= -1:
        raise IntegrabilityError(f"kernel exponents ({pa}, {pb}) are not integrable")
    x, wx = gauss_jacobi01(x_nodes or resolution, eb, ea)
    wx = wx * np.exp(-betaln(dB / 2.0, dA / 2.0))
    na, wa = _sub_rule(A, resolution)
    nb, wb = _sub_rule(B, resolution)
    pts = (np.sqrt(1 - x)[:, None, None, None] * na[None, :, None, :]
           + np.sqrt(x)[:, None, None, None] * nb[None, None, :, :])
    vals = f(pts)
    return float(np.einsum("xab,x,a,b->", vals, wx, wa, wb))


def _x_profile(f: Callable, A, B, x, resolution: int) -> np.ndarray:
    """Mean of f over ``{sqrt(1-x) a + sqrt(x) b}`` for each x."""
    A, B = _basis(A), _basis(B)
    na, wa = _sub_rule(A, resolution)
    nb, wb = _sub_rule(B, resolution)
    x = np.asarray(x, float)
    pts = (np.sqrt(1 - x)[:, None, None, None] * na[None, :, None, :]
           + np.sqrt(x)[:, None, None, None] * nb[None, None, :, :])
    return np.einsum("xab,a,b->x", f(pts), wa, wb)


def continued_power_mean(f: Callable, A, B, alpha: float, degree: int, resolution: int | None = None) -> float:
    """Analytic continuation in alpha of ``Gamma-normalized E[|Pr_B theta|^{alpha - dB} f]``.

    Returns ``sum_k F_k (alpha/2)_k / Gamma(alpha/2 + k + dA/2)`` times
    ``Gamma(dA/2) / B(dB/2, dA/2)``, where ``F(x) = sum_k F_k x^k`` is the
    average of an even polynomial f of degree ``2 * degree`` over the fibre
    ``|Pr_B theta|^2 = x``.  Multiplying by ``Gamma(alpha/2)`` gives the
    integral ``E[x^{(alpha - dB)/2} f]`` for alpha > 0; the Pochhammer form
    is entire in alpha.
    """
    A, B = _basis(A), _basis(B)
    dA, dB = A.shape[0], B.shape[0]
    D = int(degree)
    res = resolution or (2 * D + 2)
    x = 0.5 * (1 - np.cos(np.pi * (np.arange(D + 1) + 0.5) / (D + 1)))
    F = _x_profile(f, A, B, x, res)
    coef = np.polynomial.polynomial.polyfit(x, F, D)
    k = np.arange(D + 1)
    a2 = alpha / 2.0
    terms = poch(a2, k) * gamma_ratio(dA / 2.0, a2 + k + dA / 2.0)
    return float(np.sum(coef * terms) * np.exp(-betaln(dB / 2.0, dA / 2.0)))


# ---------------------------------------------------------------------------
# transforms on the sphere

def funk_transform(f: Callable, u, resolution: int = 16) -> float:
    """Mean of f over the great subsphere orthogonal to u."""
    u = np.asarray(u, float)
    rule = subsphere_quadrature(SubspaceFrame(orth_complement_basis(u)), resolution)
    return rule.integrate(f(rule.nodes))


def radon_transform(f: Callable, frame, resolution: int = 16) -> float:
    """Mean of f over ``S^{n-1} cap xi`` for the subspace spanned by ``frame``."""
    B = _basis(frame)
    nodes, w = _sub_rule(B, resolution)
    return float(f(nodes) @ w)


def radon_many(f: Callable, frames: np.ndarray, resolution: int = 16) -> np.ndarray:
    """Vectorized :func:`radon_transform` for frames of shape ``(F, k, n)``."""
    nodes, w = stacked_subsphere_nodes(frames, resolution)
    return f(nodes) @ w


def cosine_transform(f: Callable, u, alpha: float, resolution: int = 16, raw: bool = False) -> float:
    """``gamma_n(alpha) int f(theta) |theta.u|^{alpha-1} d theta`` for alpha > 0.

    With ``raw=True`` the normalizing constant is omitted, which also makes
    the odd integers admissible.
    """
    u = np.asarray(u, float)
    n = len(u)
    if alpha <= 0:
        raise IntegrabilityError("direct quadrature needs alpha > 0")
    const = 1.0
    if not raw:
        if AlphaParam(alpha).pole_flag:
            raise PoleError(f"alpha={alpha} is a pole")
        const = gamma_n_alpha(n, alpha)
    A = orth_complement_basis(u)
    return const * bispherical_integral(f, A, u[None, :], 0.0, alpha - 1.0, resolution)


def gen_cosine(f: Callable, frame, alpha: float, resolution: int = 16, ambient=None,
               degree: int | None = None) -> float:
    """Generalized cosine transform ``gamma_{m,i}(alpha) int |Pr_{xi^perp} theta|^{alpha+i-m} f``.

    Parameters
    ----------
    frame : SubspaceFrame or ndarray
        The i-dimensional subspace xi.
    alpha : float
        Order.  Direct quadrature is used for alpha > 0.  For alpha <= 0 the
        analytic continuation is evaluated from the polynomial fibre profile
        and requires ``degree`` (half the even polynomial degree of f).
    ambient : SubspaceFrame or ndarray, optional
        Containing subspace (dimension m); by default all of R^n.
    """
    xi = _basis(frame)
    i, n = xi.shape
    amb = np.eye(n) if ambient is None else _basis(ambient)
    m = amb.shape[0]
    comp = _complement_within(xi, amb)
    if AlphaParam(alpha, "radon", m, i).pole_flag:
        raise PoleError(f"alpha+i-n={alpha + i - m} is a pole")
    if alpha > 0:
        return gamma_ni_alpha(m, i, alpha) * bispherical_integral(
            f, xi, comp, 0.0, alpha + i - m, resolution)
    if degree is None:
        raise IntegrabilityError("alpha <= 0 requires a band-limited f (pass degree)")
    # gamma_{m,i}(alpha) Gamma(alpha/2) is regular; the continuation supplies 1/Gamma(alpha/2)
    lead = sphere_area(m) / (2 * np.pi ** ((m - 1) / 2.0)) * gamma_ratio((m - alpha - i) / 2.0, 1.0)
    return lead * continued_power_mean(f, xi, comp, alpha, degree, resolution)


def _complement_within(sub: np.ndarray, amb: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the complement of ``sub`` inside ``amb``."""
    P = amb.T @ amb - sub.T @ sub
    w, V = np.linalg.eigh(P)
    k = amb.shape[0] - sub.shape[0]
    return V[:, -k:].T.copy() if k > 0 else np.zeros((0, amb.shape[1]))


def complement_frames(frames: np.ndarray) -> np.ndarray:
    """Orthogonal complements of stacked frames ``(..., k, n)`` -> ``(..., n-k, n)``."""
    k, n = frames.shape[-2:]
    P = np.eye(n) - np.swapaxes(frames, -1, -2) @ frames
    _, V = np.linalg.eigh(P)
    return np.swapaxes(V[..., :, k:], -1, -2)


def perp(phi: Callable) -> Callable:
    """``phi^perp(eta) = phi(eta^perp)``."""
    return lambda F: phi(complement_frames(F))


def q_alpha(f: Callable, theta, alpha: float, resolution: int = 16) -> float:
    """Spherical convolution with kernel ``(1 - |u.theta|^2)^{(alpha-n+1)/2}``.

    The constant ``sigma_{n-1} Gamma((n-1-alpha)/2) / (2 pi^{(n-1)/2} Gamma(alpha/2))``
    multiplies the integral.  Requires alpha > 0.
    """
    theta = np.asarray(theta, float)
    n = len(theta)
    if alpha <= 0:
        raise IntegrabilityError("Q^alpha by quadrature needs alpha > 0")
    const = sphere_area(n) / (2 * np.pi ** ((n - 1) / 2.0)) * gamma_ratio((n - 1 - alpha) / 2.0, alpha / 2.0)
    B = orth_complement_basis(theta)
    return const * bispherical_integral(f, theta[None, :], B, 0.0, alpha - n + 1.0, resolution)


def restriction_operator(f: Callable, eta, u, lam: float, resolution: int = 16) -> float:
    """``c int_{S(eta^perp + R u)} f(w) |u.w|^{m-lam-1} dw`` with ``c = pi^{(m-n)/2} sigma_{n-m} / 2``.

    The same constant serves the branch ``lam = -2l``, where the family is
    used without Gamma normalization.
    """
    E = _basis(eta)
    m, n = E.shape
    u = np.asarray(u, float)
    if lam >= m:
        raise IntegrabilityError("restriction needs lam < m")
    c = np.pi ** ((m - n) / 2.0) * sphere_area(n - m + 1) / 2.0
    Eperp = _complement_within(E, np.eye(n))
    return c * bispherical_integral(f, Eperp, u[None, :], 0.0, m - lam - 1.0, resolution)


def restriction_many(f: Callable, eta, U, lam: float, resolution: int = 16) -> np.ndarray:
    """:func:`restriction_operator` at many points ``U`` of ``S(eta)``."""
    return np.array([restriction_operator(f, eta, u, lam, resolution) for u in np.atleast_2d(U)])


# ---------------------------------------------------------------------------
# Grassmannian side

def _frames_at_angle(theta, i: int, x: float, count: int, rng) -> np.ndarray:
    """Frames of i-planes with ``|Pr_{xi^perp} theta|^2 = x``, uniform given x.

    Each Haar frame ``v_1..v_{n-1}`` of ``theta^perp`` yields one plane per
    choice of (i-1) companions and a tilt partner, shape ``(count, S, i, n)``.
    """
    theta = np.asarray(theta, float)
    n = len(theta)
    V0 = orth_complement_basis(theta)
    O = _haar_orthogonal(n - 1, rng, size=count)
    V = np.einsum("cij,in->cjn", O, V0)
    choices = []
    for S in combinations(range(n - 1), i - 1):
        p = min(set(range(n - 1)) - set(S)) if i < n else None
        choices.append((S, p))
    out = np.empty((count, len(choices), i, n))
    for s, (S, p) in enumerate(choices):
        a = np.sqrt(1 - x) * theta[None, :] + (np.sqrt(x) * V[:, p] if p is not None else 0.0)
        out[:, s, 0] = a
        out[:, s, 1:] = V[:, list(S)]
    return out


def dual_radon(phi: Callable, theta, i: int, n_rotations: int = DEFAULT_SAMPLES, seed=0,
               batch: int = 4096) -> tuple[float, float]:
    """Mean of phi over i-planes through theta, with its standard error.

    Rotations fixing theta are Haar-sampled; every sample averages phi over
    all coordinate choices of the rotated frame (a variance reduction that
    keeps the estimator unbiased).
    """
    rng = np.random.default_rng(seed)
    means = []
    done = 0
    while done < n_rotations:
        c = min(batch, n_rotations - done)
        F = _frames_at_angle(theta, i, 0.0, c, rng)
        means.append(phi(F).mean(axis=1))
        done += c
    s = np.concatenate(means)
    return float(s.mean()), float(s.std(ddof=1) / np.sqrt(len(s)))


def dual_radon_grid(phi: Callable, points, i: int, n_rotations: int, seed=0) -> tuple[np.ndarray, np.ndarray]:
    """:func:`dual_radon` at many points with a common random stream per point."""
    vals, errs = [], []
    for p in np.atleast_2d(points):
        v, e = dual_radon(phi, p, i, n_rotations, seed)
        vals.append(v)
        errs.append(e)
    return np.array(vals), np.array(errs)


def gen_dual_cosine(phi: Callable, theta, i: int, alpha: float, samples: int = DEFAULT_SAMPLES,
                    seed=0, x_nodes: int = 12) -> tuple[float, float]:
    """``gamma_{n,i}(alpha) int_{G_{n,i}} |Pr_{xi^perp} theta|^{alpha+i-n} phi(xi) d xi``.

    The angle ``x = |Pr_{xi^perp} theta|^2`` (Beta((n-i)/2, i/2) under Haar
    measure) is integrated by Gauss-Jacobi with the kernel power absorbed;
    planes at a given angle are Monte-Carlo sampled.  Returns the value and
    its standard error.
    """
    theta = np.asarray(theta, float)
    n = len(theta)
    if alpha <= 0:
        raise IntegrabilityError("gen_dual_cosine needs alpha > 0")
    if AlphaParam(alpha, "radon", n, i).pole_flag:
        raise PoleError(f"alpha+i-n={alpha + i - n} is a pole")
    rng = np.random.default_rng(seed)
    x, wx = gauss_jacobi01(x_nodes, (alpha - 2) / 2.0, (i - 2) / 2.0)
    wx = wx * np.exp(-betaln((n - i) / 2.0, i / 2.0))
    per = max(2, samples // x_nodes)
    total, var = 0.0, 0.0
    for xk, wk in zip(x, wx):
        s = phi(_frames_at_angle(theta, i, xk, per, rng)).mean(axis=1)
        total += wk * s.mean()
        var += wk ** 2 * s.var(ddof=1) / per
    g = gamma_ni_alpha(n, i, alpha)
    return float(g * total), float(abs(g) * np.sqrt(var))


# ---------------------------------------------------------------------------
# functions on Grassmannians

def projection_power(vectors, weights, power: float = 2.0) -> Callable:
    """``phi(xi) = sum_k w_k |Pr_xi v_k|^power``, a smooth function on ``G_{n,i}``."""
    V = np.atleast_2d(np.asarray(vectors, float))
    W = np.asarray(weights, float)

    def phi(F):
        proj = np.einsum("...in,kn->...ki", F, V)
        return np.sum(W * np.sum(proj ** 2, axis=-1) ** (power / 2.0), axis=-1)

    return phi


def sections_of(f: Callable, resolution: int = 12, complement: bool = False) -> Callable:
    """``xi -> (R f)(xi)`` (or ``(R f)(xi^perp)`` when ``complement``) as a function on frames."""

    def phi(F):
        G = complement_frames(F) if complement else F
        shp = G.shape[:-2]
        flat = G.reshape((-1,) + G.shape[-2:])
        return radon_many(f, flat, resolution).reshape(shp)

    return phi


# ---------------------------------------------------------------------------
# composite operators and identity checks

def _report(identity: str, parameters: dict, budget: dict, seed, max_err: float,
            std_err: float, passed: bool, **extra) -> dict:
    rep = {"identity": identity, "parameters": parameters, "budget": budget, "seed": seed,
           "max_err": float(max_err), "std_err": float(std_err), "pass": bool(passed)}
    rep.update(extra)
    return rep


def right_inverse_dual_radon(f: Callable, n: int, i: int, J: int, resolution: int | None = None) -> Callable:
    """Right inverse ``A`` of the dual Radon transform: ``R_i^* A f = f``.

    ``(A f)(xi) = c_2 (R_{n-i} M^{2-n} f)(xi^perp)`` with
    ``c_2 = sigma_{n-2} / (2 pi^{n/2-1})``; ``M^{2-n}`` acts by multipliers on
    the degree-J expansion of f.  Returns a function on i-frames.
    """
    if not 0 < i < n:
        raise ValueError("need 0 < i < n")
    E = expand(f, n, J)
    g = E.apply(cosine(2 - n, n))
    c2 = sphere_area(n - 1) / (2 * np.pi ** (n / 2.0 - 1))
    res = resolution or (J // 2 + 2)
    inner = sections_of(g, res, complement=True)
    return lambda F: c2 * inner(F)


def right_inverse_gen_cosine(f: Callable, frame, i: int, degree: int, resolution: int | None = None) -> float:
    """The companion expression ``c_1 (R_i^{1-i} f)(xi)``, ``c_1 = Gamma((n-i)/2)/Gamma((n-1)/2)``."""
    xi = _basis(frame)
    n = xi.shape[1]
    c1 = gamma_ratio((n - i) / 2.0, (n - 1) / 2.0)
    return c1 * gen_cosine(f, xi, 1.0 - i, resolution or (degree + 2), degree=degree)


def verify_right_inverse(f: Callable, n: int, i: int, J: int, points, n_rotations: int = 4000,
                         seed=0) -> dict:
    """Monte-Carlo check of ``R_i^* A f = f`` at the given points."""
    A = right_inverse_dual_radon(f, n, i, J)
    pts = np.atleast_2d(points)
    vals, errs = dual_radon_grid(A, pts, i, n_rotations, seed)
    truth = f(pts)
    diff = np.abs(vals - truth)
    ok = bool(np.all(diff <= 3 * errs + 1e-12))
    return _report("dual Radon right inverse", {"n": n, "i": i, "J": J},
                   {"rotations": n_rotations, "points": len(pts)}, seed,
                   diff.max(), errs.max(), ok)


def verify_factorization(f: Callable, n: int, i: int, points, samples: int = DEFAULT_SAMPLES,
                         seed=0, resolution: int = 12) -> dict:
    """Check ``M f = R_i^* R_{n-i,perp} f`` at sampled points, Monte-Carlo on the right."""
    pts = np.atleast_2d(points)
    phi = sections_of(f, resolution, complement=True)
    lhs = np.array([funk_transform(f, u, resolution) for u in pts])
    rhs, err = dual_radon_grid(phi, pts, i, samples, seed)
    diff = np.abs(lhs - rhs)
    ok = bool(np.all(diff <= 3 * err + 1e-12))
    return _report("Funk = dual Radon of complementary sections", {"n": n, "i": i},
                   {"samples": samples, "points": len(pts), "resolution": resolution}, seed,
                   diff.max(), err.max(), ok, lhs=lhs.tolist(), rhs=rhs.tolist(), std_errs=err.tolist())


def verify_intertwining(f: Callable, n: int, i: int, alpha: float, frames: np.ndarray, J: int,
                        resolution: int = 16, tol: float = 1e-4) -> dict:
    """``R_i M^alpha f = c R^{alpha+i-1}_{n-i,perp} f`` on the given i-frames, ``c = 1/c_i``.

    The left side applies ``M^alpha`` by multipliers on the degree-J
    expansion, then averages over each plane; the right side is direct
    quadrature of the generalized cosine transform on the complement.
    """
    g = expand(f, n, J).apply(cosine(alpha, n))
    c = 1.0 / radon_limit_constant(i)
    lhs = radon_many(g, frames, resolution)
    rhs = np.array([c * gen_cosine(f, comp, alpha + i - 1, resolution)
                    for comp in complement_frames(frames)])
    rel = np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-300)
    return _report("sections of M^alpha = generalized cosine on complements",
                   {"n": n, "i": i, "alpha": alpha, "J": J}, {"frames": len(frames), "resolution": resolution},
                   None, rel.max(), 0.0, bool(rel.max() <= tol), lhs=lhs.tolist(), rhs=rhs.tolist())


def verify_dual_intertwining(phi: Callable, n: int, i: int, alpha: float, points, J: int,
                             samples: int = 4000, batches: int = 16, seed=0) -> dict:
    """``M^alpha R_i^* phi = c R^{*, alpha+i-1}_{n-i} phi^perp`` at sampled points.

    Left: ``R_i^* phi`` is Monte-Carlo sampled on the degree-J analysis grid
    in independent batches, expanded, and ``M^alpha`` applied by
    multipliers; the batch spread gives the standard error.  Right: the
    generalized dual transform by stratified sampling.
    """
    pts = np.atleast_2d(points)
    sht = transform_for(n, J)
    nodes = sht.rule.nodes
    rng = np.random.default_rng(seed)
    per = max(2, samples // batches)
    mult = cosine(alpha, n)
    from .harmonics import multiplier_array
    marr = multiplier_array(sht, mult)
    outs = []
    for _ in range(batches):
        vals = np.empty(len(nodes))
        for q, th in enumerate(nodes):
            F = _frames_at_angle(th, i, 0.0, per, rng)
            vals[q] = phi(F).mean()
        c = sht.analysis(vals.reshape(sht.rule.grid.shape))
        outs.append(sht.evaluate(c * marr, pts))
    outs = np.array(outs)
    lhs = outs.mean(axis=0)
    lerr = outs.std(axis=0, ddof=1) / np.sqrt(batches)
    c = 1.0 / radon_limit_constant(i)
    rhs, rerr = [], []
    for k, u in enumerate(pts):
        v, e = gen_dual_cosine(perp(phi), u, n - i, alpha + i - 1, samples, seed + 1 + k)
        rhs.append(c * v)
        rerr.append(c * e)
    rhs, rerr = np.array(rhs), np.array(rerr)
    sig = np.sqrt(lerr ** 2 + rerr ** 2)
    diff = np.abs(lhs - rhs)
    return _report("M^alpha of dual Radon = generalized dual on complements",
                   {"n": n, "i": i, "alpha": alpha, "J": J},
                   {"samples": samples, "batches": batches, "points": len(pts)}, seed,
                   diff.max(), sig.max(), bool(np.all(diff <= 3 * sig + 1e-12)),
                   lhs=lhs.tolist(), rhs=rhs.tolist())


def verify_restriction(f: Callable, n: int, m: int, k: int, lam: float, pairs: int = 10, seed=0,
                       resolution: int = 16, tol: float = 1e-4) -> dict:
    """Restriction identities for random ``eta in G_{n,m}`` and ``xi in G_k(eta)``.

    For ``lam < k``: ``(R^{k-lam}_{n-k} f)(xi^perp) = (R^{k-lam}_{m-k} T^lam_eta f)(xi^perp cap eta)``.
    For ``lam = k``: ``(R_{n-k} f)(xi^perp) = c (R_{m-k} T^k_eta f)(xi^perp cap eta)`` with
    ``c = pi^{(n-m)/2} sigma_{m-k-1} / sigma_{n-k-1}``.
    """
    rng = np.random.default_rng(seed)
    errs, L, Rr = [], [], []
    for _ in range(pairs):
        Q = _haar_orthogonal(n, rng)
        eta = Q[:, :m].T
        xi = eta[:k]
        xi_perp_in_eta = eta[k:]
        xi_perp = _complement_within(xi, np.eye(n))
        T = lambda X: _restriction_vec(f, eta, X, lam, resolution)
        if abs(lam - k) < 1e-12:
            lhs = radon_transform(f, xi_perp, resolution)
            c = np.pi ** ((n - m) / 2.0) * sphere_area(m - k) / sphere_area(n - k)
            rhs = c * radon_transform(T, xi_perp_in_eta, resolution)
        else:
            lhs = gen_cosine(f, xi_perp, k - lam, resolution)
            rhs = gen_cosine(T, xi_perp_in_eta, k - lam, resolution, ambient=eta)
        L.append(lhs)
        Rr.append(rhs)
        errs.append(abs(lhs - rhs) / max(abs(lhs), 1e-300))
    return _report("restriction to subspaces", {"n": n, "m": m, "k": k, "lambda": lam},
                   {"pairs": pairs, "resolution": resolution}, seed, max(errs), 0.0,
                   bool(max(errs) <= tol), lhs=L, rhs=Rr)


def _restriction_vec(f: Callable, eta: np.ndarray, X, lam: float, resolution: int) -> np.ndarray:
    X = np.asarray(X, float)
    flat = X.reshape(-1, X.shape[-1])
    # the fibre integral depends only on u, which varies; loop over u with vectorized inner rule
    m, n = eta.shape
    Eperp = _complement_within(eta, np.eye(n))
    c = np.pi ** ((m - n) / 2.0) * sphere_area(n - m + 1) / 2.0
    ea = (n - m - 2) / 2.0
    eb = (m - lam - 2) / 2.0
    if eb <= -1:
        raise IntegrabilityError("restriction needs lam < m")
    x, wx = gauss_jacobi01(resolution, eb, ea)
    wx = wx * np.exp(-betaln(0.5, (n - m) / 2.0))
    na, wa = _sub_rule(Eperp, resolution)
    # w = sqrt(1-x) a + sqrt(x) (+-u)
    base = np.sqrt(1 - x)[:, None, None] * na[None, :, :]             # (x, a, n)
    out = np.empty(len(flat))
    for s in range(0, len(flat), 256):
        U = flat[s:s + 256]
        tot = 0.0
        for sgn in (1.0, -1.0):
            P = base[None] + sgn * np.sqrt(x)[None, :, None, None] * U[:, None, None, :]
            tot = tot + 0.5 * np.einsum("uxa,x,a->u", f(P), wx, wa)
        out[s:s + 256] = c * tot
    return out.reshape(X.shape[:-1])
