"""Star bodies, quadrature on spheres, subspace frames and volume functionals.

Points of S^{n-1} are parametrized recursively:

    theta_n = x_1,  theta_{n-1} = s_1 x_2,  ...,
    (theta_1, theta_2) = s_1 ... s_{n-2} (cos phi, sin phi),

with ``x_l = cos psi_l`` and ``s_l = sin psi_l``.  Product rules are laid out
on this tensor grid so the harmonic transforms can contract level by level.
All rules carry probability weights.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np
from scipy.special import roots_gegenbauer, roots_legendre

from .errors import BisectionFailure, ConvexityWarning
from .special import sphere_area


# ---------------------------------------------------------------------------
# quadrature

@dataclass
class ProductGrid:
    """Tensor structure of a product rule: one node set per polar level plus phi."""

    n: int
    xs: list
    ws: list
    phis: np.ndarray
    wphi: np.ndarray

    @property
    def shape(self):
        return tuple(len(x) for x in self.xs) + (len(self.phis),)


@dataclass
class QuadratureRule:
    """Probability quadrature on S^{n-1} (or a subsphere embedded in R^n).

    Attributes
    ----------
    dim : int
        Ambient dimension.
    nodes : ndarray, shape (N, dim)
    weights : ndarray, shape (N,)
    degree : int
        Polynomial degree integrated exactly (or to machine precision for
        the orthant-split rule).
    grid : ProductGrid or None
        Tensor layout, present for full-sphere product rules.
    """

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    degree: int
    grid: ProductGrid | None = None
    kind: str = "gauss"

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def __len__(self):
        return len(self.weights)


def _level_rule(R: int, d: int, kind: str):
    """Nodes x = cos(psi) and probability weights for the measure sin^{d-1} psi d psi."""
    if kind == "gauss":
        x, w = roots_gegenbauer(R, (d - 1) / 2.0)
        return x, w / w.sum()
    # orthant split: Gauss-Legendre in psi on [0, pi/2] and [pi/2, pi]
    h = max(R // 2, 1)
    y, wy = roots_legendre(h)
    psi = np.concatenate([np.pi / 4 * (y + 1), np.pi / 2 + np.pi / 4 * (y + 1)])
    w = np.concatenate([wy, wy]) * np.sin(psi) ** (d - 1)
    return np.cos(psi), w / w.sum()


def _phi_rule(R: int, kind: str):
    if kind == "gauss":
        m = 2 * R
        phis = (np.arange(m) + 0.5) * np.pi / R
        return phis, np.full(m, 1.0 / m)
    h = max(R // 2, 1)
    y, wy = roots_legendre(h)
    base = np.pi / 4 * (y + 1)
    phis = np.concatenate([base + q * np.pi / 2 for q in range(4)])
    return phis, np.tile(wy, 4) / (4 * wy.sum())


def grid_points(n: int, xs: list, phis: np.ndarray) -> np.ndarray:
    """Cartesian points of the tensor grid, shape ``(len(x_1), ..., len(phi), n)``."""
    shape = tuple(len(x) for x in xs) + (len(phis),)
    pts = np.empty(shape + (n,))
    scale = np.ones(shape)
    for lvl, x in enumerate(xs):
        sl = [None] * len(shape)
        sl[lvl] = slice(None)
        xb = x[tuple(sl)]
        pts[..., n - 1 - lvl] = scale * xb
        scale = scale * np.sqrt(np.clip(1.0 - xb ** 2, 0.0, None))
    pts[..., 0] = scale * np.cos(phis)
    pts[..., 1] = scale * np.sin(phis)
    return pts


def product_quadrature(n: int, resolution: int, kind: str = "gauss") -> QuadratureRule:
    """Product rule on S^{n-1}.

    Parameters
    ----------
    n : int
        Ambient dimension (``n >= 1``; ``n = 1`` gives the two-point S^0).
    resolution : int
        Nodes per polar level; phi gets ``2 * resolution`` nodes.
    kind : {"gauss", "orthant"}
        ``"gauss"`` uses Gauss-Gegenbauer nodes in ``cos psi`` and is exact
        for polynomials of degree ``2 * resolution - 1``.  ``"orthant"``
        splits every angle at the coordinate hyperplanes and uses
        Gauss-Legendre in the angle, which converges spectrally for
        functions that are only piecewise smooth across coordinate
        hyperplanes (l^q norms).

    Returns
    -------
    QuadratureRule
    """
    if n == 1:
        return QuadratureRule(1, np.array([[1.0], [-1.0]]), np.array([0.5, 0.5]), 10 ** 9)
    R = int(resolution)
    xs, ws = [], []
    for lvl in range(n - 2):
        x, w = _level_rule(R, n - 1 - lvl, kind)
        xs.append(x)
        ws.append(w)
    phis, wphi = _phi_rule(R, kind)
    grid = ProductGrid(n, xs, ws, phis, wphi)
    pts = grid_points(n, xs, phis).reshape(-1, n)
    W = wphi
    for w in reversed(ws):
        W = np.multiply.outer(w, W)
    degree = 2 * R - 1 if kind == "gauss" else R
    return QuadratureRule(n, pts, W.reshape(-1), degree, grid, kind)


# ---------------------------------------------------------------------------
# frames

@dataclass
class SubspaceFrame:
    """Orthonormal basis (rows) of a k-dimensional subspace of R^n."""

    basis: np.ndarray

    def __post_init__(self):
        self.basis = np.atleast_2d(np.asarray(self.basis, dtype=float))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    def gram_error(self) -> float:
        return float(np.abs(self.basis @ self.basis.T - np.eye(self.k)).max())

    def complement(self) -> "SubspaceFrame":
        """Orthonormal frame of the orthogonal complement."""
        q, _ = np.linalg.qr(np.hstack([self.basis.T, np.eye(self.dim)]))
        return SubspaceFrame(q[:, self.k:self.dim].T.copy())

    def project(self, X) -> np.ndarray:
        """Coordinates of the orthogonal projection of X onto the subspace."""
        return np.asarray(X) @ self.basis.T

    def contains(self, v, tol=1e-12) -> bool:
        v = np.asarray(v, float)
        return float(np.linalg.norm(v - self.project(v) @ self.basis)) <= tol * max(1.0, np.linalg.norm(v))


def frame_from_vectors(vectors) -> SubspaceFrame:
    """Orthonormalize the rows of ``vectors`` (Gram-Schmidt via QR)."""
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    q, r = np.linalg.qr(V.T)
    q = q * np.sign(np.diag(r))
    return SubspaceFrame(q.T.copy())


def _haar_orthogonal(m: int, rng, size=None) -> np.ndarray:
    shape = (m, m) if size is None else (size, m, m)
    z = rng.standard_normal(shape)
    q, r = np.linalg.qr(z)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    return q * d[..., None, :]


def random_frame(n: int, k: int, seed=None) -> SubspaceFrame:
    """Haar-uniform k-frame in R^n (Gaussian matrix followed by QR)."""
    rng = np.random.default_rng(seed)
    return SubspaceFrame(_haar_orthogonal(n, rng)[:, :k].T.copy())


def random_frames(n: int, k: int, count: int, rng) -> np.ndarray:
    """``count`` independent Haar k-frames, shape ``(count, k, n)``."""
    Q = _haar_orthogonal(n, rng, size=count)
    return np.swapaxes(Q[:, :, :k], 1, 2).copy()


def orth_complement_basis(theta) -> np.ndarray:
    """Rows spanning the orthogonal complement of a unit vector, shape ``(n-1, n)``."""
    theta = np.asarray(theta, float)
    n = len(theta)
    q, _ = np.linalg.qr(np.column_stack([theta, np.eye(n)]))
    return q[:, 1:n].T.copy()


def random_rotation_fixing(theta, seed=None) -> np.ndarray:
    """Haar-random rotation in SO(n) that fixes ``theta``."""
    rng = np.random.default_rng(seed)
    theta = np.asarray(theta, float) / np.linalg.norm(theta)
    V = orth_complement_basis(theta)
    O = _haar_orthogonal(len(theta) - 1, rng)
    if np.linalg.det(O) < 0:
        O[:, 0] *= -1
    return np.outer(theta, theta) + V.T @ O @ V


def project_orth(frame: SubspaceFrame, theta, eps: float = 1e-14):
    """Length and direction of the projection of ``theta`` onto the complement of ``frame``.

    Returns
    -------
    length : float or ndarray
    direction : ndarray
        Normalized projection; zero where the length is below ``eps``.
    degenerate : bool or ndarray
        True where the direction is undefined.
    """
    theta = np.asarray(theta, float)
    p = theta - frame.project(theta) @ frame.basis
    length = np.linalg.norm(p, axis=-1)
    deg = length < eps
    safe = np.where(deg, 1.0, length)
    direction = np.where(np.asarray(deg)[..., None], 0.0, p / np.asarray(safe)[..., None])
    if theta.ndim == 1:
        return float(length), direction, bool(deg)
    return length, direction, deg


def subsphere_quadrature(frame: SubspaceFrame, resolution: int, kind: str = "gauss") -> QuadratureRule:
    """Probability rule on the great subsphere ``S^{n-1} cap span(frame)``."""
    base = product_quadrature(frame.k, resolution, kind)
    return QuadratureRule(frame.dim, base.nodes @ frame.basis, base.weights, base.degree, None, kind)


def stacked_subsphere_nodes(frames: np.ndarray, resolution: int, kind: str = "gauss"):
    """Rule nodes on many subspheres at once.

    ``frames`` has shape ``(F, k, n)``; returns nodes ``(F, N, n)`` and
    weights ``(N,)``.
    """
    k = frames.shape[1]
    base = product_quadrature(k, resolution, kind)
    return np.einsum("qk,fkn->fqn", base.nodes, frames), base.weights


# ---------------------------------------------------------------------------
# star bodies

_ANALYTIC_KINDS = ("euclidean_ball", "lq_ball", "ql_ball")


@dataclass
class StarBody:
    """Origin-symmetric star body described by its radial function.

    Use the constructors :func:`euclidean_ball`, :func:`lq_ball`,
    :func:`ql_ball`, :func:`tabulated_body`, :func:`harmonic_body`,
    :func:`power_body` or :func:`callable_body`.
    """

    dim: int
    kind: str
    params: dict
    symmetry_tag: str = "generic"
    _radial: Callable | None = field(default=None, repr=False)
    # (expansion, power) when rho^power is a band-limited expansion
    expansion: tuple | None = field(default=None, repr=False)

    def radial(self, X) -> np.ndarray:
        """Radial function on unit vectors (last axis of X has length ``dim``)."""
        X = np.asarray(X, dtype=float)
        return self._radial(X)

    def norm(self, X) -> np.ndarray:
        """Minkowski functional ``|x| / rho(x/|x|)``; 0 at the origin."""
        X = np.asarray(X, dtype=float)
        r = np.linalg.norm(X, axis=-1)
        safe = np.where(r > 0, r, 1.0)
        val = r / self.radial(X / safe[..., None])
        return np.where(r > 0, val, 0.0)

    def __call__(self, X):
        return self.radial(X)

    def to_spec(self) -> dict:
        if self.kind == "callable":
            raise ValueError("callable bodies cannot be serialized")
        return {"kind": self.kind, "n": self.dim, "params": _jsonable(self.params),
                "symmetry_tag": self.symmetry_tag}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def euclidean_ball(n: int, radius: float = 1.0) -> StarBody:
    r = float(radius)
    return StarBody(n, "euclidean_ball", {"radius": r}, "zonal",
                    lambda X: np.full(X.shape[:-1], r))


def lq_ball(n: int, q: float) -> StarBody:
    """Unit ball of the l^q norm ``(sum |x_k|^q)^{1/q}``."""
    q = float(q)

    def rad(X):
        return np.sum(np.abs(X) ** q, axis=-1) ** (-1.0 / q)

    return StarBody(n, "lq_ball", {"q": q}, "generic", rad)


def ql_ball(n: int, q: float, ell: int) -> StarBody:
    """Unit ball of ``(|x'|^q + |x''|^q)^{1/q}`` with ``x''`` the last ``ell`` coordinates."""
    q = float(q)
    ell = int(ell)
    if not 0 < ell < n:
        raise ValueError("need 0 < ell < n")

    def rad(X):
        a = np.linalg.norm(X[..., : n - ell], axis=-1)
        b = np.linalg.norm(X[..., n - ell:], axis=-1)
        return (a ** q + b ** q) ** (-1.0 / q)

    return StarBody(n, "ql_ball", {"q": q, "ell": ell}, f"bizonal({ell})", rad)


def callable_body(n: int, radial: Callable, symmetry_tag: str = "generic", label: str = "") -> StarBody:
    """Body from an arbitrary vectorized radial function (not serializable)."""
    return StarBody(n, "callable", {"label": label}, symmetry_tag, radial)


def power_body(base: StarBody, exponent: float) -> StarBody:
    """Body with ``rho = rho_base ** exponent``."""
    e = float(exponent)
    params = {"exponent": e, "base": base.to_spec() if base.kind != "callable" else None}
    return StarBody(base.dim, "power", params, base.symmetry_tag, lambda X: base.radial(X) ** e)


def scaled_body(base: StarBody, c: float) -> StarBody:
    """Dilate by ``c`` (``rho -> c rho``)."""
    c = float(c)
    params = {"factor": c, "base": base.to_spec() if base.kind != "callable" else None}
    return StarBody(base.dim, "scaled", params, base.symmetry_tag, lambda X: c * base.radial(X))


def rotated_body(base: StarBody, Q) -> StarBody:
    """Body ``Q K``: its radial function is ``rho_K(Q^T theta)``."""
    Q = np.asarray(Q, float)
    params = {"rotation": Q, "base": base.to_spec() if base.kind != "callable" else None}
    return StarBody(base.dim, "rotated", params, "generic", lambda X: base.radial(X @ Q))


def harmonic_body(expansion, power: float, base: StarBody | None = None, weight: float = 1.0) -> StarBody:
    """Body with ``rho^power = weight * rho_base^power + expansion``.

    ``expansion`` is a :class:`artifact.harmonics.HarmonicExpansion`.  Without
    a base the expansion alone defines ``rho^power``.  Negative values of the
    right-hand side are the caller's responsibility.
    """
    p = float(power)
    w = float(weight)

    def rad(X):
        v = expansion(X)
        if base is not None:
            v = v + w * base.radial(X) ** p
        return np.abs(v) ** (1.0 / p) * np.sign(v) if p > 0 else v ** (1.0 / p)

    params = {"power": p, "weight": w, "expansion": expansion.to_dict(),
              "base": None if base is None else base.to_spec()}
    body = StarBody(expansion.n, "harmonic", params, "generic", rad)
    if base is None:
        body.expansion = (expansion, p)
    return body


def norm_blend(bodies, weights) -> StarBody:
    """Body with ``||x||^2 = sum_k w_k ||x||_k^2``.

    A positive combination of squared norms of convex bodies is the square
    of a norm, so the blend is convex; mixing in the Euclidean ball gives
    positive curvature.
    """
    bodies = list(bodies)
    w = [float(v) for v in weights]
    if len(w) != len(bodies) or min(w) < 0 or max(w) <= 0:
        raise ValueError("need one non-negative weight per body, not all zero")

    def rad(X):
        acc = sum(wk * K.radial(X) ** -2.0 for wk, K in zip(w, bodies))
        return acc ** -0.5

    params = {"bodies": [K.to_spec() for K in bodies], "weights": w}
    return StarBody(bodies[0].dim, "norm_blend", params, "generic", rad)


def zonal_perturbation(base: StarBody, power: float, profile, axis, weight: float) -> StarBody:
    """Body with ``rho^power = rho_base^power + weight * F(theta . axis)``.

    ``profile`` is a :class:`artifact.harmonics.ZonalExpansion` giving F.
    """
    p = float(power)
    w = float(weight)
    axis = np.asarray(axis, float)
    axis = axis / np.linalg.norm(axis)

    def rad(X):
        v = base.radial(X) ** p + w * profile.evaluate(X @ axis)
        return np.where(v > 0, np.abs(v) ** (1.0 / p), np.nan)

    params = {"power": p, "weight": w, "axis": axis, "profile": list(map(float, profile.coeffs)),
              "base": base.to_spec()}
    return StarBody(base.dim, "zonal_perturbation", params, "generic", rad)


def tabulated_body(rule: QuadratureRule, values, J: int | None = None) -> StarBody:
    """Body from radial values on the nodes of a full-sphere product rule.

    Values are interpolated by their even band-limited spherical-harmonic
    projection, which is continuous and even by construction.
    """
    from .harmonics import HarmonicExpansion, SphericalTransform

    if rule.grid is None:
        raise ValueError("tabulated bodies need a product rule")
    if J is None:
        J = rule.degree // 2
    sht = SphericalTransform(rule.dim, J, rule=rule)
    coeffs = sht.analysis(np.asarray(values, float))
    coeffs = coeffs * sht.even_mask
    exp = HarmonicExpansion(sht, coeffs)
    body = harmonic_body(exp, 1.0)
    body.kind = "tabulated"
    return body


def body_from_spec(spec: dict) -> StarBody:
    """Rebuild a body from its JSON description."""
    kind = spec["kind"]
    n = int(spec["n"])
    p = spec.get("params", {})
    if kind == "euclidean_ball":
        body = euclidean_ball(n, p.get("radius", 1.0))
    elif kind == "lq_ball":
        body = lq_ball(n, p["q"])
    elif kind == "ql_ball":
        body = ql_ball(n, p["q"], p["ell"])
    elif kind == "power":
        body = power_body(body_from_spec(p["base"]), p["exponent"])
    elif kind == "scaled":
        body = scaled_body(body_from_spec(p["base"]), p["factor"])
    elif kind == "rotated":
        body = rotated_body(body_from_spec(p["base"]), p["rotation"])
    elif kind == "norm_blend":
        body = norm_blend([body_from_spec(b) for b in p["bodies"]], p["weights"])
    elif kind == "zonal_perturbation":
        from .harmonics import ZonalExpansion

        prof = ZonalExpansion(n, np.asarray(p["profile"], float))
        body = zonal_perturbation(body_from_spec(p["base"]), p["power"], prof, p["axis"], p["weight"])
    elif kind in ("harmonic", "tabulated"):
        from .harmonics import HarmonicExpansion

        exp = HarmonicExpansion.from_dict(p["expansion"])
        base = None if p.get("base") is None else body_from_spec(p["base"])
        body = harmonic_body(exp, p["power"], base, p.get("weight", 1.0))
        body.kind = kind
    else:
        raise ValueError(f"unknown body kind {kind!r}")
    if "symmetry_tag" in spec:
        body.symmetry_tag = spec["symmetry_tag"]
    return body


def load_body(path) -> StarBody:
    with open(path) as fh:
        return body_from_spec(json.load(fh))


def save_body(body: StarBody, path) -> None:
    with open(path, "w") as fh:
        json.dump(body.to_spec(), fh, indent=2)


def write_grid_csv(path, rule: QuadratureRule, values) -> None:
    """Dump nodes, weights and values as CSV (columns x1..xn, weight, value)."""
    values = np.asarray(values, float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{k + 1}" for k in range(rule.dim)] + ["weight", "value"])
        for x, wt, v in zip(rule.nodes, rule.weights, values):
            w.writerow([repr(float(c)) for c in x] + [repr(float(wt)), repr(float(v))])


def check_star_body(body: StarBody, rule: QuadratureRule, tol: float = 1e-10) -> dict:
    """Sampled checks of positivity and origin symmetry of the radial function."""
    r = body.radial(rule.nodes)
    rm = body.radial(-rule.nodes)
    return {"positive": bool(np.all(r > 0)),
            "symmetric": bool(np.max(np.abs(r - rm)) <= tol * np.max(np.abs(r))),
            "min_radius": float(r.min()), "max_radius": float(r.max())}


# ---------------------------------------------------------------------------
# volumes

def _as_rule(n, rule, resolution=48, kind="gauss"):
    if rule is None:
        return product_quadrature(n, resolution, kind)
    return rule


def section_volume(K: StarBody, frame: SubspaceFrame, resolution: int = 48, kind: str = "gauss") -> float:
    """k-volume of ``K cap span(frame)``: ``sigma_{k-1}/k * mean of rho^k`` over the subsphere."""
    k = frame.k
    rule = subsphere_quadrature(frame, resolution, kind)
    return sphere_area(k) / k * rule.integrate(K.radial(rule.nodes) ** k)


def section_volumes(K: StarBody, frames: np.ndarray, resolution: int = 48, kind: str = "gauss") -> np.ndarray:
    """Vectorized :func:`section_volume` for frames of shape ``(F, k, n)``."""
    k = frames.shape[1]
    nodes, w = stacked_subsphere_nodes(frames, resolution, kind)
    return sphere_area(k) / k * (K.radial(nodes) ** k) @ w


def body_volume(K: StarBody, rule: QuadratureRule | None = None, resolution: int = 48) -> float:
    """n-volume ``sigma_{n-1}/n * int rho^n d theta``."""
    n = K.dim
    rule = _as_rule(n, rule, resolution)
    return sphere_area(n) / n * rule.integrate(K.radial(rule.nodes) ** n)


def _ray_roots(K: StarBody, base, dirs, tol=1e-13, max_iter=200):
    """Solve ``||base + r w||_K = 1`` for r >= 0 along each direction w (bisection)."""
    lo = np.zeros(len(dirs))
    hi = np.ones(len(dirs))
    for _ in range(80):
        out = K.norm(base + hi[:, None] * dirs) > 1.0
        if out.all():
            break
        hi = np.where(out, hi, 2.0 * hi)
    else:
        raise BisectionFailure("ray never leaves the body")
    # star-shapedness probe: each ray leaves the body once and does not re-enter
    probe = np.linspace(0.0, 1.0, 17)[:, None] * hi[None, :]
    inside = K.norm(base[None, None, :] + probe[..., None] * dirs[None, :, :]) <= 1.0
    if np.any(inside[1:] & ~inside[:-1]):
        raise BisectionFailure("a ray re-enters the body; slice is not star-shaped about its base")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        inside = K.norm(base + mid[:, None] * dirs) <= 1.0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
        if np.max(hi - lo) <= tol * max(1.0, float(np.max(hi))):
            break
    return 0.5 * (lo + hi)


def parallel_section_function(K: StarBody, u, t: float, resolution: int = 48, kind: str = "gauss",
                              center=None) -> float:
    """(n-1)-volume of the slice ``K cap {t u + u^perp}``.

    Slice radii are found by bisection on the gauge along directions of
    ``u^perp`` issued from ``center`` (default ``t u``), which must lie
    inside the slice; the volume is ``sigma_{n-2}/(n-1) * mean r^{n-1}``.
    For convex K a safe center near the support value is ``(t/h) x*``
    with ``x*`` the support point in direction u.
    """
    u = np.asarray(u, float) / np.linalg.norm(u)
    n = len(u)
    base = t * u if center is None else np.asarray(center, float)
    if K.norm(base) >= 1.0:
        return 0.0
    frame = SubspaceFrame(orth_complement_basis(u))
    rule = subsphere_quadrature(frame, resolution, kind)
    r = _ray_roots(K, base, rule.nodes)
    return sphere_area(n - 1) / (n - 1) * rule.integrate(r ** (n - 1))


def midpoint_convexity_check(K: StarBody, n_pairs: int = 2000, seed=0, tol: float = 1e-9) -> dict:
    """Sampled necessary condition for convexity: midpoints of boundary points lie in K."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n_pairs, K.dim))
    b = rng.standard_normal((n_pairs, K.dim))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    x = a * K.radial(a)[:, None]
    y = b * K.radial(b)[:, None]
    g = K.norm(0.5 * (x + y))
    worst = float(g.max())
    return {"convex": worst <= 1.0 + tol, "max_midpoint_gauge": worst, "pairs": n_pairs}


def warn_if_not_convex(K: StarBody, **kw) -> dict:
    import warnings

    rep = midpoint_convexity_check(K, **kw)
    if not rep["convex"]:
        warnings.warn(f"midpoint test failed (gauge {rep['max_midpoint_gauge']:.3g})", ConvexityWarning)
    return rep


def coordinate_subsets(m: int, r: int):
    """All r-element index subsets of range(m) as a list of tuples."""
    return list(combinations(range(m), r))
