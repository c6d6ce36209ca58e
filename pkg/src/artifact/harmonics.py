"""Fourier-Laplace analysis on S^{n-1} and multiplier operators.

Two representations are used.

* :class:`ZonalExpansion` holds coefficients of a function of ``theta . e``
  in the normalized zonal basis ``C_j^{(n-2)/2}(t) / C_j^{(n-2)/2}(1)``.
* :class:`SphericalTransform` is a real orthonormal spherical harmonic
  transform in any dimension, built from the Gelfand-Tsetlin chain
  ``j = k_0 >= k_1 >= ... >= k_{n-2} = |m|``.  Coefficients are stored in a
  dense array of shape ``(J+1,)*(n-2) + (2J+1,)`` with a validity mask, and
  analysis/synthesis contract one polar level at a time.

Every rotation-invariant operator acts on degree-j harmonics by a scalar
``m(j)``; :class:`MultiplierSpec` describes the families needed here.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import betaln, gammaln, roots_chebyt, roots_gegenbauer

from .errors import DegreeOverflow, PoleError
from .geometry import QuadratureRule, grid_points, product_quadrature
from .special import (AlphaParam, gamma_ratio, gauss_jacobi01,
                      harmonic_dimension, radon_limit_constant, zonal_table)


# ---------------------------------------------------------------------------
# multipliers

def cosine_multiplier(j, alpha: float, n: int):
    """Multiplier of the generalized cosine transform ``M^alpha`` on degree j.

    ``(-1)^{j/2} Gamma(j/2 + (1-alpha)/2) / Gamma(j/2 + (n-1+alpha)/2)`` for
    even j and 0 for odd j.  Raises :class:`PoleError` for alpha = 1, 3, 5, ...
    """
    if AlphaParam(alpha).pole_flag:
        raise PoleError(f"M^alpha is not defined at alpha={alpha}")
    j = np.asarray(j)
    even = (j % 2 == 0)
    je = np.where(even, j, 0)
    val = gamma_ratio(je / 2.0 + (1.0 - alpha) / 2.0, je / 2.0 + (n - 1.0 + alpha) / 2.0)
    val = np.where(even, (-1.0) ** (je // 2) * val, 0.0)
    return float(val) if np.ndim(val) == 0 else val


def funk_multiplier(j, n: int):
    """Multiplier of the Minkowski-Funk transform: ``m_{j,0} / c_{n-1}``."""
    return np.asarray(cosine_multiplier(j, 0.0, n)) / radon_limit_constant(n - 1)


def raw_cosine_multiplier(j, alpha: float, n: int):
    """Multiplier of the unnormalized transform ``int f(theta) |theta.u|^{alpha-1} d theta``.

    Computed by Gauss-Jacobi quadrature, exact for every even degree, so it
    is defined at alpha = 1, 3, 5, ... as well.  Requires alpha > 0.
    """
    if alpha <= 0:
        raise PoleError("raw cosine multiplier needs alpha > 0")
    j = np.atleast_1d(np.asarray(j))
    J = int(j.max()) if j.size else 0
    N = J // 2 + 2
    x, w = gauss_jacobi01(N, (alpha - 2.0) / 2.0, (n - 3.0) / 2.0)
    norm = np.exp(-betaln(0.5, (n - 1) / 2.0))
    tab = zonal_table(J, n, np.sqrt(x))
    vals = norm * tab @ w
    out = np.where(j % 2 == 0, vals[j], 0.0)
    return out


def bridge_multiplier(j, alpha: float, beta: float, n: int):
    """Multiplier ``a_{alpha,beta}(j)`` of the operator with ``M^alpha = M^beta A``."""
    j = np.asarray(j, dtype=float)
    val = (gamma_ratio(j / 2 + (1 - alpha) / 2, j / 2 + (n - 1 + alpha) / 2)
           * gamma_ratio(j / 2 + (n - 1 + beta) / 2, j / 2 + (1 - beta) / 2))
    return float(val) if np.ndim(val) == 0 else val


def q_multipliers(j, mu: float, nu: float, n: int):
    """Multipliers of the two positive convolution factors of the bridge operator.

    ``q_plus(j) = Gamma((j+n-nu)/2) / Gamma((j+n-nu+mu)/2)`` comes from
    ``2/Gamma(mu/2) int_0^1 (1-t^2)^{mu/2-1} t^{n-nu-1} Pi_t dt`` and
    ``q_minus(j) = Gamma((j+nu-mu)/2) / Gamma((j+nu)/2)`` from the
    companion integral over ``(1, inf)``.  With ``mu = alpha - beta`` and
    ``nu = 1 - beta`` their product is ``a_{alpha,beta}(j)``.
    """
    j = np.asarray(j, dtype=float)
    qp = gamma_ratio((j + n - nu) / 2.0, (j + n - nu + mu) / 2.0)
    qm = gamma_ratio((j + nu - mu) / 2.0, (j + nu) / 2.0)
    return qp, qm


@dataclass
class MultiplierSpec:
    """A rotation-invariant operator given by its Fourier-Laplace multiplier.

    kind : one of ``cosine`` (alpha), ``raw_cosine`` (alpha), ``funk``,
    ``bridge`` (alpha, beta), ``q_plus`` / ``q_minus`` (mu, nu),
    ``poisson`` (t), ``scale`` (c) or ``custom`` (func).
    """

    kind: str
    n: int
    params: dict = field(default_factory=dict)
    func: Callable | None = None

    def __post_init__(self):
        if self.kind == "cosine" and AlphaParam(self.params["alpha"]).pole_flag:
            raise PoleError(f"M^alpha is not defined at alpha={self.params['alpha']}")

    def __call__(self, j) -> np.ndarray:
        j = np.asarray(j)
        p = self.params
        n = self.n
        if self.kind == "cosine":
            return np.asarray(cosine_multiplier(j, p["alpha"], n), dtype=float)
        if self.kind == "raw_cosine":
            return raw_cosine_multiplier(j, p["alpha"], n)
        if self.kind == "funk":
            return np.asarray(funk_multiplier(j, n), dtype=float)
        if self.kind == "bridge":
            return np.asarray(bridge_multiplier(j, p["alpha"], p["beta"], n), dtype=float)
        if self.kind == "q_plus":
            return np.asarray(q_multipliers(j, p["mu"], p["nu"], n)[0], dtype=float)
        if self.kind == "q_minus":
            return np.asarray(q_multipliers(j, p["mu"], p["nu"], n)[1], dtype=float)
        if self.kind == "poisson":
            return np.asarray(p["t"], dtype=float) ** j
        if self.kind == "scale":
            return np.full(j.shape, float(p["c"]))
        if self.kind == "custom":
            return np.asarray(self.func(j), dtype=float)
        raise ValueError(f"unknown multiplier kind {self.kind!r}")

    def __mul__(self, other: "MultiplierSpec") -> "MultiplierSpec":
        a, b = self, other
        return MultiplierSpec("custom", self.n, {"of": [a.describe(), b.describe()]},
                              lambda j: a(j) * b(j))

    def describe(self) -> dict:
        return {"kind": self.kind, **{k: v for k, v in self.params.items() if k != "of"}}


def cosine(alpha: float, n: int) -> MultiplierSpec:
    return MultiplierSpec("cosine", n, {"alpha": float(alpha)})


def poisson(t: float, n: int) -> MultiplierSpec:
    return MultiplierSpec("poisson", n, {"t": float(t)})


def write_multiplier_csv(path, m: MultiplierSpec, J: int) -> None:
    """Dump ``(j, m(j))`` for ``j = 0..J``."""
    js = np.arange(J + 1)
    vals = m(js)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["j", "m"])
        for j, v in zip(js, vals):
            w.writerow([int(j), repr(float(v))])


# ---------------------------------------------------------------------------
# zonal functions

def _zonal_nodes(n: int, N: int):
    if n == 2:
        t, w = roots_chebyt(N)
    else:
        t, w = roots_gegenbauer(N, (n - 2) / 2.0)
    return t, w / w.sum()


@dataclass
class ZonalExpansion:
    """Coefficients ``a_j`` of ``F(t) = sum_j a_j C_j(t)/C_j(1)`` on S^{n-1}."""

    n: int
    coeffs: np.ndarray

    @property
    def J(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, float)
        flat = t.ravel()
        out = np.empty(flat.shape)
        step = max(1, 2_000_000 // (self.J + 1))
        for k in range(0, flat.size, step):
            out[k:k + step] = self.coeffs @ zonal_table(self.J, self.n, flat[k:k + step])
        return out.reshape(t.shape)

    def __call__(self, X, axis=None):
        """Evaluate ``F(theta . axis)`` at unit vectors X (axis defaults to e_n)."""
        X = np.asarray(X, float)
        if axis is None:
            axis = np.eye(self.n)[-1]
        return self.evaluate(X @ np.asarray(axis, float))

    def apply(self, m: MultiplierSpec) -> "ZonalExpansion":
        return apply_multiplier_zonal(self, m)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j", "a"])
            for j, a in enumerate(self.coeffs):
                w.writerow([j, repr(float(a))])


def expand_zonal(F: Callable, n: int, J: int, nodes: int | None = None) -> ZonalExpansion:
    """Zonal coefficients of a profile F on [-1, 1] by Gauss-Gegenbauer quadrature.

    ``a_j = d_n(j) * int F(t) C_j(t)/C_j(1) w(t) dt`` with ``w`` the
    probability weight proportional to ``(1-t^2)^{(n-3)/2}``.
    """
    N = nodes if nodes is not None else 2 * J + 2
    if N < 2 * J:
        raise DegreeOverflow("expand_zonal needs at least 2J nodes")
    t, w = _zonal_nodes(n, N)
    tab = zonal_table(J, n, t)
    d = harmonic_dimension(n, np.arange(J + 1))
    return ZonalExpansion(n, d * (tab @ (w * F(t))))


def apply_multiplier_zonal(E: ZonalExpansion, m: MultiplierSpec) -> ZonalExpansion:
    """Coefficient-wise product with ``m(j)``."""
    return ZonalExpansion(E.n, E.coeffs * m(np.arange(E.J + 1)))


# ---------------------------------------------------------------------------
# general spherical harmonic transform

def _w_prob(d: int) -> float:
    """Normalizer making ``w_d sin^{d-1} psi d psi`` a probability measure on [0, pi]."""
    return float(np.exp(gammaln((d + 1) / 2.0) - 0.5 * np.log(np.pi) - gammaln(d / 2.0)))


def level_table(J: int, d: int, x) -> np.ndarray:
    """Orthonormal level factors ``P[K, k, :]`` at nodes ``x = cos psi`` on S^d.

    ``P[K, k] = N (1-x^2)^{k/2} C^{k+(d-1)/2}_{K-k}(x)`` for ``k <= K``, zero
    otherwise, normalized for the probability measure on S^d.  Built with the
    orthonormal three-term recurrence so no Gegenbauer value overflows.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((J + 1, J + 1) + x.shape)
    s2 = np.clip(1.0 - x * x, 0.0, None)
    wd = _w_prob(d)
    for k in range(J + 1):
        mu = k + (d - 1) / 2.0
        # orthonormal w.r.t. (1-x^2)^{mu-1/2} dx on [-1, 1]
        p0 = np.exp(-0.5 * betaln(0.5, mu + 0.5))
        prev = np.zeros_like(x)
        cur = p0 * s2 ** (k / 2.0) / np.sqrt(wd)
        out[k, k] = cur
        b_prev = 0.0
        for m in range(0, J - k):
            # x p_m = b_{m+1} p_{m+1} + b_m p_{m-1}
            mm = m + 1
            b = np.sqrt(mm * (mm + 2 * mu - 1) / (4.0 * (mm + mu) * (mm + mu - 1)))
            nxt = (x * cur - b_prev * prev) / b
            prev, cur, b_prev = cur, nxt, b
            out[k + mm, k] = cur
    return out


def fourier_table(J: int, phi) -> np.ndarray:
    """Real Fourier basis ``E[m + J]``: 1, sqrt2 cos(m phi), sqrt2 sin(|m| phi)."""
    phi = np.asarray(phi, dtype=float)
    out = np.empty((2 * J + 1,) + phi.shape)
    out[J] = 1.0
    for m in range(1, J + 1):
        out[J + m] = np.sqrt(2.0) * np.cos(m * phi)
        out[J - m] = np.sqrt(2.0) * np.sin(m * phi)
    return out


def hyperspherical_coordinates(X) -> tuple[list, np.ndarray]:
    """Inverse of the grid parametrization: level cosines and azimuth of points X."""
    X = np.asarray(X, dtype=float)
    n = X.shape[-1]
    xs = []
    rest = X
    for lvl in range(n - 2):
        r = np.linalg.norm(rest, axis=-1)
        safe = np.where(r > 0, r, 1.0)
        x = np.clip(rest[..., -1] / safe, -1.0, 1.0)
        xs.append(np.where(r > 0, x, 1.0))
        rest = rest[..., :-1]
    phi = np.arctan2(rest[..., 1], rest[..., 0])
    return xs, phi


class SphericalTransform:
    """Real orthonormal spherical harmonic transform on S^{n-1} up to degree J.

    Parameters
    ----------
    n : int
        Ambient dimension, ``n >= 2``.
    J : int
        Band limit.
    rule : QuadratureRule, optional
        Product rule used for analysis; by default a Gauss product rule with
        ``J + 1`` nodes per level, which integrates products of two degree-J
        harmonics exactly.
    resolution, kind :
        Used to build the default rule.
    """

    def __init__(self, n: int, J: int, rule: QuadratureRule | None = None,
                 resolution: int | None = None, kind: str = "gauss"):
        if n < 2:
            raise ValueError("n >= 2 required")
        self.n = n
        self.J = J
        if rule is None:
            rule = product_quadrature(n, resolution or (J + 1), kind)
        if rule.grid is None:
            raise ValueError("a product rule is required")
        if rule.kind == "gauss" and rule.degree < 2 * J:
            raise DegreeOverflow(f"rule of degree {rule.degree} cannot resolve J={J}")
        self.rule = rule
        g = rule.grid
        self._levels = [level_table(J, n - 1 - lvl, x) for lvl, x in enumerate(g.xs)]
        self._E = fourier_table(J, g.phis)
        self.absm = np.abs(np.arange(-J, J + 1))
        self.shape = (J + 1,) * (n - 2) + (2 * J + 1,)
        self.mask = self._build_mask()
        self.degree = self._degree_array()
        self.even_mask = self.mask & (self.degree % 2 == 0)

    # -- layout ------------------------------------------------------------
    def _build_mask(self):
        idx = np.indices(self.shape)
        ok = np.ones(self.shape, bool)
        ks = [idx[a] for a in range(self.n - 2)] + [np.abs(idx[-1] - self.J)]
        for a in range(len(ks) - 1):
            ok &= ks[a] >= ks[a + 1]
        return ok

    def _degree_array(self):
        if self.n == 2:
            return self.absm.copy()
        return np.indices(self.shape)[0]

    def count(self) -> int:
        return int(self.mask.sum())

    def degree_energy(self, coeffs) -> np.ndarray:
        """L2 norm of each degree component, ``sqrt(sum_{deg=j} c^2)``."""
        e = np.zeros(self.J + 1)
        np.add.at(e, self.degree[self.mask], coeffs[self.mask] ** 2)
        return np.sqrt(e)

    # -- transforms --------------------------------------------------------
    def grid_values(self, f: Callable) -> np.ndarray:
        """Evaluate a callable on the grid, returning the tensor-shaped array."""
        g = self.rule.grid
        pts = grid_points(self.n, g.xs, g.phis)
        return np.asarray(f(pts.reshape(-1, self.n)), float).reshape(g.shape)

    def analysis(self, values) -> np.ndarray:
        """Coefficients from values on the grid (callable or array)."""
        g = self.rule.grid
        if callable(values):
            if self.n >= 4:
                return self._analysis_slabs(values)
            values = self.grid_values(values)
        v = np.asarray(values, float).reshape(g.shape)
        c = np.tensordot(v, (self._E * g.wphi).T, axes=([-1], [0]))
        return self._analysis_levels(c, 0) * self.mask

    def _analysis_levels(self, c, first_level, last_level=None):
        """Contract polar levels ``last_level`` down to ``first_level`` (innermost by default)."""
        g = self.rule.grid
        n, J = self.n, self.J
        L = n - 2
        top = L - 1 if last_level is None else last_level
        for lvl in range(top, first_level - 1, -1):
            P = self._levels[lvl] * g.ws[lvl]  # (K, k, x)
            if lvl == L - 1:
                # innermost level couples to |m|
                Pm = P[:, self.absm, :]  # (K, m, x)
                c = np.einsum("kmx,...xm->...km", Pm, c, optimize=True)
            else:
                pre = c.shape[:lvl]
                rest = c.shape[lvl + 2:]
                R = c.shape[lvl]
                cc = c.reshape((int(np.prod(pre)) if pre else 1, R, J + 1, -1))
                out = np.empty((cc.shape[0], J + 1, J + 1, cc.shape[-1]))
                for b in range(J + 1):
                    out[:, :, b, :] = np.matmul(P[:, b, :], cc[:, :, b, :])
                c = out.reshape(pre + (J + 1, J + 1) + rest)
        return c

    def _analysis_slabs(self, f):
        g = self.rule.grid
        n = self.n
        parts = []
        for i1, x1 in enumerate(g.xs[0]):
            pts = grid_points(n, [np.array([x1])] + g.xs[1:], g.phis)[0]
            v = np.asarray(f(pts.reshape(-1, n)), float).reshape(g.shape[1:])
            c = np.tensordot(v, (self._E * g.wphi).T, axes=([-1], [0]))
            parts.append(self._analysis_levels(c[None], 1)[0])
        c = np.stack(parts)  # (x1, k1, ..., m)
        c = self._analysis_levels(c, 0, 0)
        return c * self.mask

    def synthesis(self, coeffs) -> np.ndarray:
        """Values on the grid (tensor-shaped) from coefficients."""
        n, J = self.n, self.J
        L = n - 2
        c = np.asarray(coeffs, float) * self.mask
        for lvl in range(L):
            P = self._levels[lvl]  # (K, k, x)
            if lvl == L - 1:
                Pm = P[:, self.absm, :]
                c = np.einsum("kmx,...km->...xm", Pm, c, optimize=True)
            else:
                pre = c.shape[:lvl]
                rest = c.shape[lvl + 2:]
                R = P.shape[2]
                cc = c.reshape((int(np.prod(pre)) if pre else 1, J + 1, J + 1, -1))
                out = np.empty((cc.shape[0], R, J + 1, cc.shape[-1]))
                for b in range(J + 1):
                    out[:, :, b, :] = np.matmul(P[:, b, :].T, cc[:, :, b, :])
                c = out.reshape(pre + (R, J + 1) + rest)
        return np.tensordot(c, self._E, axes=([-1], [0]))

    def evaluate(self, coeffs, X, chunk: int | None = None) -> np.ndarray:
        """Evaluate the expansion at arbitrary unit vectors X, shape ``(..., n)``."""
        X = np.asarray(X, float)
        shp = X.shape[:-1]
        X = X.reshape(-1, self.n)
        c = np.asarray(coeffs, float) * self.mask
        J, n = self.J, self.n
        if chunk is None:
            per = (J + 1) ** max(n - 2, 0) * (2 * J + 1)
            chunk = int(max(1, min(4096, 3e7 // per)))
        out = np.empty(len(X))
        for s in range(0, len(X), chunk):
            Xs = X[s:s + chunk]
            xs, phi = hyperspherical_coordinates(Xs)
            E = fourier_table(J, phi)  # (M, p)
            if n == 2:
                out[s:s + chunk] = c @ E
                continue
            tabs = [level_table(J, n - 1 - lvl, x) for lvl, x in enumerate(xs)]
            L = n - 2
            # innermost: T[..., k_{L-1}, p] = sum_m P_L[k_{L-1}, |m|, p] E[m, p] c[..., k_{L-1}, m]
            Pm = tabs[L - 1][:, self.absm, :] * E[None]  # (K, m, p)
            T = np.einsum("kmp,...km->...kp", Pm, c, optimize=True)
            for lvl in range(L - 2, -1, -1):
                P = tabs[lvl]  # (K, k, p)
                T = np.einsum("Kkp,...Kkp->...Kp", P, T, optimize=True)
            out[s:s + chunk] = T.sum(axis=0)
        return out.reshape(shp)


@dataclass
class HarmonicExpansion:
    """Band-limited function on S^{n-1}: a transform plus its coefficients."""

    sht: SphericalTransform
    coeffs: np.ndarray

    @property
    def n(self) -> int:
        return self.sht.n

    @property
    def J(self) -> int:
        return self.sht.J

    def __call__(self, X) -> np.ndarray:
        return self.sht.evaluate(self.coeffs, X)

    def grid(self) -> np.ndarray:
        return self.sht.synthesis(self.coeffs)

    def apply(self, m: MultiplierSpec) -> "HarmonicExpansion":
        return HarmonicExpansion(self.sht, self.coeffs * multiplier_array(self.sht, m))

    def __add__(self, other):
        return HarmonicExpansion(self.sht, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return HarmonicExpansion(self.sht, self.coeffs - other.coeffs)

    def __mul__(self, c: float):
        return HarmonicExpansion(self.sht, self.coeffs * float(c))

    __rmul__ = __mul__

    def mean(self) -> float:
        idx = (0,) * (self.n - 2) + (self.J,)
        return float(self.coeffs[idx])

    def degree_energy(self) -> np.ndarray:
        return self.sht.degree_energy(self.coeffs)

    def coeffs_for(self, sht: SphericalTransform) -> np.ndarray:
        """The same coefficients laid out for another transform of degree >= J."""
        if sht.n != self.n or sht.J < self.J:
            raise DegreeOverflow("target transform must have the same n and at least degree J")
        out = np.zeros(sht.shape)
        J, J2 = self.J, sht.J
        out[(slice(0, J + 1),) * (self.n - 2) + (slice(J2 - J, J2 + J + 1),)] = self.coeffs
        return out

    def to_dict(self) -> dict:
        m = self.sht.mask
        return {"n": self.n, "J": self.J, "coeffs": self.coeffs[m].tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "HarmonicExpansion":
        sht = transform_for(int(d["n"]), int(d["J"]))
        c = np.zeros(sht.shape)
        c[sht.mask] = np.asarray(d["coeffs"], float)
        return cls(sht, c)

    def write_csv(self, path) -> None:
        """Coefficient dump with columns ``degree, index..., value``."""
        idx = np.argwhere(self.sht.mask)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j"] + [f"k{a}" for a in range(1, self.n - 2)] + ["m", "a"])
            for ix in idx:
                t = tuple(ix)
                ks = [int(v) for v in t[1:-1]] if self.n > 2 else []
                w.writerow([int(self.sht.degree[t])] + ks + [int(t[-1]) - self.J, repr(float(self.coeffs[t]))])


_TRANSFORM_CACHE: dict = {}


def transform_for(n: int, J: int, resolution: int | None = None, kind: str = "gauss") -> SphericalTransform:
    """Cached :class:`SphericalTransform` for ``(n, J, resolution, kind)``."""
    key = (n, J, resolution or (J + 1), kind)
    if key not in _TRANSFORM_CACHE:
        if len(_TRANSFORM_CACHE) > 16:
            _TRANSFORM_CACHE.clear()
        _TRANSFORM_CACHE[key] = SphericalTransform(n, J, resolution=resolution, kind=kind)
    return _TRANSFORM_CACHE[key]


def multiplier_array(sht: SphericalTransform, m: MultiplierSpec) -> np.ndarray:
    """Multiplier broadcast onto the coefficient layout."""
    return m(np.arange(sht.J + 1))[sht.degree] * sht.mask


def expand(f: Callable, n: int, J: int, resolution: int | None = None, kind: str = "gauss") -> HarmonicExpansion:
    """Harmonic expansion of a callable up to degree J."""
    sht = transform_for(n, J, resolution, kind)
    return HarmonicExpansion(sht, sht.analysis(f))


# ---------------------------------------------------------------------------
# multiplier operators on sampled functions

def funk_hecke_kernel(m: MultiplierSpec, n: int, J: int) -> Callable:
    """Zonal kernel ``K(t) = sum_{j<=J} m(j) d_n(j) C_j(t)/C_j(1)``."""
    js = np.arange(J + 1)
    coef = m(js) * harmonic_dimension(n, js)

    def K(t):
        return np.tensordot(coef, zonal_table(J, n, t), axes=1)

    return K


def apply_multiplier_grid(f, m: MultiplierSpec, J: int, points, rule: QuadratureRule | None = None,
                          method: str = "auto") -> np.ndarray:
    """Apply a multiplier operator to a sampled function and evaluate at ``points``.

    Parameters
    ----------
    f : callable or ndarray
        Function on S^{n-1}; arrays are values on ``rule.nodes``.
    m : MultiplierSpec
    J : int
        Truncation degree.
    points : ndarray, shape (P, n)
    rule : QuadratureRule, optional
        Must integrate degree ``2J`` exactly.  Defaults to a Gauss product
        rule with ``J + 1`` nodes per level.
    method : {"auto", "transform", "funk_hecke"}
        ``"funk_hecke"`` forms ``p_j(u) = d_n(j) int f C_j(theta.u)/C_j(1)``
        and sums ``m(j) p_j(u)``; ``"transform"`` goes through the spherical
        harmonic transform.  ``"auto"`` picks the transform for product rules.
    """
    points = np.asarray(points, float)
    n = points.shape[-1]
    if rule is None:
        rule = product_quadrature(n, J + 1)
    if rule.kind == "gauss" and rule.degree < 2 * J:
        raise DegreeOverflow(f"rule of degree {rule.degree} cannot resolve J={J}")
    if method == "auto":
        method = "transform" if rule.grid is not None else "funk_hecke"
    if method == "transform":
        sht = SphericalTransform(n, J, rule=rule)
        vals = f if callable(f) else np.asarray(f, float)
        c = sht.analysis(vals)
        return sht.evaluate(c * multiplier_array(sht, m), points)
    vals = f(rule.nodes) if callable(f) else np.asarray(f, float)
    K = funk_hecke_kernel(m, n, J)
    out = np.empty(points.shape[:-1])
    flat = points.reshape(-1, n)
    res = out.reshape(-1)
    step = max(1, int(2e6 // max(len(rule), 1)))
    for s in range(0, len(flat), step):
        T = np.clip(flat[s:s + step] @ rule.nodes.T, -1.0, 1.0)
        res[s:s + step] = K(T) @ (rule.weights * vals)
    return out


def poisson_kernel(t: float, theta, u) -> np.ndarray:
    """Poisson kernel ``(1-t^2) / (1 - 2 t u.theta + t^2)^{n/2}``."""
    theta = np.asarray(theta, float)
    u = np.asarray(u, float)
    n = theta.shape[-1]
    dot = np.sum(theta * u, axis=-1)
    return (1 - t * t) / (1 - 2 * t * dot + t * t) ** (n / 2.0)


def poisson_direct(f, t: float, theta, rule: QuadratureRule) -> np.ndarray:
    """Poisson integral ``(1-t^2) int f(u) |theta - t u|^{-n} du`` by direct quadrature."""
    if not 0 <= t <= 0.999:
        raise ValueError("t must lie in [0, 0.999]")
    vals = f(rule.nodes) if callable(f) else np.asarray(f, float)
    theta = np.asarray(theta, float)
    n = theta.shape[-1]
    dot = np.atleast_2d(theta) @ rule.nodes.T
    K = (1 - t * t) / (1 - 2 * t * dot + t * t) ** (n / 2.0)
    out = K @ (rule.weights * vals)
    return float(out[0]) if theta.ndim == 1 else out
