"""Scalar special functions and normalizing constants.

Gamma ratios are evaluated in log space with explicit sign tracking, since
many constants involve Gamma at negative arguments.  Sphere measures are
probability measures throughout the package, so surface areas appear only
through :func:`sphere_area`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import DomainError, PoleError

POLE_TOL = 1e-9


def _near_nonpositive_int(x, tol=1e-12):
    x = np.asarray(x, dtype=float)
    r = np.round(x)
    return (r <= 0) & (np.abs(x - r) <= tol)


def log_gamma_signed(x):
    """Return ``(log|Gamma(x)|, sign Gamma(x))``.

    Works elementwise on arrays.  Raises :class:`PoleError` at the
    non-positive integers.

    Examples
    --------
    >>> la, s = log_gamma_signed(-0.5)
    >>> round(s * np.exp(la), 12) == round(-2 * np.sqrt(np.pi), 12)
    True
    """
    xa = np.asarray(x, dtype=float)
    if np.any(_near_nonpositive_int(xa)):
        raise PoleError(f"Gamma has a pole at {x}")
    la = sp.gammaln(xa)
    sg = sp.gammasgn(xa)
    if xa.ndim == 0:
        return float(la), int(sg)
    return la, sg.astype(int)


def gamma_ratio(a, b):
    """Signed ratio ``Gamma(a) / Gamma(b)`` evaluated in log space.

    A pole in the denominator gives 0; a pole in the numerator raises
    :class:`PoleError`.  Broadcasts over array arguments.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    if np.any(_near_nonpositive_int(a)):
        raise PoleError("Gamma pole in numerator")
    zero = _near_nonpositive_int(b)
    bb = np.where(zero, 0.5, b)
    out = sp.gammasgn(a) * sp.gammasgn(bb) * np.exp(sp.gammaln(a) - sp.gammaln(bb))
    out = np.where(zero, 0.0, out)
    return float(out) if out.ndim == 0 else out


def sphere_area(n: int) -> float:
    """Surface area ``sigma_{n-1} = 2 pi^{n/2} / Gamma(n/2)`` of the unit sphere in R^n."""
    if n < 1:
        raise DomainError("sphere_area needs n >= 1")
    return float(2.0 * np.pi ** (n / 2.0) / sp.gamma(n / 2.0))


def radon_limit_constant(i: int) -> float:
    """Constant ``c_i = sigma_{i-1} / (2 pi^{(i-1)/2})``.

    The generalized cosine transform of order 0 on i-planes equals ``c_i``
    times the plain spherical Radon transform.
    """
    return sphere_area(i) / (2.0 * np.pi ** ((i - 1) / 2.0))


def _on_lattice(x: float, start: float, step: float, tol: float = POLE_TOL) -> bool:
    k = (x - start) / step
    r = round(k)
    return r >= 0 and abs(k - r) * abs(step) <= tol


@dataclass(frozen=True)
class AlphaParam:
    """A real continuation parameter together with its excluded sets.

    Parameters
    ----------
    value : float
        The parameter alpha (or lambda).
    kind : str
        ``"cosine"`` for the family with kernel ``|theta.u|^{alpha-1}``
        (poles at 1, 3, 5, ...), ``"radon"`` for the family on i-planes
        (poles where ``alpha + i - n`` is 0, 2, 4, ...).
    n, i : int, optional
        Dimensions needed by the ``"radon"`` kind.
    """

    value: float
    kind: str = "cosine"
    n: int | None = None
    i: int | None = None

    @property
    def pole_flag(self) -> bool:
        a = float(self.value)
        if self.kind == "cosine":
            return _on_lattice(a, 1.0, 2.0)
        if self.kind == "radon":
            return _on_lattice(a + self.i - self.n, 0.0, 2.0)
        raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def zero_flag(self) -> bool:
        """True where ``1/Gamma(alpha/2)`` vanishes (alpha = 0, -2, -4, ...)."""
        return _on_lattice(-float(self.value), 0.0, 2.0)


def _alpha_value(alpha) -> float:
    return float(alpha.value if isinstance(alpha, AlphaParam) else alpha)


def gamma_n_alpha(n: int, alpha) -> float:
    """Normalizer ``gamma_n(alpha) = sigma_{n-1} Gamma((1-alpha)/2) / (2 pi^{(n-1)/2} Gamma(alpha/2))``.

    Returns 0 on the zero set ``alpha = 0, -2, -4, ...`` and raises
    :class:`PoleError` at ``alpha = 1, 3, 5, ...``.
    """
    a = _alpha_value(alpha)
    p = AlphaParam(a, "cosine")
    if p.pole_flag:
        raise PoleError(f"alpha={a} is a pole of Gamma((1-alpha)/2)")
    if p.zero_flag:
        return 0.0
    return sphere_area(n) / (2.0 * np.pi ** ((n - 1) / 2.0)) * gamma_ratio((1.0 - a) / 2.0, a / 2.0)


def gamma_ni_alpha(n: int, i: int, alpha) -> float:
    """Normalizer ``gamma_{n,i}(alpha)`` of the generalized cosine transform on i-planes.

    ``sigma_{n-1} Gamma((n-alpha-i)/2) / (2 pi^{(n-1)/2} Gamma(alpha/2))``;
    coincides with :func:`gamma_n_alpha` when ``i = n-1``.
    """
    a = _alpha_value(alpha)
    p = AlphaParam(a, "radon", n, i)
    if p.pole_flag:
        raise PoleError(f"alpha+i-n={a + i - n} is a pole of Gamma((n-alpha-i)/2)")
    if p.zero_flag:
        return 0.0
    return sphere_area(n) / (2.0 * np.pi ** ((n - 1) / 2.0)) * gamma_ratio((n - a - i) / 2.0, a / 2.0)


def gegenbauer_table(J: int, lam: float, t) -> np.ndarray:
    """Values ``C_j^lam(t)`` for ``j = 0..J`` stacked along a new first axis.

    For ``lam = 0`` the Chebyshev polynomials ``T_j`` are returned, which is
    the limiting zonal basis on the circle.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((J + 1,) + t.shape)
    out[0] = 1.0
    if J == 0:
        return out
    if lam == 0:
        out[1] = t
        for k in range(1, J):
            out[k + 1] = 2.0 * t * out[k] - out[k - 1]
        return out
    out[1] = 2.0 * lam * t
    for k in range(1, J):
        out[k + 1] = (2.0 * t * (k + lam) * out[k] - (k + 2.0 * lam - 1.0) * out[k - 1]) / (k + 1.0)
    return out


def gegenbauer(j: int, lam: float, t):
    """Gegenbauer polynomial ``C_j^lam(t)`` by the three-term recurrence.

    Examples
    --------
    >>> gegenbauer(1, 0.5, 0.3)
    0.3
    """
    v = gegenbauer_table(j, lam, t)[j]
    return float(v) if np.ndim(v) == 0 else v


def zonal_table(J: int, n: int, t) -> np.ndarray:
    """Normalized zonal polynomials ``C_j^{(n-2)/2}(t) / C_j^{(n-2)/2}(1)`` for ``j = 0..J``."""
    lam = (n - 2) / 2.0
    tab = gegenbauer_table(J, lam, t)
    at_one = gegenbauer_table(J, lam, 1.0)
    return tab / at_one.reshape((J + 1,) + (1,) * np.ndim(t))


def harmonic_dimension(n: int, j) -> np.ndarray | int:
    """Dimension ``d_n(j)`` of the space of degree-j spherical harmonics on S^{n-1}."""
    j = np.asarray(j)
    if n == 2:
        d = np.where(j == 0, 1, 2)
    else:
        d = np.where(j == 0, 1, np.round((n + 2 * j - 2) * sp.comb(j + n - 3, j, exact=False) / (n - 2)))
    d = d.astype(np.int64)
    return int(d) if d.ndim == 0 else d


def bessel_j(nu: float, x):
    """Bessel function of the first kind ``J_nu(x)`` for ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("bessel_j expects x >= 0")
    v = sp.jv(nu, x)
    return float(v) if v.ndim == 0 else v


def bessel_k(nu: float, x):
    """Modified Bessel function of the second kind ``K_nu(x)`` for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("bessel_k expects x > 0")
    v = sp.kv(nu, x)
    return float(v) if v.ndim == 0 else v


def gauss_jacobi01(N: int, a: float, b: float):
    """Gauss rule for ``int_0^1 x^a (1-x)^b g(x) dx`` with N nodes.

    Returns nodes in (0, 1) and weights; exact for polynomial g of degree
    up to ``2N - 1``.
    """
    if a <= -1 or b <= -1:
        raise DomainError("Jacobi weight exponents must exceed -1")
    y, w = sp.roots_jacobi(N, b, a)
    return 0.5 * (1.0 + y), w * 2.0 ** (-(a + b + 1.0))


def beta_moment(a: float, b: float) -> float:
    """``int_0^1 x^a (1-x)^b dx = B(a+1, b+1)``."""
    return float(np.exp(sp.betaln(a + 1.0, b + 1.0)))
