"""Fourier-side analysis of (q, l)-balls.

The unit ball of ``(|x'|^q + |x''|^q)^{1/q}`` with ``x''`` the last ``l``
coordinates is studied through the radial kernel

    gamma_{q,l}(s) = int_{R^l} exp(-|y|^q) exp(i y.eta) dy,   s = |eta|,

and the Fourier transform of ``||x||^p``, ``-n < p < 0``, written as a
one-dimensional integral of products of such kernels.  The same product
formula with ``n`` blocks of size one handles l^q balls.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gammaln, j0, j1, jv

from .bodies import ClassificationReport, _plain, _verdict, classify
from .errors import ConvergenceWarning, DomainError, IntegrabilityError
from .geometry import lq_ball, ql_ball
from .special import sphere_area

TAIL_EXPONENT = 60.0      # integrate while exp(-r^q) > exp(-60)
PANEL_NODES = 12          # Gauss-Legendre nodes per Bessel half-period
GRADE_RATIO = 0.2
GRADE_LEVELS = 26
TABLE_SMAX = 300.0
TABLE_PER_DECADE = 150
TABLE_SMIN = 1e-4


@dataclass(frozen=True)
class QlBallSpec:
    """Splitting ``R^n = R^{n-l} + R^l`` and exponent ``q``."""

    n: int
    ell: int
    q: float

    def __post_init__(self):
        if not 0 < self.ell < self.n:
            raise DomainError("need 0 < ell < n")
        if self.q <= 0:
            raise DomainError("need q > 0")

    @property
    def blocks(self) -> tuple:
        return (self.n - self.ell, self.ell)

    def body(self):
        return ql_ball(self.n, self.q, self.ell)


# ---------------------------------------------------------------------------
# the radial kernel gamma_{q,l}

def _bessel_kernel(nu: float, x: np.ndarray) -> np.ndarray:
    """``x^{-nu} J_nu(x)``, bounded and equal to ``1/(2^nu Gamma(nu+1))`` at 0."""
    if nu == -0.5:
        return math.sqrt(2.0 / math.pi) * np.cos(x)
    if nu == 0.5:
        return math.sqrt(2.0 / math.pi) * np.sinc(x / math.pi)
    if nu == 0.0:
        return j0(x)
    at0 = math.exp(-nu * math.log(2.0) - gammaln(nu + 1.0))
    small = x < 1e-6
    xs = np.where(small, 1.0, x)
    if nu == 1.0:
        val = j1(xs) / xs
    else:
        val = jv(nu, xs) * xs ** (-nu)
    return np.where(small, at0 * (1.0 - x * x / (4.0 * (nu + 1.0))), val)


def _graded_panels(r_max: float, width: float) -> np.ndarray:
    """Panel edges on ``[0, r_max]``: uniform of the given width, graded toward 0."""
    m = max(int(math.ceil(r_max / width)), 1)
    edges = np.linspace(0.0, r_max, m + 1)
    first = edges[1]
    graded = first * GRADE_RATIO ** np.arange(GRADE_LEVELS, 0, -1)
    return np.concatenate([[0.0], graded, edges[1:]])


@lru_cache(maxsize=64)
def _radial_rule(q: float, ell: int, s_top: float, nodes: int = PANEL_NODES):
    """Nodes and weights for ``int_0^inf exp(-r^q) r^{l-1} F(r) dr``.

    Panels follow the half period ``pi / s_top`` of the Bessel factor and
    are graded geometrically toward the origin, where ``exp(-r^q)`` is not
    smooth for non-even q.
    """
    r_max = TAIL_EXPONENT ** (1.0 / q)
    width = min(math.pi / max(s_top, 1e-12), r_max / 24.0, 0.5)
    edges = _graded_panels(r_max, width)
    x, w = np.polynomial.legendre.leggauss(nodes)
    a, b = edges[:-1, None], edges[1:, None]
    r = (0.5 * (b - a) * (x + 1.0) + a).ravel()
    wr = (0.5 * (b - a) * w).ravel()
    wr = wr * np.exp(-r ** q) * r ** (ell - 1)
    return r, wr


def _gamma_direct(q: float, ell: int, s: np.ndarray, nodes: int = PANEL_NODES) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    if s.size == 0:
        return out
    nu = 0.5 * ell - 1.0
    pref = (2.0 * math.pi) ** (0.5 * ell)
    order = np.argsort(s)
    # group by magnitude so small s do not pay for the finest panels
    for chunk in np.array_split(order, max(1, s.size // 32)):
        top = float(s[chunk].max())
        top = 2.0 ** math.ceil(math.log2(max(top, 1.0)))
        r, wr = _radial_rule(q, ell, top, nodes)
        step = max(1, int(4e6 // r.size))
        for k in range(0, chunk.size, step):
            idx = chunk[k:k + step]
            out[idx] = pref * (_bessel_kernel(nu, np.outer(s[idx], r)) @ wr)
    return out


def gamma_ql(q: float, ell: int, s, check: bool = False):
    """Fourier transform of ``exp(-|y|^q)`` on ``R^l`` at ``|eta| = s``.

    Parameters
    ----------
    q : float
        Exponent, ``q > 0``.
    ell : int
        Dimension of the block.
    s : float or array_like
        Frequencies, ``s >= 0``.
    check : bool
        Recompute with a denser rule and warn when the two differ by more
        than ``1e-8`` relative.

    Notes
    -----
    Uses ``(2 pi)^{l/2} int exp(-r^q) r^{l-1} (rs)^{1-l/2} J_{l/2-1}(rs) dr``
    on Gauss-Legendre panels one Bessel half-period wide, up to the radius
    where ``exp(-r^q)`` drops below ``exp(-60)``.
    """
    if q <= 0 or ell < 1:
        raise DomainError("need q > 0 and ell >= 1")
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0):
        raise DomainError("gamma_ql expects s >= 0")
    flat = arr.ravel()
    val = _gamma_direct(float(q), int(ell), flat)
    if check:
        ref = _gamma_direct(float(q), int(ell), flat, nodes=PANEL_NODES + 8)
        scale = np.maximum(np.abs(ref), 1e-14 * gamma_ql_at_zero(q, ell))
        bad = np.abs(val - ref) > 1e-8 * scale
        if np.any(bad):
            warnings.warn(f"gamma_ql({q}, {ell}) not converged at {int(bad.sum())} points",
                          ConvergenceWarning, stacklevel=2)
    val = val.reshape(arr.shape)
    return float(val) if val.ndim == 0 else val


def gamma_ql_at_zero(q: float, ell: int) -> float:
    """``int exp(-|y|^q) dy = |S^{l-1}| Gamma(l/q) / q``."""
    return sphere_area(ell) * math.exp(gammaln(ell / q)) / q


def asymptotic_constant(q: float, ell: int) -> float:
    """``lim s^{l+q} gamma_{q,l}(s)``; zero for even integer q."""
    if _even_integer(q):
        return 0.0
    return float(2.0 ** (ell + q) * math.pi ** (0.5 * ell - 1.0)
                 * math.exp(gammaln(1.0 + 0.5 * q) + gammaln(0.5 * (ell + q)))
                 * math.sin(0.5 * math.pi * q))


def _even_integer(q: float) -> bool:
    return abs(q / 2.0 - round(q / 2.0)) < 1e-12


def asymptotic_check(q: float, ell: int, s_list=(25.0, 50.0, 100.0, 200.0, 300.0)) -> dict:
    """Table of ``s^{l+q} gamma_{q,l}(s)`` against its limit.

    For even q the limit is zero and the decay is faster than any power;
    the table then reports ``s^{l+q} gamma`` relative to ``gamma(0)``.
    """
    s = np.asarray(s_list, dtype=float)
    g = np.atleast_1d(gamma_ql(q, ell, s))
    scaled = s ** (ell + q) * g
    c = asymptotic_constant(q, ell)
    rows = []
    if c != 0.0:
        rel = np.abs(scaled / c - 1.0)
        for si, gi, sc, ri in zip(s, g, scaled, rel):
            rows.append({"s": si, "gamma": gi, "scaled": sc, "relative_error": ri})
        monotone = bool(np.all(np.diff(rel) <= 1e-12 + 1e-3 * rel[:-1]))
        return _plain({"q": q, "ell": ell, "constant": c, "rows": rows,
                       "converging": monotone, "final_relative_error": float(rel[-1])})
    g0 = gamma_ql_at_zero(q, ell)
    for si, gi, sc in zip(s, g, scaled):
        rows.append({"s": si, "gamma": gi, "scaled": sc, "scaled_over_gamma0": abs(sc) / g0})
    fast = bool(abs(scaled[-1]) <= 1e-6 * g0)
    return _plain({"q": q, "ell": ell, "constant": 0.0, "rows": rows,
                   "converging": fast, "final_relative_error": abs(scaled[-1]) / g0})


def gamma_ql_positivity_scan(q: float, ell: int, s_max: float = 100.0, grid: int = 2001) -> dict:
    """Sample ``gamma_{q,l}`` on ``[0, s_max]`` and locate its first sign change.

    Values below the resolution floor ``1e-13 gamma(0)`` in absolute value
    carry no sign information; they are counted but never taken as a sign
    change.
    """
    s = np.linspace(0.0, s_max, grid)
    g = np.atleast_1d(gamma_ql(q, ell, s))
    g0 = gamma_ql_at_zero(q, ell)
    floor = 1e-13 * g0
    resolved = np.abs(g) > floor
    signs = np.sign(g[resolved])
    sr = s[resolved]
    change = None
    flips = np.nonzero(signs[1:] != signs[:-1])[0]
    if flips.size:
        k = flips[0]
        lo, hi = float(sr[k]), float(sr[k + 1])
        glo = float(g[resolved][k])
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            gm = float(gamma_ql(q, ell, mid))
            if (gm > 0) == (glo > 0):
                lo, glo = mid, gm
            else:
                hi = mid
        change = 0.5 * (lo + hi)
    k_min = int(np.argmin(g))
    return _plain({
        "q": q, "ell": ell, "s_max": s_max, "grid": grid,
        "min": float(g[k_min]), "argmin": float(s[k_min]), "floor": floor,
        "unresolved_points": int((~resolved).sum()),
        "positive": bool(change is None and g.min() >= -floor),
        "first_sign_change": change,
    })


# ---------------------------------------------------------------------------
# tabulated kernel for the product integrals

class GammaTable:
    """Cubic spline of ``gamma_{q,l}`` in ``log s`` with a power-law tail.

    Beyond ``s_max`` the kernel is replaced by ``C s^{-l-q}`` (or by zero
    for even q).  ``error`` is the largest absolute interpolation error
    observed at the table midpoints.
    """

    def __init__(self, q: float, ell: int, s_max: float = TABLE_SMAX,
                 per_decade: int = TABLE_PER_DECADE):
        self.q, self.ell, self.s_max = float(q), int(ell), float(s_max)
        decades = math.log10(s_max / TABLE_SMIN)
        m = int(math.ceil(decades * per_decade)) + 1
        u = np.linspace(math.log(TABLE_SMIN), math.log(s_max), m)
        vals = _gamma_direct(self.q, self.ell, np.exp(u))
        self.g0 = gamma_ql_at_zero(self.q, self.ell)
        self.g_min = float(vals[0])
        self._spline = CubicSpline(u, vals)
        self.constant = asymptotic_constant(self.q, self.ell)
        mids = 0.5 * (u[1:] + u[:-1])
        probe = mids[:: max(1, mids.size // 60)]
        exact = _gamma_direct(self.q, self.ell, np.exp(probe))
        self.error = float(np.max(np.abs(self._spline(probe) - exact)))

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        lo = s < TABLE_SMIN
        hi = s > self.s_max
        mid = ~(lo | hi)
        out[mid] = self._spline(np.log(s[mid]))
        x = s[lo] / TABLE_SMIN
        out[lo] = self.g0 + (self.g_min - self.g0) * x * x
        out[hi] = self.constant * s[hi] ** (-self.ell - self.q)
        return out


@lru_cache(maxsize=32)
def gamma_table(q: float, ell: int) -> GammaTable:
    return GammaTable(q, ell)


def _log_panels(u0: float, u1: float, width: float, nodes: int):
    m = max(int(math.ceil((u1 - u0) / width)), 1)
    edges = np.linspace(u0, u1, m + 1)
    x, w = np.polynomial.legendre.leggauss(nodes)
    a, b = edges[:-1, None], edges[1:, None]
    return (0.5 * (b - a) * (x + 1.0) + a).ravel(), (0.5 * (b - a) * w).ravel()


def _block_integral(p: float, q: float, dims: tuple, lengths: np.ndarray, nodes: int) -> np.ndarray:
    """``int_0^inf t^{n+p-1} prod_B gamma_{q,d_B}(a_B t) dt`` for rows of ``lengths``."""
    n = sum(dims)
    tables = [gamma_table(q, d) for d in dims]
    out = np.empty(lengths.shape[0])
    mag = np.empty(lengths.shape[0])
    even = _even_integer(q)
    for k, a in enumerate(lengths):
        pos = a[a > 0]
        a_max, a_min = float(pos.max()), float(pos.min())
        t_lo = 1e-3 / a_max
        t_far = TABLE_SMAX / (a_max if even else a_min)
        u, w = _log_panels(math.log(t_lo), math.log(t_far), 0.25, nodes)
        t = np.exp(u)
        f = t ** (n + p)
        for tab, ab in zip(tables, a):
            f = f * (tab(ab * t) if ab > 0 else tab.g0)
        total = float(f @ w)
        mag[k] = float(np.abs(f) @ w)
        g0s = np.prod([tab.g0 for tab in tables])
        total += g0s * t_lo ** (n + p) / (n + p)
        if not even:
            # every factor with a_B > 0 is in its power-law regime beyond t_far
            e = n + p
            coef = 1.0
            for tab, d, ab in zip(tables, dims, a):
                if ab > 0:
                    e -= d + q
                    coef *= tab.constant * ab ** (-d - q)
                else:
                    coef *= tab.g0
            total += coef * t_far ** e / (-e)
            mag[k] += abs(coef * t_far ** e / e)
        out[k] = total
    return out, mag


def h_blocks(p: float, q: float, dims, lengths, error: bool = False):
    """Fourier transform of ``||x||^p`` for the block norm ``(sum_B |x_B|^q)^{1/q}``.

    Parameters
    ----------
    p : float
        Exponent in ``(-n, 0)``.
    q : float
    dims : sequence of int
        Block sizes, summing to ``n``.
    lengths : array_like, shape (..., len(dims))
        Block lengths ``|xi_B|`` of the frequency.
    error : bool
        Also return an error estimate (rule comparison plus table error).

    Returns
    -------
    ndarray
        ``(q / Gamma(-p/q)) int_0^inf t^{n+p-1} prod_B gamma_{q,d_B}(|xi_B| t) dt``.
    """
    dims = tuple(int(d) for d in dims)
    n = sum(dims)
    if not -n < p < 0:
        raise IntegrabilityError(f"p = {p} outside (-n, 0) = ({-n}, 0)")
    A = np.atleast_2d(np.asarray(lengths, dtype=float))
    if A.shape[-1] != len(dims) or np.any(A < 0):
        raise DomainError("lengths must be non-negative, one per block")
    if np.any(np.all(A == 0, axis=-1)):
        raise DomainError("h is not defined at the origin")
    if not _even_integer(q):
        for a in A:
            if n + p - sum(d + q for d, ab in zip(dims, a) if ab > 0) >= 0:
                raise IntegrabilityError("integral diverges on this coordinate subspace")
    c = q * math.exp(-gammaln(-p / q))
    fine, mag = _block_integral(p, q, dims, A, 16)
    fine, mag = c * fine, c * mag
    shape = np.asarray(lengths).shape[:-1]
    if not error:
        return fine.reshape(shape) if shape else float(fine[0])
    coarse = c * _block_integral(p, q, dims, A, 10)[0]
    # table error relative to each kernel's peak, propagated through |integrand|
    tab_err = sum(gamma_table(q, d).error / gamma_table(q, d).g0 for d in dims)
    err = np.abs(fine - coarse) + tab_err * mag + 1e-12 * mag
    if shape:
        return fine.reshape(shape), err.reshape(shape)
    return float(fine[0]), float(err[0])


def h_pql(p: float, q: float, ell: int, a, b, n: int):
    """Fourier transform of ``||x||_{q,l}^p`` at ``|xi'| = a``, ``|xi''| = b``.

    Homogeneous of degree ``-n-p``.
    """
    if not 0 < ell < n:
        raise DomainError("need 0 < ell < n")
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    L = np.stack([a, b], axis=-1)
    return h_blocks(p, q, (n - ell, ell), L)


# ---------------------------------------------------------------------------
# classification

def _arc_directions(count: int) -> np.ndarray:
    phi = (np.arange(count) + 0.5) * (0.5 * math.pi / count)
    return np.stack([np.cos(phi), np.sin(phi)], axis=-1)


def _orthant_directions(n: int, count: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    X = np.abs(rng.standard_normal((count, n)))
    base = [np.ones(n)]
    for k in range(n):
        e = np.full(n, 0.05)
        e[k] = 1.0
        base.append(e)
        f = np.ones(n)
        f[k] = 0.05
        base.append(f)
    X = np.vstack([np.array(base), X])
    X = np.maximum(X, 1e-3)
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def region_label(n: int, q: float, ell: int, lam: float) -> str:
    """Known classification region of ``(q, l, n, lambda)``."""
    if q <= 2:
        return "member_all_lambda"
    if lam >= n - 3:
        return "member_convex_range"
    if lam < max(n - ell, ell) - 2:
        return "non_member_known"
    return "OPEN"


def fourier_sign_scan(p: float, q: float, dims, directions: np.ndarray) -> dict:
    """Values and error estimates of the block-norm transform on directions."""
    dims = tuple(dims)
    if len(dims) == 2:
        L = directions
    else:
        L = np.abs(directions)
    h, err = h_blocks(p, q, dims, L, error=True)
    return {"lengths": L, "h": h, "error": err}


def _fourier_report(body: dict, lam: float, q: float, dims, directions, floor: float) -> ClassificationReport:
    scan = fourier_sign_scan(-lam, q, dims, directions)
    h, err = scan["h"], scan["error"]
    scale = float(np.max(np.abs(h)))
    tol = max(floor * scale, float(np.max(err)))
    k = int(np.argmin(h))
    verdict = _verdict(float(h[k]), tol)
    return ClassificationReport(
        body=body, lam=float(lam), verdict=verdict, min_value=float(h[k]), tolerance=tol,
        degree=0, rule="fourier_scan", resolution=int(len(h)),
        witness=scan["lengths"][k].tolist() if verdict == "non_member" else None,
        certificate="fourier_positive" if verdict == "member" else "",
        extra={"route": "fourier", "scale": scale, "blocks": list(dims)},
    )


def _combine(fourier: ClassificationReport, sphere: ClassificationReport | None) -> tuple[str, bool]:
    if sphere is None:
        return fourier.verdict, True
    pair = {fourier.verdict, sphere.verdict}
    if pair == {"member", "non_member"}:
        return "FAIL", False
    if fourier.verdict == sphere.verdict:
        return fourier.verdict, True
    decided = pair - {"inconclusive"}
    return (decided.pop() if decided else "inconclusive"), True


def classify_qlball(spec: QlBallSpec, lam: float, directions: int = 48, sphere: bool | None = None,
                    J: int | None = None, floor: float = 1e-7) -> ClassificationReport:
    """Membership of the (q, l)-ball via the sign of the transform of ``||x||^{-lambda}``.

    The transform is scanned on ``directions`` points of the quarter circle
    ``(|xi'|, |xi''|) = (cos phi, sin phi)``.  For ``n <= 5`` the sphere-side
    classifier runs as well; conflicting decided verdicts give ``FAIL``.
    ``extra["region"]`` records the known classification region, with
    ``OPEN`` for the unresolved range.
    """
    n, q, ell = spec.n, float(spec.q), spec.ell
    if not 0 < lam < n:
        raise DomainError("need 0 < lambda < n")
    body = spec.body().to_spec()
    four = _fourier_report(body, lam, q, spec.blocks, _arc_directions(directions), floor)
    run_sphere = (n <= 5) if sphere is None else sphere
    sph = classify(spec.body(), lam, J=J) if run_sphere else None
    return _assemble(four, sph, region_label(n, q, ell, lam))


def classify_lq_fourier(n: int, q: float, lam: float, directions: int = 400, sphere: bool = True,
                        J: int | None = None, seed: int = 0, floor: float = 1e-7) -> ClassificationReport:
    """Fourier-side classification of the l^q ball (n blocks of size one)."""
    if not 0 < lam < n:
        raise DomainError("need 0 < lambda < n")
    body = lq_ball(n, q)
    four = _fourier_report(body.to_spec(), lam, q, (1,) * n, _orthant_directions(n, directions, seed), floor)
    sph = classify(body, lam, J=J) if sphere else None
    region = "member_all_lambda" if q <= 2 else ("member_convex_range" if lam >= n - 3 else "non_member_known")
    return _assemble(four, sph, region)


def _assemble(four, sph, region) -> ClassificationReport:
    verdict, agree = _combine(four, sph)
    extra = dict(four.extra)
    extra.update({
        "region": region,
        "fourier_verdict": four.verdict,
        "sphere_verdict": sph.verdict if sph is not None else None,
        "sphere_min": sph.min_value if sph is not None else None,
        "sphere_tolerance": sph.tolerance if sph is not None else None,
        "routes_agree": agree,
    })
    if region == "OPEN":
        extra["note"] = "numerical evidence only; no known classification in this range"
    rep = ClassificationReport(**{**four.__dict__, "verdict": verdict, "extra": extra})
    if sph is not None:
        rep.degree, rep.rule, rep.resolution = sph.degree, "fourier_scan+" + sph.rule, rep.resolution
    return rep


def write_scan_csv(path, lengths: np.ndarray, values: np.ndarray) -> None:
    """CSV with one row per direction: block lengths followed by ``h``."""
    lengths = np.atleast_2d(lengths)
    cols = ["a", "b"] if lengths.shape[1] == 2 else [f"a{k}" for k in range(lengths.shape[1])]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols + ["h"])
        for row, v in zip(lengths, values):
            w.writerow([f"{x:.17g}" for x in row] + [f"{v:.17g}"])


def h_sign_map(spec: QlBallSpec, lam: float, directions: int = 48) -> dict:
    """Transform values on the quarter circle, for CSV output."""
    L = _arc_directions(directions)
    h, err = h_blocks(-lam, spec.q, spec.blocks, L, error=True)
    return {"lengths": L, "h": h, "error": err}
