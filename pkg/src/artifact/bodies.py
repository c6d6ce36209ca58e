"""Classification and construction of lambda-intersection bodies.

A star body K belongs to the class of lambda-intersection bodies exactly when
``g = s_lambda M^{1+lambda-n} rho_K^lambda`` is a non-negative even measure.
Here ``M^alpha`` acts through its spherical-harmonic multiplier, so ``g`` is
computed coefficient-wise from a spherical harmonic transform of
``rho_K^lambda`` and then synthesized on a grid.

For bodies whose ``g`` is a genuine measure (atoms, densities with
integrable singularities) the truncated series does not converge
pointwise.  The classifier therefore also inspects Poisson-smoothed copies
``Pi_t g`` for a short ladder of ``t < 1``: a non-negative measure has
non-negative Poisson integral for every t, while a sign change of a
continuous density survives smoothing for t close to 1.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import nnls
from scipy.special import betaln, binom

from .errors import ConstructionError, IntegrabilityError, PoleError
from .geometry import (StarBody, callable_body, harmonic_body, midpoint_convexity_check,
                       parallel_section_function, power_body,
                       product_quadrature, subsphere_quadrature, SubspaceFrame,
                       tabulated_body)
from .harmonics import (HarmonicExpansion, MultiplierSpec, SphericalTransform, cosine, poisson,
                        multiplier_array)
from .special import gamma_n_alpha, harmonic_dimension, log_gamma_signed, sphere_area
from .transforms import _complement_within, _restriction_vec, cosine_transform

DEFAULT_LADDER = (1.0, 0.95, 0.9, 0.8, 0.7)
RESOLVED_FRACTION = 1e-3
NODE_BUDGET = 6_000_000
FLOOR = 1e-7

_DEFAULT_J = {2: 128, 3: 64, 4: 48, 5: 40}


def default_degree(n: int) -> int:
    """Band limit used when none is given (shrinks with dimension)."""
    return _DEFAULT_J.get(n, 20)


# ---------------------------------------------------------------------------
# parameters

@dataclass(frozen=True)
class LambdaParam:
    """The order lambda of an intersection-body class in R^n.

    ``branch`` is ``"raw_even_negative"`` for lambda = -2, -4, ... and
    ``"normalized"`` otherwise.  ``s`` is the sign-carrying factor: 1 for
    positive lambda, ``Gamma(lambda/2)`` for negative lambda off the even
    integers.
    """

    value: float
    n: int

    def __post_init__(self):
        lam = float(self.value)
        if abs(lam) < 1e-12:
            raise PoleError("lambda = 0 is excluded")
        k = (lam - self.n) / 2.0
        if lam >= self.n - 1e-12 and abs(k - round(k)) < 1e-12:
            raise PoleError(f"lambda={lam} lies on n, n+2, ...")

    @property
    def branch(self) -> str:
        lam = float(self.value)
        if lam < 0 and abs(lam / 2 - round(lam / 2)) < 1e-12:
            return "raw_even_negative"
        return "normalized"

    @property
    def ell(self) -> int | None:
        return int(round(-self.value / 2)) if self.branch == "raw_even_negative" else None

    @property
    def s(self) -> float:
        lam = float(self.value)
        if lam > 0:
            return 1.0
        if self.branch == "raw_even_negative":
            return 1.0
        la, sg = log_gamma_signed(lam / 2.0)
        return sg * math.exp(la)


def _lam(lam, n) -> LambdaParam:
    return lam if isinstance(lam, LambdaParam) else LambdaParam(float(lam), n)


def construction_constant(lam: float, n: int) -> float:
    """``c_{lambda,n} = pi^{lambda - n/2} (n - lambda) / |lambda|``.

    The absolute value keeps the constant positive for negative lambda,
    where the plain quotient would make every generated body empty.
    """
    return np.pi ** (lam - n / 2.0) * (n - lam) / abs(lam)


# ---------------------------------------------------------------------------
# measures

@dataclass
class SphericalMeasure:
    """Non-negative even measure on S^{n-1}.

    Any combination of a density (vectorized callable, integrated against
    the probability measure), point atoms, and uniform probability measures
    on great subspheres ``S^{n-1} cap span(frame)``.  Atoms are symmetrized
    by splitting each mass between ``theta`` and ``-theta``; densities are
    symmetrized by averaging with their reflection.
    """

    n: int
    density: Callable | None = None
    atoms: np.ndarray | None = None
    atom_masses: np.ndarray | None = None
    subspheres: np.ndarray | None = None
    subsphere_masses: np.ndarray | None = None

    def __post_init__(self):
        if self.atoms is not None:
            a = np.atleast_2d(np.asarray(self.atoms, float))
            self.atoms = a / np.linalg.norm(a, axis=1, keepdims=True)
            m = np.ones(len(a)) if self.atom_masses is None else np.asarray(self.atom_masses, float)
            if np.any(m < 0):
                raise ValueError("atom masses must be non-negative")
            self.atom_masses = m
        if self.subspheres is not None:
            s = np.asarray(self.subspheres, float)
            self.subspheres = s[None] if s.ndim == 2 else s
            m = (np.ones(len(self.subspheres)) if self.subsphere_masses is None
                 else np.asarray(self.subsphere_masses, float))
            if np.any(m < 0):
                raise ValueError("subsphere masses must be non-negative")
            self.subsphere_masses = m

    @property
    def singular(self) -> bool:
        return self.atoms is not None or self.subspheres is not None

    def even_density(self, X) -> np.ndarray:
        X = np.asarray(X, float)
        if self.density is None:
            return np.zeros(X.shape[:-1])
        return 0.5 * (self.density(X) + self.density(-X))

    def total_mass(self, resolution: int = 24) -> float:
        tot = 0.0
        if self.density is not None:
            rule = product_quadrature(self.n, resolution)
            tot += rule.integrate(self.even_density(rule.nodes))
        if self.atoms is not None:
            tot += float(self.atom_masses.sum())
        if self.subspheres is not None:
            tot += float(self.subsphere_masses.sum())
        return tot

    def smoothed(self, t: float, resolution: int = 24) -> Callable:
        """Poisson integral ``Pi_t mu`` as a vectorized function (``t < 1``).

        At ``t = 1`` only a pure density is accepted and returned as is.
        """
        if t >= 1.0:
            if self.singular:
                raise IntegrabilityError("a singular measure has no pointwise values; use t < 1")
            return self.even_density
        n = self.n
        parts = []
        if self.density is not None:
            rule = product_quadrature(n, resolution)
            parts.append((rule.nodes, rule.weights * self.even_density(rule.nodes)))
        if self.atoms is not None:
            parts.append((self.atoms, self.atom_masses))
        if self.subspheres is not None:
            for F, m in zip(self.subspheres, self.subsphere_masses):
                sub = subsphere_quadrature(SubspaceFrame(F), resolution)
                parts.append((sub.nodes, m * sub.weights))
        nodes = np.concatenate([p[0] for p in parts])
        w = np.concatenate([p[1] for p in parts])

        def f(X):
            X = np.asarray(X, float)
            flat = X.reshape(-1, n)
            out = np.empty(len(flat))
            step = max(1, int(4e6 // max(len(nodes), 1)))
            for s in range(0, len(flat), step):
                d = flat[s:s + step] @ nodes.T
                k = ((1 - t * t) / (1 - 2 * t * d + t * t) ** (n / 2.0)
                     + (1 - t * t) / (1 + 2 * t * d + t * t) ** (n / 2.0))
                out[s:s + step] = 0.5 * k @ w
            return out.reshape(X.shape[:-1])

        return f

    def raw_cosine(self, U, exponent: float, resolution: int = 24) -> np.ndarray:
        """``int |theta.u|^exponent d mu(theta)`` at the rows of U.

        Atoms are summed exactly; the density part uses the bi-spherical rule
        and needs ``exponent > -1``.
        """
        U = np.atleast_2d(np.asarray(U, float))
        out = np.zeros(len(U))
        if self.atoms is not None:
            d = np.abs(U @ self.atoms.T)
            with np.errstate(divide="ignore"):
                out += (d ** exponent) @ self.atom_masses
        if self.subspheres is not None:
            for F, m in zip(self.subspheres, self.subsphere_masses):
                sub = subsphere_quadrature(SubspaceFrame(F), resolution)
                with np.errstate(divide="ignore"):
                    out += m * (np.abs(U @ sub.nodes.T) ** exponent) @ sub.weights
        if self.density is not None:
            out += np.array([cosine_transform(self.even_density, u, exponent + 1.0, resolution, raw=True)
                             for u in U])
        return out


# ---------------------------------------------------------------------------
# reports

@dataclass
class ClassificationReport:
    """Verdict of a membership test together with its numerical evidence."""

    body: dict
    lam: float
    verdict: str
    min_value: float
    tolerance: float
    degree: int
    rule: str
    resolution: int
    witness: list | None = None
    branch: str = "normalized"
    certificate: str = ""
    rungs: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        return _plain(d)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _body_id(K: StarBody) -> dict:
    try:
        return K.to_spec()
    except ValueError:
        return {"kind": K.kind, "n": K.dim, "params": _plain(K.params), "symmetry_tag": K.symmetry_tag}


# ---------------------------------------------------------------------------
# classification

def _kinked_on_coordinates(K: StarBody) -> bool:
    """True for l^q-type bodies whose only kinks lie on coordinate hyperplanes."""
    kind, p = K.kind, K.params
    if kind in ("lq_ball", "ql_ball"):
        q = float(p["q"])
        return not (q == round(q) and int(round(q)) % 2 == 0)
    if kind in ("power", "scaled") and isinstance(p.get("base"), dict):
        from .geometry import body_from_spec

        return _kinked_on_coordinates(body_from_spec(p["base"]))
    return False


def choose_transform(K: StarBody, J: int | None = None, rule: str | None = None,
                     resolution: int | None = None) -> SphericalTransform:
    """Transform suited to a body: Gauss rule by default, orthant rule for l^q kinks."""
    n = K.dim
    auto_J = J is None
    if J is None:
        J = default_degree(n)
        if K.expansion is not None:
            J = max(J, K.expansion[0].J)
    J = int(J)
    if rule is None:
        rule = "orthant" if _kinked_on_coordinates(K) else "gauss"
        if rule == "orthant" and resolution is None:
            # keep the orthant grid (2J)^(n-2) * 4J within the node budget
            while _orthant_nodes(n, 2 * J) > NODE_BUDGET and J > 8:
                if not auto_J:
                    rule = "gauss"
                    break
                J -= 2
    if resolution is None:
        resolution = 2 * J if rule == "orthant" else J + 1
    return _cached_transform(n, J, rule, resolution)


def _orthant_nodes(n: int, R: int) -> int:
    return R ** (n - 2) * 2 * R


_SHT_CACHE: dict = {}


def _cached_transform(n, J, rule, resolution) -> SphericalTransform:
    key = (n, J, rule, resolution)
    if key not in _SHT_CACHE:
        if len(_SHT_CACHE) > 6:
            _SHT_CACHE.clear()
        _SHT_CACHE[key] = SphericalTransform(n, J, rule=product_quadrature(n, resolution, rule))
    return _SHT_CACHE[key]


def probe_directions(n: int) -> np.ndarray:
    """Coordinate axes, pairwise diagonals and the main diagonals (up to sign)."""
    P = [np.eye(n)]
    pairs = []
    for a in range(n):
        for b in range(a + 1, n):
            for s in (1.0, -1.0):
                v = np.zeros(n)
                v[a], v[b] = 1.0, s
                pairs.append(v / math.sqrt(2))
    if pairs:
        P.append(np.array(pairs))
    signs = np.array(np.meshgrid(*([[1.0, -1.0]] * (n - 1)), indexing="ij")).reshape(n - 1, -1).T
    P.append(np.hstack([np.ones((len(signs), 1)), signs]) / math.sqrt(n))
    return np.vstack(P)


def tail_bound(terms: np.ndarray, fit: int = 4) -> float:
    """Geometric tail estimate from the last even-degree bounds.

    ``terms[j]`` bounds the sup norm of the degree-j component.  A ratio is
    fitted to the non-increasing envelope over the last ``fit`` even
    degrees; the remainder of the geometric
    series after degree J is returned, or ``inf`` when the fitted ratio
    is not below 1.
    """
    even = np.asarray(terms, float)[::2]
    if np.all(even[-fit:] == 0):
        return 0.0
    # fit the non-increasing envelope: symmetric bodies have whole degrees
    # that vanish, and one small coefficient must not fake a fast decay
    env = np.maximum.accumulate(even[::-1])[::-1][-fit:]
    env = np.maximum(env, 1e-300)
    r = math.exp(np.polyfit(np.arange(len(env)), np.log(env), 1)[0])
    if r >= 0.999:
        return math.inf
    return float(env[-1]) * r / (1.0 - r)


def _verdict(min_value: float, tol: float) -> str:
    if min_value >= -tol:
        return "member"
    if min_value <= -10.0 * tol:
        return "non_member"
    return "inconclusive"


def analyze_density(sht: SphericalTransform, coeffs: np.ndarray, ladder=DEFAULT_LADDER,
                    probes: np.ndarray | None = None, floor: float = FLOOR,
                    extra_error: float = 0.0, full_ladder: bool = False) -> dict:
    """Sign analysis of a function given by coefficients, over a Poisson ladder.

    Rungs are visited in the given order (largest t first).  A rung is
    resolved when its truncation tail is small against the function's
    scale.  Since the Poisson integral of a non-negative function is
    non-negative, the first resolved rung with a decisive verdict settles
    the question unless ``full_ladder`` asks for every rung.

    Returns a dict with the overall verdict, the decisive rung and per-rung
    minima, tails and tolerances.
    """
    n, J = sht.n, sht.J
    js = np.arange(J + 1)
    sq = np.sqrt(harmonic_dimension(n, js).astype(float))
    energy = sht.degree_energy(coeffs)
    rungs = []
    for t in ladder:
        damp = float(t) ** sht.degree
        c = coeffs * damp
        vals = sht.synthesis(c)
        idx = int(np.argmin(vals))
        vmin = float(vals.reshape(-1)[idx])
        witness = sht.rule.nodes[idx]
        if probes is not None and len(probes):
            pv = sht.evaluate(c, probes)
            k = int(np.argmin(pv))
            if pv[k] < vmin:
                vmin, witness = float(pv[k]), probes[k]
        scale = float(np.max(np.abs(vals)))
        tail = tail_bound(float(t) ** js * sq * energy)
        tol = max(floor * scale, tail + extra_error)
        resolved = bool(tail + extra_error <= RESOLVED_FRACTION * scale)
        rungs.append({"t": float(t), "min": vmin, "scale": scale, "tail": tail, "tol": tol,
                      "resolved": resolved, "verdict": _verdict(vmin, tol) if resolved else "unresolved",
                      "witness": np.asarray(witness, float).tolist()})
        if resolved and not full_ladder and rungs[-1]["verdict"] != "inconclusive":
            break
    res = [r for r in rungs if r["resolved"]]
    neg = [r for r in res if r["verdict"] == "non_member"]
    if neg:
        best = min(neg, key=lambda r: r["min"] / r["tol"])
        verdict = "non_member"
    elif res and all(r["verdict"] == "member" for r in res):
        best = res[0]
        verdict = "member"
    else:
        best = res[0] if res else rungs[-1]
        verdict = "inconclusive"
    return {"verdict": verdict, "best": best, "rungs": rungs}


def radial_power_grid(K: StarBody, sht: SphericalTransform, power: float) -> np.ndarray:
    """``rho_K^power`` on the grid of ``sht``.

    Bodies given by a band-limited expansion of ``rho^p`` are synthesized on
    the tensor grid instead of being evaluated point by point.
    """
    if K.expansion is not None and K.expansion[0].J <= sht.J:
        exp, p = K.expansion
        v = sht.synthesis(exp.coeffs_for(sht))
        if np.min(v) <= 0:
            raise ConstructionError("band-limited radial power is not positive on the grid")
        return v ** (power / p)
    return sht.grid_values(lambda X: K.radial(X) ** power)


def membership_density(K: StarBody, lam, sht: SphericalTransform) -> np.ndarray:
    """Coefficients of ``s_lambda M^{1+lambda-n} rho_K^lambda``."""
    n = K.dim
    L = _lam(lam, n)
    c = sht.analysis(radial_power_grid(K, sht, L.value))
    return L.s * c * multiplier_array(sht, cosine(1.0 + L.value - n, n))


def classify(K: StarBody, lam, J: int | None = None, rule: str | None = None,
             resolution: int | None = None, ladder=DEFAULT_LADDER, probes: bool = True,
             floor: float = FLOOR) -> ClassificationReport:
    """Decide membership of K in the lambda-intersection class.

    Parameters
    ----------
    K : StarBody
    lam : float or LambdaParam
        Off the excluded set; ``-2, -4, ...`` dispatch to :func:`classify_negative`.
    J : int, optional
        Band limit; default depends on the dimension.
    rule : {"gauss", "orthant"}, optional
        Analysis grid; chosen from the body when omitted.
    ladder : sequence of float
        Poisson parameters; ``t = 1`` is the unsmoothed density.

    Returns
    -------
    ClassificationReport
        ``verdict`` is ``member`` when every resolved rung has minimum at
        least ``-tol``, ``non_member`` when some resolved rung goes below
        ``-10 tol``, and ``inconclusive`` otherwise.
    """
    n = K.dim
    L = _lam(lam, n)
    if L.branch == "raw_even_negative":
        return classify_negative(K, -L.value, J=J, rule=rule, resolution=resolution)
    sht = choose_transform(K, J, rule, resolution)
    g = membership_density(K, L, sht)
    out = analyze_density(sht, g, ladder, probe_directions(n) if probes else None, floor)
    b = out["best"]
    cert = {"member": "density certificate", "non_member": "sign witness"}.get(out["verdict"], "")
    return ClassificationReport(_body_id(K), L.value, out["verdict"], b["min"], b["tol"], sht.J,
                                sht.rule.kind, sht.rule.grid.shape[0], b["witness"], L.branch,
                                cert, out["rungs"], {"s_lambda": L.s, "t": b["t"]})


def classify_negative(K: StarBody, p: float, J: int | None = None, rule: str | None = None,
                      resolution: int | None = None, atoms_resolution: int | None = None,
                      tol: float = 1e-8) -> ClassificationReport:
    """Membership at ``lambda = -p`` (isometric embedding of the norm into L_p).

    Off the even integers this is :func:`classify` with the sign factor
    ``Gamma(-p/2)``.  For ``p = 2l`` the normalized family degenerates and
    the test is whether ``||u||_K^{2l} = int |theta.u|^{2l} d mu`` has a
    non-negative solution; this is decided by non-negative least squares
    with atoms at the nodes of a product grid, which is a sufficient
    discrete surrogate.
    """
    n = K.dim
    L = LambdaParam(-float(p), n)
    if L.branch == "normalized":
        return classify(K, L, J=J, rule=rule, resolution=resolution)
    ell = L.ell
    res_u = resolution or max(2 * ell + 2, 8)
    U = product_quadrature(n, res_u).nodes
    ares = atoms_resolution or max(2 * ell + 4, 10)
    Th = product_quadrature(n, ares, rule or "gauss").nodes
    Th = Th[(Th[:, -1] > 0) | ((Th[:, -1] == 0) & (Th[:, 0] >= 0))]
    A = np.abs(U @ Th.T) ** (2 * ell)
    b = K.radial(U) ** (-2.0 * ell)
    w, rnorm = nnls(A, b, maxiter=50 * A.shape[1])
    rel = float(rnorm / np.linalg.norm(b))
    if rel <= tol:
        verdict = "member"
    elif rel >= 1e3 * tol:
        verdict = "non_member"
    else:
        verdict = "inconclusive"
    k = int(np.argmax(np.abs(A @ w - b)))
    return ClassificationReport(_body_id(K), L.value, verdict, -rel, tol, 2 * ell, "nnls", ares,
                                U[k].tolist(), L.branch,
                                "non-negative least squares with atoms at grid nodes (sufficient surrogate)",
                                [], {"relative_residual": rel, "atoms": int(len(Th)),
                                     "support": int(np.sum(w > 0)), "mass": float(w.sum())})


def lambda_scan(K: StarBody, lambdas=None, points: int = 40, refine: int = 4, **kw) -> list:
    """Verdicts over a lambda grid in (0, n), refined around verdict changes.

    Returns a list of ``(lambda, verdict)`` sorted by lambda.
    """
    n = K.dim
    if lambdas is None:
        lambdas = np.linspace(0, n, points + 2)[1:-1]
    lambdas = [float(x) for x in lambdas]
    seen = {}

    def run(lam):
        if lam not in seen:
            try:
                seen[lam] = classify(K, lam, **kw).verdict
            except PoleError:
                seen[lam] = "excluded"
        return seen[lam]

    for lam in lambdas:
        run(lam)
    for a, b in zip(lambdas[:-1], lambdas[1:]):
        if seen[a] != seen[b]:
            for lam in np.linspace(a, b, refine + 2)[1:-1]:
                run(float(lam))
    return sorted(seen.items())


def scan_flips(scan: list) -> list:
    """Lambda intervals where the decisive verdict changes (inconclusive points skipped)."""
    pts = [(l, v) for l, v in scan if v in ("member", "non_member")]
    return [(a[0], b[0], a[1], b[1]) for a, b in zip(pts[:-1], pts[1:]) if a[1] != b[1]]


# ---------------------------------------------------------------------------
# construction

def _expansion_body(exp: HarmonicExpansion, power: float, label: str, check_rule=None) -> StarBody:
    vals = exp.grid() if check_rule is None else exp(check_rule.nodes)
    vmin = float(np.min(vals))
    if vmin <= 0:
        raise ConstructionError(f"{label}: defining function reaches {vmin:.3g} <= 0; no star body")
    body = harmonic_body(exp, power)
    body.kind = "harmonic"
    return body


def construct_ib(L: StarBody, lam, J: int | None = None, route: str = "auto",
                 resolution: int | None = None) -> StarBody:
    """The lambda-intersection body K of L.

    ``s_lambda rho_K^lambda = c_{lambda,n}^{-1} M^{1-lambda} rho_L^{n-lambda}``
    off ``lambda = -2l``; ``rho_K^{-2l} = int |theta.u|^{2l} rho_L^{n+2l}(theta) d theta``
    on that branch.

    Parameters
    ----------
    route : {"auto", "multiplier", "direct"}
        ``"direct"`` evaluates the weakly singular integral for lambda < 1 on
        the nodes of a product rule and interpolates; ``"multiplier"``
        applies the multiplier to a harmonic expansion.  ``"auto"`` picks
        the direct route for lambda < 1.

    Raises
    ------
    ConstructionError
        The right-hand side is not positive on the grid.
    """
    n = L.dim
    P = _lam(lam, n)
    lv = P.value
    if lv >= n:
        raise PoleError("construction needs lambda < n")
    J = default_degree(n) if J is None else int(J)
    sht = choose_transform(L, J, resolution=resolution)
    if P.branch == "raw_even_negative":
        ell = P.ell
        c = sht.analysis(radial_power_grid(L, sht, n + 2.0 * ell))
        mult = MultiplierSpec("raw_cosine", n, {"alpha": 1.0 + 2 * ell})
        exp = HarmonicExpansion(sht, c * multiplier_array(sht, mult))
        return _expansion_body(exp, -2.0 * ell, "construction")
    if route == "auto":
        route = "direct" if lv < 1 else "multiplier"
    const = 1.0 / (P.s * construction_constant(lv, n))
    if route == "direct":
        if lv >= 1:
            raise IntegrabilityError("the direct route needs lambda < 1")
        rule = product_quadrature(n, J + 1)
        fL = lambda X: L.radial(X) ** (n - lv)
        vals = const * gamma_n_alpha(n, 1.0 - lv) * np.array(
            [cosine_transform(fL, u, 1.0 - lv, 24, raw=True) for u in rule.nodes])
        if np.min(vals) <= 0:
            raise ConstructionError(f"construction: defining function reaches {np.min(vals):.3g} <= 0")
        return tabulated_body(rule, vals ** (1.0 / lv), J)
    c = sht.analysis(radial_power_grid(L, sht, n - lv))
    exp = HarmonicExpansion(sht, const * c * multiplier_array(sht, cosine(1.0 - lv, n)))
    return _expansion_body(exp, lv, "construction")


def recover_generator(K: StarBody, lam, J: int | None = None) -> HarmonicExpansion:
    """``rho_L^{n-lambda} = s_lambda c_{lambda,n} M^{1-n+lambda} rho_K^lambda`` as an expansion."""
    n = K.dim
    P = _lam(lam, n)
    sht = choose_transform(K, J)
    c = sht.analysis(radial_power_grid(K, sht, P.value))
    m = multiplier_array(sht, cosine(1.0 - n + P.value, n))
    return HarmonicExpansion(sht, P.s * construction_constant(P.value, n) * c * m)


def section_body(K: StarBody, eta) -> StarBody:
    """``K cap eta`` as a body in the coordinates of the orthonormal rows of ``eta``."""
    E = np.atleast_2d(np.asarray(eta, float))
    return callable_body(E.shape[0], lambda Y: K.radial(np.asarray(Y) @ E), label="section")


def section_generator_constant(lam: float, n: int, m: int) -> float:
    """Factor in front of the restriction operator in the section formula."""
    P = LambdaParam(lam, n)
    if P.branch == "raw_even_negative":
        # the unnormalized kernel integrates against probability measures of
        # different spheres on the two sides
        return math.exp(math.lgamma(n / 2.0) - math.lgamma(m / 2.0))
    return np.pi ** ((n - m) / 2.0) * (m - lam) / (n - lam)


def section_ib(L: StarBody, eta, lam, resolution: int = 16) -> StarBody:
    """Body in ``eta`` whose lambda-intersection body is ``IB_lambda(L) cap eta``.

    ``rho^{m-lambda}(u) = c int_{S(eta^perp + R u)} rho_L^{n-lambda}(w) |u.w|^{m-lambda-1} dw``
    with ``c = (m-lambda) sigma_{n-m} / (2 (n-lambda))`` (probability dw), and
    ``c = pi^{(m-n)/2} sigma_{n-m} Gamma(n/2) / (2 Gamma(m/2))`` on the branch
    ``lambda = -2l``.
    """
    E = np.atleast_2d(np.asarray(eta, float))
    m, n = E.shape
    P = _lam(lam, n)
    lv = P.value
    if not 1 < m < n:
        raise ValueError("need 1 < m < n")
    if lv >= m:
        raise IntegrabilityError("section formula needs lambda < m")
    c = section_generator_constant(lv, n, m)
    fL = lambda X: L.radial(X) ** (n - lv)

    def rad(Y):
        Y = np.asarray(Y, float)
        return (c * _restriction_vec(fL, E, Y @ E, lv, resolution)) ** (1.0 / (m - lv))

    return callable_body(m, rad, label="section generator")


# ---------------------------------------------------------------------------
# approximation and examples

def _measure_expansion(mu: SphericalMeasure, t: float, sht: SphericalTransform) -> np.ndarray:
    # the density part is smoothed in coefficient space (exact for band-limited
    # densities); the singular part goes through the kernel sum
    c = np.zeros(sht.shape) if mu.density is None else \
        sht.analysis(mu.even_density) * multiplier_array(sht, poisson(t, mu.n))
    if mu.singular:
        c = c + sht.analysis(SphericalMeasure(mu.n, None, mu.atoms, mu.atom_masses,
                                              mu.subspheres, mu.subsphere_masses).smoothed(t))
    return c


def poisson_approximate(mu: SphericalMeasure, lam, t_list, K: StarBody | None = None,
                        J: int | None = None, check_points: int = 2000, seed=0) -> list:
    """Smooth pairs ``(K_t, L_t)`` with ``s rho_{K_t}^lambda = M^{1-lambda} Pi_t mu``.

    ``rho_{L_t}^{n-lambda} = c_{lambda,n} Pi_t mu``, so that ``K_t = IB_lambda(L_t)``.
    When the limit body K is given, the sup distance of radial functions
    over random directions is reported.

    Returns
    -------
    list of dict with keys ``t``, ``K``, ``L``, ``distance``.
    """
    n = mu.n
    P = _lam(lam, n)
    if P.branch == "raw_even_negative":
        raise PoleError("Poisson approximation is not available on the raw branch")
    lv = P.value
    J = default_degree(n) if J is None else int(J)
    sht = _cached_transform(n, J, "gauss", J + 1)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((check_points, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    out = []
    for t in t_list:
        c = _measure_expansion(mu, t, sht)
        eK = HarmonicExpansion(sht, c * multiplier_array(sht, cosine(1.0 - lv, n)) / P.s)
        eL = HarmonicExpansion(sht, construction_constant(lv, n) * c)
        Kt = _expansion_body(eK, lv, "approximation")
        Lt = _expansion_body(eL, n - lv, "approximation")
        dist = None if K is None else float(np.max(np.abs(Kt.radial(X) - K.radial(X))))
        out.append({"t": float(t), "K": Kt, "L": Lt, "distance": dist})
    return out


@dataclass
class ExampleBody:
    """A generated body with the classification that certifies it."""

    body: StarBody
    lam: float
    report: ClassificationReport
    details: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.report.verdict == "member"


def uniform_power_mean_radius(n: int, lam: float) -> float:
    """Radius of the body ``rho^lambda(u) = int |theta.u|^{-lambda} d theta`` (uniform probability)."""
    # E |theta_1|^{-lam} = Gamma(n/2) Gamma((1-lam)/2) / (sqrt(pi) Gamma((n-lam)/2))
    m = math.exp(-betaln(0.5, (n - 1) / 2.0) + betaln((1.0 - lam) / 2.0, (n - 1) / 2.0))
    return m ** (1.0 / lam)


def power_mean_body(mu: SphericalMeasure, lam: float, J: int | None = None,
                    resolution: int = 24, certify: bool = True) -> ExampleBody:
    """Body with ``rho_K^lambda(u) = int |theta.u|^{-lambda} d mu(theta)``, ``lambda < 1``.

    For ``0 < lambda < 1`` the integral is infinite on ``theta^perp`` for every
    atom, so ``mu`` must then be a density.
    """
    n = mu.n
    if not (lam < 1 and lam != 0):
        raise ValueError("need lambda < 1, lambda != 0")
    if lam > 0 and mu.singular:
        raise ConstructionError("atoms give an unbounded body for 0 < lambda < 1")
    J = default_degree(n) if J is None else int(J)
    rule = product_quadrature(n, J + 1)
    vals = mu.raw_cosine(rule.nodes, -lam, resolution)
    if not np.all(np.isfinite(vals)) or np.min(vals) <= 0:
        raise ConstructionError("defining integral is not positive and finite")
    K = tabulated_body(rule, vals ** (1.0 / lam), J)
    rep = classify(K, lam, J=J) if certify else None
    return ExampleBody(K, lam, rep, {"construction": "power mean of |theta.u|"})


def grassmann_dual_body(frames, masses, i: int, lam: float, spread: float = 0.8,
                        J: int | None = None, certify: bool = True) -> ExampleBody:
    """Body from a measure on (n-i)-planes through the generalized dual transform.

    The identity ``rho^lambda = M^{1-lambda} mu`` with ``mu = c^{-1} R_i^* nu^perp``,
    ``c = 2 pi^{(i-1)/2} / sigma_{i-1}``, turns point masses ``nu`` on
    (n-i)-planes into uniform masses on the great subspheres of their
    orthogonal complements.  Point masses make ``rho`` infinite on
    ``S^{n-1} cap xi``, so ``mu`` is replaced by its Poisson integral
    ``Pi_spread mu`` (``spread < 1``), which keeps the identity and the
    positivity of the membership density.
    """
    frames = np.asarray(frames, float)
    if frames.ndim == 2:
        frames = frames[None]
    n = frames.shape[-1]
    if frames.shape[1] != n - i:
        raise ValueError("frames must span (n-i)-planes")
    if not (lam <= i < n and lam != 0):
        raise ValueError("need lambda <= i < n")
    if spread >= 1.0:
        raise ConstructionError("point masses on planes give an unbounded body; use spread < 1")
    comp = np.array([_complement_within(F, np.eye(n)) for F in frames])
    c = 2 * np.pi ** ((i - 1) / 2.0) / sphere_area(i)
    mu = SphericalMeasure(n, subspheres=comp, subsphere_masses=np.asarray(masses, float) / c)
    P = _lam(lam, n)
    J = default_degree(n) if J is None else int(J)
    sht = _cached_transform(n, J, "gauss", J + 1)
    coef = _measure_expansion(mu, spread, sht)
    exp = HarmonicExpansion(sht, coef * multiplier_array(sht, cosine(1.0 - lam, n)) / P.s)
    K = _expansion_body(exp, lam, "dual Radon example")
    rep = classify(K, lam, J=J) if certify else None
    return ExampleBody(K, lam, rep, {"spread": spread, "i": i, "planes": len(frames)})


def cosine_image_body(mu: SphericalMeasure, i: int, lam: float, spread: float = 1.0,
                      J: int | None = None, certify: bool = True) -> ExampleBody:
    """Body with ``rho^lambda = M^{i-lambda} mu`` for ``(i-1)/2 < lambda <= i < n``.

    Singular measures are replaced by ``Pi_spread mu``.
    """
    n = mu.n
    if not (0 < (i - 1) / 2.0 < lam <= i < n):
        raise ValueError("need (i-1)/2 < lambda <= i < n")
    J = default_degree(n) if J is None else int(J)
    if mu.singular and spread >= 1.0:
        spread = 0.8
    sht = _cached_transform(n, J, "gauss", J + 1)
    coef = sht.analysis(mu.smoothed(spread))
    exp = HarmonicExpansion(sht, coef * multiplier_array(sht, cosine(i - lam, n)))
    K = _expansion_body(exp, lam, "cosine image example")
    rep = classify(K, lam, J=J) if certify else None
    return ExampleBody(K, lam, rep, {"spread": spread, "i": i})


def power_lift_body(L: StarBody, delta: float, lam: float, J: int | None = None,
                    certify: bool = True) -> ExampleBody:
    """``rho_K = rho_L^{lambda/delta}`` from a member L at delta, ``0 < delta < lambda < n``."""
    n = L.dim
    if not 0 < delta < lam < n:
        raise ValueError("need 0 < delta < lambda < n")
    base = classify(L, delta, J=J)
    if base.verdict != "member":
        raise ConstructionError(f"L is not a certified member at delta={delta} ({base.verdict})")
    K = power_body(L, lam / delta)
    rep = classify(K, lam, J=J) if certify else None
    return ExampleBody(K, lam, rep, {"delta": delta, "base_report": base.to_dict()})


EXAMPLE_KINDS = {
    "power_mean": power_mean_body,
    "grassmann_dual": grassmann_dual_body,
    "cosine_image": cosine_image_body,
    "power_lift": power_lift_body,
}


def example_generators(kind: str, **params) -> ExampleBody:
    """Dispatch to one of the explicit member constructions by name."""
    try:
        gen = EXAMPLE_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown example kind {kind!r}; choose from {sorted(EXAMPLE_KINDS)}")
    return gen(**params)


# ---------------------------------------------------------------------------
# convex bodies: second route through parallel sections

def support_point(K: StarBody, u, samples: int = 4000, seed=0) -> tuple[float, np.ndarray]:
    """Support value ``h_K(u) = max_theta rho(theta) theta.u`` and a maximizing boundary point.

    A sampled start is refined by BFGS over unnormalized directions.
    """
    from scipy.optimize import minimize

    u = np.asarray(u, float)
    n = len(u)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((samples, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    X = np.vstack([X, u[None, :]])
    v = K.radial(X) * (X @ u)
    x0 = X[int(np.argmax(v))]

    def neg(x):
        r = np.linalg.norm(x)
        th = x / r
        return -float(K.radial(th[None, :])[0] * (th @ u))

    res = minimize(neg, x0, method="BFGS", options={"gtol": 1e-11})
    if -res.fun >= v.max():
        th = res.x / np.linalg.norm(res.x)
        return float(-res.fun), th * K.radial(th[None, :])[0]
    return float(v.max()), x0 * K.radial(x0[None, :])[0]


def _graded_rule(s0: float, N: int, grade: int = 4):
    """Gauss-Legendre on [s0, 1] clustered at 1 by ``s = 1 - (1-s0)(1-v)^grade``."""
    y, w = np.polynomial.legendre.leggauss(N)
    v = 0.5 * (y + 1)
    wv = 0.5 * w
    s = 1 - (1 - s0) * (1 - v) ** grade
    ds = (1 - s0) * grade * (1 - v) ** (grade - 1)
    return s, wv * ds


def continued_cosine_power(K: StarBody, u, alpha: float, resolution: int = 32, nodes: int = 40,
                           s0: float = 0.1, fit_points: int = 10) -> dict:
    """``M^alpha rho_K^{alpha+n-1}(u)`` from the parallel-section function of K.

    Uses ``I(alpha) = C(alpha) int_0^inf t^{alpha-1} A(t) dt`` with
    ``C(alpha) = 2 (alpha+n-1) gamma_n(alpha) / sigma_{n-1}`` and
    ``A(t) = vol_{n-1}(K cap {t u + u^perp})``, continued to
    ``-2 <= alpha < 1``.  The profile ``A(0)(1 - t^2/h^2)^{(n-1)/2}``, whose
    continuation is a Beta function, is subtracted; the remainder is
    integrated by a polynomial fit in ``t^2`` near 0 and a graded Gauss rule
    near the support value h.  At ``alpha = 0`` the value is
    ``C'(0) A(0)`` and at ``alpha = -2`` it is ``-(n-3) A''(0) / (8 pi^{(n-2)/2})``.
    """
    u = np.asarray(u, float)
    u = u / np.linalg.norm(u)
    n = len(u)
    if not -2.0 - 1e-12 <= alpha < 1.0:
        raise ValueError("continuation implemented for -2 <= alpha < 1")
    p = (n - 1) / 2.0
    h, xs = support_point(K, u)
    A = lambda t: parallel_section_function(K, u, t, resolution, center=(t / h) * xs)
    A0 = A(0.0)
    # even polynomial fit near 0
    ts = h * s0 * np.cos(np.pi * (np.arange(fit_points) + 0.5) / (2 * fit_points))
    At = np.array([A(t) for t in ts])
    V = np.vander(ts ** 2, 4, increasing=True)
    a = np.linalg.lstsq(V, At, rcond=None)[0]
    A2 = 2.0 * a[1]
    trace = {"h": h, "A0": A0, "A2": A2, "fit_residual": float(np.max(np.abs(V @ a - At)))}
    if abs(alpha + 2.0) < 1e-12:
        val = -(n - 3) * A2 / (8 * np.pi ** ((n - 2) / 2.0))
        return {"value": val, **trace}
    if abs(alpha) < 1e-12:
        val = (n - 1) * math.sqrt(np.pi) / (2 * np.pi ** ((n - 1) / 2.0)) * A0
        return {"value": val, **trace}
    C = 2 * (alpha + n - 1) * gamma_n_alpha(n, alpha) / sphere_area(n)
    # remainder D(t) = A(t) - A0 (1 - t^2/h^2)^p; near 0 from the fit
    d = a - A0 * np.array([binom(p, k) * (-1) ** k / h ** (2 * k) for k in range(4)])
    near = sum(d[k] * h ** (2 * k) * s0 ** (alpha + 2 * k) / (alpha + 2 * k) for k in range(1, 4))
    s, w = _graded_rule(s0, nodes)
    D = np.array([A(h * x) for x in s]) - A0 * np.clip(1 - s ** 2, 0, None) ** p
    far = float(np.sum(w * s ** (alpha - 1) * D))
    beta = math.exp(math.lgamma(p + 1) + math.lgamma(alpha / 2.0) - math.lgamma(alpha / 2.0 + p + 1))
    beta *= np.sign(math.gamma(alpha / 2.0)) * np.sign(math.gamma(alpha / 2.0 + p + 1))
    val = C * h ** alpha * (near + far + A0 * beta / 2.0)
    return {"value": float(val), **trace}


def convex_range_check(K: StarBody, lam: float, directions=None, J: int | None = None,
                       resolution: int = 32, agree_tol: float = 1e-4, seed=0) -> dict:
    """Positivity of ``M^{1+lambda-n} rho_K^lambda`` for convex K by two routes.

    The multiplier route evaluates the truncated harmonic series; the
    section route uses :func:`continued_cosine_power`.  Both must be
    non-negative and agree to ``agree_tol`` relative to the largest value.
    """
    n = K.dim
    if not (n - 3 <= lam < n and lam > 0):
        raise ValueError("need n-3 <= lambda < n, lambda > 0")
    convex = midpoint_convexity_check(K, seed=seed)
    if not convex["convex"]:
        import warnings

        from .errors import ConvexityWarning

        warnings.warn("midpoint convexity test failed", ConvexityWarning)
    rep = classify(K, lam, J=J)
    if directions is None:
        rng = np.random.default_rng(seed)
        R = rng.standard_normal((3, n))
        directions = np.vstack([np.eye(n)[:1], np.ones((1, n)) / math.sqrt(n),
                                R / np.linalg.norm(R, axis=1, keepdims=True)])
    directions = np.atleast_2d(np.asarray(directions, float))
    sht = choose_transform(K, J)
    g = membership_density(K, lam, sht)
    mult = sht.evaluate(g, directions)
    alpha = 1.0 + lam - n
    sec = [continued_cosine_power(K, d, alpha, resolution) for d in directions]
    sv = np.array([s["value"] for s in sec])
    scale = max(float(np.max(np.abs(mult))), 1e-300)
    diff = float(np.max(np.abs(mult - sv)))
    tol = max(rep.tolerance, FLOOR * scale)
    ok = bool(diff <= agree_tol * scale and mult.min() >= -tol and sv.min() >= -tol)
    return {"report": rep, "convexity": convex, "directions": directions.tolist(),
            "multiplier_values": mult.tolist(), "section_values": sv.tolist(),
            "max_difference": diff, "relative_difference": diff / scale, "pass": ok,
            "trace": sec}
