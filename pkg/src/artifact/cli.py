"""Command-line entry point.

Commands: ``classify``, ``construct``, ``section``, ``verify``, ``qlscan`` and
``gbp {forge, verify}``.  Reports are JSON on stdout (or ``--out``), with
keys sorted so identical inputs give byte-identical output.  A ``--config``
JSON file overrides flags; every effective value is echoed in the report.

Exit codes: 0 pass, 1 mathematical failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# kept in sync with artifact.suites.SUITES; duplicated so --help needs no numpy
SUITES = ("inversion", "funk_inversion", "limit", "quadrature", "factorization", "intertwining",
          "restriction", "positivity", "qalpha", "right_inverse", "volumes")


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# plumbing

def _set_threads(threads):
    if threads is None:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(int(threads))


def _effective(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "config") and v is not None}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                override = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}")
        if not isinstance(override, dict):
            raise ConfigError("config must be a JSON object")
        cfg.update({k.replace("-", "_"): v for k, v in override.items()})
    return cfg


def _echo(cfg: dict) -> dict:
    # the output path is left out so reruns into another file stay byte-identical
    return {k: v for k, v in cfg.items() if k != "out"}


def _emit(obj, out=None) -> None:
    from .bodies import _plain

    text = json.dumps(_plain(obj), indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _load_body(cfg, key="body"):
    from .geometry import body_from_spec, load_body

    spec = cfg.get(key)
    if spec is None:
        raise ConfigError(f"missing --{key}")
    try:
        if isinstance(spec, dict):
            return body_from_spec(spec)
        return load_body(spec)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"bad body spec: {exc}")


def _require(cfg, *keys):
    for k in keys:
        if cfg.get(k) is None:
            raise ConfigError(f"missing --{k.replace('_', '-')}")


def _serializable(K, J):
    """K itself when it has a JSON form, otherwise its tabulated band-limited version."""
    from .geometry import product_quadrature, tabulated_body

    try:
        K.to_spec()
        return K
    except ValueError:
        rule = product_quadrature(K.dim, J + 1)
        return tabulated_body(rule, K.radial(rule.nodes), J)


def _measure(spec: dict):
    import numpy as np

    from .bodies import SphericalMeasure

    n = int(spec["n"])
    dens = spec.get("density")
    density = None
    if dens == "uniform":
        density = lambda X: np.ones(np.asarray(X).shape[:-1])
    elif dens is not None:
        raise ConfigError("measure density must be 'uniform' or absent")
    arr = lambda k: None if spec.get(k) is None else np.asarray(spec[k], float)
    return SphericalMeasure(n, density, arr("atoms"), arr("atom_masses"), arr("subspheres"),
                            arr("subsphere_masses"))


# ---------------------------------------------------------------------------
# commands

def cmd_classify(cfg) -> int:
    from .bodies import classify, classify_negative
    from .qlballs import QlBallSpec, classify_qlball

    if cfg.get("ql"):
        q, ell, n = cfg["ql"]
        _require(cfg, "lam")
        rep = classify_qlball(QlBallSpec(int(n), int(ell), float(q)), float(cfg["lam"]), J=cfg.get("J"))
    elif cfg.get("negative") is not None:
        rep = classify_negative(_load_body(cfg), float(cfg["negative"]), J=cfg.get("J"), rule=cfg.get("rule"))
    else:
        _require(cfg, "lam")
        rep = classify(_load_body(cfg), float(cfg["lam"]), J=cfg.get("J"), rule=cfg.get("rule"),
                       resolution=cfg.get("resolution"))
    out = rep.to_dict()
    out["config"] = _echo(cfg)
    _emit(out, cfg.get("out"))
    if rep.verdict == "FAIL":
        return EXIT_FAIL
    if cfg.get("expect") and cfg["expect"] != rep.verdict:
        return EXIT_FAIL
    return EXIT_OK


def cmd_construct(cfg) -> int:
    from .bodies import construct_ib, example_generators

    J = int(cfg.get("J") or 16)
    if cfg.get("example"):
        params = dict(cfg.get("params") or {})
        if "mu" in params:
            params["mu"] = _measure(params["mu"])
        if "L" in params:
            params["L"] = _load_body({"body": params["L"]})
        ex = example_generators(cfg["example"], **params)
        K = _serializable(ex.body, J)
        meta = {"certified": ex.certified, "verdict": ex.report.verdict}
    else:
        _require(cfg, "lam")
        K = construct_ib(_load_body(cfg), float(cfg["lam"]), J=J, route=cfg.get("route", "auto"))
        K = _serializable(K, J)
        meta = {}
    spec = K.to_spec()
    spec["provenance"] = {"config": _echo(cfg), **meta}
    _emit(spec, cfg.get("out"))
    return EXIT_OK


def cmd_section(cfg) -> int:
    import numpy as np

    from .bodies import section_body, section_ib
    from .geometry import random_frame

    K = _load_body(cfg)
    if cfg.get("frame") is not None:
        eta = np.asarray(cfg["frame"], float)
    else:
        _require(cfg, "m")
        eta = random_frame(K.dim, int(cfg["m"]), seed=int(cfg.get("seed", 0))).basis
    J = int(cfg.get("J") or 16)
    if cfg.get("lam") is not None:
        S = section_ib(K, eta, float(cfg["lam"]))
    else:
        S = section_body(K, eta)
    spec = _serializable(S, J).to_spec()
    spec["provenance"] = {"config": _echo(cfg), "frame": eta.tolist()}
    _emit(spec, cfg.get("out"))
    return EXIT_OK


def cmd_verify(cfg) -> int:
    _require(cfg, "suite")
    params = {k: cfg[k] for k in ("n", "J", "i", "seed", "samples") if cfg.get(k) is not None}
    params.update(cfg.get("params") or {})
    from .suites import run_suite

    try:
        rep = run_suite(cfg["suite"], **params)
    except (TypeError, KeyError) as exc:
        raise ConfigError(str(exc))
    rep["config"] = _echo(cfg)
    _emit(rep, cfg.get("out"))
    return EXIT_OK if rep["pass"] else EXIT_FAIL


def cmd_qlscan(cfg) -> int:
    import csv

    import numpy as np

    from .qlballs import (QlBallSpec, asymptotic_check, gamma_ql_positivity_scan, h_sign_map,
                          write_scan_csv)

    _require(cfg, "mode", "q", "ell")
    q, ell, mode = float(cfg["q"]), int(cfg["ell"]), cfg["mode"]
    out = cfg.get("out")
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        if mode == "gamma":
            from .qlballs import gamma_ql

            s_max, grid = float(cfg.get("s_max", 100.0)), int(cfg.get("grid", 501))
            s = np.linspace(0.0, s_max, grid)
            g = gamma_ql(q, ell, s)
            w = csv.writer(fh)
            w.writerow(["s", "gamma"])
            for a, b in zip(s, g):
                w.writerow([f"{a:.17g}", f"{b:.17g}"])
            rep = gamma_ql_positivity_scan(q, ell, s_max, grid)
            ok = rep["positive"] if q <= 2 else True
        elif mode == "asymptotic":
            rep = asymptotic_check(q, ell)
            w = csv.writer(fh)
            w.writerow(["s", "gamma", "scaled", "constant"])
            for r in rep["rows"]:
                w.writerow([f"{r['s']:.17g}", f"{r['gamma']:.17g}", f"{r['scaled']:.17g}",
                            f"{rep['constant']:.17g}"])
            ok = rep["converging"]
        elif mode == "hmap":
            _require(cfg, "n", "lam")
            spec = QlBallSpec(int(cfg["n"]), ell, q)
            m = h_sign_map(spec, float(cfg["lam"]), int(cfg.get("grid", 48)))
            if out:
                fh.close()
                fh = None
                write_scan_csv(out, m["lengths"], m["h"])
            else:
                w = csv.writer(fh)
                w.writerow(["a", "b", "h"])
                for (a, b), h in zip(m["lengths"], m["h"]):
                    w.writerow([f"{a:.17g}", f"{b:.17g}", f"{h:.17g}"])
            ok = True
        else:
            raise ConfigError("mode must be gamma, asymptotic or hmap")
    finally:
        if fh not in (None, sys.stdout):
            fh.close()
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gbp(cfg) -> int:
    from .gbp import default_gbp_body, forge_counterexample, save_certificate, verify_certificate

    action = cfg.get("action")
    if action == "forge":
        n, i = int(cfg.get("n", 5)), int(cfg.get("i", 4))
        B = _load_body(cfg) if cfg.get("body") else default_gbp_body(n)
        if B.dim != n:
            raise ConfigError("body dimension does not match --n")
        _inst, cert = forge_counterexample(B, i, J=cfg.get("J"), seed=int(cfg.get("seed", 0)),
                                           n_frames=int(cfg.get("frames", 500)))
        cert["config"] = _echo(cfg)
        if cfg.get("out"):
            save_certificate(cert, cfg["out"])
        else:
            _emit(cert)
        return EXIT_OK if cert["pass"] else EXIT_FAIL
    if action == "verify":
        _require(cfg, "certificate")
        try:
            with open(cfg["certificate"]) as fh:
                cert = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read certificate: {exc}")
        rep = verify_certificate(cert)
        rep["config"] = _echo(cfg)
        _emit(rep, cfg.get("out"))
        return EXIT_OK if rep["pass"] else EXIT_FAIL
    raise ConfigError("gbp needs 'forge' or 'verify'")


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, help="BLAS threads (default: library default)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file whose values override flags")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--J", type=int, dest="J")
        return sp

    c = common(sub.add_parser("classify", help="membership test"))
    c.add_argument("--body")
    c.add_argument("--lambda", type=float, dest="lam")
    c.add_argument("--negative", type=float, help="classify at lambda = -p")
    c.add_argument("--ql", type=float, nargs=3, metavar=("Q", "ELL", "N"), help="(q, l)-ball")
    c.add_argument("--rule", choices=["gauss", "orthant"])
    c.add_argument("--resolution", type=int)
    c.add_argument("--expect", choices=["member", "non_member", "inconclusive"])
    c.set_defaults(func=cmd_classify)

    c = common(sub.add_parser("construct", help="intersection body of L, or an example body"))
    c.add_argument("--body")
    c.add_argument("--lambda", type=float, dest="lam")
    c.add_argument("--route", choices=["auto", "multiplier", "direct"])
    c.add_argument("--example", help="power_mean, grassmann_dual, cosine_image or power_lift")
    c.set_defaults(func=cmd_construct)

    c = common(sub.add_parser("section", help="central section, or section generator with --lambda"))
    c.add_argument("--body")
    c.add_argument("--m", type=int, help="section dimension for a random frame")
    c.add_argument("--lambda", type=float, dest="lam")
    c.set_defaults(func=cmd_section)

    c = common(sub.add_parser("verify", help="identity suites"))
    c.add_argument("--suite", choices=SUITES)
    c.add_argument("--n", type=int)
    c.add_argument("--i", type=int)
    c.add_argument("--samples", type=int)
    c.set_defaults(func=cmd_verify)

    c = common(sub.add_parser("qlscan", help="CSV scans for (q, l)-balls"))
    c.add_argument("--mode", choices=["gamma", "asymptotic", "hmap"])
    c.add_argument("--q", type=float)
    c.add_argument("--ell", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--lambda", type=float, dest="lam")
    c.add_argument("--s-max", type=float, dest="s_max")
    c.add_argument("--grid", type=int)
    c.set_defaults(func=cmd_qlscan)

    c = common(sub.add_parser("gbp", help="forge or verify a section-comparison counterexample"))
    c.add_argument("action", choices=["forge", "verify"])
    c.add_argument("certificate", nargs="?")
    c.add_argument("--n", type=int)
    c.add_argument("--i", type=int)
    c.add_argument("--body")
    c.add_argument("--frames", type=int)
    c.set_defaults(func=cmd_gbp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    _set_threads(args.threads)
    from .errors import ArtifactError

    try:
        cfg = _effective(args)
        return args.func(cfg)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except (ArtifactError, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
