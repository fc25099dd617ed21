"""Batch front-end: load a JSON configuration, run the requested
verification suite, and emit machine-readable reports.

Subcommands: ``constants`` (the constant bundle for the configured weights),
``check-condition`` (sampled certification of the pointwise weight
condition), ``verify`` (equality-at-extremal and direction checks for the
configured suite), ``integrals`` (closed-form vs. quadrature cross-check),
and ``sweep`` (CSV ratio/deficit sweep).  Exit codes: 0 pass, 1 verification
failure, 2 usage/config error.  Reports are deterministic for a fixed config
and seed; pass ``--no-timestamp`` for byte-identical output across runs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import conditions, constants, functionals, geometry

SCHEMA_VERSION = 1

_ALLOWED_KEYS = {"n", "p", "gamma", "cone", "weights", "suite", "resolution",
                 "samples", "seed", "tolerances", "C0", "K"}
_ALLOWED_CONE_KEYS = {"orthant_mask", "halfspaces"}
_ALLOWED_WEIGHT_KEYS = {"kind", "exponents"}
_ALLOWED_TOLERANCES = {"extremal", "direction", "integral", "condition"}

_DEFAULT_TOLERANCES = {"extremal": 1e-5, "direction": 1e-6,
                       "integral": 1e-6, "condition": 1e-9}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    n: int
    p: float
    gamma: float
    cone: geometry.Cone
    weights: list
    suite: str = "gn"
    resolution: int = 64
    samples: int = 2000
    seed: int = 0
    tolerances: dict = field(default_factory=lambda: dict(_DEFAULT_TOLERANCES))
    C0: Optional[float] = None
    K: Optional[float] = None
    raw: dict = field(default_factory=dict)


def _build_cone(n, spec):
    unknown = set(spec) - _ALLOWED_CONE_KEYS
    if unknown:
        raise ConfigError(f"unknown cone keys: {sorted(unknown)}")
    if ("orthant_mask" in spec) == ("halfspaces" in spec):
        raise ConfigError("cone needs exactly one of orthant_mask/halfspaces")
    if "orthant_mask" in spec:
        mask = spec["orthant_mask"]
        if len(mask) != n:
            raise ConfigError("orthant_mask length must equal n")
        return geometry.Cone.orthant(mask)
    return geometry.Cone.from_halfspaces(spec["halfspaces"])


def _build_weight(n, spec):
    unknown = set(spec) - _ALLOWED_WEIGHT_KEYS
    if unknown:
        raise ConfigError(f"unknown weight keys: {sorted(unknown)}")
    if spec.get("kind") != "monomial":
        raise ConfigError("only monomial weights are configurable")
    exps = spec.get("exponents")
    if exps is None or len(exps) != n:
        raise ConfigError("weight exponents must be a length-n list")
    return geometry.monomial_weight(exps)


def load_config(path, overrides=None):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _ALLOWED_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = dict(raw)
    for key, val in (overrides or {}).items():
        if val is not None:
            merged[key] = val
    for key in ("n", "p", "gamma", "cone", "weights"):
        if key not in merged:
            raise ConfigError(f"missing required config key '{key}'")
    n = merged["n"]
    if int(n) != n or n < 2:
        raise ConfigError("n must be an integer >= 2")
    if merged["p"] <= 1:
        raise ConfigError("p > 1 is required")
    tols = dict(_DEFAULT_TOLERANCES)
    extra = merged.get("tolerances", {})
    unknown = set(extra) - _ALLOWED_TOLERANCES
    if unknown:
        raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
    tols.update(extra)
    cone = _build_cone(int(n), merged["cone"])
    weights = [_build_weight(int(n), w) for w in merged["weights"]]
    if not 1 <= len(weights) <= 3:
        raise ConfigError("between 1 and 3 weights are required")
    return RunConfig(
        n=int(n), p=float(merged["p"]), gamma=float(merged["gamma"]),
        cone=cone, weights=weights, suite=merged.get("suite", "gn"),
        resolution=int(merged.get("resolution", 64)),
        samples=int(merged.get("samples", 2000)),
        seed=int(merged.get("seed", 0)), tolerances=tols,
        C0=merged.get("C0"), K=merged.get("K"), raw=merged)


def _config_hash(cfg):
    blob = json.dumps(cfg.raw, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _emit(payload, out_path, no_timestamp):
    if not no_timestamp:
        payload = dict(payload)
        payload["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%SZ",
                                                time.gmtime())
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _triple(cfg):
    """Expand 1-3 configured weights into the (w1, w2, w3) triple."""
    ws = cfg.weights
    if len(ws) == 1:
        return ws[0], ws[0], ws[0]
    if len(ws) == 2:
        return ws[0], ws[1], ws[0]
    return ws[0], ws[1], ws[2]


def _condition_constants(cfg, params, w1, w2):
    """(C0, K): explicit config values, or the closed-form monomial
    construction, or the equal-weight pair (1, -n-tau)."""
    if cfg.C0 is not None and cfg.K is not None:
        return float(cfg.C0), float(cfg.K)
    if w1 is w2 or (w1.exponents == w2.exponents):
        return 1.0, -float(cfg.n) - w1.degree
    if params.gamma < 1 and w1.kind == "monomial" and w2.kind == "monomial":
        c0, k, _, _ = conditions.monomial_condition_constants(
            params, w1.exponents, w2.exponents)
        return c0, k
    raise ConfigError("C0 and K must be supplied for this weight triple")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_constants(cfg, out_path, no_timestamp):
    params = constants.derive_params(cfg.n, cfg.p, cfg.gamma)
    w1, w2, w3 = _triple(cfg)
    grid = geometry.sphere_cone_quadrature(cfg.cone, cfg.resolution)
    payload = {"schema_version": SCHEMA_VERSION,
               "config_hash": _config_hash(cfg),
               "n": cfg.n, "p": cfg.p, "gamma": cfg.gamma,
               "alpha": params.alpha, "pprime": params.pprime,
               "mode": params.mode.value}
    tau = w1.degree
    ball_mass = geometry.ball_cone_weight_mass(w1, cfg.cone, grid)
    if params.mode is constants.Mode.LOG_SOBOLEV_LIMIT:
        payload["log_sobolev_constant"] = constants.log_sobolev_constant(
            cfg.n, cfg.p, tau, ball_mass)
        payload["ball_mass"] = ball_mass
        _emit(payload, out_path, no_timestamp)
        return 0
    c0, k = _condition_constants(cfg, params, w1, w2)
    bundle = constants.constants_bundle(
        params, w1.degree, w2.degree, w3.degree, C0=c0, K=k,
        ball_mass=ball_mass if w1.degree == w2.degree == w3.degree else None)
    payload["bundle"] = bundle.to_dict()
    payload["ball_mass"] = ball_mass
    _emit(payload, out_path, no_timestamp)
    return 0


def cmd_check_condition(cfg, out_path, no_timestamp):
    params = constants.derive_params(cfg.n, cfg.p, cfg.gamma)
    w1, w2, w3 = _triple(cfg)
    c0, k = _condition_constants(cfg, params, w1, w2)
    if len(cfg.weights) == 2 and params.gamma < 1:
        # derived mixed third weight from the monomial construction
        _, _, deltas, _ = conditions.monomial_condition_constants(
            params, w1.exponents, w2.exponents)
        w3 = geometry.monomial_weight(list(deltas))
    report = conditions.check_condition_C(
        w1, w2, w3, c0, k, params, cfg.cone, samples=cfg.samples,
        rng_seed=cfg.seed)
    payload = {"schema_version": SCHEMA_VERSION,
               "config_hash": _config_hash(cfg),
               "report": report.to_dict()}
    _emit(payload, out_path, no_timestamp)
    return 0 if report.verdict else 1


def _gn_checks(cfg, params, grid, checks):
    w1, w2, w3 = _triple(cfg)
    tau = w1.degree
    ball_mass = geometry.ball_cone_weight_mass(w1, cfg.cone, grid)
    bundle = constants.constants_bundle(params, w1.degree, w2.degree,
                                        w3.degree, ball_mass=ball_mass)
    tol_eq = cfg.tolerances["extremal"]
    tol_dir = cfg.tolerances["direction"]
    lt1 = params.mode is constants.Mode.GAMMA_LT_1
    for lam in (0.5, 1.0, 2.0):
        if lt1:
            u = functionals.PowerExtremal(1.0, lam, (0.0,) * cfg.n,
                                          params.alpha, params.pprime)
        else:
            u = functionals.CompactExtremal(1.0, lam, (0.0,) * cfg.n,
                                            params.alpha, params.pprime)
        r = functionals.gn_ratio(u, w1, w2, w3, bundle, params, cfg.cone,
                                 grid)
        checks.append({"name": f"gn_extremal_equality_lambda_{lam}",
                       "ratio": r.ratio,
                       "pass": bool(abs(r.ratio - 1.0) <= tol_eq)})
    rng = np.random.default_rng(cfg.seed)
    for i in range(max(2, min(cfg.samples // 500, 8))):
        center = np.zeros(cfg.n)
        center[:] = 1.0 + rng.uniform(0.0, 1.0, cfg.n)
        u = functionals.Bump(tuple(center), float(rng.uniform(0.3, 0.9)),
                             float(rng.integers(2, 5)))
        r = functionals.gn_ratio(u, w1, w2, w3, bundle, params, cfg.cone,
                                 grid)
        checks.append({"name": f"gn_direction_bump_{i}",
                       "ratio": r.ratio,
                       "pass": bool(r.ratio <= 1.0 + tol_dir)})


def _log_sobolev_checks(cfg, params, grid, checks):
    w = cfg.weights[0]
    tau = w.degree
    ball_mass = geometry.ball_cone_weight_mass(w, cfg.cone, grid)
    tol = cfg.tolerances["direction"]
    for lam in (0.5, 1.0, 2.0):
        u = functionals.Gaussian(lam, (0.0,) * cfg.n, cfg.p, params.pprime,
                                 cfg.n + tau, ball_mass)
        d = functionals.log_sobolev_deficit(u, w, params, cfg.cone, grid)
        checks.append({"name": f"log_sobolev_gaussian_lambda_{lam}",
                       "deficit": d, "pass": bool(abs(d) <= 1e-6)})
    base = functionals.Gaussian(1.0, (0.0,) * cfg.n, cfg.p, params.pprime,
                                cfg.n + tau, ball_mass)
    pert = functionals.Perturbed(
        base, 0.05, functionals.Bump((1.0,) * cfg.n, 0.5, 2))
    d = functionals.log_sobolev_deficit(pert, w, params, cfg.cone, grid)
    checks.append({"name": "log_sobolev_perturbed_direction",
                   "deficit": d, "pass": bool(d >= -1e-8)})


def _faber_krahn_checks(cfg, params, grid, checks):
    w = cfg.weights[0]
    u = functionals.CompactExtremal(1.0, 1.0, (0.0,) * cfg.n, 0.0,
                                    params.pprime)
    r = functionals.faber_krahn_ratio(u, w, params, cfg.cone, grid)
    checks.append({"name": "faber_krahn_extremal_equality",
                   "ratio": r.ratio,
                   "pass": bool(abs(r.ratio - 1.0) <= 1e-6)})
    iso = functionals.isoperimetric_ratio(
        np.zeros(cfg.n), 1.0, w, cfg.cone, grid)
    checks.append({"name": "isoperimetric_centered_ball_equality",
                   "ratio": iso.ratio,
                   "pass": bool(abs(iso.ratio - 1.0) <= 1e-8)})


def cmd_verify(cfg, out_path, no_timestamp):
    params = constants.derive_params(cfg.n, cfg.p, cfg.gamma)
    grid = geometry.sphere_cone_quadrature(cfg.cone, cfg.resolution)
    checks = []
    suite = cfg.suite
    if suite not in ("gn", "log-sobolev", "faber-krahn", "all"):
        raise ConfigError(f"unknown suite '{suite}'")
    if suite in ("gn", "all") \
            and params.mode is not constants.Mode.LOG_SOBOLEV_LIMIT:
        _gn_checks(cfg, params, grid, checks)
    if suite in ("log-sobolev", "all"):
        _log_sobolev_checks(cfg, params, grid, checks)
    if suite in ("faber-krahn", "all"):
        _faber_krahn_checks(cfg, params, grid, checks)
    all_pass = all(c["pass"] for c in checks)
    payload = {"schema_version": SCHEMA_VERSION,
               "config_hash": _config_hash(cfg),
               "suite": suite, "checks": checks, "all_pass": all_pass}
    _emit(payload, out_path, no_timestamp)
    return 0 if all_pass else 1


def cmd_integrals(cfg, out_path, no_timestamp):
    params = constants.derive_params(cfg.n, cfg.p, max(cfg.gamma, 1.5))
    w = cfg.weights[0]
    grid = geometry.sphere_cone_quadrature(cfg.cone, cfg.resolution)
    pp = params.pprime
    nt = cfg.n + w.degree
    rows = []
    worst = 0.0
    for lam in (0.5, 1.0, 2.0):
        for s in (0.0, 1.0, pp):
            q = (s + nt) / pp + 2.0
            exact = geometry.beta_radial_integral(
                lam, 1.0, q, s, params, w, cfg.cone, grid)
            quad = geometry.cone_integral(
                lambda x, _lam=lam, _q=q, _s=s: (
                    (_lam + np.linalg.norm(x, axis=-1) ** pp) ** (-_q)
                    * np.linalg.norm(x, axis=-1) ** _s),
                w, cfg.cone, grid)
            rel = abs(quad - exact) / abs(exact)
            worst = max(worst, rel)
            rows.append({"kind": "decaying", "lam": lam, "q": q, "s": s,
                         "closed_form": exact, "quadrature": quad,
                         "rel_error": rel})
    tol = cfg.tolerances["integral"]
    payload = {"schema_version": SCHEMA_VERSION,
               "config_hash": _config_hash(cfg),
               "rows": rows, "max_rel_error": worst,
               "pass": bool(worst <= tol)}
    _emit(payload, out_path, no_timestamp)
    return 0 if worst <= tol else 1


def cmd_sweep(cfg, out_path, no_timestamp):
    params0 = constants.derive_params(cfg.n, cfg.p, cfg.gamma)
    grid = geometry.sphere_cone_quadrature(cfg.cone, cfg.resolution)
    w1, w2, w3 = _triple(cfg)
    ball_mass = geometry.ball_cone_weight_mass(w1, cfg.cone, grid)
    gammas = [round(0.7 + 0.05 * i, 2) for i in range(6)]
    lams = (0.5, 1.0, 2.0)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["config_hash", "family", "gamma", "lam", "lhs", "rhs",
                     "ratio", "resolution"])
    h = _config_hash(cfg)
    for g in gammas:
        try:
            params = constants.derive_params(cfg.n, cfg.p, g)
            bundle = constants.constants_bundle(
                params, w1.degree, w2.degree, w3.degree,
                ball_mass=ball_mass)
        except ValueError:
            continue  # gamma outside the admissible range for these weights
        for lam in lams:
            u = functionals.PowerExtremal(1.0, lam, (0.0,) * cfg.n,
                                          params.alpha, params.pprime)
            r = functionals.gn_ratio(u, w1, w2, w3, bundle, params,
                                     cfg.cone, grid)
            writer.writerow([h, "power_extremal", g, lam,
                             repr(r.lhs), repr(r.rhs), repr(r.ratio),
                             cfg.resolution])
    text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _parser():
    parser = argparse.ArgumentParser(
        prog="coneineq",
        description="verification suites for sharp weighted inequalities "
                    "on convex cones")
    parser.add_argument("command",
                        choices=["constants", "check-condition", "verify",
                                 "integrals", "sweep"])
    parser.add_argument("config", help="path to the JSON configuration")
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--p", type=float)
    parser.add_argument("--resolution", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--suite")
    parser.add_argument("--out")
    parser.add_argument("--no-timestamp", action="store_true")
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    overrides = {"gamma": args.gamma, "p": args.p,
                 "resolution": args.resolution, "seed": args.seed,
                 "suite": args.suite}
    try:
        cfg = load_config(args.config, overrides)
        dispatch = {"constants": cmd_constants,
                    "check-condition": cmd_check_condition,
                    "verify": cmd_verify,
                    "integrals": cmd_integrals,
                    "sweep": cmd_sweep}
        return dispatch[args.command](cfg, args.out, args.no_timestamp)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
