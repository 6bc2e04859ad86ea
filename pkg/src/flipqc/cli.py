"""Command-line front end.

    flipqc <command> --config run.json [--out report.json] [--format json|csv] [--seed N] [--trunc D]

The config is one JSON document with the keys ``geometry``, ``params`` and
(optionally) ``output``.  Complex numbers are written as [re, im].  Exit
codes: 0 all checks pass, 1 a check failed, 2 configuration error,
3 numerical failure.
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
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import (BasisClass, asymptotic_class_check, exponential_ray, fm_class, psi_class,
                          tame_equivalence_report, tame_ray)
from .charclasses import ch_line, reflection_identity_check, relative_gamma_T, todd_from_gamma_check
from .errors import ConfigError, NumericalError
from .fm import fm_coefficients
from .geometry import BaseSpec, GeometryConfig, build_classical_ring, sample_equivariant_params
from .jfunctions import central_charge, modified_j_eval
from .localization import fixed_point_class, residue_pushforward
from .meijer import (MeijerParams, barnes_leading, contour_scaled, fit_barnes_Mk, meijer_eval, series_scaled)
from .spectrum import char_poly_block_check, computed_spectrum, eigenvalue_lambda

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

GEOMETRY_KEYS = {"r", "s", "base", "mode", "rho", "sigma", "q", "random_roots"}
PARAM_KEYS = {
    "spectrum": {"q_values", "tol"},
    "charpoly": {"q_values", "tol", "dps"},
    "jfun": {"q", "z_values", "arg_q_over_z", "deriv_order"},
    "charge": {"class", "q", "z_abs", "ray_arg", "route", "deriv_order", "tol"},
    "meijer": {"a", "b", "n", "t", "arg_t", "points", "rel_tol"},
    "barnes": {"a", "b", "K", "t_values", "grid", "tol"},
    "asym": {"class", "lambda", "lambda_index", "ray_arg", "strength", "derivative_order", "z_abs", "tol", "q"},
    "tame": {"l", "q", "z_abs", "ratio_tol", "ray_arg"},
    "fm": {"tol"},
    "selftest": set(),
}
COMMANDS = tuple(PARAM_KEYS)


# -- config parsing ---------------------------------------------------------------

def parse_complex(v, what: str = "value") -> complex:
    if isinstance(v, bool):
        raise ConfigError(f"{what}: expected a number")
    if isinstance(v, (int, float, complex)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                                                   for x in v):
        return complex(v[0], v[1])
    raise ConfigError(f"{what}: expected a number or [re, im]")


def enc(x):
    """JSON-safe form: complex -> [re, im], non-finite -> None."""
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        if not (math.isfinite(x.real) and math.isfinite(x.imag)):
            return None
        return [x.real, x.imag]
    if isinstance(x, (float, np.floating)):
        return float(x) if math.isfinite(x) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [enc(v) for v in x]
    return x


def parse_base(v) -> BaseSpec:
    if v is None or v == "pt":
        return BaseSpec.point()
    if isinstance(v, str) and v.startswith("P") and v[1:].isdigit():
        return BaseSpec.projective(int(v[1:]))
    if isinstance(v, dict) and set(v) == {"projective"}:
        return BaseSpec.projective(int(v["projective"]))
    if isinstance(v, dict) and set(v) == {"product"} and isinstance(v["product"], list):
        return BaseSpec.product(*[parse_base(f) for f in v["product"]])
    raise ConfigError(f"unknown base {v!r} (use 'pt', 'P<n>', {{'projective': n}} or {{'product': [...]}})")


def parse_geometry(g, seed: int) -> GeometryConfig:
    if not isinstance(g, dict):
        raise ConfigError("'geometry' must be an object")
    extra = set(g) - GEOMETRY_KEYS
    if extra:
        raise ConfigError(f"unknown geometry keys: {sorted(extra)}")
    if "r" not in g:
        raise ConfigError("geometry needs 'r'")
    r, s = g["r"], g.get("s", 0)
    if not isinstance(r, int) or not isinstance(s, int) or isinstance(r, bool) or isinstance(s, bool):
        raise ConfigError("r and s must be integers")
    base = parse_base(g.get("base"))
    q = parse_complex(g.get("q", 1.0), "q")
    mode = g.get("mode")
    if g.get("random_roots"):
        if "rho" in g or "sigma" in g:
            raise ConfigError("random_roots excludes explicit rho/sigma")
        rho, sigma = sample_equivariant_params(seed, r, s)
        return GeometryConfig(r, s, base, "equivariant", rho, sigma, q)
    rho = [parse_complex(x, "rho") for x in g.get("rho", [])]
    sigma = [parse_complex(x, "sigma") for x in g.get("sigma", [])]
    return GeometryConfig(r, s, base, mode, rho, sigma, q)


def load_config(path: str | None) -> dict:
    if not path:
        raise ConfigError("--config is required")
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {path} not found")
    text = p.read_text()
    if not text.strip():
        raise ConfigError("config file is empty")
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(cfg) - {"geometry", "params", "output"}
    if extra:
        raise ConfigError(f"unknown top-level keys: {sorted(extra)}")
    out = cfg.get("output", {})
    if not isinstance(out, dict) or set(out) - {"path", "format"}:
        raise ConfigError("'output' takes only 'path' and 'format'")
    return cfg


def _params(cfg: dict, command: str) -> dict:
    p = cfg.get("params", {})
    if not isinstance(p, dict):
        raise ConfigError("'params' must be an object")
    extra = set(p) - PARAM_KEYS[command]
    if extra:
        raise ConfigError(f"unknown params for {command}: {sorted(extra)}")
    return p


def _geometry(cfg: dict, seed: int) -> GeometryConfig:
    if "geometry" not in cfg:
        raise ConfigError("this command needs a 'geometry' section")
    return parse_geometry(cfg["geometry"], seed)


def _class_spec(spec) -> tuple[str, int]:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("class must be one of {'psi': m}, {'fm': l}, {'ch': m}, {'fixed': k}")
    (kind, idx), = spec.items()
    if kind not in ("psi", "fm", "ch", "fixed") or not isinstance(idx, int):
        raise ConfigError(f"bad class specification {spec!r}")
    return kind, idx


def build_class(g: GeometryConfig, spec, symbolic: bool = False):
    kind, idx = _class_spec(spec)
    if kind in ("psi", "fm") and symbolic:
        return BasisClass(kind, idx)
    if kind == "psi":
        return psi_class(g, idx)
    if kind == "fm":
        if not g.equivariant or not 0 <= idx < g.s:
            raise ConfigError("fm classes need equivariant roots and 0 <= l < s")
        return fm_class(g, idx)
    if kind == "ch":
        if g.equivariant:
            return relative_gamma_T(g) * ch_line(g, idx)
        R = build_classical_ring(g)
        return relative_gamma_T(g, ring=R) * ch_line(g, idx, R)
    if not g.equivariant or not 0 <= idx < g.r:
        raise ConfigError("fixed-point classes need equivariant roots and 0 <= k < r")
    return fixed_point_class(g, idx)


def _zgrid(p, key="z_abs"):
    if key not in p:
        return None
    v = p[key]
    if isinstance(v, dict) and set(v) <= {"start", "stop", "num"}:
        return list(np.geomspace(float(v["start"]), float(v["stop"]), int(v.get("num", 12))))
    if isinstance(v, list) and all(isinstance(x, (int, float)) for x in v):
        return [float(x) for x in v]
    raise ConfigError(f"{key}: list of |z| values or {{start, stop, num}}")


# -- commands -----------------------------------------------------------------------

def cmd_spectrum(cfg, p, seed, trunc):
    g = _geometry(cfg, seed)
    tol = float(p.get("tol", 1e-9))
    qs = [parse_complex(v, "q_values") for v in p.get("q_values", [])] or [g.q_value]
    checks = []
    for q in qs:
        rep = computed_spectrum(g, q)
        checks.append({"q": q, "eigenvalues": rep.computed.to_json(), "expected": rep.theoretical.to_json(),
                       "match_error": rep.max_match_error, "zero_multiplicity": rep.zero_multiplicity,
                       "tolerance": tol, "pass": rep.max_match_error < tol})
    return {"geometry": g.describe(), "checks": checks}, all(c["pass"] for c in checks)


def cmd_charpoly(cfg, p, seed, trunc):
    g = _geometry(cfg, seed)
    tol = float(p.get("tol", 1e-8))
    qs = [parse_complex(v, "q_values") for v in p.get("q_values", [])] or [g.q_value]
    checks = []
    for q in qs:
        err = char_poly_block_check(g, q, int(p.get("dps", 60)))
        checks.append({"q": q, "coefficient_error": err, "tolerance": tol, "pass": err < tol})
    return {"geometry": g.describe(), "checks": checks}, all(c["pass"] for c in checks)


def _ring_json(x):
    if hasattr(x, "values"):
        return [enc(list(v.coeffs)) for v in x.values]
    return enc(list(x.coeffs))


def cmd_jfun(cfg, p, seed, trunc):
    g = _geometry(cfg, seed)
    q = parse_complex(p.get("q", g.q_value), "q")
    zs = [parse_complex(z, "z_values") for z in p.get("z_values", [1.0])]
    arg = p.get("arg_q_over_z")
    rows = []
    for z in zs:
        R = None if g.equivariant else build_classical_ring(g)
        val = modified_j_eval(g, q, z, arg, D=trunc, ring=R, deriv_order=int(p.get("deriv_order", 0)))
        rows.append({"z": z, "value": _ring_json(val), "truncation": trunc})
    return {"geometry": g.describe(), "mode": g.mode, "values": rows}, True


def cmd_charge(cfg, p, seed, trunc):
    g = _geometry(cfg, seed)
    q = parse_complex(p.get("q", g.q_value), "q")
    route = p.get("route", "meijer" if g.base_dim == 1 else "series")
    if route not in ("series", "meijer", "both"):
        raise ConfigError("route is 'series', 'meijer' or 'both'")
    ray = float(p.get("ray_arg", 0.0))
    zabs = _zgrid(p) or [1.0, 0.5, 0.25]
    tol = float(p.get("tol", 1e-8))
    cls = build_class(g, p.get("class", {"psi": 0}))
    d = int(p.get("deriv_order", 0))
    samples, ok = [], True
    for za in zabs:
        z = za * abs(q) * np.exp(1j * (ray + np.angle(q)))
        row = {"abs_z": za * abs(q)}
        if route in ("series", "both"):
            row["series"] = central_charge(g, cls, q, z, -ray, deriv_order=d)
            row["value"] = row["series"]
        if route in ("meijer", "both"):
            row["meijer"] = central_charge(g, cls, q, z, -ray, deriv_order=d, route="meijer")
            row["value"] = row["meijer"]
        if route == "both":
            dev = abs(row["series"] - row["meijer"]) / max(abs(row["meijer"]), 1e-300)
            row.update(rel_diff=dev, tolerance=tol, **{"pass": dev < tol})
            ok = ok and dev < tol
        samples.append(row)
    return {"geometry": g.describe(), "route": route, "ray_arg": ray, "samples": samples}, ok


def _meijer_params(p) -> MeijerParams:
    try:
        a = [parse_complex(x, "a") for x in p.get("a", [])]
        b = [parse_complex(x, "b") for x in p.get("b", [])]
    except TypeError as exc:
        raise ConfigError("a and b are lists") from exc
    return MeijerParams.of(a, b, int(p.get("n", 0)))


def _log_t(t: complex, arg_t):
    if t == 0:
        raise ConfigError("t must be nonzero")
    return complex(math.log(abs(t)), float(np.angle(t)) if arg_t is None else float(arg_t))


def cmd_meijer(cfg, p, seed, trunc):
    P = _meijer_params(p)
    tol = float(p.get("rel_tol", 1e-8))
    pts = p.get("points")
    if pts is None:
        pts = [{"t": p.get("t", 1.0), "arg_t": p.get("arg_t")}]
    out, ok = [], True
    for pt in pts:
        if not isinstance(pt, dict) or set(pt) - {"t", "arg_t"}:
            raise ConfigError("points entries take 't' and 'arg_t'")
        t = parse_complex(pt.get("t", 1.0), "t")
        Lt = _log_t(t, pt.get("arg_t"))
        row = {"t": t, "arg_t": Lt.imag}
        vals = {}
        try:
            vals["series"] = series_scaled(P, Lt).value
        except NumericalError as exc:
            row["series_error"] = str(exc)
        try:
            vals["contour"] = contour_scaled(P, Lt).value
        except NumericalError as exc:
            row["contour_error"] = str(exc)
        res = meijer_eval(P, Lt)
        row["value"] = res.value.value()
        row["method"] = res.method
        for k, v in vals.items():
            row[k] = v.value()
        ref = vals.get("contour") or vals.get("series")
        other = vals.get("series") if "contour" in vals else None
        if other is None:
            other = res.value
        dev = ref.rel_diff(other) if ref is not None else math.nan
        row.update(cross_rel_diff=dev, tolerance=tol, **{"pass": bool(dev <= tol)})
        ok = ok and row["pass"]
        out.append(row)
    return {"params": {"m": P.m, "n": P.n, "p": P.p, "q": P.q_, "a": list(P.a), "b": list(P.b)},
            "points": out}, ok


def cmd_barnes(cfg, p, seed, trunc):
    P = _meijer_params(p)
    K = int(p.get("K", trunc if trunc is not None else 3))
    tol = float(p.get("tol", 1e-3))
    grid = p.get("grid")
    M = fit_barnes_Mk(P, K, grid)
    exp_ = barnes_leading(P)
    exp_.M = M
    rows = []
    for tv in p.get("t_values", [1e2, 1e3, 1e4]):
        t = parse_complex(tv, "t_values")
        Lt = _log_t(t, None)
        G = meijer_eval(P, Lt).value
        ratio = (G / exp_.evaluate(Lt, K)).value()
        rows.append({"t": t, "ratio": ratio, "deviation": abs(ratio - 1), "tolerance": tol})
    ok = bool(rows) and rows[-1]["deviation"] < tol
    return {"K": K, "theta": exp_.theta, "M": M, "table": rows}, ok


def cmd_asym(cfg, p, seed, trunc):
    g = _geometry(cfg, seed)
    q = parse_complex(p.get("q", g.q_value), "q")
    spec = p.get("class", {"psi": 0})
    kind, idx = _class_spec(spec)
    cls = build_class(g, spec, symbolic=True)
    if "lambda" in p:
        lam = parse_complex(p["lambda"], "lambda")
    elif kind == "fm":
        lam = 0j
    else:
        j = int(p.get("lambda_index", idx))
        lam = eigenvalue_lambda(j, g.r, g.s, q)
    if "ray_arg" in p:
        ray = float(p["ray_arg"])
    else:
        ray = tame_ray(g) if kind == "fm" else exponential_ray(g, idx if kind in ("psi", "ch") else 0)
    rep = asymptotic_class_check(g, cls, lam, ray, p.get("strength", "weak"), int(p.get("derivative_order", 0)),
                                 q, _zgrid(p), float(p.get("tol", 0.1)))
    return {"geometry": g.describe(), **rep.to_json()}, rep.passed


def cmd_tame(cfg, p, seed, trunc):
    g = _geometry(cfg, seed)
    q = parse_complex(p.get("q", g.q_value), "q")
    ray = p.get("ray_arg")
    rep = tame_equivalence_report(g, int(p.get("l", 0)), q, _zgrid(p), float(p.get("ratio_tol", 1e-2)),
                                  None if ray is None else float(ray))
    return {"geometry": g.describe(), **rep.to_json()}, rep.passed


def cmd_fm(cfg, p, seed, trunc):
    g = _geometry(cfg, seed)
    C = fm_coefficients(g).C
    tol = float(p.get("tol", 1e-12))
    res = {"geometry": g.describe(), "C": enc(C)}
    ok = True
    if g.s == 1:
        dev = float(np.abs(C[:, 0] - 1).max())
        res["unit_column_deviation"] = dev
        res["tolerance"] = tol
        ok = dev <= tol
    return res, ok


def cmd_selftest(cfg, p, seed, trunc):
    """Small invariant suite covering every module."""
    checks = []

    def add(name, err, tol):
        checks.append({"check": name, "error": float(err), "tolerance": tol, "pass": bool(err < tol)})

    add("spectrum r=3 s=1 pt", computed_spectrum(GeometryConfig(3, 1)).max_match_error, 1e-9)
    add("spectrum r=4 s=2 P1", computed_spectrum(GeometryConfig(4, 2, BaseSpec.projective(1))).max_match_error, 1e-9)
    add("charpoly r=3 s=1 P1", char_poly_block_check(GeometryConfig(3, 1, BaseSpec.projective(1))), 1e-8)
    add("gamma reflection", reflection_identity_check(6)[1], 1e-12)
    add("todd from gamma", todd_from_gamma_check([0.1, -0.2, 0.05]), 1e-12)
    e = meijer_eval(MeijerParams.of([], [0.0]), 0j).value.value()
    add("G^{1,0}_{0,1}(1) = 1/e", abs(e - math.exp(-1)) / math.exp(-1), 1e-10)
    rho, sigma = sample_equivariant_params(seed, 3, 1)
    g = GeometryConfig(3, 1, rho=rho, sigma=sigma)
    add("fm s=1 unit column", float(np.abs(fm_coefficients(g).C[:, 0] - 1).max()), 1e-12)
    R = build_classical_ring(g)
    H = R.H()
    add("pushforward H^(r-1)", abs(residue_pushforward(g, H ** 2).scalar_part() - 1), 1e-10)
    z = 0.6 * np.exp(0.2j)
    a = central_charge(g, psi_class(g, 0), 1.0, z)
    b = central_charge(g, psi_class(g, 0), 1.0, z, route="meijer")
    add("central charge series vs meijer", abs(a - b) / abs(b), 1e-8)
    return {"checks": checks}, all(c["pass"] for c in checks)


HANDLERS = {
    "spectrum": cmd_spectrum, "charpoly": cmd_charpoly, "jfun": cmd_jfun, "charge": cmd_charge,
    "meijer": cmd_meijer, "barnes": cmd_barnes, "asym": cmd_asym, "tame": cmd_tame, "fm": cmd_fm,
    "selftest": cmd_selftest,
}


# -- report emission -----------------------------------------------------------------

def config_hash(cfg: dict, command: str, seed: int, trunc) -> str:
    blob = json.dumps({"config": cfg, "command": command, "seed": seed, "trunc": trunc}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _csv_rows(results: dict) -> list:
    rows = []
    samples = results.get("samples") or results.get("points") or results.get("table")
    if isinstance(samples, list) and samples and isinstance(samples[0], dict):
        for smp in samples:
            za = smp.get("abs_z", smp.get("t"))
            if isinstance(za, list):
                za = math.hypot(*za)
            v = smp.get("value", smp.get("lhs", smp.get("ratio")))
            if isinstance(v, list) and len(v) == 2:
                c = complex(*v)
                rows.append([za, c.real, c.imag, abs(c), float(np.angle(c))])
            else:
                rows.append([za, "", "", "", ""])
        return rows

    def walk(x, path):
        if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
            c = complex(*x)
            rows.append([path, c.real, c.imag, abs(c), float(np.angle(c))])
        elif isinstance(x, dict):
            for k in sorted(x):
                walk(x[k], f"{path}.{k}" if path else k)
        elif isinstance(x, list):
            for i, v in enumerate(x):
                walk(v, f"{path}[{i}]")
        elif isinstance(x, (int, float)) and not isinstance(x, bool):
            rows.append([path, x, 0.0, abs(x), 0.0 if x >= 0 else math.pi])
    walk(results, "")
    return rows


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["abs_z", "re", "im", "abs", "arg"])
    w.writerows(_csv_rows(report["results"]))
    return buf.getvalue()


def run(command: str, config_path: str | None, out: str | None = None, fmt: str | None = None,
        seed: int = 0, trunc: int | None = None) -> int:
    t0 = time.perf_counter()
    try:
        if command not in HANDLERS:
            raise ConfigError(f"unknown command {command!r}")
        if command == "selftest" and not config_path:
            cfg = {}
        else:
            cfg = load_config(config_path)
        outcfg = cfg.get("output", {})
        fmt = fmt or outcfg.get("format", "json")
        out = out or outcfg.get("path")
        if fmt not in ("json", "csv"):
            raise ConfigError("format is json or csv")
        if trunc is not None and trunc < 0:
            raise ConfigError("--trunc must be >= 0")
        params = _params(cfg, command)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            results, ok = HANDLERS[command](cfg, params, seed, trunc)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, OverflowError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    report = {
        "tool": "flipqc", "version": __version__, "command": command, "seed": seed, "trunc": trunc,
        "config_hash": config_hash(cfg, command, seed, trunc), "results": enc(results),
        "warnings": sorted({f"{w.category.__name__}: {w.message}" for w in caught}),
        "verdict": "pass" if ok else "fail", "wall_clock_s": round(time.perf_counter() - t0, 3),
    }
    text = render(report, fmt)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_CHECK


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="flipqc", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config")
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("json", "csv"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trunc", type=int)
    args = ap.parse_args(argv)
    if args.seed < 0 or args.seed >= 2 ** 64:
        print("config error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_CONFIG
    return run(args.command, args.config, args.out, args.format, args.seed, args.trunc)


if __name__ == "__main__":
    sys.exit(main())
