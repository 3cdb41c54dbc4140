"""Command-line interface: solve, verify, path, sweep, oracle.

Configuration precedence is flags over config-file keys over built-in
defaults; the config file is flat `key = value` text. All file outputs
are written atomically (temp file + rename). Exit codes: 0 ok, 1 usage or
config error, 2 not converged, 3 verification failure, 4 certificate
contradiction.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import analysis, greenfn, path as pathmod, solver
from .energy import el_residual
from .errors import NeelWallError, WindowTooNoisyError
from .halflap import (
    apply_quadrature,
    apply_spectral,
    default_delta,
    make_operator,
    pairing,
    seminorm_double_integral,
)
from .model import (
    Grid,
    make_grid,
    make_initial_profile,
    make_params,
    load_profile,
    recenter,
    save_profile,
)

DEFAULTS = {
    "nu": 1.0,
    "h": 0.0,
    "n": 4097,
    "half_width": 40.0,
    "grad_tol": 1e-6,
    "max_iter": 200_000,
    "method": "quasi_newton",
    "init": "template",
    "seed": 0,
    "out_dir": ".",
}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_VERIFY_FAILED = 3
EXIT_CONTRADICTION = 4

VERIFY_EL_TOL = 1e-5
VERIFY_SYMMETRY_TOL = 1e-4
VERIFY_RECONSTRUCTION_TOL = 5e-2


def _write_text_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp_", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json_atomic(path: str, obj) -> None:
    _write_text_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _read_config(path: str) -> dict:
    cfg = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in DEFAULTS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            cfg[key] = value
    return cfg


def _coerce(key: str, value):
    kind = type(DEFAULTS[key])
    if kind is float:
        return float(value)
    if kind is int:
        return int(value)
    return str(value)


def _resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        for key, value in _read_config(args.config).items():
            cfg[key] = _coerce(key, value)
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
    return cfg


def _setup(cfg: dict):
    params = make_params(cfg["nu"], cfg["h"])
    grid = make_grid(cfg["n"], cfg["half_width"])
    opts = solver.SolveOptions(
        grad_tol=cfg["grad_tol"], max_iter=cfg["max_iter"], method=cfg["method"]
    )
    return params, grid, opts


def cmd_solve(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    params, grid, opts = _setup(cfg)
    out = cfg["out_dir"]
    os.makedirs(out, exist_ok=True)
    p0 = make_initial_profile(grid, params, kind=cfg["init"], seed=cfg["seed"])
    p, report = solver.minimize(p0, opts)
    prof_path = os.path.join(out, "profile.txt")
    save_profile(prof_path, p)
    _write_json_atomic(os.path.join(out, "energy.json"), report.final_energy.as_dict())
    _write_json_atomic(
        os.path.join(out, "report.json"),
        {
            "iterations": report.iterations,
            "final_grad_norm": report.final_grad_norm,
            "recenter_shifts": report.recenter_shifts,
            "converged": report.converged,
            "profile": prof_path,
        },
    )
    print(
        f"solve nu={params.nu} h={params.h}: E={report.final_energy.total:.10g} "
        f"grad={report.final_grad_norm:.3g} converged={report.converged}"
    )
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    out = cfg["out_dir"]
    os.makedirs(out, exist_ok=True)
    p = load_profile(args.profile)
    op = make_operator(p.grid)
    checks = {}

    el = el_residual(p, op)
    el_max = float(np.max(np.abs(el)))
    checks["el_residual"] = {"max": el_max, "tol": VERIFY_EL_TOL, "passed": el_max <= VERIFY_EL_TOL}

    mono_ok, mono_violation = analysis.check_monotone(p)
    checks["monotone"] = {"max_violation": mono_violation, "passed": mono_ok}

    sym = analysis.symmetry_defect(p)
    checks["symmetry"] = {
        "defect": sym,
        "tol": VERIFY_SYMMETRY_TOL,
        "passed": sym <= VERIFY_SYMMETRY_TOL,
    }

    if p.params.nu > 0:
        try:
            fit = analysis.fit_decay(p)
            checks["decay_fit"] = {
                "c_plus": fit.c_plus,
                "c_minus": fit.c_minus,
                "plateau_spread": fit.plateau_spread,
                "passed": True,
            }
        except WindowTooNoisyError as exc:
            checks["decay_fit"] = {"error": str(exc), "passed": False}
    else:
        checks["decay_fit"] = {"skipped": "exponential decay at nu=0", "passed": True}

    bounds = analysis.check_bounds(p, op)
    checks["bounds"] = dict(bounds.as_dict(), passed=bounds.all_satisfied)

    tail_ok = analysis.tail_decay_check(p)
    checks["tail_decay"] = {"passed": tail_ok}

    if p.params.nu > 0:
        crosscheck = analysis.stray_field_crosscheck(p, op, seed=cfg["seed"])
        checks["stray_crosscheck"] = {"max_discrepancy": crosscheck, "passed": True}
        lin = greenfn.make_linearized(p.params, p.grid)
        fp = greenfn.fold(p, op)
        resid = greenfn.reconstruct(fp, lin)
        checks["reconstruction"] = {
            "relative_residual": resid,
            "tol": VERIFY_RECONSTRUCTION_TOL,
            "passed": resid <= VERIFY_RECONSTRUCTION_TOL,
        }
        if checks["decay_fit"].get("passed") and "c_plus" in checks["decay_fit"]:
            pred = greenfn.decay_prediction(fp, lin)
            c_plus = checks["decay_fit"]["c_plus"]
            rel = abs(pred - c_plus) / abs(c_plus) if c_plus else math.inf
            checks["decay_prediction"] = {
                "predicted": pred,
                "fitted": c_plus,
                "relative_gap": rel,
                "passed": rel <= 0.2,
            }

    all_passed = all(c["passed"] for c in checks.values())
    report = {"profile": args.profile, "passed": all_passed, "checks": checks}
    _write_json_atomic(os.path.join(out, "verify.json"), report)
    for name, c in checks.items():
        print(f"{'PASS' if c['passed'] else 'FAIL'} {name}")
    return EXIT_OK if all_passed else EXIT_VERIFY_FAILED


def cmd_path(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    out = cfg["out_dir"]
    os.makedirs(out, exist_ok=True)
    p1 = recenter(load_profile(args.profile_a))
    p2 = recenter(load_profile(args.profile_b))
    op = make_operator(p1.grid)
    points = pathmod.path_scan(p1, p2, op=op)
    verdict = pathmod.uniqueness_certificate(p1, p2, op=op, grad_tol=cfg["grad_tol"])
    _write_text_atomic(os.path.join(out, "path.csv"), "".join(pathmod.path_csv_lines(points)))
    _write_json_atomic(os.path.join(out, "certificate.json"), verdict.as_dict())
    print(
        f"certificate: {verdict.verdict} (min f''={verdict.min_f_second:.3g}, "
        f"|f'(0)|={abs(verdict.f_prime_at_0):.3g}, |f'(1)|={abs(verdict.f_prime_at_1):.3g}, "
        f"sup diff={verdict.sup_difference:.3g})"
    )
    return EXIT_CONTRADICTION if verdict.verdict == "CONTRADICTION" else EXIT_OK


def _parse_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    out = cfg["out_dir"]
    os.makedirs(out, exist_ok=True)
    nus = _parse_list(args.nu_list)
    hs = _parse_list(args.h_list)
    params_list = [make_params(nu, h) for nu in nus for h in hs]
    grid = make_grid(cfg["n"], cfg["half_width"])
    opts = solver.SolveOptions(
        grad_tol=cfg["grad_tol"], max_iter=cfg["max_iter"], method=cfg["method"]
    )
    rows = solver.sweep(params_list, grid, opts, init=cfg["init"])
    _write_text_atomic(os.path.join(out, "sweep.csv"), "".join(solver.sweep_csv_lines(rows)))
    for r in rows:
        status = "ok" if r.converged else (r.error or "not converged")
        total = r.energy.total if r.energy else math.nan
        print(f"nu={r.nu} h={r.h}: E={total:.8g} [{status}]")
    return EXIT_OK if all(r.converged for r in rows) else EXIT_NOT_CONVERGED


def _oracle_corpus(grid: Grid) -> list[tuple[str, np.ndarray]]:
    x = grid.nodes
    return [
        ("lorentzian", 1.0 / (1.0 + x**2)),
        ("gaussian", np.exp(-0.5 * x**2)),
        ("squashed_kink", np.sin(2.0 * np.arctan(np.exp(-x))) ** 2),
    ]


def cmd_oracle(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    grid = make_grid(cfg["n"], cfg["half_width"])
    op = make_operator(grid)
    delta = default_delta(max(cfg["nu"], 1e-6))
    rng = np.random.default_rng(cfg["seed"])
    ok = True

    # spectral vs singular-integral quadrature at random interior nodes
    margin = int(math.ceil(delta / grid.spacing)) + 2
    worst_eq = 0.0
    for name, u in _oracle_corpus(grid):
        v = apply_spectral(op, u)
        scale = float(np.max(np.abs(u)))
        idx = rng.integers(margin, grid.n - margin, size=8)
        gap = max(abs(apply_quadrature(u, grid, int(i), delta) - v[i]) for i in idx)
        rel = gap / scale
        worst_eq = max(worst_eq, rel)
        print(f"operator equivalence [{name}]: {rel:.3e}")
    ok &= worst_eq <= 1e-4

    # closed form for the Lorentzian bump
    x = grid.nodes
    u = 1.0 / (1.0 + x**2)
    exact = (1.0 - x**2) / (1.0 + x**2) ** 2
    interior = np.abs(x) <= 0.5 * grid.half_width
    gap = float(np.max(np.abs(apply_spectral(op, u) - exact)[interior]))
    print(f"lorentzian closed form: {gap:.3e}")
    ok &= gap <= 1e-4

    # Parseval pairing vs double-integral seminorm
    worst_sn = 0.0
    for name, u in _oracle_corpus(grid):
        qp = pairing(op, u, u)
        qd = seminorm_double_integral(u, grid)
        rel = abs(qp - qd) / abs(qd)
        worst_sn = max(worst_sn, rel)
        print(f"seminorm identity [{name}]: {rel:.3e}")
    ok &= worst_sn <= 1e-4

    print("oracle: PASS" if ok else "oracle: FAIL")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="flat key = value config file")
    sp.add_argument("--nu", type=float)
    sp.add_argument("--h", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--half-width", dest="half_width", type=float)
    sp.add_argument("--grad-tol", dest="grad_tol", type=float)
    sp.add_argument("--max-iter", dest="max_iter", type=int)
    sp.add_argument("--method", choices=["quasi_newton", "gradient_flow"])
    sp.add_argument("--init", choices=["template", "kink", "perturbed"])
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out-dir", dest="out_dir")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neelwall",
        description="Neel wall profile solver and verification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="minimize the wall energy and save the profile")
    _add_common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="run structural checks on a saved profile")
    sp.add_argument("profile", help="profile file written by solve")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("path", help="convexity certificate between two profiles")
    sp.add_argument("profile_a")
    sp.add_argument("profile_b")
    _add_common(sp)
    sp.set_defaults(func=cmd_path)

    sp = sub.add_parser("sweep", help="solve over a grid of (nu, h) values")
    sp.add_argument("--nu-list", default="0.5,1,2,4")
    sp.add_argument("--h-list", default="0,0.25,0.5,0.75")
    _add_common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("oracle", help="operator and seminorm cross-validation suite")
    _add_common(sp)
    sp.set_defaults(func=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NeelWallError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
