"""Command-line front-end.

Every command writes a versioned report ({"schema": 1, ...}) echoing the
resolved configuration, as JSON or flattened CSV.  Exit codes: 0 success,
1 a mathematical check failed, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys

import numpy as np

from . import __version__
from . import focal, geomodel, greenop, hyperpolar, io, roots, spectral, transport
from .errors import SingularOperatorError, ValidationError
from .focal import FOCAL, Window
from .spectral import DIVERGENT

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if x is DIVERGENT:
        return "divergent"
    if x is FOCAL:
        return "focal"
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _complex_matrix(m: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _flatten(obj, prefix=""):
    rows = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            rows.extend(_flatten(obj[k], f"{prefix}{k}." if prefix or True else k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            rows.extend(_flatten(v, f"{prefix}{i}."))
    else:
        rows.append((prefix.rstrip("."), obj))
    return rows


def _emit(report: dict, fmt: str, out: str):
    report = _jsonable(report)
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        lines = ["key,value"]
        for key, val in _flatten(report):
            sval = json.dumps(val) if isinstance(val, str) else str(val)
            lines.append(f"{key},{sval}")
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_window(text: str) -> Window:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad window '{text}', expected 'lo,hi'") from exc
    return Window(lo, hi)


def _cmd_trace(args):
    spec = io.read_spectrum(args.spec)
    info = spectral.reg_trace_info(spec)
    result = {
        "tr_r": info.as_trace(),
        "tr_r_error": info.error if info.converged else None,
        "method": info.method,
        "regularizable": spectral.is_regularizable(spec),
    }
    if args.zeta:
        result["tr_zeta"] = spectral.zeta_trace(spec)
    if args.square:
        result["tr_sq"] = spectral.trace_square(spec)
    return result, EXIT_OK


def _cmd_focal(args):
    grid = io.read_eigen_grid(args.grid)
    window = _parse_window(args.window)
    fset = focal.focal_set(grid, window)
    result = {
        "label": grid.label,
        "window": [window.lo, window.hi],
        "radii": fset.radii,
        "multiplicities": fset.multiplicities,
        "witness": focal.proper_fredholm_witness(grid, window),
    }
    return result, EXIT_OK


def _cmd_parallel(args):
    grid = io.read_eigen_grid(args.grid)
    tg = focal.transformed_grid(grid, args.r)
    result = {"label": grid.label, "r": args.r}
    if tg is FOCAL:
        result["focal_collision"] = True
        result["tr_r"] = None
        return result, EXIT_CHECK_FAILED
    result["focal_collision"] = False
    result["pairs"] = [list(p) for p in tg.pairs]
    result["tr_r"] = focal.parallel_reg_mean_curvature(grid, args.r)
    return result, EXIT_OK


def _read_grid_dir(path: str):
    files = sorted(glob.glob(os.path.join(path, "*.json")))
    if not files:
        raise ValidationError(f"no grid files in '{path}'")
    return [io.read_eigen_grid(f) for f in files]


def _cmd_check(args):
    grids = _read_grid_dir(args.grids)
    if args.kind == "weak":
        ok = focal.weakly_isoparametric_check(grids)
        result = {"check": "weak", "n_grids": len(grids), "passed": ok}
    elif args.kind == "iso":
        radii = [float(v) for v in args.radii.split(",")] if args.radii else [0.05, 0.1, 0.2]
        report = focal.isoparametric_check(grids, radii, tol=args.tol)
        ok = report["passed"]
        result = {"check": "iso", "n_grids": len(grids), **report}
    else:
        window = _parse_window(args.window)
        ok = focal.equifocal_check(grids, window, tol=args.tol)
        result = {"check": "equifocal", "n_grids": len(grids),
                  "window": [window.lo, window.hi], "passed": ok}
    return result, EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_example41(args):
    cfg = io.read_sphere_config(args.config) if args.config else geomodel.default_config()
    model = geomodel.build_model(cfg, args.points, args.seed)
    rng = np.random.default_rng(args.seed + 1)
    # fixed normal-field coefficients shared across points keep the field parallel
    coeffs = rng.normal(size=cfg.k1)
    window = _parse_window(args.window)
    grids = []
    focal_sets = {}
    for pi in range(len(model.points)):
        nb = model.normal_bases[pi]
        xi = nb[:, : cfg.k1] @ coeffs
        grid = geomodel.eigen_grid_of(model, pi, xi)
        grids.append(grid)
        fset = focal.focal_set(grid, window)
        focal_sets[grid.label] = {"radii": fset.radii, "multiplicities": fset.multiplicities}
    radii = [float(v) for v in args.radii.split(",")] if args.radii else [0.05, 0.1, 0.2]
    iso = focal.isoparametric_check(grids, radii, tol=args.tol)
    adapted = geomodel.curvature_adapted_check(model, args.trials, args.seed + 2)
    xi0 = model.normal_bases[0][:, : cfg.k1] @ coeffs
    result = {
        "n_points": args.points,
        "trace_constancy": iso,
        "curvature_adapted": adapted,
        "focal_sets": focal_sets,
        "closed_form_traces": geomodel.trace_closed_form(model, 0, xi0),
        "passed": bool(iso["passed"] and adapted["passed"]),
    }
    return result, EXIT_OK if result["passed"] else EXIT_CHECK_FAILED


def _cmd_transport(args):
    u = io.read_path(args.path, kind="algebra")
    g1 = transport.transport(u, steps=args.steps)
    unit = float(np.max(np.abs(np.conj(g1.T) @ g1 - np.eye(g1.shape[0]))))
    result = {"steps": args.steps, "endpoint": _complex_matrix(g1),
              "unitarity_residual": unit}
    return result, EXIT_OK


def _cmd_holonomy(args):
    omega = io.read_path(args.omega, kind="connection")
    omega0 = io.read_path(args.omega0, kind="connection") if args.omega0 else None
    hol = transport.holonomy_element(omega, omega0, steps=args.steps)
    mu = transport.pullback_connection(omega, omega0)
    phi_mu = transport.transport(mu, steps=args.steps)
    agreement = float(np.max(np.abs(hol - phi_mu)))
    result = {"holonomy": _complex_matrix(hol),
              "transport_of_pullback": _complex_matrix(phi_mu),
              "factorization_residual": agreement,
              "passed": agreement < 1e-6}
    return result, EXIT_OK if result["passed"] else EXIT_CHECK_FAILED


def _cmd_roots(args):
    data = roots.restricted_root_decomposition(args.algebra, args.theta, seed=args.seed)
    report = roots.verify_bracket_pattern(data)
    result = {
        "algebra": data.algebra.name,
        "theta": args.theta,
        "rank": len(data.a_basis),
        "n0": data.n0,
        "roots": [r.tolist() for r in data.roots],
        "multiplicities": list(data.multiplicities),
        "dimension_identity": data.dimension_identity(),
        "bracket_max_residual": report["max_residual"],
        "bracket_max_residual_sum_only": report["max_residual_sum_only"],
        "passed": bool(report["passed"] and data.dimension_identity()),
    }
    return result, EXIT_OK if result["passed"] else EXIT_CHECK_FAILED


_INVOLUTIONS = {
    "u1diag": "ad_diag",
    "so2": "conj",
    "so3": "conj",
    "son": "conj",
}


def _cmd_hyperpolar(args):
    if args.k1 != args.k2:
        raise ValidationError("only symmetric pairs with k1 == k2 are supported")
    theta = _INVOLUTIONS.get(args.k1.lower())
    if theta is None:
        raise ValidationError(f"unknown subgroup spec '{args.k1}'")
    algebra = args.group.lower().replace("(", "").replace(")", "")
    result = hyperpolar.section_orthogonality_check(
        algebra, theta, n_samples=args.samples, seed=args.seed)
    return result, EXIT_OK if result["passed"] else EXIT_CHECK_FAILED


def _cmd_green(args):
    op = greenop.OperatorMatrix(io.read_matrix(args.op))
    psi = io.read_vector(args.psi)
    sigma = greenop.green_apply(op, psi, project=args.project)
    residual = float(np.linalg.norm(op.apply(sigma) - psi))
    result = {"sigma": sigma, "residual": residual,
              "projected": bool(args.project)}
    return result, EXIT_OK


def _cmd_box1d(args):
    op = greenop.box_operator_1d(args.samples, args.speed, periodic=args.periodic)
    result = {
        "samples": args.samples,
        "speed": args.speed,
        "periodic": bool(args.periodic),
        "smallest_eigenvalue": float(op.eigenvalues[0]),
        "largest_eigenvalue": float(op.eigenvalues[-1]),
        "matrix": op.entries,
    }
    return result, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="focalis")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("trace", help="regularized / power-sum traces of a spectrum")
    p.add_argument("--spec", required=True)
    p.add_argument("--zeta", action="store_true")
    p.add_argument("--square", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("focal", help="focal radii of an eigen grid in a window")
    p.add_argument("--grid", required=True)
    p.add_argument("--window", default="0.001,10")
    common(p)
    p.set_defaults(func=_cmd_focal)

    p = sub.add_parser("parallel", help="parallel shape spectrum at distance r")
    p.add_argument("--grid", required=True)
    p.add_argument("--r", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_parallel)

    p = sub.add_parser("check", help="multi-point isoparametric checks")
    p.add_argument("kind", choices=("weak", "iso", "equifocal"))
    p.add_argument("--grids", required=True)
    p.add_argument("--window", default="0.001,10")
    p.add_argument("--radii", default=None)
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("example41", help="product-of-spheres verification report")
    p.add_argument("--config", default=None)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--radii", default=None)
    p.add_argument("--window", default="0.001,10")
    p.add_argument("--report", dest="out_alias", default=None)
    common(p)
    p.set_defaults(func=_cmd_example41)

    p = sub.add_parser("transport", help="endpoint of the group path for u")
    p.add_argument("--path", required=True)
    p.add_argument("--steps", type=int, default=1000)
    common(p)
    p.set_defaults(func=_cmd_transport)

    p = sub.add_parser("holonomy", help="holonomy element of a connection path")
    p.add_argument("--omega", required=True)
    p.add_argument("--omega0", default=None)
    p.add_argument("--steps", type=int, default=4000)
    common(p)
    p.set_defaults(func=_cmd_holonomy)

    p = sub.add_parser("roots", help="restricted-root decomposition report")
    p.add_argument("--algebra", required=True)
    p.add_argument("--theta", default="conj")
    common(p)
    p.set_defaults(func=_cmd_roots)

    p = sub.add_parser("hyperpolar", help="two-sided action section check")
    p.add_argument("--group", required=True)
    p.add_argument("--k1", required=True)
    p.add_argument("--k2", required=True)
    p.add_argument("--samples", type=int, default=25)
    common(p)
    p.set_defaults(func=_cmd_hyperpolar)

    p = sub.add_parser("green", help="apply the spectral Green operator")
    p.add_argument("--op", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--project", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_green)

    p = sub.add_parser("box1d", help="discrete id - (1/a^2) D^2 operator")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--speed", type=float, required=True)
    p.add_argument("--periodic", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_box1d)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "out_alias", None) and not args.out:
        args.out = args.out_alias
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "out_alias") and not callable(v)}
    try:
        result, code = args.func(args)
    except (ValidationError, SingularOperatorError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR
    report = {
        "schema": 1,
        "version": __version__,
        "config": config,
        "result": result,
    }
    _emit(report, args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
