"""Command line front end.

Every subcommand reads fields in the .bin + JSON-sidecar format written by
save_field, emits JSON (or CSV where a flat table is the natural shape), and
exits 0 exactly when every contracted assertion it ran passed.  Commands that
only compute a number carry no assertions and exit 0 on success.

The FRACSOB_SEED environment variable overrides the stratified-subsample seed
used by the double-integral seminorm estimator on large grids.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from fracsob.abscont import ac_modulus, curve_from_csv, curve_image_dimension
from fracsob.field import FracIndex, load_field
from fracsob.hodge import jacobian_identity_check
from fracsob.jacobian import _interp_map, dist_jacobian, winding_numbers
from fracsob.mollify import default_eps_ladder, mollify_rates
from fracsob.scenarios import (
    SCENARIO_NAMES,
    load_config,
    run_scenario,
    run_suite,
)
from fracsob.sobolev import gagliardo_seminorm


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


def _write_json(obj, path: str | Path) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, default=_json_default)
    Path(path).write_text(text + "\n")


def _strip_private(obj):
    """Drop '_'-prefixed keys holding heavy in-memory objects."""
    if isinstance(obj, dict):
        return {k: _strip_private(v) for k, v in obj.items()
                if not (isinstance(k, str) and k.startswith("_"))}
    if isinstance(obj, (list, tuple)):
        return [_strip_private(v) for v in obj]
    return obj


def _print_checks(checks) -> bool:
    ok = True
    for c in checks:
        tag = "PASS" if c["passed"] else "FAIL"
        ok = ok and c["passed"]
        val = c.get("value", c.get("seconds"))
        if isinstance(val, float):
            val = f"{val:.6g}"
        print(f"[{tag}] {c['id']}: {val}  (require {c['require']})")
    return ok


def _load_scalar(path: str, what: str):
    f = load_field(path)
    if hasattr(f, "components"):
        raise SystemExit(f"{what} must be a scalar field, got {f.m} components")
    return f


def _load_map(path: str, what: str):
    f = load_field(path)
    if not hasattr(f, "components") or f.m != 2:
        m = getattr(f, "m", 1)
        raise SystemExit(f"{what} must be a planar map with 2 components, got {m}")
    return f


def _load_points(path: str) -> np.ndarray:
    try:
        pts = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except ValueError:
        pts = np.loadtxt(path, delimiter=",", comments="#", ndmin=2, skiprows=1)
    if pts.shape[1] < 2:
        raise SystemExit(f"{path}: expected rows of x1,x2 coordinates")
    return pts[:, :2]


# ---------------------------------------------------------------------------
# subcommands

def _cmd_seminorm(args) -> int:
    f = _load_scalar(args.field, "--field")
    idx = FracIndex(args.s, args.p)
    value = gagliardo_seminorm(f, idx)
    g = f.grid
    row = {"field": f.name or Path(args.field).stem, "n1": g.n1, "n2": g.n2,
           "length": g.length, "s": idx.s, "p": idx.p, "seminorm": value}
    print(f"|{row['field']}|_({idx.s:g},{idx.p:g}) = {value:.10g}")
    if args.out:
        if args.out.endswith(".csv"):
            with open(args.out, "w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=list(row))
                w.writeheader()
                w.writerow(row)
        else:
            _write_json(row, args.out)
    return 0


def _cmd_mollify_rates(args) -> int:
    f = _load_scalar(args.field, "--field")
    idx = FracIndex(args.s, args.p)
    ladder = default_eps_ladder(f.grid, count=args.ladder)
    orders = [int(k) for k in args.k.split(",")]
    fits = {}
    for k in orders:
        fit = mollify_rates(f, idx, k, ladder=ladder)
        fits[f"k{k}"] = fit.to_dict()
        print(f"k={k}: slope {fit.slope:+.4f}  r2 {fit.r2:.4f}")
    if args.out:
        if args.out.endswith(".csv"):
            with open(args.out, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["k", "eps", "value"])
                for k in orders:
                    for eps, val in fits[f"k{k}"]["ladder"]:
                        w.writerow([k, eps, val])
        else:
            _write_json(fits, args.out)
    return 0


def _cmd_jacobian(args) -> int:
    f = _load_map(args.map, "--map")
    phi = _load_scalar(args.test, "--test")
    ladder = default_eps_ladder(f.grid, count=args.ladder)
    pairing = dist_jacobian(f, phi, ladder=ladder)
    print(f"limit {pairing.limit:.10g}  converged {pairing.converged}")
    if args.out:
        _write_json(pairing.to_dict(), args.out)
    return 0


def _cmd_degree(args) -> int:
    f = _load_map(args.map, "--map")
    contour = _load_points(args.contour)
    target = np.array([[float(v) for v in args.y.split(",")]])
    if target.shape != (1, 2):
        raise SystemExit("--y takes a single 'y1,y2' pair")
    turns, residue = winding_numbers(_interp_map(f, contour), target)
    res = float(residue[0])
    if res >= 0.1:
        print(f"degree ill-defined: target within {res:.3g} turns of the image "
              "of the contour", file=sys.stderr)
        return 2
    deg = int(np.round(turns[0]))
    out = {"degree": deg, "turns": float(turns[0]), "residue": res}
    print(json.dumps(out, sort_keys=True))
    if args.out:
        _write_json(out, args.out)
    return 0


def _cmd_immersion_analyze(args) -> int:
    cfg = load_config(args.config)
    if args.n is not None:
        cfg["scenarios"].setdefault(args.scenario, {})["n"] = args.n
    if args.eps_ladder is not None:
        cfg["ladders"]["eps_count"] = args.eps_ladder
    report = run_scenario(args.scenario, cfg)
    ok = _print_checks(report["checks"])
    cls = report.get("_classification")
    csv_path = args.classification_csv
    if csv_path is None and args.out and cls is not None:
        csv_path = str(Path(args.out).with_suffix(".classification.csv"))
    if csv_path is not None:
        if cls is None:
            print(f"scenario '{args.scenario}' produces no classification; "
                  "skipping CSV", file=sys.stderr)
        else:
            X1, X2 = cls.grid.mesh()
            rows = np.column_stack([
                X1.ravel(), X2.ravel(),
                cls.labels.ravel().astype(float), cls.theta.ravel(),
            ])
            np.savetxt(csv_path, rows, delimiter=",", fmt="%.10g",
                       header="x1,x2,label,theta", comments="")
    if args.out:
        _write_json(_strip_private(report), args.out)
    return 0 if ok else 1


def _cmd_hodge_check(args) -> int:
    lam = _load_scalar(args.lam, "--lambda")
    gmap = _load_map(args.g, "--g")
    fmap = _load_map(args.f, "--f")
    phi = _load_scalar(args.phi, "--phi")
    ladder = default_eps_ladder(lam.grid, count=args.ladder)
    try:
        lhs, rhs = jacobian_identity_check(
            lam, fmap, gmap, phi, ladder=ladder,
            constraint_tol=args.constraint_tol)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    gap = abs(lhs.limit - rhs.limit)
    verdict = "pass" if gap < args.tol and lhs.converged and rhs.converged else "fail"
    out = {
        "lhs_ladder": list(lhs.ladder),
        "rhs_ladder": list(rhs.ladder),
        "lhs_limit": lhs.limit,
        "rhs_limit": rhs.limit,
        "gap": gap,
        "tol": args.tol,
        "verdict": verdict,
    }
    print(f"lhs {lhs.limit:.6g}  rhs {rhs.limit:.6g}  gap {gap:.6g}  -> {verdict}")
    if args.out:
        _write_json(out, args.out)
    return 0 if verdict == "pass" else 1


def _cmd_abscont(args) -> int:
    curve = curve_from_csv(args.curve)
    deltas = [float(d) for d in args.deltas.split(",")]
    moduli = [ac_modulus(curve, args.s, args.p, d) for d in deltas]
    decreasing = all(b < a for a, b in zip(moduli, moduli[1:]))
    out = {
        "s": args.s, "p": args.p,
        "modulus": [[d, m] for d, m in zip(deltas, moduli)],
        "decreasing": decreasing,
    }
    ok = decreasing
    if args.s * args.p > 1.0:
        dim = curve_image_dimension(curve, args.s, args.p)
        out["dimension"] = dim
        ok = ok and dim["decreasing"]
    else:
        out["dimension"] = "out of theorem scope: s*p <= 1"
    for d, m in zip(deltas, moduli):
        print(f"delta {d:g}: modulus {m:.6g}")
    print(f"decreasing: {decreasing}")
    if args.out:
        _write_json(out, args.out)
    return 0 if ok else 1


def _cmd_suite(args) -> int:
    cfg = load_config(args.config)
    suite = run_suite(cfg, threads=args.threads)
    ok = _print_checks(suite["checks"])
    ok = _print_checks(suite["timing"]["checks"]) and ok
    n = len(suite["checks"]) + len(suite["timing"]["checks"])
    n_pass = sum(c["passed"] for c in suite["checks"]) \
        + sum(c["passed"] for c in suite["timing"]["checks"])
    print(f"{n_pass}/{n} checks passed in {suite['timing']['seconds']:.1f}s")
    if args.out:
        _write_json(_strip_private(suite), args.out)
    return 0 if suite["passed"] else 1


# ---------------------------------------------------------------------------
# parser

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fracsob",
        description="Numerical checks for fractional-Sobolev immersion geometry.",
        epilog="Set FRACSOB_SEED to override the subsample seed of the "
               "double-integral seminorm estimator.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seminorm", help="Gagliardo seminorm of a scalar field")
    p.add_argument("--field", required=True, help=".bin field file")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--out", help="output path (.json or .csv)")
    p.set_defaults(fn=_cmd_seminorm)

    p = sub.add_parser("mollify-rates",
                       help="mollification error rates at orders k")
    p.add_argument("--field", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--k", default="0,1,2", help="comma list of orders")
    p.add_argument("--ladder", type=int, default=5, help="ladder rung count")
    p.add_argument("--out", help="output path (.json fits or .csv table)")
    p.set_defaults(fn=_cmd_mollify_rates)

    p = sub.add_parser("jacobian",
                       help="distributional Jacobian paired with a test bump")
    p.add_argument("--map", required=True, help="planar map .bin (2 components)")
    p.add_argument("--test", required=True, help="test function .bin")
    p.add_argument("--ladder", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_jacobian)

    p = sub.add_parser("degree", help="winding degree of a map about a target")
    p.add_argument("--map", required=True)
    p.add_argument("--contour", required=True, help="CSV of x1,x2 contour points")
    p.add_argument("--y", required=True, help="target 'y1,y2'")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_degree)

    p = sub.add_parser("immersion-analyze",
                       help="full report for one named scenario")
    p.add_argument("--scenario", required=True, choices=SCENARIO_NAMES)
    p.add_argument("--n", type=int, help="grid size override")
    p.add_argument("--eps-ladder", type=int, dest="eps_ladder",
                   help="ladder rung count override")
    p.add_argument("--config", help="config JSON overriding the defaults")
    p.add_argument("--out", help="report JSON path")
    p.add_argument("--classification-csv", dest="classification_csv",
                   help="write the x1,x2,label,theta table here")
    p.set_defaults(fn=_cmd_immersion_analyze)

    p = sub.add_parser("hodge-check",
                       help="two-sided distributional identity for a triple")
    p.add_argument("--lambda", dest="lam", required=True,
                   help="scalar factor .bin")
    p.add_argument("--g", required=True, help="potential map .bin")
    p.add_argument("--f", required=True, help="constrained map .bin")
    p.add_argument("--phi", required=True, help="test function .bin")
    p.add_argument("--ladder", type=int, default=5)
    p.add_argument("--tol", type=float, default=1e-6,
                   help="limit gap below which the verdict is pass")
    p.add_argument("--constraint-tol", dest="constraint_tol", type=float,
                   default=0.05, help="allowed L2 defect of grad f = lambda grad g")
    p.add_argument("--out", help="identity JSON path")
    p.set_defaults(fn=_cmd_hodge_check)

    p = sub.add_parser("abscont",
                       help="absolute-continuity modulus of a sampled curve")
    p.add_argument("--curve", required=True, help="CSV of curve samples")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--deltas", default="0.32,0.08,0.02,0.005")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_abscont)

    p = sub.add_parser("suite", help="run every section and scenario")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--config")
    p.add_argument("--out", help="suite report JSON path")
    p.set_defaults(fn=_cmd_suite)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
