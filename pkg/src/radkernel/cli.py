"""Command-line harness: radkernel eval|scan|fit|crosscheck|audit|transform.

Exit codes: 0 pass, 1 violation, 2 usage error, 3 accuracy error.
Options may also come from a file of key=value lines (--config FILE);
flags given on the command line win over the file.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from .errors import AccuracyError, DomainError, GeometryError, RangeError
from .integral_rep import h_bound_audit, sector_kernel_audit
from .kernel import TransformGrid, transform_apply
from .laplace import MultiPole, factorization_audit, lemma31_audit
from .methods import METHODS, crosscheck, fit_exponent, point_record, scan
from .mittag_leffler import sector_bound_audit
from .reports import CSV_COLUMNS, ScanConfig
from .types import GeomPoint, KernelParams, PrabhakarParams

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_ACCURACY = 0, 1, 2, 3
AUDITS = ("prabhakar-sector", "h-bound", "kernel-sector", "lemma31", "factorization")


class UsageError(Exception):
    pass


def number(text):
    """Float from decimal or fraction text ("0.5", "1/2", "pi/4")."""
    text = str(text).strip()
    if "pi" in text:
        head, _, tail = text.partition("pi")
        k = float(head.rstrip("*") or 1.0) if head not in ("", "-") else (-1.0 if head == "-" else 1.0)
        return k * math.pi / (float(tail.lstrip("/")) if tail else 1.0)
    return float(Fraction(text)) if "/" in text else float(text)


def boolean(text):
    if str(text).lower() in ("1", "true", "yes", "on"):
        return True
    if str(text).lower() in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _common(sp):
    sp.add_argument("--a", type=number, help="deformation parameter a > 0 (fractions allowed)")
    sp.add_argument("--m", type=int, help="dimension m >= 2")
    sp.add_argument("--tol", type=float)
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"))
    sp.add_argument("--jobs", type=int)
    sp.add_argument("--config", help="file of key=value lines")


def _grid(sp):
    sp.add_argument("--z-min", type=number, dest="z_min")
    sp.add_argument("--z-max", type=number, dest="z_max")
    sp.add_argument("--z-count", type=int, dest="z_count")
    sp.add_argument("--z-log", type=boolean, nargs="?", const=True, dest="z_log")
    sp.add_argument("--theta-count", type=int, dest="theta_count")
    sp.add_argument("--theta-min", type=number, dest="theta_min")
    sp.add_argument("--theta-max", type=number, dest="theta_max")
    sp.add_argument("--xi", type=number, help="single angle given by xi = cos theta")
    sp.add_argument("--theta", type=number, help="single angle theta")


def build_parser():
    ap = argparse.ArgumentParser(prog="radkernel", description="Kernels of the radially deformed Fourier transform.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="kernel value at one point")
    _common(sp)
    sp.add_argument("--z", type=number)
    sp.add_argument("--xi", type=number)
    sp.add_argument("--theta", type=number)
    sp.add_argument("--method", choices=METHODS + ("auto",))

    for name, text in (("scan", "grid scan with a bound family"), ("fit", "growth exponent fit")):
        sp = sub.add_parser(name, help=text)
        _common(sp)
        _grid(sp)
        sp.add_argument("--method", help="comma-separated methods (default auto)")
        sp.add_argument("--family", choices=("CONST", "POLY"))
        sp.add_argument("--exponent", type=number)
        sp.add_argument("--bound", type=number, help="explicit bound on the normalized sup")
        sp.add_argument("--growth-rtol", type=float, dest="growth_rtol")
        if name == "fit":
            sp.add_argument("--expect", type=number, help="expected slope")
            sp.add_argument("--slope-tol", type=float, dest="slope_tol")

    sp = sub.add_parser("crosscheck", help="pairwise method agreement")
    _common(sp)
    _grid(sp)
    sp.add_argument("--method", help="comma-separated methods (default: all available)")

    sp = sub.add_parser("audit", help="bound audits")
    _common(sp)
    sp.add_argument("target", choices=AUDITS)
    sp.add_argument("--alpha", type=number)
    sp.add_argument("--beta", type=number)
    sp.add_argument("--delta", type=number)
    sp.add_argument("--mu", type=number)
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--z-max", type=number, dest="z_max")
    sp.add_argument("--z-count", type=int, dest="z_count")
    sp.add_argument("--theta-count", type=int, dest="theta_count")
    sp.add_argument("--configs", type=int, help="random configurations for lemma31")
    sp.add_argument("--seed", type=int)

    sp = sub.add_parser("transform", help="apply the transform to exp(-|x|^a/a)")
    _common(sp)
    sp.add_argument("--y", action="append", help="target point as comma-separated coordinates (repeatable)")
    sp.add_argument("--radius", type=number, help="radial cutoff R")
    sp.add_argument("--panels", type=int)
    return ap


DEFAULTS = {
    "tol": 1e-10, "format": "csv", "jobs": 1, "method": None,
    "z_min": 0.0, "z_max": 6.0, "z_count": 20, "z_log": False, "theta_count": 20,
    "theta_min": 0.0, "theta_max": math.pi, "family": "CONST", "exponent": 0.0, "growth_rtol": 0.1,
    "slope_tol": 0.05, "mu": None, "alpha": 2.0 / 3.0, "beta": 1.0, "delta": 1.0, "p": 3, "q": 2,
    "configs": 50, "seed": 0, "panels": 8,
}
FIT_DEFAULTS = {"z_min": 10.0, "z_max": 100.0, "z_count": 12, "z_log": True}


def _parse_config(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line without '=': {line!r}")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def resolve(args, parser):
    """Merge config file values and defaults into args (flags win)."""
    sub = next(a for a in parser._subparsers._group_actions[0].choices.values() if a.prog.endswith(args.command))
    types = {a.dest: a.type for a in sub._actions if a.dest != "help"}
    cfg = _parse_config(args.config) if getattr(args, "config", None) else {}
    for k, v in cfg.items():
        if k not in types:
            raise UsageError(f"unknown config key {k!r}")
        if getattr(args, k) is None:
            conv = types[k] or str
            setattr(args, k, conv(v))
    base = dict(DEFAULTS)
    if args.command == "fit":
        base.update(FIT_DEFAULTS)
    for k, v in base.items():
        if hasattr(args, k) and getattr(args, k) is None:
            setattr(args, k, v)
    return args


def _params(args):
    if args.a is None or args.m is None:
        raise UsageError("--a and --m are required")
    return KernelParams(args.a, args.m)


def _angle_grid(args):
    if args.xi is not None and args.theta is not None:
        raise UsageError("give --xi or --theta, not both")
    if args.xi is not None:
        th = math.acos(max(-1.0, min(1.0, args.xi)))
        return dict(theta_count=1, theta_min=th, theta_max=th)
    if args.theta is not None:
        return dict(theta_count=1, theta_min=args.theta, theta_max=args.theta)
    return dict(theta_count=args.theta_count, theta_min=args.theta_min, theta_max=args.theta_max)


def _scan_config(args):
    methods = tuple(args.method.split(",")) if args.method else ("auto",)
    return ScanConfig(a=args.a, m=args.m, z_min=args.z_min, z_max=args.z_max, z_count=args.z_count,
                      z_log=bool(args.z_log), methods=methods, family=getattr(args, "family", "CONST"),
                      exponent=getattr(args, "exponent", 0.0), tol=args.tol,
                      growth_rtol=getattr(args, "growth_rtol", 0.1), **_angle_grid(args))


def _emit(text, args):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(rep, args):
    _emit(rep.to_csv() if args.format == "csv" else rep.to_json() + "\n", args)


def _summary(rep, extra=""):
    line = f"sup={rep.sup:.6g} violations={len(rep.violations)} failures={len(rep.failures)}"
    if rep.exponent_fit:
        line += f" slope={rep.exponent_fit['slope']:.4f}+-{rep.exponent_fit['stderr']:.4f}"
    print(line + extra, file=sys.stderr)


def _report_code(rep):
    if rep.violations:
        return EXIT_VIOLATION
    if rep.failures:
        return EXIT_ACCURACY
    return EXIT_OK


def cmd_eval(args):
    p = _params(args)
    if args.z is None:
        raise UsageError("--z is required")
    if args.xi is not None and args.theta is not None:
        raise UsageError("give --xi or --theta, not both")
    g = GeomPoint.from_theta(args.z, args.theta) if args.theta is not None else GeomPoint(args.z, args.xi or 0.0)
    rec = point_record(p, g, args.method or "auto", args.tol)
    if args.format == "json":
        _emit(json.dumps(rec) + "\n", args)
    else:
        row = [repr(float(rec[k])) for k in CSV_COLUMNS[:-1]]
        _emit(",".join(CSV_COLUMNS) + "\n" + ",".join(row + [rec["method"]]) + "\n", args)
    return EXIT_OK


def cmd_scan(args):
    _params(args)
    rep = scan(_scan_config(args), jobs=args.jobs, bound=args.bound)
    _emit_report(rep, args)
    _summary(rep)
    return _report_code(rep)


def cmd_fit(args):
    _params(args)
    rep = fit_exponent(_scan_config(args), jobs=args.jobs)
    fit = rep.exponent_fit
    if args.expect is not None and abs(fit["slope"] - args.expect) > args.slope_tol:
        rep.violations.append({"kind": "slope", "slope": fit["slope"], "expect": args.expect, "tol": args.slope_tol})
    rep.config.update({"expect": args.expect, "slope_tol": args.slope_tol})
    _emit(json.dumps({"slope": fit["slope"], "stderr": fit["stderr"], "sup": rep.sup,
                      "violations": rep.violations, "config": rep.config}) + "\n"
          if args.format == "json" else rep.to_csv(), args)
    _summary(rep)
    return _report_code(rep)


def cmd_crosscheck(args):
    p = _params(args)
    cfg = _scan_config(args)
    methods = args.method.split(",") if args.method else None
    rep = crosscheck(p, cfg.z_grid(), cfg.theta_grid(), methods, args.tol)
    _emit_report(rep, args)
    for pair, r in rep.config["pairs"].items():
        state = "skip" if r["pass"] is None else ("pass" if r["pass"] else "FAIL")
        dev = "-" if r["max_dev"] is None else f"{r['max_dev']:.3e}"
        print(f"{pair}: {state} max_dev={dev} points={r['points']}", file=sys.stderr)
    if rep.violations:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_audit(args):
    t = args.target
    if t == "prabhakar-sector":
        pp = PrabhakarParams(args.alpha, args.beta, args.delta)
        mu = args.mu if args.mu is not None else 0.5 * (0.5 * math.pi * pp.alpha + min(math.pi, math.pi * pp.alpha))
        radii = np.geomspace(1e-2, args.z_max or 1e3, args.z_count or 31)
        rep = sector_bound_audit(pp, mu, radii)
    elif t in ("h-bound", "kernel-sector"):
        p = _params(args)
        mu = args.mu if args.mu is not None else 0.5 * (math.pi / p.a + min(math.pi, 2 * math.pi / p.a))
        if t == "h-bound":
            zs = np.geomspace(0.1, args.z_max or 4.0, args.z_count or 9)
            rep = h_bound_audit(p, mu, zs)
        else:
            zs = np.geomspace(0.1, args.z_max or 1e3, args.z_count or 25)
            rep = sector_kernel_audit(p, mu, zs, theta_count=args.theta_count or 13, tol=1e-9)
    elif t == "lemma31":
        rng = np.random.default_rng(args.seed)
        cfgs = random_multipoles(rng, args.configs)
        rep = lemma31_audit(cfgs, np.linspace(0.05, 1.0, 20))
    else:
        rep = factorization_audit(args.p, args.q)
    _emit_report(rep, args)
    _summary(rep)
    return _report_code(rep)


def random_multipoles(rng, count):
    """Random pole sets: 1-4 poles, real locations in [-3, 3], multiplicities 1-3."""
    out = []
    for _ in range(count):
        n = int(rng.integers(1, 5))
        out.append(MultiPole(tuple(float(x) for x in rng.uniform(-3, 3, n)),
                             tuple(int(x) for x in rng.integers(1, 4, n))))
    return out


def cmd_transform(args):
    p = _params(args)
    if not args.y:
        raise UsageError("give at least one --y point")
    ys = np.array([[number(c) for c in y.split(",")] for y in args.y])
    if ys.shape[1] != p.m:
        raise UsageError(f"target points need {p.m} coordinates")
    R = args.radius or (40.0 ** (1.0 / p.a) * 2.0)
    grid = TransformGrid(R=R, panels=args.panels)

    def f(X):
        return np.exp(-np.linalg.norm(X, axis=1) ** p.a / p.a)

    vals = transform_apply(p, f, ys, grid=grid, tol=1e-8)
    exact = np.exp(-np.linalg.norm(ys, axis=1) ** p.a / p.a)
    rows = [{"y": list(map(float, y)), "re": v.real, "im": v.imag, "exact": float(e), "abs_err": abs(v - e)}
            for y, v, e in zip(ys, vals, exact)]
    if args.format == "json":
        _emit(json.dumps({"a": p.a, "m": p.m, "R": R, "points": rows}) + "\n", args)
    else:
        lines = ["y,re,im,exact,abs_err"] + [
            f"{' '.join(map(repr, r['y']))},{r['re']!r},{r['im']!r},{r['exact']!r},{r['abs_err']!r}" for r in rows]
        _emit("\n".join(lines) + "\n", args)
    print(f"max_abs_err={max(r['abs_err'] for r in rows):.3e}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "scan": cmd_scan, "fit": cmd_fit, "crosscheck": cmd_crosscheck,
            "audit": cmd_audit, "transform": cmd_transform}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = resolve(args, parser)
        return COMMANDS[args.command](args)
    except (UsageError, DomainError, GeometryError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AccuracyError, RangeError) as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY


if __name__ == "__main__":
    sys.exit(main())
