"""Method dispatch, grid scans, growth fits and cross-checks.

Methods
-------
series    Bessel-Gegenbauer series (ground truth, cost grows with z_a)
closed    explicit formulas (a in {1, 2, 4, 6}, subsampled a = 2^l/n)
laplace   Bromwich inversion of the Laplace-domain kernel (z_a <= 5)
integral  Prabhakar integral representation (validated for z <= 4)
saddle    steepest-descent form, m = 2, any z
lift      dimension lift m - 2 -> m by a difference in xi (m >= 4)
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations

import numpy as np

from .closed_forms import closed_form_kind, evaluate_closed, kernel_a1_many, kernel_a2_many
from .errors import AccuracyError, DomainError
from .integral_rep import kernel_via_integral
from .kernel import kernel_dimension_lift, kernel_series, kernel_series_theta
from .laplace import ilt_kernel_check
from .reports import Cell, ScanReport, fit_slope
from .saddle import kernel_saddle
from .types import GeomPoint, KernelParams

METHODS = ("series", "closed", "laplace", "integral", "saddle", "lift")
SADDLE_FROM = 20.0


def available_methods(p):
    """Methods that apply to (a, m); point-wise range limits may still apply."""
    out = ["series"]
    if closed_form_kind(p) is not None:
        out.append("closed")
    out += ["laplace", "integral"]
    if p.m == 2:
        out.append("saddle")
    if p.m >= 4:
        out.append("lift")
    return out


def _lift(p, g, tol):
    lower = KernelParams(p.a, p.m - 2)
    return kernel_dimension_lift(lower, g, base=lambda pp, gg: kernel_series(pp, gg, tol * 1e-4))


def evaluate(p, g, method="auto", tol=1e-10):
    """Kernel value at one point with the requested method.

    ``auto`` takes a closed form when there is one, the steepest-descent
    form for m = 2 once z_a >= 20, and the series otherwise (falling back
    to the steepest-descent form for m = 2 if the series gives up).

    Raises
    ------
    DomainError
        Unknown method, or method not available for (a, m).
    """
    if method == "auto":
        if closed_form_kind(p) is not None:
            return evaluate_closed(p, g, tol)
        if p.m == 2 and p.z_a(g.z) >= SADDLE_FROM:
            return kernel_saddle(p, g, tol)
        try:
            return kernel_series(p, g, tol)
        except AccuracyError:
            if p.m != 2:
                raise
            return kernel_saddle(p, g, tol)
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {', '.join(METHODS)} or auto")
    if method not in available_methods(p):
        raise DomainError(f"method {method!r} unavailable for a={p.a}, m={p.m}; available: "
                          f"{', '.join(available_methods(p))}")
    if method == "series":
        return kernel_series(p, g, tol)
    if method == "closed":
        return evaluate_closed(p, g, tol)
    if method == "laplace":
        return ilt_kernel_check(p, g, tol)
    if method == "integral":
        return kernel_via_integral(p, g, tol)
    if method == "saddle":
        return kernel_saddle(p, g, tol)
    return _lift(p, g, tol)


def evaluate_many(p, zs, xis, tol=1e-10):
    """Kernel values on arrays of (z, xi); values only.

    a = 2 and a = 1 use the vectorized closed forms; otherwise points are
    grouped by z and the series is summed once per radius. Points where
    the series gives up go through ``evaluate``.
    """
    zs = np.asarray(zs, dtype=float)
    xis = np.asarray(xis, dtype=float)
    zs, xis = np.broadcast_arrays(zs, xis)
    if p.a == 2.0:
        return kernel_a2_many(zs, xis)
    if p.a == 1.0:
        return kernel_a1_many(p.m, zs, xis)
    out = np.empty(zs.shape, dtype=complex)
    flat_z, flat_x, flat_o = zs.ravel(), xis.ravel(), out.reshape(-1)
    uz, inv = np.unique(flat_z, return_inverse=True)
    for j, z in enumerate(uz):
        idx = np.flatnonzero(inv == j)
        try:
            vals, _ = kernel_series_theta(p, z, flat_x[idx], tol)
        except AccuracyError:
            vals = [evaluate(p, GeomPoint(z, x), "auto", tol).value for x in flat_x[idx]]
        flat_o[idx] = vals
    return out


# ------------------------------------------------------------------------ scans


def _row(args):
    """One z row of a scan: list of (theta, method, value, err) or error strings."""
    p, z, thetas, methods, tol = args
    out = []
    for th in thetas:
        g = GeomPoint.from_theta(z, th)
        for m in methods:
            try:
                ev = evaluate(p, g, m, tol)
                out.append((th, ev.method if m == "auto" else m, ev.value, ev.err, None))
            except (AccuracyError, DomainError) as exc:
                out.append((th, m, None, None, str(exc)))
    return out


def _run_grid(p, zs, thetas, methods, tol, jobs=1):
    tasks = [(p, float(z), [float(t) for t in thetas], tuple(methods), tol) for z in zs]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_row, tasks))
    else:
        rows = [_row(t) for t in tasks]
    cells, fails = [], []
    for (_, z, _, _, _), row in zip(tasks, rows):
        for th, m, val, err, msg in row:
            if msg is None:
                cells.append(Cell(z, th, complex(val), float(err), m))
            else:
                fails.append({"z": z, "theta": th, "method": m, "error": msg})
    return cells, fails


def growth_violation(cells, exponent=0.0, rtol=0.1):
    """Growth beyond the error fields on the last z-decade.

    The lower bound (|K| - err)/(1+z)^exponent over z >= z_max/10 is
    compared with (1 + rtol) times the upper bound over the earlier cells.
    """
    if not cells:
        return False
    zs = np.array([c.z for c in cells])
    norm = (1.0 + zs) ** exponent
    lo = np.array([max(c.abs - c.err, 0.0) for c in cells]) / norm
    hi = np.array([c.abs + c.err for c in cells]) / norm
    last = zs >= zs.max() / 10.0
    if last.all() or not (~last).any():
        return False
    return bool(lo[last].max() > (1.0 + rtol) * hi[~last].max())


def sup_by_z(cells):
    """Per-radius sup of |K| (sorted radii, sups)."""
    d = {}
    for c in cells:
        d[c.z] = max(d.get(c.z, 0.0), c.abs)
    zs = np.array(sorted(d))
    return zs, np.array([d[z] for z in zs])


def scan(cfg, jobs=1, bound=None):
    """Evaluate the grid of cfg and summarize it.

    Parameters
    ----------
    cfg : ScanConfig
    jobs : int
        Worker processes; rows are reassembled in (z, theta) order.
    bound : float, optional
        Explicit bound on sup |K|/(1+z)^exponent; exceeding it beyond the
        error field is a violation.

    Returns
    -------
    ScanReport
    """
    t0 = time.perf_counter()
    p = KernelParams(cfg.a, cfg.m)
    cells, fails = _run_grid(p, cfg.z_grid(), cfg.theta_grid(), cfg.methods, cfg.tol, jobs)
    expo = cfg.bound_exponent
    norm = [c.abs / (1.0 + c.z) ** expo for c in cells]
    rep = ScanReport(config=_config_dict(cfg, bound), cells=cells,
                     sup=float(max(norm)) if norm else float("nan"), failures=fails)
    rep.growth_flag = growth_violation(cells, expo, cfg.growth_rtol)
    if rep.growth_flag:
        rep.violations.append({"kind": "growth", "family": cfg.family, "exponent": expo})
    if bound is not None:
        over = [c for c in cells if (c.abs - c.err) / (1.0 + c.z) ** expo > bound]
        if over:
            worst = max(over, key=lambda c: c.abs)
            rep.violations.append({"kind": "bound", "bound": bound, "count": len(over),
                                   "z": worst.z, "theta": worst.theta, "abs": worst.abs})
    zs, sups = sup_by_z(cells)
    if cfg.z_log and len(zs) >= 3 and np.all(sups > 0):
        rep.exponent_fit = fit_slope(zs, sups)
    rep.runtime = time.perf_counter() - t0
    return rep


def _config_dict(cfg, bound=None):
    d = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    d["methods"] = list(cfg.methods)
    if bound is not None:
        d["bound"] = bound
    return d


def fit_exponent(cfg, jobs=1):
    """Slope of log sup_theta |K| against log z over the grid of cfg.

    Raises
    ------
    DomainError
        Fewer than three usable radii.
    """
    t0 = time.perf_counter()
    p = KernelParams(cfg.a, cfg.m)
    cells, fails = _run_grid(p, cfg.z_grid(), cfg.theta_grid(), cfg.methods, cfg.tol, jobs)
    zs, sups = sup_by_z(cells)
    fit = fit_slope(zs, sups)
    return ScanReport(config=_config_dict(cfg), cells=cells, sup=float(sups.max()),
                      exponent_fit=fit, failures=fails, runtime=time.perf_counter() - t0)


def crosscheck(p, zs, thetas, methods=None, tol=1e-10, slack=0.0):
    """Pairwise agreement of methods against their combined error fields.

    Points where a method is out of range are skipped for that method.

    Returns
    -------
    ScanReport
        cells hold every evaluation; config["pairs"] maps "m1/m2" to
        {max_dev, max_ratio, points, pass}. One violation per failing pair.
    """
    t0 = time.perf_counter()
    methods = list(methods or available_methods(p))
    if len(methods) < 2:
        raise DomainError("cross-check needs at least two methods")
    cells, fails = _run_grid(p, zs, thetas, methods, tol)
    table = {}
    for c in cells:
        table.setdefault((c.z, c.theta), {})[c.method] = c
    pairs = {}
    viol = []
    for m1, m2 in combinations(methods, 2):
        devs, ratios = [], []
        for point in table.values():
            if m1 in point and m2 in point:
                a, b = point[m1], point[m2]
                d = abs(a.value - b.value)
                devs.append(d)
                ratios.append(d / (a.err + b.err + slack + 1e-300))
        key = f"{m1}/{m2}"
        if not devs:
            pairs[key] = {"max_dev": None, "max_ratio": None, "points": 0, "pass": None}
            continue
        ok = max(ratios) <= 1.0
        pairs[key] = {"max_dev": max(devs), "max_ratio": max(ratios), "points": len(devs), "pass": ok}
        if not ok:
            viol.append({"kind": "disagreement", "pair": key, "max_dev": max(devs), "max_ratio": max(ratios)})
    return ScanReport(
        config={"a": p.a, "m": p.m, "zs": [float(z) for z in zs], "thetas": [float(t) for t in thetas],
                "methods": methods, "tol": tol, "pairs": pairs},
        cells=cells, sup=float(max(c.abs for c in cells)) if cells else float("nan"),
        violations=viol, failures=fails, runtime=time.perf_counter() - t0,
    )


def point_record(p, g, method, tol):
    """Dictionary record of one evaluation (used by the CLI)."""
    ev = evaluate(p, g, method, tol)
    return {"a": p.a, "m": p.m, "z": g.z, "xi": g.xi, "theta": g.theta, "re": ev.value.real,
            "im": ev.value.imag, "abs": abs(ev.value), "err": ev.err, "method": ev.method}


__all__ = ["METHODS", "available_methods", "evaluate", "evaluate_many", "scan", "fit_exponent",
           "crosscheck", "growth_violation", "sup_by_z", "point_record"]
