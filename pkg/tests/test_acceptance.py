"""Acceptance criteria 1-12, one pass/fail line each.

Run with pytest (the lines are printed past output capture) or directly
with ``python3 tests/test_acceptance.py``.
"""
import cmath
import math
import time

import numpy as np
import pytest

from radkernel.closed_forms import (
    kernel_a1,
    kernel_a2,
    kernel_a4_dim2,
    kernel_a4_even,
    kernel_a8_even_part,
    kernel_subsample,
)
from radkernel.cli import random_multipoles
from radkernel.integral_rep import kernel_via_integral, sector_kernel_audit
from radkernel.kernel import TransformGrid, kernel_series, transform_apply
from radkernel.laplace import f_n_alpha, ilt_kernel_check
from radkernel.methods import fit_exponent, scan
from radkernel.mittag_leffler import (
    contour_distance,
    contour_region,
    default_contour,
    laplace_pair_check,
    prabhakar_contour,
    prabhakar_reduce,
    prabhakar_series,
    sector_bound_audit,
)
from radkernel.reports import ScanConfig
from radkernel.types import GeomPoint, KernelParams, PrabhakarParams

HB1 = 1 + 2 * math.sqrt(2 / math.pi)


def _grid(z_max, nz, nt, z_min=0.0):
    return [(z, th) for z in np.linspace(z_min, z_max, nz) for th in np.linspace(0.0, math.pi, nt)]


def c1_reductions():
    t0 = time.perf_counter()
    dev = 0.0
    for m in (2, 3, 5):
        for z, th in _grid(6.0, 20, 20):
            g = GeomPoint.from_theta(z, th)
            dev = max(dev, abs(kernel_series(KernelParams(2, m), g).value - cmath.exp(-1j * g.z * g.xi)))
            dev = max(dev, abs(kernel_series(KernelParams(1, m), g).value - kernel_a1(m, g).value))
    dt = time.perf_counter() - t0
    return dev <= 1e-9 and dt < 10, f"max dev {dev:.2e} (<= 1e-9), {dt:.1f} s (< 10 s)"


def c2_a4_closed_forms():
    t0 = time.perf_counter()
    dev = 0.0
    for z, th in _grid(5.0, 20, 20):
        g = GeomPoint.from_theta(z, th)
        dev = max(dev, abs(kernel_series(KernelParams(4, 2), g).value - kernel_a4_dim2(g).value))
        dev = max(dev, abs(kernel_series(KernelParams(4, 4), g).value - kernel_a4_even(4, g, "explicit").value))
        dev = max(dev, abs(kernel_series(KernelParams(4, 6), g).value - kernel_a4_even(6, g).value))
    dt = time.perf_counter() - t0
    return dev <= 1e-8 and dt < 30, f"max dev {dev:.2e} (<= 1e-8), {dt:.1f} s (< 30 s)"


def c3_explicit_numbers():
    sup = 0.0
    for z in np.linspace(0.0, 200.0, 2001):
        for th in np.linspace(0.0, math.pi, 91):
            sup = max(sup, abs(kernel_a4_dim2(GeomPoint.from_theta(z, th)).value))
    lim = abs(kernel_a4_dim2(GeomPoint(50.0, 1.0)).value)
    ok = sup <= HB1 + 1e-6 and abs(lim - 2) <= 0.02
    return ok, f"sup {sup:.6f} <= {HB1:.6f}, |K(50, xi=1)| = {lim:.4f} (2 +- 0.02)"


def c4_growth_exponents():
    t0 = time.perf_counter()
    out, ok = [], True
    for m, want, tol in ((2, 0.0, 0.05), (4, 1.0, 0.05), (6, 2.0, 0.1)):
        cfg = ScanConfig(a=4.0, m=m, z_min=10.0, z_max=100.0, z_count=12, z_log=True, theta_count=1)
        slope = fit_exponent(cfg).exponent_fit["slope"]
        ok &= abs(slope - want) <= tol
        out.append(f"m={m}: {slope:.4f}")
    dt = time.perf_counter() - t0
    return ok and dt < 120, ", ".join(out) + f" (want 0, 1, 2), {dt:.1f} s"


def c5_subsampling():
    t0 = time.perf_counter()
    dev = max(abs(kernel_subsample(kernel_a2, 2, g).value - kernel_a1(2, g).value)
              for g in (GeomPoint.from_theta(z, th) for z, th in _grid(6.0, 15, 15)))
    dt = time.perf_counter() - t0
    return dev <= 1e-10 and dt < 5, f"max dev {dev:.2e} (<= 1e-10), {dt:.2f} s (< 5 s)"


def c6_uniform_bounds():
    parts, ok = [], True
    for a in (8.0, 4.0, 2.0, 1.0, 0.5):
        cfg = ScanConfig(a=a, m=2, z_min=0.1, z_max=1e3, z_count=25, z_log=True, theta_count=13)
        rep = scan(cfg)
        good = math.isfinite(rep.sup) and not rep.growth_flag and not rep.failures
        ok &= good
        parts.append(f"a={a:g}: sup {rep.sup:.3f}{'' if good else ' FLAGGED'}")
    p8, dev = KernelParams(8, 2), 0.0
    for z, th in _grid(2.5, 10, 10, z_min=0.25):
        plus = kernel_series(p8, GeomPoint.from_theta(z, th))
        minus = kernel_series(p8, GeomPoint.from_theta(z, math.pi - th))
        even = kernel_a8_even_part(GeomPoint.from_theta(z, th))
        d = abs(0.5 * (plus.value + minus.value) - even.value)
        ok &= d <= 1e-10 + plus.err + minus.err + even.err
        dev = max(dev, d)
    return ok, "; ".join(parts) + f"; a=8 even part dev {dev:.1e}"


def c7_laplace_route():
    t0 = time.perf_counter()
    dev = 0.0
    cases = {
        (1.0, 3): (6.25, lambda g: kernel_a1(3, g).value),
        (2.0, 2): (5.0, lambda g: kernel_a2(g).value),
        (2.0, 4): (5.0, lambda g: kernel_a2(g).value),
        (4.0, 2): (math.sqrt(10.0), lambda g: kernel_a4_dim2(g).value),
    }
    for (a, m), (z_max, ref) in cases.items():
        p = KernelParams(a, m)
        # z_a = 5 at the top, less a rounding margin
        for z in np.linspace(0.0, z_max * (1 - 1e-9), 5):
            for xi in (-0.9, -0.3, 0.4, 1.0):
                g = GeomPoint(z, xi)
                dev = max(dev, abs(ilt_kernel_check(p, g).value - ref(g)))
    dt = time.perf_counter() - t0
    return dev <= 1e-6 and dt < 120, f"max dev {dev:.2e} (<= 1e-6), {dt:.1f} s (< 120 s)"


def c8_multipole_bound():
    cfgs = random_multipoles(np.random.default_rng(0), 50)
    ts = np.linspace(0.02, 1.0, 50)
    worst = -math.inf
    for mp in cfgs:
        for t in ts:
            worst = max(worst, abs(f_n_alpha(mp, t).value) - mp.bound(t))
    return worst <= 1e-8, f"max(|f| - bound) = {worst:.2e} (<= 1e-8) over 50 configurations x 50 t"


def c9_prabhakar():
    msgs, ok = [], True
    # series/contour in the left region, where the series certifies itself
    dev, count = 0.0, 0
    for alpha, beta, delta in ((0.5, 1.0, 1.0), (2 / 3, 4 / 3, 2.0), (0.8, 0.7, 1.5), (1.2, 2.0, 0.6)):
        c = default_contour(alpha)
        p = PrabhakarParams(alpha, beta, delta)
        for r in (1.0, 3.0, 6.0):
            for ang in np.linspace(c.mu + 0.15, math.pi, 4):
                z = r * cmath.exp(1j * ang)
                if contour_region(z, c) != "minus" or contour_distance(z, c) < 0.1:
                    continue
                ser = prabhakar_series(p, z)
                if ser.err > 1e-10 * max(1.0, abs(ser.value)):
                    continue
                count += 1
                dev = max(dev, abs(prabhakar_contour(p, z, c).value - ser.value) / max(1.0, abs(ser.value)))
    ok &= dev <= 1e-8 and count >= 20
    msgs.append(f"contour {dev:.1e} ({count} points)")
    dev = 0.0
    for alpha, beta, d in ((2 / 3, 4 / 3, 2), (0.5, 1.5, 3), (1.0, 2.0, 4), (1.5, 1.0, 2)):
        p = PrabhakarParams(alpha, beta, d)
        for z in (-2.0, -0.5 + 1j, 0.7, 1.5 - 0.5j):
            s = prabhakar_series(p, z).value
            dev = max(dev, abs(prabhakar_reduce(p, z).value - s) / max(1.0, abs(s)))
    ok &= dev <= 1e-10
    msgs.append(f"reduction {dev:.1e}")
    dev = 0.0
    for pp, z, s in (((0.5, 1, 1), -1.0, 2.0), ((2 / 3, 4 / 3, 2), -1.0, 2.0), ((1.5, 2.0, 2.0), 0.5 + 0.5j, 3.0)):
        num, exact = laplace_pair_check(PrabhakarParams(*pp), z, s)
        dev = max(dev, abs(num - exact))
    ok &= dev <= 1e-6
    msgs.append(f"Laplace pair {dev:.1e}")
    rep = sector_bound_audit(PrabhakarParams(0.5, 1.0, 1.0), 0.8)
    good = math.isfinite(rep.sup) and not rep.growth_flag and not rep.failures
    ok &= good and max(c.z for c in rep.cells) >= 1e3 * (1 - 1e-12)
    msgs.append(f"sector sup {rep.sup:.3f}")
    return ok, ", ".join(msgs)


def c10_integral_rep():
    t0 = time.perf_counter()
    ok, worst = True, 0.0
    for a, m in ((2.0, 2), (3.0, 3), (4.0, 2)):
        p = KernelParams(a, m)
        for z in np.linspace(0.25, 3.0, 6):
            for th in np.linspace(0.0, math.pi, 5):
                g = GeomPoint.from_theta(z, th)
                iv, sv = kernel_via_integral(p, g), kernel_series(p, g)
                d = abs(iv.value - sv.value)
                ok &= d <= iv.err + sv.err
                worst = max(worst, d / (iv.err + sv.err))
    dt = time.perf_counter() - t0
    return ok and dt < 180, f"max dev / combined err = {worst:.2f} (<= 1), {dt:.1f} s (< 180 s)"


def c11_sector_boundedness():
    rep = sector_kernel_audit(KernelParams(8.0, 2), 0.5)
    zmax = max(c.z for c in rep.cells)
    ok = math.isfinite(rep.sup) and not rep.growth_flag and not rep.failures and zmax >= 1e3 * (1 - 1e-12)
    return ok, f"sup {rep.sup:.3f} over {len(rep.cells)} cells, z up to {zmax:g}, growth flag {rep.growth_flag}"


def c12_transform():
    p = KernelParams(2, 2)
    rng = np.random.default_rng(5)
    r = 3.0 * np.sqrt(rng.uniform(0, 1, 12))
    phi = rng.uniform(0, 2 * math.pi, 12)
    ys = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
    ys = np.vstack([ys, [[0.0, 0.0], [3.0, 0.0]]])
    out = transform_apply(p, lambda X: np.exp(-0.5 * np.sum(X * X, axis=1)), ys, grid=TransformGrid(R=9.0))
    err = float(np.max(np.abs(out - np.exp(-0.5 * np.sum(ys * ys, axis=1)))))
    return err <= 1e-4, f"max error {err:.2e} (<= 1e-4) on {len(ys)} points with |y| <= 3"


CRITERIA = [
    (1, "reduction exactness", c1_reductions),
    (2, "a=4 closed forms", c2_a4_closed_forms),
    (3, "explicit numbers", c3_explicit_numbers),
    (4, "growth exponents", c4_growth_exponents),
    (5, "subsampling identity", c5_subsampling),
    (6, "uniform boundedness", c6_uniform_bounds),
    (7, "Laplace route", c7_laplace_route),
    (8, "multipole bound", c8_multipole_bound),
    (9, "Prabhakar suite", c9_prabhakar),
    (10, "integral representation", c10_integral_rep),
    (11, "sector boundedness", c11_sector_boundedness),
    (12, "transform sanity", c12_transform),
]


def _line(num, name, ok, detail):
    return f"criterion {num:2d} {name:24s} {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"c{n}" for n, _, _ in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(num, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    for num, name, fn in CRITERIA:
        print(_line(num, name, *fn()), flush=True)
