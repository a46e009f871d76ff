"""Bessel-Gegenbauer series for K_a^m, the dimension lift and the integral transform.

The series is

    K_a^m(z, xi) = a^{2 lam/a} Gamma((2 lam + a)/a)
                   * sum_k e^{-i pi k/a} (lam + k)/lam z^{-lam} J_{2(k+lam)/a}(z_a) C_k^lam(xi)

with lam = (m-2)/2 and z_a = (2/a) z^{a/2}. For m = 2 the lam -> 0 limit
J_0(z_a) + 2 sum_{k>=1} e^{-i pi k/a} J_{2k/a}(z_a) cos(k theta) is used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np
from scipy.special import gammaln

from .errors import AccuracyError, DomainError
from .quadrature import gauss_jacobi, panel_rule
from .special import _scaled_series, bessel_j_orders, gegenbauer_at_one
from .types import ComplexEval, GeomPoint

EPS = np.finfo(float).eps
K_MAX = 10_000
SMALL_ZA = 0.5


def geom_from_cartesian(x, y):
    """Reduced coordinates of a pair of vectors.

    Parameters
    ----------
    x, y : array_like
        Vectors of the same dimension m >= 2.

    Returns
    -------
    GeomPoint
        z = |x||y| and xi = <x,y>/z (0 when z = 0), clamped to [-1, 1].
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise DomainError(f"dimension mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise DomainError("dimension must be at least 2")
    z = float(np.linalg.norm(x) * np.linalg.norm(y))
    if z == 0.0:
        return GeomPoint(0.0, 0.0)
    xi = float(np.dot(x, y)) / z
    if abs(xi) > 1.0 + 1e-9:
        raise DomainError("inner product inconsistent with norms")
    return GeomPoint(z, max(-1.0, min(1.0, xi)))


def _gegenbauer_matrix(kmax, lam, xis):
    """Rows k = 0..kmax of C_k^lam(xi); for lam = 0 the rows are 1, 2cos(k theta)."""
    xis = np.asarray(xis, dtype=float)
    out = np.empty((kmax + 1, xis.size))
    out[0] = 1.0
    if lam == 0.0:
        th = np.arccos(np.clip(xis, -1.0, 1.0))
        k = np.arange(1, kmax + 1)[:, None]
        out[1:] = 2.0 * np.cos(k * th[None, :])
        return out
    if kmax >= 1:
        out[1] = 2.0 * lam * xis
    for k in range(1, kmax):
        out[k + 1] = (2.0 * (k + lam) * xis * out[k] - (k + 2.0 * lam - 1.0) * out[k - 1]) / (k + 1)
    return out


def _bessel_bound(nus, x):
    """Upper bound for |J_nu(x)|, nu >= 0, x > 0."""
    nus = np.asarray(nus, dtype=float)
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        asc = np.exp(nus * math.log(0.5 * x) - gammaln(nus + 1.0))
        t = np.clip(x / nus, 0.0, 1.0)
        s = np.sqrt(1.0 - t * t)
        kap = np.exp(nus * (np.log(t) + s - np.log1p(s)))
        kap = np.where(nus > x, kap, 1.0)
    return np.minimum(np.minimum(asc, kap), 1.0)


def _series_coefficients(p, z, ks):
    """Coefficient of J_{nu_k} C_k in the series, per k (complex), without J and C."""
    ks = np.asarray(ks, dtype=float)
    phase = np.exp(-1j * np.pi * ks / p.a)
    if p.lam == 0.0:
        return phase
    return p.prefactor * phase * (p.lam + ks) / p.lam * z ** (-p.lam)


def _orders(p, ks):
    return 2.0 * (np.asarray(ks, dtype=float) + p.lam) / p.a


def _truncation(p, za):
    """Initial truncation index: Bessel orders well beyond the turning point."""
    need = za + 8.0 * za ** (1.0 / 3.0) + 40.0
    return int(math.ceil(0.5 * p.a * need - p.lam)) + 1


def _tail_bound(p, z, za, kmax):
    """Majorant of sum_{k > kmax} |coef_k| C_k(1) |J_{nu_k}(z_a)|."""
    total = 0.0
    start = kmax + 1
    while True:
        ks = np.arange(start, start + 256, dtype=float)
        c = np.abs(_series_coefficients(p, z, ks)) * (2.0 if p.lam == 0 else gegenbauer_at_one(ks, p.lam))
        b = c * _bessel_bound(_orders(p, ks), za)
        total += float(b.sum())
        last, prev = b[-1], b[-2]
        if last == 0.0:
            return total
        rho = last / prev if prev > 0 else 1.0
        if rho < 0.5:
            return total + last * rho / (1.0 - rho)
        if start > 20 * K_MAX:
            return math.inf
        start += 256


def _small_series(p, z, za, xis, tol, k_max):
    """Series for z_a < SMALL_ZA with z^-lam J_nu(z_a) = a^-nu z^k Jt_nu(z_a).

    Terms are formed in log space, so neither z^-lam nor J_nu underflow or
    overflow for tiny z. |Jt_nu| <= 1/Gamma(nu+1) bounds the tail.
    """
    ks = np.arange(min(k_max, 400) + 1, dtype=float)
    nus = _orders(p, ks)
    lead = 0.0 if p.lam == 0.0 else math.log(p.prefactor)
    lc = ks * math.log(z) - nus * math.log(p.a) - gammaln(nus + 1.0)
    if p.lam > 0.0:
        lc = lc + lead + np.log((p.lam + ks) / p.lam)
        top = gegenbauer_at_one(ks, p.lam)
    else:
        top = np.where(ks == 0, 1.0, 2.0)
    with np.errstate(under="ignore"):
        mags = np.exp(lc) * top
    # bounds decrease geometrically once k exceeds a few units (z_a < 1/2)
    small = np.flatnonzero((mags <= 1e-3 * tol) & (ks >= 2))
    if small.size == 0:
        raise AccuracyError(f"small-argument series did not reach tol at z={z:.3g}")
    kmax = int(small[0])
    rho = mags[kmax] / mags[kmax - 1] if mags[kmax - 1] > 0 else 0.0
    tail = mags[kmax] / (1.0 - rho) if rho < 1 else math.inf
    ks, nus = ks[:kmax], nus[:kmax]
    with np.errstate(under="ignore"):
        coef = np.exp(-1j * np.pi * ks / p.a) * np.exp(lc[:kmax]) * _scaled_series(nus, za)
    terms = coef[:, None] * _gegenbauer_matrix(kmax - 1, p.lam, xis)
    values = terms.sum(axis=0)
    errs = tail + 16 * EPS * np.abs(terms).sum(axis=0)
    return values, errs


def kernel_series_theta(p, z, xis, tol=1e-10, k_max=K_MAX):
    """Kernel series at one radius z for many xi values.

    The Bessel values are shared between all angles.

    Returns
    -------
    values : ndarray of complex
    errs : ndarray of float
    """
    xis = np.clip(np.atleast_1d(np.asarray(xis, dtype=float)), -1.0, 1.0)
    if z < 0:
        raise DomainError("z must be nonnegative")
    if z == 0.0:
        return np.ones(xis.size, dtype=complex), np.zeros(xis.size)
    za = float(p.z_a(z))
    if za < SMALL_ZA:
        return _small_series(p, z, za, xis, tol, k_max)
    kmax = min(_truncation(p, za), k_max)
    tail = _tail_bound(p, z, za, kmax)
    if tail > tol:
        raise AccuracyError(
            f"series tail bound {tail:.3e} > tol at z={z:.6g} (a={p.a}, m={p.m}); k_max={k_max} too small"
        )
    ks = np.arange(kmax + 1)
    jv = bessel_j_orders(_orders(p, ks), za)
    coef = _series_coefficients(p, z, ks) * jv
    G = _gegenbauer_matrix(kmax, p.lam, xis)
    terms = coef[:, None] * G
    values = terms.sum(axis=0)
    absum = np.abs(terms).sum(axis=0)
    # Bessel values are accurate to about 1e-13 absolute
    cmax = np.abs(_series_coefficients(p, z, ks)) * (2.0 if p.lam == 0 else gegenbauer_at_one(ks, p.lam))
    bessel_err = 1e-13 * float(np.sum(cmax * np.minimum(1.0, _bessel_bound(_orders(p, ks), za) * 10)))
    errs = tail + 16 * EPS * absum + bessel_err
    return values, errs


def kernel_series(p, g, tol=1e-10, k_max=K_MAX):
    """Bessel-Gegenbauer series evaluation of K_a^m.

    Parameters
    ----------
    p : KernelParams
    g : GeomPoint
    tol : float
        Bound required of the truncation tail.
    k_max : int
        Term cap.

    Returns
    -------
    ComplexEval
        err is the tail majorant plus rounding and Bessel error estimates.

    Raises
    ------
    AccuracyError
        When the tail bound exceeds tol at k_max terms.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    v, e = kernel_series_theta(p, g.z, [g.xi], tol, k_max)
    return ComplexEval(v[0], e[0], "series")


def lift_constant(p):
    """Factor e^{i pi/a} a^{2/a} Gamma((2lam+a+2)/a) / (2(lam+1) Gamma((2lam+a)/a))."""
    a, lam = p.a, p.lam
    mag = math.exp(2.0 / a * math.log(a) + math.lgamma((2 * lam + a + 2) / a) - math.lgamma((2 * lam + a) / a))
    return np.exp(1j * math.pi / a) * mag / (2.0 * (lam + 1.0))


def kernel_dimension_lift(p, g, h=1e-4, base=None):
    """K_a^{m+2} from K_a^m by a central difference in xi.

    Parameters
    ----------
    p : KernelParams
        Parameters of the lower dimension m.
    g : GeomPoint
    h : float
        Difference step; needs |xi| < 1 - h.
    base : callable, optional
        base(p, g) -> ComplexEval for K_a^m; defaults to kernel_series.

    Returns
    -------
    ComplexEval
        Value for dimension m + 2. err combines the propagated base errors
        and a step-halving estimate of the O(h^2) truncation.
    """
    if g.z == 0.0:
        raise DomainError("dimension lift is singular at z = 0")
    if abs(g.xi) >= 1.0 - h:
        raise DomainError("central difference leaves [-1, 1]; need |xi| < 1 - h")
    base = base or kernel_series

    def diff(step):
        fp = base(p, GeomPoint(g.z, g.xi + step))
        fm = base(p, GeomPoint(g.z, g.xi - step))
        return (fp.value - fm.value) / (2 * step), (fp.err + fm.err) / (2 * step)

    d1, e1 = diff(h)
    d2, e2 = diff(0.5 * h)
    c = lift_constant(p) / g.z
    trunc = 4.0 / 3.0 * abs(d1 - d2)
    return ComplexEval(c * d1, abs(c) * (e1 + trunc), "lift")


def transform_normalization(p):
    """Gamma(m/2) / (Gamma((2lam+a)/a) 2 a^{2lam/a} pi^{m/2})."""
    return math.gamma(0.5 * p.m) / (2.0 * p.prefactor * math.pi ** (0.5 * p.m))


@dataclass(frozen=True)
class TransformGrid:
    """Quadrature grid: radial cutoff R, radial panels and angular orders."""

    R: float = 8.0
    n_radial: int = 16
    panels: int = 8
    n_polar: int = 24
    n_azimuth: int = 48


def sphere_rule(m, n_polar, n_azimuth):
    """Nodes (unit vectors) and weights on S^{m-1} in hyperspherical coordinates.

    The polar angles use Gauss-Jacobi rules for the sin^k weights, the
    azimuth an equispaced periodic rule.
    """
    phi = 2.0 * math.pi * np.arange(n_azimuth) / n_azimuth
    w_phi = np.full(n_azimuth, 2.0 * math.pi / n_azimuth)
    dirs = [np.stack([np.cos(phi), np.sin(phi)], axis=1)]
    weights = w_phi
    for k in range(1, m - 1):
        # integral over [0, pi] of g(t) sin^k t dt with s = cos t
        s, w = gauss_jacobi(n_polar, 0.5 * (k - 1), 0.5 * (k - 1))
        sin_t = np.sqrt(1.0 - s * s)
        prev = dirs[0]
        new = np.concatenate(
            [prev[None, :, :] * sin_t[:, None, None], np.broadcast_to(s[:, None, None], (len(s), len(prev), 1))],
            axis=2,
        )
        dirs = [new.reshape(-1, k + 2)]
        weights = (w[:, None] * weights[None, :]).ravel()
    return dirs[0], weights


def transform_apply(p, f, ys, grid=None, tail_bound=None, tol=1e-6, evaluator=None):
    """Quadrature realization of the integral transform with kernel K_a^m.

    F[f](y) = norm * integral K(x, y) f(x) |x|^{a-2} dx, over |x| <= R.

    Parameters
    ----------
    p : KernelParams
    f : callable
        f(X) for an (N, m) array of points, returning N values.
    ys : array_like
        Target points, shape (M, m).
    grid : TransformGrid, optional
    tail_bound : float, optional
        Caller's bound on the neglected |x| > R contribution. If omitted,
        a shell probe max|f| R^{m+a-2} on |x| = R is used.
    tol : float
        Largest acceptable tail.
    evaluator : callable, optional
        evaluator(p, zs, xis) -> complex array; defaults to the best
        available method per point.

    Returns
    -------
    ndarray of complex

    Raises
    ------
    AccuracyError
        If the tail bound or probe exceeds tol.
    """
    from .methods import evaluate_many

    grid = grid or TransformGrid()
    evaluator = evaluator or evaluate_many
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    if ys.shape[1] != p.m:
        raise DomainError(f"targets must have dimension {p.m}")
    dirs, w_ang = sphere_rule(p.m, grid.n_polar, grid.n_azimuth)
    if tail_bound is None:
        shell = f(grid.R * dirs)
        tail_bound = float(np.max(np.abs(shell))) * grid.R ** (p.m + p.a - 2) * float(np.sum(w_ang))
    if tail_bound > tol:
        raise AccuracyError(f"radial tail bound {tail_bound:.3e} exceeds tol {tol:.1e}; enlarge R")
    r, w_r = panel_rule(np.linspace(0.0, grid.R, grid.panels + 1), grid.n_radial)
    X = (r[:, None, None] * dirs[None, :, :]).reshape(-1, p.m)
    W = (w_r[:, None] * r[:, None] ** (p.m - 1 + p.a - 2) * w_ang[None, :]).ravel()
    fx = np.asarray(f(X), dtype=complex) * W
    nx = np.linalg.norm(X, axis=1)
    out = np.empty(len(ys), dtype=complex)
    for i, y in enumerate(ys):
        ny = np.linalg.norm(y)
        zs = nx * ny
        with np.errstate(invalid="ignore", divide="ignore"):
            xis = np.where(zs > 0, (X @ y) / np.where(zs > 0, zs, 1.0), 0.0)
        kv = evaluator(p, zs, np.clip(xis, -1.0, 1.0))
        out[i] = np.dot(kv, fx)
    return transform_normalization(p) * out
