"""Prabhakar (three-parameter Mittag-Leffler) function.

E^delta_{alpha,beta}(z) = sum_n (delta)_n z^n / (n! Gamma(alpha n + beta)).

Two evaluators are provided: the power series with a ratio-test tail
majorant, and the Hankel-type contour integral over gamma(eps, mu) with
the residue-type correction for points to the right of the contour.
"""
from __future__ import annotations

import cmath
import math
import time

import numpy as np
from scipy.special import gammaln, gammasgn, poch, rgamma

from .errors import AccuracyError, DomainError, GeometryError
from .quadrature import gauss_jacobi, geometric_edges, integrate_panels, panel_rule
from .reports import Cell, ScanReport, growth_flag
from .types import ComplexEval, ContourSpec, PrabhakarParams

EPS = np.finfo(float).eps
SERIES_TERMS = 400


def _rgamma(x):
    if x <= 0 and x == round(x):
        return 0.0
    return float(rgamma(x))


def prabhakar_series(p, z, tol=1e-10, max_terms=2000):
    """Power series of the Prabhakar function.

    Terms are generated by the ratio
    t_n / t_{n-1} = z (delta + n - 1) / (n (alpha(n-1) + beta)_alpha)
    with the Pochhammer factor taken from scipy.

    Parameters
    ----------
    p : PrabhakarParams
    z : complex
    tol : float
        Target absolute accuracy. Used as an input check; the sum always
        runs until the tail majorant is at rounding level.
    max_terms : int
        Term cap.

    Returns
    -------
    ComplexEval
        err is the ratio-test tail majorant plus a rounding estimate
        eps (4 + sqrt(N)) sum |t_n| over the N terms used.

    Raises
    ------
    AccuracyError
        If the tail majorant does not reach rounding level within
        max_terms, or the terms overflow.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    z = complex(z)
    a, b, d = p.alpha, p.beta, p.delta
    t = _rgamma(b) + 0j
    if z == 0:
        return ComplexEval(t, 0.0, "series")
    total = t
    absum = abs(t)
    for n in range(1, max_terms + 1):
        x = a * (n - 1) + b
        if x <= 0 or t == 0:
            # restart from the closed coefficient near Gamma poles
            lc = gammaln(d + n) - gammaln(d) - gammaln(n + 1.0)
            nxt = math.exp(lc) * _rgamma(a * n + b) * z ** n
        else:
            nxt = t * z * (d + n - 1) / (n * poch(x, a))
        if not cmath.isfinite(nxt):
            raise AccuracyError(f"series terms overflow at |z|={abs(z):.4g}")
        total += nxt
        absum += abs(nxt)
        # ratio bound for the remaining terms, valid once it is decreasing in n;
        # past the Gamma poles a zero term means underflow, not a pole
        xn = a * n + b
        if xn > 2.0 and n + 1 > d and absum > 0:
            rho = abs(z) * (d + n) / ((n + 1) * poch(xn, a))
            if rho < 0.9:
                tail = abs(nxt) * rho / (1.0 - rho)
                if tail <= 1e-17 * absum:
                    err = tail + EPS * (4.0 + math.sqrt(n)) * absum
                    return ComplexEval(total, err, "series")
        t = nxt
    raise AccuracyError(f"Prabhakar series tail not at rounding level within {max_terms} terms at z={z}")


def default_contour(alpha, epsilon=1.0):
    """Contour with mu at the midpoint of the admissible window."""
    lo, hi = 0.5 * math.pi * alpha, min(math.pi, math.pi * alpha)
    return ContourSpec(epsilon, 0.5 * (lo + hi))


def contour_region(z, c):
    """'minus' (left of the contour), 'plus' (right) for a point z."""
    z = complex(z)
    if abs(z) < c.epsilon or abs(cmath.phase(z)) > c.mu:
        return "minus"
    return "plus"


def contour_distance(z, c):
    """Euclidean distance from z to gamma(eps, mu)."""
    z = complex(z)
    ph = cmath.phase(z)
    d = math.inf
    # arc
    if abs(ph) <= c.mu:
        d = abs(abs(z) - c.epsilon)
    else:
        for s in (1, -1):
            d = min(d, abs(z - c.epsilon * cmath.exp(1j * s * c.mu)))
    # rays
    for s in (1, -1):
        u = cmath.exp(1j * s * c.mu)
        t = max((z * u.conjugate()).real, c.epsilon)
        d = min(d, abs(z - t * u))
    return d


def _ray_cutoff(alpha, mu, q, eps0):
    c = -math.cos(mu / alpha)
    r = max(eps0 * 2.0, (45.0 / c) ** alpha)
    for _ in range(30):
        r = ((45.0 + max(0.0, (q + 1.0) * math.log(r))) / c) ** alpha
    return max(r, eps0 * 2.0)


def _g_plus_derivative(p, z):
    """(1/(alpha Gamma(delta))) d^{delta-1}/dz^{delta-1} [exp(z^{1/alpha}) z^{(1-beta)/alpha + delta - 1}].

    Exact expansion into sum_e c_e z^e exp(z^{1/alpha}).
    """
    a = p.alpha
    d = int(round(p.delta))
    terms = {round((1.0 - p.beta) / a + d - 1.0, 12): 1.0}
    for _ in range(d - 1):
        nxt = {}
        for e, c in terms.items():
            if e != 0.0:
                k = round(e - 1.0, 12)
                nxt[k] = nxt.get(k, 0.0) + c * e
            k = round(e + 1.0 / a - 1.0, 12)
            nxt[k] = nxt.get(k, 0.0) + c / a
        terms = nxt
    logz = cmath.log(complex(z))
    w = cmath.exp(logz / a)
    total = 0j
    for e, c in terms.items():
        total += c * cmath.exp(e * logz + w)
    return total / (a * math.gamma(d))


def prabhakar_contour(p, z, c=None, tol=1e-10, nodes=64):
    """Contour-integral evaluation of the Prabhakar function.

    Parameters
    ----------
    p : PrabhakarParams
        Needs 0 < alpha < 2.
    z : complex
    c : ContourSpec, optional
        Defaults to epsilon = 1 and mu at the middle of the window.
    tol : float
    nodes : int
        Starting Gauss-Legendre order per panel, doubled until stable.

    Returns
    -------
    ComplexEval
    """
    if not 0 < p.alpha < 2:
        raise DomainError("contour representation needs 0 < alpha < 2")
    z = complex(z)
    c = c or default_contour(p.alpha)
    c.check(p.alpha)
    if contour_distance(z, c) <= max(tol, 1e-12 * max(1.0, abs(z))):
        raise GeometryError(f"z={z} lies on the contour (eps={c.epsilon}, mu={c.mu})")
    region = contour_region(z, c)
    is_int = abs(p.delta - round(p.delta)) < 1e-12
    if region == "plus" and not is_int:
        raise DomainError("points right of the contour need an integer delta")
    a, b, dl = p.alpha, p.beta, p.delta
    q = (1.0 - b) / a - 1.0
    pref = 1.0 / (2j * math.pi * a)

    def f(zeta):
        lz = np.log(zeta)
        base = np.exp(np.exp(lz / a) + q * lz)
        return base * np.exp(-dl * np.log(1.0 - z / zeta))

    eps0, mu = c.epsilon, c.mu
    # arc from -mu to mu
    arc_edges = np.linspace(-mu, mu, 9)
    if abs(abs(z) - eps0) < 0.5 * eps0:
        arc_edges = np.unique(np.append(arc_edges, np.clip(cmath.phase(z), -mu, mu)))

    def arc(phi):
        zeta = eps0 * np.exp(1j * phi)
        return f(zeta) * 1j * zeta

    rmax = _ray_cutoff(a, mu, max(q, 0.0), eps0)
    extra = []
    for s in (1, -1):
        proj = (z * cmath.exp(-1j * s * mu)).real
        if proj > eps0:
            extra += [proj, proj * 0.9, proj * 1.1]
    ray_edges = geometric_edges(eps0, rmax, ratio=1.5, extra=extra)
    up, dn = cmath.exp(1j * mu), cmath.exp(-1j * mu)

    def rays(r):
        return f(r * up) * up - f(r * dn) * dn

    v_arc, e_arc = integrate_panels(arc, arc_edges, n=nodes, tol=1e-14)
    v_ray, e_ray = integrate_panels(rays, ray_edges, n=nodes, tol=1e-14)
    # magnitude scale for a rounding estimate
    xa, wa = panel_rule(arc_edges, nodes)
    xr, wr = panel_rule(ray_edges, nodes)
    scale = np.dot(wa, np.abs(arc(xa))) + np.dot(wr, np.abs(rays(xr)))
    value = pref * (v_arc + v_ray)
    err = abs(pref) * (e_arc + e_ray + 8 * EPS * scale)
    if region == "plus":
        corr = _g_plus_derivative(p, z)
        value += corr
        err += 8 * EPS * abs(corr)
    return ComplexEval(value, err, "contour")


def prabhakar(p, z, tol=1e-10):
    """Prabhakar function with automatic method choice.

    Series when it converges within SERIES_TERMS terms to tol, otherwise
    the contour integral, otherwise a long series.
    """
    z = complex(z)
    try:
        r = prabhakar_series(p, z, tol, max_terms=SERIES_TERMS)
        if r.err <= tol:
            return r
    except AccuracyError:
        pass
    if 0 < p.alpha < 2:
        c = default_contour(p.alpha)
        is_int = abs(p.delta - round(p.delta)) < 1e-12
        if contour_region(z, c) == "plus" and not is_int:
            # move the arc outside z so that it lies left of the contour
            c = ContourSpec(1.5 * abs(z), c.mu)
        if contour_distance(z, c) < 0.05:
            c = ContourSpec(c.epsilon * (0.5 if abs(z) > c.epsilon else 2.0), c.mu)
        r = prabhakar_contour(p, z, c, tol)
        if r.err <= max(tol, 1e-13 * abs(r.value)):
            return r
    return prabhakar_series(p, z, tol, max_terms=20000)


def _series_coefficients(p, nterms):
    """(delta)_n / (n! Gamma(alpha n + beta)) for n = 0..nterms-1 as (log|c|, sign)."""
    n = np.arange(nterms, dtype=float)
    lc = gammaln(p.delta + n) - gammaln(p.delta) - gammaln(n + 1.0)
    x = p.alpha * n + p.beta
    pole = (x <= 0) & (x == np.round(x))
    with np.errstate(divide="ignore", invalid="ignore"):
        lr = np.where(pole, -np.inf, -gammaln(np.where(pole, 1.0, x)))
    return lc + lr, np.where(pole, 0.0, gammasgn(np.where(pole, 1.0, x)))


def prabhakar_many(p, zs, tol=1e-10):
    """Prabhakar function at many arguments.

    A vectorized SERIES_TERMS-term series is used wherever its tail and
    rounding estimate meet tol; remaining points go through prabhakar.

    Returns
    -------
    values : ndarray of complex
    errs : ndarray of float
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    values = np.empty(zs.shape, dtype=complex)
    errs = np.empty(zs.shape)
    if zs.size == 0:
        return values, errs
    logc, sgn = _series_coefficients(p, SERIES_TERMS + 1)
    n = np.arange(SERIES_TERMS + 1, dtype=float)[:, None]
    nz = zs != 0
    logz = np.log(np.where(nz, zs, 1.0))[None, :]
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        terms = sgn[:, None] * np.exp(logc[:, None] + n * logz)
    terms[1:, ~nz] = 0.0
    terms[0, :] = sgn[0] * math.exp(logc[0]) if np.isfinite(logc[0]) else 0.0
    body = terms[:-1]
    total = body.sum(axis=0)
    absum = np.abs(body).sum(axis=0)
    last = np.abs(terms[-1])
    with np.errstate(invalid="ignore", divide="ignore"):
        rho = np.abs(zs) * math.exp(logc[-1] - logc[-2]) if np.isfinite(logc[-2]) else np.inf
        tail = np.where(rho < 0.5, last / (1.0 - rho), np.inf)
    err = tail + EPS * (4.0 + math.sqrt(SERIES_TERMS)) * absum
    ok = np.isfinite(total) & np.isfinite(err) & (err <= tol)
    values[ok], errs[ok] = total[ok], err[ok]
    for i in np.flatnonzero(~ok):
        r = prabhakar(p, zs[i], tol)
        values[i], errs[i] = r.value, r.err
    return values, errs


def mittag_leffler(alpha, beta, z, tol=1e-10):
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z)."""
    return prabhakar(PrabhakarParams(alpha, beta, 1.0), z, tol)


def prabhakar_reduce(p, z, tol=1e-10):
    """Integer-delta Prabhakar function from two-parameter Mittag-Leffler values."""
    d = int(round(p.delta))
    if d != p.delta or d < 1:
        raise DomainError("prabhakar_reduce needs an integer delta")
    coef = reduction_coefficients(p.alpha, p.beta, d)
    total = 0j
    err = 0.0
    for s, c in coef.items():
        r = mittag_leffler(p.alpha, p.beta - s, z, tol)
        total += c * r.value
        err += abs(c) * r.err
    return ComplexEval(total, err, "reduce")


def reduction_coefficients(alpha, beta, d):
    """Coefficients c_s with E^d_{alpha,beta} = sum_s c_s E_{alpha,beta-s} for integer d >= 1."""
    # level d holds {shift: coef} for E^d; step down until level 1
    coef = {0: 1.0}
    for level in range(d - 1, 0, -1):
        nxt = {}
        for s, c in coef.items():
            b = beta - s
            # E^{level+1}_b = (E^level_{b-1} + (1 - b + alpha level) E^level_b) / (alpha level)
            nxt[s + 1] = nxt.get(s + 1, 0.0) + c / (alpha * level)
            nxt[s] = nxt.get(s, 0.0) + c * (1.0 - b + alpha * level) / (alpha * level)
        coef = nxt
    return coef


def sector_bound_audit(p, mu, radii=None, n_angles=9, tol=1e-10, growth_rtol=0.1):
    """Scan |E^delta(z)| (1 + |z|^delta) over mu <= |arg z| <= pi.

    Parameters
    ----------
    p : PrabhakarParams
    mu : float
        Sector angle, inside (pi alpha/2, min(pi, pi alpha)).
    radii : array_like, optional
        Radial samples; default is a log grid from 1e-2 to 1e3.
    n_angles : int
        Angles per half-sector.

    Returns
    -------
    ScanReport
        sup of the normalized magnitude, growth flag over the last decade.
    """
    ContourSpec(1.0, mu).check(p.alpha)
    t0 = time.perf_counter()
    radii = np.geomspace(1e-2, 1e3, 31) if radii is None else np.asarray(radii, dtype=float)
    angles = np.linspace(mu, math.pi, n_angles)
    # contour strictly inside the sector, as in the bound's proof
    c_mu = 0.5 * (0.5 * math.pi * p.alpha + mu)
    cells, fails = [], []
    for r in radii:
        for s in (1.0, -1.0):
            for ang in angles:
                if s < 0 and ang == math.pi:
                    continue
                z = r * cmath.exp(1j * s * ang)
                try:
                    ev = _sector_eval(p, z, c_mu, tol)
                except (AccuracyError, GeometryError) as exc:
                    fails.append({"z": r, "theta": s * ang, "error": str(exc)})
                    continue
                cells.append(Cell(float(r), float(s * ang), ev.value, ev.err, ev.method))
    zs = np.array([c.z for c in cells])
    norm = np.array([c.abs * (1.0 + c.z ** p.delta) for c in cells])
    rep = ScanReport(
        config={"audit": "prabhakar-sector", "alpha": p.alpha, "beta": p.beta, "delta": p.delta,
                "mu": mu, "contour_mu": c_mu, "radii": [float(r) for r in radii], "n_angles": n_angles},
        cells=cells,
        sup=float(np.max(norm)) if len(norm) else float("nan"),
        growth_flag=growth_flag(zs, norm, growth_rtol),
        failures=fails,
        runtime=time.perf_counter() - t0,
    )
    if fails:
        rep.violations.append({"kind": "evaluation-failure", "count": len(fails)})
    return rep


def _sector_eval(p, z, c_mu, tol):
    try:
        r = prabhakar_series(p, z, tol, max_terms=SERIES_TERMS)
        if r.err <= tol:
            return r
    except AccuracyError:
        pass
    try:
        return prabhakar_contour(p, z, ContourSpec(1.0, c_mu), tol)
    except (AccuracyError, GeometryError):
        # z hugs the inner contour ray: fall back to the mid-window contour
        return prabhakar(p, z, tol)


def laplace_pair_check(p, z, s, tol=1e-10):
    """Numerical Laplace transform of t^{beta-1} E^delta(z t^alpha) against s^-beta (1 - z s^-alpha)^-delta.

    Needs beta > 0 and s > |z|^{1/alpha}. The integral over [0, 1] is
    taken in u = t^(1/k), with k alpha an integer when k <= 12 allows it,
    and Gauss-Jacobi nodes for the u^(k beta - 1) endpoint factor; the remainder
    composite Gauss-Legendre up to a cutoff where the integrand bound
    exp(-(s - |z|^{1/alpha}) t) is negligible.

    Returns
    -------
    numeric : complex
    exact : complex
    """
    if p.beta <= 0:
        raise DomainError("Laplace pair needs beta > 0")
    s = float(s)
    z = complex(z)
    growth = abs(z) ** (1.0 / p.alpha)
    if s <= growth:
        raise DomainError("need s > |z|^(1/alpha)")
    decay = s - growth
    T = max(2.0, (40.0 + 2.0 * abs(p.beta)) / decay)

    def E(t):
        return np.array([prabhakar(p, z * ti ** p.alpha, tol).value for ti in np.atleast_1d(t)])

    # t = u^k with k alpha integer makes E(z t^alpha) a power series in u;
    # t^{beta-1} dt = k u^{k beta - 1} du goes into the Jacobi weight
    k = next((q for q in range(1, 13) if abs(q * p.alpha - round(q * p.alpha)) < 1e-12), 1)
    x, w = gauss_jacobi(40, 0.0, k * p.beta - 1.0)
    u = 0.5 * (1.0 + x)
    t = u ** k
    first = k * np.dot(w, np.exp(-s * t) * E(t)) * 0.5 ** (k * p.beta)
    edges = np.linspace(1.0, T, max(2, int(math.ceil(T)) + 1))
    nodes, weights = panel_rule(edges, 24)
    second = np.dot(weights, np.exp(-s * nodes) * nodes ** (p.beta - 1.0) * E(nodes))
    numeric = first + second
    exact = s ** (-p.beta) * (1.0 - z * s ** (-p.alpha)) ** (-p.delta)
    return complex(numeric), complex(exact)
