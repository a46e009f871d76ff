"""Classical special functions needed by the kernel formulas.

Real-order Bessel functions of the first kind, Gegenbauer polynomials,
Fresnel integrals in the un-normalized convention, the complex
complementary error function, Hermite polynomials and parabolic cylinder
functions of non-positive integer order.

Everything here works in double precision and is pure.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .errors import AccuracyError, DomainError, RangeError
from .types import ComplexEval

TOL = 1e-10
EPS = np.finfo(float).eps
LN2 = math.log(2.0)
SQRT_PI = math.sqrt(math.pi)
# common limit of C(u) and S(u) as u -> infinity
FRESNEL_LIMIT = 0.5 * math.sqrt(0.5 * math.pi)

_SERIES_X = 12.0
_HANKEL_X = 25.0
_EXP_MAX = 700.0
_D_FORWARD_RE = 0.5


def _check_finite(*vals):
    for v in vals:
        if not cmath.isfinite(v):
            raise DomainError(f"non-finite argument {v!r}")


# ---------------------------------------------------------------- Bessel J


def _scaled_series(nus, x):
    """Return Gamma(nu+1) * (x/2)^-nu * J_nu(x) for an array of orders.

    The ascending series divided by its leading coefficient. Terms are
    summed until every column has converged.
    """
    nus = np.asarray(nus, dtype=float)
    q = -0.25 * x * x
    term = np.ones_like(nus)
    total = np.ones_like(nus)
    peak = np.ones_like(nus)
    k = 0
    while True:
        k += 1
        term = term * q / (k * (nus + k))
        total = total + term
        peak = np.maximum(peak, np.abs(term))
        if k > abs(q) and np.all(np.abs(term) <= EPS * 0.01 * np.abs(total)):
            break
        if k > 2000:
            raise AccuracyError(f"Bessel series failed to converge at x={x}")
    return total


def _hankel(mu, x):
    """Large-argument Hankel expansion of J_mu(x), mu in [0, 2)."""
    m4 = 4.0 * mu * mu
    p, q = 1.0, 0.0
    t = 1.0
    for k in range(1, 60):
        nt = t * (m4 - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(nt) > abs(t) and k > 2:
            break
        t = nt
        j = k // 2
        if k % 2:
            q += t if j % 2 == 0 else -t
        else:
            p += t if j % 2 == 0 else -t
        if abs(t) < 1e-17:
            break
    chi = x - (0.5 * mu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def _miller_bessel(mu, x, nmax, start):
    """Unnormalized backward recurrence values for orders mu + j, j = 0..nmax."""
    f_hi, f = 0.0, 1e-250
    vals = np.zeros(max(nmax, 1) + 1)
    top = len(vals) - 1
    for n in range(start, 0, -1):
        # f = f_n, f_hi = f_{n+1}; step to f_{n-1}
        f_lo = 2.0 * (mu + n) / x * f - f_hi
        f_hi, f = f, f_lo
        if n <= top:
            vals[n] = f_hi
        if abs(f) > 1e250:
            f *= 1e-250
            f_hi *= 1e-250
            vals *= 1e-250
    vals[0] = f
    return vals


def _miller_start(mu, x, nmax):
    top = max(mu + nmax, x)
    return int(top + 30 + 12.0 * top ** (1.0 / 3.0))


def _bessel_chain(mu, x, nmax):
    """J_{mu+j}(x) for j = 0..nmax, with mu in [0, 1) and x >= 12."""
    if x < _HANKEL_X:
        # Miller's algorithm with the Neumann sum
        # (x/2)^mu = sum_k (mu+2k) Gamma(mu+k)/k! J_{mu+2k}(x)
        start = _miller_start(mu, x, nmax)
        start += start % 2
        vals = _miller_bessel(mu, x, start, start)
        k = np.arange(0, start // 2 + 1)
        w = np.empty(len(k))
        w[0] = math.gamma(mu + 1.0)
        w[1:] = (mu + 2 * k[1:]) * np.exp(gammaln(mu + k[1:]) - gammaln(k[1:] + 1.0))
        big = np.max(np.abs(vals))
        norm = np.dot(w, vals[0::2][: len(k)] / big)
        return vals[: nmax + 1] / big * (math.exp(mu * math.log(0.5 * x)) / norm)
    j0 = _hankel(mu, x)
    j1 = _hankel(mu + 1.0, x)
    out = np.empty(nmax + 1)
    out[0] = j0
    if nmax == 0:
        return out
    out[1] = j1
    if mu + nmax <= x:
        # forward recurrence is stable below the turning point
        for n in range(1, nmax):
            out[n + 1] = 2.0 * (mu + n) / x * out[n] - out[n - 1]
        return out
    # Miller's backward recurrence, normalized against the Hankel values
    vals = _miller_bessel(mu, x, nmax, _miller_start(mu, x, nmax))
    big = max(abs(vals[0]), abs(vals[1]))
    v0, v1 = vals[0] / big, vals[1] / big
    scale = (j0 * v0 + j1 * v1) / (v0 * v0 + v1 * v1)
    return vals[: nmax + 1] / big * scale


def bessel_j_orders(nus, x):
    """Evaluate J_nu(x) for many nonnegative orders at a single x.

    Orders sharing a fractional part are computed as one recurrence chain,
    which is how the kernel series consumes them.

    Parameters
    ----------
    nus : array_like
        Orders, each >= 0.
    x : float
        Argument, >= 0.

    Returns
    -------
    ndarray
        J_nu(x) for each order.
    """
    nus = np.atleast_1d(np.asarray(nus, dtype=float))
    x = float(x)
    if not np.all(np.isfinite(nus)) or not math.isfinite(x):
        raise DomainError("non-finite Bessel order or argument")
    if x < 0 or np.any(nus < 0):
        raise DomainError("bessel_j needs x >= 0 and nu >= 0")
    out = np.empty_like(nus)
    if x == 0.0:
        return np.where(nus == 0.0, 1.0, 0.0)
    small = (x < _SERIES_X) | (x * x <= nus + 1.0)
    if small.any():
        nu_s = nus[small]
        with np.errstate(under="ignore"):
            out[small] = np.exp(nu_s * (math.log(x) - LN2) - gammaln(nu_s + 1.0)) * _scaled_series(nu_s, x)
    rest = ~small
    if rest.any():
        frac = np.mod(nus, 1.0)
        frac = np.where(np.isclose(frac, 1.0, rtol=0, atol=1e-12), 0.0, frac)
        frac = np.round(frac, 12)
        for mu in np.unique(frac[rest]):
            idx = rest & (frac == mu)
            steps = np.rint(nus[idx] - mu).astype(int)
            chain = _bessel_chain(float(mu), x, int(steps.max()))
            out[idx] = chain[steps]
    return out


def _hankel_many(mu, xs):
    """Vectorized Hankel expansion of J_mu at arguments xs >= 25."""
    m4 = 4.0 * mu * mu
    p = np.ones_like(xs)
    q = np.zeros_like(xs)
    t = np.ones_like(xs)
    for k in range(1, 80):
        t = t * (m4 - (2 * k - 1) ** 2) / (k * 8.0 * xs)
        j = k // 2
        sgn = 1.0 if j % 2 == 0 else -1.0
        if k % 2:
            q += sgn * t
        else:
            p += sgn * t
        if np.max(np.abs(t)) < 1e-17:
            break
    chi = xs - (0.5 * mu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * xs)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j_many(nu, xs):
    """J_nu at many arguments for one order nu >= 0.

    Vectorized ascending series for small arguments, Hankel expansion plus
    forward recurrence for large ones, scalar evaluation in between.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    nu = float(nu)
    if nu < 0 or not math.isfinite(nu):
        raise DomainError("bessel_j_many needs a finite order >= 0")
    if np.any(xs < 0) or not np.all(np.isfinite(xs)):
        raise DomainError("arguments must be finite and nonnegative")
    out = np.empty_like(xs)
    small = (xs < _SERIES_X) | (xs * xs <= nu + 1.0)
    if small.any():
        x = xs[small]
        q = -0.25 * x * x
        term = np.ones_like(x)
        total = np.ones_like(x)
        k = 0
        while True:
            k += 1
            term = term * q / (k * (nu + k))
            total += term
            if k > np.max(np.abs(q)) and np.all(np.abs(term) <= 1e-18 * np.abs(total)):
                break
        with np.errstate(divide="ignore"):
            lead = np.where(x > 0, np.exp(nu * np.log(np.where(x > 0, 0.5 * x, 1.0)) - math.lgamma(nu + 1.0)),
                            1.0 if nu == 0 else 0.0)
        out[small] = lead * total
    big = ~small & (xs >= _HANKEL_X) & (xs >= nu)
    if big.any():
        x = xs[big]
        mu = nu - math.floor(nu)
        j0 = _hankel_many(mu, x)
        steps = int(round(nu - mu))
        if steps == 0:
            out[big] = j0
        else:
            j1 = _hankel_many(mu + 1.0, x)
            for n in range(1, steps):
                j0, j1 = j1, 2.0 * (mu + n) / x * j1 - j0
            out[big] = j1
    rest = ~small & ~big
    if rest.any():
        out[rest] = _miller_neumann_many(nu, xs[rest])
    return out


def _miller_neumann_many(nu, xs):
    """J_nu at moderate arguments by one vectorized Miller sweep per x.

    Normalized with the Neumann sum (x/2)^mu = sum_k (mu+2k) Gamma(mu+k)/k! J_{mu+2k}(x),
    mu the fractional part of nu.
    """
    mu = nu - math.floor(nu)
    steps = int(round(nu - mu))
    start = _miller_start(mu, float(xs.max()), steps)
    start += start % 2
    f_hi = np.zeros_like(xs)
    f = np.full_like(xs, 1e-250)
    want = np.zeros_like(xs)
    norm = np.zeros_like(xs)
    for n in range(start, 0, -1):
        if n % 2 == 0:
            norm += (mu + n) * math.exp(math.lgamma(mu + n // 2) - math.lgamma(n // 2 + 1.0)) * f
        if n == steps:
            want = f.copy()
        f_lo = 2.0 * (mu + n) / xs * f - f_hi
        f_hi, f = f, f_lo
        scale = np.where(np.abs(f) > 1e250, 1e-250, 1.0)
        if np.any(scale != 1.0):
            f, f_hi, want, norm = f * scale, f_hi * scale, want * scale, norm * scale
    # f now holds order mu
    norm += math.gamma(mu + 1.0) * f
    if steps == 0:
        want = f
    return want * np.exp(mu * np.log(0.5 * xs)) / norm


def bessel_j(nu, x, tol=TOL):
    """Bessel function of the first kind J_nu(x) for real nu >= 0, x >= 0.

    Uses the ascending series for small x (or x^2 <= nu+1) and the Hankel
    expansion combined with three-term recurrence otherwise.

    Parameters
    ----------
    nu : float
        Order. The value -1/2 is also accepted.
    x : float
        Argument.
    tol : float
        Requested absolute accuracy. The algorithms run to double
        precision; tol only gates the input check.

    Returns
    -------
    float
    """
    _check_finite(nu, x, tol)
    if tol <= 0:
        raise DomainError("tol must be positive")
    if nu == -0.5:
        if x <= 0:
            raise DomainError("J_{-1/2} is singular at 0")
        return math.sqrt(2.0 / (math.pi * x)) * math.cos(x)
    return float(bessel_j_orders([nu], x)[0])


def bessel_j_tilde(nu, x):
    """Normalized Bessel function (x/2)^-nu J_nu(x).

    At x = 0 the removable singularity gives 1/Gamma(nu+1).
    Orders down to -1/2 are accepted.
    """
    _check_finite(nu, x)
    if x < 0 or nu < -0.5:
        raise DomainError("bessel_j_tilde needs x >= 0 and nu >= -1/2")
    if nu == -0.5 and x >= _SERIES_X:
        return math.cos(x) / SQRT_PI
    if x < _SERIES_X or x * x <= nu + 1.0:
        return float(_scaled_series([nu], x)[0]) * math.exp(-math.lgamma(nu + 1.0))
    return bessel_j(nu, x) * math.exp(-nu * math.log(0.5 * x))


# ---------------------------------------------------------------- Gegenbauer


def gegenbauer_all(kmax, lam, xi):
    """C_k^(lam)(xi) for k = 0..kmax by the three-term recurrence.

    For lam = 0 the normalized limit (2/k) cos(k theta) is returned for
    k >= 1, which is the form the two-dimensional series uses.
    """
    if kmax < 0:
        raise DomainError("degree must be nonnegative")
    c = np.empty(kmax + 1)
    c[0] = 1.0
    if lam == 0.0:
        th = math.acos(max(-1.0, min(1.0, xi)))
        k = np.arange(1, kmax + 1)
        c[1:] = 2.0 / k * np.cos(k * th)
        return c
    if kmax >= 1:
        c[1] = 2.0 * lam * xi
    for k in range(1, kmax):
        c[k + 1] = (2.0 * (k + lam) * xi * c[k] - (k + 2.0 * lam - 1.0) * c[k - 1]) / (k + 1)
    return c


def gegenbauer(k, lam, xi):
    """Gegenbauer polynomial C_k^(lam)(xi).

    Parameters
    ----------
    k : int
        Degree, >= 0.
    lam : float
        Index, > 0. (lam = 0 is reserved for the two-dimensional path.)
    xi : float
        Point in [-1, 1].
    """
    if int(k) != k or k < 0:
        raise DomainError("Gegenbauer degree must be a nonnegative integer")
    _check_finite(lam, xi)
    if lam < 0:
        raise DomainError("Gegenbauer index must be nonnegative")
    return float(gegenbauer_all(int(k), float(lam), float(xi))[int(k)])


def gegenbauer_at_one(k, lam):
    """C_k^(lam)(1) = Gamma(k + 2 lam) / (Gamma(2 lam) k!), the sup on [-1, 1]."""
    k = np.asarray(k, dtype=float)
    if lam == 0.0:
        return np.where(k == 0, 1.0, 2.0 / np.maximum(k, 1.0))
    return np.exp(gammaln(k + 2.0 * lam) - gammaln(2.0 * lam) - gammaln(k + 1.0))


# ---------------------------------------------------------------- Fresnel


@dataclass(frozen=True)
class FresnelPair:
    """Un-normalized Fresnel integrals C(u) and S(u)."""

    c: float
    s: float


_FRESNEL_SWITCH = 6.0


def _fresnel_tail(u):
    """Integral of exp(i t^2) from u to infinity, u >= 6, by its asymptotic series."""
    x = u * u
    total = 0j
    term = 1.0 + 0j
    k = 0
    while True:
        total += term
        nxt = term * (-1j) * (0.5 + k) / x
        k += 1
        if abs(nxt) < 1e-17 or abs(nxt) > abs(term):
            break
        term = nxt
    return 0.5j * cmath.exp(1j * x) / u * total


def fresnel(u):
    """Fresnel integrals with integrands cos t^2 and sin t^2.

    Adaptive quadrature below u = 6, asymptotic expansion above.

    Parameters
    ----------
    u : float

    Returns
    -------
    FresnelPair
    """
    _check_finite(u)
    u = float(u)
    sign = -1.0 if u < 0 else 1.0
    a = abs(u)
    if a == 0.0:
        return FresnelPair(0.0, 0.0)
    if a < _FRESNEL_SWITCH:
        lim = 50 + int(10 * a)
        c = integrate.quad(lambda t: math.cos(t * t), 0.0, a, epsabs=1e-14, epsrel=1e-13, limit=lim)[0]
        s = integrate.quad(lambda t: math.sin(t * t), 0.0, a, epsabs=1e-14, epsrel=1e-13, limit=lim)[0]
    else:
        v = complex(FRESNEL_LIMIT, FRESNEL_LIMIT) - _fresnel_tail(a)
        c, s = v.real, v.imag
    return FresnelPair(sign * c, sign * s)


def fresnel_e(u):
    """E(u) = sqrt(pi/2)(1+i)/2 + C(u) + i S(u), the integral of exp(i t^2) over (-inf, u].

    For large negative u the tail expansion is used directly so that the
    small result keeps its relative accuracy.
    """
    _check_finite(u)
    u = float(u)
    if u <= -_FRESNEL_SWITCH:
        # integral over (-inf, u] of exp(i t^2) equals the tail from |u|
        return _fresnel_tail(-u)
    f = fresnel(u)
    return complex(FRESNEL_LIMIT + f.c, FRESNEL_LIMIT + f.s)


# ---------------------------------------------------------------- erfc


def _erf_series(w):
    w2 = w * w
    term = w
    total = w
    n = 0
    while True:
        n += 1
        term = term * (-w2) / n
        add = term / (2 * n + 1)
        total += add
        if n > abs(w2) and abs(add) <= 1e-17 * abs(total):
            break
        if n > 5000:
            raise AccuracyError(f"erf series did not converge at w={w}")
    return 2.0 / SQRT_PI * total


def _erfc_cf(w):
    """erfc(w) for Re w >= 1 by the Laplace continued fraction (modified Lentz)."""
    return cmath.exp(-w * w) * _erfc_cf_scaled(w)


def _erfc_cf_scaled(w):
    """exp(w^2) erfc(w) for Re w >= 1."""
    tiny = 1e-300
    f = w
    c = f
    d = 0j
    for k in range(1, 20000):
        a = 0.5 * k
        d = w + a * d
        c = w + a / c
        if d == 0:
            d = tiny
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return 1.0 / (SQRT_PI * f)
    raise AccuracyError(f"erfc continued fraction did not converge at w={w}")


def erfc_complex(w):
    """Complementary error function for complex argument.

    Power series near the origin or near the imaginary axis, continued
    fraction in the right half-plane, reflection erfc(-w) = 2 - erfc(w)
    in the left half-plane.

    Raises
    ------
    RangeError
        If exp(-w^2) is not representable.
    """
    w = complex(w)
    _check_finite(w)
    if w.imag * w.imag - w.real * w.real > _EXP_MAX:
        raise RangeError(f"erfc({w}) overflows: exp(-w^2) exceeds double range")
    if w.real < 0:
        return 2.0 - _erfc_right(-w)
    return _erfc_right(w)


def _erfc_right(w):
    if abs(w) < 2.0 or w.real < 1.0:
        return 1.0 - _erf_series(w)
    return _erfc_cf(w)


def faddeeva(z):
    """Faddeeva function w(z) = exp(-z^2) erfc(-iz).

    The continued fraction is used in its scaled form, so there is no
    overflow for Im z >= 0; below the real axis w(z) = 2 exp(-z^2) - w(-z).
    """
    z = complex(z)
    _check_finite(z)
    if z.imag < 0:
        return 2.0 * cmath.exp(-z * z) - faddeeva(-z)
    u = -1j * z
    if abs(u) < 25.0 and (abs(u) < 2.0 or u.real < 1.0):
        return cmath.exp(-z * z) * (1.0 - _erf_series(u))
    # the continued fraction also converges on Re u = 0 once |u| is large
    return _erfc_cf_scaled(u)


def erf_complex(w):
    """Error function for complex argument, odd by construction."""
    w = complex(w)
    if abs(w) < 2.0 or abs(w.real) < 1.0:
        _check_finite(w)
        if w.imag * w.imag - w.real * w.real > _EXP_MAX:
            raise RangeError(f"erf({w}) overflows")
        return _erf_series(w)
    return 1.0 - erfc_complex(w)


# ---------------------------------------------------------------- Hermite


def hermite(n, w):
    """Physicists' Hermite polynomial H_n(w) by the three-term recurrence."""
    if int(n) != n or n < 0:
        raise DomainError("Hermite degree must be a nonnegative integer")
    w = complex(w)
    h0, h1 = 1.0 + 0j, 2.0 * w
    if n == 0:
        return h0
    for k in range(1, int(n)):
        h0, h1 = h1, 2.0 * w * h1 - 2.0 * k * h0
    return h1


# ---------------------------------------------------------------- parabolic cylinder


def _d_minus_one(w):
    r = w / math.sqrt(2.0)
    if abs(r) >= 2.0 and r.real >= 1.0:
        # exp(w^2/4) erfc(r) = exp(-w^2/4) exp(r^2) erfc(r): one exponential instead of two
        return math.sqrt(0.5 * math.pi) * cmath.exp(-0.25 * w * w) * _erfc_cf_scaled(r)
    return math.sqrt(0.5 * math.pi) * cmath.exp(0.25 * w * w) * erfc_complex(r)


def parabolic_d_all(n, w):
    """D_0(w), D_-1(w), ..., D_-n(w) as a complex array.

    For Re w <= 0 the orders are produced by forward recurrence, where the
    wanted solution is dominant; this is kept up to Re w = 1/2 where the
    amplification over 20 steps stays modest. Further right the wanted
    solution is recessive and Miller's backward recurrence is used,
    normalized by the exact D_0 and D_-1.
    """
    if int(n) != n or n < 0:
        raise DomainError("order index n must be a nonnegative integer")
    n = int(n)
    w = complex(w)
    _check_finite(w)
    d0 = cmath.exp(-0.25 * w * w)
    out = np.empty(n + 1, dtype=complex)
    out[0] = d0
    if n == 0:
        return out
    d1 = _d_minus_one(w)
    out[1] = d1
    if w.real <= _D_FORWARD_RE:
        for k in range(1, n):
            # D_{-k-1} = (D_{-k+1} - w D_{-k}) / k
            out[k + 1] = (out[k - 1] - w * out[k]) / k
        return out
    # the unwanted solution decays like exp(-2 sqrt(k) Re w) relative to D_{-k}(w)
    start = n + 40 + int((20.0 / w.real) ** 2)
    prev = None
    for _ in range(6):
        vals = _miller_d(n, w, start)
        big = max(abs(vals[0]), abs(vals[1]))
        v0, v1 = vals[0] / big, vals[1] / big
        scale = (np.conj(v0) * d0 + np.conj(v1) * d1) / (abs(v0) ** 2 + abs(v1) ** 2)
        res = vals / big * scale
        res[0], res[1] = d0, d1
        if prev is not None and np.allclose(res, prev, rtol=1e-13, atol=0):
            return res
        prev = res
        start *= 2
    raise AccuracyError(f"parabolic_d recurrence did not settle at w={w}")


def _miller_d(n, w, start):
    """Unnormalized recessive solution of D_{-k+1} = w D_{-k} + k D_{-k-1}."""
    vals = np.zeros(n + 1, dtype=complex)
    hi, cur = 0j, 1e-250 + 0j
    for k in range(start, 0, -1):
        # cur = D_{-k}, hi = D_{-k-1}; step to D_{-k+1}
        lo = w * cur + k * hi
        if k <= n:
            vals[k] = cur
        hi, cur = cur, lo
        if abs(cur) > 1e250:
            cur *= 1e-250
            hi *= 1e-250
            vals *= 1e-250
    vals[0] = cur
    return vals


def parabolic_d(n, w):
    """Parabolic cylinder function D_-n(w) for integer n >= 0.

    Parameters
    ----------
    n : int
        The order is -n.
    w : complex

    Returns
    -------
    complex
    """
    return complex(parabolic_d_all(n, w)[-1])


def parabolic_d_asymptotic(nu, z, terms, form="auto", delta=1e-3):
    """Large-|z| expansion of U(nu, z) = D_{-nu-1/2}(z).

    The single-series form is valid for |arg z| <= 3 pi/4 - delta, the
    two-series form for pi/4 + delta <= |arg z| <= 5 pi/4 - delta. The
    auto choice takes the single series when |arg z| < pi/2.

    Parameters
    ----------
    nu : float
        U-parameter; the order of D is -nu - 1/2.
    z : complex
    terms : int
        Number of terms kept in each series.
    form : {"auto", "single", "double"}
    delta : float
        Sector margin.

    Returns
    -------
    ComplexEval
        Partial sum and the magnitude of the first omitted term.
    """
    z = complex(z)
    _check_finite(nu, z)
    if terms < 1:
        raise DomainError("need at least one term")
    ph = abs(cmath.phase(z))
    if form == "auto":
        form = "single" if ph < 0.5 * math.pi else "double"
    if form == "single" and ph > 0.75 * math.pi - delta:
        raise DomainError(f"arg z = {ph:.4f} outside the single-series sector")
    if form == "double" and not (0.25 * math.pi + delta <= ph <= 1.25 * math.pi - delta):
        raise DomainError(f"arg z = {ph:.4f} outside the two-series sector")
    if form not in ("single", "double"):
        raise DomainError(f"unknown form {form!r}")
    p = -nu - 0.5
    inv = 1.0 / (2.0 * z * z)
    # first series alternates: (-1)^s (-p)_{2s} / (s! (2 z^2)^s)
    s1, o1 = _asym_series(-p, -inv, terms)
    lead = cmath.exp(-0.25 * z * z + p * cmath.log(z))
    value = lead * s1
    err = abs(lead * o1)
    if form == "double":
        s2, o2 = _asym_series(p + 1.0, inv, terms)
        sgn = 1.0 if cmath.phase(z) > 0 else -1.0
        coef = math.sqrt(2.0 * math.pi) * _rgamma(-p) * cmath.exp(sgn * 1j * math.pi * p)
        lead2 = coef * cmath.exp(0.25 * z * z + (-p - 1.0) * cmath.log(z))
        value -= lead2 * s2
        err += abs(lead2 * o2)
    return ComplexEval(value, err, "asymptotic")


def _asym_series(c, q, terms):
    """Partial sum of sum_s (c)_{2s} q^s / s! and its first omitted term."""
    t = 1.0 + 0j
    total = 0j
    for s in range(terms):
        total += t
        t = t * (c + 2 * s) * (c + 2 * s + 1) * q / (s + 1)
    return total, t


def _rgamma(x):
    if x <= 0 and x == int(x):
        return 0.0
    return 1.0 / math.gamma(x)
