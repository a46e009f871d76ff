"""Explicit kernel formulas for a in {1, 2, 4, 6} and the subsampling construction.

These serve as oracles for the series and as fast evaluators at large z.

* a = 2: e^{-i z xi}.
* a = 1: Gamma((m-1)/2) Jt_{(m-3)/2}(sqrt(2 z (1 + xi))), Jt the normalized Bessel function.
* a = 4, m = 2: e^{-i z^2 (xi^2 - 1/2)} erfc(-e^{-i pi/4} z xi).
* a = 4, m = 2n: c_n e^{(i/2) z^2 sin^2 theta} D_{-n}((i - 1) z cos theta).
* a = 6, m = 2: Bessel terms plus four oscillatory integrals f1, f2.
  An uncorrected variant without cos(theta), cos(2 theta) on the two
  leading Bessel terms is also available; it does not match the series.
* a = 2^l/n, m = 2: average of n rotated evaluations of a base kernel.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError
from .quadrature import integrate_panels
from .special import (
    bessel_j,
    bessel_j_many,
    bessel_j_tilde,
    erfc_complex,
    fresnel_e,
    parabolic_d,
)
from .types import ComplexEval, GeomPoint, KernelParams

EPS = np.finfo(float).eps
RECONCILE_TOL = 1e-9
COSEC_SWITCH = 1e-6

_SQRT_2_PI = math.sqrt(2.0 / math.pi)
_E_PI4 = cmath.exp(-0.25j * math.pi)

KINDS = ("A1", "A2", "A4_DIM2", "A4_EVEN", "A6_DIM2", "SUBSAMPLE")


@dataclass(frozen=True)
class ClosedFormKind:
    """Tag of an explicit formula; SUBSAMPLE carries the base parameter and n."""

    tag: str
    base_a: float | None = None
    n: int | None = None

    def __post_init__(self):
        if self.tag not in KINDS:
            raise DomainError(f"unknown closed form {self.tag!r}")
        if self.tag == "SUBSAMPLE":
            if self.base_a is None or self.n is None or self.n < 1:
                raise DomainError("SUBSAMPLE needs a base parameter and n >= 1")
            if closed_form_kind(KernelParams(self.base_a, 2)) is None:
                raise DomainError(f"no closed form for the base a={self.base_a}")

    def supports(self, p):
        if self.tag == "A2":
            return p.a == 2.0
        if self.tag == "A1":
            return p.a == 1.0
        if self.tag == "A4_DIM2":
            return p.a == 4.0 and p.m == 2
        if self.tag == "A4_EVEN":
            return p.a == 4.0 and p.m % 2 == 0
        if self.tag == "A6_DIM2":
            return p.a == 6.0 and p.m == 2
        return p.m == 2 and math.isclose(p.a, self.base_a / self.n, rel_tol=1e-14)


def closed_form_kind(p):
    """The preferred explicit formula for (a, m), or None.

    For m = 2 and a = 2^l / n with a not itself covered, a subsampling
    construction over the base 2^l (l in {1, 2}) or over a = 1 is chosen.
    """
    if p.a == 2.0:
        return ClosedFormKind("A2")
    if p.a == 1.0:
        return ClosedFormKind("A1")
    if p.a == 4.0 and p.m % 2 == 0:
        return ClosedFormKind("A4_EVEN" if p.m > 2 else "A4_DIM2")
    if p.a == 6.0 and p.m == 2:
        return ClosedFormKind("A6_DIM2")
    if p.m == 2 and p.a < 4.0:
        for base in (1.0, 2.0, 4.0):
            n = base / p.a
            if abs(n - round(n)) < 1e-12 and round(n) >= 2:
                return ClosedFormKind("SUBSAMPLE", base, int(round(n)))
    return None


def evaluate_closed(p, g, tol=1e-10):
    """Dispatch to the preferred closed form of p.

    Raises
    ------
    DomainError
        When no closed form is available.
    """
    kind = closed_form_kind(p)
    if kind is None:
        raise DomainError(f"no closed form for a={p.a}, m={p.m}")
    if kind.tag == "A2":
        return kernel_a2(g)
    if kind.tag == "A1":
        return kernel_a1(p.m, g)
    if kind.tag == "A4_DIM2":
        return kernel_a4_dim2(g)
    if kind.tag == "A4_EVEN":
        return kernel_a4_even(p.m, g)
    if kind.tag == "A6_DIM2":
        return kernel_a6_dim2(g, tol)
    base_p = KernelParams(kind.base_a, 2)
    return kernel_subsample(lambda gg: evaluate_closed(base_p, gg, tol), kind.n, g, base_a=kind.base_a)


# ---------------------------------------------------------------- a = 2, a = 1


def kernel_a2(g):
    """e^{-i z xi}."""
    arg = g.z * g.xi
    return ComplexEval(cmath.exp(-1j * arg), 4 * EPS * max(1.0, abs(arg)), "closed")


def kernel_a2_many(zs, xis):
    """Vectorized e^{-i z xi}."""
    return np.exp(-1j * np.asarray(zs, dtype=float) * np.asarray(xis, dtype=float))


def kernel_a1(m, g):
    """Gamma((m-1)/2) Jt_{(m-3)/2}(sqrt(2 z (1 + xi))); real valued."""
    if int(m) != m or m < 2:
        raise DomainError("m must be an integer >= 2")
    nu = 0.5 * (m - 3)
    x = math.sqrt(max(0.0, 2.0 * g.z * (1.0 + g.xi)))
    v = math.gamma(0.5 * (m - 1)) * bessel_j_tilde(nu, x)
    return ComplexEval(complex(v, 0.0), 1e-13 * max(1.0, abs(v)), "closed")


def kernel_a1_many(m, zs, xis):
    """Vectorized a = 1 closed form."""
    nu = 0.5 * (m - 3)
    x = np.sqrt(np.maximum(0.0, 2.0 * np.asarray(zs, dtype=float) * (1.0 + np.asarray(xis, dtype=float))))
    c = math.gamma(0.5 * (m - 1))
    if nu == -0.5:
        return (c / math.sqrt(math.pi)) * np.cos(x) + 0j
    out = np.empty(x.shape)
    flat = x.ravel()
    j = bessel_j_many(nu, flat)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = j * np.exp(-nu * np.log(np.where(flat > 0, 0.5 * flat, 1.0)))
    scaled = np.where(flat > 0, scaled, 1.0 / math.gamma(nu + 1.0))
    out.ravel()[:] = scaled
    return c * out + 0j


# ---------------------------------------------------------------- a = 4


def _a4_phase(z, xi):
    return cmath.exp(-1j * z * z * (xi * xi - 0.5))


def kernel_a4_dim2(g, branch="erfc"):
    """K_4^2 by the complementary error function or by Fresnel integrals.

    Parameters
    ----------
    g : GeomPoint
    branch : {"erfc", "fresnel", "both"}
        "both" evaluates the two expressions and raises if they differ by
        more than RECONCILE_TOL; the reported err then includes the gap.
    """
    if branch not in ("erfc", "fresnel", "both"):
        raise DomainError(f"unknown branch {branch!r}")
    z, xi = g.z, g.xi
    phase = _a4_phase(z, xi)
    # the phase carries the rounding of z^2 as absolute error
    base_err = 4 * EPS * max(1.0, z * z)
    vals = []
    if branch in ("erfc", "both"):
        v = phase * erfc_complex(-_E_PI4 * z * xi)
        vals.append(v)
    if branch in ("fresnel", "both"):
        v = (1 - 1j) * _SQRT_2_PI * phase * fresnel_e(z * xi)
        vals.append(v)
    v = vals[0]
    err = base_err * 3.0 + 1e-12 * max(1.0, abs(v))
    if len(vals) == 2:
        gap = abs(vals[0] - vals[1])
        if gap > RECONCILE_TOL:
            raise AccuracyError(f"erfc and Fresnel branches differ by {gap:.3e}")
        err += gap
    return ComplexEval(v, err, "closed")


def a4_even_constant(n):
    """c_n = 2^{n/2} Gamma((n+1)/2) / sqrt(pi)."""
    return 2.0 ** (0.5 * n) * math.gamma(0.5 * (n + 1)) / math.sqrt(math.pi)


def kernel_a4_even(m, g, branch="pcfd"):
    """K_4^m for even m via the parabolic cylinder function D_{-m/2}.

    Parameters
    ----------
    m : int
        Even dimension.
    g : GeomPoint
    branch : {"pcfd", "explicit", "both"}
        For m = 4 the explicit Fresnel expression
        e^{iz^2/2} - 2iz cos(theta) e^{-(i/2) z^2 cos 2theta} E(z cos theta)
        is available and "both" reconciles it with the parabolic form.
    """
    if int(m) != m or m < 2 or m % 2:
        raise DomainError("the a = 4 parabolic form needs an even m >= 2")
    if branch not in ("pcfd", "explicit", "both"):
        raise DomainError(f"unknown branch {branch!r}")
    if branch != "pcfd" and m != 4:
        raise DomainError("the explicit branch exists only for m = 4")
    n = m // 2
    z, xi = g.z, g.xi
    vals = []
    if branch in ("pcfd", "both"):
        s2 = 1.0 - xi * xi
        w = complex(-1.0, 1.0) * z * xi
        vals.append(a4_even_constant(n) * cmath.exp(0.5j * z * z * s2) * parabolic_d(n, w))
    if branch in ("explicit", "both"):
        c2 = 2.0 * xi * xi - 1.0
        vals.append(cmath.exp(0.5j * z * z) - 2j * z * xi * cmath.exp(-0.5j * z * z * c2) * fresnel_e(z * xi))
    v = vals[0]
    err = 12 * EPS * max(1.0, z * z) * max(1.0, abs(v)) + 1e-12 * max(1.0, abs(v))
    if len(vals) == 2:
        gap = abs(vals[0] - vals[1])
        if gap > RECONCILE_TOL * max(1.0, abs(v)):

            raise AccuracyError(f"parabolic and explicit branches differ by {gap:.3e}")
        err += gap
    return ComplexEval(v, err, "closed")


# ---------------------------------------------------------------- a = 6


def _sin_ratio(s, w):
    """sin(s w) / w with the removable limit s at w = 0."""
    if abs(w) < COSEC_SWITCH:
        return s * (1.0 - (s * w) ** 2 / 6.0)
    return np.sin(s * w) / w


def _oscillatory_edges(z):
    """Panels on [0, z]: a u = (t/z)^{1/3} map near 0 is handled by the caller."""
    npan = max(1, int(math.ceil(z / 2.0)))
    return np.linspace(0.0, z, npan + 1)


def _integrate_t(fun, z, tol):
    """Integral over t in [0, z] of fun(t), with t = z u^3 on the first unit interval.

    fun may behave like t^{-2/3} at the origin.
    """
    if z == 0.0:
        return 0.0, 0.0
    head = min(z, 1.0)

    def mapped(u):
        t = head * u ** 3
        return fun(t) * 3.0 * head * u * u

    v, e = integrate_panels(mapped, np.array([0.0, 0.5, 1.0]), n=16, tol=tol)
    if z > head:
        v2, e2 = integrate_panels(fun, np.linspace(head, z, max(2, int(math.ceil((z - head) / 2.0))) + 1),
                                  n=16, tol=tol)
        v, e = v + v2, e + e2
    return v, e


def _bessel_stack(nu, t):
    """J_nu, J_{nu+1}, J_{nu+2} at t > 0."""
    return bessel_j_many(nu, t), bessel_j_many(nu + 1.0, t), bessel_j_many(nu + 2.0, t)


def f1(nu, z, theta, tol=1e-12):
    """f1(nu, z, theta) = (1/4) cosec(theta) int_0^z sin((z-t) sin theta) [cos 2theta J_nu + 2 cos theta J_nu' - J_{nu+2}](t) dt.

    The cosec factor is absorbed into sin((z-t)w)/w, which tends to (z - t)
    as w = sin(theta) -> 0.

    Returns
    -------
    value, err : float
    """
    w = math.sin(theta)
    w = 0.0 if abs(w) < 1e-15 else w  # theta = 0, pi up to rounding
    c1, c2 = math.cos(2 * theta), 2.0 * math.cos(theta)

    def fun(t):
        t = np.maximum(t, 1e-300)
        j0, j1, j2 = _bessel_stack(nu, t)
        dj = nu / t * j0 - j1
        return _sin_ratio(z - t, w) * (c1 * j0 + c2 * dj - j2)

    v, e = _integrate_t(fun, z, tol)
    return 0.25 * v, 0.25 * e


def f2(nu, z, theta, tol=1e-12):
    """f2(nu, z, theta) = (1/2) int_0^z (nu/t + cos theta) sin((z-t) sin theta) J_nu(t) dt."""
    w = math.sin(theta)
    w = 0.0 if abs(w) < 1e-15 else w  # theta = 0, pi up to rounding
    if w == 0.0:
        return 0.0, 0.0
    c = math.cos(theta)

    def fun(t):
        t = np.maximum(t, 1e-300)
        return (nu / t + c) * np.sin((z - t) * w) * bessel_j_many(nu, t)

    v, e = _integrate_t(fun, z, tol)
    return 0.5 * v, 0.5 * e


def kernel_a6_dim2(g, tol=1e-10, form="corrected"):
    """K_6^2 from the Bessel terms and the f1/f2 integrals, with z6 = z^3/3.

    Parameters
    ----------
    g : GeomPoint
    tol : float
    form : {"corrected", "paper"}
        The k = 1, 2 terms of the series carry cos(theta) and cos(2 theta);
        "corrected" keeps these factors on 2 e^{-i pi/6} J_{1/3}(z6) and
        2 e^{-i pi/3} J_{2/3}(z6), "paper" drops them. Only "corrected" agrees with the series.

    Returns
    -------
    ComplexEval
        err sums the quadrature change estimates and a rounding term.
    """
    if form not in ("corrected", "paper"):
        raise DomainError(f"unknown form {form!r}")
    z, th = g.z, g.theta
    z6 = z ** 3 / 3.0
    if z6 == 0.0:
        return ComplexEval(1.0, 0.0, "closed")
    qtol = min(1e-12, tol)
    v = cmath.exp(-1j * z6 * math.cos(3 * th))
    c1, c2 = (math.cos(th), math.cos(2 * th)) if form == "corrected" else (1.0, 1.0)
    v += 2 * cmath.exp(-1j * math.pi / 6) * bessel_j(1.0 / 3.0, z6) * c1
    v += 2 * cmath.exp(-1j * math.pi / 3) * bessel_j(2.0 / 3.0, z6) * c2
    err = 0.0
    for k in (1, 2):
        nu = k / 3.0
        tp, tm = 3 * th - 0.5 * math.pi, 3 * th + 0.5 * math.pi
        a1, e1 = f1(nu, z6, tp, qtol)
        b1, e2 = f2(nu, z6, tp, qtol)
        a2, e3 = f1(nu, z6, tm, qtol)
        b2, e4 = f2(nu, z6, tm, qtol)
        v += cmath.exp(1j * k * (th - math.pi / 6)) * (a1 + 1j * b1)
        v += cmath.exp(-1j * k * (th + math.pi / 6)) * (a2 - 1j * b2)
        err += e1 + e2 + e3 + e4
    err += 1e-12 * max(1.0, z6) + 4 * EPS * z6
    return ComplexEval(v, err, "closed")


# ---------------------------------------------------------------- subsampling


def subsample_argument(z, n, base_a):
    """Radius at which the base kernel is evaluated: n^{2/base_a} z^{1/n}.

    It makes the base Bessel argument (2/base_a) z'^{base_a/2} equal to
    the target one (2/a) z^{a/2} with a = base_a/n.
    """
    return n ** (2.0 / base_a) * z ** (1.0 / n)


def kernel_subsample(base, n, g, base_a=2.0):
    """K^2_{base_a/n}(z, cos theta) = (1/n) sum_j K^2_{base_a}(z', cos((theta + 2 pi j)/n)).

    Parameters
    ----------
    base : callable
        base(GeomPoint) -> ComplexEval for the m = 2 kernel with parameter base_a.
    n : int
        Subsampling factor; n = 1 returns the base value.
    g : GeomPoint
    base_a : float
        Parameter of the base kernel.
    """
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    n = int(n)
    if n == 1:
        return base(g)
    zp = subsample_argument(g.z, n, base_a)
    th = g.theta
    total, err = 0j, 0.0
    for j in range(n):
        r = base(GeomPoint(zp, math.cos((th + 2 * math.pi * j) / n)))
        total += r.value
        err += r.err
    return ComplexEval(total / n, err / n, "closed")


def a8_even_argument(z):
    """Radius z^2/sqrt(2) at which K_4^2 reproduces the even-k part of the a = 8 series."""
    return z * z / math.sqrt(2.0)


def kernel_a8_even_part(g):
    """Even-k part of the K_8^2 series, (K(z, xi) + K(z, -xi))/2, as K_4^2(z^2/sqrt 2, cos 2theta)."""
    c2 = 2.0 * g.xi * g.xi - 1.0
    return kernel_a4_dim2(GeomPoint(a8_even_argument(g.z), c2))
