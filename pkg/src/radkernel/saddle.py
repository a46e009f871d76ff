"""Two-dimensional kernel for large z by steepest descent.

With X = z_a, omega = 2/a and q = exp(-i pi/a), Schlaefli's integral for
J_mu summed against the series weights q^|k| e^(ik theta) gives

    K_a^2 = (1/2pi) int_C exp(iX sin t) F(t) dt,
    F(t) = -1 + h_+(t) + h_-(t),   h_+-(t) = 1 / (1 - q exp(-i omega t) exp(-+i theta)),

where C runs along [-pi, pi] just below the real axis. The Schlaefli
remainder integrals cancel against the vertical ends of the deformed
contour, so C can be moved onto the two steepest-descent paths through
the saddles t0 = +-pi/2,

    t(s) = t0 + 2 asin(e^(-+i pi/4) s / sqrt 2),   exp(iX sin t(s)) = exp(+-iX) exp(-X s^2),

picking up the residues (a/2) exp(iX sin t_p) of the real poles t_p of
h_+- in (-pi/2, pi/2). Poles close to a saddle are subtracted and added
back through the Faddeeva function, which keeps the quadrature smooth
and the result uniform in theta. Cost does not grow with z.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import AccuracyError, DomainError
from .quadrature import gauss_legendre
from .special import faddeeva
from .types import ComplexEval

EPS = np.finfo(float).eps
SQRT2 = math.sqrt(2.0)
GAUSS_CUT = 45.0
NEAR_S2 = 0.5
ORDERS = (16, 32, 64, 128)
_SADDLES = ((0.5 * math.pi, cmath.exp(-0.25j * math.pi)), (-0.5 * math.pi, cmath.exp(0.25j * math.pi)))


def pole_positions(a, theta):
    """Real poles t_p of h_+ and h_- in [-3pi/2, 3pi/2], as (family, t_p) pairs."""
    om = 2.0 / a
    period = 2.0 * math.pi / om
    out = []
    for sig in (1, -1):
        base = -0.5 * math.pi - sig * theta / om
        k0 = math.ceil((-1.5 * math.pi - base) / period)
        k = k0
        while base + k * period <= 1.5 * math.pi:
            out.append((sig, base + k * period))
            k += 1
    return out


def _s_of_t(t, t0, ph):
    return SQRT2 / ph * cmath.sin(0.5 * (t - t0))


def _asin_diff(A, B):
    """asin A - asin B, accurate when A is close to B."""
    sa, sb = np.sqrt(1.0 - A * A), np.sqrt(1.0 - B * B)
    den = A * sb + B * sa
    with np.errstate(divide="ignore", invalid="ignore"):
        close = (A - B) * (A + B) / den
    direct = A * sb - B * sa
    use = (np.abs(A - B) < np.abs(A + B)) & np.isfinite(close)
    return np.arcsin(np.where(use, close, direct))


class _Setup:
    def __init__(self, a, z, theta):
        self.a = a
        self.om = 2.0 / a
        self.X = 2.0 / a * z ** (0.5 * a)
        self.theta = theta
        self.q = cmath.exp(-1j * math.pi / a)
        self.poles = pole_positions(a, theta)
        self.residue = -1j / self.om
        # classify poles: near a saddle (subtracted) or plain residue
        self.near = {0: [], 1: []}
        self.plain = []
        for sig, tp in self.poles:
            hit = None
            for i, (t0, ph) in enumerate(_SADDLES):
                if abs(tp - t0) < math.pi:
                    sp = _s_of_t(tp, t0, ph)
                    if abs(sp) ** 2 < NEAR_S2:
                        hit = i
                        self.near[i].append((sig, tp, sp))
            if hit is None and -0.5 * math.pi < tp < 0.5 * math.pi:
                self.plain.append(tp)

    def h(self, sig, t):
        return 1.0 / (1.0 - self.q * np.exp(-1j * self.om * t) * cmath.exp(-1j * sig * self.theta))

    def integrand(self, i, s):
        """exp(-X s^2) [F(t(s)) t'(s) - sum R/(s - s_p)] on the i-th saddle path."""
        t0, ph = _SADDLES[i]
        A = ph * s / SQRT2
        t = t0 + 2.0 * np.arcsin(A)
        dt = SQRT2 * ph / np.sqrt(1.0 - A * A)
        near_fams = {sig for sig, _, _ in self.near[i]}
        F = np.full(s.shape, -1.0 + 0j)
        for sig in (1, -1):
            if sig not in near_fams:
                F = F + self.h(sig, t)
        body = F * dt
        for sig in near_fams:
            # h = 1 / (1 - exp(-i omega (t - t_p))) for any pole t_p of the family;
            # anchoring at the nearest one, t - t_p comes from an asin difference
            sp = min((c for f, _, c in self.near[i] if f == sig), key=abs)
            half = self.om * _asin_diff(A, ph * sp / SQRT2)
            body = body + np.exp(1j * half) / (2j * np.sin(half)) * dt
        for _, _, sp in self.near[i]:
            body = body - self.residue / (s - sp)
        return np.exp(-self.X * s * s) * body

    def closed_part(self):
        total = 0j
        mags = 0.0
        for i, (t0, ph) in enumerate(_SADDLES):
            front = cmath.exp(1j * self.X * math.sin(t0)) / (2.0 * math.pi)
            for _, _, sp in self.near[i]:
                v = front * self.residue * 1j * math.pi * faddeeva(math.sqrt(self.X) * sp)
                total += v
                mags += abs(v)
        for tp in self.plain:
            total += 0.5 * self.a * cmath.exp(1j * self.X * math.sin(tp))
            mags += 0.5 * self.a
        return total, mags

    def paths(self, n):
        S = math.sqrt(GAUSS_CUT / self.X)
        panels = max(8, 2 * math.ceil(S / 0.25))
        edges = np.linspace(-S, S, panels + 1)
        x, w = gauss_legendre(n)
        lo, hi = edges[:-1, None], edges[1:, None]
        s = (lo + 0.5 * (hi - lo) * (x + 1.0)).ravel()
        ws = (0.5 * (hi - lo) * w).ravel()
        total = 0j
        mags = 0.0
        for i, (t0, _) in enumerate(_SADDLES):
            vals = self.integrand(i, s)
            front = cmath.exp(1j * self.X * math.sin(t0)) / (2.0 * math.pi)
            total += front * np.dot(ws, vals)
            mags += float(np.dot(ws, np.abs(vals))) / (2.0 * math.pi)
        return total, mags


def kernel_saddle(p, g, tol=1e-10):
    """K_a^2(z, xi) from the steepest-descent form; m = 2 only.

    Parameters
    ----------
    p : KernelParams
        Needs m = 2.
    g : GeomPoint
    tol : float

    Returns
    -------
    ComplexEval
        Tagged "saddle". err adds the quadrature change and a conditioning
        term 8 eps X (sum of term magnitudes): phases X sin t_p are only
        known to X eps, so for z_a ~ 1e11 (a = 8, z = 1000) the value is
        meaningful to ~1e-4.
    """
    if p.m != 2:
        raise DomainError("the steepest-descent evaluator covers m = 2 only")
    if g.z == 0:
        return ComplexEval(1.0, 0.0, "saddle")
    st = _Setup(p.a, g.z, g.theta)
    fixed, fmag = st.closed_part()
    prev = None
    for n in ORDERS:
        val, mag = st.paths(n)
        if prev is not None:
            change = abs(val - prev)
            if change <= tol * max(1.0, mag):
                total = fixed + val
                cond = 8.0 * EPS * (1.0 + st.X) * (fmag + mag + 1.0)
                return ComplexEval(total, change + cond, "saddle")
        prev = val
    raise AccuracyError(f"steepest-descent quadrature not converged: change {change:.3e}")
