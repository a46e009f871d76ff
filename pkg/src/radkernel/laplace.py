"""Laplace-domain kernel, numerical Bromwich inversion and the pole building blocks.

With the Bessel argument z_a replaced by z_a t, the kernel has the Laplace
transform in t

    2^{2lam/a} Gamma((2lam+a)/a) (1/r) (1/R)^{2lam/a} (1 - u^2) / (1 - 2 xi u + u^2)^{lam+1},

r = sqrt(s^2 + z_a^2), R = s + r, u = (-i z_a / R)^{2/a}; inverting at t = 1
gives the kernel.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError
from .quadrature import gauss_jacobi, integrate_panels
from .reports import Cell, ScanReport
from .types import ComplexEval, KernelParams

SIGMA = 1.0
NEAR_SINGULAR = 1e-14
ZA_MAX = 5.0
_TAIL_TERMS = 12
_CAUCHY_NODES = 64


# ---------------------------------------------------------------- Laplace kernel


@dataclass(frozen=True)
class LaplaceKernelInputs:
    """Auxiliary quantities s, r, R and u_R at one Laplace variable s."""

    s: complex
    r: complex
    R: complex
    u_R: complex

    @classmethod
    def build(cls, a, za, s):
        s = complex(s)
        if not s.real > 0:
            raise DomainError(f"need Re s > 0, got {s}")
        r = cmath.sqrt(s * s + za * za)
        R = s + r
        u = cmath.exp(2.0 / a * cmath.log(-1j * za / R)) if za > 0 else 0j
        return cls(s, r, R, u)


def laplace_kernel(p, g, s, margin=1e-8):
    """Laplace transform (in the auxiliary variable t) of the kernel.

    Parameters
    ----------
    p : KernelParams
    g : GeomPoint
    s : complex
        Re s > 0, at distance >= margin from the branch points +-i z_a.

    Raises
    ------
    DomainError
        Re s <= 0 or s too close to a branch point.
    AccuracyError
        The denominator 1 - 2 xi u + u^2 is below 1e-14 in magnitude.
    """
    za = float(p.z_a(g.z))
    s = complex(s)
    if min(abs(s - 1j * za), abs(s + 1j * za)) < margin:
        raise DomainError(f"s={s} is within {margin} of a branch point")
    li = LaplaceKernelInputs.build(p.a, za, s)
    den = 1.0 - 2.0 * g.xi * li.u_R + li.u_R ** 2
    if abs(den) < NEAR_SINGULAR:
        raise AccuracyError(f"near-singular denominator {abs(den):.2e} at s={s}")
    c0 = 2.0 ** (2 * p.lam / p.a) * math.gamma((2 * p.lam + p.a) / p.a)
    lead = c0 / li.r * cmath.exp(-2 * p.lam / p.a * cmath.log(li.R)) if p.lam else c0 / li.r
    return lead * (1.0 - li.u_R ** 2) / den ** (p.lam + 1.0)


# ---------------------------------------------------------------- Bromwich inversion


def _derivatives(F, s0, rho, kmax, n=_CAUCHY_NODES):
    """F^(k)(s0), k = 0..kmax, by the trapezoid rule on a circle of radius rho."""
    phi = 2.0 * math.pi * np.arange(n) / n
    ring = np.exp(1j * phi)
    vals = np.array([F(s0 + rho * w) for w in ring])
    out = np.empty(kmax + 1, dtype=complex)
    for k in range(kmax + 1):
        out[k] = math.factorial(k) * np.mean(vals * ring ** (-k)) / rho ** k
    return out


def _tail(F, sigma, T, t, side, kmax=_TAIL_TERMS):
    """Integral over y from T to infinity (side=+1) or -infinity to -T (side=-1)
    of e^{iyt} F(sigma + iy), by repeated integration by parts.

    Returns the value and the size of the last retained term.
    """
    y0 = side * T
    s0 = complex(sigma, y0)
    rho = 0.9 * sigma
    dF = _derivatives(F, s0, rho, kmax)
    # phi(y) = F(sigma + iy) has phi^(k) = i^k F^(k)
    dphi = dF * (1j ** np.arange(kmax + 1))
    it = 1j * t
    total, last = 0j, math.inf
    e = cmath.exp(1j * y0 * t)
    for k in range(kmax + 1):
        term = -side * e * (-1) ** k * dphi[k] / it ** (k + 1)
        # side=-1 flips the orientation of the boundary term
        if abs(term) > last:
            break
        total += term
        last = abs(term)
    return total, last


def inverse_laplace(F, t, sigma=SIGMA, T=None, tol=1e-10):
    """Bromwich inversion (1/2 pi i) int_{sigma - i inf}^{sigma + i inf} e^{st} F(s) ds.

    The segment |Im s| <= T is integrated with composite Gauss-Legendre
    panels of unit width; the two tails use an integration-by-parts
    expansion whose derivatives come from Cauchy integrals on circles of
    radius 0.9 sigma. T is doubled until two estimates agree.

    Parameters
    ----------
    F : callable
        Laplace-domain function, analytic for Re s >= 0.1 sigma.
    t : float
        Time, > 0.
    sigma : float
        Abscissa.
    T : float, optional
        Initial half-width; default 40/t.
    tol : float

    Returns
    -------
    ComplexEval
        method "laplace"; err is the T-doubling difference plus quadrature
        and tail-term estimates.

    Raises
    ------
    AccuracyError
        If the tail terms do not decrease or the doubling does not settle.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    T = T or 40.0 / t

    def line(y):
        return np.exp(1j * y * t) * np.array([F(complex(sigma, v)) for v in y])

    def estimate(T):
        edges = np.linspace(-T, T, 2 * int(math.ceil(T)) + 1)
        body, qerr = integrate_panels(line, edges, n=8, tol=0.1 * tol, nmax=256)
        up, e_up = _tail(F, sigma, T, t, +1)
        dn, e_dn = _tail(F, sigma, T, t, -1)
        return body + up + dn, qerr + e_up + e_dn

    pref = math.exp(sigma * t) / (2.0 * math.pi)
    v1, e1 = estimate(T)
    for _ in range(5):
        T *= 2.0
        v2, e2 = estimate(T)
        diff = abs(v2 - v1)
        if pref * (diff + e2) <= tol:
            return ComplexEval(pref * v2, pref * (diff + e2), "laplace")
        v1 = v2
    if pref * (diff + e2) < math.sqrt(tol):
        return ComplexEval(pref * v2, pref * (diff + e2), "laplace")
    raise AccuracyError(f"Bromwich tail did not settle: change {pref * diff:.3e} at T={T}")


def ilt_kernel_check(p, g, tol=1e-9):
    """Kernel value at (z, xi) by Bromwich inversion of the Laplace-domain formula at t = 1.

    Raises
    ------
    DomainError
        If z_a > 5, outside the desk-scale range of this route.
    """
    za = float(p.z_a(g.z))
    if za > ZA_MAX:
        raise DomainError(f"z_a = {za:.3g} exceeds {ZA_MAX}; the Laplace route is limited to z_a <= {ZA_MAX}")
    if g.z == 0.0:
        return ComplexEval(1.0, 0.0, "laplace")
    return inverse_laplace(lambda s: laplace_kernel(p, g, s), 1.0, tol=tol)


# ---------------------------------------------------------------- poles, f_{n,alpha}


@dataclass(frozen=True)
class MultiPole:
    """Poles -i a_j with positive integer multiplicities alpha_j."""

    a_list: tuple
    alpha_list: tuple

    def __post_init__(self):
        a = tuple(float(v) for v in self.a_list)
        al = tuple(int(v) for v in self.alpha_list)
        if len(a) != len(al) or not a:
            raise DomainError("a_list and alpha_list must be non-empty and of equal length")
        if any(v < 1 for v in al) or any(int(v) != v for v in self.alpha_list):
            raise DomainError("multiplicities must be positive integers")
        object.__setattr__(self, "a_list", a)
        object.__setattr__(self, "alpha_list", al)

    @property
    def order(self):
        return sum(self.alpha_list)

    def laplace(self, s):
        """F(s) = prod_j (s + i a_j)^{-alpha_j}."""
        out = 1.0 + 0j
        for a, al in zip(self.a_list, self.alpha_list):
            out /= (s + 1j * a) ** al
        return out

    def bound(self, t):
        """t^{|alpha|-1} / Gamma(|alpha|)."""
        n = self.order
        return t ** (n - 1) / math.gamma(n)


def _simplex_average(a, alpha, t, n):
    """Average of exp(-i t sum a_j x_j) over the Dirichlet(alpha) distribution.

    Stick breaking x_j = v_j prod_{k<j}(1 - v_k) with v_j ~ Beta(alpha_j, sum_{k>j} alpha_k),
    each integrated by Gauss-Jacobi.
    """
    J = len(a)
    weights = np.ones(1)
    remain = np.ones(1)
    phase = np.zeros(1)
    for j in range(J - 1):
        rest = sum(alpha[j + 1:])
        # Beta(alpha_j, rest) on [0,1]: weight v^{alpha_j-1}(1-v)^{rest-1}
        x, w = gauss_jacobi(n, float(rest - 1), float(alpha[j] - 1))
        v = 0.5 * (x + 1.0)
        w = w / w.sum()
        xj = remain[:, None] * v[None, :]
        phase = (phase[:, None] + a[j] * xj).ravel()
        remain = (remain[:, None] * (1.0 - v[None, :])).ravel()
        weights = (weights[:, None] * w[None, :]).ravel()
    phase = phase + a[-1] * remain
    return np.dot(weights, np.exp(-1j * t * phase))


def f_n_alpha(mp, t, n=None):
    """Inverse Laplace transform of prod_j (s + i a_j)^{-alpha_j} at t > 0.

    The original is t^{|alpha|-1}/Gamma(|alpha|) times the average of
    exp(-i t sum_j a_j x_j) over the simplex with Dirichlet(alpha) weight,
    the iterated convolution of the single-pole originals. Exact when all
    a_j are equal.

    Returns
    -------
    ComplexEval
        err is the change between n and n + 8 node rules per dimension.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    a, alpha = mp.a_list, mp.alpha_list
    lead = mp.bound(t)
    if len(set(a)) == 1:
        return ComplexEval(cmath.exp(-1j * a[0] * t) * lead, 4 * np.finfo(float).eps * lead, "closed")
    spread = t * (max(a) - min(a))
    n = n or int(12 + math.ceil(spread))
    v1 = _simplex_average(a, alpha, t, n)
    v2 = _simplex_average(a, alpha, t, n + 8)
    return ComplexEval(lead * v2, lead * abs(v2 - v1) + 1e-15 * lead, "quadrature")


def lemma31_audit(configs, ts, slack=1e-8):
    """Check |f_{n,alpha}(t)| <= t^{|alpha|-1}/Gamma(|alpha|) + slack on a t grid.

    Parameters
    ----------
    configs : sequence of MultiPole
    ts : array_like
        Times in (0, 1].

    Returns
    -------
    ScanReport
        One cell per (config, t) with value f and the ratio |f|/bound in
        the violation list when exceeded beyond err + slack. `sup` is the
        largest ratio |f| / bound.
    """
    cells, viol = [], []
    sup = 0.0
    for ci, mp in enumerate(configs):
        for t in ts:
            r = f_n_alpha(mp, float(t))
            b = mp.bound(float(t))
            cells.append(Cell(float(t), float(ci), r.value, r.err, r.method))
            sup = max(sup, abs(r.value) / b)
            if abs(r.value) > b + r.err + slack:
                viol.append({"config": ci, "t": float(t), "abs": abs(r.value), "bound": b})
    cfg = {"target": "lemma31", "configs": [(m.a_list, m.alpha_list) for m in configs], "t": list(map(float, ts))}
    return ScanReport(config=cfg, cells=cells, sup=sup, violations=viol)


# ---------------------------------------------------------------- root factorization


@dataclass(frozen=True)
class PoleSpec:
    """a = p/q and the angle theta of the 2q-root factorization."""

    p: int
    q: int
    theta: float

    def __post_init__(self):
        if int(self.p) != self.p or int(self.q) != self.q or self.p < 1 or self.q < 1:
            raise DomainError("p and q must be positive integers")

    def radius(self, z):
        """z_{p/q} = (2q/p) z^{p/(2q)}."""
        return KernelParams(self.p / self.q, 2).z_a(z)

    def roots(self, z):
        """-i z_{p/q} cos((p theta + 2 pi l)/(2q)), l = 0..2q-1."""
        l = np.arange(2 * self.q)
        return -1j * self.radius(z) * np.cos((self.p * self.theta + 2 * math.pi * l) / (2 * self.q))


def pq_root_factorization(ps, z, s):
    """Relative residual of the 2q-root factorization of the bracket polynomial.

    Compares (r+s)^{2q} - 2(-1)^q cos(p theta) z_a^{2q} + (r-s)^{2q}
    with 2^{2q} prod_l (s - root_l), z_a = z_{p/q}, r = sqrt(s^2 + z_a^2).
    """
    za = float(ps.radius(z))
    s = complex(s)
    q = ps.q
    r = cmath.sqrt(s * s + za * za)
    lhs = (r + s) ** (2 * q) - 2 * (-1) ** q * math.cos(ps.p * ps.theta) * za ** (2 * q) + (r - s) ** (2 * q)
    rhs = 2.0 ** (2 * q) * np.prod(s - ps.roots(z))
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return float(abs(lhs - rhs) / scale)


def factorization_audit(p, q, thetas=None, zs=None, ss=None):
    """Residuals of pq_root_factorization over grids; violations above 1e-10."""
    thetas = np.linspace(0, math.pi, 7) if thetas is None else thetas
    zs = [0.0, 0.5, 1.0, 2.5] if zs is None else zs
    ss = [1.0, 0.5 + 2j, 2 - 1j, 0.1 + 0.3j] if ss is None else ss
    cells, viol = [], []
    worst = 0.0
    for th in thetas:
        ps = PoleSpec(p, q, float(th))
        for z in zs:
            for s in ss:
                res = pq_root_factorization(ps, z, s)
                worst = max(worst, res)
                cells.append(Cell(float(z), float(th), complex(res), 0.0, "factorization"))
                if res > 1e-10:
                    viol.append({"theta": float(th), "z": float(z), "s": str(s), "residual": res})
    return ScanReport(config={"target": "factorization", "p": p, "q": q}, cells=cells, sup=worst, violations=viol)
