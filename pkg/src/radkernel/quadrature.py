"""Gauss rules and small composite integrators for complex integrands."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import AccuracyError


@lru_cache(maxsize=64)
def gauss_legendre(n):
    """Nodes and weights on [-1, 1]."""
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=256)
def gauss_jacobi(n, alpha, beta):
    """Nodes and weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta."""
    x, w = roots_jacobi(n, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(edges, n):
    """Composite Gauss-Legendre nodes and weights over consecutive panels."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (x + 1.0)).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def integrate_panels(f, edges, n=32, tol=1e-12, nmax=1024):
    """Integrate a vectorized (complex) f over panels, doubling the order.

    Convergence is judged relative to max(1, integral of |f|).

    Returns
    -------
    value : complex
    err : float
        Difference between the last two refinements.
    """
    nodes, weights = panel_rule(edges, n)
    vals = f(nodes)
    prev = np.dot(weights, vals)
    while True:
        n *= 2
        nodes, weights = panel_rule(edges, n)
        vals = f(nodes)
        cur = np.dot(weights, vals)
        scale = max(1.0, float(np.dot(weights, np.abs(vals))))
        err = abs(cur - prev)
        if err <= tol * scale:
            return cur, err
        if n >= nmax:
            raise AccuracyError(f"panel quadrature not converged: change {err:.3e} at order {n}")
        prev = cur


def geometric_edges(lo, hi, ratio=2.0, extra=()):
    """Panel edges on [lo, hi] growing geometrically away from lo, plus extra breakpoints."""
    if lo <= 0:
        raise ValueError("geometric edges need lo > 0")
    pts = [lo]
    while pts[-1] * ratio < hi:
        pts.append(pts[-1] * ratio)
    pts.append(hi)
    pts.extend(e for e in extra if lo < e < hi)
    return np.unique(np.asarray(pts, dtype=float))
