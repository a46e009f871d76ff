import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special as sp

from radkernel.closed_forms import kernel_a1, kernel_a4_dim2, kernel_a4_even
from radkernel.errors import AccuracyError, DomainError
from radkernel.kernel import (
    TransformGrid,
    geom_from_cartesian,
    kernel_dimension_lift,
    kernel_series,
    kernel_series_theta,
    sphere_rule,
    transform_apply,
    transform_normalization,
)
from radkernel.types import GeomPoint, KernelParams

a_values = st.sampled_from([0.5, 1.0, 4 / 3, 2.0, 3.0, 4.0, 6.0, 8.0])
m_values = st.integers(2, 7)


def test_geometry_examples():
    g = geom_from_cartesian([1, 0], [0, 1])
    assert (g.z, g.xi) == (1.0, 0.0)
    g = geom_from_cartesian([2, 0], [3, 0])
    assert (g.z, g.xi) == (6.0, 1.0)
    g = geom_from_cartesian([0, 0], [1, 2])
    assert (g.z, g.xi) == (0.0, 0.0)
    with pytest.raises(DomainError):
        geom_from_cartesian([1, 0], [1, 0, 0])
    with pytest.raises(DomainError):
        GeomPoint(-1.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=3, max_size=3), st.lists(st.floats(-10, 10), min_size=3, max_size=3))
def test_geometry_is_rotation_invariant(x, y):
    x, y = np.array(x), np.array(y)
    q, _ = np.linalg.qr(np.array([[1.0, 2.0, 0.5], [0.3, -1.0, 2.0], [1.5, 0.2, -0.7]]))
    g1, g2 = geom_from_cartesian(x, y), geom_from_cartesian(q @ x, q @ y)
    assert g1.z == pytest.approx(g2.z, rel=1e-12, abs=1e-12)
    if g1.z > 1e-6:
        assert g1.xi == pytest.approx(g2.xi, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(a_values, m_values, st.floats(-1, 1))
def test_kernel_at_origin_is_one(a, m, xi):
    ev = kernel_series(KernelParams(a, m), GeomPoint(0.0, xi))
    assert ev.value == pytest.approx(1.0, abs=1e-15)


def test_series_examples():
    ev = kernel_series(KernelParams(2, 3), GeomPoint(1.0, 0.3))
    assert abs(ev.value - complex(0.9553365, -0.2955202)) < 1e-7
    assert abs(ev.value - cmath.exp(-0.3j)) < 1e-12
    ev = kernel_series(KernelParams(1, 3), GeomPoint(2.0, 0.5))
    assert ev.value == pytest.approx(sp.j0(math.sqrt(6.0)), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(m_values, st.floats(0.0, 6.0), st.floats(-1, 1))
def test_series_reduces_to_exponential_at_a2(m, z, xi):
    ev = kernel_series(KernelParams(2, m), GeomPoint(z, xi))
    assert abs(ev.value - cmath.exp(-1j * z * xi)) <= max(ev.err, 1e-9)


@settings(max_examples=100, deadline=None)
@given(m_values, st.floats(0.0, 6.0), st.floats(-1, 1))
def test_series_reduces_to_bessel_at_a1(m, z, xi):
    ev = kernel_series(KernelParams(1, m), GeomPoint(z, xi))
    ref = kernel_a1(m, GeomPoint(z, xi)).value
    assert abs(ev.value - ref) <= max(ev.err, 1e-9)


@settings(max_examples=60, deadline=None)
@given(a_values, st.floats(0.0, 4.0), st.floats(-1, 1))
def test_two_dimensional_kernel_is_even_in_theta(a, z, xi):
    # m = 2 depends on theta through cos(k theta) only: K(z, theta) = K(z, -theta)
    p = KernelParams(a, 2)
    th = math.acos(xi)
    v1 = kernel_series(p, GeomPoint.from_theta(z, th)).value
    v2 = kernel_series(p, GeomPoint.from_theta(z, -th)).value
    assert abs(v1 - v2) < 1e-13


@settings(max_examples=40, deadline=None)
@given(a_values, st.integers(2, 6), st.floats(0.1, 4.0))
def test_series_theta_matches_pointwise(a, m, z):
    p = KernelParams(a, m)
    xis = np.linspace(-1, 1, 7)
    vals, errs = kernel_series_theta(p, z, xis)
    for x, v, e in zip(xis, vals, errs):
        ev = kernel_series(p, GeomPoint(z, x))
        assert abs(ev.value - v) <= 1e-13 + e


def test_series_gives_up_loudly():
    with pytest.raises(AccuracyError):
        kernel_series(KernelParams(8, 2), GeomPoint(30.0, 0.3), k_max=50)


def test_series_error_field_is_honest():
    # a = 4 against the erfc closed form at moderate z
    p = KernelParams(4, 2)
    for z in (0.5, 2.0, 4.0, 5.0):
        for xi in (-0.9, 0.1, 0.8):
            g = GeomPoint(z, xi)
            ev = kernel_series(p, g)
            assert abs(ev.value - kernel_a4_dim2(g).value) <= ev.err + 1e-13


# ---------------------------------------------------------------- dimension lift


def test_lift_examples():
    g = GeomPoint(1.0, 0.2)
    ev = kernel_dimension_lift(KernelParams(2, 2), g)
    assert abs(ev.value - kernel_series(KernelParams(2, 4), g).value) < 1e-7
    g = GeomPoint(1.5, 0.4)
    ev = kernel_dimension_lift(KernelParams(4, 2), g)
    assert abs(ev.value - kernel_a4_even(4, g).value) < 1e-7
    g = GeomPoint(0.8, -0.3)
    ev = kernel_dimension_lift(KernelParams(1, 2), g)
    assert abs(ev.value - kernel_a1(4, g).value) < 1e-7


def test_lift_errors():
    with pytest.raises(DomainError):
        kernel_dimension_lift(KernelParams(2, 2), GeomPoint(0.0, 0.2))
    with pytest.raises(DomainError):
        kernel_dimension_lift(KernelParams(2, 2), GeomPoint(1.0, 1.0))


@pytest.mark.parametrize("a,m", [(2.0, 2), (3.0, 3), (4.0, 2), (1.0, 4)])
def test_lift_is_second_order(a, m):
    p, top = KernelParams(a, m), KernelParams(a, m + 2)
    g = GeomPoint(1.3, 0.35)
    ref = kernel_series(top, g, 1e-14).value
    e1 = abs(kernel_dimension_lift(p, g, h=0.04).value - ref)
    e2 = abs(kernel_dimension_lift(p, g, h=0.02).value - ref)
    order = math.log2(e1 / e2)
    assert 1.8 < order < 2.2


# ---------------------------------------------------------------- PDE residual


def test_a4_pde_residual_is_second_order():
    # |x|^{-2} Lap_x K(x, y) + |y|^4 K(x, y) = 0 for a = 4, m = 2, with the closed form
    y = np.array([0.9, -0.3])
    x0 = np.array([0.7, 0.4])

    def K(x):
        return kernel_a4_dim2(geom_from_cartesian(x, y)).value

    def residual(h):
        e1, e2 = np.array([h, 0.0]), np.array([0.0, h])
        lap = (K(x0 + e1) + K(x0 - e1) + K(x0 + e2) + K(x0 - e2) - 4 * K(x0)) / h ** 2
        return abs(lap / np.dot(x0, x0) + np.dot(y, y) ** 2 * K(x0))

    r1, r2 = residual(0.02), residual(0.01)
    assert r2 < 1e-4
    assert 1.8 < math.log2(r1 / r2) < 2.2


# ---------------------------------------------------------------- transform


def test_sphere_rule_integrates_polynomials():
    for m in (2, 3, 4):
        dirs, w = sphere_rule(m, 12, 24)
        area = 2 * math.pi ** (m / 2) / math.gamma(m / 2)
        assert w.sum() == pytest.approx(area, rel=1e-13)
        assert np.dot(w, dirs[:, 0] ** 2) == pytest.approx(area / m, rel=1e-12)
        assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)


def test_transform_gaussian_a2():
    p = KernelParams(2, 2)
    ys = np.array([[0.0, 0.0], [1.0, 0.5], [-2.0, 1.0], [0.3, -2.9]])
    out = transform_apply(p, lambda X: np.exp(-0.5 * np.sum(X * X, axis=1)), ys, grid=TransformGrid(R=9.0))
    assert np.max(np.abs(out - np.exp(-0.5 * np.sum(ys * ys, axis=1)))) < 1e-5


def test_transform_is_linear():
    p = KernelParams(3.0, 2)
    grid = TransformGrid(R=5.0, panels=6, n_radial=12, n_polar=8, n_azimuth=24)
    ys = np.array([[0.5, 0.2], [-0.4, 0.9]])

    def f(X):
        return np.exp(-np.sum(X * X, axis=1))

    def g(X):
        return X[:, 0] * np.exp(-np.sum(X * X, axis=1))

    lhs = transform_apply(p, lambda X: 2 * f(X) - 3j * g(X), ys, grid, tol=1e-5)
    rhs = 2 * transform_apply(p, f, ys, grid, tol=1e-5) - 3j * transform_apply(p, g, ys, grid, tol=1e-5)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_transform_a1_m3_against_radial_quadrature():
    # radial f: the angular integral of J_0(sqrt(2 r|y| (1+xi))) is a 1-D integral in xi
    p = KernelParams(1.0, 3)
    ys = np.array([[0.0, 0.0, 0.7], [1.2, -0.5, 0.3]])
    out = transform_apply(p, lambda X: np.exp(-np.linalg.norm(X, axis=1)), ys, grid=TransformGrid(R=45.0, panels=30))
    norm = transform_normalization(p)
    for y, v in zip(ys, out):
        ny = np.linalg.norm(y)

        def inner(r):
            ang = integrate.quad(lambda xi: sp.j0(math.sqrt(2 * r * ny * (1 + xi))), -1, 1, epsabs=1e-13)[0]
            return 2 * math.pi * ang * math.exp(-r) * r ** (3 - 1 + 1 - 2)

        ref = norm * integrate.quad(inner, 0, 60, limit=200, epsabs=1e-12)[0]
        assert abs(v - ref) < 1e-8
        # e^{-|x|} is also an eigenfunction
        assert abs(v - math.exp(-ny)) < 1e-6


def test_transform_eigenfunction_a4():
    p = KernelParams(4.0, 2)
    ys = np.array([[0.4, 0.1], [1.0, -0.6]])
    out = transform_apply(p, lambda X: np.exp(-np.sum(X * X, axis=1) ** 2 / 4), ys,
                          grid=TransformGrid(R=3.6, panels=8, n_polar=8, n_azimuth=48), tol=1e-8)
    exact = np.exp(-np.sum(ys * ys, axis=1) ** 2 / 4)
    assert np.max(np.abs(out - exact)) < 1e-6


def test_transform_tail_check():
    with pytest.raises(AccuracyError):
        transform_apply(KernelParams(2, 2), lambda X: np.exp(-0.5 * np.sum(X * X, axis=1)), [[0.0, 0.0]],
                        grid=TransformGrid(R=3.0))
