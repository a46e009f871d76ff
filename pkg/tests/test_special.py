import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special as sp

from radkernel.errors import DomainError, RangeError
from radkernel.special import (
    bessel_j,
    bessel_j_many,
    bessel_j_orders,
    bessel_j_tilde,
    erf_complex,
    erfc_complex,
    faddeeva,
    fresnel,
    fresnel_e,
    gegenbauer,
    gegenbauer_all,
    gegenbauer_at_one,
    hermite,
    parabolic_d,
    parabolic_d_all,
    parabolic_d_asymptotic,
)

orders = st.floats(0.0, 40.0)
args = st.floats(0.0, 200.0)
cplx = st.complex_numbers(max_magnitude=6.0, allow_nan=False, allow_infinity=False)


# ---------------------------------------------------------------- Bessel


def test_bessel_examples():
    assert bessel_j(0, 0.0) == 1.0
    assert abs(bessel_j(0.5, math.pi)) < 1e-15
    assert bessel_j(0, 1.0) == pytest.approx(0.7651976866, abs=1e-10)


def test_bessel_nonfinite_is_domain_error():
    with pytest.raises(DomainError):
        bessel_j(0, float("nan"))
    with pytest.raises(DomainError):
        bessel_j(1, float("inf"))


@settings(max_examples=300, deadline=None)
@given(orders, args)
def test_bessel_matches_scipy(nu, x):
    # scipy underflows to 0 for tiny x and small nu; mpmath there
    ref = sp.jv(nu, x) if x > 1e-100 else float(mpmath.besselj(nu, x))
    assert abs(bessel_j(nu, x) - ref) <= 1e-12 * max(1.0, abs(ref)) + 1e-14


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 30.0), st.floats(0.0, 60.0))
def test_bessel_switchover_is_continuous(nu, x):
    # both sides of the series / asymptotic switch agree with a high-precision oracle
    ref = float(mpmath.besselj(nu, x))
    assert abs(bessel_j(nu, x) - ref) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 20.0), st.floats(1e-3, 100.0))
def test_bessel_three_term_recurrence(nu, x):
    lhs = bessel_j(nu, x) + bessel_j(nu + 2, x)
    rhs = 2 * (nu + 1) / x * bessel_j(nu + 1, x)
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, 2 * (nu + 1) / x)


def test_bessel_vector_forms_match_scalar():
    xs = np.linspace(0.0, 150.0, 301)
    for nu in (0.0, 0.25, 3.5, 17.0):
        ref = np.array([bessel_j(nu, x) for x in xs])
        assert np.max(np.abs(bessel_j_many(nu, xs) - ref)) < 1e-12
    nus = np.linspace(0.0, 60.0, 121)
    for x in (0.3, 7.0, 45.0):
        ref = np.array([bessel_j(n, x) for n in nus])
        assert np.max(np.abs(bessel_j_orders(nus, x) - ref)) < 1e-12


def test_bessel_weighted_bound():
    # |x|^(1/3) |J_nu(x)| <= 0.7858 for nu >= 0
    xs = np.linspace(1e-3, 400.0, 4001)
    for nu in (0.0, 0.5, 1.0, 2.5, 10.0, 30.0):
        assert np.max(xs ** (1 / 3) * np.abs(bessel_j_many(nu, xs))) <= 0.7858


def test_bessel_tilde_examples():
    assert bessel_j_tilde(1, 0.0) == pytest.approx(1.0)
    x = math.pi / 2
    half = math.sqrt(2 / (math.pi * x)) * math.sin(x)
    assert bessel_j_tilde(0.5, x) == pytest.approx((x / 2) ** -0.5 * half, abs=1e-14)
    assert bessel_j_tilde(0, 1.0) == pytest.approx(bessel_j(0, 1.0), abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 10.0), st.floats(0.0, 30.0))
def test_bessel_tilde_definition(nu, x):
    xm = mpmath.mpf(x)
    ref = float(mpmath.besselj(nu, xm) * (xm / 2) ** (-nu)) if x > 0 else 1 / math.gamma(nu + 1)
    assert abs(bessel_j_tilde(nu, x) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_bessel_tilde_bounded_by_value_at_zero():
    xs = np.linspace(0.0, 50.0, 501)
    for nu in (0.0, 0.5, 2.0, 5.0):
        vals = np.array([abs(bessel_j_tilde(nu, x)) for x in xs])
        assert vals.max() <= 1 / math.gamma(nu + 1) + 1e-14


# ---------------------------------------------------------------- Gegenbauer


def test_gegenbauer_examples():
    assert gegenbauer(0, 1.0, 0.7) == 1.0
    assert gegenbauer(1, 1.5, 0.2) == pytest.approx(0.6)
    assert abs(gegenbauer(2, 1.0, 0.5)) < 1e-15
    with pytest.raises(DomainError):
        gegenbauer(-1, 1.0, 0.0)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 40), st.floats(0.05, 6.0), st.floats(-1.0, 1.0))
def test_gegenbauer_matches_scipy_and_bound(k, lam, xi):
    v = gegenbauer(k, lam, xi)
    ref = sp.eval_gegenbauer(k, lam, xi)
    top = gegenbauer_at_one(k, lam)
    assert abs(v - ref) <= 1e-11 * max(1.0, top)
    assert abs(v) <= top * (1 + 1e-12)


def test_gegenbauer_all_is_recurrence_table():
    tab = gegenbauer_all(25, 1.25, 0.3)
    assert np.allclose(tab, [sp.eval_gegenbauer(k, 1.25, 0.3) for k in range(26)], rtol=1e-12, atol=1e-12)


# ---------------------------------------------------------------- Fresnel and erfc


def test_fresnel_examples():
    assert fresnel(0.0).c == 0.0 and fresnel(0.0).s == 0.0
    ref = integrate.quad(lambda t: math.cos(t * t), 0, 1, epsabs=1e-14)[0]
    assert fresnel(1.0).c == pytest.approx(ref, abs=1e-12)
    assert fresnel(1.0).c == pytest.approx(0.9045243, abs=1e-7)
    lim = 0.5 * math.sqrt(math.pi / 2)
    assert lim == pytest.approx(0.6266571, abs=1e-7)
    far = fresnel(1e4)
    assert abs(far.c - lim) < 1e-4 and abs(far.s - lim) < 1e-4


@settings(max_examples=100, deadline=None)
@given(st.floats(-30.0, 30.0))
def test_fresnel_matches_scipy(u):
    s_ref, c_ref = sp.fresnel(u * math.sqrt(2 / math.pi))
    scale = math.sqrt(math.pi / 2)
    f = fresnel(u)
    assert abs(f.c - scale * c_ref) < 1e-12 and abs(f.s - scale * s_ref) < 1e-12
    g = fresnel(-u)
    assert g.c == pytest.approx(-f.c, abs=1e-15) and g.s == pytest.approx(-f.s, abs=1e-15)


def test_fresnel_e_limits():
    assert abs(fresnel_e(-1e6)) < 1e-5
    assert fresnel_e(1e6) == pytest.approx(cmath.sqrt(math.pi) * cmath.exp(0.25j * math.pi), abs=1e-5)


def test_erfc_examples_and_range_error():
    assert erfc_complex(0) == 1
    with pytest.raises(RangeError):
        erfc_complex(30j)


@settings(max_examples=300, deadline=None)
@given(cplx)
def test_erfc_matches_scipy(w):
    ref = sp.erfc(w)
    assert abs(erfc_complex(w) - ref) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=200, deadline=None)
@given(cplx)
def test_erf_is_odd(w):
    assert abs(erf_complex(w) + erf_complex(-w)) <= 1e-14 * max(1.0, abs(erf_complex(w)))


@settings(max_examples=100, deadline=None)
@given(st.floats(-8.0, 8.0))
def test_erfc_on_the_fresnel_ray(u):
    # int_0^u exp(i t^2) dt = (sqrt(pi)/2) e^{i pi/4} erf(e^{-i pi/4} u)
    w = cmath.exp(-0.25j * math.pi) * u
    f = fresnel(u)
    rhs = 1 - (1 - 1j) * math.sqrt(2 / math.pi) * complex(f.c, f.s)
    assert abs(erfc_complex(w) - rhs) < 1e-12


@settings(max_examples=300, deadline=None)
@given(st.complex_numbers(max_magnitude=60.0, allow_nan=False, allow_infinity=False))
def test_faddeeva_matches_wofz(z):
    ref = sp.wofz(z)
    if not np.isfinite(ref) or abs(ref) > 1e250:
        return
    assert abs(faddeeva(z) - ref) <= 1e-11 * max(1.0, abs(ref))


# ---------------------------------------------------------------- Hermite and D_{-n}


def test_hermite_examples():
    assert hermite(0, 3.7 - 1j) == 1
    assert hermite(1, 2 + 1j) == 4 + 2j
    assert hermite(3, 1.0) == -4
    with pytest.raises(DomainError):
        hermite(-1, 0.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 30), st.floats(-4.0, 4.0))
def test_hermite_matches_scipy(n, x):
    ref = sp.eval_hermite(n, x)
    assert abs(hermite(n, x) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_parabolic_examples():
    assert parabolic_d(0, 0.0) == pytest.approx(1.0)
    assert parabolic_d(1, 0.0) == pytest.approx(math.sqrt(math.pi / 2), abs=1e-15)


def test_parabolic_order_minus_two_by_derivative_formula():
    # D_{-n-1}(w) = sqrt(pi/2) (-1)^n e^{-w^2/4} / n! * d^n/dw^n (e^{w^2/2} erfc(w/sqrt2)); n = 1 by hand
    w = 1 + 1j
    r = w / math.sqrt(2)
    deriv = w * cmath.exp(w * w / 2) * erfc_complex(r) - math.sqrt(2 / math.pi)
    expect = -math.sqrt(math.pi / 2) * cmath.exp(-w * w / 4) * deriv
    assert abs(parabolic_d(2, w) - expect) < 1e-13


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 12), st.complex_numbers(max_magnitude=5.0, allow_nan=False, allow_infinity=False))
def test_parabolic_matches_mpmath(n, w):
    ref = complex(mpmath.pcfd(-n, w))
    assert abs(parabolic_d(n, w) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_parabolic_all_and_recurrence():
    w = 0.7 - 1.3j
    tab = parabolic_d_all(8, w)
    for n in range(9):
        assert abs(tab[n] - parabolic_d(n, w)) < 1e-13
    # D_{nu+1} - w D_nu + nu D_{nu-1} = 0 with nu = -n
    for n in range(1, 8):
        assert abs(tab[n - 1] - w * tab[n] - n * tab[n + 1]) < 1e-12


def test_parabolic_asymptotic_examples():
    ref = parabolic_d(1, 30.0)
    ev = parabolic_d_asymptotic(0.5, 30.0, 6)
    # exp(-z^2/4) at z = 30 carries a relative rounding of about 225 eps
    assert abs(ev.value - ref) <= ev.err + 1e-13 * abs(ref)
    ref = parabolic_d(1, 30j)
    ev = parabolic_d_asymptotic(0.5, 30j, 6)
    assert abs(ev.value - ref) <= ev.err + 1e-13 * abs(ref)
    one = parabolic_d_asymptotic(0.5, 20.0, 1)
    assert one.value == pytest.approx(math.exp(-100.0) / 20.0, rel=1e-14)


def test_parabolic_asymptotic_sector_mismatch():
    with pytest.raises(DomainError):
        parabolic_d_asymptotic(0.5, -30.0, 6, form="single")
    with pytest.raises(DomainError):
        parabolic_d_asymptotic(0.5, 30.0, 6, form="double")
