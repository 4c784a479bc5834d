from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hydrofam.algebra_core import (
    INFINITE_ORDER, SQRT2, ZERO_DEGREE, CoeffFn, GaussianRational, I, PolyE, coeff_deriv,
    mp_monomial, parse_rational, poly_arith, vanishing_order,
)

E = PolyE.E()
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(small, max_size=5).map(PolyE)


def test_product_of_linear_factors():
    assert str((E + 2) * (E - 2)) == "E^2 - 4"
    assert poly_arith(E + 2, E - 2, "mul") == E * E - 4


def test_additive_identity():
    p = PolyE([1, Fraction(2, 3), 5])
    assert poly_arith(p, PolyE(), "add") == p


def test_psi2_expansion():
    psi1 = (E + 2) * Fraction(1, 8)
    assert psi1 * ((E * 9 + 2) * Fraction(1, 8)) == (E + 2) * (E * 9 + 2) * Fraction(1, 64)


def test_zero_polynomial_sentinels():
    assert PolyE().degree == ZERO_DEGREE
    assert vanishing_order(PolyE(), 3) == INFINITE_ORDER
    assert PolyE([1, 2, 0, 0]).coeffs == (1, 2)


@pytest.mark.parametrize("p,e,order", [
    ((E + 2) * Fraction(1, 8), -2, 1),
    (PolyE.const(1), 0, 0),
    (E * E - E * 2 + 1, 1, 2),
])
def test_vanishing_order_examples(p, e, order):
    assert vanishing_order(p, e) == order


def test_gaussian_root_order():
    z = GaussianRational(1, 2)
    p = (E - z) * (E - z) * (E + 1)
    assert vanishing_order(p, z) == 2
    assert vanishing_order(p, z.conjugate()) == 0


@given(polys, polys, small)
def test_order_is_additive(p, q, e):
    assert vanishing_order(p * q, e) == vanishing_order(p, e) + vanishing_order(q, e)


@given(polys, small)
def test_synthetic_division(p, e):
    q, r = p.divmod_linear(e)
    assert q * (E - e) + r == p
    assert r == p(e)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == PolyE()


def test_gaussian_and_sqrt2_arithmetic():
    assert I * I == -1
    assert (GaussianRational(1, 2) * GaussianRational(3, -1)).conjugate() == \
        GaussianRational(1, -2) * GaussianRational(3, 1)
    assert SQRT2 * SQRT2 == 2


@pytest.mark.parametrize("text,value", [("-2/9", Fraction(-2, 9)), ("3", Fraction(3)), ("4/6", Fraction(2, 3))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "abc", "1/0"])
def test_parse_rational_rejects(text):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(text)


# -- coefficient functions ----------------------------------------------------

X, Y, K, R = CoeffFn.x(), CoeffFn.y(), CoeffFn.k(), CoeffFn.r()
RHO = X * X + Y * Y


def test_r_squared_and_inverse():
    assert R * R == RHO
    assert RHO * CoeffFn.inv_rho() == CoeffFn.const(1)


def test_derivative_examples():
    assert coeff_deriv(X, "x") == CoeffFn.const(1)
    dr = coeff_deriv(R, "x")
    assert (dr.p, dr.q, dr.s) == ({}, mp_monomial(1, dx=1), 1)
    d_inv = coeff_deriv(CoeffFn.inv_rho(), "x")
    assert d_inv == CoeffFn(mp_monomial(-2, dx=1), None, 2)


def _coeff(draw_ints):
    cp, cq, dx, dy, dk, s = draw_ints
    p = mp_monomial(cp, dx=dx, dy=dy, dk=dk)
    q = mp_monomial(cq, dx=dy, dy=dx)
    return CoeffFn(p, q, s)


coeffs = st.tuples(
    st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2),
    st.integers(0, 1), st.integers(0, 2),
).map(_coeff)
coeff_sums = st.tuples(coeffs, coeffs).map(lambda t: t[0] + t[1])


@settings(max_examples=1000)
@given(coeff_sums, coeff_sums, coeff_sums)
def test_coeff_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a.canonical() == a and a.canonical().canonical() == a.canonical()


@settings(max_examples=300)
@given(coeff_sums, coeff_sums, st.sampled_from("xy"))
def test_coeff_leibniz(a, b, d):
    assert coeff_deriv(a * b, d) == coeff_deriv(a, d) * b + a * coeff_deriv(b, d)


@settings(max_examples=100)
@given(coeff_sums, st.floats(0.3, 2.0), st.floats(-2.0, 2.0), st.floats(0.5, 2.0))
def test_coeff_evaluation_matches_arithmetic(a, x, y, k):
    lhs = (a * a + R).evaluate(x, y, k)
    rhs = a.evaluate(x, y, k) ** 2 + (x * x + y * y) ** 0.5
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))
