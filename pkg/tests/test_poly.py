"""Tests for the exact polynomial layer.

Expected values below were worked out by hand (binomial expansions, 2x2 and
3x3 determinants) and frozen; property tests cross-check the algebra against
plain rational evaluation, which is independent of the symbolic code paths.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incgeo.errors import ArityError, DomainError
from incgeo.poly import (
    Poly,
    directional_power,
    divides,
    exact_div,
    is_square_free,
    partial_derivative,
    poly_eval,
    poly_gcd,
    restrict_to_line,
    square_free_part,
    sylvester_resultant,
    taylor_components,
    variables,
)

X, Y, Z = variables(3)


def frac_vec(*vals):
    return [Fraction(v) for v in vals]


# -- construction and arithmetic ----------------------------------------


def test_zero_polynomial_degree_is_minus_one():
    assert Poly.zero(3).degree() == -1
    assert (X - X).degree() == -1
    assert (X - X).is_zero


def test_constructor_drops_zero_coefficients():
    p = Poly(2, {(1, 0): 0, (0, 1): 2})
    assert p.terms == {(0, 1): Fraction(2)}


def test_constructor_rejects_bad_exponents():
    with pytest.raises(ArityError):
        Poly(2, {(1, 0, 0): 1})
    with pytest.raises(DomainError):
        Poly(2, {(-1, 0): 1})


def test_grlex_leading_term():
    p = X**2 + X * Y * Z + Y**3
    # degree 3 terms: xyz (1,1,1) and y^3 (0,3,0); lex puts (1,1,1) first
    assert p.leading()[0] == (1, 1, 1)


def test_eval_example_and_arity():
    f = X**2 - Y**2 * Z
    assert poly_eval(f, frac_vec(2, 1, 4)) == 0
    assert poly_eval(f, frac_vec(1, 1, 2)) == -1
    with pytest.raises(ArityError):
        poly_eval(f, frac_vec(1, 2))


def test_partial_derivative_matches_hand_result():
    f = X**2 - Y**2 * Z
    assert partial_derivative(f, 0) == 2 * X
    assert partial_derivative(f, 1) == -2 * Y * Z
    assert partial_derivative(f, 2) == -(Y**2)
    assert partial_derivative(Poly.const(3, 5), 1).is_zero


# -- taylor components and directional powers ---------------------------


def test_taylor_components_at_origin():
    f = X**2 - Y**2 * Z
    parts = taylor_components(f, frac_vec(0, 0, 0))
    assert parts == [Poly.zero(3), Poly.zero(3), X**2, -(Y**2) * Z]


def test_taylor_components_sphere_at_pole():
    f = X**2 + Y**2 + Z**2 - 1
    parts = taylor_components(f, frac_vec(0, 0, 1))
    assert parts == [Poly.zero(3), 2 * Z, X**2 + Y**2 + Z**2]


def test_taylor_components_sum_reconstructs_shift():
    rng = random.Random(7)
    for _ in range(20):
        p = _random_poly(rng, 3, max_deg=4)
        at = frac_vec(rng.randint(-3, 3), rng.randint(-3, 3), Fraction(rng.randint(-6, 6), 2))
        parts = taylor_components(p, at)
        total = Poly.zero(3)
        for part in parts:
            total = total + part
        assert total == p.shift(at)
        # evaluating the shift at x - at recovers p(x) on sample points
        probe = frac_vec(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-2, 2))
        moved = [q - a for q, a in zip(probe, at)]
        assert total.eval(moved) == p.eval(probe)


def test_directional_power_first_and_second_order():
    f = X**2 + Y**2 + Z**2 - 1
    names = ["x", "y", "z", "v1", "v2", "v3"]
    x, y, z, v1, v2, v3 = variables(6)
    assert directional_power(f, 1) == 2 * x * v1 + 2 * y * v2 + 2 * z * v3
    assert directional_power(f, 2) == 2 * v1**2 + 2 * v2**2 + 2 * v3**2
    assert directional_power(f, 3).is_zero
    g = X**3
    assert directional_power(g, 3) == 6 * v1**3
    del names


def test_directional_power_matches_line_restriction():
    # f(p + t v) = sum_k t^k / k! * (k-th directional power at (p, v))
    rng = random.Random(11)
    from math import factorial

    for _ in range(10):
        f = _random_poly(rng, 3, max_deg=3)
        p = frac_vec(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-2, 2))
        v = frac_vec(rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-2, 2))
        line = restrict_to_line(f, p, v)
        coeffs = line.coeffs_in(0)
        for k in range(1, min(len(coeffs), 4)):
            dk = directional_power(f, k)
            expected = coeffs[k].constant_value() * factorial(k)
            assert dk.eval(p + v) == expected


def test_directional_power_rejects_zero_order():
    with pytest.raises(DomainError):
        directional_power(X, 0)


# -- resultants ----------------------------------------------------------


def test_sylvester_resultant_quadratic_example():
    v, t = variables(2)
    res = sylvester_resultant(v**2 - t, v - 1, 0)
    assert res == Poly(2, {(0, 0): 1, (0, 1): -1})


def test_sylvester_resultant_two_linear():
    (v,) = variables(1)
    res = sylvester_resultant(2 * v + 3, 5 * v + 7, 0)
    assert res.constant_value() == Fraction(-1)  # 2*7 - 3*5


def test_sylvester_resultant_detects_common_root():
    (v,) = variables(1)
    p = (v - 2) * (v - 3)
    q = (v - 2) * (v - 5)
    assert sylvester_resultant(p, q, 0).is_zero
    r = (v - 4) * (v - 5)
    assert not sylvester_resultant(p, r, 0).is_zero


def test_sylvester_resultant_vanishes_iff_shared_factor():
    v, t = variables(2)
    p = (v - t) * (v + 1)
    q = (v - t) * (v - 2)
    assert sylvester_resultant(p, q, 0).is_zero
    q2 = (v + t) * (v - 2)
    res = sylvester_resultant(p, q2, 0)
    # res vanishes exactly at t values where roots collide: -t = t or -t = -1
    assert not res.is_zero
    assert res.eval([Fraction(0), Fraction(0)]) == 0
    assert res.eval([Fraction(0), Fraction(3)]) != 0


def test_sylvester_resultant_requires_positive_degree():
    v, t = variables(2)
    with pytest.raises(DomainError):
        sylvester_resultant(t, v - 1, 0)
    with pytest.raises(DomainError):
        sylvester_resultant(Poly.zero(2), v, 0)


# -- division, gcd, square-free -------------------------------------------


def test_divides_basic_examples():
    assert divides(X - Y, X**2 - Y**2)
    assert not divides(X - Y, X**2 + Y**2)
    assert divides(X - Y, Poly.zero(3))
    with pytest.raises(DomainError):
        divides(Poly.zero(3), X)


def test_exact_div_recovers_cofactor():
    f = X**2 - Y**2
    assert exact_div(f, X - Y) == X + Y
    with pytest.raises(DomainError):
        exact_div(X**2 + Y**2, X - Y)


def test_divides_random_products():
    rng = random.Random(3)
    for _ in range(25):
        f = _random_poly(rng, 3, max_deg=2, nonzero=True)
        h = _random_poly(rng, 3, max_deg=2)
        g = f * h
        assert divides(f, g)
        if not h.is_zero:
            assert exact_div(g, f) == h
        assert not divides(f, g + 1) or divides(f, Poly.const(3, 1))


def test_poly_gcd_examples():
    g = poly_gcd((X - Y) ** 2 * (X + Z), (X - Y) * (X + Y))
    assert g == X - Y
    assert poly_gcd(X * Y, Z).constant_value() == 1
    assert poly_gcd(Poly.zero(3), X * Y) == X * Y


def test_poly_gcd_divides_both_inputs():
    rng = random.Random(17)
    for _ in range(15):
        a = _random_poly(rng, 3, max_deg=2, nonzero=True)
        b = _random_poly(rng, 3, max_deg=2, nonzero=True)
        c = _random_poly(rng, 3, max_deg=1, nonzero=True)
        g = poly_gcd(a * c, b * c)
        assert divides(g, a * c)
        assert divides(g, b * c)
        assert divides(c, g) or c.degree() == 0


def test_square_free_part_examples():
    assert square_free_part(X**2 * Y) == X * Y
    assert square_free_part((X - Y) ** 3) == X - Y
    sf = square_free_part((X - Y) ** 2 * (X + Y))
    assert sf == (X - Y) * (X + Y) or sf == -(X - Y) * (X + Y)


def test_square_free_part_with_hints_matches_plain():
    p = (X - Y) ** 3 * (X + Z) ** 2 * (Y + 1)
    plain = square_free_part(p)
    hinted = square_free_part(p, hints=(X - Y, X + Z))
    assert divides(plain, hinted) and divides(hinted, plain)


def test_is_square_free():
    assert is_square_free(X * Y - 1)
    assert not is_square_free(X**2 * Y)
    assert is_square_free(Poly.const(3, 4))


def test_square_free_part_rejects_zero():
    with pytest.raises(DomainError):
        square_free_part(Poly.zero(3))


# -- property tests -------------------------------------------------------

small_fracs = st.fractions(
    min_value=-4, max_value=4, max_denominator=3
)


@st.composite
def polys(draw, nvars=2, max_deg=3, max_terms=5):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        terms[e] = draw(small_fracs)
    return Poly(nvars, terms)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.tuples(small_fracs, small_fracs))
def test_eval_is_ring_homomorphism(p, q, at):
    pt = list(at)
    assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)
    assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_mul_commutes_and_degree_adds(p, q):
    assert p * q == q * p
    if not p.is_zero and not q.is_zero:
        assert (p * q).degree() == p.degree() + q.degree()


@settings(max_examples=40, deadline=None)
@given(polys(nvars=3, max_deg=2, max_terms=4))
def test_double_square_free_is_stable(p):
    if p.is_zero or p.degree() < 1:
        return
    sf = square_free_part(p)
    assert is_square_free(sf)
    assert divides(sf, p)
    assert square_free_part(sf) == sf


# -- helpers ---------------------------------------------------------------


def _random_poly(rng, nvars, max_deg, nonzero=False):
    terms = {}
    for _ in range(rng.randint(0 if not nonzero else 1, 5)):
        e = [0] * nvars
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(nvars)] += 1
        terms[tuple(e)] = Fraction(rng.randint(-5, 5), rng.choice([1, 1, 2, 3]))
    p = Poly(nvars, terms)
    if nonzero and p.is_zero:
        return Poly.const(nvars, 1) + Poly.variable(nvars, 0)
    return p
