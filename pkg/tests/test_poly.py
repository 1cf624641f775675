from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from combideal.errors import DomainError, ParseError, StructuralError
from combideal.poly import (GRLEX, LEX, MonomialOrder, Polynomial, compare, divide, dot,
                            format_poly, parse_poly, remainder, s_polynomial)

P = lambda text, n=2: parse_poly(text, n)


def test_orders_on_small_monomials():
    assert compare((1, 0), (0, 2), LEX) == 1
    assert compare((1, 0), (0, 2), GRLEX) == -1
    assert compare((1, 1), (1, 1), GRLEX) == 0
    # grlex breaks degree ties lexicographically
    assert compare((1, 1, 0), (0, 2, 0), GRLEX) == 1


def test_priority_reorders_variables():
    order = MonomialOrder("lex", (1, 0))
    assert compare((1, 0), (0, 1), order) == -1
    with pytest.raises(DomainError):
        MonomialOrder("lex", (0, 0))
    with pytest.raises(DomainError):
        MonomialOrder("revlex")


def test_compare_rejects_length_mismatch():
    with pytest.raises(StructuralError):
        compare((1,), (1, 0))


def test_arithmetic_is_exact():
    f = P("1/2*x1 + 1/3")
    assert (f * 6) == P("3*x1 + 2")
    assert (f - f).is_zero()
    assert (P("x1 + x2") ** 2) == P("x1^2 + 2*x1*x2 + x2^2")
    assert P("x1*x2 - 1").evaluate([Fraction(2), Fraction(1, 2)]) == 0


def test_floats_are_rejected():
    with pytest.raises(DomainError):
        Polynomial.constant(1, 0.5)


def test_mixed_variable_counts_fail():
    with pytest.raises(StructuralError):
        P("x1", 1) + P("x1", 2)


def test_leading_terms_follow_the_order():
    f = P("x1 + x2^2")
    assert f.leading_monomial(GRLEX) == (0, 2)
    assert f.leading_monomial(LEX) == (1, 0)
    with pytest.raises(DomainError):
        Polynomial.zero(2).leading_monomial()


def test_division_identity_and_first_divisor_rule():
    f = P("x1*x2^2 - x2^3")
    g1, g2 = P("x1*x2 - 1"), P("x2^2 - 1")
    q, r = divide(f, [g1, g2], GRLEX)
    assert q == [P("x2"), P("-x2")] and r.is_zero()
    q, r = divide(f, [g2, g1], GRLEX)
    assert q == [P("x1 - x2"), P("0")] and r == P("x1 - x2")
    assert dot(q, [g2, g1], 2) + r == f


def test_division_by_zero_polynomial():
    with pytest.raises(DomainError):
        divide(P("x1"), [Polynomial.zero(2)])


def test_s_polynomial_cancels_leading_terms():
    f, g = P("x1*x2 - 1"), P("x2^2 - 1")
    s = s_polynomial(f, g, GRLEX)
    assert s == P("-x2 + x1")
    with pytest.raises(DomainError):
        s_polynomial(f, Polynomial.zero(2))


def test_format_is_canonical_grlex():
    assert format_poly(P("1 - x2 + 3/2*x1^2*x3", 3)) == "3/2*x1^2*x3 - x2 + 1"
    assert format_poly(Polynomial.zero(2)) == "0"
    assert format_poly(P("-x1")) == "-x1"


def test_parser_features():
    assert P("2(x1 + 1)") == P("2*x1 + 2")
    assert P("-(x1 - x2)^2/4") == P("-1/4*x1^2 + 1/2*x1*x2 - 1/4*x2^2")
    assert parse_poly("x3").nvars == 3


@pytest.mark.parametrize("text, col", [("x1 +", 5), ("x1 $ 2", 4), ("(x1", 4), ("x1/x2", 3)])
def test_parser_errors_carry_positions(text, col):
    with pytest.raises(ParseError) as info:
        parse_poly(text, 2, line=7)
    assert info.value.line == 7 and info.value.column == col


def test_parser_rejects_out_of_range_variable():
    with pytest.raises(ParseError):
        parse_poly("x3", 2)


monomials = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.dictionaries(monomials, coeffs, max_size=6).map(lambda d: Polynomial(3, d))


@settings(max_examples=60, deadline=None)
@given(polys)
def test_print_parse_round_trip(f):
    assert parse_poly(format_poly(f), 3) == f


@settings(max_examples=60, deadline=None)
@given(polys, st.lists(polys.filter(bool), min_size=1, max_size=3),
       st.sampled_from([LEX, GRLEX]))
def test_division_identity_and_irreducible_remainder(f, basis, order):
    q, r = divide(f, basis, order)
    assert dot(q, basis, 3) + r == f
    leads = [g.leading_monomial(order) for g in basis]
    assert not any(all(a <= b for a, b in zip(lm, m)) for lm in leads for m in r.terms)
    assert remainder(f, basis, order) == r
    if order is GRLEX:
        assert r.degree() <= f.degree()


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_ring_laws(f, g):
    assert f * g == g * f
    assert (f + g) - g == f
    pt = [Fraction(1, 2), Fraction(-2), Fraction(3)]
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt)
