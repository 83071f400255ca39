import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from periodconst.poly import GaussianRational, MultivariatePolynomial, parse_rational, rational

VARS = ("x", "y", "z")

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(lambda a, b: GaussianRational(rational(a), rational(b)), small_q, small_q)
exponents = st.tuples(*(st.integers(0, 3) for _ in VARS))


@st.composite
def polys(draw, complex_coeffs=True):
    coeff = gauss if complex_coeffs else small_q.map(lambda q: GaussianRational(rational(q)))
    terms = draw(st.dictionaries(exponents, coeff, max_size=5))
    return MultivariatePolynomial(VARS, terms)


@settings(max_examples=1000)
@given(polys(), polys(), polys())
def test_ring_laws(p, q, r):
    zero = MultivariatePolynomial.zero(VARS)
    one = MultivariatePolynomial.constant(1, VARS)
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + zero == p and p * one == p
    assert p - p == zero
    assert (p * zero) == zero


@given(polys(), polys())
def test_serialize_round_trip(p, q):
    for poly in (p, q, p * q):
        data = json.loads(json.dumps(poly.serialize()))
        assert MultivariatePolynomial.deserialize(data) == poly
        assert MultivariatePolynomial.parse(str(poly), VARS) == poly


@given(polys(complex_coeffs=False), st.lists(polys(complex_coeffs=False), min_size=1, max_size=3))
def test_reduce_lex_identity(p, divisors):
    divisors = [d for d in divisors if d]
    if not divisors:
        return
    quotients, rem = p.reduce_lex(divisors)
    total = rem
    for qt, d in zip(quotients, divisors):
        total = total + qt * d
    assert total == p
    # no remainder term is divisible by a lex-leading monomial
    leads = []
    for d in divisors:
        leads.append(max(d.terms, key=lambda e: e))
    for e in rem.terms:
        assert not any(all(a >= b for a, b in zip(e, lead)) for lead in leads)


@given(polys(), polys())
def test_derivative_is_a_derivation(p, q):
    assert (p * q).diff("x") == p.diff("x") * q + p * q.diff("x")


@given(polys(complex_coeffs=False), st.dictionaries(st.sampled_from(VARS), small_q, min_size=3))
def test_evaluate_is_a_homomorphism(p, point):
    point = {v: rational(x) for v, x in point.items()}
    q = p * p + p
    assert q.evaluate(point) == p.evaluate(point) * p.evaluate(point) + p.evaluate(point)


def test_parser_basics():
    p = MultivariatePolynomial.parse("1/8*i*(3*i+2*x)", VARS)
    assert p.coefficient((0, 0, 0)) == GaussianRational(rational("-3/8"))
    assert p.coefficient((1, 0, 0)) == GaussianRational(0, rational("1/4"))
    assert MultivariatePolynomial.parse("(x+y)^2", VARS) == MultivariatePolynomial.parse(
        "x^2 + 2*x*y + y^2", VARS)
    with pytest.raises(ValueError, match="unknown variable 'w'"):
        MultivariatePolynomial.parse("x + w", VARS)
    with pytest.raises(ValueError, match="column"):
        MultivariatePolynomial.parse("x + * y", VARS)


def test_rationals_are_exact():
    assert parse_rational("-6/4") == rational(Fraction(-3, 2))
    with pytest.raises(ValueError, match="zero denominator"):
        parse_rational("3/0")
    with pytest.raises(TypeError):
        rational(0.5)


def test_deserialize_reports_the_bad_term():
    data = {"variables": ["x"], "terms": [{"exponents": [1], "re": "1"}, {"exponents": [2], "re": "3/0"}]}
    with pytest.raises(ValueError, match="term 1"):
        MultivariatePolynomial.deserialize(data)
