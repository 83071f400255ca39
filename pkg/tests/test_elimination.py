import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy.polys.subresultants_qq_zz import sylvester

import printed
from conftest import case_sequence, poly, proportional
from periodconst.elimination import (BudgetExceeded, CommonFactorError, poly_gcd, resultant, resultant_bareiss,
                                     run_elimination_chain, squarefree_and_content)
from periodconst.poly import GaussianRational, MultivariatePolynomial, rational

V = ("x", "y", "z")

ints = st.integers(-9, 9)


@st.composite
def in_x(draw, max_deg=3):
    """Polynomial with positive degree in ``x`` and small coefficients in y, z."""
    deg = draw(st.integers(1, max_deg))
    terms = draw(st.dictionaries(st.tuples(st.integers(0, deg), st.integers(0, 2), st.integers(0, 1)),
                                 ints.filter(bool).map(lambda c: GaussianRational(c)), max_size=6))
    terms[(deg, 0, 0)] = GaussianRational(draw(ints.filter(bool)))
    return MultivariatePolynomial(V, terms)


points = st.fixed_dictionaries({"y": st.fractions(-5, 5, max_denominator=4), "z": st.integers(-4, 4)})


def specialize(p, pt):
    return p.substitute({k: rational(v) for k, v in pt.items()})


@settings(max_examples=200)
@given(in_x(), in_x(), points)
def test_resultant_specializes(p, q, pt):
    ps, qs = specialize(p, pt), specialize(q, pt)
    assume(ps.degree("x") == p.degree("x") and qs.degree("x") == q.degree("x"))
    r = resultant(p, q, "x")
    assert specialize(r, pt) == resultant_bareiss(ps, qs, "x")


@settings(max_examples=200)
@given(in_x(2), in_x(2), in_x(2))
def test_resultant_is_multiplicative(p1, p2, q):
    assert resultant(p1 * p2, q, "x") == resultant(p1, q, "x") * resultant(p2, q, "x")


@given(in_x(), in_x())
def test_resultant_symmetry(p, q):
    sign = (-1) ** (p.degree("x") * q.degree("x"))
    assert resultant(p, q, "x") == resultant(q, p, "x").scale(sign)


@settings(max_examples=40)
@given(in_x(), in_x())
def test_resultant_matches_sympy(p, q):
    x, y, z = sympy.symbols("x y z")
    # determinant of sympy's Sylvester matrix (sympy.resultant mis-signs some inputs, e.g. x + 1 and x^3)
    f, g = (sympy.sympify(str(t).replace("^", "**")) for t in (p, q))
    ref = sylvester(f, g, x, 1).det()
    ours = sympy.sympify(str(resultant(p, q, "x")).replace("^", "**"))
    assert sympy.expand(ref - ours) == 0


@given(in_x(2), in_x(2), st.integers(-3, 3))
def test_shared_root_makes_resultant_vanish(a, b, r):
    lin = poly(f"x - ({r})", V)
    assert not resultant(a * lin, b * lin, "x")


@settings(max_examples=50)
@given(in_x(2), in_x(2), points)
def test_vanishing_means_shared_root(p, q, pt):
    ps, qs = specialize(p, pt), specialize(q, pt)
    assume(ps.degree("x") == p.degree("x") and qs.degree("x") == q.degree("x"))
    vanishes = not specialize(resultant(p, q, "x"), pt)
    assert vanishes == (poly_gcd(ps, qs).degree("x") > 0)


def test_gcd_basics():
    f = poly("(x - y)^2*(x + 2*z)", V)
    g = poly("(x - y)*(x^2 + 1)", V)
    assert proportional(poly_gcd(f, g), poly("x - y", V)) is not None
    assert poly_gcd(poly("x^2 + 1", V), poly("x + 1", V)).is_constant()


def test_squarefree_and_content():
    p = poly("6*y^3*(x - 1)^2*(x + 2)", V)
    content, mono, sf = squarefree_and_content(p, "x")
    assert content == 6 and mono == (0, 3, 0)
    assert proportional(sf, poly("(x - 1)*(x + 2)", V)) is not None


def test_two_line_chain():
    trace = run_elimination_chain([poly("x + y - 3", ("x", "y")), poly("x - y - 1", ("x", "y"))], ["y"])
    assert len(trace.terminal) == 1
    assert proportional(trace.terminal[0], poly("2*x - 4", ("x", "y"))) is not None
    assert all(step.reconstructs() for step in trace.steps)


def test_chain_reports_common_factor():
    W = ("x", "y")
    with pytest.raises(CommonFactorError) as info:
        run_elimination_chain([poly("(x - y)*(x + 1)", W), poly("(x - y)*(y + 3)", W)], ["y"])
    assert info.value.trace.status == "common factor detected"


def test_budget_exceeded_keeps_the_trace():
    seq = case_sequence("lambda4")
    with pytest.raises(BudgetExceeded) as info:
        run_elimination_chain(seq.reduced, ("a3", "a6", "a2"), budget_seconds=0.5)
    trace = info.value.trace
    assert trace.status == "budget exceeded"
    assert trace.to_dict()["status"] == "budget exceeded"


def test_size_budget():
    seq = case_sequence("lambda4")
    with pytest.raises(BudgetExceeded, match="size"):
        run_elimination_chain(seq.reduced[:3], ("a3",), budget_bytes=10)


def test_lambda4_r23_restricted():
    seq = case_sequence("lambda4")
    V4 = seq.parameters
    trace = run_elimination_chain(seq.reduced[:3], ("a3", "a6"))
    (terminal,) = trace.terminal
    # the a3 step leaves R12, R13; the a6 step combines them
    r = trace.steps[-1].raw.substitute({"a4": rational(0)})
    assert proportional(r, poly(printed.LAMBDA4_R1213_A4_0, V4)) is not None
    assert terminal.degree("a2") > 0
