import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import printed
from conftest import case_coeffs, case_sequence, poly, proportional
from periodconst.period import (IndeterminateError, PeriodConstantSequence, compute_normal_form, compute_tau,
                                reduce_tau_sequence, tau_at_point)
from periodconst.poly import rational
from periodconst.system import CASE_NAMES, PlanarPolySystem, complexify, define_builtin


def taus_of(xdot, ydot, n=4):
    return compute_tau(complexify(PlanarPolySystem.from_strings(xdot, ydot)), n).raw


def test_linear_center_is_isochronous():
    assert all(not t for t in compute_tau(complexify(define_builtin("linear")), 5).raw)


def test_quadratic_isochrone():
    assert all(not t for t in taus_of("-y + x^2 - y^2", "x + 2*x*y"))


def test_nonisochronous_quadratic():
    # x' = -y, y' = x + x^2: the period grows with amplitude
    tau = taus_of("-y", "x + x^2", 2)
    assert tau[0] and tau[0].constant_value().re < 0


def test_seed_and_diagonal_entries():
    _, coeffs = case_coeffs("lambda1")
    table = compute_normal_form(coeffs, 6)
    assert table.c_entry(1, 0) == 1 and table.c_entry(0, 1) == 0
    for k in range(1, 3):
        assert not table.c_entry(k + 1, k) and not table.d_entry(k + 1, k)


@pytest.mark.parametrize("name", CASE_NAMES)
def test_conjugate_symmetry(name):
    _, coeffs = case_coeffs(name)
    table = compute_normal_form(coeffs, 6, symmetric=False)
    for key, c in table.c.items():
        assert table.d[key] == c.conj(), key


@pytest.mark.parametrize("name", CASE_NAMES)
def test_reality_and_certificates(name):
    seq = case_sequence(name)
    for t in seq.raw + seq.reduced:
        assert t.is_real and not t.imag_part
    seq.verify_certificates()
    for k in range(2, seq.depth + 1):
        cert = seq.certificates[k - 1]
        rebuilt = seq.reduced[k - 1] / cert.scale
        for i, h in cert.multipliers.items():
            rebuilt = rebuilt + h * seq.reduced[i]
        assert rebuilt == seq.raw[k - 1]


def test_lambda1_reduced_matches_printed():
    seq = case_sequence("lambda1")
    for k, text in printed.LAMBDA1.items():
        assert proportional(seq.reduced[k - 1], poly(text, seq.parameters)) is not None, k


def test_lambda1_raw_tau2_and_multiplier():
    seq = case_sequence("lambda1")
    V = seq.parameters
    c_raw = proportional(seq.raw[1], poly(printed.LAMBDA1_RAW_TAU2, V))
    c_1 = proportional(seq.reduced[0], poly(printed.LAMBDA1[1], V))
    assert c_raw is not None and c_1 is not None
    h = seq.certificates[1].multipliers[0]
    # raw = h * reduced_1 + ...: the multiplier is k21 rescaled by the raw and tau_1 scalars
    assert h == poly(printed.LAMBDA1_K21, V) * (c_raw / c_1)
    printed_red = poly(printed.LAMBDA1_RAW_TAU2, V) - poly(printed.LAMBDA1_K21, V) * poly(printed.LAMBDA1[1], V)
    assert proportional(printed_red, poly(printed.LAMBDA1[2], V)) is not None


@pytest.mark.parametrize("name,table", [("lambda2", printed.LAMBDA2), ("lambda3", printed.LAMBDA3),
                                        ("lambda4", printed.LAMBDA4)])
def test_other_cases_match_printed(name, table):
    seq = case_sequence(name)
    for k, text in table.items():
        assert proportional(seq.reduced[k - 1], poly(text, seq.parameters)) is not None, (name, k)


def test_lambda4_tau2_slice():
    seq = case_sequence("lambda4")
    V = seq.parameters
    zero = rational(0)
    slice_ = seq.remainder(2).substitute({"a2": zero, "a4": zero})
    assert slice_ == poly("-64/27*(1+a6^2)^2", V)


def _lambda1_variety_point(rng):
    """Exact rational common zero of reduced tau_1, tau_2 (both linear in a pivot)."""
    seq = case_sequence("lambda1")
    while True:
        a7 = rational(f"{rng.randint(-40, 40)}/{rng.randint(1, 9)}")
        a2 = rational(f"{rng.randint(-40, 40)}/{rng.randint(1, 9)}")
        t2 = seq.reduced[1].substitute({"a7": a7, "a2": a2})
        c1, c0 = t2.coefficients_in("a4")[1], t2.coefficients_in("a4")[0]
        if t2.degree("a4") != 1 or not c1.is_constant():
            continue
        a4 = (-c0.constant_value() / c1.constant_value()).re
        t1 = seq.reduced[0].substitute({"a7": a7, "a2": a2, "a4": a4})
        lin = t1.coefficients_in("a3")
        a3 = (-lin[0].constant_value() / lin[1].constant_value()).re
        return {"a3": a3, "a7": a7, "a2": a2, "a4": a4}


def test_reduction_agrees_on_the_variety():
    seq = case_sequence("lambda1")
    rng = random.Random(7)
    for _ in range(50):
        pt = _lambda1_variety_point(rng)
        assert seq.reduced[0].evaluate(pt) == 0 and seq.reduced[1].evaluate(pt) == 0
        assert seq.raw[1].evaluate(pt) == 0
        # on the variety of tau_1, tau_2 the raw tau_3 equals the unscaled remainder
        assert seq.raw[2].evaluate(pt) == seq.remainder(3).evaluate(pt)
        # so the first nonvanishing index agrees between raw and reduced
        assert (seq.raw[2].evaluate(pt) == 0) == (seq.reduced[2].evaluate(pt) == 0)


@settings(max_examples=20)
@given(st.sampled_from(CASE_NAMES), st.lists(st.fractions(-6, 6, max_denominator=9), min_size=4, max_size=4))
def test_tau_at_point_matches_symbolic(name, values):
    cond, coeffs = case_coeffs(name)
    seq = case_sequence(name)
    point = {v: rational(x) for v, x in zip(cond.free, values)}
    got = tau_at_point(coeffs, point, 3)
    for k in range(3):
        assert got[k].exact and got[k].value == seq.raw[k].evaluate(point).re


def test_tau_at_point_numeric_agrees_with_exact():
    _, coeffs = case_coeffs("lambda1")
    exact = tau_at_point(coeffs, {"a3": rational("1/4"), "a7": rational(-2), "a2": rational("5/8"),
                                  "a4": rational("-3/2")}, 4)
    # decimal strings take the floating path
    approx = tau_at_point(coeffs, {"a3": "0.25", "a7": "-2", "a2": "0.625", "a4": "-1.5"}, 4, precision=40)
    with mpmath.workdps(80):
        for e, a in zip(exact, approx):
            assert not a.exact
            assert abs(mpmath.mpf(int(e.value.numerator)) / int(e.value.denominator) - a.value) <= a.error


def test_origin_read_off():
    _, coeffs = case_coeffs("lambda1")
    tau = tau_at_point(coeffs, dict.fromkeys(("a3", "a7", "a2", "a4"), 0), 1)
    assert tau[0].value == -4


def test_sign_demand_below_precision_is_indeterminate():
    _, coeffs = case_coeffs("lambda1")
    # a3 = -16/3 solves tau_1 = 0 at a7 = a2 = 0; 30 digits leave |tau_1| below the 20-digit floor
    a3 = "-5." + "3" * 30
    tau = tau_at_point(coeffs, {"a3": a3, "a7": "0.0", "a2": "0.0", "a4": "0.0"}, 1, precision=20)
    assert abs(tau[0].value) < 1e-29
    with pytest.raises(IndeterminateError):
        tau[0].sign()


def test_reduce_is_identity_when_independent():
    V = ("a", "b")
    seq = reduce_tau_sequence(PeriodConstantSequence(V, [poly("3*a", V), poly("2*b^2 + 4", V)]), V)
    assert proportional(seq.reduced[1], poly("b^2 + 2", V)) is not None
    assert not seq.certificates[1].multipliers or all(not h for h in seq.certificates[1].multipliers.values())
