import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import printed
from conftest import poly
from periodconst.poly import MultivariatePolynomial, rational
from periodconst.realroots import (PolynomialSystem, SturmChain, count_common_real_roots, count_real_roots,
                                   isolate_real_roots, jacobian_det, multistart_solve, presolve_linear,
                                   sweep_real_roots)

X = ("x",)


def from_roots(roots, extra_quadratics=()):
    p = poly("1", X)
    for r, mult in roots:
        p = p * poly(f"x - ({r})", X) ** mult
    for c in extra_quadratics:
        p = p * poly(f"x^2 + {c}", X)
    return p


roots_st = st.lists(st.tuples(st.fractions(-30, 30, max_denominator=6), st.integers(1, 3)),
                    max_size=6, unique_by=lambda t: t[0])


@settings(max_examples=200)
@given(roots_st, st.lists(st.integers(1, 50), max_size=2), st.fractions(-40, 40, max_denominator=3),
       st.fractions(0, 40, max_denominator=3))
def test_sturm_count_matches_construction(roots, quads, lo, width):
    p = from_roots(roots, quads)
    if p.degree("x") == 0:
        return
    distinct = sorted(r for r, _ in roots)
    assert count_real_roots(p, "x") == len(distinct)
    hi = lo + width
    chain = SturmChain.from_polynomial(p, "x")
    assert chain.count(rational(lo), rational(hi)) == sum(1 for r in distinct if lo < r <= hi)
    # sampling: sign changes on a grid that separates the simple roots
    simple = [r for r, m in roots if m % 2]
    if simple and len(distinct) == len(simple):
        grid = sorted({r - rational("1/100") for r in distinct} | {distinct[-1] + 1})
        vals = [p.evaluate({"x": rational(g)}).re for g in grid]
        changes = sum(1 for a, b in zip(vals, vals[1:]) if a * b < 0)
        assert changes == len(distinct)


def test_isolation_basics():
    ivs = isolate_real_roots(poly("x^2 - 2", X), "x")
    assert len(ivs) == 2
    r = ivs[1].refine(rational(1) / 10 ** 30)
    with mpmath.workdps(40):
        assert abs(mpmath.mpf(int(r.lo.numerator)) / int(r.lo.denominator) - mpmath.sqrt(2)) < mpmath.mpf(10) ** -29
    five = isolate_real_roots(from_roots([(k, 1) for k in range(1, 6)]), "x")
    assert len(five) == 5
    for k, iv in enumerate(five, start=1):
        assert iv.lo <= k <= iv.hi


def test_printed_lambda4_polynomial_has_only_root_zero():
    p = poly(printed.LAMBDA4_R1213_A4_0, ("a2",))
    ivs = isolate_real_roots(p, "a2")
    assert len(ivs) == 1 and ivs[0].lo <= 0 <= ivs[0].hi
    assert p.evaluate({"a2": rational(0)}) == 0


def test_sweep_of_a_circle():
    V = ("x", "y")
    cells = sweep_real_roots(poly("x^2 + y^2 - 1", V), "x", "y")
    summary = [(c.critical, c.roots) for c in cells]
    assert summary == [(False, 0), (True, 1), (False, 2), (True, 1), (False, 0)]
    assert [c.lo for c in cells if c.critical] == [-1, 1]


def test_sweep_of_a_point():
    V = ("x", "y")
    cells = sweep_real_roots(poly("x^2 + y^2", V), "x", "y")
    assert [(c.critical, c.roots) for c in cells] == [(False, 0), (True, 1), (False, 0)]


def test_sweep_with_monomial_factor():
    V = ("x", "y")
    cells = sweep_real_roots(poly("y*(x^2 + 1)", V), "x", "y")
    assert any(c.whole_fiber for c in cells)
    assert all(c.roots == 0 for c in cells if not c.whole_fiber)


def test_multistart_circle_and_line():
    V = ("x", "y")
    system = PolynomialSystem([poly("x^2 + y^2 - 4", V), poly("x - y", V)])
    pts = multistart_solve(system, (-5, 5), starts=64, precision=30)
    assert len(pts) == 2
    with mpmath.workdps(30):
        for p in pts:
            assert abs(abs(p.values["x"]) - mpmath.sqrt(2)) < mpmath.mpf(10) ** -20
            assert not p.degenerate


def test_presolve_linear_keeps_the_zero_set():
    V = ("x", "y", "z")
    polys = [poly("x + y^2 - 1", V), poly("z - 2*y", V), poly("y^2 + z^2 - 5", V)]
    reduced = presolve_linear(polys, V)
    assert reduced.dimension == 1
    pts = multistart_solve(reduced, (-5, 5), starts=32, precision=30)
    assert len(pts) == 2
    full = PolynomialSystem(polys, V)
    lifted = reduced.lift(np.array([[float(v) for v in p.values.values()] for p in pts]))
    assert np.abs(full.batch(lifted)).max() < 1e-12


def test_jacobian_modes_agree():
    V = ("x", "y")
    polys = [poly("x^3 - 3*x*y + 1", V), poly("y^2 + x - 2", V)]
    pt = ["0.7", "-1.3"]
    a = jacobian_det(polys, V, pt, "symbolic", 40)
    b = jacobian_det(polys, V, pt, "finite-difference", 40)
    with mpmath.workdps(40):
        exact = (3 * mpmath.mpf("0.7") ** 2 - 3 * mpmath.mpf("-1.3")) * 2 * mpmath.mpf("-1.3") + 3 * mpmath.mpf("0.7")
        assert abs(a.value - exact) <= a.error + mpmath.mpf(10) ** -35
        assert abs(b.value - exact) <= b.error + mpmath.mpf(10) ** -10


def test_multistart_rejects_non_square():
    V = ("x", "y")
    with pytest.raises(ValueError, match="square"):
        multistart_solve(PolynomialSystem([poly("x", V)], V), (-1, 1), 4)


@pytest.mark.parametrize("seed", range(10))
def test_elimination_and_multistart_agree(seed):
    rng = random.Random(seed)
    V = ("x", "y")
    r = rng.randint(1, 9)
    a, b, c = rng.randint(-3, 3) or 1, rng.randint(-3, 3), rng.randint(-6, 6)
    polys = [poly(f"x^2 + y^2 - {r}", V), poly(f"{a}*x + {b}*y + {c}", V)]
    # distance from the origin to the line decides 0, 1 or 2 intersections
    d2, r2 = rational(c * c) / (a * a + b * b), rational(r)
    expected = 2 if d2 < r2 else (1 if d2 == r2 else 0)
    both = count_common_real_roots(polys, "both", order=("y",), box=(-10, 10), starts=128, precision=30)
    assert both.count == expected
    assert both.verdict != "unresolved"


def test_elimination_zero_count_is_a_proof():
    V = ("x", "y")
    res = count_common_real_roots([poly("x^2 + y^2 + 1", V), poly("x - y", V)], "elimination", order=("y",))
    assert res.count == 0 and res.tier == "proof"


def test_zero_polynomial_is_rejected():
    with pytest.raises(ValueError):
        isolate_real_roots(MultivariatePolynomial.zero(X), "x")
