import math

import numpy as np
import pytest

from periodconst.oracle import (IllConditionedFit, NotACenterError, NumericField, fit_period_series,
                                geometric_ladder, integrate_return_time, sample_periods, scan_critical_periods)
from periodconst.period import tau_at_point
from periodconst.system import (NonCanonicalSystemError, PlanarPolySystem, apply_center_condition,
                                builtin_condition, complexify, define_builtin)


def case_system(name):
    return apply_center_condition(define_builtin("z2-quintic"), builtin_condition(name))


@pytest.mark.parametrize("h", [0.01, 0.05, 0.1, 0.2])
def test_linear_period_is_two_pi(h):
    s = integrate_return_time(define_builtin("linear"), {}, h)
    assert abs(s.period - 2 * math.pi) < 1e-10


def test_lambda1_origin_p2():
    origin = dict.fromkeys(("a3", "a7", "a2", "a4"), 0)
    samples = sample_periods(case_system("lambda1"), origin, geometric_ladder(0.02, 0.15, 12), tol=1e-12)
    fit = fit_period_series(samples, 4)
    assert abs(fit.p(1) - 4 * math.pi) / (4 * math.pi) < 1e-4


@pytest.mark.parametrize("name,point", [
    ("lambda4", {"a3": "-1", "a6": "1/2", "a2": "1/3", "a4": "2"}),
    ("lambda2", {"a3": "1/2", "a6": "-1/4", "a7": "1", "a9": "-1"}),
])
def test_p2_is_minus_pi_tau1(name, point):
    system = case_system(name)
    tau1 = float(tau_at_point(complexify(system), point, 1)[0])
    samples = sample_periods(system, point, geometric_ladder(0.01, 0.08, 12))
    fit = fit_period_series(samples, 4)
    assert fit.p(1) == pytest.approx(-math.pi * tau1, rel=1e-4)


def test_point_symmetric_field_has_no_cubic_term():
    duffing = PlanarPolySystem.from_strings("-y", "x + x^3")
    samples = sample_periods(duffing, {}, geometric_ladder(0.02, 0.15, 12))
    with_odd = fit_period_series(samples, 4)
    even = fit_period_series(samples, 4, odd_terms=False)
    # for x'' + x + x^3 = 0 the period is 2 pi (1 - 3/8 h^2 + ...)
    assert even.p(1) == pytest.approx(-3 * math.pi / 4, rel=1e-7)
    assert abs(with_odd.odd[0]) < 1e-5
    assert with_odd.p(1) == pytest.approx(even.p(1), rel=1e-6)


def test_fit_needs_enough_samples():
    samples = sample_periods(define_builtin("linear"), {}, geometric_ladder(0.02, 0.1, 5))
    with pytest.raises(ValueError, match="samples"):
        fit_period_series(samples, 4)


def test_ill_conditioned_fit_is_refused():
    samples = sample_periods(define_builtin("linear"), {}, np.linspace(0.1, 0.1001, 12))
    with pytest.raises(IllConditionedFit):
        fit_period_series(samples, 5)


def test_escaping_orbit_is_not_a_center():
    saddle_like = PlanarPolySystem.from_strings("-y + 40*x^2", "x + 40*x*y + 40*y^2")
    with pytest.raises(NotACenterError):
        integrate_return_time(saddle_like, {}, 0.2)


def test_non_canonical_field_is_refused():
    with pytest.raises(NonCanonicalSystemError):
        NumericField(PlanarPolySystem.from_strings("-2*y", "x"))


def test_critical_period_scan():
    system = case_system("lambda1")
    # tau_1 > 0 and tau_2 < 0 here: the period first decreases, then increases
    found = scan_critical_periods(system, {"a3": "-5.636", "a7": 0, "a2": 0, "a4": 0}, (0.03, 0.2),
                                  resolution=12)
    assert len(found) == 1 and 0.09 < found[0] < 0.115
    # with tau_1 < 0 as well the period is monotone on the same range
    assert scan_critical_periods(system, {"a3": "-5", "a7": 0, "a2": 0, "a4": 0}, (0.03, 0.2),
                                 resolution=6) == []
