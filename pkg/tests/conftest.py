import functools
import os

from hypothesis import HealthCheck, settings

from periodconst.period import compute_tau, reduce_tau_sequence
from periodconst.poly import MultivariatePolynomial
from periodconst.system import apply_center_condition, builtin_condition, complexify, define_builtin

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def case_coeffs(name):
    cond = builtin_condition(name)
    return cond, apply_center_condition(complexify(define_builtin("z2-quintic")), cond)


@functools.lru_cache(maxsize=None)
def case_sequence(name, depth=4):
    cond, coeffs = case_coeffs(name)
    return reduce_tau_sequence(compute_tau(coeffs, depth), cond.free)


def poly(text, variables):
    return MultivariatePolynomial.parse(text, tuple(variables))


def proportional(p, q):
    """Nonzero rational ``c`` with ``p == c * q``, else ``None``."""
    if not p or not q:
        return None
    p = p.with_variables(q.variables)
    exps, cq = q.leading_term()
    c = p.coefficient(exps) / cq
    if not c:
        return None
    return c if p == q * c else None


@functools.lru_cache(maxsize=None)
def lambda4_report():
    """Default lambda4 analysis (exact tier plus the order-2 slice search)."""
    from periodconst.pipeline import case_spec, run_case

    return run_case(case_spec("lambda4"))
