"""Complex period constants from the normal-form recursion.

For ``dz/dT = Z(z, w)``, ``dw/dT = -W(z, w)`` we build

    f = z + sum c'_{kj} z^k w^j,     g = w + sum d'_{kj} w^k z^j

layer by layer in ``k + j``.  With ``m = k - alpha + 1``, ``n = j - beta + 1``
the update for an entry reads

    (j + 1 - k) c'_{kj} = sum_{m,n} [m a_{k-m+1, j-n} - n b_{j-n+1, k-m}] c'_{mn}

and on the resonant diagonal ``k = j + 1`` the same sum is the obstruction
``p'_j`` (``q'_j`` for ``d'`` with ``a`` and ``b`` swapped).  The complex
period constant is ``tau_j = p'_j + q'_j``.

The recursion is written once, generically: it only needs ``+``, ``*``,
multiplication and division by Python ints, and a conjugation function, so it
runs on symbolic polynomials, exact Gaussian rationals, mpmath numbers and
numpy arrays alike.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import mpmath
import numpy as np

from .poly import GaussianRational, MultivariatePolynomial, rational
from .system import ComplexSystemCoefficients

log = logging.getLogger(__name__)


class InternalConsistencyError(RuntimeError):
    """An identity that must hold by construction failed (engine bug)."""


class IndeterminateError(ArithmeticError):
    """Working precision does not determine the requested sign."""


# -- the recursion ------------------------------------------------------------

def _conj(x):
    if isinstance(x, (MultivariatePolynomial, GaussianRational)):
        return x.conj()
    if isinstance(x, np.ndarray):
        return np.conj(x)
    return x.conjugate()


def _obstruction_sum(k, j, table, a, b, max_nl):
    """sum [m a_{k-m+1, j-n} - n b_{j-n+1, k-m}] * table_{mn} over known entries."""
    s = k + j
    acc = None
    lo = max(1, s + 1 - max_nl)
    for (m, n), cmn in table.items():
        t = m + n
        if t < lo or t > s - 1:
            continue
        coef = None
        ak = (k - m + 1, j - n)
        if m and ak in a:
            coef = a[ak] * m
        bk = (j - n + 1, k - m)
        if n and bk in b:
            term = b[bk] * n
            coef = -term if coef is None else coef - term
        if coef is None:
            continue
        prod = coef * cmn
        acc = prod if acc is None else acc + prod
    return acc


def normal_form_recursion(a: Mapping, b: Mapping, level: int, one, zero,
                          symmetric: bool = False, on_layer: Callable | None = None):
    """Run the layered recursion through ``k + j <= level``.

    Returns ``(c, d, p, q)``; ``c``/``d`` hold only nonzero-structure entries
    (missing keys are zero), ``p[j]``/``q[j]`` for every ``j`` with
    ``2j + 1 <= level + 1``.  With ``symmetric=True`` the ``d`` side is taken
    as the entrywise conjugate of ``c`` (valid for real systems).
    """
    max_nl = max((k + j for k, j in a), default=2)
    c: dict = {(1, 0): one}
    d: dict = {(1, 0): one}
    p: dict = {}
    q: dict = {}
    for s in range(2, level + 2):
        for k in range(s + 1):
            j = s - k
            if k == j + 1:
                pj = _obstruction_sum(k, j, c, a, b, max_nl)
                p[j] = zero if pj is None else pj
                if symmetric:
                    q[j] = _conj(p[j])
                else:
                    qj = _obstruction_sum(k, j, d, b, a, max_nl)
                    q[j] = zero if qj is None else qj
                continue
            if s > level:
                continue
            cv = _obstruction_sum(k, j, c, a, b, max_nl)
            if cv is not None:
                c[(k, j)] = cv / (j + 1 - k)
            if not symmetric:
                dv = _obstruction_sum(k, j, d, b, a, max_nl)
                if dv is not None:
                    d[(k, j)] = dv / (j + 1 - k)
        if symmetric:
            for key, val in list(c.items()):
                if key[0] + key[1] == s:
                    d[key] = _conj(val)
        if on_layer is not None:
            on_layer(s)
    return c, d, p, q


@dataclass
class NormalFormTable:
    """``c'``, ``d'`` through ``level`` plus the obstructions ``p'``, ``q'``."""

    parameters: tuple[str, ...]
    c: dict
    d: dict
    p: dict
    q: dict
    level: int

    def c_entry(self, k: int, j: int):
        return self._get(self.c, k, j)

    def d_entry(self, k: int, j: int):
        return self._get(self.d, k, j)

    def _get(self, table, k, j):
        if k < 0 or j < 0 or (k == j + 1 and (k, j) != (1, 0)):
            return MultivariatePolynomial.zero(self.parameters)
        if k + j > self.level:
            raise KeyError(f"entry ({k}, {j}) beyond computed level {self.level}")
        if (k, j) == (1, 0):
            return MultivariatePolynomial.constant(1, self.parameters)
        return table.get((k, j)) or MultivariatePolynomial.zero(self.parameters)


def _symbolic_tables(coeffs: ComplexSystemCoefficients):
    a = {kj: v for kj, v in coeffs.a.items() if v}
    b = {kj: v.conj() for kj, v in a.items()}
    return a, b


def compute_normal_form(coeffs: ComplexSystemCoefficients, max_level: int,
                        symmetric: bool = False) -> NormalFormTable:
    """Symbolic ``c'``/``d'`` through ``k + j <= max_level``."""
    if max_level < 1:
        raise ValueError("max_level must be positive")
    a, b = _symbolic_tables(coeffs)
    params = coeffs.parameters
    one = MultivariatePolynomial.constant(1, params)
    zero = MultivariatePolynomial.zero(params)
    t0 = time.perf_counter()
    c, d, p, q = normal_form_recursion(
        a, b, max_level, one, zero, symmetric=symmetric,
        on_layer=lambda s: log.debug("layer %d done after %.2fs", s, time.perf_counter() - t0))
    c.pop((1, 0), None)
    d.pop((1, 0), None)
    return NormalFormTable(params, c, d, p, q, max_level)


# -- period constant sequences ------------------------------------------------

@dataclass
class ReductionCertificate:
    """``raw = sum_i h[i] * reduced_i + reduced / scale`` (0-based ``i``)."""

    scale: GaussianRational
    multipliers: dict[int, MultivariatePolynomial]

    def to_dict(self) -> dict:
        return {
            "s": str(self.scale),
            "multipliers": {str(i + 1): h.serialize() for i, h in sorted(self.multipliers.items())},
        }


@dataclass
class PeriodConstantSequence:
    parameters: tuple[str, ...]
    raw: list[MultivariatePolynomial]
    reduced: list[MultivariatePolynomial] = field(default_factory=list)
    certificates: list[ReductionCertificate | None] = field(default_factory=list)
    order: tuple[str, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.raw)

    def remainder(self, k: int) -> MultivariatePolynomial:
        """Unscaled remainder ``reduced_k / s_k`` (1-based ``k``)."""
        cert = self.certificates[k - 1]
        red = self.reduced[k - 1]
        return red if cert is None else red / cert.scale

    def first_nonzero(self, which: str = "reduced") -> int | None:
        seq = self.reduced if which == "reduced" else self.raw
        for i, t in enumerate(seq, start=1):
            if t:
                return i
        return None

    def verify_certificates(self) -> None:
        for k, cert in enumerate(self.certificates, start=1):
            if cert is None:
                continue
            lhs = self.raw[k - 1]
            rhs = self.reduced[k - 1] / cert.scale
            for i, h in cert.multipliers.items():
                rhs = rhs + h * self.reduced[i]
            if lhs != rhs:
                raise InternalConsistencyError(f"reduction certificate for tau_{k} does not hold")

    def report_fragment(self, k: int) -> dict:
        cert = self.certificates[k - 1] if self.certificates else None
        return {
            "k": k,
            "raw": self.raw[k - 1].serialize(),
            "reduced": self.reduced[k - 1].serialize() if self.reduced else None,
            "certificate": cert.to_dict() if cert else None,
        }


def compute_tau(coeffs: ComplexSystemCoefficients, n: int,
                symmetric: bool = False) -> PeriodConstantSequence:
    """Raw complex period constants ``tau_1..tau_n`` (symbolic)."""
    if n < 1:
        raise ValueError("need at least one period constant")
    table = compute_normal_form(coeffs, 2 * n, symmetric=symmetric)
    raw = []
    for j in range(1, n + 1):
        tau = table.p[j] + table.q[j]
        if not tau.is_real:
            raise InternalConsistencyError(
                f"tau_{j} has a nonzero imaginary part: {tau.imag_part.leading_term()}")
        raw.append(tau)
    return PeriodConstantSequence(coeffs.parameters, raw)


def reduce_tau_sequence(seq: PeriodConstantSequence, order: Sequence[str] | None = None
                        ) -> PeriodConstantSequence:
    """Reduce each ``tau_k`` modulo the already reduced ``tau_1..tau_{k-1}``.

    Multivariate division under pure lex order with ``order`` (default: the
    parameter order) deciding which variable is largest; the remainder is
    then normalized.  For the Z2 quintic case orderings ``tau_1`` is linear
    in the first variable and ``tau_2`` monic in the second, so the first
    three remainders reproduce the printed reduced forms exactly.
    Certificates are verified before returning.
    """
    params = seq.parameters
    order = tuple(order) if order else params
    unknown = [v for v in order if v not in params]
    if unknown:
        raise KeyError(f"order mentions unknown parameters {unknown}")
    work_vars = order + tuple(v for v in params if v not in order)
    reduced: list[MultivariatePolynomial] = []
    certs: list[ReductionCertificate] = []
    for raw in seq.raw:
        divisors = [r.with_variables(work_vars) for r in reduced]
        quots, rem = raw.with_variables(work_vars).reduce_lex(divisors) if divisors else \
            ([], raw.with_variables(work_vars))
        rem = rem.with_variables(params)
        if rem:
            prim, content = rem.normalize()
        else:
            prim, content = rem, GaussianRational(1)
        hs = {i: q.with_variables(params) for i, q in enumerate(quots) if q}
        reduced.append(prim)
        certs.append(ReductionCertificate(GaussianRational(1) / content, hs))
    out = PeriodConstantSequence(params, list(seq.raw), reduced, certs, order)
    out.verify_certificates()
    return out


# -- instantiated (numeric / exact) evaluation ---------------------------------

@dataclass
class BoundedReal:
    """A real value with an absolute error bound (0 when exact)."""

    value: object
    error: float

    @property
    def exact(self) -> bool:
        return self.error == 0

    def sign(self) -> int:
        v = self.value
        if self.exact:
            return (v > 0) - (v < 0)
        if abs(v) <= self.error:
            raise IndeterminateError(f"|{mpmath.nstr(v, 8)}| <= error bound {self.error:.3e}")
        return 1 if v > 0 else -1

    def __float__(self) -> float:
        return float(self.value)


TauValue = BoundedReal


def _is_exact(x) -> bool:
    if isinstance(x, (int, GaussianRational)):
        return True
    if isinstance(x, str):
        try:
            rational(x)
            return True
        except ValueError:
            return False
    try:
        rational(x)
        return not isinstance(x, (float, mpmath.mpf))
    except TypeError:
        return False


def _instantiated_taus(coeffs, assignment, n, ctx):
    a = {}
    for kj, poly in coeffs.a.items():
        if ctx is None:
            a[kj] = poly.evaluate({v: assignment[v] for v in poly.variables})
        else:
            a[kj] = poly.evaluate_numeric(assignment, ctx)
    b = {kj: _conj(v) for kj, v in a.items()}
    if ctx is None:
        one, zero = GaussianRational(1), GaussianRational(0)
    else:
        one, zero = ctx.mpc(1), ctx.mpc(0)
    _, _, p, q = normal_form_recursion(a, b, 2 * n, one, zero, symmetric=True)
    return [p[j] + q[j] for j in range(1, n + 1)]


def tau_at_point(coeffs: ComplexSystemCoefficients, assignment: Mapping[str, object], n: int,
                 precision: int = 60) -> list[TauValue]:
    """Evaluate ``tau_1..tau_n`` at a parameter point by running the recursion
    on scalars.

    Rational assignments are evaluated exactly.  Otherwise the recursion runs
    in mpmath at ``precision`` digits (plus guard digits) and again with 20
    more digits; the difference plus the precision floor is the error bound.
    """
    missing = [v for v in coeffs.parameters if v not in assignment]
    if missing:
        raise KeyError(f"assignment lacks {missing}")
    if all(_is_exact(assignment[v]) for v in coeffs.parameters):
        vals = _instantiated_taus(coeffs, {v: assignment[v] for v in coeffs.parameters}, n, None)
        out = []
        for j, t in enumerate(vals, start=1):
            if not t.is_real:
                raise InternalConsistencyError(f"tau_{j} is not real at {dict(assignment)}")
            out.append(TauValue(t.re, 0))
        return out
    ctx = mpmath.mp
    results = []
    for dps in (precision + 10, precision + 30):
        with mpmath.workdps(dps):
            point = {v: ctx.mpf(assignment[v]) if not isinstance(assignment[v], str)
                     else ctx.mpf(assignment[v]) for v in coeffs.parameters}
            results.append([+t.real for t in _instantiated_taus(coeffs, point, n, ctx)])
    out = []
    with mpmath.workdps(precision + 10):
        for lo, hi in zip(*results):
            err = abs(hi - lo) + abs(hi) * ctx.mpf(10) ** (-precision) + ctx.mpf(10) ** (-precision - 5)
            out.append(TauValue(+hi, float(err)))
    return out


class TauEvaluator:
    """Instantiated recursion for ``tau_1..tau_n`` over a fixed parameter order.

    ``values(points)`` runs on a batch of float64 points (shape ``(B, nvars)``)
    with numpy complex arrays; ``values_mp(point, dps)`` runs on one point in
    mpmath.  Both use the conjugate symmetry ``d' = conj(c')``, valid for real
    parameter values.
    """

    def __init__(self, coeffs: ComplexSystemCoefficients, n: int, variables: Sequence[str] | None = None,
                 fixed: Mapping[str, object] | None = None):
        self.coeffs = coeffs
        self.n = n
        self.fixed = dict(fixed or {})
        self.variables = tuple(variables) if variables else tuple(
            v for v in coeffs.parameters if v not in self.fixed)
        all_vars = self.variables + tuple(self.fixed)
        if sorted(all_vars) != sorted(coeffs.parameters):
            raise ValueError(f"variables {self.variables} + fixed {tuple(self.fixed)} "
                             f"must cover {coeffs.parameters}")
        self._compiled = {}
        for kj, poly in coeffs.a.items():
            p = poly.evaluate({v: x for v, x in self.fixed.items() if _is_exact(x)}) if self.fixed else poly
            terms = []
            for e, c in p.with_variables(coeffs.parameters).terms.items():
                exps = dict(zip(coeffs.parameters, e))
                terms.append((complex(c), tuple(exps.get(v, 0) for v in self.variables),
                              c, tuple(exps.get(v, 0) for v in self.fixed)))
            self._compiled[kj] = terms

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def _a_values(self, cols, ctx=None, fixed_vals=None):
        a = {}
        for kj, terms in self._compiled.items():
            acc = None
            for cf, exps, exact_c, fexps in terms:
                if ctx is None:
                    t = cf
                else:
                    t = ctx.mpc(ctx.mpf(int(exact_c.re.numerator)) / int(exact_c.re.denominator),
                                ctx.mpf(int(exact_c.im.numerator)) / int(exact_c.im.denominator))
                for col, e in zip(cols, exps):
                    if e:
                        t = t * col ** e
                if fixed_vals:
                    for val, e in zip(fixed_vals, fexps):
                        if e:
                            t = t * val ** e
                acc = t if acc is None else acc + t
            a[kj] = acc
        return a

    def values(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        cols = [pts[:, i].astype(complex) for i in range(pts.shape[1])]
        fixed_vals = [complex(float(rational(v)) if _is_exact(v) else float(v)) for v in self.fixed.values()]
        a = self._a_values(cols, None, fixed_vals)
        a = {kj: (v if isinstance(v, np.ndarray) else np.full(len(pts), v, dtype=complex))
             for kj, v in a.items()}
        b = {kj: np.conj(v) for kj, v in a.items()}
        one = np.ones(len(pts), dtype=complex)
        zero = np.zeros(len(pts), dtype=complex)
        _, _, p, q = normal_form_recursion(a, b, 2 * self.n, one, zero, symmetric=True)
        return np.stack([(p[j] + q[j]).real for j in range(1, self.n + 1)], axis=1)

    def values_mp(self, point: Sequence, dps: int = 60) -> list:
        ctx = mpmath.mp
        with mpmath.workdps(dps):
            cols = [ctx.mpf(x) for x in point]
            fixed_vals = [ctx.mpf(rational(v).numerator) / int(rational(v).denominator) if _is_exact(v)
                          else ctx.mpf(v) for v in self.fixed.values()]
            a = self._a_values(cols, ctx, fixed_vals)
            b = {kj: v.conjugate() for kj, v in a.items()}
            _, _, p, q = normal_form_recursion(a, b, 2 * self.n, ctx.mpc(1), ctx.mpc(0), symmetric=True)
            return [+(p[j] + q[j]).real for j in range(1, self.n + 1)]


__all__ = [
    "NormalFormTable", "PeriodConstantSequence", "ReductionCertificate", "BoundedReal", "TauValue", "TauEvaluator",
    "compute_normal_form", "compute_tau", "reduce_tau_sequence", "tau_at_point",
    "normal_form_recursion", "InternalConsistencyError", "IndeterminateError",
]
