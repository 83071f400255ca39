"""Resultant-based elimination over exact multivariate polynomials.

Resultants use the subresultant polynomial remainder sequence in the
eliminated variable, with the other variables kept symbolic.  A Bareiss
determinant of the Sylvester matrix is kept as an independent (slow) path.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .poly import GaussianRational, MultivariatePolynomial

Poly = MultivariatePolynomial


class BudgetExceeded(RuntimeError):
    """Raised when an elimination runs past its time or size budget."""

    def __init__(self, message: str, trace: "EliminationTrace | None" = None):
        super().__init__(message)
        self.trace = trace


class CommonFactorError(ArithmeticError):
    def __init__(self, message: str, trace: "EliminationTrace | None" = None):
        super().__init__(message)
        self.trace = trace


def _check_budget(deadline: float | None):
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceeded("time budget exceeded")


def _trim(coeffs: list) -> list:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _prem(a: list, b: list, deadline=None) -> list:
    """Pseudo-remainder ``lc(b)^(da-db+1) * a mod b`` on coefficient lists."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        _check_budget(deadline)
        lr = r[-1]
        shift = len(r) - 1 - db
        new = [c * lb for c in r]
        for i, bc in enumerate(b):
            if bc:
                new[i + shift] = new[i + shift] - lr * bc
        new.pop()
        r = _trim(new)
        e -= 1
    if e > 0 and r:
        f = lb ** e
        r = [c * f for c in r]
    return r


def _scalar_content(p: Poly):
    return p.integer_content() if p else None


def resultant(p: Poly, q: Poly, var: str, deadline: float | None = None) -> Poly:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``var``.

    Both inputs must have positive degree in ``var``.  Rational contents are
    pulled out first; the remaining computation is the fraction-free
    subresultant PRS (every division is exact).
    """
    p, q = p._align(q)
    dp, dq = p.degree(var), q.degree(var)
    if dp <= 0 or dq <= 0:
        raise ValueError(f"resultant needs positive degree in {var} (got {dp}, {dq})")
    variables = p.variables
    cp, cq = _scalar_content(p), _scalar_content(q)
    factor = cp ** dq * cq ** dp
    a = (p / cp).coefficients_in(var)
    b = (q / cq).coefficients_in(var)
    sign = 1
    if len(a) < len(b):
        a, b = b, a
        if (len(a) - 1) * (len(b) - 1) % 2:
            sign = -sign
    one = Poly.constant(1, variables)
    g = h = one
    while True:
        _check_budget(deadline)
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            sign = -sign
        r = _prem(a, b, deadline)
        a = b
        if not r:
            return Poly.zero(variables)
        div = g * h ** delta
        b = [c.exact_div(div) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).exact_div(h ** (delta - 1))
        if len(b) - 1 == 0:
            da = len(a) - 1
            lb = b[0]
            if da == 1:
                res = lb
            else:
                res = (lb ** da).exact_div(h ** (da - 1))
            return res.scale(factor * sign)


def sylvester_matrix(p: Poly, q: Poly, var: str) -> list[list[Poly]]:
    p, q = p._align(q)
    a = p.coefficients_in(var)[::-1]
    b = q.coefficients_in(var)[::-1]
    m, n = len(a) - 1, len(b) - 1
    zero = Poly.zero(p.variables)
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (m - 1 - i))
    return rows


def bareiss_determinant(matrix: list[list[Poly]]) -> Poly:
    """Fraction-free determinant with row pivoting."""
    m = [list(r) for r in matrix]
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    variables = m[0][0].variables
    sign = 1
    prev = Poly.constant(1, variables)
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return Poly.zero(variables)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant_bareiss(p: Poly, q: Poly, var: str) -> Poly:
    if p.degree(var) <= 0 or q.degree(var) <= 0:
        raise ValueError(f"resultant needs positive degree in {var}")
    return bareiss_determinant(sylvester_matrix(p, q, var))


# -- gcd and squarefree parts -------------------------------------------------

def _main_variable(p: Poly, q: Poly) -> str | None:
    for v in p.variables:
        if p.degree(v) > 0 or q.degree(v) > 0:
            return v
    return None


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor over Q (recursive primitive PRS).

    The result is normalized (primitive integer coefficients, positive
    leading term); ``gcd(0, 0)`` is zero.
    """
    p, q = p._align(q)
    if not p:
        return q.primitive() if q else q
    if not q:
        return p.primitive()
    var = _main_variable(p, q)
    if var is None:
        return Poly.constant(1, p.variables)
    if p.degree(var) <= 0:
        return poly_gcd(p, _content_in(q, var))
    if q.degree(var) <= 0:
        return poly_gcd(_content_in(p, var), q)
    cp, cq = _content_in(p, var), _content_in(q, var)
    c = poly_gcd(cp, cq)
    if _coprime_after_specializing(p, q, var):
        return c
    a = p.exact_div(cp).primitive().coefficients_in(var)
    b = q.exact_div(cq).primitive().coefficients_in(var)
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _prem(a, b)
        if not r:
            break
        rp = Poly.from_coefficients(r, var, p.variables)
        if len(r) == 1:
            return c.primitive()
        rp = rp.exact_div(_content_in(rp, var)).primitive()
        a, b = b, rp.coefficients_in(var)
    g = Poly.from_coefficients(b, var, p.variables)
    g = g.exact_div(_content_in(g, var))
    return (g * c).primitive()


def _coprime_after_specializing(p: Poly, q: Poly, var: str, tries: int = 2) -> bool:
    """True when ``p`` and ``q`` are certainly coprime as polynomials in ``var``.

    Specializing the other variables at a point where both leading
    coefficients survive can only enlarge the gcd, so a constant gcd of the
    specialization is a proof.  ``False`` means "unknown".
    """
    others = [v for v in p.variables if v != var and (p.degree(v) > 0 or q.degree(v) > 0)]
    if not others:
        return False
    rng = random.Random(7919 * len(p.keys()) + len(q.keys()))
    lp, lq = p.leading_coefficient_in(var), q.leading_coefficient_in(var)
    for _ in range(tries):
        point = {v: rng.randint(-97, 97) for v in others}
        if not lp.evaluate(point) or not lq.evaluate(point):
            continue
        g = poly_gcd(p.evaluate(point), q.evaluate(point))
        if g.degree(var) <= 0:
            return True
    return False


def _content_in(p: Poly, var: str) -> Poly:
    """gcd of the coefficients of ``p`` viewed as a polynomial in ``var``."""
    coeffs = [c for c in p.coefficients_in(var) if c]
    g = coeffs[0].primitive()
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, c)
    return g


@dataclass
class EliminationStep:
    """One resultant (or pass-through) in an elimination chain."""

    inputs: tuple[str, ...]
    output: str
    variable: str | None
    raw: Poly
    content: GaussianRational
    monomial: tuple[int, ...]
    squarefree: Poly
    seconds: float = 0.0

    def reconstructs(self) -> bool:
        """Check that ``raw`` vanishes exactly where ``monomial * squarefree`` does.

        Verified as: ``squarefree * monomial`` divides ``raw`` and every
        factor of ``raw`` divides a power of the product.
        """
        if not self.raw:
            return False
        mono = Poly(self.raw.variables, {tuple(self.monomial): GaussianRational(1)})
        prod = self.squarefree * mono
        try:
            rest = self.raw.exact_div(prod)
        except ArithmeticError:
            return False
        return _divides_power(rest, prod)

    def to_dict(self) -> dict:
        return {
            "inputs": list(self.inputs),
            "output": self.output,
            "variable": self.variable,
            "raw": self.raw.serialize(),
            "content": str(self.content),
            "monomial": list(self.monomial),
            "squarefree": self.squarefree.serialize(),
            "seconds": round(self.seconds, 6),
            "raw_terms": len(self.raw.keys()),
            "max_coefficient_bits": coefficient_bits(self.raw),
        }


def _divides_power(f: Poly, g: Poly) -> bool:
    f = f.primitive() if f else f
    for _ in range(64):
        if f.is_constant():
            return True
        d = poly_gcd(f, g)
        if d.is_constant():
            return False
        f = f.exact_div(d)
    return False


def coefficient_bits(p: Poly) -> int:
    best = 0
    for c in p.terms.values():
        for part in (c.re, c.im):
            best = max(best, int(part.numerator).bit_length(), int(part.denominator).bit_length())
    return best


def squarefree_and_content(p: Poly, var: str) -> tuple[GaussianRational, tuple[int, ...], Poly]:
    """Split ``p`` into rational content, monomial factor and the squarefree
    part (with respect to ``var``) of what remains."""
    if not p:
        raise ValueError("zero polynomial")
    prim, content = p.normalize()
    mono = prim.monomial_content()
    rest = prim.divide_monomial(mono)
    if rest.degree(var) > 0:
        g = poly_gcd(rest, rest.diff(var))
        if not g.is_constant():
            rest = rest.exact_div(g)
        rest = rest.primitive()
    return content, mono, rest


@dataclass
class EliminationTrace:
    order: tuple[str, ...]
    steps: list[EliminationStep] = field(default_factory=list)
    terminal: list[Poly] = field(default_factory=list)
    status: str = "complete"
    # (variable, [(name, poly), ...]) for each family before it was eliminated
    families: list[tuple[str, list[tuple[str, Poly]]]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "order": list(self.order),
            "status": self.status,
            "steps": [s.to_dict() for s in self.steps],
            "terminal": [t.serialize() for t in self.terminal],
        }


def run_elimination_chain(polys: Sequence[Poly], order: Sequence[str],
                          names: Sequence[str] | None = None,
                          budget_seconds: float | None = None,
                          budget_bytes: int | None = None,
                          on_step: Callable[[EliminationStep], None] | None = None) -> EliminationTrace:
    """Eliminate ``order`` one variable at a time using the tower pattern.

    At each level the first member with positive degree in the variable is
    the pivot; its resultant with every other member forms the next family.
    Members free of the variable are passed through.  Each resultant is
    stripped of content and monomial factors and made squarefree before the
    next level.
    """
    order = tuple(order)
    family = [(n, p) for n, p in zip(names or [str(i + 1) for i in range(len(polys))], polys)]
    if len(family) < len(order) + 1:
        raise ValueError(f"need at least {len(order) + 1} polynomials for {len(order)} eliminations")
    trace = EliminationTrace(order)
    deadline = time.monotonic() + budget_seconds if budget_seconds else None
    for var in order:
        pivots = [i for i, (_, p) in enumerate(family) if p.degree(var) > 0]
        if not pivots:
            continue
        trace.families.append((var, list(family)))
        pname, pivot = family[pivots[0]]
        nxt = []
        for i, (name, p) in enumerate(family):
            if i == pivots[0]:
                continue
            t0 = time.monotonic()
            label = pname + name
            if p.degree(var) <= 0:
                step = EliminationStep((name,), name, None, p, GaussianRational(1),
                                       (0,) * p.nvars, p)
            else:
                try:
                    raw = resultant(pivot, p, var, deadline)
                except BudgetExceeded:
                    trace.status = "budget exceeded"
                    raise BudgetExceeded(f"time budget exceeded eliminating {var}", trace)
                if not raw:
                    trace.status = "common factor detected"
                    raise CommonFactorError(
                        f"resultant of {pname} and {name} in {var} is identically zero "
                        "(common factor detected)", trace)
                content, mono, sf = squarefree_and_content(raw, _next_var(order, var, raw))
                step = EliminationStep((pname, name), label, var, raw, content, mono, sf,
                                       time.monotonic() - t0)
            trace.steps.append(step)
            if on_step:
                on_step(step)
            if budget_bytes is not None and _size_bytes(step.raw) > budget_bytes:
                trace.status = "budget exceeded"
                raise BudgetExceeded(f"size budget exceeded at {label}", trace)
            nxt.append((step.output, step.squarefree))
        family = nxt
    trace.terminal = [p for _, p in family]
    return trace


def _next_var(order, var, p: Poly) -> str:
    rest = list(order[order.index(var) + 1:]) + [v for v in p.variables if v not in order]
    for v in rest:
        if p.degree(v) > 0:
            return v
    return var


def _size_bytes(p: Poly) -> int:
    return sum((int(c.re.numerator).bit_length() + int(c.re.denominator).bit_length()) // 8 + 16
               for c in p.terms.values())


__all__ = [
    "BudgetExceeded", "CommonFactorError", "EliminationStep", "EliminationTrace",
    "resultant", "resultant_bareiss", "sylvester_matrix", "bareiss_determinant",
    "poly_gcd", "squarefree_and_content", "run_elimination_chain", "coefficient_bits",
]
