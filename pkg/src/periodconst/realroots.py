"""Real solutions: Sturm isolation for univariate polynomials, multistart
Newton for square systems, and Jacobian determinants with error bounds.

Univariate polynomials are handled as dense integer coefficient lists in
ascending powers; every scaling applied along a Sturm chain is positive, so
the sign pattern is that of the textbook chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import gmpy2
import mpmath
import numpy as np
from gmpy2 import mpq, mpz
from scipy.stats import qmc

from .elimination import BudgetExceeded, CommonFactorError, EliminationTrace, run_elimination_chain
from .period import BoundedReal, IndeterminateError, TauEvaluator
from .poly import MultivariatePolynomial, rational
from .system import ComplexSystemCoefficients

Poly = MultivariatePolynomial


# -- dense univariate helpers --------------------------------------------------

def univariate_coefficients(p, var: str | None = None) -> list[mpq]:
    """Ascending rational coefficients of a univariate polynomial.

    ``p`` may be a :class:`MultivariatePolynomial` whose support is at most
    one variable, or a sequence of exact scalars (ascending powers).
    """
    if isinstance(p, Poly):
        support = p.support_variables()
        if var is None:
            if len(support) > 1:
                raise ValueError(f"polynomial is not univariate (uses {support})")
            var = support[0] if support else p.variables[0]
        elif any(v != var for v in support):
            raise ValueError(f"polynomial involves variables other than {var}")
        out = []
        for c in p.coefficients_in(var):
            if c and not c.is_constant():
                raise ValueError("coefficient is not constant")
            v = c.constant_value() if c else None
            if v is not None and v.im:
                raise ValueError("complex coefficient")
            out.append(v.re if v is not None else mpq(0))
        return out
    return _trim([rational(c) for c in p])


def _trim(c: list) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _to_integer(c: Sequence) -> list[mpz]:
    """Positive rescaling of rational coefficients to coprime integers."""
    c = _trim(c)
    if not c:
        return []
    den = mpz(1)
    for x in c:
        den = gmpy2.lcm(den, mpq(x).denominator)
    ints = [mpz(mpq(x) * den) for x in c]
    g = mpz(0)
    for x in ints:
        g = gmpy2.gcd(g, x)
    return [x // g for x in ints]


def _derivative(c: Sequence) -> list:
    return [i * c[i] for i in range(1, len(c))]


def _rem_positive(a: list[mpz], b: list[mpz]) -> list[mpz]:
    """A positive multiple of ``a mod b`` with integer coefficients."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    sb = 1 if lb > 0 else -1
    alb = abs(lb)
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * alb for x in r]
        f = lr * sb
        for i, bc in enumerate(b):
            r[i + shift] -= f * bc
        r.pop()
        r = _trim(r)
    return _to_integer(r)


def _gcd(a: Sequence, b: Sequence) -> list[mpz]:
    a, b = _to_integer(a), _to_integer(b)
    while b:
        a, b = b, _rem_positive(a, b)
    return a


def _exact_quotient(a: list, b: list) -> list[mpq]:
    a = [mpq(x) for x in a]
    q = [mpq(0)] * (len(a) - len(b) + 1)
    lb = mpq(b[-1])
    while len(a) >= len(b) and a:
        f = a[-1] / lb
        s = len(a) - len(b)
        q[s] = f
        for i, bc in enumerate(b):
            a[i + s] -= f * bc
        a = _trim(a)
    if a:
        raise ArithmeticError("inexact univariate division")
    return q


def squarefree_part(c: Sequence) -> list[mpz]:
    c = _to_integer(c)
    if len(c) <= 2:
        return c
    g = _gcd(c, _derivative(c))
    if len(g) <= 1:
        return c
    return _to_integer(_exact_quotient(c, g))


def _sign_at(c: Sequence, x: mpq) -> int:
    """Sign of ``c(x)`` using integer arithmetic only."""
    x = mpq(x)
    n, d = x.numerator, x.denominator
    deg = len(c) - 1
    acc = mpz(0)
    npow = mpz(1)
    dpow = d ** deg
    for i, a in enumerate(c):
        if a:
            acc += a * npow * dpow
        npow *= n
        if i < deg:
            dpow //= d
    return (acc > 0) - (acc < 0)


def _sign_at_infinity(c: Sequence, negative: bool) -> int:
    lead = 1 if c[-1] > 0 else -1
    if negative and (len(c) - 1) % 2:
        lead = -lead
    return lead


def cauchy_bound(c: Sequence) -> mpq:
    c = _trim([mpq(x) for x in c])
    lead = abs(c[-1])
    return 1 + max((abs(x) / lead for x in c[:-1]), default=mpq(0))


class SturmChain:
    """Sturm sequence ``p, p', -rem(p, p'), ...`` (positively rescaled)."""

    def __init__(self, chain: list[list[mpz]]):
        self.chain = chain
        self._divided = None

    @classmethod
    def from_polynomial(cls, p, var: str | None = None) -> "SturmChain":
        c = _to_integer(univariate_coefficients(p, var) if isinstance(p, Poly) else p)
        if not c:
            raise ValueError("Sturm chain of the zero polynomial")
        chain = [c]
        if len(c) > 1:
            chain.append(_to_integer(_derivative(c)))
            while len(chain[-1]) > 1:
                r = _rem_positive(chain[-2], chain[-1])
                if not r:
                    break
                chain.append([-x for x in r])
        return cls(chain)

    @property
    def polynomial(self) -> list[mpz]:
        return self.chain[0]

    def __len__(self) -> int:
        return len(self.chain)

    def sign_changes(self, x) -> int:
        """Sign variations at ``x`` (an exact rational, or ``+-inf`` as float)."""
        chain = self.chain
        if len(chain[-1]) > 1 and not isinstance(x, float) and _sign_at(chain[-1], x) == 0:
            # x is a multiple root: the whole chain vanishes there, so divide out gcd(p, p')
            if self._divided is None:
                self._divided = [_to_integer(_exact_quotient(c, chain[-1])) for c in chain]
            chain = self._divided
        if isinstance(x, float):
            signs = [_sign_at_infinity(c, x < 0) for c in chain]
        else:
            signs = [_sign_at(c, x) for c in chain]
        signs = [s for s in signs if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, lo=float("-inf"), hi=float("inf")) -> int:
        """Number of distinct real roots in ``(lo, hi]``."""
        return self.sign_changes(lo) - self.sign_changes(hi)


@dataclass(frozen=True)
class RootInterval:
    """Isolating interval: exactly one root in ``(lo, hi)``, or ``lo == hi`` is the root."""

    lo: mpq
    hi: mpq
    poly: tuple

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    def refine(self, width) -> "RootInterval":
        width = rational(width)
        lo, hi = self.lo, self.hi
        if lo == hi:
            return self
        slo = _sign_at(self.poly, lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            s = _sign_at(self.poly, mid)
            if s == 0:
                return RootInterval(mid, mid, self.poly)
            if s == slo:
                lo = mid
            else:
                hi = mid
        return RootInterval(lo, hi, self.poly)

    def midpoint(self) -> mpq:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint())

    def value(self, digits: int = 30):
        """Root as an mpmath number accurate to about ``digits`` digits."""
        r = self.refine(mpq(1, 10 ** digits) * max(1, abs(self.lo)))
        with mpmath.workdps(digits + 10):
            m = r.midpoint()
            return mpmath.mpf(int(m.numerator)) / int(m.denominator)

    def to_dict(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi)}


def isolate_real_roots(p, var: str | None = None) -> list[RootInterval]:
    """Disjoint isolating intervals, one per distinct real root, in increasing order."""
    c = univariate_coefficients(p, var) if isinstance(p, Poly) else _trim([rational(x) for x in p])
    if not c:
        raise ValueError("cannot isolate roots of the zero polynomial")
    sf = squarefree_part(c)
    if len(sf) <= 1:
        return []
    chain = SturmChain.from_polynomial(sf)
    bound = cauchy_bound(sf)
    out: list[RootInterval] = []
    key = tuple(sf)
    stack = [(-bound, bound, chain.count(-bound, bound))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            if _sign_at(sf, hi) == 0:
                out.append(RootInterval(hi, hi, key))
            else:
                out.append(RootInterval(lo, hi, key))
            continue
        mid = (lo + hi) / 2
        left = chain.count(lo, mid)
        stack.append((mid, hi, n - left))
        stack.append((lo, mid, left))
    return sorted(out, key=lambda r: r.lo)


def count_real_roots(p, var: str | None = None) -> int:
    c = univariate_coefficients(p, var) if isinstance(p, Poly) else p
    return SturmChain.from_polynomial(squarefree_part(c)).count()


# -- residual systems ------------------------------------------------------------

def _simplest_rational(lo: mpq, hi: mpq) -> mpq:
    """The rational with the smallest denominator in ``[lo, hi]``."""
    if lo <= 0 <= hi:
        return mpq(0)
    if hi < 0:
        return -_simplest_rational(-hi, -lo)
    fl = mpq(lo.numerator // lo.denominator)
    if fl == lo:
        return fl
    if fl + 1 <= hi:
        return fl + 1
    return fl + 1 / _simplest_rational(1 / (hi - fl), 1 / (lo - fl))


def _snap_rational(r: RootInterval) -> RootInterval:
    """Turn an isolating interval into an exact point when the root is a rational
    of moderate height (found as the simplest rational of a tight interval)."""
    if r.exact:
        return r
    t = r.refine(mpq(1, 2 ** 80) * max(1, abs(r.lo)))
    if t.exact:
        return t
    cand = _simplest_rational(t.lo, t.hi)
    return RootInterval(cand, cand, r.poly) if _sign_at(r.poly, cand) == 0 else r


@dataclass
class SweepCell:
    """Real roots of ``p(., y)`` on one cell of the parameter line.

    Open cells lie between two consecutive critical values (``None`` ends
    are infinite); ``lo``/``hi`` are rational separators inside the cell
    and ``sample`` is the value that was examined.  Critical cells are
    exact (``lo == hi``) or an isolating interval of an irrational value.

    ``roots`` is ``None`` for a critical value that is not rational (its
    fiber is not examined); ``whole_fiber`` means ``p(., y)`` vanishes
    identically there.
    """

    lo: mpq | None
    hi: mpq | None
    sample: mpq | None
    roots: int | None
    whole_fiber: bool = False
    intervals: list = field(default_factory=list)
    critical: bool = False

    def to_dict(self) -> dict:
        s = lambda q: None if q is None else str(q)  # noqa: E731
        return {"lo": s(self.lo), "hi": s(self.hi), "critical": self.critical,
                "sample": s(self.sample), "roots": self.roots,
                "whole_fiber": self.whole_fiber, "intervals": [r.to_dict() for r in self.intervals]}


def sweep_real_roots(p: Poly, var: str, param: str) -> list[SweepCell]:
    """Distinct real roots of the bivariate ``p`` in ``var`` as ``param`` runs over R.

    The count is constant between consecutive real roots of the
    discriminant and leading coefficient of the squarefree part, so one
    rational sample per open cell and the exact value at each rational
    critical point describe the whole real zero set.
    """
    from .elimination import resultant, squarefree_and_content

    extra = [v for v in p.support_variables() if v not in (var, param)]
    if extra:
        raise ValueError(f"polynomial depends on {extra} besides {var}, {param}")
    _, mono, sf = squarefree_and_content(p, var)
    exps = dict(zip(p.variables, mono))
    var_zero, param_zero = exps.get(var, 0) > 0, exps.get(param, 0) > 0
    crit = sf.leading_coefficient_in(var)
    if sf.degree(var) > 1:
        crit = crit * resultant(sf, sf.diff(var), var)
    crit = crit.primitive()
    cmono = dict(zip(crit.variables, crit.monomial_content())).get(param, 0)
    crit = crit.divide_monomial(crit.monomial_content())
    points = [_snap_rational(r) for r in isolate_real_roots(crit, param)] if crit.degree(param) > 0 else []
    if cmono or param_zero:
        points = sorted(points + [RootInterval(mpq(0), mpq(0), ())], key=lambda r: r.lo)
    # rational critical points are exact; irrational ones get an isolating interval
    # that must not contain 0 or another critical point
    if cmono or param_zero:
        for i, r in enumerate(points):
            while not r.exact and r.lo <= 0 <= r.hi:
                r = r.refine(r.width / 4)
            points[i] = r
    points.sort(key=lambda r: r.lo)

    def fiber(y) -> SweepCell:
        q = sf.substitute({param: y})
        if param_zero and y == 0 or not q:
            return SweepCell(y, y, y, None, True, critical=True)
        roots = [_snap_rational(r) for r in isolate_real_roots(q, var)] if q.degree(var) > 0 else []
        if var_zero and q.substitute({var: 0}):
            roots = sorted(roots + [RootInterval(mpq(0), mpq(0), ())], key=lambda r: r.lo)
        return SweepCell(y, y, y, len(roots), False, roots, critical=True)

    cells: list[SweepCell] = []
    edges = [None] + points + [None]
    for left, right in zip(edges, edges[1:]):
        lo = None if left is None else left.hi
        hi = None if right is None else right.lo
        if lo is None and hi is None:
            sample = mpq(0)
        elif lo is None:
            sample = hi - 1
        elif hi is None:
            sample = lo + 1
        else:
            sample = (lo + hi) / 2
        c = fiber(sample)
        cells.append(SweepCell(lo, hi, sample, c.roots, c.whole_fiber, c.intervals))  # open cell
        if right is not None:
            if right.exact:
                cells.append(fiber(right.lo))
            else:
                cells.append(SweepCell(right.lo, right.hi, None, None, critical=True))
    return cells


class PolynomialSystem:
    """Residual map given by explicit polynomials (float batch, mpmath, exact Jacobian)."""

    lift = None

    def __init__(self, polys: Sequence[Poly], variables: Sequence[str] | None = None):
        if not polys:
            raise ValueError("empty system")
        self.variables = tuple(variables) if variables else polys[0].variables
        self.polys = [p.with_variables(self.variables) for p in polys]
        self._compiled = []
        for p in self.polys:
            if not p.is_real:
                raise ValueError("residual polynomials must be real")
            terms = p.terms
            exps = np.array(list(terms), dtype=int).reshape(len(terms), len(self.variables))
            coef = np.array([float(c.re) for c in terms.values()])
            exact = [c.re for c in terms.values()]
            self._compiled.append((exps, coef, exact))
        self._maxdeg = max((int(e.max()) for e, _, _ in self._compiled if e.size), default=0)
        self._mp_cache: dict = {}
        self._jac = None
        self._jac_system = None

    @property
    def dimension(self) -> int:
        return len(self.variables)

    @property
    def n_equations(self) -> int:
        return len(self.polys)

    def batch(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        powers = x[:, :, None] ** np.arange(self._maxdeg + 1)[None, None, :]
        cols = []
        for exps, coef, _ in self._compiled:
            if len(coef) == 0:
                cols.append(np.zeros(len(x)))
                continue
            mono = powers[:, 0, exps[:, 0]]
            for v in range(1, exps.shape[1]):
                mono = mono * powers[:, v, exps[:, v]]
            cols.append(mono @ coef)
        return np.stack(cols, axis=1)

    def _mp_coefficients(self, dps: int):
        if dps not in self._mp_cache:
            with mpmath.workdps(dps):
                self._mp_cache[dps] = [
                    [mpmath.mpf(int(c.numerator)) / int(c.denominator) for c in exact]
                    for _, _, exact in self._compiled]
        return self._mp_cache[dps]

    def mp(self, point: Sequence, dps: int) -> list:
        coeffs = self._mp_coefficients(dps)
        with mpmath.workdps(dps):
            x = [mpmath.mpf(v) for v in point]
            powers = [[mpmath.mpf(1)] for _ in x]
            for v, pw in zip(x, powers):
                for _ in range(self._maxdeg):
                    pw.append(pw[-1] * v)
            out = []
            for (exps, _, _), cs in zip(self._compiled, coeffs):
                total = mpmath.mpf(0)
                for e, c in zip(exps.tolist(), cs):
                    t = c
                    for i, k in enumerate(e):
                        if k:
                            t = t * powers[i][k]
                    total += t
                out.append(total)
            return out

    def jacobian_polynomials(self) -> list[list[Poly]]:
        if self._jac is None:
            self._jac = [[p.diff(v) for v in self.variables] for p in self.polys]
        return self._jac

    def jacobian_mp(self, point: Sequence, dps: int) -> list[list]:
        if self._jac_system is None:
            flat = [e for row in self.jacobian_polynomials() for e in row]
            self._jac_system = PolynomialSystem(flat, self.variables)
        vals = self._jac_system.mp(point, dps)
        n = self.dimension
        return [vals[i * n:(i + 1) * n] for i in range(self.n_equations)]


class EliminatedSystem(PolynomialSystem):
    """A polynomial system with some variables solved away exactly.

    ``substitutions`` maps each eliminated variable to a polynomial in the
    remaining ones; :meth:`lift` maps reduced points back to the full space.
    """

    def __init__(self, polys, variables, full_variables, substitutions: Mapping[str, Poly]):
        super().__init__(polys, variables)
        self.full_variables = tuple(full_variables)
        self.substitutions = dict(substitutions)
        self._lift_maps = {v: PolynomialSystem([q.with_variables(self.variables)], self.variables)
                           for v, q in self.substitutions.items()}

    def lift(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        cols = []
        for v in self.full_variables:
            if v in self.variables:
                cols.append(x[:, self.variables.index(v)])
            else:
                cols.append(self._lift_maps[v].batch(x)[:, 0])
        return np.stack(cols, axis=1)


def presolve_linear(polys: Sequence[Poly], variables: Sequence[str]) -> PolynomialSystem:
    """Solve away variables that occur linearly with a constant coefficient.

    Repeats until no equation has such a variable; returns an
    :class:`EliminatedSystem` (or a plain system if nothing was eliminated).
    The common zero set is unchanged, only the dimension drops.
    """
    variables = tuple(variables)
    eqs = [p.with_variables(variables) for p in polys]
    subs: dict[str, Poly] = {}
    progress = True
    while progress and len(eqs) > 1:
        progress = False
        for i, p in enumerate(eqs):
            for v in variables:
                if v in subs or p.degree(v) != 1:
                    continue
                lead = p.coefficients_in(v)[1]
                if not lead.is_constant():
                    continue
                image = -p.coefficients_in(v)[0] / lead.constant_value()
                subs = {w: q.substitute({v: image}) for w, q in subs.items()}
                subs[v] = image
                eqs = [q.substitute({v: image}) for j, q in enumerate(eqs) if j != i]
                progress = True
                break
            if progress:
                break
    if not subs:
        return PolynomialSystem(eqs, variables)
    rest = tuple(v for v in variables if v not in subs)
    return EliminatedSystem([q.with_variables(rest) for q in eqs], rest, variables,
                            {v: q.with_variables(rest) for v, q in subs.items()})


class TauSystem:
    """Residuals ``tau_1..tau_k`` of the instantiated recursion (no symbolic tau needed).

    ``next_value`` evaluates ``tau_{k+1}`` at a point.
    """

    def __init__(self, coeffs: ComplexSystemCoefficients, k: int,
                 variables: Sequence[str] | None = None, fixed: Mapping[str, object] | None = None):
        self.k = k
        self.evaluator = TauEvaluator(coeffs, k, variables, fixed)
        self.next_evaluator = TauEvaluator(coeffs, k + 1, variables, fixed)
        self.variables = self.evaluator.variables

    @property
    def dimension(self) -> int:
        return len(self.variables)

    @property
    def n_equations(self) -> int:
        return self.k

    def batch(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return self.evaluator.values(x)

    def mp(self, point: Sequence, dps: int) -> list:
        return self.evaluator.values_mp(point, dps)

    def next_value(self, point: Sequence, precision: int) -> BoundedReal:
        lo = self.next_evaluator.values_mp(point, precision + 10)[-1]
        hi = self.next_evaluator.values_mp(point, precision + 30)[-1]
        with mpmath.workdps(precision + 10):
            err = abs(hi - lo) + abs(hi) * mpmath.mpf(10) ** (-precision)
        return BoundedReal(hi, float(err))


# -- Jacobian determinants -----------------------------------------------------

def _fd_jacobian(f: Callable, point: Sequence, dps: int, step) -> list[list]:
    n = len(point)
    cols = []
    with mpmath.workdps(dps):
        x = [mpmath.mpf(v) for v in point]
        for j in range(n):
            h = step * max(1, abs(x[j]))
            xp = list(x)
            xm = list(x)
            xp[j] += h
            xm[j] -= h
            fp, fm = f(xp, dps), f(xm, dps)
            cols.append([(a - b) / (2 * h) for a, b in zip(fp, fm)])
    return [[cols[j][i] for j in range(n)] for i in range(len(cols[0]))]


def _as_callable(functions, variables) -> Callable:
    if hasattr(functions, "mp"):
        return functions.mp
    if callable(functions):
        return functions
    return PolynomialSystem(list(functions), variables).mp


def jacobian_det(functions, variables: Sequence[str], point: Sequence, mode: str = "finite-difference",
                 precision: int = 60) -> BoundedReal:
    """Determinant of the Jacobian of ``functions`` at ``point`` with an error bound.

    ``functions`` is a list of polynomials (either mode), a residual system
    or a callable ``f(point, dps) -> list`` (finite differences only).
    Symbolic mode differentiates exactly and evaluates at two precisions.
    Finite-difference mode uses central differences with step ``10**(-dps/3)``
    and bounds the error by comparison with the doubled step.
    """
    variables = tuple(variables)
    if mode == "symbolic":
        if hasattr(functions, "jacobian_polynomials"):
            jac = functions.jacobian_polynomials()
        elif isinstance(functions, (list, tuple)) and all(isinstance(p, Poly) for p in functions):
            jac = [[p.diff(v) for v in variables] for p in functions]
        else:
            raise ValueError("symbolic mode needs polynomial functions")
        vals = []
        for dps in (precision + 10, precision + 30):
            with mpmath.workdps(dps):
                assign = dict(zip(variables, [mpmath.mpf(v) for v in point]))
                m = mpmath.matrix([[e.evaluate_numeric(assign, mpmath.mp).real for e in row] for row in jac])
                vals.append(mpmath.det(m))
        with mpmath.workdps(precision + 10):
            err = abs(vals[1] - vals[0]) + abs(vals[1]) * mpmath.mpf(10) ** (-precision)
            return BoundedReal(+vals[1], float(err))
    if mode != "finite-difference":
        raise ValueError(f"unknown mode {mode!r}")
    f = _as_callable(functions, variables)
    dps = precision + 10
    with mpmath.workdps(dps):
        step = mpmath.mpf(10) ** (-(dps // 3))
        d1 = mpmath.det(mpmath.matrix(_fd_jacobian(f, point, dps, step)))
        d2 = mpmath.det(mpmath.matrix(_fd_jacobian(f, point, dps, 2 * step)))
        # central differences: truncation error of the finer step ~ |d2 - d1| / 3
        err = abs(d2 - d1) + abs(d1) * mpmath.mpf(10) ** (-precision)
        return BoundedReal(+d1, float(err))


# -- multistart Newton -------------------------------------------------------------

@dataclass
class SolutionPoint:
    values: dict
    residuals: list
    jacobian_det: BoundedReal | None = None
    tau_next: BoundedReal | None = None
    degenerate: bool = False

    def vector(self) -> list:
        return list(self.values.values())

    def to_dict(self, digits: int = 40) -> dict:
        def s(x):
            return mpmath.nstr(x, digits, strip_zeros=False)

        out = {
            "values": {k: s(v) for k, v in self.values.items()},
            "residuals": [mpmath.nstr(r, 5) for r in self.residuals],
            "degenerate": self.degenerate,
        }
        if self.jacobian_det is not None:
            out["jacobian_det"] = {"value": s(self.jacobian_det.value), "error": self.jacobian_det.error}
        if self.tau_next is not None:
            out["tau_next"] = {"value": s(self.tau_next.value), "error": self.tau_next.error}
        return out


def _normalize_box(box, n: int) -> np.ndarray:
    arr = np.asarray(box, dtype=float)
    if arr.shape == (2,):
        arr = np.tile(arr, (n, 1))
    if arr.shape != (n, 2) or np.any(arr[:, 0] >= arr[:, 1]) or not np.all(np.isfinite(arr)):
        raise ValueError(f"box must be a finite (lo, hi) pair or {n} of them")
    return arr


def _float_jacobian(system, x: np.ndarray, fx: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    h = 1e-7 * np.maximum(1.0, np.abs(x))
    jac = np.empty((x.shape[0], fx.shape[1], n))
    for j in range(n):
        xp = x.copy()
        xp[:, j] += h[:, j]
        jac[:, :, j] = (system.batch(xp) - fx) / h[:, j:j + 1]
    return jac


def _newton_batch(system, x: np.ndarray, box: np.ndarray, max_iter: int) -> tuple[np.ndarray, np.ndarray]:
    """Damped Newton from every row of ``x``; returns (points, converged mask)."""
    span = box[:, 1] - box[:, 0]
    lo, hi = box[:, 0] - span, box[:, 1] + span
    with np.errstate(all="ignore"):
        fx = system.batch(x)
        scale = np.nanmedian(np.abs(fx), axis=0) + 1.0
        norm = lambda f: np.sqrt(np.sum((f / scale) ** 2, axis=1))  # noqa: E731
        active = np.all(np.isfinite(fx), axis=1)
        done = np.zeros(len(x), dtype=bool)
        for _ in range(max_iter):
            idx = np.flatnonzero(active & ~done)
            if idx.size == 0:
                break
            xa, fa = x[idx], fx[idx]
            jac = _float_jacobian(system, xa, fa)
            try:
                step = np.linalg.solve(jac, -fa[:, :, None])[:, :, 0]
            except np.linalg.LinAlgError:
                step = np.einsum("bij,bj->bi", np.linalg.pinv(jac), -fa)
            base = norm(fa)
            lam = np.ones(idx.size)
            accepted = np.zeros(idx.size, dtype=bool)
            new_x, new_f = xa.copy(), fa.copy()
            for _ in range(12):
                todo = np.flatnonzero(~accepted)
                if todo.size == 0:
                    break
                trial = xa[todo] + lam[todo, None] * step[todo]
                ft = system.batch(trial)
                ok = np.all(np.isfinite(ft), axis=1) & (norm(ft) < base[todo] * (1 - 1e-4 * lam[todo]))
                new_x[todo[ok]], new_f[todo[ok]] = trial[ok], ft[ok]
                accepted[todo[ok]] = True
                lam[todo[~ok]] *= 0.5
            x[idx], fx[idx] = new_x, new_f
            small = np.max(np.abs(lam[:, None] * step), axis=1) <= 1e-11 * (1 + np.max(np.abs(xa), axis=1))
            done[idx[accepted & small]] = True
            stalled = ~accepted
            # a stalled row at a tiny residual counts as converged
            done[idx[stalled & (base < 1e-9)]] = True
            active[idx[stalled & (base >= 1e-9)]] = False
            outside = np.any((x[idx] < lo) | (x[idx] > hi), axis=1)
            active[idx[outside]] = False
        final = norm(fx)
    conv = (done | (active & (final < 1e-8))) & np.all(np.isfinite(x), axis=1)
    return x, conv


def _polish(system, x0: Sequence[float], precision: int, max_iter: int = 40):
    """mpmath Newton; gives up once the step stops shrinking."""
    dps = precision + 10
    with mpmath.workdps(dps):
        x = [mpmath.mpf(float(v)) for v in x0]
        target = mpmath.mpf(10) ** (-(precision + 2))
        step_fd = mpmath.mpf(10) ** (-(dps // 3))
        last = None
        growth = 0
        for _ in range(max_iter):
            f = system.mp(x, dps)
            if hasattr(system, "jacobian_mp"):
                jac = mpmath.matrix(system.jacobian_mp(x, dps))
            else:
                jac = mpmath.matrix(_fd_jacobian(system.mp, x, dps, step_fd))
            try:
                dx = mpmath.lu_solve(jac, mpmath.matrix([-v for v in f]))
            except ZeroDivisionError:
                return x, False
            x = [a + b for a, b in zip(x, dx)]
            size = max(abs(v) for v in dx)
            if size <= target * (1 + max(abs(v) for v in x)):
                return x, True
            if last is not None and size > last / 2:
                growth += 1
                if growth >= 4:
                    return x, False
            last = size
        return x, False


def _float_stage(system, box: np.ndarray, starts: int, seed: int, max_iter: int,
                 sign_seeds: bool) -> np.ndarray:
    n = system.dimension
    sampler = qmc.Sobol(d=n, scramble=True, seed=seed)
    m = int(2 ** np.ceil(np.log2(max(starts, 2))))
    pts = qmc.scale(sampler.random(m)[:starts], box[:, 0], box[:, 1])
    x, conv = _newton_batch(system, pts, box, max_iter)
    cands = x[conv]
    if sign_seeds and len(cands):
        # second round from coordinate sign flips of the first-round roots;
        # cheap, and it completes mirror pairs that random starts miss
        flips = np.array(np.meshgrid(*[[1.0, -1.0]] * n)).reshape(n, -1).T
        seeds = (cands[:, None, :] * flips[None, :, :]).reshape(-1, n)
        seeds = seeds * (1 + 1e-3 * np.random.default_rng(seed).standard_normal(seeds.shape))
        x2, conv2 = _newton_batch(system, seeds, box, max_iter)
        cands = np.vstack([cands, x2[conv2]])
    return cands


def multistart_solve(system, box=(-20.0, 20.0), starts: int = 2000, precision: int = 60,
                     seed: int = 0, dedup: float = 1e-8, tol: float | None = None,
                     max_iter: int = 80, compute_det: bool = True,
                     sign_seeds: bool = True, guides: Sequence = ()) -> list[SolutionPoint]:
    """Real solutions of a square system inside ``box`` from quasi-random starts.

    Float damped Newton from scrambled Sobol starts (plus a second round
    seeded by sign flips of the roots found), then mpmath Newton at
    ``precision`` digits.  ``guides`` are further float-stage systems with
    the same zero set (reduced forms of the same equations, possibly with
    variables solved away, see :func:`presolve_linear`); their candidates
    are pooled but polished and certified on ``system``.
    Accepted points have residuals below ``tol``
    (default ``10**(-precision/2)``) when re-evaluated at doubled precision;
    points closer than ``dedup`` in the max norm are merged.  A Jacobian
    determinant whose bound straddles zero marks the point degenerate.
    """
    n = system.dimension
    if system.n_equations != n:
        raise ValueError(f"system is not square ({system.n_equations} equations, {n} unknowns)")
    box = _normalize_box(box, n)
    tol = 10.0 ** (-(precision // 2)) if tol is None else tol
    pooled = [_float_stage(system, box, starts, seed, max_iter, sign_seeds)]
    for guide in guides:
        cols = [system.variables.index(v) for v in guide.variables]
        cands = _float_stage(guide, box[cols], starts, seed, max_iter, sign_seeds)
        if guide.lift is not None:
            full = guide.lift(cands)
            order = [guide.full_variables.index(v) for v in system.variables]
            cands = full[:, order]
        pooled.append(cands)
    cands = np.vstack(pooled)
    inside = np.all((cands >= box[:, 0] - 1e-9) & (cands <= box[:, 1] + 1e-9), axis=1)
    cands = cands[inside & np.all(np.isfinite(cands), axis=1)]
    unique: list[np.ndarray] = []
    for c in cands[np.lexsort(cands.T[::-1])] if len(cands) else []:
        radius = max(dedup, 1e-6 * (1 + np.max(np.abs(c))))
        if not any(np.max(np.abs(c - u)) < radius for u in unique):
            unique.append(c)
    found: list[SolutionPoint] = []
    for c in unique:
        xs, ok = _polish(system, c, precision)
        if not ok:
            continue
        if any(not (box[i, 0] - dedup <= float(xs[i]) <= box[i, 1] + dedup) for i in range(n)):
            continue
        res = system.mp(xs, 2 * precision)
        if max(abs(r) for r in res) > tol:
            continue
        if any(max(abs(a - b) for a, b in zip(xs, p.vector())) < dedup for p in found):
            continue
        point = SolutionPoint(dict(zip(system.variables, xs)), res)
        if compute_det:
            point.jacobian_det = jacobian_det(system, system.variables, xs, "finite-difference", precision)
            try:
                point.jacobian_det.sign()
            except IndeterminateError:
                point.degenerate = True
        if hasattr(system, "next_value"):
            point.tau_next = system.next_value(xs, precision)
        found.append(point)
    found.sort(key=lambda p: [float(v) for v in p.vector()])
    return found


# -- counting common real roots ---------------------------------------------------

@dataclass
class RootCount:
    count: int | None
    verdict: str
    tier: str
    strategy: str
    evidence: dict = field(default_factory=dict)
    points: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"count": self.count, "verdict": self.verdict, "tier": self.tier,
                "strategy": self.strategy, "evidence": self.evidence,
                "points": [p.to_dict() if hasattr(p, "to_dict") else p for p in self.points]}


def _univariate_gcd_poly(polys: Sequence[Poly], var: str) -> list[mpz]:
    g = univariate_coefficients(polys[0], var)
    for p in polys[1:]:
        g = _gcd(g, univariate_coefficients(p, var))
    return _to_integer(g)


def _real_roots_numeric(coeffs: list, dps: int) -> list:
    coeffs = list(coeffs)
    while coeffs and abs(coeffs[-1]) == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(coeffs[::-1], maxsteps=400, extraprec=4 * dps, error=False)
        eps = mpmath.mpf(10) ** (-(dps // 3))
        return [mpmath.re(r) for r in roots if abs(mpmath.im(r)) <= eps * (1 + abs(r))]


def _relative_value(p: Poly, assign: dict) -> float:
    """``|p(x)|`` divided by the sum of the absolute values of its terms."""
    val = p.evaluate_numeric(assign, mpmath.mp)
    size = mpmath.mpf(0)
    for e, c in p.terms.items():
        t = abs(mpmath.mpf(int(c.re.numerator)) / int(c.re.denominator))
        for v, k in zip(p.variables, e):
            if k:
                t *= abs(assign[v]) ** k
        size += t
    return float(abs(val) / size) if size else float(abs(val))


def _back_substitute(trace: EliminationTrace, last_var: str, dps: int):
    terminal_roots = isolate_real_roots(_univariate_gcd_poly(trace.terminal, last_var)) \
        if trace.terminal else []
    partial = [{last_var: r.value(dps)} for r in terminal_roots]
    discarded = []
    eps = 10.0 ** (-(dps // 3))
    with mpmath.workdps(dps):
        for var, family in reversed(trace.families):
            nxt = []
            for sol in partial:
                pivot = next((p for _, p in family if p.degree(var) > 0), None)
                coeffs = [c.evaluate_numeric(sol, mpmath.mp).real for c in pivot.coefficients_in(var)]
                if all(abs(c) < eps for c in coeffs):
                    discarded.append({"at": {k: mpmath.nstr(v, 15) for k, v in sol.items()},
                                      "reason": f"pivot vanishes identically in {var}"})
                    continue
                for r in _real_roots_numeric(coeffs, dps):
                    cand = dict(sol, **{var: r})
                    bad = [name for name, p in family if _relative_value(p, cand) > eps]
                    if bad:
                        discarded.append({"at": {k: mpmath.nstr(v, 15) for k, v in cand.items()},
                                          "inconsistent": bad})
                    else:
                        nxt.append(cand)
            partial = nxt
    return terminal_roots, partial, discarded


def count_common_real_roots(polys: Sequence[Poly], strategy: str = "elimination",
                            order: Sequence[str] | None = None, box=(-20.0, 20.0),
                            starts: int = 2000, precision: int = 30, seed: int = 0,
                            budget_seconds: float | None = None, system=None) -> RootCount:
    """Count common real roots by elimination (exact tower plus Sturm and
    back-substitution), by multistart, or by both (``"both"``).

    Disagreement between the two yields the verdict ``"unresolved"``.
    A zero count from elimination is a proof (every common root projects to
    a root of the terminal resultant); positive elimination counts involve a
    numeric back-substitution and are tagged ``symbolic+isolation``.  The
    multistart route is evidence only and covers ``box`` only.
    """
    if strategy not in ("elimination", "multistart", "both"):
        raise ValueError(f"unknown strategy {strategy!r}")
    polys = list(polys)
    variables = tuple(dict.fromkeys(v for p in polys for v in p.support_variables()))
    if order is None:
        order = variables[:-1]
    order = tuple(order)
    results = []
    if strategy in ("elimination", "both"):
        last = [v for v in variables if v not in order]
        if len(last) != 1:
            raise ValueError("elimination order must leave exactly one variable")
        try:
            trace = run_elimination_chain([p.with_variables(variables) for p in polys], order,
                                          budget_seconds=budget_seconds)
        except (BudgetExceeded, CommonFactorError) as exc:
            results.append(RootCount(None, "unresolved", "none", "elimination",
                                     {"error": str(exc), "trace_status": exc.trace.status if exc.trace else None}))
        else:
            roots, sols, discarded = _back_substitute(trace, last[0], max(precision, 30))
            if not roots:
                results.append(RootCount(0, "no common real root", "proof", "elimination",
                                         {"terminal": [t.serialize() for t in trace.terminal],
                                          "terminal_real_roots": 0}))
            else:
                results.append(RootCount(len(sols), f"{len(sols)} common real root(s)",
                                         "symbolic+isolation", "elimination",
                                         {"terminal_real_roots": [r.to_dict() for r in roots],
                                          "discarded": discarded},
                                         [{k: mpmath.nstr(v, precision) for k, v in s.items()} for s in sols]))
    if strategy in ("multistart", "both"):
        sysm = system or PolynomialSystem(polys, variables)
        if sysm.n_equations != sysm.dimension:
            raise ValueError("multistart needs a square system")
        pts = multistart_solve(sysm, box, starts, precision, seed, compute_det=False)
        results.append(RootCount(len(pts), f"{len(pts)} real solution(s) found in box", "numeric-evidence",
                                 "multistart", {"starts": starts, "box": np.asarray(box).tolist(),
                                                "seed": seed}, pts))
    if len(results) == 1:
        return results[0]
    el, ms = results
    if el.count is not None and el.count == ms.count:
        return RootCount(el.count, el.verdict, el.tier, "both",
                         {"elimination": el.to_dict(), "multistart": ms.to_dict()}, ms.points)
    return RootCount(None, "unresolved", "none", "both",
                     {"elimination": el.to_dict(), "multistart": ms.to_dict()})


__all__ = [
    "SturmChain", "RootInterval", "isolate_real_roots", "count_real_roots", "squarefree_part",
    "cauchy_bound", "univariate_coefficients", "SweepCell", "sweep_real_roots", "PolynomialSystem", "EliminatedSystem", "presolve_linear",
    "TauSystem", "SolutionPoint",
    "multistart_solve", "jacobian_det", "RootCount", "count_common_real_roots",
]
