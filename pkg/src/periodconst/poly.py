"""Exact sparse multivariate polynomials over the Gaussian rationals.

Coefficients live in Q(i); the variables are treated as real symbols, so
``conj`` only conjugates coefficients.  Monomials are packed into a single
integer::

    [total degree][e_0][e_1]...[e_{n-1}]     (16 bits per field)

so that monomial multiplication is integer addition and integer comparison is
the graded-lexicographic order (first declared variable is the largest).
The real and imaginary parts are kept in two separate dicts; polynomials with
real coefficients (the common case after complexification) never pay for
complex multiplication.
"""

from __future__ import annotations

import ast
import heapq
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpq, mpz

BITS = 16
MASK = (1 << BITS) - 1
MAX_EXPONENT = MASK

__all__ = [
    "GaussianRational",
    "MultivariatePolynomial",
    "rational",
    "parse_rational",
    "I",
]


def rational(value) -> mpq:
    """Coerce ``value`` to an exact rational (``gmpy2.mpq``)."""
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a str, int or Fraction")
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def parse_rational(text: str) -> mpq:
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        n, d = int(num), int(den)
        if d == 0:
            raise ValueError(f"zero denominator in rational {text!r}")
        return mpq(n, d)
    return mpq(int(text))


def _fmt_q(q: mpq) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = rational(re)
        self.im = rational(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("complex floats are not exact")
        return cls(value, 0)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other) -> bool:
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __add__(self, other):
        if isinstance(other, MultivariatePolynomial):
            return NotImplemented
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, MultivariatePolynomial):
            return NotImplemented
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, MultivariatePolynomial):
            return NotImplemented
        other = GaussianRational.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return GaussianRational(1) / self ** (-n)
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({_fmt_q(self.re)!r}, {_fmt_q(self.im)!r})"

    def __str__(self) -> str:
        if not self.im:
            return _fmt_q(self.re)
        if not self.re:
            return f"{_fmt_q(self.im)}*i"
        return f"({_fmt_q(self.re)} + {_fmt_q(self.im)}*i)"


I = GaussianRational(0, 1)


# -- packing helpers ---------------------------------------------------------

def _pack(exps: Sequence[int]) -> int:
    n = len(exps)
    key = sum(exps)
    for e in exps:
        if e < 0 or e > MAX_EXPONENT:
            raise ValueError(f"exponent {e} out of range")
        key = (key << BITS) | e
    if n == 0:
        return 0
    return key


def _unpack(key: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = key & MASK
        key >>= BITS
    return tuple(out)


def _shift(n: int, pos: int) -> int:
    """Packed increment for one power of variable ``pos`` (degree field included)."""
    return (1 << (BITS * (n - 1 - pos))) + (1 << (BITS * n))


def _mul_dicts(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _add_into(target: dict, src: dict, factor=1) -> None:
    get = target.get
    if factor == 1:
        for k, v in src.items():
            s = get(k, 0) + v
            if s:
                target[k] = s
            else:
                target.pop(k, None)
    else:
        for k, v in src.items():
            s = get(k, 0) + factor * v
            if s:
                target[k] = s
            else:
                target.pop(k, None)


class MultivariatePolynomial:
    """Immutable polynomial in named real variables with coefficients in Q(i).

    Examples
    --------
    >>> x, y = MultivariatePolynomial.variables_of(["x", "y"])
    >>> str((x - y) * (x + y))
    'x^2 - y^2'
    """

    __slots__ = ("variables", "_re", "_im", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        self._re: dict = {}
        self._im: dict = {}
        self._hash = None
        n = len(self.variables)
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} has wrong length for {self.variables}")
            c = GaussianRational.coerce(c)
            k = _pack(exps)
            if c.re:
                self._re[k] = self._re.get(k, 0) + c.re
                if not self._re[k]:
                    del self._re[k]
            if c.im:
                self._im[k] = self._im.get(k, 0) + c.im
                if not self._im[k]:
                    del self._im[k]

    @classmethod
    def _raw(cls, variables: tuple, re: dict, im: dict) -> "MultivariatePolynomial":
        p = object.__new__(cls)
        p.variables = variables
        p._re = re
        p._im = im
        p._hash = None
        return p

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, variables) -> "MultivariatePolynomial":
        return cls._raw(tuple(variables), {}, {})

    @classmethod
    def constant(cls, value, variables) -> "MultivariatePolynomial":
        c = GaussianRational.coerce(value)
        re = {0: c.re} if c.re else {}
        im = {0: c.im} if c.im else {}
        return cls._raw(tuple(variables), re, im)

    @classmethod
    def variable(cls, name: str, variables) -> "MultivariatePolynomial":
        variables = tuple(variables)
        if name not in variables:
            raise KeyError(f"unknown variable {name!r}")
        return cls._raw(variables, {_shift(len(variables), variables.index(name)): mpq(1)}, {})

    @classmethod
    def variables_of(cls, variables) -> list["MultivariatePolynomial"]:
        variables = tuple(variables)
        return [cls.variable(v, variables) for v in variables]

    @classmethod
    def parse(cls, text: str, variables) -> "MultivariatePolynomial":
        """Parse an arithmetic expression (``+ - * / ^ **``, ``i`` = sqrt(-1))."""
        return _ExprParser(tuple(variables)).parse(text)

    # -- basic queries ------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __bool__(self) -> bool:
        return bool(self._re) or bool(self._im)

    is_zero = property(lambda self: not self)

    @property
    def is_real(self) -> bool:
        return not self._im

    def keys(self) -> set:
        return set(self._re) | set(self._im)

    def __len__(self) -> int:
        return len(self.keys())

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        k = _pack(tuple(exps))
        return GaussianRational(self._re.get(k, 0), self._im.get(k, 0))

    @property
    def terms(self) -> dict[tuple[int, ...], GaussianRational]:
        """Terms in descending graded-lex order."""
        n = self.nvars
        return {
            _unpack(k, n): GaussianRational(self._re.get(k, 0), self._im.get(k, 0))
            for k in sorted(self.keys(), reverse=True)
        }

    def leading_term(self) -> tuple[tuple[int, ...], GaussianRational]:
        if not self:
            raise ValueError("zero polynomial has no leading term")
        k = max(self.keys())
        return _unpack(k, self.nvars), GaussianRational(self._re.get(k, 0), self._im.get(k, 0))

    def is_constant(self) -> bool:
        return all(k == 0 for k in self.keys())

    def constant_value(self) -> GaussianRational:
        """Value of a constant polynomial (raises if not constant)."""
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return GaussianRational(self._re.get(0, 0), self._im.get(0, 0))

    def total_degree(self) -> int:
        if not self:
            return -1
        return max(self.keys()) >> (BITS * self.nvars)

    def degree(self, var: str) -> int:
        """Degree in ``var``; -1 for the zero polynomial (minus infinity)."""
        pos = self._index(var)
        if not self:
            return -1
        sh = BITS * (self.nvars - 1 - pos)
        return max((k >> sh) & MASK for k in self.keys())

    def degrees(self) -> dict[str, int]:
        return {v: self.degree(v) for v in self.variables}

    def support_variables(self) -> tuple[str, ...]:
        return tuple(v for v in self.variables if self.degree(v) > 0)

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}; known: {self.variables}") from None

    # -- variable bookkeeping ----------------------------------------------

    def with_variables(self, variables) -> "MultivariatePolynomial":
        """Re-express over ``variables``; every variable in use must be kept."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        used = self.support_variables()
        missing = [v for v in used if v not in variables]
        if missing:
            raise ValueError(f"variables {missing} occur in the polynomial but not in {variables}")
        n_old, n_new = self.nvars, len(variables)
        cache: dict[int, int] = {}

        def remap(k):
            r = cache.get(k)
            if r is None:
                old = _unpack(k, n_old)
                new = [0] * n_new
                for v, e in zip(self.variables, old):
                    if e:
                        new[variables.index(v)] = e
                r = cache[k] = _pack(new)
            return r

        return MultivariatePolynomial._raw(
            variables,
            {remap(k): c for k, c in self._re.items()},
            {remap(k): c for k, c in self._im.items()},
        )

    def _align(self, other: "MultivariatePolynomial"):
        if self.variables == other.variables:
            return self, other
        union = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.with_variables(union), other.with_variables(union)

    def _lift(self, other):
        if isinstance(other, MultivariatePolynomial):
            return self._align(other)
        return self, MultivariatePolynomial.constant(other, self.variables)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        re = dict(a._re)
        _add_into(re, b._re)
        im = dict(a._im)
        _add_into(im, b._im)
        return MultivariatePolynomial._raw(a.variables, re, im)

    __radd__ = __add__

    def __neg__(self):
        return MultivariatePolynomial._raw(
            self.variables, {k: -c for k, c in self._re.items()}, {k: -c for k, c in self._im.items()}
        )

    def __sub__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        re = dict(a._re)
        _add_into(re, b._re, -1)
        im = dict(a._im)
        _add_into(im, b._im, -1)
        return MultivariatePolynomial._raw(a.variables, re, im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultivariatePolynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        a, b = self._align(other)
        if not a._im and not b._im:
            return MultivariatePolynomial._raw(a.variables, _mul_dicts(a._re, b._re), {})
        re = _mul_dicts(a._re, b._re)
        _add_into(re, _mul_dicts(a._im, b._im), -1)
        im = _mul_dicts(a._re, b._im)
        _add_into(im, _mul_dicts(a._im, b._re))
        return MultivariatePolynomial._raw(a.variables, re, im)

    __rmul__ = __mul__

    def scale(self, c) -> "MultivariatePolynomial":
        c = GaussianRational.coerce(c)
        if not c:
            return MultivariatePolynomial.zero(self.variables)
        if not c.im:
            r = c.re
            return MultivariatePolynomial._raw(
                self.variables,
                {k: v * r for k, v in self._re.items()},
                {k: v * r for k, v in self._im.items()},
            )
        a, b = c.re, c.im
        re = {k: v * a for k, v in self._re.items()} if a else {}
        _add_into(re, self._im, -b)
        im = {k: v * a for k, v in self._im.items()} if a else {}
        _add_into(im, self._re, b)
        return MultivariatePolynomial._raw(self.variables, re, im)

    def __truediv__(self, other):
        if isinstance(other, MultivariatePolynomial):
            if other.is_constant():
                other = other.constant_value()
            else:
                return self.exact_div(other)
        return self.scale(GaussianRational(1) / GaussianRational.coerce(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultivariatePolynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conj(self) -> "MultivariatePolynomial":
        return MultivariatePolynomial._raw(
            self.variables, dict(self._re), {k: -c for k, c in self._im.items()}
        )

    @property
    def real_part(self) -> "MultivariatePolynomial":
        return MultivariatePolynomial._raw(self.variables, dict(self._re), {})

    @property
    def imag_part(self) -> "MultivariatePolynomial":
        return MultivariatePolynomial._raw(self.variables, dict(self._im), {})

    def __eq__(self, other) -> bool:
        if isinstance(other, MultivariatePolynomial):
            a, b = self._align(other)
            return a._re == b._re and a._im == b._im
        try:
            c = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self == MultivariatePolynomial.constant(c, self.variables)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.serialize_key())
        return self._hash

    # -- calculus -----------------------------------------------------------

    def diff(self, var: str) -> "MultivariatePolynomial":
        pos = self._index(var)
        n = self.nvars
        sh = BITS * (n - 1 - pos)
        step = _shift(n, pos)

        def d(src):
            out = {}
            for k, c in src.items():
                e = (k >> sh) & MASK
                if e:
                    out[k - step] = c * e
            return out

        return MultivariatePolynomial._raw(self.variables, d(self._re), d(self._im))

    def coefficients_in(self, var: str) -> list["MultivariatePolynomial"]:
        """Univariate view ``[c_0, ..., c_d]`` with ``self = sum c_k var^k``.

        The coefficients keep the full variable list (``var`` simply does not
        occur in them).  The zero polynomial gives ``[]`` (degree -1).
        """
        pos = self._index(var)
        n = self.nvars
        sh = BITS * (n - 1 - pos)
        step = _shift(n, pos)
        d = self.degree(var)
        if d < 0:
            return []
        re = [dict() for _ in range(d + 1)]
        im = [dict() for _ in range(d + 1)]
        for src, dst in ((self._re, re), (self._im, im)):
            for k, c in src.items():
                e = (k >> sh) & MASK
                dst[e][k - e * step] = c
        return [MultivariatePolynomial._raw(self.variables, re[e], im[e]) for e in range(d + 1)]

    @classmethod
    def from_coefficients(cls, coeffs: Sequence["MultivariatePolynomial"], var: str,
                          variables=None) -> "MultivariatePolynomial":
        """Inverse of :meth:`coefficients_in`."""
        if variables is None:
            variables = coeffs[0].variables if coeffs else (var,)
        variables = tuple(variables)
        pos = variables.index(var)
        step = _shift(len(variables), pos)
        re: dict = {}
        im: dict = {}
        for e, c in enumerate(coeffs):
            c = c.with_variables(variables) if isinstance(c, MultivariatePolynomial) else \
                cls.constant(c, variables)
            off = e * step
            for k, v in c._re.items():
                re[k + off] = v
            for k, v in c._im.items():
                im[k + off] = v
        return cls._raw(variables, re, im)

    def leading_coefficient_in(self, var: str) -> "MultivariatePolynomial":
        return self.coefficients_in(var)[-1]

    def substitute(self, mapping: Mapping[str, object]) -> "MultivariatePolynomial":
        """Simultaneously replace variables by polynomials (or exact scalars).

        The variable list of the result is ``self.variables`` followed by any
        new variables introduced by the images.
        """
        images = {}
        for v, q in mapping.items():
            self._index(v)
            images[v] = q if isinstance(q, MultivariatePolynomial) else \
                MultivariatePolynomial.constant(q, ())
        final = self.variables + tuple(
            x for q in images.values() for x in q.variables if x not in self.variables
        )
        final = tuple(dict.fromkeys(final))
        result = self
        targets = list(images)
        if any(t in images[v].support_variables() for v in targets for t in targets):
            tmp = {v: f"__tmp_{i}" for i, v in enumerate(targets)}
            result = MultivariatePolynomial._raw(
                tuple(tmp.get(v, v) for v in self.variables), dict(self._re), dict(self._im))
            images = {tmp[v]: q for v, q in images.items()}
            targets = [tmp[v] for v in targets]
        for v in targets:
            result = result._substitute_one(v, images[v])
        return result.with_variables(final)

    def _substitute_one(self, var: str, q: "MultivariatePolynomial") -> "MultivariatePolynomial":
        union = self.variables + tuple(x for x in q.variables if x not in self.variables)
        q = q.with_variables(union)
        coeffs = self.coefficients_in(var)
        if not coeffs:
            return MultivariatePolynomial.zero(union)
        acc = coeffs[-1].with_variables(union)
        for c in reversed(coeffs[:-1]):
            acc = acc * q + c.with_variables(union)
        return acc

    def evaluate(self, assignment: Mapping[str, object]):
        """Exact evaluation.

        A total assignment returns a :class:`GaussianRational`; a partial one
        returns a polynomial in the remaining variables (same variable list).
        """
        for v in assignment:
            self._index(v)
        values = {self.variables.index(v): GaussianRational.coerce(x) for v, x in assignment.items()}
        n = self.nvars
        total = len(values) == n
        out_re: dict = {}
        out_im: dict = {}
        powcache: dict = {}
        for src, is_im in ((self._re, False), (self._im, True)):
            for k, c in src.items():
                exps = _unpack(k, n)
                factor = GaussianRational(0, c) if is_im else GaussianRational(c, 0)
                newexp = list(exps)
                for pos, val in values.items():
                    e = exps[pos]
                    if e:
                        key = (pos, e)
                        pw = powcache.get(key)
                        if pw is None:
                            pw = powcache[key] = val ** e
                        factor = factor * pw
                        newexp[pos] = 0
                nk = _pack(newexp)
                if factor.re:
                    out_re[nk] = out_re.get(nk, 0) + factor.re
                if factor.im:
                    out_im[nk] = out_im.get(nk, 0) + factor.im
        res = MultivariatePolynomial._raw(
            self.variables,
            {k: v for k, v in out_re.items() if v},
            {k: v for k, v in out_im.items() if v},
        )
        if total:
            return GaussianRational(res._re.get(0, 0), res._im.get(0, 0))
        return res

    def evaluate_numeric(self, assignment: Mapping[str, object], ctx=None):
        """Floating evaluation; ``ctx`` is an mpmath context (``mpmath.mp``) or
        ``None`` for Python complex arithmetic.  All variables must be assigned."""
        n = self.nvars
        missing = [v for v in self.variables if v not in assignment and self.degree(v) > 0]
        if missing:
            raise KeyError(f"missing values for {missing}")
        if ctx is None:
            vals = [complex(assignment.get(v, 0)) for v in self.variables]
            conv = float
            total = 0j
            unit = 1j
        else:
            vals = [ctx.mpmathify(assignment.get(v, 0)) for v in self.variables]
            conv = lambda q: ctx.mpf(int(q.numerator)) / int(q.denominator)  # noqa: E731
            total = ctx.mpc(0)
            unit = ctx.mpc(0, 1)
        for src, scale in ((self._re, 1), (self._im, unit)):
            for k, c in src.items():
                term = conv(c) * scale
                for pos, e in enumerate(_unpack(k, n)):
                    if e:
                        term = term * vals[pos] ** e
                total = total + term
        return total

    # -- normalization --------------------------------------------------------

    def integer_content(self) -> mpq:
        """Positive rational ``c`` with ``self / c`` integral and primitive."""
        if not self:
            raise ValueError("zero polynomial has no content")
        g = mpz(0)
        lcm = mpz(1)
        for src in (self._re, self._im):
            for c in src.values():
                g = gmpy2.gcd(g, c.numerator)
                lcm = gmpy2.lcm(lcm, c.denominator)
        return mpq(g, lcm)

    def normalize(self) -> tuple["MultivariatePolynomial", GaussianRational]:
        """Return ``(primitive, content)`` with ``self == content * primitive``.

        The primitive part has coprime integer coefficients and its leading
        term (graded lex) has positive real part, or zero real part and
        positive imaginary part.
        """
        if not self:
            raise ValueError("cannot normalize the zero polynomial")
        c = self.integer_content()
        k = max(self.keys())
        lead_re = self._re.get(k, 0)
        lead_im = self._im.get(k, 0)
        if lead_re < 0 or (lead_re == 0 and lead_im < 0):
            c = -c
        inv = 1 / c
        prim = MultivariatePolynomial._raw(
            self.variables,
            {kk: v * inv for kk, v in self._re.items()},
            {kk: v * inv for kk, v in self._im.items()},
        )
        return prim, GaussianRational(c)

    def primitive(self) -> "MultivariatePolynomial":
        return self.normalize()[0]

    def monomial_content(self) -> tuple[int, ...]:
        """Componentwise minimum of the exponent vectors (gcd monomial)."""
        if not self:
            raise ValueError("zero polynomial")
        n = self.nvars
        mins = None
        for k in self.keys():
            e = _unpack(k, n)
            mins = list(e) if mins is None else [min(a, b) for a, b in zip(mins, e)]
        return tuple(mins)

    def divide_monomial(self, exps: Sequence[int]) -> "MultivariatePolynomial":
        off = _pack(tuple(exps))
        n = self.nvars
        for k in self.keys():
            if any(a < b for a, b in zip(_unpack(k, n), exps)):
                raise ValueError("monomial does not divide polynomial")
        return MultivariatePolynomial._raw(
            self.variables,
            {k - off: c for k, c in self._re.items()},
            {k - off: c for k, c in self._im.items()},
        )

    # -- division -------------------------------------------------------------

    def divmod(self, divisor: "MultivariatePolynomial"):
        """Multivariate division by a single divisor under graded lex.

        Returns ``(q, r)`` with ``self = q*divisor + r`` and no term of ``r``
        divisible by the leading monomial of ``divisor``.
        """
        a, b = self._align(divisor)
        if not b:
            raise ZeroDivisionError("division by the zero polynomial")
        n = a.nvars
        lk = max(b.keys())
        lexp = _unpack(lk, n)
        lc = GaussianRational(b._re.get(lk, 0), b._im.get(lk, 0))
        inv = GaussianRational(1) / lc
        real_mode = not a._im and not b._im
        rem_re, rem_im = dict(a._re), dict(a._im)
        q_re: dict = {}
        q_im: dict = {}
        out_re: dict = {}
        out_im: dict = {}
        b_items = [(k, GaussianRational(b._re.get(k, 0), b._im.get(k, 0))) for k in b.keys()]
        b_re_items = list(b._re.items())
        heap = [-k for k in set(rem_re) | set(rem_im)]
        heapq.heapify(heap)
        seen_top = None
        while heap:
            k = -heapq.heappop(heap)
            if k == seen_top:
                continue
            seen_top = k
            cr = rem_re.pop(k, 0)
            ci = rem_im.pop(k, 0)
            if not cr and not ci:
                continue
            exps = _unpack(k, n)
            if any(x < y for x, y in zip(exps, lexp)):
                if cr:
                    out_re[k] = cr
                if ci:
                    out_im[k] = ci
                continue
            d = k - lk
            if real_mode:
                t = cr * inv.re
                q_re[d] = t
                for kb, cb in b_re_items:
                    kk = kb + d
                    if kk == k:
                        continue
                    s = rem_re.get(kk, 0) - t * cb
                    if s:
                        if kk not in rem_re:
                            heapq.heappush(heap, -kk)
                        rem_re[kk] = s
                    else:
                        rem_re.pop(kk, None)
            else:
                t = GaussianRational(cr, ci) * inv
                if t.re:
                    q_re[d] = t.re
                if t.im:
                    q_im[d] = t.im
                for kb, cb in b_items:
                    kk = kb + d
                    if kk == k:
                        continue
                    prod = t * cb
                    fresh = kk not in rem_re and kk not in rem_im
                    s = rem_re.get(kk, 0) - prod.re
                    if s:
                        rem_re[kk] = s
                    else:
                        rem_re.pop(kk, None)
                    s = rem_im.get(kk, 0) - prod.im
                    if s:
                        rem_im[kk] = s
                    else:
                        rem_im.pop(kk, None)
                    if fresh and (kk in rem_re or kk in rem_im):
                        heapq.heappush(heap, -kk)
        q = MultivariatePolynomial._raw(a.variables, q_re, q_im)
        r = MultivariatePolynomial._raw(a.variables, out_re, out_im)
        return q, r

    def reduce_lex(self, divisors: Sequence["MultivariatePolynomial"]):
        """Multivariate division by several divisors under pure lex order.

        The lex order follows ``self.variables`` (first variable largest).
        Returns ``(quotients, remainder)`` with
        ``self = sum q_i * divisors[i] + remainder`` and no term of the
        remainder divisible by any divisor's lex-leading monomial.
        """
        n = self.nvars
        divs = [d.with_variables(self.variables) for d in divisors]
        low = (1 << (BITS * n)) - 1
        lead = []
        for d in divs:
            if not d:
                lead.append(None)
                continue
            lk = max(d.keys(), key=lambda k: k & low)
            lead.append((lk, _unpack(lk, n),
                         GaussianRational(1) / GaussianRational(d._re.get(lk, 0), d._im.get(lk, 0)),
                         [(k, GaussianRational(d._re.get(k, 0), d._im.get(k, 0))) for k in d.keys()]))
        rem_re, rem_im = dict(self._re), dict(self._im)
        q = [({}, {}) for _ in divs]
        out_re: dict = {}
        out_im: dict = {}
        # heap entries: (-lexkey, packed key)
        heap = [(-(k & low), k) for k in set(rem_re) | set(rem_im)]
        heapq.heapify(heap)
        while heap:
            _, k = heapq.heappop(heap)
            cr = rem_re.pop(k, 0)
            ci = rem_im.pop(k, 0)
            if not cr and not ci:
                continue
            exps = _unpack(k, n)
            for idx, info in enumerate(lead):
                if info is None:
                    continue
                lk, lexp, inv, items = info
                if all(x >= y for x, y in zip(exps, lexp)):
                    break
            else:
                if cr:
                    out_re[k] = cr
                if ci:
                    out_im[k] = ci
                continue
            t = GaussianRational(cr, ci) * inv
            d = k - lk
            qr, qi = q[idx]
            if t.re:
                qr[d] = qr.get(d, 0) + t.re
            if t.im:
                qi[d] = qi.get(d, 0) + t.im
            for kb, cb in items:
                kk = kb + d
                if kk == k:
                    continue
                prod = t * cb
                fresh = kk not in rem_re and kk not in rem_im
                if prod.re:
                    s = rem_re.get(kk, 0) - prod.re
                    if s:
                        rem_re[kk] = s
                    else:
                        rem_re.pop(kk, None)
                if prod.im:
                    s = rem_im.get(kk, 0) - prod.im
                    if s:
                        rem_im[kk] = s
                    else:
                        rem_im.pop(kk, None)
                if fresh and (kk in rem_re or kk in rem_im):
                    heapq.heappush(heap, (-(kk & low), kk))
        quotients = [MultivariatePolynomial._raw(self.variables,
                                                 {k: v for k, v in qr.items() if v},
                                                 {k: v for k, v in qi.items() if v}) for qr, qi in q]
        return quotients, MultivariatePolynomial._raw(self.variables, out_re, out_im)

    def exact_div(self, divisor: "MultivariatePolynomial") -> "MultivariatePolynomial":
        q, r = self.divmod(divisor)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    # -- serialization ----------------------------------------------------------

    def serialize(self) -> dict:
        """Canonical JSON-ready form: descending graded-lex term list."""
        return {
            "variables": list(self.variables),
            "terms": [
                {"exponents": list(e), "re": _fmt_q(c.re), "im": _fmt_q(c.im)}
                for e, c in self.terms.items()
            ],
        }

    def serialize_key(self) -> tuple:
        return (self.variables,) + tuple(
            (e, c.re, c.im) for e, c in self.terms.items()
        )

    @classmethod
    def deserialize(cls, data: Mapping, variables=None) -> "MultivariatePolynomial":
        variables = tuple(variables if variables is not None else data["variables"])
        terms: dict = {}
        for idx, t in enumerate(data["terms"]):
            try:
                exps = tuple(int(e) for e in t["exponents"])
                c = GaussianRational(parse_rational(str(t.get("re", "0"))),
                                     parse_rational(str(t.get("im", "0"))))
            except (KeyError, ValueError, TypeError) as exc:
                raise ValueError(f"term {idx}: {exc}") from exc
            if len(exps) != len(variables):
                raise ValueError(f"term {idx}: expected {len(variables)} exponents, got {len(exps)}")
            if exps in terms:
                terms[exps] = terms[exps] + c
            else:
                terms[exps] = c
        return cls(variables, terms)

    def __repr__(self) -> str:
        return f"MultivariatePolynomial({self.variables!r}, '{self}')"

    def __str__(self) -> str:
        if not self:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(
                v if p == 1 else f"{v}^{p}" for v, p in zip(self.variables, e) if p
            )
            if c.im == 0:
                sign = "-" if c.re < 0 else "+"
                mag = abs(c.re)
                coef = _fmt_q(mag)
            else:
                sign = "+"
                coef = str(c)
                mag = None
            if mono:
                body = mono if mag == 1 else f"{coef}*{mono}"
            else:
                body = coef
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


class _ExprParser:
    """Safe expression parser built on :mod:`ast`."""

    def __init__(self, variables: tuple):
        self.variables = variables

    def parse(self, text: str) -> MultivariatePolynomial:
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse {text!r}: {exc.msg} at column {exc.offset}") from None
        return self._eval(tree.body)

    def _eval(self, node) -> MultivariatePolynomial:
        P = MultivariatePolynomial
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return P.constant(node.value, self.variables)
        if isinstance(node, ast.Name):
            if node.id == "i" and "i" not in self.variables:
                return P.constant(I, self.variables)
            if node.id not in self.variables:
                raise ValueError(f"unknown variable {node.id!r} at column {node.col_offset}")
            return P.variable(node.id, self.variables)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left = self._eval(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponents must be integer literals")
                return left ** node.right.value
            right = self._eval(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or not right:
                    raise ValueError("division only by nonzero constants")
                return left / right.constant_value()
        raise ValueError(f"unsupported expression element {ast.dump(node)[:40]}")
