"""Planar polynomial vector fields, translation and complexification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .poly import GaussianRational, MultivariatePolynomial, I, parse_rational, rational

STATE_VARS = ("x", "y")
MAX_DEGREE = 9


class NonCanonicalSystemError(ValueError):
    """The linear part is not (a rational time-rescaling of) x' = -y, y' = x."""


class SystemFormatError(ValueError):
    """A system or condition file does not match the expected schema."""


@dataclass(frozen=True)
class PlanarPolySystem:
    """``x' = xdot(x, y; params)``, ``y' = ydot(x, y; params)``.

    Both components are stored as polynomials over ``("x", "y", *parameters)``.
    """

    parameters: tuple[str, ...]
    xdot: MultivariatePolynomial
    ydot: MultivariatePolynomial
    name: str = ""

    def __post_init__(self):
        names = STATE_VARS + tuple(self.parameters)
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "xdot", self.xdot.with_variables(names))
        object.__setattr__(self, "ydot", self.ydot.with_variables(names))
        if not (self.xdot.is_real and self.ydot.is_real):
            raise ValueError("vector field coefficients must be real")

    @classmethod
    def from_strings(cls, xdot: str, ydot: str, parameters=(), name: str = ""):
        names = STATE_VARS + tuple(parameters)
        return cls(tuple(parameters), MultivariatePolynomial.parse(xdot, names),
                   MultivariatePolynomial.parse(ydot, names), name)

    @property
    def variables(self) -> tuple[str, ...]:
        return STATE_VARS + self.parameters

    @property
    def degree(self) -> int:
        """Maximal total degree in the state variables."""
        best = -1
        for comp in (self.xdot, self.ydot):
            for e in comp.terms:
                best = max(best, e[0] + e[1])
        return best

    def state_coefficients(self, component: str) -> dict[tuple[int, int], MultivariatePolynomial]:
        """Map ``(i, j) -> coefficient of x^i y^j`` as polynomials in the parameters."""
        comp = self.xdot if component == "x" else self.ydot
        out: dict[tuple[int, int], dict] = {}
        for e, c in comp.terms.items():
            out.setdefault((e[0], e[1]), {})[(0, 0) + e[2:]] = c
        return {k: MultivariatePolynomial(self.variables, t).with_variables(self.parameters)
                for k, t in out.items()}

    def linear_part(self) -> tuple[tuple[MultivariatePolynomial, ...], ...]:
        cx = self.state_coefficients("x")
        cy = self.state_coefficients("y")
        z = MultivariatePolynomial.zero(self.parameters)
        return ((cx.get((1, 0), z), cx.get((0, 1), z)), (cy.get((1, 0), z), cy.get((0, 1), z)))

    def evaluate_params(self, assignment: Mapping[str, object]) -> "PlanarPolySystem":
        """Instantiate (some) parameters exactly."""
        xd = self.xdot.evaluate(dict(assignment))
        yd = self.ydot.evaluate(dict(assignment))
        rest = tuple(p for p in self.parameters if p not in assignment)
        names = STATE_VARS + rest
        return PlanarPolySystem(rest, xd.with_variables(names), yd.with_variables(names), self.name)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "state_vars": list(STATE_VARS),
            "parameters": list(self.parameters),
            "xdot": self.xdot.serialize()["terms"],
            "ydot": self.ydot.serialize()["terms"],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "PlanarPolySystem":
        for key in ("parameters", "xdot", "ydot"):
            if key not in data:
                raise SystemFormatError(f"missing field {key!r}")
        if list(data.get("state_vars", STATE_VARS)) != list(STATE_VARS):
            raise SystemFormatError("state_vars must be ['x', 'y']")
        params = tuple(data["parameters"])
        names = STATE_VARS + params
        comps = []
        for comp in ("xdot", "ydot"):
            try:
                p = MultivariatePolynomial.deserialize({"terms": data[comp]}, names)
            except ValueError as exc:
                raise SystemFormatError(f"{comp}: {exc}") from None
            for e in p.terms:
                if e[0] + e[1] > MAX_DEGREE:
                    raise SystemFormatError(f"{comp}: state degree {e[0] + e[1]} exceeds {MAX_DEGREE}")
            comps.append(p)
        return cls(params, comps[0], comps[1], data.get("name", ""))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "PlanarPolySystem":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise SystemFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)


def translate_singularity(system: PlanarPolySystem, point) -> PlanarPolySystem:
    """Shift ``point`` to the origin: substitute ``x -> x + px``, ``y -> y + py``."""
    px, py = (rational(c) for c in point)
    names = system.variables
    x, y = MultivariatePolynomial.variables_of(names)[:2]
    sub = {"x": x + px, "y": y + py}
    return PlanarPolySystem(system.parameters, system.xdot.substitute(sub),
                            system.ydot.substitute(sub), system.name)


@dataclass(frozen=True)
class ComplexSystemCoefficients:
    """The coefficients ``a_{kj}`` of ``dz/dT = z + sum a_{kj} z^k w^j``.

    ``b_{kj}`` is never stored: it is ``conj(a_{kj})``.
    """

    parameters: tuple[str, ...]
    a: Mapping[tuple[int, int], MultivariatePolynomial]
    degree: int
    time_scale: GaussianRational = field(default_factory=lambda: GaussianRational(1))

    def __getitem__(self, kj: tuple[int, int]) -> MultivariatePolynomial:
        return self.a.get(kj) or MultivariatePolynomial.zero(self.parameters)

    def b(self, k: int, j: int) -> MultivariatePolynomial:
        return self[(k, j)].conj()

    def with_parameters(self, parameters) -> "ComplexSystemCoefficients":
        parameters = tuple(parameters)
        return ComplexSystemCoefficients(
            parameters, {k: v.with_variables(parameters) for k, v in self.a.items()},
            self.degree, self.time_scale)


def complexify(system: PlanarPolySystem) -> ComplexSystemCoefficients:
    """``z = x + iy``, ``w = x - iy``, ``T = it``: returns the ``a_{kj}`` table.

    dz/dT = (x' + i y')/i = y' - i x'.  A linear part ``x' = -w y``,
    ``y' = w x`` with a nonzero rational constant ``w`` is accepted and
    divided out (exact time rescaling).
    """
    (axx, axy), (ayx, ayy) = system.linear_part()
    for entry in (axx, ayy):
        if entry:
            raise NonCanonicalSystemError(
                f"linear part must be x' = -y, y' = x; found diagonal entry {entry}")
    if not (ayx.is_constant() and axy.is_constant()) or not ayx:
        raise NonCanonicalSystemError(
            f"linear part must be x' = -w*y, y' = w*x with constant w; found x'~{axy}*y, y'~{ayx}*x")
    omega = ayx.constant_value()
    if axy.constant_value() != -omega or not omega.is_real or omega.re <= 0:
        raise NonCanonicalSystemError(
            f"linear part is not a rotation: x' ~ {axy}*y, y' ~ {ayx}*x")

    params = system.parameters
    names = ("z", "w") + params
    z, w = MultivariatePolynomial.variables_of(names)[:2]
    half = GaussianRational("1/2")
    sub = {"x": (z + w) * half, "y": (z - w) * (half * (-I))}
    field_ = (system.ydot - system.xdot * I).scale(GaussianRational(1) / omega)
    Z = field_.substitute(sub).with_variables(names)
    a: dict[tuple[int, int], dict] = {}
    for e, c in Z.terms.items():
        a.setdefault((e[0], e[1]), {})[(0, 0) + e[2:]] = c
    table = {kj: MultivariatePolynomial(names, t).with_variables(params) for kj, t in a.items()}
    lin_z = table.pop((1, 0), None)
    lin_w = table.pop((0, 1), None)
    if lin_z != MultivariatePolynomial.constant(1, params) or (lin_w is not None and lin_w):
        raise NonCanonicalSystemError("complexified linear part is not dz/dT = z")
    if (0, 0) in table:
        raise NonCanonicalSystemError("origin is not a singular point")
    table = {kj: v for kj, v in table.items() if v}
    return ComplexSystemCoefficients(params, table, system.degree, omega)


def real_field_from_complex(coeffs: ComplexSystemCoefficients) -> tuple[MultivariatePolynomial, MultivariatePolynomial]:
    """Rebuild ``(x', y')`` from ``a_{kj}`` and ``b_{kj} = conj(a_{kj})``."""
    params = coeffs.parameters
    names = STATE_VARS + params
    x, y = MultivariatePolynomial.variables_of(names)[:2]
    zz = x + y * I
    ww = x - y * I
    Z = zz
    for (k, j), c in coeffs.a.items():
        Z = Z + c.with_variables(names) * zz ** k * ww ** j
    # dz/dT = Z with T = it  =>  x' + i y' = i Z
    iz = Z * I
    return iz.real_part.scale(coeffs.time_scale), iz.imag_part.scale(coeffs.time_scale)


@dataclass(frozen=True)
class CenterConditionSet:
    """A substitution ``parameter -> polynomial in the free parameters``."""

    name: str
    substitutions: Mapping[str, MultivariatePolynomial]
    free: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(self.free))
        overlap = set(self.substitutions) & set(self.free)
        if overlap:
            raise ValueError(f"{self.name}: {sorted(overlap)} both substituted and free")
        for v, rhs in self.substitutions.items():
            bad = [u for u in rhs.support_variables() if u not in self.free]
            if bad:
                raise ValueError(f"{self.name}: right-hand side of {v} uses non-free {bad}")

    @classmethod
    def from_strings(cls, name: str, subs: Mapping[str, str], free) -> "CenterConditionSet":
        free = tuple(free)
        return cls(name, {v: MultivariatePolynomial.parse(t, free) for v, t in subs.items()}, free)

    def to_dict(self) -> dict:
        return {"name": self.name, "free": list(self.free),
                "substitutions": {v: p.serialize()["terms"] for v, p in self.substitutions.items()}}

    @classmethod
    def from_dict(cls, data: Mapping) -> "CenterConditionSet":
        try:
            free = tuple(data["free"])
            subs = {}
            for v, rhs in data.get("substitutions", {}).items():
                if isinstance(rhs, str):
                    subs[v] = MultivariatePolynomial.parse(rhs, free)
                else:
                    subs[v] = MultivariatePolynomial.deserialize({"terms": rhs}, free)
            return cls(data.get("name", "custom"), subs, free)
        except (KeyError, ValueError) as exc:
            raise SystemFormatError(f"condition file: {exc}") from None

    @classmethod
    def load(cls, path) -> "CenterConditionSet":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise SystemFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def apply_center_condition(target, condition: CenterConditionSet):
    """Substitute a condition set into a complex table or a planar system.

    The result is expressed over ``condition.free`` (complex table) or over
    ``x, y`` and ``condition.free`` (planar system).
    """
    if isinstance(target, ComplexSystemCoefficients):
        subs = {v: q for v, q in condition.substitutions.items() if v in target.parameters}
        out = {}
        for kj, c in target.a.items():
            c2 = c.substitute(subs) if subs else c
            out[kj] = _restrict(c2, condition.free, condition.name)
        out = {kj: v for kj, v in out.items() if v}
        return ComplexSystemCoefficients(condition.free, out, target.degree, target.time_scale)
    if isinstance(target, PlanarPolySystem):
        subs = {v: q for v, q in condition.substitutions.items() if v in target.parameters}
        names = STATE_VARS + condition.free
        xd = _restrict(target.xdot.substitute(subs) if subs else target.xdot, names, condition.name)
        yd = _restrict(target.ydot.substitute(subs) if subs else target.ydot, names, condition.name)
        return PlanarPolySystem(condition.free, xd, yd, target.name)
    raise TypeError(f"cannot apply a center condition to {type(target).__name__}")


def _restrict(p: MultivariatePolynomial, names, label) -> MultivariatePolynomial:
    try:
        return p.with_variables(names)
    except ValueError as exc:
        raise ValueError(f"{label}: {exc}") from None


# -- built-in fixtures ---------------------------------------------------------

Z2_QUINTIC_PARAMS = ("a2", "a3", "a4", "a6", "a7", "a8", "a9", "a10")


def z2_quintic_at_origin_of_bicenter() -> PlanarPolySystem:
    """Z2-equivariant quintic subfamily (a1 = -1, a5 = 0) with its singular
    point (1, 0) already moved to the origin."""
    return replace(translate_singularity(z2_quintic(), (1, 0)), name="z2-quintic")


def z2_quintic() -> PlanarPolySystem:
    """Z2-equivariant quintic subfamily in original coordinates (bi-center at (+-1, 0))."""
    return PlanarPolySystem.from_strings(
        "-x^4*y + a2*x^3*y^2 + a3*x^2*y^3 + a4*x*y^4",
        "-1/4*x - a6*y + 1/4*x^5 + a6*x^4*y + a7*x^3*y^2 + a8*x^2*y^3 + a9*x*y^4 + a10*y^5",
        Z2_QUINTIC_PARAMS,
        name="z2-quintic-raw",
    )


def linear_center() -> PlanarPolySystem:
    return PlanarPolySystem.from_strings("-y", "x", (), name="linear")


BUILTIN_SYSTEMS = {
    "z2-quintic": z2_quintic_at_origin_of_bicenter,
    "z2-quintic-raw": z2_quintic,
    "linear": linear_center,
}


def define_builtin(name: str) -> PlanarPolySystem:
    try:
        return BUILTIN_SYSTEMS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin system {name!r}; choose from {sorted(BUILTIN_SYSTEMS)}") from None


# Free-parameter tuples follow the order used for reduction and elimination.
_LAMBDA = {
    "lambda1": (
        ("a3", "a7", "a2", "a4"),
        {"a6": "0", "a8": "1/3*a2*(1-2*a7)", "a9": "1/2*a3*(1-a7)", "a10": "1/5*a4*(3-2*a7)"},
    ),
    "lambda2": (
        ("a3", "a6", "a7", "a9"),
        {"a2": "-4*a6", "a4": "4*a3*a6", "a8": "4*a6*a7", "a10": "4*a6*a9"},
    ),
    "lambda3": (
        ("a3", "a7", "a2", "a6"),
        {
            "a4": "4*a6*(a3-4*a2*a6-16*a6^2)",
            "a8": "1/3*(a2+4*a6-2*a2*a7+4*a6*a7)",
            "a9": "1/6*(3*a3-4*a2*a6-16*a6^2-3*a3*a7-4*a2*a6*a7-16*a6^2*a7)",
            "a10": "2*a6*(-a3+4*a2*a6+16*a6^2)*(-1+a7)",
        },
    ),
    "lambda4": (
        ("a3", "a6", "a2", "a4"),
        {"a7": "-1", "a8": "a2", "a9": "a3", "a10": "a4"},
    ),
}

CASE_NAMES = tuple(_LAMBDA)


def builtin_condition(name: str) -> CenterConditionSet:
    """The bi-center conditions of the Z2 quintic family (``lambda1``..``lambda4``)."""
    key = name.lower().replace("λ", "lambda").replace("_", "")
    if key not in _LAMBDA:
        raise KeyError(f"unknown condition {name!r}; choose from {list(_LAMBDA)}")
    free, subs = _LAMBDA[key]
    return CenterConditionSet.from_strings(key, subs, free)


def empty_condition(parameters) -> CenterConditionSet:
    return CenterConditionSet("none", {}, tuple(parameters))


__all__ = [
    "PlanarPolySystem", "ComplexSystemCoefficients", "CenterConditionSet",
    "NonCanonicalSystemError", "SystemFormatError",
    "translate_singularity", "complexify", "apply_center_condition", "real_field_from_complex",
    "define_builtin", "builtin_condition", "empty_condition", "CASE_NAMES",
    "z2_quintic", "z2_quintic_at_origin_of_bicenter", "linear_center", "parse_rational",
]
