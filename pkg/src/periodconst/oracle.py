"""Direct numerical check of period constants by integrating the real flow.

The return time to the positive x-axis is measured in Cartesian
coordinates: the polar angle is integrated alongside the state and the
period is the time at which it has advanced by a full turn.  Fitting
``P(h) - 2*pi/omega`` on an h-ladder gives ``p_2, p_4, ...`` which should
satisfy ``p_2 = -pi * tau_1`` for a canonical linear part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .poly import rational
from .system import NonCanonicalSystemError, PlanarPolySystem

TWO_PI = 2.0 * math.pi


class NotACenterError(RuntimeError):
    """The orbit from (h, 0) left the guard disk or stopped winding."""


def _to_float(v) -> float:
    if isinstance(v, (int, float, np.floating)):
        return float(v)
    if isinstance(v, str) and "/" in v:
        return float(rational(v))
    return float(v)


class NumericField:
    """Float evaluation of a polynomial vector field at fixed parameter values."""

    def __init__(self, system: PlanarPolySystem, params: Mapping[str, object] | None = None):
        params = dict(params or {})
        missing = [p for p in system.parameters if p not in params]
        if missing:
            raise KeyError(f"missing parameter values {missing}")
        vals = {p: _to_float(params[p]) for p in system.parameters}
        self.system = system
        self.components = []
        for comp in (system.xdot, system.ydot):
            cx, cy, cc = [], [], []
            for e, c in comp.terms.items():
                if c.im:
                    raise ValueError("vector field must be real")
                coef = float(c.re)
                for name, k in zip(comp.variables[2:], e[2:]):
                    coef *= vals[name] ** k
                cx.append(e[0])
                cy.append(e[1])
                cc.append(coef)
            self.components.append((np.array(cx), np.array(cy), np.array(cc)))
        (ax, ay, ac), (bx, by, bc) = self.components
        lin = lambda ex, ey, c, i, j: float(np.sum(c[(ex == i) & (ey == j)]))  # noqa: E731
        m = [[lin(ax, ay, ac, 1, 0), lin(ax, ay, ac, 0, 1)], [lin(bx, by, bc, 1, 0), lin(bx, by, bc, 0, 1)]]
        if abs(m[0][0]) > 1e-14 or abs(m[1][1]) > 1e-14 or m[1][0] <= 0 or abs(m[1][0] + m[0][1]) > 1e-14:
            raise NonCanonicalSystemError(f"linear part {m} is not x' = -w y, y' = w x with w > 0")
        self.omega = m[1][0]

    def __call__(self, x: float, y: float) -> tuple[float, float]:
        out = []
        for ex, ey, c in self.components:
            out.append(float(np.sum(c * x ** ex * y ** ey)))
        return out[0], out[1]


@dataclass
class PeriodSample:
    h: float
    period: float
    error: float
    return_y: float = 0.0

    def to_dict(self) -> dict:
        return {"h": self.h, "period": self.period, "error": self.error, "return_y": self.return_y}


def integrate_return_time(system: PlanarPolySystem | NumericField, params: Mapping[str, object] | None,
                          h: float, tol: float = 1e-12, guard: float = 0.3,
                          max_turn_time: float | None = None) -> PeriodSample:
    """Time for the orbit through ``(h, 0)`` to wind once around the origin."""
    if not 0 < h < guard:
        raise ValueError(f"need 0 < h < {guard}, got {h}")
    field_ = system if isinstance(system, NumericField) else NumericField(system, params)
    base = TWO_PI / field_.omega
    limit = max_turn_time or 4.0 * base

    def rhs(_t, s):
        x, y, _ = s
        u, v = field_(x, y)
        r2 = x * x + y * y
        return [u, v, (x * v - y * u) / r2]

    def turned(_t, s):
        return s[2] - TWO_PI

    turned.terminal = True
    turned.direction = 1

    def escaped(_t, s):
        return guard - math.hypot(s[0], s[1])

    escaped.terminal = True

    runs = []
    for rtol in (tol, tol / 10):
        sol = solve_ivp(rhs, (0.0, limit), [h, 0.0, 0.0], method="DOP853", rtol=rtol,
                        atol=rtol * h, events=(turned, escaped), dense_output=True)
        if sol.t_events[1].size:
            raise NotACenterError(f"orbit from h={h} left the disk of radius {guard}")
        if not sol.t_events[0].size:
            raise NotACenterError(f"orbit from h={h} did not complete a turn within t={limit}")
        t_hit = sol.t_events[0][0]
        # bisection on the accumulated angle from the dense output
        lo, hi = max(0.0, t_hit - 1e-3 * base), min(sol.t[-1], t_hit + 1e-3 * base)
        f = lambda t: sol.sol(t)[2] - TWO_PI  # noqa: E731
        if f(lo) < 0 < f(hi):
            t_hit = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        runs.append((t_hit, sol.sol(t_hit)[1]))
    period, y_ret = runs[1]
    return PeriodSample(h, period, abs(runs[1][0] - runs[0][0]), y_ret)


def geometric_ladder(h_min: float = 0.02, h_max: float = 0.15, count: int = 12) -> np.ndarray:
    return np.geomspace(h_min, h_max, count)


def sample_periods(system, params, hs: Sequence[float], tol: float = 1e-12,
                   guard: float = 0.3) -> list[PeriodSample]:
    field_ = system if isinstance(system, NumericField) else NumericField(system, params)
    return [integrate_return_time(field_, None, float(h), tol, guard) for h in hs]


@dataclass
class PeriodFit:
    coefficients: list[float]
    residual_norm: float
    condition: float
    odd: list[float] = field(default_factory=list)

    def p(self, k: int) -> float:
        """``p_{2k}`` (1-based)."""
        return self.coefficients[k - 1]

    def to_dict(self) -> dict:
        return {"p": {f"p{2 * (i + 1)}": c for i, c in enumerate(self.coefficients)},
                "residual_norm": self.residual_norm, "condition": self.condition,
                "odd": self.odd}


class IllConditionedFit(ValueError):
    pass


def fit_period_series(samples: Sequence[PeriodSample], K: int, omega: float = 1.0,
                      max_condition: float = 1e12, odd_terms: bool = True) -> PeriodFit:
    """Least squares for ``P(h) - 2 pi / omega`` on powers ``h^2 .. h^(2K)``.

    On the x-axis section the period is even in ``h`` only for systems with
    the point symmetry ``(x, y) -> (-x, -y)``; in general ``h^3, h^5, ...``
    are present, so they are fitted too (and reported in ``odd``) unless
    ``odd_terms`` is off.  ``p_2`` does not depend on the section
    parametrization; the higher ``p_{2k}`` do.
    """
    if len(samples) < 2 * K + 2:
        raise ValueError(f"need at least {2 * K + 2} samples for K={K}")
    h = np.array([s.h for s in samples])
    y = np.array([s.period for s in samples]) - TWO_PI / omega
    powers = list(range(2, 2 * K + 1)) if odd_terms else [2 * k for k in range(1, K + 1)]
    basis = np.stack([h ** p for p in powers], axis=1)
    # columns scaled to unit max so the condition number reflects the ladder, not the units
    scale = np.max(np.abs(basis), axis=0)
    a = basis / scale
    cond = float(np.linalg.cond(a))
    if cond > max_condition:
        raise IllConditionedFit(f"condition number {cond:.3e} exceeds {max_condition:.1e}")
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    coef = coef / scale
    resid = float(np.linalg.norm(basis @ coef - y))
    even = [float(c) for p, c in zip(powers, coef) if p % 2 == 0]
    odd = [float(c) for p, c in zip(powers, coef) if p % 2]
    return PeriodFit(even, resid, cond, odd)


def scan_critical_periods(system, params, h_range: tuple[float, float], resolution: int = 40,
                          tol: float = 1e-12, guard: float = 0.3, delta: float | None = None) -> list[float]:
    """Locations of sign changes of ``P'(h)`` on ``h_range``.

    ``P'`` is a centered difference with half-width ``delta``; each sign
    change on the grid is refined by bisection.
    """
    field_ = system if isinstance(system, NumericField) else NumericField(system, params)
    lo, hi = h_range
    delta = delta or 0.25 * (hi - lo) / resolution

    def dp(h):
        a = integrate_return_time(field_, None, h + delta, tol, guard).period
        b = integrate_return_time(field_, None, h - delta, tol, guard).period
        return (a - b) / (2 * delta)

    grid = np.linspace(lo + delta, hi - delta, resolution)
    vals = [dp(h) for h in grid]
    found = []
    for (h0, v0), (h1, v1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if v0 == 0:
            found.append(float(h0))
        elif v0 * v1 < 0:
            a, b, fa = h0, h1, v0
            for _ in range(30):
                m = 0.5 * (a + b)
                fm = dp(m)
                if fm * fa > 0:
                    a, fa = m, fm
                else:
                    b = m
                if b - a < 1e-9:
                    break
            found.append(0.5 * (a + b))
    return found


__all__ = [
    "NumericField", "PeriodSample", "PeriodFit", "NotACenterError", "IllConditionedFit",
    "integrate_return_time", "sample_periods", "fit_period_series", "scan_critical_periods",
    "geometric_ladder",
]
