"""End-to-end weak-center and critical-period analysis of the Z2 quintic cases.

A :class:`CaseSpec` fixes the system, the center condition, the parameter
order and which tiers to run.  :func:`run_case` walks the tiers

    symbolic   raw and reduced tau_1..tau_N with exact certificates
    exact      case-specific exact identities and Sturm counts
    numeric    multistart on the instantiated recursion, tau_{k+1} and
               Jacobian determinants at every solution found
    stretch    the full resultant tower and a Sturm count of its terminal

and turns the evidence into verdicts.  Every verdict names the evidence it
rests on and gets the weakest tier among them, so numerics can never be
reported as a proof.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import mpmath

from .elimination import BudgetExceeded, CommonFactorError, run_elimination_chain
from .period import PeriodConstantSequence, compute_tau, reduce_tau_sequence, tau_at_point
from .poly import MultivariatePolynomial as Poly
from .poly import rational
from .realroots import (TauSystem, count_real_roots, isolate_real_roots, multistart_solve, presolve_linear,
                        sweep_real_roots)
from .system import (CASE_NAMES, CenterConditionSet, PlanarPolySystem, apply_center_condition,
                     builtin_condition, complexify, define_builtin, empty_condition)

SCHEMA_VERSION = "1.0"

TIERS = ("proof", "symbolic+isolation", "numeric-evidence")
ALL_STAGES = ("symbolic", "exact", "numeric", "stretch")


def weakest(tiers: Sequence[str]) -> str:
    return max(tiers, key=TIERS.index) if tiers else "proof"


# -- fixtures ------------------------------------------------------------------

def load_system(path) -> PlanarPolySystem:
    return PlanarPolySystem.load(path)


def resolve_system(ref: str) -> PlanarPolySystem:
    """A builtin name or a path to a system file."""
    if Path(ref).is_file():
        return load_system(ref)
    return define_builtin(ref)


def resolve_condition(ref: str | None, system: PlanarPolySystem) -> CenterConditionSet:
    if ref in (None, "", "none"):
        return empty_condition(system.parameters)
    if Path(ref).is_file():
        return CenterConditionSet.load(ref)
    return builtin_condition(ref)


def load_point(path) -> dict:
    """Parameter values from a JSON object; strings stay exact rationals."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object of parameter values")
    return data


# -- specs -----------------------------------------------------------------------

@dataclass(frozen=True)
class NumericTask:
    """One multistart run: ``tau_1..tau_k`` in the free variables minus ``fixed``."""

    k: int
    fixed: Mapping[str, str] = field(default_factory=dict)
    starts: int = 2000
    purpose: str = "realize"   # "realize": find the order-k stratum; "bound": expect no solution

    def to_dict(self) -> dict:
        return {"k": self.k, "fixed": dict(self.fixed), "starts": self.starts, "purpose": self.purpose}


@dataclass(frozen=True)
class CaseSpec:
    name: str
    condition: CenterConditionSet
    order: tuple[str, ...]
    system: str = "z2-quintic"
    depth: int = 4
    max_order: int | None = None
    numeric: tuple[NumericTask, ...] = ()
    stages: tuple[str, ...] = ("symbolic", "exact", "numeric")
    box: tuple[float, float] = (-20.0, 20.0)
    precision: int = 60
    seed: int = 0
    budget_seconds: float | None = 3600.0
    budget_bytes: int | None = None

    def validate(self) -> None:
        if sorted(self.order) != sorted(self.condition.free):
            raise ValueError(f"order {self.order} is not a permutation of {self.condition.free}")
        if self.depth < 1:
            raise ValueError("depth must be positive")
        bad = [s for s in self.stages if s not in ALL_STAGES]
        if bad:
            raise ValueError(f"unknown stages {bad}; choose from {ALL_STAGES}")
        for task in self.numeric:
            free = [v for v in self.order if v not in task.fixed]
            if task.k != len(free):
                raise ValueError(f"numeric task with k={task.k} is not square over {free}")
            if task.purpose not in ("realize", "bound"):
                raise ValueError(f"unknown numeric purpose {task.purpose!r}")

    def to_dict(self) -> dict:
        return {
            "name": self.name, "system": self.system, "condition": self.condition.to_dict(),
            "order": list(self.order), "depth": self.depth, "max_order": self.max_order,
            "numeric": [t.to_dict() for t in self.numeric], "stages": list(self.stages),
            "box": list(self.box), "precision": self.precision, "seed": self.seed,
            "budget_seconds": self.budget_seconds, "budget_bytes": self.budget_bytes,
        }


# max_order K: the stretch tier eliminates tau_1..tau_{K+1}.  Lambda1 realizes
# order 3 on the a4 = 0 slice and searches tau_1..tau_4 globally; Lambda2/3
# realize order 4 on the full parameter space; Lambda4 has no real order-3
# point (exact tier), so order 2 is realized on a slice.
_CASE_DEFAULTS = {
    "lambda1": dict(max_order=3, numeric=(NumericTask(3, {"a4": "0"}, 2000),
                                          NumericTask(4, {}, 4000, "bound"))),
    "lambda2": dict(max_order=4, numeric=(NumericTask(4, {}, 4000),)),
    "lambda3": dict(max_order=4, numeric=(NumericTask(4, {}, 20000),)),
    "lambda4": dict(max_order=3, numeric=(NumericTask(2, {"a2": "1", "a4": "1"}, 1000),)),
}


def case_spec(name: str, **overrides) -> CaseSpec:
    """Default spec for ``lambda1``..``lambda4`` or ``linear``."""
    key = name.lower()
    if key == "linear":
        base = CaseSpec("linear", empty_condition(()), (), system="linear", depth=5,
                        stages=("symbolic",))
    elif key in CASE_NAMES:
        cond = builtin_condition(key)
        base = CaseSpec(key, cond, tuple(cond.free), **_CASE_DEFAULTS[key])
    else:
        raise KeyError(f"unknown case {name!r}; choose from {list(CASE_NAMES) + ['linear']}")
    spec = replace(base, **overrides)
    spec.validate()
    return spec


# -- reports ---------------------------------------------------------------------

@dataclass
class Verdict:
    kind: str
    statement: str
    tier: str
    evidence: list[str]

    @classmethod
    def from_dict(cls, d: Mapping) -> "Verdict":
        return cls(d["kind"], d["statement"], d["tier"], list(d["evidence"]))


@dataclass
class CaseReport:
    """Plain-data report; ``to_dict``/``from_dict`` round-trip exactly."""

    name: str
    spec: dict = field(default_factory=dict)
    status: str = "complete"
    markers: list[str] = field(default_factory=list)
    tau: list[dict] = field(default_factory=list)
    evidence: dict[str, dict] = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def add_evidence(self, key: str, tier: str, **payload) -> str:
        if tier not in TIERS:
            raise ValueError(f"unknown tier {tier!r}")
        self.evidence[key] = {"tier": tier, **payload}
        return key

    def add_verdict(self, kind: str, statement: str, evidence: Sequence[str]) -> Verdict:
        missing = [e for e in evidence if e not in self.evidence]
        if missing:
            raise KeyError(f"verdict cites unknown evidence {missing}")
        v = Verdict(kind, statement, weakest([self.evidence[e]["tier"] for e in evidence]), list(evidence))
        self.verdicts.append(v)
        return v

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "schema_version": self.schema_version, "name": self.name, "spec": self.spec,
            "status": self.status, "markers": list(self.markers), "tau": self.tau,
            "evidence": self.evidence, "verdicts": [asdict(v) for v in self.verdicts],
        }
        if timings:
            out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> "CaseReport":
        return cls(d["name"], dict(d.get("spec", {})), d.get("status", "complete"), list(d.get("markers", [])),
                   list(d.get("tau", [])), dict(d.get("evidence", {})),
                   [Verdict.from_dict(v) for v in d.get("verdicts", [])], dict(d.get("timings", {})),
                   d.get("schema_version", SCHEMA_VERSION))


# -- stages ------------------------------------------------------------------------

def _timed(report: CaseReport, key: str):
    class _T:
        def __enter__(self):
            self.t0 = time.perf_counter()

        def __exit__(self, *exc):
            report.timings[key] = report.timings.get(key, 0.0) + time.perf_counter() - self.t0
            return False

    return _T()


def _symbolic(spec: CaseSpec, coeffs, report: CaseReport) -> PeriodConstantSequence:
    seq = compute_tau(coeffs, spec.depth)
    seq = reduce_tau_sequence(seq, spec.order or None)
    for k in range(1, seq.depth + 1):
        frag = seq.report_fragment(k)
        frag["reduced_text"] = str(seq.reduced[k - 1])
        frag["remainder_text"] = str(seq.remainder(k))
        report.tau.append(frag)
    report.add_evidence("tau.symbolic", "proof", depth=seq.depth, order=list(seq.order),
                        certificates="verified",
                        first_nonzero_reduced=seq.first_nonzero())
    return seq


def _lambda4_exact(seq: PeriodConstantSequence, report: CaseReport) -> list[str]:
    """Exact real analysis of tau_1 = tau_2 = tau_3 = 0.

    tau_1 is linear in a3, so the reduced tau_2, tau_3 live in (a6, a2, a4).
    Their resultant in a6 vanishes at every common zero; a discriminant
    sweep over a4 locates its real zeros, and on the one fiber that has any
    (a4 = 0, a2 = 0) tau_2 with tau_1 solved for a3 is a negative square.
    """
    from .elimination import resultant

    t1, t2 = seq.raw[0], seq.raw[1]
    c0, c1 = t1.coefficients_in("a3")[:2]
    a3 = -c0 / c1.constant_value()
    slice_ = t2.substitute({"a3": a3}).substitute({"a2": 0, "a4": 0})
    target = Poly.parse("-64/27*(1+a6^2)^2", slice_.variables)
    slice_ok = slice_ == target
    keys = [report.add_evidence("exact.tau2_slice", "proof", polynomial=str(slice_),
                                expected=str(target), equal=slice_ok)]
    r23 = resultant(seq.reduced[1], seq.reduced[2], "a6")
    prim = r23.substitute({"a4": 0}).primitive()
    roots = isolate_real_roots(prim, "a2")
    at_zero = not prim.substitute({"a2": 0})
    keys.append(report.add_evidence("exact.resultant_23_a4_0", "proof", polynomial=str(prim),
                                    degree=prim.degree("a2"), real_roots=len(roots),
                                    intervals=[r.to_dict() for r in roots],
                                    only_root_is_zero=len(roots) == 1 and at_zero))
    cells = sweep_real_roots(r23, "a2", "a4")
    fibers = [c for c in cells if c.roots != 0]
    zero_set_origin = (len(fibers) == 1 and fibers[0].critical and fibers[0].lo == 0
                       and fibers[0].roots == 1 and at_zero)
    keys.append(report.add_evidence("exact.resultant_23_sweep", "proof", variable="a2", parameter="a4",
                                    cells=[c.to_dict() for c in cells],
                                    real_zero_set_is_origin=zero_set_origin))
    if slice_ok and zero_set_origin:
        keys.append(report.add_evidence("exact.no_common_zero_123", "proof", order_bound=2,
                                        cites=list(keys)))
    return keys


def _run_numeric(spec: CaseSpec, coeffs, seq: PeriodConstantSequence | None, task: NumericTask,
                 index: int, report: CaseReport) -> str:
    fixed = {v: rational(x) for v, x in task.fixed.items()}
    variables = [v for v in spec.order if v not in fixed]
    system = TauSystem(coeffs, task.k, variables, fixed)
    guides = []
    if seq is not None and seq.depth >= task.k:
        rems = [seq.remainder(j).substitute(fixed) if fixed else seq.remainder(j)
                for j in range(1, task.k + 1)]
        rems = [r.with_variables(variables) for r in rems]
        guides.append(presolve_linear(rems, variables))
    points = multistart_solve(system, spec.box, task.starts, spec.precision, spec.seed + index,
                              guides=guides)
    payload = dict(task=task.to_dict(), variables=variables, box=list(spec.box), seed=spec.seed + index,
                   count=len(points), points=[p.to_dict(spec.precision // 2) for p in points])
    # a global (unsliced) run bounds the order if it finds nothing, or if every
    # solution it finds has tau_{k+1} != 0; both rely on the search being complete
    if not fixed:
        if task.purpose == "bound" and not points:
            payload["order_bound"] = task.k - 1
        elif task.purpose == "realize" and points and all(_nonzero(p.tau_next) for p in points):
            payload["order_bound"] = task.k
    return report.add_evidence(f"numeric.{index}", "numeric-evidence", **payload)


def _nonzero(b) -> bool:
    return b is not None and abs(b.value) > b.error


def _run_stretch(spec: CaseSpec, seq: PeriodConstantSequence, report: CaseReport,
                 exact_keys: Sequence[str]) -> str | None:
    """Resultant tower of tau_1..tau_{K+1} down to the last parameter, then Sturm."""
    last = spec.order[-1]
    polys = seq.reduced[:spec.max_order + 1]
    try:
        trace = run_elimination_chain(polys, spec.order[:-1], budget_seconds=spec.budget_seconds,
                                      budget_bytes=spec.budget_bytes)
    except (BudgetExceeded, CommonFactorError) as exc:
        report.status = "partial"
        marker = "budget exceeded" if isinstance(exc, BudgetExceeded) else "common factor detected"
        report.markers.append(f"{marker}: stretch elimination ({exc})")
        steps = [_step_summary(s) for s in exc.trace.steps] if exc.trace else []
        report.add_evidence("elimination.partial", "proof", status=marker, completed_steps=steps)
        return None
    terminal = []
    for step, poly in zip(trace.steps[-len(trace.terminal):], trace.terminal):
        nroots = count_real_roots(poly, last) if poly.degree(last) > 0 else 0
        mono_deg = dict(zip(step.raw.variables, step.monomial)).get(last, 0)
        terminal.append({"name": step.output, "raw_degree": step.raw.degree(last),
                         "monomial_degree": mono_deg, "squarefree_degree": poly.degree(last),
                         "squarefree_real_roots": nroots})
    payload = dict(order=list(trace.order), variable=last, terminal=terminal,
                   steps=[_step_summary(s) for s in trace.steps])
    if all(t["squarefree_real_roots"] == 0 for t in terminal):
        if not any(t["monomial_degree"] for t in terminal):
            payload["order_bound"] = spec.max_order
        elif all(t["monomial_degree"] for t in terminal) and "exact.no_common_zero_123" in report.evidence:
            # the only real terminal root is 0, and that fiber is covered exactly
            payload["order_bound"] = spec.max_order
            payload["cites"] = ["exact.no_common_zero_123"]
    return report.add_evidence("elimination.stretch", "proof", **payload)


def _step_summary(s) -> dict:
    return {"output": s.output, "inputs": list(s.inputs), "variable": s.variable,
            "degrees": s.raw.degrees(), "terms": len(s.raw.keys()),
            "squarefree_degrees": s.squarefree.degrees()}


# -- verdicts ----------------------------------------------------------------------

def _where(values: Mapping[str, str]) -> str:
    return ", ".join(f"{v}={mpmath.nstr(_mp(x), 12)}" for v, x in values.items())


def _mp(x: str):
    if "/" in x:
        q = rational(x)
        return mpmath.mpf(int(q.numerator)) / int(q.denominator)
    return mpmath.mpf(x)


def _verdicts(spec: CaseSpec, report: CaseReport, seq, numeric_keys: dict):
    if seq is not None:
        first = seq.first_nonzero()
        if first is None:
            report.add_verdict("isochronous", f"isochronous to depth {seq.depth}: tau_1..tau_{seq.depth} "
                               "vanish identically", ["tau.symbolic"])
        elif all(t.is_constant() for t in seq.reduced[:first]):
            report.add_verdict("weak-center-order",
                               f"first nonzero period constant is tau_{first}: weak center of order {first - 1}",
                               ["tau.symbolic"])
    # upper bounds on the order, strongest first
    bounds = []
    for key, ev in report.evidence.items():
        if "order_bound" in ev:
            b = ev["order_bound"]
            cites = [key] + [c for c in ev.get("cites", []) if c in report.evidence]
            v = report.add_verdict("weak-center-order-bound",
                                   f"tau_1..tau_{b + 1} have no common real zero: "
                                   f"weak center of order at most {b}", cites)
            bounds.append((b, TIERS.index(v.tier), cites))
    best = min(bounds) if bounds else None
    # order realized at solution points, and the critical periods they unfold
    transversal = {}
    for key, task in numeric_keys.items():
        if task.purpose != "realize":
            continue
        for i, p in enumerate(report.evidence[key]["points"]):
            tn, det = p.get("tau_next"), p.get("jacobian_det")
            if not tn or abs(mpmath.mpf(tn["value"])) <= tn["error"]:
                continue
            tag = f"{key}.point{i}"
            values = {v: p["values"].get(v, task.fixed.get(v)) for v in spec.order}
            report.add_evidence(tag, "numeric-evidence", values=values, tau_next=tn,
                                jacobian_det=det, degenerate=p["degenerate"])
            report.add_verdict("weak-center-order",
                               f"weak center of order exactly {task.k} at ({_where(values)}): "
                               f"tau_{task.k + 1} = {mpmath.nstr(mpmath.mpf(tn['value']), 15)} != 0",
                               [key, tag])
            if det and not p["degenerate"]:
                transversal.setdefault(task.k, []).append((key, tag))
    if best is None:
        for k, found in sorted(transversal.items()):
            key, tag = found[0]
            report.add_verdict("critical-periods", f"at least {k} local critical periods bifurcate "
                               f"(order-{k} point with nonzero Jacobian determinant of tau_1..tau_{k})",
                               [key, tag])
        return
    b, _, cites = best
    over = [k for k in transversal if k > b]
    if over:
        report.markers.append(f"inconsistent: order-{max(over)} points found but order bound is {b}")
        report.status = "partial"
    if b in transversal:
        key, tag = transversal[b][0]
        report.add_verdict("critical-periods",
                           f"exactly {b} local critical periods bifurcate: order-{b} point with nonzero "
                           f"Jacobian determinant of tau_1..tau_{b}, and at most {b} by the order bound",
                           [key, tag] + cites)
    else:
        report.add_verdict("critical-periods", f"at most {b} local critical periods bifurcate "
                           "(order bound)", cites)


# -- driver ------------------------------------------------------------------------

def run_case(spec: CaseSpec) -> CaseReport:
    spec.validate()
    report = CaseReport(spec.name, spec.to_dict())
    system = resolve_system(spec.system)
    coeffs = complexify(system)
    if spec.condition.substitutions:
        coeffs = apply_center_condition(coeffs, spec.condition)
    seq = None
    if set(spec.stages) & {"symbolic", "exact", "stretch"} or any(t.k <= spec.depth for t in spec.numeric):
        with _timed(report, "symbolic"):
            seq = _symbolic(spec, coeffs, report)
    exact_keys = []
    if "exact" in spec.stages and spec.name == "lambda4":
        with _timed(report, "exact"):
            exact_keys = _lambda4_exact(seq, report)
    numeric_keys = {}
    if "numeric" in spec.stages:
        with _timed(report, "numeric"):
            for i, task in enumerate(spec.numeric):
                numeric_keys[_run_numeric(spec, coeffs, seq, task, i, report)] = task
    if "stretch" in spec.stages and spec.max_order is not None:
        with _timed(report, "stretch"):
            _run_stretch(spec, seq, report, exact_keys)
    _verdicts(spec, report, seq, numeric_keys)
    return report


def tau_report(system: PlanarPolySystem, condition: CenterConditionSet, max_k: int, reduce: bool = True,
               point: Mapping | None = None, precision: int = 60) -> CaseReport:
    """Symbolic tau (optionally reduced) and, if ``point`` is given, values there.

    Raises :class:`IndeterminateError` when a value at the point cannot be
    told apart from zero at ``precision``.
    """
    coeffs = complexify(system)
    if condition.substitutions:
        coeffs = apply_center_condition(coeffs, condition)
    report = CaseReport(system.name or "system", {"system": system.to_dict(), "condition": condition.to_dict(),
                                                  "max_k": max_k, "reduce": reduce})
    with _timed(report, "symbolic"):
        seq = compute_tau(coeffs, max_k)
        if reduce:
            seq = reduce_tau_sequence(seq, condition.free or None)
    for k in range(1, max_k + 1):
        frag = seq.report_fragment(k)
        frag["raw_text"] = str(seq.raw[k - 1])
        if reduce:
            frag["reduced_text"] = str(seq.reduced[k - 1])
        report.tau.append(frag)
    report.add_evidence("tau.symbolic", "proof", depth=max_k, reduced=reduce,
                        first_nonzero_raw=seq.first_nonzero("raw"))
    if seq.first_nonzero("raw") is None:
        report.add_verdict("isochronous", f"isochronous to depth {max_k}: tau_1..tau_{max_k} vanish identically",
                           ["tau.symbolic"])
    if point is not None:
        values = tau_at_point(coeffs, point, max_k, precision)
        exact = all(v.exact for v in values)
        tier = "proof" if exact else "numeric-evidence"
        entries = [{"k": j, "value": str(v.value) if v.exact else mpmath.nstr(v.value, precision),
                    "error": v.error} for j, v in enumerate(values, start=1)]
        key = report.add_evidence("tau.point", tier, point={k: str(v) for k, v in point.items()},
                                  values=entries)
        first = None
        for j, v in enumerate(values, start=1):
            if v.sign() != 0:
                first = j
                break
        if first is None:
            report.add_verdict("weak-center-order", f"tau_1..tau_{max_k} vanish at the point: "
                               f"order at least {max_k}", [key])
        else:
            report.add_verdict("weak-center-order",
                               f"first nonzero period constant at the point is tau_{first}: "
                               f"weak center of order {first - 1}", [key])
    return report


# -- emission ----------------------------------------------------------------------

def emit_report(report: CaseReport, format: str = "structured", timings: bool = False) -> str:
    """``structured``: sorted JSON, stable across runs with equal spec and seed
    (timings only on request).  ``markdown``: the same payload as tables."""
    data = report.to_dict(timings=timings)
    if format == "structured":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if format == "markdown":
        return _markdown(data)
    raise ValueError(f"unknown format {format!r}")


def _markdown(d: Mapping) -> str:
    lines = [f"# Case {d['name']}", "", f"schema {d['schema_version']}, status: **{d['status']}**", ""]
    for m in d["markers"]:
        lines.append(f"> {m}")
    if d["markers"]:
        lines.append("")
    if d["tau"]:
        lines += ["## Period constants", ""]
        for t in d["tau"]:
            text = t.get("reduced_text") or t.get("raw_text")
            lines.append(f"- tau_{t['k']} = {text}")
        lines.append("")
    if d["verdicts"]:
        lines += ["## Verdicts", "", "| kind | statement | tier | evidence |", "|---|---|---|---|"]
        for v in d["verdicts"]:
            lines.append(f"| {v['kind']} | {v['statement']} | {v['tier']} | {', '.join(v['evidence'])} |")
        lines.append("")
    for key in sorted(d["evidence"]):
        ev = d["evidence"][key]
        lines += [f"## Evidence `{key}` ({ev['tier']})", ""]
        points = ev.get("points")
        rest = {k: v for k, v in ev.items() if k not in ("tier", "points")}
        for k in sorted(rest):
            lines.append(f"- {k}: `{json.dumps(rest[k], sort_keys=True)}`")
        if points:
            names = list(points[0]["values"])
            lines += ["", "| " + " | ".join(names + ["tau_next", "jacobian_det"]) + " |",
                      "|" + "---|" * (len(names) + 2)]
            for p in points:
                cells = [p["values"][n] for n in names]
                cells.append(p.get("tau_next", {}).get("value", ""))
                cells.append(p.get("jacobian_det", {}).get("value", ""))
                lines.append("| " + " | ".join(cells) + " |")
        lines.append("")
    if "timings" in d:
        lines += ["## Timings", ""] + [f"- {k}: {v} s" for k, v in sorted(d["timings"].items())] + [""]
    return "\n".join(lines)


__all__ = [
    "CaseSpec", "NumericTask", "CaseReport", "Verdict", "SCHEMA_VERSION", "TIERS",
    "case_spec", "run_case", "tau_report", "emit_report", "load_system", "load_point",
    "resolve_system", "resolve_condition", "define_builtin", "weakest",
]
