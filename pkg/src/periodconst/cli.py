"""Command line entry point: ``periodconst <command> ...``.

Exit codes: 0 success, 1 a numeric cross-check disagreed, 2 invalid input,
3 budget exceeded (a partial report is still written), 4 a sign could not
be decided at the requested precision.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import mpmath

from . import __version__
from .elimination import BudgetExceeded, CommonFactorError, run_elimination_chain
from .oracle import (IllConditionedFit, NotACenterError, fit_period_series, geometric_ladder,
                     sample_periods)
from .period import IndeterminateError, compute_tau, reduce_tau_sequence, tau_at_point
from .pipeline import (ALL_STAGES, NumericTask, case_spec, emit_report, load_point, resolve_condition,
                       resolve_system, run_case, tau_report)
from .poly import rational
from .realroots import TauSystem, count_real_roots, multistart_solve, presolve_linear
from .system import (NonCanonicalSystemError, SystemFormatError, apply_center_condition,
                     builtin_condition, complexify, define_builtin)

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_BUDGET, EXIT_INDETERMINATE = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(data, out: str | None = None) -> None:
    _write(json.dumps(data, indent=2, sort_keys=True) + "\n", out)


def _box(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--box expects LO:HI, got {text!r}") from None
    if not lo < hi:
        raise UsageError(f"empty box {text!r}")
    return lo, hi


def _case_coeffs(name: str):
    cond = builtin_condition(name)
    return cond, apply_center_condition(complexify(define_builtin("z2-quintic")), cond)


# -- commands ------------------------------------------------------------------------

def cmd_tau(args) -> int:
    system = resolve_system(args.system)
    cond = resolve_condition(args.condition, system)
    point = load_point(args.numeric_at) if args.numeric_at else None
    report = tau_report(system, cond, args.max_k, args.reduce, point, args.precision)
    _write(emit_report(report, args.format), args.out)
    return EXIT_OK


def cmd_eliminate(args) -> int:
    cond, coeffs = _case_coeffs(args.case)
    order = tuple(args.order.split(",")) if args.order else tuple(cond.free[:-1])
    unknown = [v for v in order if v not in cond.free]
    if unknown:
        raise UsageError(f"order mentions {unknown}, not free parameters of {cond.name}")
    depth = args.depth or len(order) + 1
    seq = reduce_tau_sequence(compute_tau(coeffs, depth), cond.free)
    last = [v for v in cond.free if v not in order]
    status, code, steps, terminal = "complete", EXIT_OK, [], []
    try:
        trace = run_elimination_chain(seq.reduced, order, budget_seconds=args.budget_seconds,
                                      budget_bytes=args.budget_bytes)
    except (BudgetExceeded, CommonFactorError) as exc:
        trace = exc.trace
        status = "budget exceeded" if isinstance(exc, BudgetExceeded) else "common factor detected"
        code = EXIT_BUDGET if isinstance(exc, BudgetExceeded) else EXIT_INDETERMINATE
    if trace is not None:
        steps = [{"output": s.output, "inputs": list(s.inputs), "variable": s.variable,
                  "degrees": s.raw.degrees(), "terms": len(s.raw.keys()),
                  "squarefree_degrees": s.squarefree.degrees()} for s in trace.steps]
        if status == "complete" and len(last) == 1:
            for t in trace.terminal:
                entry = {"degrees": t.degrees()}
                if set(t.support_variables()) <= set(last) and t.degree(last[0]) > 0:
                    entry["real_roots"] = count_real_roots(t, last[0])
                terminal.append(entry)
    _dump({"case": cond.name, "order": list(order), "depth": depth, "status": status,
           "steps": steps, "terminal": terminal}, args.out)
    return code


def cmd_solve(args) -> int:
    cond, coeffs = _case_coeffs(args.case)
    fixed = dict(kv.split("=", 1) for kv in args.fix) if args.fix else {}
    variables = [v for v in cond.free if v not in fixed]
    if len(variables) != args.k:
        raise UsageError(f"k={args.k} equations need {args.k} unknowns, have {variables}")
    fixed_q = {v: rational(x) for v, x in fixed.items()}
    system = TauSystem(coeffs, args.k, variables, fixed_q)
    guides = []
    if args.k <= 4:
        seq = reduce_tau_sequence(compute_tau(coeffs, args.k), cond.free)
        rems = [seq.remainder(j).substitute(fixed_q) if fixed_q else seq.remainder(j) for j in range(1, args.k + 1)]
        guides.append(presolve_linear([r.with_variables(variables) for r in rems], variables))
    pts = multistart_solve(system, _box(args.box), args.starts, args.precision, args.seed, guides=guides)
    _dump({"case": cond.name, "k": args.k, "variables": variables, "fixed": fixed,
           "starts": args.starts, "box": list(_box(args.box)), "seed": args.seed, "count": len(pts),
           "tier": "numeric-evidence", "points": [p.to_dict(args.precision // 2) for p in pts]}, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    system = resolve_system(args.system)
    params = load_point(args.params) if args.params else {}
    hs = geometric_ladder(args.h_min, args.h_max, args.samples)
    samples = sample_periods(system, params, hs, tol=args.tol)
    fit = fit_period_series(samples, args.k)
    out = {"samples": [s.to_dict() for s in samples], "fit": fit.to_dict()}
    code = EXIT_OK
    tau1 = tau_at_point(complexify(system), params, 1)[0]
    expected = -math.pi * float(tau1)
    err = abs(fit.p(1) - expected)
    ok = err <= args.rel_tol * max(abs(expected), 1e-300) if expected else err <= args.rel_tol
    out["check"] = {"quantity": "p2 = -pi*tau_1", "tau_1": mpmath.nstr(tau1.value, 20) if not tau1.exact
                    else str(tau1.value), "expected": expected, "fitted": fit.p(1),
                    "abs_error": err, "rel_tol": args.rel_tol, "agrees": bool(ok)}
    if not ok:
        code = EXIT_MISMATCH
    _dump(out, args.out)
    return code


def cmd_case(args) -> int:
    overrides = {}
    if args.stages:
        overrides["stages"] = tuple(args.stages.split(","))
    for flag in ("precision", "seed", "budget_seconds", "budget_bytes"):
        if getattr(args, flag) is not None:
            overrides[flag] = getattr(args, flag)
    if args.box:
        overrides["box"] = _box(args.box)
    spec = case_spec(args.name, **overrides)
    if args.starts is not None:
        spec = case_spec(args.name, **overrides,
                         numeric=tuple(NumericTask(t.k, t.fixed, args.starts, t.purpose) for t in spec.numeric))
    report = run_case(spec)
    _write(emit_report(report, args.format, timings=args.timings), args.out)
    return EXIT_BUDGET if any(m.startswith("budget exceeded") for m in report.markers) else EXIT_OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="periodconst", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau", help="period constants of a system under a center condition")
    p.add_argument("--system", required=True, help="builtin name or system JSON file")
    p.add_argument("--condition", default="none", help="lambda1..lambda4, a condition JSON file, or none")
    p.add_argument("--max-k", type=int, required=True)
    p.add_argument("--reduce", action="store_true")
    p.add_argument("--numeric-at", help="JSON object of parameter values")
    p.add_argument("--precision", type=int, default=60)
    p.add_argument("--out")
    p.add_argument("--format", choices=("structured", "markdown"), default="structured")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("eliminate", help="resultant tower for one case")
    p.add_argument("--case", required=True)
    p.add_argument("--order", help="comma separated variables to eliminate, e.g. a3,a7,a2")
    p.add_argument("--depth", type=int, help="number of tau to use (default: len(order) + 1)")
    p.add_argument("--budget-seconds", type=float)
    p.add_argument("--budget-bytes", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eliminate)

    p = sub.add_parser("solve", help="multistart real solutions of tau_1..tau_k")
    p.add_argument("--case", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--fix", action="append", help="fix a parameter, e.g. --fix a4=0 (repeatable)")
    p.add_argument("--starts", type=int, default=2000)
    p.add_argument("--box", default="-20:20")
    p.add_argument("--precision", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="compare tau_1 with the integrated period function")
    p.add_argument("--system", required=True)
    p.add_argument("--params", help="JSON object of parameter values")
    p.add_argument("--k", type=int, default=4, help="fit powers h^2..h^(2k)")
    p.add_argument("--h-min", type=float, default=0.02)
    p.add_argument("--h-max", type=float, default=0.15)
    p.add_argument("--samples", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-12, help="integrator tolerance")
    p.add_argument("--rel-tol", type=float, default=1e-4, help="agreement tolerance for p2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("case", help="full analysis of lambda1..lambda4 (or linear)")
    p.add_argument("--name", required=True)
    p.add_argument("--stages", help=f"comma separated subset of {','.join(ALL_STAGES)}")
    p.add_argument("--starts", type=int, help="override the multistart count of every numeric run")
    p.add_argument("--box")
    p.add_argument("--precision", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--budget-seconds", type=float)
    p.add_argument("--budget-bytes", type=int)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p.add_argument("--out")
    p.add_argument("--format", choices=("structured", "markdown"), default="structured")
    p.set_defaults(func=cmd_case)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IndeterminateError, IllConditionedFit) as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (UsageError, SystemFormatError, NonCanonicalSystemError, NotACenterError, KeyError, ValueError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
