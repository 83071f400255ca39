import json

import pytest

from conftest import lambda4_report
from periodconst import cli
from periodconst.pipeline import (TIERS, CaseReport, NumericTask, case_spec, emit_report, run_case, tau_report,
                                  weakest)
from periodconst.system import builtin_condition, define_builtin


def check_tiers(report):
    for v in report.verdicts:
        cited = [report.evidence[e]["tier"] for e in v.evidence]
        assert v.tier == weakest(cited)
        if "numeric-evidence" in cited:
            assert v.tier == "numeric-evidence"


def test_weakest():
    assert weakest(["proof", "numeric-evidence", "symbolic+isolation"]) == "numeric-evidence"
    assert weakest(["proof", "symbolic+isolation"]) == "symbolic+isolation"
    assert weakest([]) == "proof"
    assert TIERS[0] == "proof"


def test_linear_case_is_isochronous():
    report = run_case(case_spec("linear"))
    (v,) = report.verdicts
    assert v.kind == "isochronous" and v.tier == "proof"


def test_lambda4_order_bound_is_a_proof():
    report = lambda4_report()
    ev = report.evidence
    assert ev["exact.tau2_slice"]["equal"]
    assert ev["exact.resultant_23_a4_0"]["only_root_is_zero"]
    assert ev["exact.resultant_23_sweep"]["real_zero_set_is_origin"]
    bound = [v for v in report.verdicts if v.kind == "weak-center-order-bound"]
    assert [v.tier for v in bound] == ["proof"]
    assert "at most 2" in bound[0].statement


def test_lambda4_critical_period_verdict_is_numeric():
    report = lambda4_report()
    (cp,) = [v for v in report.verdicts if v.kind == "critical-periods"]
    assert cp.statement.startswith("exactly 2")
    assert cp.tier == "numeric-evidence"
    check_tiers(report)


def test_verdict_needs_existing_evidence():
    report = CaseReport("x")
    report.add_evidence("a", "proof")
    with pytest.raises(KeyError):
        report.add_verdict("k", "s", ["a", "missing"])
    with pytest.raises(ValueError):
        report.add_evidence("b", "certain")


def test_report_round_trip():
    report = lambda4_report()
    data = json.loads(emit_report(report))
    again = CaseReport.from_dict(data)
    assert again.to_dict() == report.to_dict()
    assert emit_report(again) == emit_report(report)


def small_lambda4(seed=0):
    return case_spec("lambda4", stages=("symbolic", "numeric"), seed=seed,
                     numeric=(NumericTask(2, {"a2": "1", "a4": "1"}, 200),))


def test_structured_output_is_deterministic():
    a = emit_report(run_case(small_lambda4()))
    b = emit_report(run_case(small_lambda4()))
    assert a == b
    assert "timings" not in json.loads(a)


def test_markdown_carries_the_numeric_payload():
    report = run_case(small_lambda4())
    md = emit_report(report, "markdown")
    points = report.evidence["numeric.0"]["points"]
    assert points
    for p in points:
        for value in p["values"].values():
            assert value in md
        assert p["tau_next"]["value"] in md and p["jacobian_det"]["value"] in md
    for v in report.verdicts:
        assert v.statement in md


def test_sliced_search_gives_no_bound():
    report = run_case(small_lambda4())
    assert not [v for v in report.verdicts if v.kind == "weak-center-order-bound"]
    (cp,) = [v for v in report.verdicts if v.kind == "critical-periods"]
    assert cp.statement.startswith("at least 2") and cp.tier == "numeric-evidence"


def test_budget_exceeded_gives_a_partial_report():
    report = run_case(case_spec("lambda1", stages=("symbolic", "stretch"), budget_seconds=1.0))
    assert report.status == "partial"
    assert any(m.startswith("budget exceeded") for m in report.markers)
    assert "elimination.partial" in report.evidence
    # the symbolic tier still completed
    assert report.evidence["tau.symbolic"]["certificates"] == "verified"


def test_spec_validation():
    with pytest.raises(ValueError, match="square"):
        case_spec("lambda1", numeric=(NumericTask(2, {}, 10),))
    with pytest.raises(ValueError, match="permutation"):
        case_spec("lambda1", order=("a3", "a7", "a2"))
    with pytest.raises(ValueError, match="stages"):
        case_spec("lambda1", stages=("symbolic", "magic"))
    with pytest.raises(KeyError):
        case_spec("lambda9")


def test_tau_report_at_a_point():
    report = tau_report(define_builtin("z2-quintic"), builtin_condition("lambda1"), 2,
                        point={"a3": "-16/3", "a7": "0", "a2": "0", "a4": "0"})
    (v,) = [v for v in report.verdicts if v.kind == "weak-center-order"]
    assert v.tier == "proof" and "tau_2" in v.statement


# -- command line ----------------------------------------------------------------


def run_cli(*args):
    return cli.main([str(a) for a in args])


def test_cli_tau(tmp_path, capsys):
    out = tmp_path / "tau.json"
    assert run_cli("tau", "--system", "z2-quintic", "--condition", "lambda1", "--max-k", 2, "--reduce",
                   "--out", out) == 0
    data = json.loads(out.read_text())
    assert [t["k"] for t in data["tau"]] == [1, 2]
    assert run_cli("tau", "--system", "linear", "--max-k", 3, "--format", "markdown") == 0
    assert "isochronous" in capsys.readouterr().out


def test_cli_invalid_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"parameters": [], "xdot": [{"exponents": [0, 1], "re": "3/0"}],
                               "ydot": [{"exponents": [1, 0], "re": "1"}]}))
    assert run_cli("tau", "--system", bad, "--max-k", 1) == 2
    assert run_cli("tau", "--system", "no-such-system", "--max-k", 1) == 2
    assert run_cli("solve", "--case", "lambda4", "--k", 3) == 2
    assert run_cli("case", "--name", "lambda9") == 2
    assert run_cli("solve", "--case", "lambda4", "--k", 4, "--box", "3:1") == 2


def test_cli_indeterminate(tmp_path):
    point = tmp_path / "point.json"
    point.write_text(json.dumps({"a3": "-5." + "3" * 30, "a7": "0.0", "a2": "0.0", "a4": "0.0"}))
    assert run_cli("tau", "--system", "z2-quintic", "--condition", "lambda1", "--max-k", 1,
                   "--numeric-at", point, "--precision", 20) == 4


def test_cli_budget(tmp_path):
    out = tmp_path / "elim.json"
    assert run_cli("eliminate", "--case", "lambda1", "--order", "a3,a7,a2", "--budget-seconds", 1,
                   "--out", out) == 3
    assert json.loads(out.read_text())["status"] == "budget exceeded"
    assert run_cli("case", "--name", "lambda1", "--stages", "symbolic,stretch", "--budget-seconds", 1,
                   "--out", tmp_path / "case.json") == 3


def test_cli_eliminate_small(tmp_path):
    out = tmp_path / "elim.json"
    assert run_cli("eliminate", "--case", "lambda4", "--order", "a3", "--depth", 2, "--out", out) == 0
    data = json.loads(out.read_text())
    assert data["status"] == "complete" and len(data["steps"]) == 1


def test_cli_solve_and_verify(tmp_path):
    out = tmp_path / "solve.json"
    assert run_cli("solve", "--case", "lambda4", "--k", 2, "--fix", "a2=1", "--fix", "a4=1", "--starts", 200,
                   "--out", out) == 0
    data = json.loads(out.read_text())
    assert data["count"] >= 1 and data["tier"] == "numeric-evidence"
    params = tmp_path / "params.json"
    params.write_text(json.dumps(dict.fromkeys(("a2", "a3", "a4", "a6", "a7", "a8", "a9", "a10"), "0")))
    out = tmp_path / "verify.json"
    assert run_cli("verify", "--system", "z2-quintic", "--params", params, "--out", out) == 0
    assert json.loads(out.read_text())["check"]["agrees"]
    # an absurd tolerance turns the same comparison into a reported mismatch
    assert run_cli("verify", "--system", "z2-quintic", "--params", params, "--rel-tol", 1e-15,
                   "--out", out) == 1
