import json

import pytest

from reesalg.builtins import BUILTINS, builtin_report, list_builtins, run_builtin
from reesalg.scenario import Scenario, ScenarioError, format_trace, run_scenario, trace_to_dict


def test_empty_steps_give_one_frame():
    tr = run_scenario(Scenario.from_dict({"vars": ["z", "x"], "algebras": {"G": "[z^2 + x^3 @ 2]"}}))
    assert len(tr) == 1 and tr.passed


def test_missing_keys():
    with pytest.raises(ScenarioError):
        Scenario.from_dict({"vars": ["x"]})


def test_bad_steps():
    doc = {"vars": ["z", "x"], "algebras": {"G": "[z^2 + x^3 @ 2]"}}
    with pytest.raises(ScenarioError):
        run_scenario(Scenario.from_dict({**doc, "steps": [{"kind": "teleport"}]}))
    with pytest.raises(ScenarioError):
        run_scenario(Scenario.from_dict({**doc, "steps": [{"kind": "blowup", "center": ["z"], "chart": "z"}]}))


def test_unknown_assertion_fails_without_crashing():
    doc = {"vars": ["x"], "algebras": {"G": "[x @ 1]"}, "assertions": [{"kind": "nope"}]}
    tr = run_scenario(Scenario.from_dict(doc))
    assert not tr.passed and tr.results[0].kind == "nope"


def test_failing_assertion_reported():
    doc = {"vars": ["x"], "algebras": {"G": "[x^3 @ 2]"},
           "assertions": [{"kind": "order", "algebra": "G", "point": [0], "expect": "2"}]}
    tr = run_scenario(Scenario.from_dict(doc))
    assert not tr.passed
    assert "FAIL" in format_trace(tr)


def test_frame_selectors():
    doc = {"vars": ["x", "t"], "algebras": {"G": "[x^2 @ 1]"},
           "steps": [{"kind": "blowup", "center": ["x", "t"], "chart": "t", "label": "first"}]}
    tr = run_scenario(Scenario.from_dict(doc))
    assert tr.frame_index("initial") == 0
    assert tr.frame_index("final") == 1 == tr.frame_index("first") == tr.frame_index(-1)
    with pytest.raises(ScenarioError):
        tr.frame_index("missing")


def test_catalogue():
    names = list_builtins()
    assert {"char2-counterexample", "hironaka-trick", "giraud-check", "restriction-check",
            "veronese-normalize-demo"} <= set(names)
    with pytest.raises(KeyError):
        run_builtin("nonexistent")


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtin_passes(name):
    traces = run_builtin(name)
    failures = [(t.scenario.name, r.description, r.detail) for t in traces for r in t.results if not r.passed]
    assert not failures


def test_char2_final_point():
    tr = run_builtin("char2-counterexample")[0]
    bo = tr.frames[-1].bo
    p = bo.ring.point({"z5": 0, "x5": 1, "t5": 1, "s": 0})
    from reesalg.rees import sing_membership
    assert sing_membership(bo["G"], p) and not sing_membership(bo["H"], p)


def test_reports_are_deterministic():
    a = builtin_report("veronese-normalize-demo", run_builtin("veronese-normalize-demo"))
    b = builtin_report("veronese-normalize-demo", run_builtin("veronese-normalize-demo"))
    assert a == b
    d = trace_to_dict(run_builtin("veronese-normalize-demo")[0])
    assert json.loads(json.dumps(d, default=str))["scenario"]
