import json

import pytest

from conwon.fixtures import INVALID_PROOFS, VALID_PROOF
from conwon.formula import Atom, parse_formula
from conwon.proofs import (
    CONWON_AXIOMS,
    RULES,
    SYSTEMS,
    V_AXIOMS,
    ProofError,
    ProofStep,
    check_proof,
    instantiate,
    is_tautology,
    load_proof,
    match_schema,
    soundness_sweep,
    tautological_consequence,
)
from conwon.semantics import SearchBounds, eval_cpm, find_countermodel


def pf(text):
    return parse_formula(text)


# --- inventory ------------------------------------------------------------


def test_axiom_inventory():
    names = [s.identifier for s in CONWON_AXIOMS]
    assert names == [
        "conwon.2a", "conwon.2b", "conwon.2c", "conwon.2d",
        "conwon.3a", "conwon.3b", "conwon.3c", "conwon.3d", "conwon.3e",
    ]
    assert [s.identifier for s in V_AXIOMS] == [f"v.rhd.{i}" for i in range(1, 7)]
    assert RULES == ("taut", "mp", "rcea", "rcec")
    assert set(SYSTEMS) == {"conwon", "v1"}
    assert SYSTEMS["v1"]["flat_only"] and not SYSTEMS["conwon"]["flat_only"]


def test_side_conditions_recorded():
    by_name = {s.identifier: s.conditions for s in CONWON_AXIOMS}
    assert by_name["conwon.2a"] == {"alpha": "propositional"}
    assert by_name["conwon.2b"] == {"alpha": "propositional", "chi": "closed"}
    for name in ("conwon.2c", "conwon.2d"):
        assert by_name[name] == {v: "propositional" for v in ("alpha", "beta", "gamma")}
    for name in ("conwon.3b", "conwon.3c", "conwon.3d", "conwon.3e"):
        assert all(c == "propositional" for c in by_name[name].values())
    assert all(not s.conditions for s in V_AXIOMS)


# --- matching and instantiation -------------------------------------------


def test_match_schema_positive():
    ax3b = next(s for s in CONWON_AXIOMS if s.identifier == "conwon.3b")
    binding = match_schema(ax3b, pf("[p]q -> [p](q | r)"))
    assert binding == {"alpha": Atom("p"), "gamma": Atom("q"), "delta": Atom("r")}
    assert instantiate(ax3b, binding) == pf("[p]q -> [p](q | r)")


def test_match_schema_side_condition():
    ax3a = next(s for s in CONWON_AXIOMS if s.identifier == "conwon.3a")
    assert match_schema(ax3a, pf("[p]p")) is not None
    # the bound antecedent must stay propositional
    assert match_schema(ax3a, pf("[p]q")) is None  # alpha would bind twice
    ax2b = next(s for s in CONWON_AXIOMS if s.identifier == "conwon.2b")
    assert match_schema(ax2b, pf("[p](q | [q]r) <-> ([p]q | [p][q]r)")) is not None
    assert match_schema(ax2b, pf("[p](q | r) <-> ([p]q | [p]r)")) is None


def test_v_axioms_match_with_modal_instances():
    ax1 = V_AXIOMS[0]
    f = parse_formula("(p |> q) |> (p |> q)", dialect="v")
    assert match_schema(ax1, f) is not None  # no side condition in system V


# --- tautology oracle -----------------------------------------------------


def test_tautology_oracle_treats_conditionals_opaquely():
    assert is_tautology(pf("[p]q | ~[p]q"))
    assert not is_tautology(pf("[p](q | ~q)"))  # not a propositional tautology
    assert is_tautology(pf("(p -> q) -> (~q -> ~p)"))
    assert tautological_consequence([pf("[p]q"), pf("[p]q -> r")], pf("r"))
    assert not tautological_consequence([pf("[p]q")], pf("[p]r"))
    # identical conditionals share one opaque atom
    assert tautological_consequence([], pf("[p]q -> [p]q"))


# --- checking proofs ------------------------------------------------------


def test_valid_proof_accepted():
    system, steps = load_proof(VALID_PROOF)
    verdict = check_proof(steps, system)
    assert verdict.ok, verdict.errors
    assert verdict.message == "accepted"


def test_invalid_proofs_rejected_with_diagnostics():
    assert len(INVALID_PROOFS) >= 10
    for name, (proof, expected) in INVALID_PROOFS.items():
        system, steps = load_proof(proof)
        verdict = check_proof(steps, system)
        assert not verdict.ok, name
        assert expected in " ".join(verdict.errors), (name, verdict.errors)
        # diagnostics carry 1-based step numbers
        assert verdict.errors[0].startswith("step ")


def test_rcea_and_rcec_accepted():
    proof = {
        "system": "conwon",
        "steps": [
            {"formula": "(p & q) <-> (q & p)", "by": {"rule": "taut", "from": []}},
            {"formula": "[p & q]r <-> [q & p]r", "by": {"rule": "rcea", "from": [1]}},
            {"formula": "[r](p & q) <-> [r](q & p)", "by": {"rule": "rcec", "from": [1]}},
        ],
    }
    system, steps = load_proof(proof)
    verdict = check_proof(steps, system)
    assert verdict.ok, verdict.errors


def test_checker_keeps_reporting_after_a_failure():
    proof = {
        "system": "conwon",
        "steps": [
            {"formula": "[p]q", "by": {"axiom": "conwon.3a"}},
            {"formula": "[q]r", "by": {"axiom": "conwon.3a"}},
        ],
    }
    system, steps = load_proof(proof)
    verdict = check_proof(steps, system)
    assert len(verdict.errors) == 2


def test_appending_steps_preserves_earlier_diagnostics():
    system, steps = load_proof(VALID_PROOF)
    extended = steps + [ProofStep(pf("[p]q"), {"rule": "taut", "from": []})]
    verdict = check_proof(extended, system)
    assert not verdict.ok
    assert all("step 4" in e for e in verdict.errors)


def test_load_proof_errors():
    with pytest.raises(ProofError, match="unknown system"):
        load_proof({"system": "nope", "steps": []})
    with pytest.raises(ProofError, match="'formula' and 'by'"):
        load_proof({"system": "conwon", "steps": [{"formula": "p"}]})
    with pytest.raises(ProofError, match="step 1"):
        load_proof({"system": "conwon",
                    "steps": [{"formula": "p &", "by": {"rule": "taut", "from": []}}]})


def test_load_proof_from_file(tmp_path):
    path = tmp_path / "proof.json"
    path.write_text(json.dumps(VALID_PROOF))
    system, steps = load_proof(path)
    assert system == "conwon" and len(steps) == 3


# --- proved formulas hold semantically ------------------------------------


def test_accepted_conclusions_are_valid_in_bounds():
    _system, steps = load_proof(VALID_PROOF)
    bounds = SearchBounds(2, 3)
    for step in steps:
        assert find_countermodel(step.formula, bounds) is None


def test_soundness_sweep_smoke():
    report = soundness_sweep("conwon", SearchBounds(2, 2))
    assert report.instances > 0
    assert report.failures == []
    report_v = soundness_sweep("v1", SearchBounds(2, 2))
    assert report_v.instances > 0
    assert report_v.failures == []
