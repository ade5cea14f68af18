"""Hilbert-style proof checking for the systems conwon and v1.

Axiom schemas are stored as parsed template formulas whose atoms are
metavariables; instantiation is structural unification plus per-variable
side conditions (propositional, closed).  Propositional reasoning is
handled by a tautology rule: a step may be justified as a tautological
consequence of earlier steps, decided by truth tables over skeletons in
which maximal conditional subformulas are opaque atoms.  v1 is the flat
restriction of the comparative-possibility system: every step formula
must be flat.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .formula import (
    And,
    Atom,
    CondBox,
    CondCorner,
    Falsum,
    Formula,
    Not,
    ParseError,
    is_closed,
    is_flat,
    is_propositional,
    parse_formula,
    render,
)


class ProofError(Exception):
    """Malformed proof file."""


# ---------------------------------------------------------------------------
# Schemas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Schema:
    identifier: str
    template: Formula
    conditions: Mapping[str, str]  # metavariable -> "propositional" | "closed"


def _schema(identifier: str, text: str, dialect: str, **conditions: str) -> Schema:
    return Schema(identifier, parse_formula(text, dialect=dialect), dict(conditions))


PROP = "propositional"
CLOSED = "closed"

CONWON_AXIOMS: Tuple[Schema, ...] = (
    _schema("conwon.2a", "[alpha](phi & psi) <-> ([alpha]phi & [alpha]psi)", "conwon",
            alpha=PROP),
    _schema("conwon.2b", "[alpha](phi | chi) <-> ([alpha]phi | [alpha]chi)", "conwon",
            alpha=PROP, chi=CLOSED),
    _schema("conwon.2c",
            "[alpha][beta]gamma <-> "
            "(E alpha -> ((E (alpha & beta) & [alpha & beta]gamma)"
            " | (~E (alpha & beta) & A (beta -> gamma))))",
            "conwon", alpha=PROP, beta=PROP, gamma=PROP),
    _schema("conwon.2d",
            "[alpha]<beta>gamma <-> "
            "(E alpha -> ((E (alpha & beta) & <alpha & beta>gamma)"
            " | (~E (alpha & beta) & E (beta & gamma))))",
            "conwon", alpha=PROP, beta=PROP, gamma=PROP),
    _schema("conwon.3a", "[alpha]alpha", "conwon", alpha=PROP),
    _schema("conwon.3b", "[alpha]gamma -> [alpha](gamma | delta)", "conwon",
            alpha=PROP, gamma=PROP, delta=PROP),
    _schema("conwon.3c", "([alpha]beta & [alpha]gamma) -> [alpha & beta]gamma", "conwon",
            alpha=PROP, beta=PROP, gamma=PROP),
    _schema("conwon.3d", "([alpha]gamma & [beta]gamma) -> [alpha | beta]gamma", "conwon",
            alpha=PROP, beta=PROP, gamma=PROP),
    _schema("conwon.3e", "(<alpha>beta & [alpha]gamma) -> [alpha & beta]gamma", "conwon",
            alpha=PROP, beta=PROP, gamma=PROP),
)

V_AXIOMS: Tuple[Schema, ...] = (
    _schema("v.rhd.1", "phi |> phi", "v"),
    _schema("v.rhd.2", "((phi |> chi) & (phi |> xi)) -> (phi |> (chi & xi))", "v"),
    _schema("v.rhd.3", "(phi |> chi) -> (phi |> (chi | xi))", "v"),
    _schema("v.rhd.4", "((phi |> psi) & (phi |> chi)) -> ((phi & psi) |> chi)", "v"),
    _schema("v.rhd.5", "((phi |> chi) & (psi |> chi)) -> ((phi | psi) |> chi)", "v"),
    _schema("v.rhd.6", "(~(phi |> ~psi) & (phi |> chi)) -> ((phi & psi) |> chi)", "v"),
)

RULES: Tuple[str, ...] = ("taut", "mp", "rcea", "rcec")

SYSTEMS: Dict[str, Dict] = {
    "conwon": {"axioms": CONWON_AXIOMS, "dialect": "conwon", "flat_only": False},
    "v1": {"axioms": V_AXIOMS, "dialect": "v", "flat_only": True},
}


def _meets(f: Formula, condition: str) -> bool:
    return is_propositional(f) if condition == PROP else is_closed(f)


def match_schema(schema: Schema, f: Formula) -> Optional[Dict[str, Formula]]:
    """Substitution instantiating the template to ``f``, or ``None``."""
    binding: Dict[str, Formula] = {}

    def unify(t: Formula, g: Formula) -> bool:
        if isinstance(t, Atom):
            if t.name in binding:
                return binding[t.name] == g
            binding[t.name] = g
            return True
        if type(t) is not type(g):
            return False
        if isinstance(t, Falsum):
            return True
        if isinstance(t, Not):
            return unify(t.child, g.child)
        if isinstance(t, And):
            return unify(t.left, g.left) and unify(t.right, g.right)
        if isinstance(t, CondBox):
            return unify(t.antecedent, g.antecedent) and unify(t.consequent, g.consequent)
        if isinstance(t, CondCorner):
            return unify(t.left, g.left) and unify(t.right, g.right)
        return False

    if not unify(schema.template, f):
        return None
    for var, condition in schema.conditions.items():
        if var in binding and not _meets(binding[var], condition):
            return None
    return binding


def instantiate(schema: Schema, subst: Mapping[str, Formula]) -> Formula:
    def walk(t: Formula) -> Formula:
        if isinstance(t, Atom):
            if t.name not in subst:
                raise ProofError(f"substitution misses metavariable {t.name!r}")
            return subst[t.name]
        if isinstance(t, Falsum):
            return t
        if isinstance(t, Not):
            return Not(walk(t.child))
        if isinstance(t, And):
            return And(walk(t.left), walk(t.right))
        if isinstance(t, CondBox):
            return CondBox(walk(t.antecedent), walk(t.consequent))
        return CondCorner(walk(t.left), walk(t.right))

    return walk(schema.template)


# ---------------------------------------------------------------------------
# Tautology oracle over conditional-opaque skeletons
# ---------------------------------------------------------------------------


def _skeleton(f: Formula, table: Dict[Formula, str]) -> Formula:
    """Replace maximal conditional subformulas by shared opaque atoms."""
    if isinstance(f, (CondBox, CondCorner)):
        if f not in table:
            table[f] = f"_c{len(table)}"
        return Atom(table[f])
    if isinstance(f, Not):
        return Not(_skeleton(f.child, table))
    if isinstance(f, And):
        return And(_skeleton(f.left, table), _skeleton(f.right, table))
    return f


def _truth(f: Formula, row: Mapping[str, bool]) -> bool:
    if isinstance(f, Atom):
        return row.get(f.name, False)
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Not):
        return not _truth(f.child, row)
    return _truth(f.left, row) and _truth(f.right, row)


def tautological_consequence(premises: Sequence[Formula], conclusion: Formula) -> bool:
    table: Dict[Formula, str] = {}
    skel_premises = [_skeleton(p, table) for p in premises]
    skel_conclusion = _skeleton(conclusion, table)
    names = sorted(set().union(*(
        _atom_names(s) for s in skel_premises + [skel_conclusion]
    )))
    for bits in itertools.product([False, True], repeat=len(names)):
        row = dict(zip(names, bits))
        if all(_truth(p, row) for p in skel_premises) and not _truth(skel_conclusion, row):
            return False
    return True


def _atom_names(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset({f.name})
    if isinstance(f, Not):
        return _atom_names(f.child)
    if isinstance(f, And):
        return _atom_names(f.left) | _atom_names(f.right)
    return frozenset()


def is_tautology(f: Formula) -> bool:
    return tautological_consequence([], f)


# ---------------------------------------------------------------------------
# Proof steps and checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProofStep:
    formula: Formula
    by: Mapping  # {"axiom": id, "subst": {...}} or {"rule": name, "from": [...]}


@dataclass
class Verdict:
    ok: bool
    system: str
    errors: List[str] = field(default_factory=list)

    @property
    def message(self) -> str:
        return "accepted" if self.ok else "; ".join(self.errors)


def _match_iff(f: Formula) -> Optional[Tuple[Formula, Formula]]:
    # desugared a <-> b is ~(a & ~b) & ~(b & ~a)
    if not isinstance(f, And):
        return None
    halves = []
    for part in (f.left, f.right):
        if not (isinstance(part, Not) and isinstance(part.child, And)
                and isinstance(part.child.right, Not)):
            return None
        halves.append((part.child.left, part.child.right.child))
    (a, b), (b2, a2) = halves
    if a == a2 and b == b2:
        return a, b
    return None


def _match_implies(f: Formula) -> Optional[Tuple[Formula, Formula]]:
    if isinstance(f, Not) and isinstance(f.child, And) and isinstance(f.child.right, Not):
        return f.child.left, f.child.right.child
    return None


def _conditional_parts(f: Formula) -> Optional[Tuple[Formula, Formula]]:
    if isinstance(f, CondBox):
        return f.antecedent, f.consequent
    if isinstance(f, CondCorner):
        return f.left, f.right
    return None


def _check_replacement(step: ProofStep, premise: Formula, rule: str, dialect: str) -> Optional[str]:
    """Validate an rcea/rcec application; returns an error or None."""
    prem = _match_iff(premise)
    if prem is None:
        return f"{rule} premise is not a biconditional"
    concl = _match_iff(step.formula)
    if concl is None:
        return f"{rule} conclusion is not a biconditional"
    left = _conditional_parts(concl[0])
    right = _conditional_parts(concl[1])
    if left is None or right is None or type(concl[0]) is not type(concl[1]):
        return f"{rule} conclusion must relate two conditionals"
    a, b = prem
    if rule == "rcea":
        shape_ok = left[0] == a and right[0] == b and left[1] == right[1]
    else:
        shape_ok = left[1] == a and right[1] == b and left[0] == right[0]
    if not shape_ok:
        return f"{rule} conclusion does not replace the equivalent parts"
    if dialect == "conwon":
        # the rules restrict every displayed formula to the propositional base
        parts = (a, b, left[1]) if rule == "rcea" else (a, b, left[0])
        for g in parts:
            if not is_propositional(g):
                return f"{rule} requires propositional arguments, got {render(g)!r}"
    return None


def check_proof(steps: Sequence[ProofStep], system: str) -> Verdict:
    if system not in SYSTEMS:
        return Verdict(False, system, [f"unknown system {system!r}"])
    spec = SYSTEMS[system]
    axioms = {s.identifier: s for s in spec["axioms"]}
    verdict = Verdict(True, system)

    def fail(i: int, msg: str) -> None:
        verdict.ok = False
        verdict.errors.append(f"step {i + 1}: {msg}")

    for i, step in enumerate(steps):
        if spec["flat_only"] and not is_flat(step.formula):
            fail(i, "formula is not flat")
            continue
        by = step.by
        if "axiom" in by:
            name = by["axiom"]
            if name not in axioms:
                fail(i, f"axiom {name!r} is not part of system {system!r}")
                continue
            schema = axioms[name]
            if "subst" in by:
                subst = by["subst"]
                try:
                    if instantiate(schema, subst) != step.formula:
                        fail(i, f"substitution does not yield the step formula for {name}")
                        continue
                except ProofError as exc:
                    fail(i, str(exc))
                    continue
                bad = [
                    v for v, cond in schema.conditions.items()
                    if v in subst and not _meets(subst[v], cond)
                ]
                if bad:
                    fail(i, f"{name}: side condition violated for {', '.join(sorted(bad))}")
                    continue
            elif match_schema(schema, step.formula) is None:
                fail(i, f"formula is not an instance of {name}")
                continue
        elif "rule" in by:
            rule = by["rule"]
            refs = by.get("from", [])
            if rule not in RULES:
                fail(i, f"unknown rule {rule!r}")
                continue
            if any(not isinstance(r, int) or not 1 <= r <= i for r in refs):
                fail(i, "rule premises must reference earlier steps (1-based)")
                continue
            premises = [steps[r - 1].formula for r in refs]
            if rule == "taut":
                if not tautological_consequence(premises, step.formula):
                    fail(i, "not a tautological consequence of the cited steps")
            elif rule == "mp":
                if len(premises) != 2:
                    fail(i, "modus ponens needs exactly two premises")
                    continue
                minor, major = premises
                parts = _match_implies(major)
                if parts is None or parts[0] != minor or parts[1] != step.formula:
                    fail(i, "premises do not fit modus ponens")
            else:
                if len(premises) != 1:
                    fail(i, f"{rule} needs exactly one premise")
                    continue
                err = _check_replacement(step, premises[0], rule, spec["dialect"])
                if err is not None:
                    fail(i, err)
        else:
            fail(i, "justification needs 'axiom' or 'rule'")
    return verdict


# ---------------------------------------------------------------------------
# Proof files
# ---------------------------------------------------------------------------


def load_proof(source) -> Tuple[str, List[ProofStep]]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = source
    if not isinstance(data, dict) or "steps" not in data:
        raise ProofError("proof file needs 'system' and 'steps'")
    system = data.get("system")
    if system not in SYSTEMS:
        raise ProofError(f"unknown system {system!r}")
    dialect = SYSTEMS[system]["dialect"]
    steps = []
    for i, raw in enumerate(data["steps"]):
        if not isinstance(raw, dict) or "formula" not in raw or "by" not in raw:
            raise ProofError(f"step {i + 1}: needs 'formula' and 'by'")
        try:
            formula = parse_formula(raw["formula"], dialect=dialect)
        except ParseError as exc:
            raise ProofError(f"step {i + 1}: {exc}") from exc
        by = dict(raw["by"])
        if "subst" in by:
            if not isinstance(by["subst"], dict):
                raise ProofError(f"step {i + 1}: 'subst' must be an object")
            by["subst"] = {
                var: parse_formula(text, dialect=dialect)
                for var, text in by["subst"].items()
            }
        steps.append(ProofStep(formula, by))
    return system, steps


# ---------------------------------------------------------------------------
# Soundness sweep
# ---------------------------------------------------------------------------


_PROP_POOL = ("p", "q", "~p", "p & q", "p | q")
_WIDE_POOL = _PROP_POOL + ("[p]q",)
_CLOSED_POOL = ("[p]q", "~[p]q", "E p")


@dataclass
class SweepReport:
    system: str
    instances: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _metavariables(schema: Schema) -> Tuple[str, ...]:
    return tuple(sorted(_template_vars(schema.template)))


def _template_vars(t: Formula) -> frozenset:
    if isinstance(t, Atom):
        return frozenset({t.name})
    if isinstance(t, Not):
        return _template_vars(t.child)
    if isinstance(t, And):
        return _template_vars(t.left) | _template_vars(t.right)
    if isinstance(t, CondBox):
        return _template_vars(t.antecedent) | _template_vars(t.consequent)
    if isinstance(t, CondCorner):
        return _template_vars(t.left) | _template_vars(t.right)
    return frozenset()


def soundness_sweep(system: str, bounds) -> SweepReport:
    """Search for countermodels to axiom instances; failures falsify soundness."""
    from .semantics import find_countermodel
    from .lewis import eval_v, iter_pseudo_sphere_models
    from .formula import atoms as formula_atoms

    spec = SYSTEMS[system]
    dialect = spec["dialect"]
    report = SweepReport(system)
    pools = {
        PROP: [parse_formula(t, dialect=dialect) for t in _PROP_POOL],
        CLOSED: [parse_formula(t, dialect="conwon") for t in _CLOSED_POOL],
        None: [parse_formula(t, dialect=dialect)
               for t in (_WIDE_POOL if dialect == "conwon" else _PROP_POOL)],
    }
    for schema in spec["axioms"]:
        variables = _metavariables(schema)
        choices = [pools[schema.conditions.get(v)] for v in variables]
        for combo in itertools.product(*choices):
            subst = dict(zip(variables, combo))
            instance = instantiate(schema, subst)
            report.instances += 1
            if dialect == "conwon":
                witness = find_countermodel(instance, bounds)
                if witness is not None:
                    report.failures.append(f"{schema.identifier}: falsified by {witness}")
            else:
                names = tuple(sorted(formula_atoms(instance))) or ("p",)
                for m in iter_pseudo_sphere_models(names, bounds.max_worlds):
                    bad = [w for w in m.model.worlds if not eval_v(m, w, instance)]
                    if bad:
                        report.failures.append(
                            f"{schema.identifier}: false at {bad[0]} of {m.to_json()}"
                        )
                        break
    return report
