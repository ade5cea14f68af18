"""Flattening of nested conditionals down to the flat fragment.

The translation repeatedly picks an innermost conditional of modal depth
2, normalizes its body into a conjunction of clauses (negation normal
form, duals introduced for negated conditionals, disjunction distributed
over conjunction), distributes the outer conditional over conjunctions
and closed disjuncts, and eliminates the remaining nested conditionals
with the two conditional-over-conditional equivalences.  No output
simplification is performed, so results stay auditable against the
clause shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .formula import (
    And,
    Atom,
    CondBox,
    CondCorner,
    CondDia,
    EveryWorld,
    Falsum,
    Formula,
    Implies,
    Not,
    Or,
    SomeWorld,
    is_closed,
    is_propositional,
    modal_depth,
)


class RewriteError(Exception):
    pass


def _or_fold(parts: List[Formula]) -> Formula:
    result = parts[0]
    for p in parts[1:]:
        result = Or(result, p)
    return result


def _and_fold(parts: List[Formula]) -> Formula:
    result = parts[0]
    for p in parts[1:]:
        result = And(result, p)
    return result


def _match_or(f: Formula) -> Optional[Tuple[Formula, Formula]]:
    """Recognize the desugared disjunction shape ~(~a & ~b)."""
    if (
        isinstance(f, Not)
        and isinstance(f.child, And)
        and isinstance(f.child.left, Not)
        and isinstance(f.child.right, Not)
    ):
        return f.child.left.child, f.child.right.child
    return None


def _box_over_box(alpha: Formula, beta: Formula, gamma: Formula) -> Formula:
    """[a][b]g  <->  Ea -> ((E(a&b) & [a&b]g) | (~E(a&b) & A(b->g)))."""
    ab = And(alpha, beta)
    return Implies(
        SomeWorld(alpha),
        Or(
            And(SomeWorld(ab), CondBox(ab, gamma)),
            And(Not(SomeWorld(ab)), EveryWorld(Implies(beta, gamma))),
        ),
    )


def _box_over_dia(alpha: Formula, beta: Formula, gamma: Formula) -> Formula:
    """[a]<b>g  <->  Ea -> ((E(a&b) & <a&b>g) | (~E(a&b) & E(b&g)))."""
    ab = And(alpha, beta)
    return Implies(
        SomeWorld(alpha),
        Or(
            And(SomeWorld(ab), CondDia(ab, gamma)),
            And(Not(SomeWorld(ab)), SomeWorld(And(beta, gamma))),
        ),
    )


def rewrite_step(f: Formula) -> Formula:
    """Apply exactly one partial-reduction equivalence to ``[a] body``.

    The four forms, tried in order: conjunction splits; disjunction with
    a closed disjunct splits; a nested conditional or its dual expands
    into flat modalities.
    """
    if not isinstance(f, CondBox):
        raise RewriteError("rewrite_step expects a conditional")
    alpha, body = f.antecedent, f.consequent
    if modal_depth(body) > 1:
        raise RewriteError("conditional body must have modal depth at most 1")
    if isinstance(body, And):
        return And(CondBox(alpha, body.left), CondBox(alpha, body.right))
    disjuncts = _match_or(body)
    if disjuncts is not None:
        a, b = disjuncts
        if is_closed(b) or is_closed(a):
            return Or(CondBox(alpha, a), CondBox(alpha, b))
        raise RewriteError("disjunction splits only past a closed disjunct")
    if isinstance(body, CondBox):
        if not is_propositional(body.consequent):
            raise RewriteError("nested conditional consequent must be propositional")
        return _box_over_box(alpha, body.antecedent, body.consequent)
    if isinstance(body, Not) and isinstance(body.child, CondBox):
        inner = body.child
        gamma = inner.consequent.child if isinstance(inner.consequent, Not) else Not(inner.consequent)
        if not is_propositional(gamma):
            raise RewriteError("nested dual consequent must be propositional")
        return _box_over_dia(alpha, inner.antecedent, gamma)
    raise RewriteError("no applicable rewrite")


# ---------------------------------------------------------------------------
# Clause normalization for depth-1 conditional bodies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionalClause:
    """A disjunctive clause of a normalized conditional body.

    Disjuncts are grouped as propositional parts, positive conditionals,
    and dual conditionals; any group may be empty, but not all three.
    """

    pl_disjuncts: Tuple[Formula, ...]
    box_disjuncts: Tuple[Tuple[Formula, Formula], ...]
    dual_disjuncts: Tuple[Tuple[Formula, Formula], ...]


def _nnf(f: Formula, positive: bool):
    """NNF over {propositional parts, conditionals, duals} as literals."""
    if is_propositional(f):
        return ("lit", ("prop", f if positive else Not(f)))
    if isinstance(f, Not):
        return _nnf(f.child, not positive)
    if isinstance(f, And):
        kind = "and" if positive else "or"
        return (kind, [_nnf(f.left, positive), _nnf(f.right, positive)])
    if isinstance(f, CondBox):
        gamma = f.consequent
        if positive:
            return ("lit", ("box", f.antecedent, gamma))
        flipped = gamma.child if isinstance(gamma, Not) else Not(gamma)
        return ("lit", ("dia", f.antecedent, flipped))
    raise RewriteError(f"cannot normalize {f!r}")


def _cnf(tree) -> List[List[tuple]]:
    kind = tree[0]
    if kind == "lit":
        return [[tree[1]]]
    parts = [_cnf(sub) for sub in tree[1]]
    if kind == "and":
        return [clause for part in parts for clause in part]
    # "or": cross product of the two clause lists
    left, right = parts
    return [lc + rc for lc in left for rc in right]


def normalize_body(body: Formula) -> List[ConditionalClause]:
    """Conjunction of clauses equivalent to a depth-<=1 body."""
    clauses = []
    for literals in _cnf(_nnf(body, True)):
        props, boxes, duals = [], [], []
        for lit in literals:
            if lit[0] == "prop":
                props.append(lit[1])
            elif lit[0] == "box":
                boxes.append((lit[1], lit[2]))
            else:
                duals.append((lit[1], lit[2]))
        clauses.append(ConditionalClause(tuple(props), tuple(boxes), tuple(duals)))
    return clauses


def _flatten_conditional(alpha: Formula, body: Formula) -> Formula:
    """Flat equivalent of ``[alpha] body`` for a depth-1 body."""
    conjuncts = []
    for clause in normalize_body(body):
        disjuncts: List[Formula] = []
        if clause.pl_disjuncts:
            disjuncts.append(CondBox(alpha, _or_fold(list(clause.pl_disjuncts))))
        for beta, gamma in clause.box_disjuncts:
            if not is_propositional(gamma):
                raise RewriteError("nested conditional consequent must be propositional")
            disjuncts.append(_box_over_box(alpha, beta, gamma))
        for beta, gamma in clause.dual_disjuncts:
            if not is_propositional(gamma):
                raise RewriteError("nested dual consequent must be propositional")
            disjuncts.append(_box_over_dia(alpha, beta, gamma))
        conjuncts.append(_or_fold(disjuncts))
    return _and_fold(conjuncts)


# ---------------------------------------------------------------------------
# The full translation
# ---------------------------------------------------------------------------


def _find_depth2(f: Formula, path: Tuple[int, ...] = ()) -> Optional[Tuple[Tuple[int, ...], CondBox]]:
    """Leftmost (pre-order) conditional subformula of modal depth 2."""
    if isinstance(f, CondBox) and modal_depth(f) == 2:
        return path, f
    children: Tuple[Formula, ...]
    if isinstance(f, Not):
        children = (f.child,)
    elif isinstance(f, And):
        children = (f.left, f.right)
    elif isinstance(f, CondBox):
        children = (f.antecedent, f.consequent)
    else:
        children = ()
    for i, child in enumerate(children):
        found = _find_depth2(child, path + (i,))
        if found is not None:
            return found
    return None


def _replace(f: Formula, path: Tuple[int, ...], replacement: Formula) -> Formula:
    if not path:
        return replacement
    head, rest = path[0], path[1:]
    if isinstance(f, Not):
        return Not(_replace(f.child, rest, replacement))
    if isinstance(f, And):
        if head == 0:
            return And(_replace(f.left, rest, replacement), f.right)
        return And(f.left, _replace(f.right, rest, replacement))
    if isinstance(f, CondBox):
        if head == 0:
            return CondBox(_replace(f.antecedent, rest, replacement), f.consequent)
        return CondBox(f.antecedent, _replace(f.consequent, rest, replacement))
    raise RewriteError(f"bad path into {f!r}")


def sigma(f: Formula) -> Formula:
    """Flat formula equivalent to ``f``; identity on flat input."""
    if isinstance(f, CondCorner):
        raise RewriteError("sigma applies to conwon-dialect formulas")
    while True:
        found = _find_depth2(f)
        if found is None:
            return f
        path, box = found
        f = _replace(f, path, _flatten_conditional(box.antecedent, box.consequent))
