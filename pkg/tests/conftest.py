"""Shared generators for the test suite.

Random formula generation is deterministic (callers pass a seeded
``random.Random``) so failures reproduce.
"""

import random
from typing import List

from conwon.formula import (
    And,
    Atom,
    CondBox,
    CondCorner,
    FALSUM,
    Formula,
    Not,
    Or,
    is_propositional,
)


def random_prop(rng: random.Random, atom_names, depth: int) -> Formula:
    if depth <= 0:
        choices = [Atom(a) for a in atom_names] + [FALSUM]
        return rng.choice(choices)
    kind = rng.randrange(4)
    if kind == 0:
        return Atom(rng.choice(atom_names))
    if kind == 1:
        return Not(random_prop(rng, atom_names, depth - 1))
    if kind == 2:
        return And(random_prop(rng, atom_names, depth - 1),
                   random_prop(rng, atom_names, depth - 1))
    return Or(random_prop(rng, atom_names, depth - 1),
              random_prop(rng, atom_names, depth - 1))


def random_formula(rng: random.Random, atom_names, modal_budget: int,
                   size: int = 3, dialect: str = "conwon") -> Formula:
    """A core formula with modal depth at most ``modal_budget``."""
    if size <= 0 or (modal_budget <= 0 and rng.random() < 0.5):
        return random_prop(rng, atom_names, 1)
    kind = rng.randrange(4 if modal_budget > 0 else 3)
    if kind == 0:
        return Not(random_formula(rng, atom_names, modal_budget, size - 1, dialect))
    if kind == 1:
        return And(
            random_formula(rng, atom_names, modal_budget, size - 1, dialect),
            random_formula(rng, atom_names, modal_budget, size - 1, dialect),
        )
    if kind == 2:
        return random_prop(rng, atom_names, 1)
    body = random_formula(rng, atom_names, modal_budget - 1, size - 1, dialect)
    antecedent = random_prop(rng, atom_names, 1)
    if dialect == "v":
        return CondCorner(antecedent, body)
    return CondBox(antecedent, body)


def formula_battery(seed: int, count: int, atom_names, max_depth: int,
                    dialect: str = "conwon") -> List[Formula]:
    """Deterministic battery with a controlled modal-depth mix."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        budget = rng.choice([1] * 3 + [2] * 2 + [max_depth])
        f = random_formula(rng, atom_names, budget, size=4, dialect=dialect)
        out.append(f)
    return out
