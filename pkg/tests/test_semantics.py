import itertools
import random

import pytest

from conwon.fixtures import (
    NONMONO_CONTEXT,
    NONMONO_MODEL,
    REAGAN_CONTEXT,
    REAGAN_MODEL,
    TIGER_CONTEXT,
    TIGER_MODEL,
)
from conwon.formula import And, Atom, CondBox, Not, parse_formula
from conwon.models import (
    Model,
    OrderedDefaultSet,
    SequenceContext,
    core,
    expected,
    load_context,
    load_model,
    theta,
    update,
)
from conwon.semantics import (
    ContextualizedPointedModel,
    EvaluationError,
    SearchBounds,
    eval_cpm,
    evaluate,
    extension,
    find_countermodel,
    is_satisfiable_up_to,
    is_valid_up_to,
    satisfying_witness,
)
from conftest import random_formula, random_prop


def fs(*worlds):
    return frozenset(worlds)


# --- worked examples ------------------------------------------------------


def test_tiger_trace():
    model = load_model(TIGER_MODEL)
    context = load_context(TIGER_CONTEXT, model)
    trace = []
    value = evaluate(model, context, "w3", parse_formula("[a_g]~a_d"), trace)
    assert value is True
    assert len(trace) == 1
    step = trace[0]
    assert step.generated == fs("w1", "w2", "w4", "w6")
    assert step.levels == (("|a_g|",), ("D2",), ("D1", "D3"))
    assert step.expected == fs("w1")
    assert step.verdicts == {"w1": True}


def test_reagan_trace():
    model = load_model(REAGAN_MODEL)
    context = load_context(REAGAN_CONTEXT, model)
    trace = []
    value = evaluate(model, context, "w1", parse_formula("[~r][r | a]r"), trace)
    assert value is False
    assert [step.expected for step in trace] == [fs("w3"), fs("w2")]
    assert trace[1].verdicts == {"w2": False}


def test_nonmonotonicity():
    model = load_model(NONMONO_MODEL)
    context = load_context(NONMONO_CONTEXT, model)
    assert evaluate(model, context, "w1", parse_formula("[p]q"))
    assert not evaluate(model, context, "w1", parse_formula("[p & ~q]q"))


# --- structural properties of the clause ----------------------------------


def _small_instances(seed, count, max_len=3):
    rng = random.Random(seed)
    worlds = ("w1", "w2", "w3")
    subsets = [frozenset(c) for k in range(4) for c in itertools.combinations(worlds, k)]
    for _ in range(count):
        valuation = {a: rng.choice(subsets) for a in ("p", "q")}
        model = Model(worlds, valuation)
        seq = tuple(rng.choice(subsets) for _ in range(rng.randint(1, max_len)))
        yield rng, model, SequenceContext(seq)


def test_conditionals_are_world_independent():
    for rng, model, ctx in _small_instances(13, 120):
        f = CondBox(random_prop(rng, ("p", "q"), 1),
                    random_formula(rng, ("p", "q"), modal_budget=1, size=2))
        values = {evaluate(model, ctx, w, f) for w in model.worlds}
        assert len(values) == 1


def test_closed_formulas_are_world_independent():
    for rng, model, ctx in _small_instances(17, 120):
        f = Not(And(CondBox(Atom("p"), random_prop(rng, ("p", "q"), 1)),
                    Not(CondBox(random_prop(rng, ("p", "q"), 1), Atom("q")))))
        values = {evaluate(model, ctx, w, f) for w in model.worlds}
        assert len(values) == 1


def test_derived_operators_match_direct_computation():
    for rng, model, ctx in _small_instances(19, 150):
        alpha = random_prop(rng, ("p", "q"), 1)
        phi = random_prop(rng, ("p", "q"), 1)
        w = rng.choice(model.worlds)
        ext = extension(model, alpha)
        updated = update(ctx, ext)
        exp = expected(model, updated)
        # [a]phi: phi at every expected state under the updated context
        assert evaluate(model, ctx, w, CondBox(alpha, phi)) == all(
            evaluate(model, updated, u, phi) for u in exp
        )
        # <a>phi: phi at some expected state
        assert evaluate(model, ctx, w, Not(CondBox(alpha, Not(phi)))) == any(
            evaluate(model, updated, u, phi) for u in exp
        )
        # E a: the antecedent has a nonempty extension
        assert evaluate(
            model, ctx, w, Not(CondBox(alpha, parse_formula("false")))
        ) == bool(ext)
        # A a: the extension covers every world
        assert evaluate(
            model, ctx, w, CondBox(Not(alpha), parse_formula("false"))
        ) == (ext == model.world_set)


def test_expected_update_identities():
    # four identities tying expected states to updates
    for rng, model, ctx in _small_instances(23, 200):
        alpha = random_prop(rng, ("p", "q"), 1)
        beta = random_prop(rng, ("p", "q"), 1)
        a, b = extension(model, alpha), extension(model, beta)
        # (1) the update has no expected states exactly when the
        #     generated default is empty
        assert (expected(model, update(ctx, a)) == fs()) == (not a)
        # (4) expected states of the update fall inside the default
        assert expected(model, update(ctx, a)) <= a
        both = a & b
        double = update(update(ctx, a), b)
        if both:
            # (2) consecutive updates collapse to the conjunction
            assert expected(model, double) == expected(model, update(ctx, both))
        else:
            # (3) incompatible consecutive updates reset to the base context
            assert expected(model, double) == expected(model, update(theta(model), b))


def test_core_invariance_of_truth():
    for rng, model, ctx in _small_instances(29, 120, max_len=4):
        f = random_formula(rng, ("p", "q"), modal_budget=2, size=3)
        cored = core(ctx)
        for w in model.worlds:
            assert evaluate(model, ctx, w, f) == evaluate(model, cored, w, f)


def test_set_and_sequence_contexts_agree():
    # an ordered default set behaves like the sequence of its level
    # intersections
    worlds = ("w1", "w2", "w3")
    subsets = [frozenset(c) for k in range(4) for c in itertools.combinations(worlds, k)]
    rng = random.Random(31)
    for _ in range(120):
        model = Model(worlds, {a: rng.choice(subsets) for a in ("p", "q")})
        n_defaults = rng.randint(0, 3)
        extents = rng.sample(subsets, n_defaults)
        defaults = {f"D{i}": ext for i, ext in enumerate(extents)}
        names = list(defaults)
        pairs = set()
        for i, j in itertools.combinations(range(len(names)), 2):
            if rng.random() < 0.5:
                pairs.add((names[i], names[j]))
        try:
            ctx = OrderedDefaultSet(defaults, frozenset(pairs))
        except Exception:
            continue
        from conwon.models import hierarchy

        levels = hierarchy(ctx)
        seq = tuple(
            frozenset.intersection(*(defaults[n] for n in level))
            if level else frozenset(worlds)
            for level in levels
        )
        seq_ctx = SequenceContext(seq)
        assert expected(model, ctx) == expected(model, seq_ctx)
        f = random_formula(rng, ("p", "q"), modal_budget=2, size=3)
        for w in model.worlds:
            assert evaluate(model, ctx, w, f) == evaluate(model, seq_ctx, w, f)


# --- bounded search -------------------------------------------------------


def test_find_countermodel_reports_genuine_countermodels():
    bounds = SearchBounds(2, 3)
    for text in ["[p]q -> [p & ~q]q", "q -> [p]q", "p -> box p"]:
        f = parse_formula(text)
        witness = find_countermodel(f, bounds)
        assert witness is not None
        assert eval_cpm(witness, f) is False


def test_validities_have_no_countermodel():
    bounds = SearchBounds(2, 3)
    for text in ["[p](q -> q)", "[p]q -> ~[p]~q | ~E p", "box (p | ~p)"]:
        assert is_valid_up_to(parse_formula(text), bounds)


def test_pruned_and_unpruned_search_agree():
    bounds = SearchBounds(2, 3)
    formulas = [
        "[p]q -> [p & ~q]q",
        "[p][q]r",
        "E p -> <p> true",
        "[p](q | r) -> ([p]q | [p]r)",
        "~[p]q",
    ]
    for text in formulas:
        f = parse_formula(text)
        pruned = find_countermodel(f, bounds, prune=True)
        unpruned = find_countermodel(f, bounds, prune=False)
        assert (pruned is None) == (unpruned is None)
        if pruned is not None:
            assert eval_cpm(pruned, f) is False
            assert eval_cpm(unpruned, f) is False


def test_satisfiability_helpers():
    bounds = SearchBounds(2, 3)
    assert is_satisfiable_up_to(parse_formula("p & ~q"), bounds)
    assert not is_satisfiable_up_to(parse_formula("p & ~p"), bounds)
    witness = satisfying_witness(parse_formula("[p]q & ~q"), bounds)
    assert witness is not None
    assert eval_cpm(witness, parse_formula("[p]q & ~q"))


def test_search_is_deterministic():
    f = parse_formula("[p]q -> [p & ~q]q")
    w1 = find_countermodel(f, SearchBounds(2, 3))
    w2 = find_countermodel(f, SearchBounds(2, 3))
    assert w1 == w2


# --- errors ---------------------------------------------------------------


def test_extension_requires_propositional():
    model = load_model(NONMONO_MODEL)
    with pytest.raises(EvaluationError):
        extension(model, parse_formula("[p]q"))


def test_unknown_world_rejected():
    model = load_model(NONMONO_MODEL)
    context = load_context(NONMONO_CONTEXT, model)
    with pytest.raises(EvaluationError):
        ContextualizedPointedModel(model, context, "w9")
