"""Truth evaluation over contextualized pointed models and bounded search.

Two evaluation paths live here:

* :func:`evaluate` -- a direct, set-based recursive evaluator over either
  context representation, optionally recording a trace of every
  conditional step (generated default, updated context, hierarchy,
  expected states, per-world verdicts).
* a bitmask engine used by :func:`find_countermodel` and the validity
  helpers, which enumerates all models over a formula's atoms and all
  duplicate-free sequence contexts up to a bound.

The search prunes contexts by an exact behavioural signature: the truth
of any formula of modal depth <= d at a context depends on the context
only through the expected-state sets reachable by update chains of
length <= d, so contexts sharing that signature are interchangeable.
The representative kept for each class is the first in canonical
enumeration order, which keeps reported countermodels deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .formula import (
    And,
    Atom,
    CondBox,
    Falsum,
    Formula,
    Not,
    atoms,
    is_propositional,
    modal_depth,
    render,
)
from .models import (
    Context,
    Model,
    OrderedDefaultSet,
    SequenceContext,
    expected,
    hierarchy,
    update,
)


class EvaluationError(Exception):
    pass


@dataclass(frozen=True)
class ContextualizedPointedModel:
    model: Model
    context: Context
    world: str

    def __post_init__(self):
        if self.world not in self.model.world_set:
            raise EvaluationError(f"unknown world {self.world!r}")
        self.context.check_against(self.model)

    def to_json(self) -> dict:
        return {
            "model": self.model.to_json(),
            "context": self.context.to_json(),
            "world": self.world,
        }


# ---------------------------------------------------------------------------
# Reference evaluator with traces
# ---------------------------------------------------------------------------


@dataclass
class ConditionalStep:
    """One conditional evaluation: what was generated, updated, expected."""

    antecedent: str
    generated: FrozenSet[str]
    levels: Optional[Tuple[Tuple[str, ...], ...]]  # set-form hierarchy by names
    sequence: Optional[Tuple[FrozenSet[str], ...]]
    expected: FrozenSet[str]
    verdicts: Dict[str, bool] = field(default_factory=dict)


EvalTrace = List[ConditionalStep]


def extension(model: Model, alpha: Formula) -> FrozenSet[str]:
    """The default generated by a propositional formula."""
    if not is_propositional(alpha):
        raise EvaluationError("extension requires a propositional formula")
    if isinstance(alpha, Atom):
        return model.extent(alpha.name)
    if isinstance(alpha, Falsum):
        return frozenset()
    if isinstance(alpha, Not):
        return model.world_set - extension(model, alpha.child)
    if isinstance(alpha, And):
        return extension(model, alpha.left) & extension(model, alpha.right)
    raise TypeError(f"not a formula: {alpha!r}")


def evaluate(
    model: Model,
    context: Context,
    world: str,
    f: Formula,
    trace: Optional[EvalTrace] = None,
) -> bool:
    """Truth of a desugared conwon formula at (model, context, world)."""
    if isinstance(f, Atom):
        return world in model.extent(f.name)
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Not):
        return not evaluate(model, context, world, f.child, trace)
    if isinstance(f, And):
        return evaluate(model, context, world, f.left, trace) and evaluate(
            model, context, world, f.right, trace
        )
    if isinstance(f, CondBox):
        generated = extension(model, f.antecedent)
        updated = update(context, generated, name=f"|{render(f.antecedent)}|")
        exp = expected(model, updated)
        step = None
        if trace is not None:
            if isinstance(updated, OrderedDefaultSet):
                levels = tuple(tuple(sorted(level)) for level in hierarchy(updated))
                seq = None
            else:
                levels = None
                seq = updated.sequence
            step = ConditionalStep(
                antecedent=render(f.antecedent),
                generated=generated,
                levels=levels,
                sequence=seq,
                expected=exp,
            )
            trace.append(step)
        verdict = True
        for u in sorted(exp):
            sub = evaluate(model, updated, u, f.consequent, trace)
            if step is not None:
                step.verdicts[u] = sub
            if not sub:
                verdict = False
                if step is None:
                    break
        return verdict
    raise TypeError(f"not a conwon formula: {f!r}")


def eval_cpm(cpm: ContextualizedPointedModel, f: Formula, trace: Optional[EvalTrace] = None) -> bool:
    return evaluate(cpm.model, cpm.context, cpm.world, f, trace)


# ---------------------------------------------------------------------------
# Bitmask engine
# ---------------------------------------------------------------------------


def e_mask(chain: Tuple[int, ...]) -> int:
    """Expected states of a sequence context given as bitmasks."""
    current = chain[0]
    if not current:
        return 0
    for entry in chain[1:]:
        narrowed = current & entry
        if not narrowed:
            break
        current = narrowed
    return current


class CompiledFormula:
    """A conwon formula lowered to an indexed node array.

    Structurally identical subterms share a node, so memoized results
    are shared too.  Node ops: ("atom", name), ("false",), ("not", i),
    ("and", i, j), ("box", i, j).
    """

    def __init__(self, f: Formula):
        self.nodes: List[tuple] = []
        self._index: Dict[tuple, int] = {}
        self.root = self._add(f)

    def _add(self, f: Formula) -> int:
        if isinstance(f, Atom):
            key = ("atom", f.name)
        elif isinstance(f, Falsum):
            key = ("false",)
        elif isinstance(f, Not):
            key = ("not", self._add(f.child))
        elif isinstance(f, And):
            key = ("and", self._add(f.left), self._add(f.right))
        elif isinstance(f, CondBox):
            key = ("box", self._add(f.antecedent), self._add(f.consequent))
        else:
            raise TypeError(f"not a conwon formula: {f!r}")
        idx = self._index.get(key)
        if idx is None:
            idx = len(self.nodes)
            self.nodes.append(key)
            self._index[key] = idx
        return idx


class ModelEvaluator:
    """Evaluates a compiled formula on one bitmask model.

    ``truth_mask(node, ctx)`` returns the set of worlds (as a bitmask)
    satisfying the node under the sequence context ``ctx`` (a tuple of
    bitmasks).  Conditional nodes are world-independent, so their value
    is either the full mask or 0.
    """

    def __init__(self, compiled: CompiledFormula, n_worlds: int, valuation: Dict[str, int]):
        self.compiled = compiled
        self.full = (1 << n_worlds) - 1
        self.prop: List[Optional[int]] = []
        self.memo: Dict[Tuple[int, Tuple[int, ...]], int] = {}
        # Masks for propositional nodes are context-free; precompute them.
        for op in compiled.nodes:
            if op[0] == "atom":
                self.prop.append(valuation.get(op[1], 0))
            elif op[0] == "false":
                self.prop.append(0)
            elif op[0] == "not":
                child = self.prop[op[1]]
                self.prop.append(None if child is None else self.full & ~child)
            elif op[0] == "and":
                a, b = self.prop[op[1]], self.prop[op[2]]
                self.prop.append(None if a is None or b is None else a & b)
            else:
                self.prop.append(None)

    def truth_mask(self, node: int, ctx: Tuple[int, ...]) -> int:
        mask = self.prop[node]
        if mask is not None:
            return mask
        key = (node, ctx)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        op = self.compiled.nodes[node]
        if op[0] == "not":
            result = self.full & ~self.truth_mask(op[1], ctx)
        elif op[0] == "and":
            result = self.truth_mask(op[1], ctx) & self.truth_mask(op[2], ctx)
        else:  # box
            generated = self.prop[op[1]]
            updated = (generated,) + ctx
            exp = e_mask(updated)
            holds = exp & ~self.truth_mask(op[2], updated) == 0
            result = self.full if holds else 0
        self.memo[key] = result
        return result


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def iter_models(atom_names: Tuple[str, ...], n_worlds: int):
    """All valuations of the given atoms over a fixed n-world set."""
    masks = range(1 << n_worlds)
    for assignment in itertools.product(masks, repeat=len(atom_names)):
        yield dict(zip(atom_names, assignment))


def iter_contexts(n_worlds: int, max_len: int):
    """Duplicate-free sequence contexts over subsets of the world set."""
    subsets = range(1 << n_worlds)
    for length in range(1, max_len + 1):
        yield from itertools.permutations(subsets, length)


def _signature(ctx: Tuple[int, ...], n_worlds: int, depth: int) -> tuple:
    if depth <= 0:
        return ()
    entries = []
    for d in range(1 << n_worlds):
        chain = (d,) + ctx
        entries.append((e_mask(chain), _signature(chain, n_worlds, depth - 1)))
    return tuple(entries)


@lru_cache(maxsize=None)
def context_representatives(n_worlds: int, max_len: int, depth: int) -> Tuple[Tuple[int, ...], ...]:
    """Canonically-first representative of each behaviour class.

    Two contexts behave identically on formulas of modal depth <= depth
    when their signatures agree, so validity checks only need one
    context per class.  depth 0 keeps every context (no pruning basis).
    """
    if depth <= 0:
        return tuple(iter_contexts(n_worlds, max_len))
    seen = {}
    for ctx in iter_contexts(n_worlds, max_len):
        sig = _signature(ctx, n_worlds, depth)
        if sig not in seen:
            seen[sig] = ctx
    return tuple(seen.values())


MAX_SIG_DEPTH = 3


def mask_to_worlds(mask: int, worlds: Tuple[str, ...]) -> FrozenSet[str]:
    return frozenset(w for i, w in enumerate(worlds) if mask >> i & 1)


def _world_names(n: int) -> Tuple[str, ...]:
    return tuple(f"w{i + 1}" for i in range(n))


@dataclass(frozen=True)
class SearchBounds:
    max_worlds: int
    max_context_len: int
    max_enumeration: int = 50_000_000

    def __post_init__(self):
        if self.max_worlds < 1 or self.max_context_len < 1:
            raise ValueError("bounds must be at least 1")


def find_countermodel(
    f: Formula,
    bounds: SearchBounds,
    prune: bool = True,
) -> Optional[ContextualizedPointedModel]:
    """First contextualized pointed model falsifying ``f``, if any.

    Searches all models over the atoms of ``f`` with at most
    ``bounds.max_worlds`` worlds and all duplicate-free sequence
    contexts up to ``bounds.max_context_len``.  ``None`` means "valid
    up to bound", not validity.
    """
    atom_names = tuple(sorted(atoms(f))) or ("p",)
    compiled = CompiledFormula(f)
    depth = modal_depth(f)
    sig_depth = depth if prune and 0 < depth <= MAX_SIG_DEPTH else 0

    total = 0
    for n in range(1, bounds.max_worlds + 1):
        total += (1 << (n * len(atom_names))) * _context_count(n, bounds.max_context_len)
    if total > bounds.max_enumeration:
        raise EvaluationError(
            f"enumeration of {total} (model, context) pairs exceeds the cap "
            f"of {bounds.max_enumeration}"
        )

    for n in range(1, bounds.max_worlds + 1):
        worlds = _world_names(n)
        full = (1 << n) - 1
        contexts = context_representatives(n, bounds.max_context_len, sig_depth)
        for valuation in iter_models(atom_names, n):
            ev = ModelEvaluator(compiled, n, valuation)
            for ctx in contexts:
                mask = ev.truth_mask(compiled.root, ctx)
                if mask != full:
                    world_idx = next(i for i in range(n) if not mask >> i & 1)
                    model = Model(
                        worlds=worlds,
                        valuation={a: mask_to_worlds(m, worlds) for a, m in valuation.items()},
                    )
                    context = SequenceContext(tuple(mask_to_worlds(d, worlds) for d in ctx))
                    return ContextualizedPointedModel(model, context, worlds[world_idx])
    return None


def _context_count(n_worlds: int, max_len: int) -> int:
    subsets = 1 << n_worlds
    count = 0
    term = 1
    for k in range(1, max_len + 1):
        if k > subsets:
            break
        term *= subsets - (k - 1)
        count += term
    return count


def is_valid_up_to(f: Formula, bounds: SearchBounds) -> bool:
    return find_countermodel(f, bounds) is None


def is_satisfiable_up_to(f: Formula, bounds: SearchBounds) -> bool:
    return find_countermodel(Not(f), bounds) is not None


def satisfying_witness(f: Formula, bounds: SearchBounds) -> Optional[ContextualizedPointedModel]:
    """A contextualized pointed model where ``f`` is true, if one exists."""
    return find_countermodel(Not(f), bounds)


def truth_masks_agree(
    f: Formula,
    g: Formula,
    max_worlds: int,
    max_context_len: int,
    prune: bool = True,
) -> Optional[ContextualizedPointedModel]:
    """First enumerated point where ``f`` and ``g`` disagree, or ``None``.

    Compares world-by-world truth of the two formulas over every
    enumerated model and duplicate-free sequence context.
    """
    atom_names = tuple(sorted(atoms(f) | atoms(g))) or ("p",)
    cf, cg = CompiledFormula(f), CompiledFormula(g)
    depth = max(modal_depth(f), modal_depth(g))
    sig_depth = depth if prune and 0 < depth <= MAX_SIG_DEPTH else 0
    for n in range(1, max_worlds + 1):
        worlds = _world_names(n)
        contexts = context_representatives(n, max_context_len, sig_depth)
        for valuation in iter_models(atom_names, n):
            evf = ModelEvaluator(cf, n, valuation)
            evg = ModelEvaluator(cg, n, valuation)
            for ctx in contexts:
                mf = evf.truth_mask(cf.root, ctx)
                mg = evg.truth_mask(cg.root, ctx)
                if mf != mg:
                    diff = mf ^ mg
                    world_idx = next(i for i in range(n) if diff >> i & 1)
                    model = Model(
                        worlds=worlds,
                        valuation={a: mask_to_worlds(m, worlds) for a, m in valuation.items()},
                    )
                    context = SequenceContext(tuple(mask_to_worlds(d, worlds) for d in ctx))
                    return ContextualizedPointedModel(model, context, worlds[world_idx])
    return None
