"""Finite models, ordered-default and sequence contexts, and their files.

A model pairs a finite world set with a valuation.  Two context
representations exist:

* :class:`OrderedDefaultSet` -- named defaults under a strict partial
  priority order; stratified into a hierarchy of priority levels.
* :class:`SequenceContext` -- a nonempty sequence of world sets, leftmost
  highest priority.

Both support the expected-state computation and prepend-style update.
World identifiers are strings and all serialized output is ordered
lexicographically for reproducibility.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Iterable, Mapping, Sequence, Tuple, Union

WorldSet = FrozenSet[str]


class SchemaError(Exception):
    """Invalid model/context data with a human-readable diagnostic."""


def _world_set(worlds: Iterable[str]) -> WorldSet:
    return frozenset(worlds)


@dataclass(frozen=True)
class Model:
    worlds: Tuple[str, ...]
    valuation: Mapping[str, WorldSet]

    def __post_init__(self):
        if not self.worlds:
            raise SchemaError("world set must be nonempty")
        if len(set(self.worlds)) != len(self.worlds):
            raise SchemaError("duplicate world identifier")
        object.__setattr__(self, "worlds", tuple(sorted(self.worlds)))
        val = {}
        wset = set(self.worlds)
        for atom, extent in self.valuation.items():
            extent = _world_set(extent)
            unknown = extent - wset
            if unknown:
                raise SchemaError(f"valuation of {atom!r} mentions unknown worlds {sorted(unknown)}")
            val[atom] = extent
        object.__setattr__(self, "valuation", val)

    @property
    def world_set(self) -> WorldSet:
        return frozenset(self.worlds)

    def extent(self, atom: str) -> WorldSet:
        return self.valuation.get(atom, frozenset())

    def to_json(self) -> dict:
        return {
            "worlds": list(self.worlds),
            "valuation": {a: sorted(ws) for a, ws in sorted(self.valuation.items())},
        }


def _transitive_closure(pairs: Iterable[Tuple[str, str]]) -> FrozenSet[Tuple[str, str]]:
    closure = set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(closure):
            for (c, d) in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return frozenset(closure)


@dataclass(frozen=True)
class OrderedDefaultSet:
    """Named defaults with a strict partial priority order.

    ``order`` may be any finite relation; the constructor takes its
    transitive closure and rejects reflexive pairs in the closure.
    Distinct names must denote distinct world sets, since defaults are
    identified extensionally by the update operation.
    """

    defaults: Mapping[str, WorldSet]
    order: FrozenSet[Tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        defaults = {name: _world_set(ws) for name, ws in self.defaults.items()}
        extents = list(defaults.values())
        if len(set(extents)) != len(extents):
            raise SchemaError("two default names denote the same world set")
        for (hi, lo) in self.order:
            for name in (hi, lo):
                if name not in defaults:
                    raise SchemaError(f"priority mentions unknown default {name!r}")
        closure = _transitive_closure(self.order)
        for (a, b) in closure:
            if a == b:
                raise SchemaError(f"priority on {a!r} violates irreflexivity")
        object.__setattr__(self, "defaults", defaults)
        object.__setattr__(self, "order", closure)

    def check_against(self, model: Model) -> None:
        for name, extent in self.defaults.items():
            unknown = extent - model.world_set
            if unknown:
                raise SchemaError(f"default {name!r} mentions unknown worlds {sorted(unknown)}")

    def prefers(self, hi: str, lo: str) -> bool:
        return (hi, lo) in self.order

    def to_json(self) -> dict:
        return {
            "kind": "ordered-set",
            "defaults": {n: sorted(ws) for n, ws in sorted(self.defaults.items())},
            "order": sorted([list(p) for p in self.order]),
        }


Hierarchy = Tuple[FrozenSet[str], ...]


@dataclass(frozen=True)
class SequenceContext:
    """Nonempty sequence of defaults; index 0 has highest priority."""

    sequence: Tuple[WorldSet, ...]

    def __post_init__(self):
        seq = tuple(_world_set(ws) for ws in self.sequence)
        if not seq:
            raise SchemaError("sequence context must be nonempty")
        object.__setattr__(self, "sequence", seq)

    def check_against(self, model: Model) -> None:
        for i, extent in enumerate(self.sequence):
            unknown = extent - model.world_set
            if unknown:
                raise SchemaError(f"sequence entry {i} mentions unknown worlds {sorted(unknown)}")

    def to_json(self) -> dict:
        return {"kind": "sequence", "sequence": [sorted(ws) for ws in self.sequence]}


Context = Union[OrderedDefaultSet, SequenceContext]


def theta(model: Model) -> SequenceContext:
    """The trivial context: the single-element sequence (W)."""
    return SequenceContext((model.world_set,))


# ---------------------------------------------------------------------------
# Hierarchy and expected states
# ---------------------------------------------------------------------------


def hierarchy(context: OrderedDefaultSet) -> Hierarchy:
    """Stratify defaults by repeatedly removing the maximal elements.

    An empty default set yields the one-level hierarchy ``(frozenset(),)``.
    """
    remaining = set(context.defaults)
    if not remaining:
        return (frozenset(),)
    levels = []
    while remaining:
        level = frozenset(
            d for d in remaining
            if not any(context.prefers(other, d) for other in remaining if other != d)
        )
        levels.append(level)
        remaining -= level
    return tuple(levels)


def _level_intersection(context: OrderedDefaultSet, level: FrozenSet[str], full: WorldSet) -> WorldSet:
    # The intersection over the empty level is W.
    result = full
    for name in level:
        result &= context.defaults[name]
    return result


def expected(model: Model, context: Context) -> WorldSet:
    """Worlds satisfying the longest consistent top-priority prefix."""
    if isinstance(context, OrderedDefaultSet):
        chain = [
            _level_intersection(context, level, model.world_set)
            for level in hierarchy(context)
        ]
    else:
        chain = list(context.sequence)
    if not chain[0]:
        return frozenset()
    current = chain[0]
    for entry in chain[1:]:
        narrowed = current & entry
        if not narrowed:
            break
        current = narrowed
    return current


# ---------------------------------------------------------------------------
# Update and cores
# ---------------------------------------------------------------------------


def update(context: Context, extent: Iterable[str], name: str = None) -> Context:
    """Insert ``extent`` as the highest-priority default.

    Set form: the new default outranks every other; priority pairs not
    involving it survive, old pairs involving it (identified by extent)
    are dropped.  Sequence form: prepend.
    """
    extent = _world_set(extent)
    if isinstance(context, SequenceContext):
        return SequenceContext((extent,) + context.sequence)
    if name is None:
        name = "|" + ",".join(sorted(extent)) + "|"
    defaults = {n: ws for n, ws in context.defaults.items() if ws != extent}
    order = {(a, b) for (a, b) in context.order if a in defaults and b in defaults}
    if name in defaults:
        raise SchemaError(f"default name {name!r} already names a different world set")
    order |= {(name, other) for other in defaults}
    defaults[name] = extent
    return OrderedDefaultSet(defaults, frozenset(order))


def core(context: SequenceContext) -> SequenceContext:
    """Keep only the first occurrence of each default."""
    seen = []
    for entry in context.sequence:
        if entry not in seen:
            seen.append(entry)
    return SequenceContext(tuple(seen))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _load_json(source) -> dict:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = source
    if not isinstance(data, dict):
        raise SchemaError("expected a JSON object")
    return data


def _string_list(value, what: str) -> list:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise SchemaError(f"{what} must be a list of strings")
    return value


def load_model(source) -> Model:
    data = _load_json(source)
    if "worlds" not in data or "valuation" not in data:
        raise SchemaError("model file needs 'worlds' and 'valuation'")
    worlds = _string_list(data["worlds"], "'worlds'")
    valuation = data["valuation"]
    if not isinstance(valuation, dict):
        raise SchemaError("'valuation' must be an object")
    return Model(
        worlds=tuple(worlds),
        valuation={a: frozenset(_string_list(ws, f"valuation of {a!r}")) for a, ws in valuation.items()},
    )


def load_context(source, model: Model = None) -> Context:
    data = _load_json(source)
    kind = data.get("kind")
    if kind == "ordered-set":
        defaults = data.get("defaults")
        if not isinstance(defaults, dict):
            raise SchemaError("'defaults' must be an object")
        order_raw = data.get("order", [])
        if not isinstance(order_raw, list):
            raise SchemaError("'order' must be a list of pairs")
        order = set()
        for pair in order_raw:
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
                raise SchemaError(f"bad priority pair: {pair!r}")
            order.add((pair[0], pair[1]))
        ctx = OrderedDefaultSet(
            {n: frozenset(_string_list(ws, f"default {n!r}")) for n, ws in defaults.items()},
            frozenset(order),
        )
    elif kind == "sequence":
        seq = data.get("sequence")
        if not isinstance(seq, list) or not seq:
            raise SchemaError("'sequence' must be a nonempty list")
        ctx = SequenceContext(tuple(frozenset(_string_list(ws, "sequence entry")) for ws in seq))
    else:
        raise SchemaError(f"unknown context kind: {kind!r}")
    if model is not None:
        ctx.check_against(model)
    return ctx


def save(value, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(value.to_json(), fh, indent=2, sort_keys=False)
        fh.write("\n")
