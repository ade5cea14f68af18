"""Toolkit for the logic of conditional weak ontic necessity."""

from .formula import (
    And,
    Atom,
    CondBox,
    CondCorner,
    DialectError,
    Falsum,
    Formula,
    Not,
    ParseError,
    classify,
    is_closed,
    is_flat,
    is_propositional,
    modal_depth,
    parse_formula,
    render,
    translate_flat,
)
from .models import (
    Model,
    OrderedDefaultSet,
    SchemaError,
    SequenceContext,
    core,
    expected,
    hierarchy,
    load_context,
    load_model,
    theta,
    update,
)
from .semantics import (
    ContextualizedPointedModel,
    SearchBounds,
    evaluate,
    extension,
    find_countermodel,
    is_satisfiable_up_to,
    is_valid_up_to,
    satisfying_witness,
)
from .reduction import RewriteError, rewrite_step, sigma
from .lewis import (
    PseudoSphereModelV,
    RelationalModelV,
    SphereModelV,
    UniversalRelationalModelV,
    context_to_partition,
    eval_v,
    flat_equivalence_check,
    partition_to_context,
    universal_to_sphere,
)
from .proofs import check_proof, load_proof, match_schema, soundness_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
