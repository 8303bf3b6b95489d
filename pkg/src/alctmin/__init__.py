"""Bounded minimal-model reasoning for ALC with multiple typicality operators,
and its correspondence with concept circumscription."""

from .bridge import (
    crosscheck,
    crosscheck_reverse,
    from_circumscribed,
    normalize_roles,
    phi,
    phi_inverse,
    sat_via_circumscription,
    to_circumscribed,
)
from .circumscription import CircKB, CircPattern, circ_query, is_circ_model, parse_circ_kb, render_circ_kb
from .interpretation import Interpretation, PreferenceOrder, check_preference_order, eval_concept, satisfies
from .model_space import EnumerationLimitError, EnumerationSpec, enumerate_interpretations, enumerate_models
from .reasoner import (
    Query,
    QueryResult,
    Verdict,
    is_minimal_model,
    minimal_models,
    prefers_plus,
    query,
    reduce_instance_to_unsat,
)
from .syntax import (
    KnowledgeBase,
    ParseError,
    compute_signature,
    parse_assertion,
    parse_concept,
    parse_kb,
    render_concept,
    render_kb,
    validate_kb,
)

__version__ = "0.1.0"

__all__ = [
    "CircKB",
    "CircPattern",
    "EnumerationLimitError",
    "EnumerationSpec",
    "Interpretation",
    "KnowledgeBase",
    "ParseError",
    "PreferenceOrder",
    "Query",
    "QueryResult",
    "Verdict",
    "check_preference_order",
    "circ_query",
    "compute_signature",
    "crosscheck",
    "crosscheck_reverse",
    "enumerate_interpretations",
    "enumerate_models",
    "eval_concept",
    "from_circumscribed",
    "is_circ_model",
    "is_minimal_model",
    "minimal_models",
    "normalize_roles",
    "parse_assertion",
    "parse_circ_kb",
    "parse_concept",
    "parse_kb",
    "phi",
    "phi_inverse",
    "prefers_plus",
    "query",
    "reduce_instance_to_unsat",
    "render_circ_kb",
    "render_concept",
    "render_kb",
    "sat_via_circumscription",
    "satisfies",
    "to_circumscribed",
    "validate_kb",
]
