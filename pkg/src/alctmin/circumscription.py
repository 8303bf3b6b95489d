"""Concept-circumscribed ALC knowledge bases.

A circumscription pattern splits the predicates into minimized (``M``),
fixed (``F``) and varying (``V``) ones.  One model is preferred to another
on the same domain with the same individuals and the same fixed extensions
when every minimized extension is included in the other's, strictly for at
least one.  Circumscribed models are the preferred-minimal models.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .interpretation import Interpretation, elements_of, satisfies
from .model_space import (
    DEFAULT_CEILING,
    EnumerationSpec,
    ModelSearch,
    ProfileComponent,
    kb_constraints,
)
from .reasoner import Query, QueryResult, bounded_query
from .syntax import (
    Assertion,
    GCI,
    KnowledgeBase,
    ParseError,
    Signature,
    compute_signature,
    is_classical,
    kb_size,
    parse_assertion,
    parse_gcis,
    parse_name_list,
    render_blocks,
    split_document,
)


@dataclass(frozen=True)
class CircPattern:
    """Minimized, fixed and varying predicates.

    ``varying=None`` means "every other predicate varies".
    """

    minimized: frozenset[str] = frozenset()
    fixed: frozenset[str] = frozenset()
    varying: frozenset[str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "minimized", frozenset(self.minimized))
        object.__setattr__(self, "fixed", frozenset(self.fixed))
        if self.varying is not None:
            object.__setattr__(self, "varying", frozenset(self.varying))
        overlap = self.minimized & self.fixed
        if self.varying is not None:
            overlap |= (self.minimized | self.fixed) & self.varying
        if overlap:
            raise ValueError(f"predicates in more than one part of the pattern: {sorted(overlap)}")


@dataclass(frozen=True)
class CircKB:
    """A classical ALC knowledge base under a circumscription pattern."""

    tbox: tuple[GCI, ...] = ()
    abox: tuple[Assertion, ...] = ()
    pattern: CircPattern = field(default_factory=CircPattern)

    def __post_init__(self):
        object.__setattr__(self, "tbox", tuple(self.tbox))
        object.__setattr__(self, "abox", tuple(self.abox))
        kb = self.as_kb()
        for c in kb.concepts():
            if not is_classical(c):
                raise ValueError("circumscribed knowledge bases must be classical")
        sig = compute_signature(kb)
        p = self.pattern
        roles_misplaced = (p.minimized | p.fixed) & sig.roles
        if roles_misplaced:
            raise ValueError(f"roles cannot be minimized or fixed: {sorted(roles_misplaced)}")
        if p.varying is not None:
            missing = (sig.concepts | sig.roles) - p.minimized - p.fixed - p.varying
            if missing:
                raise ValueError(f"predicates missing from the pattern: {sorted(missing)}")

    def as_kb(self) -> KnowledgeBase:
        return KnowledgeBase(self.tbox, self.abox, 0)

    def individuals(self) -> tuple[str, ...]:
        return self.as_kb().individuals()

    def signature(self) -> Signature:
        return compute_signature(self.as_kb())

    def size(self) -> int:
        return kb_size(self.as_kb()) + len(self.pattern.minimized) + len(self.pattern.fixed)


# ---------------------------------------------------------------------------
# Preference and minimality


def prefers_cp(i1: Interpretation, i2: Interpretation, pattern: CircPattern) -> bool:
    """``i1 <_CP i2``."""
    if i1.size != i2.size or i1.individuals != i2.individuals:
        return False
    if any(i1.concepts.get(a, 0) != i2.concepts.get(a, 0) for a in pattern.fixed):
        return False
    strict = False
    for a in pattern.minimized:
        m1, m2 = i1.concepts.get(a, 0), i2.concepts.get(a, 0)
        if m1 & ~m2:
            return False
        strict = strict or m1 != m2
    return strict


def circ_components(pattern: CircPattern) -> list[ProfileComponent]:
    return [
        ProfileComponent(frozenset({("c", a)}), lambda v, a=a: v.concepts.get(a, 0), a)
        for a in sorted(pattern.minimized)
    ]


def circ_spec(
    circkb: CircKB,
    n: int,
    extra: Sequence = (),
    individuals: Iterable[str] = (),
    normalized_roles: Iterable[str] = (),
    **kw,
) -> EnumerationSpec:
    """Spec over the KB signature plus every minimized and fixed name."""
    sig = compute_signature(circkb.as_kb(), *extra)
    p = circkb.pattern
    return EnumerationSpec(
        tuple(sig.concepts | p.minimized | p.fixed),
        tuple(sig.roles),
        0,
        n,
        tuple(set(circkb.individuals()) | set(individuals)),
        order_like_roles=frozenset(normalized_roles),
        **kw,
    )


def is_circ_model(
    interp: Interpretation,
    circkb: CircKB,
    normalized_roles: Iterable[str] = (),
    ceiling: int = DEFAULT_CEILING,
) -> bool:
    """Whether ``interp`` is a minimal model under the pattern.

    Competitors share the domain, the individual map and the fixed
    extensions.  With ``normalized_roles`` the competitors are restricted to
    models interpreting those roles as inverses of strict partial orders.
    """
    kb = circkb.as_kb()
    if not satisfies(interp, kb):
        raise ValueError("interpretation is not a model of the knowledge base")
    comps = circ_components(circkb.pattern)
    if not comps:
        return True
    spec = circ_spec(
        circkb,
        interp.size,
        normalized_roles=normalized_roles,
        individual_map={a: interp.individuals[a] for a in circkb.individuals()},
        fixed_concepts={a: elements_of(interp.concepts.get(a, 0)) for a in circkb.pattern.fixed},
    )
    target = 0
    for j, comp in enumerate(comps):
        target |= comp.fn(interp) << (j * interp.size)
    search = ModelSearch(spec, kb_constraints(kb), budget=ceiling)
    return search.find_below(comps, target) is None


def circ_query(
    circkb: CircKB,
    q: Query,
    n_max: int = 3,
    normalized_roles: Iterable[str] = (),
    ceiling: int = DEFAULT_CEILING,
    sizes: Sequence[int] | None = None,
) -> QueryResult:
    """Decide ``q`` over circumscribed models with domains up to ``n_max``."""
    for c in q.concepts():
        if not is_classical(c):
            raise ValueError("queries over circumscribed knowledge bases must be classical")
    kb = circkb.as_kb()
    comps = circ_components(circkb.pattern)
    constraints = kb_constraints(kb)
    normalized_roles = frozenset(normalized_roles)

    def build(n):
        spec = circ_spec(circkb, n, q.concepts(), q.individuals(), normalized_roles)
        group = [("i", a) for a in spec.individuals] + [("c", a) for a in sorted(circkb.pattern.fixed)]
        return ModelSearch(spec, constraints, budget=ceiling), comps, group

    return bounded_query(q, n_max, build, sizes)


# ---------------------------------------------------------------------------
# Text format


def parse_circ_kb(text: str, allow_reserved: bool = False) -> CircKB:
    """Parse the circumscribed KB format.

    Headers are ``minimize: ...``, ``fix: ...`` and ``vary: rest`` (or an
    explicit list); typicality is rejected.
    """
    doc = split_document(text)
    parts: dict[str, frozenset[str] | None] = {}
    for key, value, lineno, offset in doc.headers:
        if key not in ("minimize", "fix", "vary"):
            raise ParseError(f"unknown header {key!r}", lineno, 1)
        if key in parts:
            raise ParseError(f"duplicate {key!r} declaration", lineno, 1)
        if key == "vary" and value.strip() == "rest":
            parts[key] = None
        else:
            parts[key] = parse_name_list(value, lineno, offset, allow_reserved)
    tbox: list[GCI] = []
    for line_text, lineno, offset in doc.tbox_lines:
        tbox.extend(parse_gcis(line_text, 0, allow_reserved, line=lineno, offset=offset))
    abox = [
        parse_assertion(line_text, 0, allow_reserved, line=lineno, offset=offset)
        for line_text, lineno, offset in doc.abox_lines
    ]
    pattern = CircPattern(parts.get("minimize") or frozenset(), parts.get("fix") or frozenset(), parts.get("vary"))
    return CircKB(tuple(tbox), tuple(abox), pattern)


def render_circ_kb(circkb: CircKB) -> str:
    p = circkb.pattern
    lines = [f"minimize: {', '.join(sorted(p.minimized))}"]
    if p.fixed:
        lines.append(f"fix: {', '.join(sorted(p.fixed))}")
    lines.append("vary: rest" if p.varying is None else f"vary: {', '.join(sorted(p.varying))}")
    lines += render_blocks(circkb.tbox, circkb.abox)
    return "\n".join(lines) + "\n"


__all__ = [
    "CircKB",
    "CircPattern",
    "circ_components",
    "circ_query",
    "circ_spec",
    "is_circ_model",
    "parse_circ_kb",
    "prefers_cp",
    "render_circ_kb",
]
