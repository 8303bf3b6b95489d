"""Translations between ALC+T+ minimal-model reasoning and circumscription.

Upward: every pair ``(i, A)`` gets a fresh concept ``A_i*`` standing for
the ``<_i``-atypical ``A`` elements, every operator ``i`` a fresh role
``r_i`` standing for the inverse of ``<_i``, and ``T_i(A)`` is rewritten to
``A & !A_i*``.  Minimizing the ``A_i*`` of the minimization sets then
simulates the preference between models.

Downward: a circumscribed ALC TBox with minimized names ``M_1..M_q`` is
relativized to a marker concept ``D`` and encoded with two typicality
operators, one minimizing the ``M_j`` and one keeping ``D`` from shrinking.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from .circumscription import CircKB, CircPattern, circ_query
from .interpretation import (
    Interpretation,
    PreferenceOrder,
    atypical_mask,
    check_preference_order,
    satisfies,
)
from .model_space import DEFAULT_CEILING, EnumerationLimitError, strict_partial_orders
from .reasoner import Query, QueryResult, query
from .syntax import (
    GCI,
    TOP,
    And,
    Box,
    Concept,
    ConceptAssertion,
    Exists,
    KnowledgeBase,
    Name,
    Not,
    Signature,
    Typical,
    compute_signature,
    fresh_name,
    kb_size,
    render_concept,
    used_names,
)

# ---------------------------------------------------------------------------
# Upward translation


@dataclass(frozen=True)
class TranslationContext:
    """Fresh symbols introduced by :func:`to_circumscribed`.

    ``atypical[(i, A)]`` names ``A_i*``; ``roles[i]`` names ``r_i``;
    ``minimized`` holds the ``A_i*`` with ``A`` in the ``i``-th
    minimization set.
    """

    sigma: Signature
    k: int
    atypical: dict[tuple[int, str], str]
    roles: dict[int, str]
    minimized: frozenset[str]

    def fresh_concepts(self) -> frozenset[str]:
        return frozenset(self.atypical.values())

    def fresh_roles(self) -> frozenset[str]:
        return frozenset(self.roles.values())

    def sidecar(self) -> dict:
        """Provenance of the fresh names as plain data."""
        return {
            "atypical": [
                {"operator": i, "concept": a, "name": name, "minimized": name in self.minimized}
                for (i, a), name in sorted(self.atypical.items())
            ],
            "roles": [{"operator": i, "name": name} for i, name in sorted(self.roles.items())],
        }


def rewrite_bar(c: Concept, ctx: TranslationContext) -> Concept:
    """Replace every ``T_i(A)`` by ``A & !A_i*``."""
    if isinstance(c, Typical):
        if not isinstance(c.arg, Name):
            raise ValueError("typicality over a complex concept; normalize the arguments first")
        key = (c.index, c.arg.name)
        if key not in ctx.atypical:
            raise ValueError(f"T{c.index}({c.arg.name}) is not covered by the translation signature")
        return And(c.arg, Not(Name(ctx.atypical[key])))
    if isinstance(c, Box):
        raise ValueError("box modalities cannot be translated")
    if isinstance(c, Not):
        return Not(rewrite_bar(c.arg, ctx))
    if isinstance(c, And):
        return And(rewrite_bar(c.left, ctx), rewrite_bar(c.right, ctx))
    if isinstance(c, Exists):
        return Exists(c.role, rewrite_bar(c.arg, ctx))
    return c


def to_circumscribed(kb: KnowledgeBase, sigma: Signature | None = None) -> tuple[CircKB, TranslationContext]:
    """Translate ``kb`` into a concept-circumscribed ALC knowledge base.

    ``sigma`` must contain the signature of ``kb``; typicality atoms in it
    that do not occur in ``kb`` (for instance from later queries) also get
    fresh names.
    """
    own = compute_signature(kb)
    sigma = own if sigma is None else sigma
    if not own <= sigma:
        raise ValueError("the translation signature must contain the signature of the knowledge base")
    sets = kb.minimization_sets()
    pairs = {(i, a) for i in range(1, kb.k + 1) for a in sets[i - 1]}
    pairs |= {(i, a) for i, a in sigma.typicality}
    if any(i > kb.k for i, _ in pairs):
        raise ValueError("the translation signature uses more operators than the knowledge base")
    taken = used_names(kb) | set(sigma.concepts) | set(sigma.roles)
    atypical = {(i, a): fresh_name(f"{a}_{i}", taken) for i, a in sorted(pairs)}
    roles = {i: fresh_name(f"r{i}", taken) for i in range(1, kb.k + 1)}
    minimized = frozenset(atypical[(i, a)] for i in range(1, kb.k + 1) for a in sets[i - 1])
    ctx = TranslationContext(sigma, kb.k, atypical, roles, minimized)

    tbox = [GCI(rewrite_bar(ax.lhs, ctx), rewrite_bar(ax.rhs, ctx)) for ax in kb.tbox]
    for (i, a), star in sorted(atypical.items()):
        r = roles[i]
        witness = Exists(r, And(Name(a), Not(Name(star))))
        tbox += [GCI(Name(star), witness), GCI(witness, Name(star)), GCI(Exists(r, Name(star)), Name(star))]
    abox = [
        ConceptAssertion(rewrite_bar(a.concept, ctx), a.individual) if isinstance(a, ConceptAssertion) else a
        for a in kb.abox
    ]
    plain = {a for _, a in pairs}
    varying = (
        set(sigma.concepts) | set(sigma.roles) | plain | (set(atypical.values()) - minimized) | set(roles.values())
    )
    return CircKB(tuple(tbox), tuple(abox), CircPattern(minimized, frozenset(), frozenset(varying))), ctx


def phi(interp: Interpretation, ctx: TranslationContext) -> Interpretation:
    """The classical image: atypical sets as ``A_i*``, inverted orders as ``r_i``."""
    if interp.k < ctx.k:
        raise ValueError(f"interpretation has {interp.k} orders, translation needs {ctx.k}")
    fresh = ctx.fresh_concepts() | ctx.fresh_roles()
    concepts = {c: m for c, m in interp.concepts.items() if c not in fresh}
    for (i, a), star in ctx.atypical.items():
        concepts[star] = atypical_mask(interp.concepts.get(a, 0), interp.orders[i - 1])
    roles = {r: s for r, s in interp.roles.items() if r not in fresh}
    for i, r in ctx.roles.items():
        # (x, y) in r_i iff y <_i x, so successor masks are predecessor masks
        roles[r] = interp.orders[i - 1]
    return Interpretation(interp.size, concepts, roles, (), interp.individuals)


class NormalizationRequired(ValueError):
    """A fresh role is not the inverse of a strict partial order."""


def phi_inverse(model: Interpretation, ctx: TranslationContext) -> Interpretation:
    """Read the orders back from the fresh roles of a normalized model."""
    n = model.size
    orders = []
    for i in range(1, ctx.k + 1):
        succ = model.roles.get(ctx.roles[i], (0,) * n)
        diag = check_preference_order(PreferenceOrder.from_predecessors(succ), n)
        if not diag.ok:
            raise NormalizationRequired(
                f"role {ctx.roles[i]} is not an inverted strict partial order "
                f"({'; '.join(diag.violations)}); apply normalize_roles first"
            )
        orders.append(tuple(succ))
    fresh = ctx.fresh_concepts()
    for (i, a), star in ctx.atypical.items():
        if model.concepts.get(star, 0) != atypical_mask(model.concepts.get(a, 0), orders[i - 1]):
            raise ValueError(f"{star} does not match the atypical {a} elements; not a model of the translation")
    concepts = {c: m for c, m in model.concepts.items() if c not in fresh}
    roles = {r: s for r, s in model.roles.items() if r not in ctx.fresh_roles()}
    return Interpretation(n, concepts, roles, orders, model.individuals)


class NormalizationFailure(RuntimeError):
    """No normalizing reassignment exists: the role normalization property is violated."""


def is_normalized(model: Interpretation, ctx: TranslationContext) -> bool:
    for r in ctx.roles.values():
        succ = model.roles.get(r, (0,) * model.size)
        if not check_preference_order(PreferenceOrder.from_predecessors(succ), model.size).ok:
            return False
    return True


def normalize_roles(
    model: Interpretation, circkb: CircKB, ctx: TranslationContext, ceiling: int = DEFAULT_CEILING
) -> Interpretation:
    """Reassign each ``r_i`` to an inverted strict partial order, keeping the model.

    Every other symbol stays frozen.  Roles that are already normalized are
    kept.  Each ``r_i`` only occurs in its own axioms, so the roles are
    searched one at a time over all strict partial orders of the domain.
    """
    kb = circkb.as_kb()
    if not satisfies(model, kb):
        raise ValueError("interpretation is not a model of the circumscribed knowledge base")
    n = model.size
    candidates = strict_partial_orders(n)
    if len(candidates) > ceiling:
        raise EnumerationLimitError(len(candidates), ceiling, "candidate orders")
    current = model
    for i in sorted(ctx.roles):
        r = ctx.roles[i]
        succ = current.roles.get(r, (0,) * n)
        if check_preference_order(PreferenceOrder.from_predecessors(succ), n).ok:
            continue
        for cand in candidates:
            trial = current.replace(roles={**current.roles, r: cand})
            if satisfies(trial, kb):
                current = trial
                break
        else:
            raise NormalizationFailure(f"no normalizing assignment for {r} on a domain of size {n}")
    return current


def sat_via_circumscription(
    c0: Concept,
    kb: KnowledgeBase,
    n_max: int = 3,
    normalized: bool = True,
    ceiling: int = DEFAULT_CEILING,
) -> QueryResult:
    """Decide satisfiability of ``c0`` w.r.t. ``kb`` through the translation.

    With ``normalized`` the circumscription side only ranges over models
    whose fresh roles are inverted strict partial orders.
    """
    circkb, ctx = to_circumscribed(kb, compute_signature(kb, c0))
    roles = ctx.fresh_roles() if normalized else ()
    return circ_query(circkb, Query.satisfiable(rewrite_bar(c0, ctx)), n_max, roles, ceiling)


# ---------------------------------------------------------------------------
# Downward translation


@dataclass(frozen=True)
class StarContext:
    """Symbols of the circumscription-to-typicality reduction."""

    marker: str  # D
    top: str  # the fresh always-true concept A
    main: str  # c
    witnesses: dict[str, str]  # M_i -> c_{m_i}
    minimized: tuple[str, ...]  # M_1..M_q


def star_transform(c: Concept, marker: str) -> Concept:
    """Relativize role successors to ``marker``."""
    if isinstance(c, (Typical, Box)):
        raise ValueError("the relativization applies to classical concepts only")
    if isinstance(c, Not):
        return Not(star_transform(c.arg, marker))
    if isinstance(c, And):
        return And(star_transform(c.left, marker), star_transform(c.right, marker))
    if isinstance(c, Exists):
        return Exists(c.role, And(Name(marker), star_transform(c.arg, marker)))
    return c


def from_circumscribed(circkb: CircKB, c0: Concept) -> tuple[KnowledgeBase, Concept, StarContext]:
    """Encode satisfiability of ``c0`` under ``circkb`` with two typicality operators.

    Requires an empty ABox and no fixed predicates.
    """
    if circkb.abox:
        raise ValueError("the reduction needs an empty ABox")
    if circkb.pattern.fixed:
        raise ValueError("the reduction needs an empty set of fixed predicates")
    base = circkb.as_kb()
    taken = used_names(base) | set(compute_signature(c0).concepts) | set(circkb.pattern.minimized)
    marker = fresh_name("D", taken)
    top = fresh_name("A", taken)
    main = fresh_name("c", taken)
    minimized = tuple(sorted(circkb.pattern.minimized))
    witnesses = {m: fresh_name(f"c_{m}", taken) for m in minimized}
    ctx = StarContext(marker, top, main, witnesses, minimized)

    d = Name(marker)
    tbox = [GCI(And(d, star_transform(ax.lhs, marker)), star_transform(ax.rhs, marker)) for ax in circkb.tbox]
    tbox += [GCI(And(d, Name(m)), Not(Typical(1, Name(m)))) for m in minimized]
    tbox += [GCI(TOP, Name(top)), GCI(Not(d), Not(Typical(2, Name(top))))]
    abox = [ConceptAssertion(d, main)]
    for m in minimized:
        w = witnesses[m]
        abox += [ConceptAssertion(Not(d), w), ConceptAssertion(Typical(1, Name(m)), w)]
        abox += [ConceptAssertion(Not(Name(other)), w) for other in minimized if other != m]
    kb = KnowledgeBase(tuple(tbox), tuple(abox), 2, (frozenset(minimized), frozenset({top})))
    return kb, And(d, star_transform(c0, marker)), ctx


# ---------------------------------------------------------------------------
# Cross-checking


@dataclass
class CrosscheckEntry:
    label: str
    direct: QueryResult
    translated: QueryResult
    elapsed: float

    @property
    def agree(self) -> bool:
        return self.direct.verdict.positive == self.translated.verdict.positive


@dataclass
class CrosscheckReport:
    entries: list[CrosscheckEntry] = field(default_factory=list)

    @property
    def agreements(self) -> int:
        return sum(e.agree for e in self.entries)

    @property
    def disagreements(self) -> list[CrosscheckEntry]:
        return [e for e in self.entries if not e.agree]

    @property
    def all_agree(self) -> bool:
        return not self.disagreements

    def summary(self, timing: bool = True) -> str:
        lines = []
        for e in self.entries:
            mark = "agree" if e.agree else "DISAGREE"
            line = f"{mark:8} {e.label}: direct={e.direct.verdict.value} translated={e.translated.verdict.value}"
            lines.append(line + (f" ({e.elapsed:.2f}s)" if timing else ""))
        lines.append(f"{self.agreements}/{len(self.entries)} agree")
        return "\n".join(lines)


def _label(q: Query) -> str:
    args = [render_concept(c) for c in q.concepts()] + list(q.individuals())
    return f"{q.kind}({', '.join(args)})"


def translated_query(kb: KnowledgeBase, q: Query, n_max: int, ceiling: int = DEFAULT_CEILING) -> QueryResult:
    """Answer ``q`` on the circumscribed translation of ``kb``."""
    circkb, ctx = to_circumscribed(kb, compute_signature(kb, *q.concepts()))
    bar = Query(
        q.kind,
        None if q.concept is None else rewrite_bar(q.concept, ctx),
        None if q.other is None else rewrite_bar(q.other, ctx),
        q.individual,
    )
    return circ_query(circkb, bar, n_max, ctx.fresh_roles(), ceiling)


def crosscheck(
    kb: KnowledgeBase, queries: Sequence[Query], n_max: int = 3, ceiling: int = DEFAULT_CEILING
) -> CrosscheckReport:
    """Run each query directly and through the circumscription translation."""
    report = CrosscheckReport()
    for q in queries:
        start = time.perf_counter()
        direct = query(kb, q, n_max, ceiling)
        translated = translated_query(kb, q, n_max, ceiling)
        report.entries.append(CrosscheckEntry(_label(q), direct, translated, time.perf_counter() - start))
    return report


def crosscheck_reverse(
    circkb: CircKB, concepts: Sequence[Concept], n_max: int = 4, ceiling: int = DEFAULT_CEILING
) -> CrosscheckReport:
    """Compare satisfiability under ``circkb`` with the two-operator encoding.

    A model of the encoding of size ``n`` has ``q`` extra elements for the
    ``q`` witness individuals (``q`` = number of minimized names), so the
    encoding is searched up to ``n_max`` and the circumscription side up to
    ``n_max - q``.
    """
    report = CrosscheckReport()
    q_count = len(circkb.pattern.minimized)
    circ_bound = n_max - q_count
    if circ_bound < 1:
        raise ValueError(f"bound {n_max} leaves no room next to {q_count} witness elements")
    for c0 in concepts:
        start = time.perf_counter()
        direct = circ_query(circkb, Query.satisfiable(c0), circ_bound, ceiling=ceiling)
        kb, c0_prime, _ = from_circumscribed(circkb, c0)
        translated = query(kb, Query.satisfiable(c0_prime), n_max, ceiling)
        report.entries.append(CrosscheckEntry(_label(Query.satisfiable(c0)), direct, translated, time.perf_counter() - start))
    return report


def translation_ratio(kb: KnowledgeBase) -> float:
    circkb, _ = to_circumscribed(kb)
    return circkb.size() / max(kb_size(kb), 1)


__all__ = [
    "CrosscheckEntry",
    "CrosscheckReport",
    "NormalizationFailure",
    "NormalizationRequired",
    "StarContext",
    "TranslationContext",
    "crosscheck",
    "crosscheck_reverse",
    "from_circumscribed",
    "is_normalized",
    "normalize_roles",
    "phi",
    "phi_inverse",
    "rewrite_bar",
    "sat_via_circumscription",
    "star_transform",
    "to_circumscribed",
    "translated_query",
    "translation_ratio",
]
