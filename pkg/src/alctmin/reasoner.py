"""Minimal-model reasoning for ALC+T+ knowledge bases on bounded domains.

Models on one domain that share the individual map are compared through
their atypicality sets: for operator ``i`` and each ``A`` in its
minimization set, the elements having a ``<_i``-smaller ``A``.  A model is
minimal when no such model has componentwise smaller sets, strictly smaller
somewhere.  All four reasoning tasks are decided by scanning minimal models
for ``n = 1 .. n_max``; anything found is an exact answer, while answers
resting on the absence of a model are only claimed up to the bound.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .interpretation import Interpretation, atypical_mask, elements_of, satisfies
from .model_space import (
    DEFAULT_CEILING,
    Constraint,
    EnumerationSpec,
    ModelSearch,
    ProfileComponent,
    enumerate_models,
    kb_constraints,
    member_constraint,
    minimal_profiles,
    nonempty_constraint,
)
from .syntax import (
    GCI,
    TOP,
    And,
    Concept,
    ConceptAssertion,
    KnowledgeBase,
    Name,
    Not,
    Typical,
    compute_signature,
    fresh_name,
    used_names,
)

# ---------------------------------------------------------------------------
# Atypicality


@dataclass(frozen=True)
class AtypicalityProfile:
    """``per_operator[i - 1]``: the pairs ``(x, A)`` atypical for ``T_i``."""

    per_operator: tuple[frozenset[tuple[int, str]], ...]

    def __le__(self, other: "AtypicalityProfile") -> bool:
        return len(self.per_operator) == len(other.per_operator) and all(
            a <= b for a, b in zip(self.per_operator, other.per_operator)
        )

    def __lt__(self, other: "AtypicalityProfile") -> bool:
        return self <= other and self != other


def profile_components(kb: KnowledgeBase) -> list[ProfileComponent]:
    """One bitmask block per ``(i, A)`` with ``A`` in the ``i``-th minimization set."""
    comps = []
    for i in range(1, kb.k + 1):
        for a in sorted(kb.minimization_set(i)):

            def fn(v, a=a, slot=i - 1):
                return atypical_mask(v.concepts.get(a, 0), v.orders[slot])

            comps.append(ProfileComponent(frozenset({("c", a), ("o", i)}), fn, f"{i}:{a}"))
    return comps


def _check_orders(interp: Interpretation, kb: KnowledgeBase):
    if interp.k < kb.k:
        raise ValueError(f"interpretation has {interp.k} orders, knowledge base needs {kb.k}")


def atypicality_profile(interp: Interpretation, kb: KnowledgeBase) -> AtypicalityProfile:
    _check_orders(interp, kb)
    per = []
    for i in range(1, kb.k + 1):
        pairs = set()
        for a in kb.minimization_set(i):
            mask = atypical_mask(interp.concepts.get(a, 0), interp.orders[i - 1])
            pairs.update((x, a) for x in elements_of(mask))
        per.append(frozenset(pairs))
    return AtypicalityProfile(tuple(per))


def _profile_mask(interp, comps: Sequence[ProfileComponent], n: int) -> int:
    out = 0
    for j, comp in enumerate(comps):
        out |= comp.fn(interp) << (j * n)
    return out


def prefers_plus(i1: Interpretation, i2: Interpretation, kb: KnowledgeBase) -> bool:
    """``i1 <+ i2``: same domain and individuals, strictly smaller atypicality."""
    if i1.size != i2.size or i1.individuals != i2.individuals:
        return False
    return atypicality_profile(i1, kb) < atypicality_profile(i2, kb)


def prefers_single(i1: Interpretation, i2: Interpretation, kb: KnowledgeBase) -> bool:
    """Single-operator preference comparing one set of atypical pairs.

    Only meaningful for ``k = 1``; it is kept as an independent code path to
    cross-check :func:`prefers_plus`.
    """
    if kb.k != 1:
        raise ValueError("the single-set preference needs exactly one operator")
    if i1.size != i2.size or i1.individuals != i2.individuals:
        return False

    def atypical(interp):
        pred = interp.orders[0]
        return {
            (x, a)
            for a in kb.minimization_set(1)
            for x in range(interp.size)
            if any(interp.concepts.get(a, 0) >> y & 1 for y in elements_of(pred[x]))
        }

    s1, s2 = atypical(i1), atypical(i2)
    return s1 < s2


def _spec(kb: KnowledgeBase, n: int, extra: Sequence[Concept] = (), individuals: Sequence[str] = (), **kw):
    sig = compute_signature(kb, *extra)
    names = set(sig.concepts)
    for i in range(1, kb.k + 1):
        names |= kb.minimization_set(i)
    return EnumerationSpec(
        tuple(names), tuple(sig.roles), kb.k, n, tuple(set(kb.individuals()) | set(individuals)), **kw
    )


def is_minimal_model(interp: Interpretation, kb: KnowledgeBase, ceiling: int = DEFAULT_CEILING) -> bool:
    """Whether no model on the same domain with the same individuals beats ``interp``.

    This is exact: competitors range over every model of ``kb`` with
    ``interp``'s domain and individual map.
    """
    _check_orders(interp, kb)
    if not satisfies(interp, kb):
        raise ValueError("interpretation is not a model of the knowledge base")
    comps = profile_components(kb)
    if not comps:
        return True
    spec = _spec(kb, interp.size, individual_map={a: interp.individuals[a] for a in kb.individuals()})
    target = _profile_mask(interp, comps, interp.size)
    search = ModelSearch(spec, kb_constraints(kb), budget=ceiling)
    return search.find_below(comps, target) is None


def is_minimal_model_single(interp: Interpretation, kb: KnowledgeBase, ceiling: int = DEFAULT_CEILING) -> bool:
    """Plain competitor scan with :func:`prefers_single` (``k = 1`` only)."""
    if not satisfies(interp, kb):
        raise ValueError("interpretation is not a model of the knowledge base")
    spec = _spec(kb, interp.size, individual_map={a: interp.individuals[a] for a in kb.individuals()})
    return not any(
        prefers_single(j, interp, kb) for j in enumerate_models(kb, interp.size, ceiling=ceiling, spec=spec)
    )


def _groups(search: ModelSearch, kb: KnowledgeBase, comps):
    group_keys = [("i", a) for a in search.spec.individuals]
    return search.profile_table(comps, group_keys)


def minimal_models(kb: KnowledgeBase, n: int, ceiling: int = DEFAULT_CEILING) -> Iterator[Interpretation]:
    """Every minimal model of ``kb`` on ``0..n-1``."""
    comps = profile_components(kb)
    spec = _spec(kb, n)
    search = ModelSearch(spec, kb_constraints(kb), budget=ceiling)
    table = _groups(search, kb, comps)
    minimal = {g: minimal_profiles(entries) for g, entries in table.items()}
    individuals = spec.individuals
    for model in enumerate_models(kb, n, ceiling=ceiling, spec=spec):
        group = tuple(model.individuals[a] for a in individuals)
        if _profile_mask(model, comps, n) in minimal.get(group, ()):
            yield model


# ---------------------------------------------------------------------------
# Queries


class Verdict(str, enum.Enum):
    ENTAILED_UP_TO_BOUND = "ENTAILED_UP_TO_BOUND"
    NOT_ENTAILED = "NOT_ENTAILED"
    SATISFIABLE = "SATISFIABLE"
    UNSAT_UP_TO_BOUND = "UNSAT_UP_TO_BOUND"
    CONSISTENT = "CONSISTENT"
    INCONSISTENT_UP_TO_BOUND = "INCONSISTENT_UP_TO_BOUND"

    @property
    def exact(self) -> bool:
        return self in (Verdict.NOT_ENTAILED, Verdict.SATISFIABLE, Verdict.CONSISTENT)

    @property
    def positive(self) -> bool:
        """Entailed / satisfiable / consistent, exactly or up to the bound."""
        return self in (Verdict.ENTAILED_UP_TO_BOUND, Verdict.SATISFIABLE, Verdict.CONSISTENT)


@dataclass(frozen=True)
class Query:
    """A reasoning task: ``consistency``, ``satisfiable``, ``subsumes`` or ``instance``."""

    kind: str
    concept: Concept | None = None
    other: Concept | None = None
    individual: str | None = None

    KINDS = ("consistency", "satisfiable", "subsumes", "instance")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown task {self.kind!r}")
        needs = {
            "consistency": (),
            "satisfiable": ("concept",),
            "subsumes": ("concept", "other"),
            "instance": ("concept", "individual"),
        }[self.kind]
        for f in needs:
            if getattr(self, f) is None:
                raise ValueError(f"task {self.kind} needs {f}")

    @classmethod
    def consistency(cls) -> "Query":
        return cls("consistency")

    @classmethod
    def satisfiable(cls, c: Concept) -> "Query":
        return cls("satisfiable", c)

    @classmethod
    def subsumes(cls, c: Concept, d: Concept) -> "Query":
        return cls("subsumes", c, d)

    @classmethod
    def instance(cls, c: Concept, a: str) -> "Query":
        return cls("instance", c, individual=a)

    def concepts(self) -> tuple[Concept, ...]:
        return tuple(c for c in (self.concept, self.other) if c is not None)

    def individuals(self) -> tuple[str, ...]:
        return (self.individual,) if self.individual else ()

    def probe(self) -> list[Constraint]:
        """Constraints a minimal model must meet to witness / refute the task."""
        if self.kind == "consistency":
            return []
        if self.kind == "satisfiable":
            return [nonempty_constraint(self.concept)]
        if self.kind == "subsumes":
            return [nonempty_constraint(And(self.concept, Not(self.other)))]
        return [member_constraint(self.concept, self.individual, negate=True)]

    @property
    def universal(self) -> bool:
        return self.kind in ("subsumes", "instance")


@dataclass
class QueryResult:
    verdict: Verdict
    bound: int
    witness: Interpretation | None = None
    domain_size: int | None = None
    elapsed: float = 0.0
    nodes: int = 0
    sizes_checked: list[int] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.verdict.exact


_FOUND = {
    "consistency": Verdict.CONSISTENT,
    "satisfiable": Verdict.SATISFIABLE,
    "subsumes": Verdict.NOT_ENTAILED,
    "instance": Verdict.NOT_ENTAILED,
}
_NOT_FOUND = {
    "consistency": Verdict.INCONSISTENT_UP_TO_BOUND,
    "satisfiable": Verdict.UNSAT_UP_TO_BOUND,
    "subsumes": Verdict.ENTAILED_UP_TO_BOUND,
    "instance": Verdict.ENTAILED_UP_TO_BOUND,
}


def search_minimal_witness(
    search: ModelSearch,
    comps: Sequence[ProfileComponent],
    group_keys: Sequence,
    probe: Sequence[Constraint],
) -> Interpretation | None:
    """A minimal model (w.r.t. ``comps`` within groups) satisfying ``probe``.

    Minimal profiles are collected first; only then is each minimal
    (group, profile) pair searched for a model that also meets ``probe``.
    Whether such a model exists does not change when domain elements are
    renamed, so only canonical individual maps are explored.
    """
    table = search.profile_table(comps, group_keys, canonical=True)
    pending = []
    for group in sorted(table):
        entries = table[group]
        for profile in sorted(minimal_profiles(entries)):
            witness = entries[profile].witness
            if all(c.check(witness) for c in probe):
                return witness
            pending.append((group, profile))
    if not probe:
        return None
    for group, profile in pending:
        witness = search.find_with_profile(comps, group_keys, group, profile, probe)
        if witness is not None:
            return witness
    return None


def bounded_query(
    q: Query,
    n_max: int,
    build: Callable[[int], tuple[ModelSearch, Sequence[ProfileComponent], Sequence]],
    sizes: Sequence[int] | None = None,
) -> QueryResult:
    """Scan domain sizes ``1..n_max`` with a search built per size."""
    if n_max < 1:
        raise ValueError("the domain bound must be at least 1")
    start = time.perf_counter()
    nodes = 0
    checked = []
    for n in sizes if sizes is not None else range(1, n_max + 1):
        search, comps, group_keys = build(n)
        witness = search_minimal_witness(search, comps, group_keys, q.probe())
        nodes += search.nodes
        checked.append(n)
        if witness is not None:
            return QueryResult(_FOUND[q.kind], n_max, witness, n, time.perf_counter() - start, nodes, checked)
    return QueryResult(_NOT_FOUND[q.kind], n_max, None, None, time.perf_counter() - start, nodes, checked)


def query(
    kb: KnowledgeBase,
    q: Query,
    n_max: int = 3,
    ceiling: int = DEFAULT_CEILING,
    sizes: Sequence[int] | None = None,
) -> QueryResult:
    """Decide ``q`` over minimal models of ``kb`` with domains up to ``n_max``.

    ``sizes`` restricts the scan to the listed domain sizes.
    """
    for c in q.concepts():
        _check_indices(c, kb.k)
    comps = profile_components(kb)
    constraints = kb_constraints(kb)

    def build(n):
        spec = _spec(kb, n, q.concepts(), q.individuals())
        search = ModelSearch(spec, constraints, budget=ceiling)
        return search, comps, [("i", a) for a in spec.individuals]

    return bounded_query(q, n_max, build, sizes)


def _check_indices(c: Concept, k: int):
    sig = compute_signature(c)
    bad = sorted(i for i, _ in sig.typicality if i > k)
    if bad:
        raise ValueError(f"query uses operator T{bad[0]} but only {k} are declared")


# ---------------------------------------------------------------------------
# Task reductions


def reduce_instance_to_unsat(kb: KnowledgeBase, c: Concept, a: str) -> tuple[KnowledgeBase, Concept]:
    """Instance checking as unsatisfiability with one extra operator.

    A fresh name ``A`` is made universal and ``a`` is asserted to be a
    non-typical ``A`` under a new operator minimizing only ``A``; then ``a``
    is an instance of ``c`` in all minimal models iff
    ``!T_{k+1}(A) & !c`` is unsatisfiable w.r.t. the extended knowledge base.
    """
    if a not in kb.individuals():
        raise ValueError(f"individual {a} does not occur in the knowledge base")
    fresh = fresh_name("A", used_names(kb) | set(compute_signature(c).concepts))
    k = kb.k + 1
    not_typical = Not(Typical(k, Name(fresh)))
    extended = kb.extend(
        tbox=[GCI(TOP, Name(fresh))],
        abox=[ConceptAssertion(not_typical, a)],
        k=k,
        minimize=kb.minimization_sets() + (frozenset({fresh}),),
    )
    return extended, And(not_typical, Not(c))


def reduce_subsumption_to_unsat(c: Concept, d: Concept) -> Concept:
    """``c`` is subsumed by ``d`` in all minimal models iff this is unsatisfiable."""
    return And(c, Not(d))


__all__ = [
    "AtypicalityProfile",
    "Query",
    "QueryResult",
    "Verdict",
    "atypicality_profile",
    "bounded_query",
    "is_minimal_model",
    "is_minimal_model_single",
    "minimal_models",
    "prefers_plus",
    "prefers_single",
    "profile_components",
    "query",
    "reduce_instance_to_unsat",
    "reduce_subsumption_to_unsat",
    "search_minimal_witness",
]
