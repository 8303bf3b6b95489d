"""Exhaustive generation of interpretations and models on a fixed domain.

Everything here is a backtracking search over *symbols*: concept names,
role names, preference orders and individuals, each with a finite list of
candidate values.  A constraint is checked as soon as every symbol it reads
is assigned, which is what keeps model enumeration tractable.

Minimality questions are answered through :meth:`ModelSearch.profile_table`.
Preference between models on one domain (both the ALC+T+ relation and the
circumscription relation) only compares a *profile* bitmask, and only among
models agreeing on a *group* (the individual map, plus fixed predicates for
circumscription).  The search therefore enumerates the symbols the group and
the profile depend on, and merely decides whether the remaining symbols can
be completed to a model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .interpretation import Interpretation, compile_concept, gci_check, mask_of
from .syntax import (
    TOP_NAME,
    Box,
    Concept,
    ConceptAssertion,
    Exists,
    KnowledgeBase,
    Name,
    RoleAssertion,
    Signature,
    Typical,
    compute_signature,
    subconcepts,
)

DEFAULT_CEILING = 10**8

Key = tuple  # ("c", name) | ("r", name) | ("o", index) | ("i", name)


class EnumerationLimitError(RuntimeError):
    """The configured enumeration ceiling would be (or was) exceeded."""

    def __init__(self, count: int, ceiling: int, what: str = "raw interpretations"):
        self.count = count
        self.ceiling = ceiling
        super().__init__(f"{count} {what} exceed the ceiling of {ceiling}")


# ---------------------------------------------------------------------------
# Orders and relations


@lru_cache(maxsize=None)
def strict_partial_orders(n: int) -> tuple[tuple[int, ...], ...]:
    """All strict partial orders on ``0..n-1`` as predecessor-mask tuples.

    Built by adding one element at a time: the new element ``z`` gets a
    down-closed set ``D`` of elements below it and an up-closed set ``U``
    above it, with every ``d in D`` already below every ``u in U``.  Every
    order on ``n`` elements arises exactly once from its restriction.
    """
    if n == 0:
        return ((),)
    result = []
    for pred in strict_partial_orders(n - 1):
        m = n - 1
        succ = [0] * m
        for x, p in enumerate(pred):
            for y in range(m):
                if p >> y & 1:
                    succ[y] |= 1 << x
        for down in range(1 << m):
            if any(down >> d & 1 and pred[d] & ~down for d in range(m)):
                continue
            for up in range(1 << m):
                if up & down:
                    continue
                if any(up >> u & 1 and succ[u] & ~up for u in range(m)):
                    continue
                if any(up >> u & 1 and down & ~pred[u] for u in range(m)):
                    continue
                new = [p | (1 << m) if up >> x & 1 else p for x, p in enumerate(pred)]
                new.append(down)
                result.append(tuple(new))
    return tuple(sorted(result))


@lru_cache(maxsize=None)
def all_relations(n: int) -> tuple[tuple[int, ...], ...]:
    """All binary relations on ``0..n-1`` as successor-mask tuples."""
    return tuple(itertools.product(range(1 << n), repeat=n))


@lru_cache(maxsize=None)
def order_like_relations(n: int) -> tuple[tuple[int, ...], ...]:
    """Relations whose inverse is a strict partial order.

    A successor-mask tuple of ``r`` read as predecessor masks of ``r^-1``
    is the same tuple, so these are exactly :func:`strict_partial_orders`.
    """
    return strict_partial_orders(n)


# ---------------------------------------------------------------------------
# Specs


@dataclass(frozen=True)
class EnumerationSpec:
    """What to enumerate: names, operator count, domain size, individuals.

    ``fixed_concepts`` pins chosen concept extensions, ``individual_map``
    pins the individuals, and roles listed in ``order_like_roles`` only
    range over relations whose inverse is a strict partial order.
    """

    concepts: tuple[str, ...]
    roles: tuple[str, ...]
    k: int
    size: int
    individuals: tuple[str, ...] = ()
    fixed_concepts: Mapping[str, frozenset[int]] = field(default_factory=dict)
    individual_map: Mapping[str, int] | None = None
    order_like_roles: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("domain size must be at least 1")
        full = set(range(self.size))
        for name, ext in self.fixed_concepts.items():
            if not set(ext) <= full:
                raise ValueError(f"fixed extension of {name} outside the domain")
        if self.individual_map is not None:
            missing = set(self.individuals) - set(self.individual_map)
            if missing:
                raise ValueError(f"individual map misses {sorted(missing)}")
        object.__setattr__(self, "concepts", tuple(sorted(set(self.concepts))))
        object.__setattr__(self, "roles", tuple(sorted(set(self.roles))))
        object.__setattr__(self, "individuals", tuple(sorted(set(self.individuals))))

    @classmethod
    def for_signature(
        cls, sig: Signature, k: int, size: int, individuals: Iterable[str] = (), **kw
    ) -> "EnumerationSpec":
        return cls(tuple(sig.concepts), tuple(sig.roles), k, size, tuple(individuals), **kw)

    @classmethod
    def for_kb(cls, kb: KnowledgeBase, size: int, **kw) -> "EnumerationSpec":
        return cls.for_signature(compute_signature(kb), kb.k, size, kb.individuals(), **kw)

    def domains(self) -> dict[Key, Sequence]:
        n = self.size
        doms: dict[Key, Sequence] = {}
        for a in self.individuals:
            if self.individual_map is not None:
                doms[("i", a)] = (self.individual_map[a],)
            else:
                doms[("i", a)] = range(n)
        for c in self.concepts:
            if c in self.fixed_concepts:
                doms[("c", c)] = (mask_of(self.fixed_concepts[c]),)
            else:
                doms[("c", c)] = range(1 << n)
        for r in self.roles:
            doms[("r", r)] = order_like_relations(n) if r in self.order_like_roles else all_relations(n)
        for i in range(1, self.k + 1):
            doms[("o", i)] = strict_partial_orders(n)
        return doms

    def raw_count(self) -> int:
        count = 1
        for values in self.domains().values():
            count *= len(values)
        return count


# ---------------------------------------------------------------------------
# Constraints


@dataclass(frozen=True)
class Constraint:
    deps: frozenset
    check: Callable[[object], bool]
    label: str = ""


def concept_deps(c: Concept) -> frozenset:
    deps = set()
    for s in subconcepts(c):
        if isinstance(s, Name) and s.name != TOP_NAME:
            deps.add(("c", s.name))
        elif isinstance(s, Exists):
            deps.add(("r", s.role))
        elif isinstance(s, (Typical, Box)):
            deps.add(("o", s.index))
    return frozenset(deps)


def kb_constraints(kb: KnowledgeBase) -> list[Constraint]:
    """One constraint per GCI and assertion of ``kb``."""
    out = []
    for ax in kb.tbox:
        out.append(Constraint(concept_deps(ax.lhs) | concept_deps(ax.rhs), gci_check(ax), "gci"))
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            out.append(member_constraint(a.concept, a.individual))
        elif isinstance(a, RoleAssertion):
            out.append(role_constraint(a.role, a.subject, a.object))
    return out


def member_constraint(c: Concept, individual: str, negate: bool = False) -> Constraint:
    ev = compile_concept(c)

    def check(v):
        return bool(ev(v) >> v.individuals[individual] & 1) != negate

    return Constraint(concept_deps(c) | {("i", individual)}, check, "member")


def role_constraint(role: str, a: str, b: str) -> Constraint:
    def check(v):
        succ = v.roles.get(role)
        return succ is not None and bool(succ[v.individuals[a]] >> v.individuals[b] & 1)

    return Constraint(frozenset({("r", role), ("i", a), ("i", b)}), check, "role")


def canonical_map_constraints(spec: EnumerationSpec) -> list[Constraint]:
    """Symmetry breaking for free individual maps.

    Listing the individuals in sorted order, each one is mapped to an
    element at most one above the largest element used so far.  Every
    individual map is a renaming of exactly one such map.  Nothing is
    returned when the spec pins individuals or concept extensions, since
    renaming would not preserve those.
    """
    if spec.individual_map is not None or spec.fixed_concepts or not spec.individuals:
        return []
    names = spec.individuals
    out = []
    for j in range(1, len(names)):
        prefix = names[:j]

        def check(v, prefix=prefix, name=names[j]):
            return v.individuals[name] <= max(v.individuals[a] for a in prefix) + 1

        out.append(Constraint(frozenset(("i", a) for a in names[: j + 1]), check, "canonical"))
    first = names[0]
    out.append(Constraint(frozenset({("i", first)}), lambda v: v.individuals[first] == 0, "canonical"))
    return out


def nonempty_constraint(c: Concept) -> Constraint:
    ev = compile_concept(c)
    return Constraint(concept_deps(c), lambda v: ev(v) != 0, "nonempty")


# ---------------------------------------------------------------------------
# Search


class Valuation:
    """Mutable partial assignment, evaluable by compiled concepts."""

    __slots__ = ("size", "full", "concepts", "roles", "orders", "individuals")

    def __init__(self, size: int, k: int):
        self.size = size
        self.full = (1 << size) - 1
        self.concepts: dict[str, int] = {}
        self.roles: dict[str, tuple[int, ...]] = {}
        self.orders: list = [None] * k
        self.individuals: dict[str, int] = {}

    def snapshot(self) -> Interpretation:
        return Interpretation(
            self.size, dict(self.concepts), dict(self.roles), tuple(self.orders), dict(self.individuals)
        )


def _setter(v: Valuation, key: Key):
    kind, name = key
    if kind == "c":
        d = v.concepts
    elif kind == "r":
        d = v.roles
    elif kind == "i":
        d = v.individuals
    else:
        d, name = v.orders, name - 1

    def put(value):
        d[name] = value

    return put


@dataclass
class _Plan:
    order: list
    checks: list  # checks[level] = constraints completed at that level
    initial: list  # constraints completed before the first level


@dataclass
class ProfileComponent:
    """One ``size``-bit block of a profile bitmask."""

    deps: frozenset
    fn: Callable[[object], int]
    label: str = ""


class ProfileEntry:
    """One achievable profile of a group, with a witness assignment."""

    __slots__ = ("search", "assignment")

    def __init__(self, search: "ModelSearch", assignment: dict):
        self.search = search
        self.assignment = assignment

    @property
    def witness(self) -> Interpretation:
        return self.search.build(self.assignment)


@dataclass
class _Block:
    keys: list
    constraints: list = field(default_factory=list)
    components: list = field(default_factory=list)
    prefix_plan: object = None
    suffix_plan: object = None


class ModelSearch:
    """Backtracking search over the interpretations described by ``spec``.

    ``budget`` bounds the number of search nodes; exceeding it raises
    :class:`EnumerationLimitError`.
    """

    def __init__(self, spec: EnumerationSpec, constraints: Iterable[Constraint] = (), budget: int = DEFAULT_CEILING):
        self.spec = spec
        self.domains = spec.domains()
        self.keys = list(self.domains)
        known = set(self.keys)
        # names outside the spec are empty, so they never need assigning
        self.constraints = [
            Constraint(c.deps & known, c.check, c.label) for c in constraints
        ]
        self.valuation = Valuation(spec.size, spec.k)
        self.setters = {key: _setter(self.valuation, key) for key in self.keys}
        self.budget = budget
        self.nodes = 0

    # -- planning ---------------------------------------------------------

    def _plan_order(self, keys: Sequence[Key], constraints: Sequence[Constraint], assigned: set,
                    relevant: set | None = None) -> tuple[list, list]:
        """Greedy variable order; returns (prefix, suffix).

        The prefix holds every relevant key, plus free keys that are pinned
        by a constraint reading only themselves and individuals.  The suffix
        holds the remaining free keys.
        """
        assigned = set(assigned)
        remaining = [k for k in keys if k not in assigned]
        pending = [c for c in constraints if not c.deps <= assigned]
        relevant = set(remaining) if relevant is None else set(relevant)
        prefix, suffix = [], []
        in_prefix = True
        while remaining:
            if in_prefix and not any(k in relevant for k in remaining):
                in_prefix = False
            candidates = []
            for key in remaining:
                completed = involved = 0
                pinned = False
                for c in pending:
                    if key in c.deps:
                        involved += 1
                        if c.deps <= assigned | {key}:
                            completed += 1
                            if all(d == key or d[0] == "i" for d in c.deps):
                                pinned = True
                if in_prefix and key not in relevant and not pinned:
                    continue
                first = 0 if key[0] == "i" else 1
                candidates.append(((first, -completed, -involved, len(self.domains[key]), key), key))
            _, best = min(candidates)
            (prefix if in_prefix else suffix).append(best)
            assigned.add(best)
            remaining.remove(best)
            pending = [c for c in pending if not c.deps <= assigned]
        return prefix, suffix

    def _checks(self, order: Sequence[Key], constraints: Sequence[Constraint], assigned: set) -> _Plan:
        position = {key: i for i, key in enumerate(order)}
        checks = [[] for _ in order]
        initial = []
        for c in constraints:
            levels = [position[d] for d in c.deps if d in position]
            if any(d not in position and d not in assigned for d in c.deps):
                raise ValueError(f"constraint reads unplanned symbols: {c.deps}")
            if levels:
                checks[max(levels)].append(c.check)
            else:
                initial.append(c.check)
        return _Plan(list(order), checks, initial)

    # -- traversal --------------------------------------------------------

    def _walk(self, plan: _Plan, level: int = 0) -> Iterator[None]:
        v = self.valuation
        if level == 0 and not all(check(v) for check in plan.initial):
            return
        if level == len(plan.order):
            yield None
            return
        key = plan.order[level]
        put = self.setters[key]
        checks = plan.checks[level]
        for value in self.domains[key]:
            self.nodes += 1
            if self.nodes > self.budget:
                raise EnumerationLimitError(self.nodes, self.budget, "search nodes")
            put(value)
            if all(check(v) for check in checks):
                yield from self._walk(plan, level + 1)

    def _exists(self, plan: _Plan) -> bool:
        for _ in self._walk(plan):
            return True
        return False

    # -- public API ---------------------------------------------------------

    def interpretations(self) -> Iterator[Interpretation]:
        """Every interpretation satisfying the constraints, in a fixed order."""
        order, _ = self._plan_order(self.keys, self.constraints, set())
        plan = self._checks(order, self.constraints, set())
        for _ in self._walk(plan):
            yield self.valuation.snapshot()

    def profile_table(
        self,
        components: Sequence[ProfileComponent],
        group_keys: Sequence[Key],
        prune: Sequence[Constraint] = (),
        canonical: bool = False,
    ) -> dict[tuple, dict[int, ProfileEntry]]:
        """Achievable profiles per group, with witnesses.

        The result maps each group (the values of ``group_keys``) to profile
        entries.  Every profile that is subset-minimal within its group is
        present; non-minimal profiles may or may not be.  ``prune`` holds
        extra constraints restricting the models.  With ``canonical`` only
        individual maps in canonical form are explored (see
        :func:`canonical_map_constraints`); callers must only ask questions
        that are invariant under renaming domain elements.

        The search first assigns a *separator*: the group keys, the
        individuals, and every concept name that some constraint reads
        together with nothing but those (an ABox assertion, say).  The remaining symbols split
        into blocks that share no constraint or profile component; each
        block is solved on its own and only its minimal profiles are
        combined with the other blocks.
        """
        known = set(self.keys)
        extra = list(prune)
        if canonical:
            extra += canonical_map_constraints(self.spec)
        base = [Constraint(c.deps & known, c.check, c.label) for c in list(self.constraints) + extra]
        group_keys = [g for g in group_keys if g in known]

        anchors = set(group_keys) | {k for k in known if k[0] == "i"}
        separator = set(anchors)
        for c in base:
            rest = c.deps - anchors
            if len(rest) == 1:
                (key,) = rest
                if key[0] == "c":
                    separator.add(key)

        # union-find over the non-separator keys
        parent = {k: k for k in known - separator}

        def find(k):
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        def free(deps):
            return [d for d in deps if d not in separator]

        def link(deps):
            rest = free(deps)
            for d in rest[1:]:
                a, b = find(rest[0]), find(d)
                if a != b:
                    parent[max(a, b)] = min(a, b)

        for c in base:
            link(c.deps)
        for comp in components:
            link(comp.deps & known)

        roots = {find(k) for k in parent}
        blocks = {r: _Block(sorted(k for k in parent if find(k) == r)) for r in roots}
        sep_constraints = []
        for c in base:
            rest = free(c.deps)
            (blocks[find(rest[0])].constraints if rest else sep_constraints).append(c)
        sep_components = []
        for j, comp in enumerate(components):
            rest = free(comp.deps & known)
            (blocks[find(rest[0])].components if rest else sep_components).append((j, comp))
        # small blocks first: an empty block table rejects the separator values early
        ordered = sorted(blocks.items(), key=lambda item: (self._volume(item[1].keys), item[0]))
        blocks_list = [b for _, b in ordered]

        sep_order, _ = self._plan_order(sorted(separator), sep_constraints, set(), set(separator))
        sep_plan = self._checks(sep_order, sep_constraints, set())
        for block in blocks_list:
            self._prepare_block(block, separator)

        v = self.valuation
        n = self.spec.size
        table: dict[tuple, dict[int, ProfileEntry]] = {}
        for _ in self._walk(sep_plan):
            solved = []
            for block in blocks_list:
                bt = self._block_table(block, n)
                if not bt:
                    break
                solved.append([(p, bt[p]) for p in sorted(minimal_profiles(bt))])
            else:
                sep_assign = self._assignment(sep_order)
                profile0 = 0
                for j, comp in sep_components:
                    profile0 |= comp.fn(v) << (j * n)
                group = tuple(sep_assign[g] if g[0] == "i" else v.concepts.get(g[1], 0) for g in group_keys)
                entries = table.setdefault(group, {})
                for combo in itertools.product(*solved):
                    profile = profile0
                    for p, _ in combo:
                        profile |= p
                    if profile not in entries:
                        assign = dict(sep_assign)
                        for _, bassign in combo:
                            assign.update(bassign)
                        entries[profile] = ProfileEntry(self, assign)
        return {g: e for g, e in table.items() if e}

    def _prepare_block(self, block: _Block, separator: set):
        relevant = set()
        for _, comp in block.components:
            relevant |= comp.deps & set(block.keys)
        prefix, suffix = self._plan_order(block.keys, block.constraints, separator, relevant)
        in_prefix = separator | set(prefix)
        block.prefix_plan = self._checks(prefix, [c for c in block.constraints if c.deps <= in_prefix], separator)
        block.suffix_plan = self._checks(suffix, [c for c in block.constraints if not c.deps <= in_prefix], in_prefix)

    def _volume(self, keys: Sequence[Key]) -> int:
        volume = 1
        for key in keys:
            volume *= len(self.domains[key])
        return volume

    def _assignment(self, keys: Sequence[Key]) -> dict:
        v = self.valuation
        out = {}
        for key in keys:
            kind, name = key
            if kind == "c":
                out[key] = v.concepts[name]
            elif kind == "r":
                out[key] = v.roles[name]
            elif kind == "i":
                out[key] = v.individuals[name]
            else:
                out[key] = v.orders[name - 1]
        return out

    def _block_table(self, block: _Block, n: int) -> dict[int, dict]:
        """Block profiles reachable under the current separator values."""
        v = self.valuation
        table: dict[int, dict] = {}
        for _ in self._walk(block.prefix_plan):
            profile = 0
            for j, comp in block.components:
                profile |= comp.fn(v) << (j * n)
            if profile not in table and self._exists(block.suffix_plan):
                table[profile] = self._assignment(block.keys)
        return table

    def build(self, assignment: Mapping[Key, object]) -> Interpretation:
        concepts, roles, individuals = {}, {}, {}
        orders = [None] * self.spec.k
        for (kind, name), value in assignment.items():
            if kind == "c":
                concepts[name] = value
            elif kind == "r":
                roles[name] = value
            elif kind == "i":
                individuals[name] = value
            else:
                orders[name - 1] = value
        return Interpretation(self.spec.size, concepts, roles, orders, individuals)

    def find_model(self, extra: Sequence[Constraint] = ()) -> Interpretation | None:
        """Some model also meeting ``extra``, or ``None``."""
        for entries in self.profile_table((), (), extra).values():
            for entry in entries.values():
                return entry.witness
        return None

    def find_below(self, components: Sequence[ProfileComponent], target: int) -> Interpretation | None:
        """A model whose profile is a proper subset of ``target``, if any.

        Callers pin the group through the spec (fixed individual map and
        fixed extensions).
        """
        n = self.spec.size
        block = (1 << n) - 1
        prune = []
        for j, comp in enumerate(components):
            allowed = (target >> (j * n)) & block
            prune.append(
                Constraint(comp.deps, lambda v, fn=comp.fn, allowed=allowed: not fn(v) & ~allowed, "below")
            )
        table = self.profile_table(components, [], prune)
        for entries in table.values():
            for profile, entry in sorted(entries.items()):
                if profile != target:
                    return entry.witness
        return None

    def find_with_profile(
        self,
        components: Sequence[ProfileComponent],
        group_keys: Sequence[Key],
        group: tuple,
        profile: int,
        extra: Sequence[Constraint] = (),
    ) -> Interpretation | None:
        """A model in ``group`` with exactly ``profile`` that meets ``extra``."""
        n = self.spec.size
        block = (1 << n) - 1
        pins = []
        for key, value in zip(group_keys, group):
            kind, name = key
            if kind == "i":
                pins.append(Constraint(frozenset({key}), lambda v, a=name, x=value: v.individuals[a] == x, "pin"))
            else:
                pins.append(
                    Constraint(frozenset({key}), lambda v, a=name, m=value: v.concepts.get(a, 0) == m, "pin")
                )
        for j, comp in enumerate(components):
            want = (profile >> (j * n)) & block
            pins.append(Constraint(comp.deps, lambda v, fn=comp.fn, want=want: fn(v) == want, "profile"))
        return self.find_model(pins + list(extra))


def minimal_profiles(profiles: Iterable[int]) -> set[int]:
    """The subset-minimal members of a finite family of bitmasks."""
    minimal: list[int] = []
    for p in sorted(set(profiles), key=lambda m: (bin(m).count("1"), m)):
        if not any(m & ~p == 0 for m in minimal):
            minimal.append(p)
    return set(minimal)


# ---------------------------------------------------------------------------
# Convenience generators


def enumerate_interpretations(spec: EnumerationSpec, ceiling: int = DEFAULT_CEILING) -> Iterator[Interpretation]:
    """Every interpretation described by ``spec`` (no duplicates, fixed order)."""
    count = spec.raw_count()
    if count > ceiling:
        raise EnumerationLimitError(count, ceiling)
    return ModelSearch(spec, budget=max(ceiling, 1) * 4).interpretations()


def enumerate_models(
    kb: KnowledgeBase,
    size: int,
    individual_map: Mapping[str, int] | None = None,
    ceiling: int = DEFAULT_CEILING,
    spec: EnumerationSpec | None = None,
) -> Iterator[Interpretation]:
    """Every model of ``kb`` over ``0..size-1``.

    Classical axioms are checked as soon as their names are assigned, so
    candidate concept extensions are filtered before orders are attached.
    """
    if spec is None:
        spec = EnumerationSpec.for_kb(kb, size, individual_map=individual_map)
    return ModelSearch(spec, kb_constraints(kb), budget=ceiling).interpretations()
