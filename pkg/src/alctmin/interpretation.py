"""Finite ALC+T+ interpretations and exact concept evaluation.

Domains are ``0..n-1``.  Internally every set of elements is an ``int``
bitmask (bit ``x`` set iff ``x`` is in the set), a role is a tuple of
successor masks indexed by element, and a preference order ``<_i`` is a
tuple of *predecessor* masks: bit ``y`` of ``orders[i-1][x]`` is set iff
``y <_i x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .syntax import (
    GCI,
    And,
    Box,
    Concept,
    ConceptAssertion,
    Exists,
    KnowledgeBase,
    Name,
    Not,
    RoleAssertion,
    Typical,
    subconcepts,
)


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def elements_of(mask: int) -> frozenset[int]:
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return frozenset(out)


def relation_masks(pairs: Iterable[tuple[int, int]], n: int) -> tuple[int, ...]:
    """Successor masks of a binary relation given as ``(x, y)`` pairs."""
    succ = [0] * n
    for x, y in pairs:
        if not (0 <= x < n and 0 <= y < n):
            raise ValueError(f"pair {(x, y)} outside domain of size {n}")
        succ[x] |= 1 << y
    return tuple(succ)


def relation_pairs(masks: Sequence[int]) -> list[tuple[int, int]]:
    return [(x, y) for x, m in enumerate(masks) for y in sorted(elements_of(m))]


def inverse_masks(masks: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(masks)
    for x, m in enumerate(masks):
        for y in elements_of(m):
            inv[y] |= 1 << x
    return tuple(inv)


# ---------------------------------------------------------------------------
# Preference orders


@dataclass(frozen=True)
class PreferenceOrder:
    """A preference relation as a set of ``(smaller, larger)`` pairs."""

    pairs: frozenset[tuple[int, int]] = frozenset()

    def __init__(self, pairs: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "pairs", frozenset((int(a), int(b)) for a, b in pairs))

    @classmethod
    def from_predecessors(cls, pred: Sequence[int]) -> "PreferenceOrder":
        return cls((y, x) for x, m in enumerate(pred) for y in elements_of(m))

    def predecessors(self, n: int) -> tuple[int, ...]:
        """``pred[x]`` = mask of all ``y`` with ``y < x``."""
        return relation_masks(((x, y) for y, x in self.pairs), n)

    def below(self, x: int) -> frozenset[int]:
        return frozenset(y for y, z in self.pairs if z == x)


def min_elements(s: Iterable[int], order: PreferenceOrder) -> frozenset[int]:
    """``Min_<(S)``: members of ``S`` with no ``<``-smaller member of ``S``."""
    s = frozenset(s)
    return frozenset(x for x in s if not any(y in s for y in order.below(x)))


def _min_mask(s: int, pred: Sequence[int]) -> int:
    out = 0
    rest = s
    while rest:
        low = rest & -rest
        x = low.bit_length() - 1
        if not pred[x] & s:
            out |= low
        rest ^= low
    return out


@dataclass(frozen=True)
class OrderDiagnostic:
    ok: bool
    violations: tuple[str, ...] = ()
    smooth: bool | None = None


def _is_smooth(pred: Sequence[int], n: int) -> bool:
    for s in range(1 << n):
        mins = _min_mask(s, pred)
        rest = s & ~mins
        x = 0
        while rest:
            if rest & 1 and not pred[x] & mins:
                return False
            rest >>= 1
            x += 1
    return True


def check_preference_order(
    order: PreferenceOrder | Iterable[tuple[int, int]], domain: int | Iterable[int]
) -> OrderDiagnostic:
    """Check irreflexivity and transitivity and, redundantly, smoothness.

    ``domain`` is a size ``n`` (meaning ``0..n-1``) or an explicit set.  The
    smoothness check is exhaustive over subsets and only run for at most 12
    elements.
    """
    pairs = order.pairs if isinstance(order, PreferenceOrder) else frozenset(order)
    elems = sorted(range(domain) if isinstance(domain, int) else set(domain))
    dom = set(elems)
    violations = []
    for x, y in sorted(pairs):
        if x not in dom or y not in dom:
            violations.append(f"pair {(x, y)} outside the domain")
        elif x == y:
            violations.append(f"reflexive pair {(x, y)}")
    reported = set()
    for x, y in sorted(pairs):
        for y2, z in sorted(pairs):
            if y2 != y or (x, z) in pairs:
                continue
            if x == z:
                cycle = frozenset((x, y))
                if cycle not in reported:
                    reported.add(cycle)
                    violations.append(f"cycle {x} < {y} < {x}")
            else:
                violations.append(f"not transitive: {x} < {y} < {z} but not {x} < {z}")
    ok = not violations
    smooth = None
    if ok and len(elems) <= 12:
        index = {e: i for i, e in enumerate(elems)}
        pred = relation_masks(((index[b], index[a]) for a, b in pairs), len(elems))
        smooth = _is_smooth(pred, len(elems))
    return OrderDiagnostic(ok, tuple(violations), smooth)


# ---------------------------------------------------------------------------
# Interpretations


class Interpretation:
    """A finite interpretation over ``0..size-1`` with ``k`` preference orders.

    Concept and role names that are not listed are empty.  Instances are
    treated as immutable; equality ignores names listed with an empty
    extension.
    """

    __slots__ = ("size", "full", "concepts", "roles", "orders", "individuals", "_key")

    def __init__(
        self,
        size: int,
        concepts: Mapping[str, int] | None = None,
        roles: Mapping[str, Sequence[int]] | None = None,
        orders: Sequence[Sequence[int]] = (),
        individuals: Mapping[str, int] | None = None,
    ):
        if size < 1:
            raise ValueError("domains must be non-empty")
        self.size = size
        self.full = (1 << size) - 1
        self.concepts = dict(concepts or {})
        self.roles = {r: tuple(m) for r, m in (roles or {}).items()}
        self.orders = tuple(tuple(p) for p in orders)
        self.individuals = dict(individuals or {})
        for name, m in self.concepts.items():
            if m & ~self.full:
                raise ValueError(f"extension of {name} outside the domain")
        for name, succ in self.roles.items():
            if len(succ) != size or any(m & ~self.full for m in succ):
                raise ValueError(f"role {name} does not fit a domain of size {size}")
        for i, pred in enumerate(self.orders, start=1):
            if len(pred) != size or any(m & ~self.full for m in pred):
                raise ValueError(f"order {i} does not fit a domain of size {size}")
        for a, x in self.individuals.items():
            if not 0 <= x < size:
                raise ValueError(f"individual {a} mapped outside the domain")
        self._key = None

    @classmethod
    def build(
        cls,
        size: int,
        concepts: Mapping[str, Iterable[int]] | None = None,
        roles: Mapping[str, Iterable[tuple[int, int]]] | None = None,
        orders: Sequence[Iterable[tuple[int, int]] | PreferenceOrder] = (),
        individuals: Mapping[str, int] | None = None,
    ) -> "Interpretation":
        """Build from element sets, ``(x, y)`` role pairs and ``(smaller, larger)`` order pairs."""
        return cls(
            size,
            {c: mask_of(ext) for c, ext in (concepts or {}).items()},
            {r: relation_masks(p, size) for r, p in (roles or {}).items()},
            [
                (o if isinstance(o, PreferenceOrder) else PreferenceOrder(o)).predecessors(size)
                for o in orders
            ],
            individuals,
        )

    @property
    def k(self) -> int:
        return len(self.orders)

    def extension(self, name: str) -> frozenset[int]:
        return elements_of(self.concepts.get(name, 0))

    def role_pairs(self, name: str) -> list[tuple[int, int]]:
        succ = self.roles.get(name)
        return relation_pairs(succ) if succ else []

    def order(self, i: int) -> PreferenceOrder:
        return PreferenceOrder.from_predecessors(self.orders[i - 1])

    def key(self) -> tuple:
        if self._key is None:
            self._key = (
                self.size,
                tuple(sorted((c, m) for c, m in self.concepts.items() if m)),
                tuple(sorted((r, s) for r, s in self.roles.items() if any(s))),
                self.orders,
                tuple(sorted(self.individuals.items())),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, Interpretation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        cs = {c: sorted(elements_of(m)) for c, m in sorted(self.concepts.items()) if m}
        rs = {r: self.role_pairs(r) for r in sorted(self.roles) if any(self.roles[r])}
        os_ = [sorted(self.order(i).pairs) for i in range(1, self.k + 1)]
        return (
            f"Interpretation(size={self.size}, concepts={cs}, roles={rs}, "
            f"orders={os_}, individuals={self.individuals})"
        )

    def replace(self, **changes) -> "Interpretation":
        fields = dict(
            size=self.size,
            concepts=self.concepts,
            roles=self.roles,
            orders=self.orders,
            individuals=self.individuals,
        )
        fields.update(changes)
        return Interpretation(**fields)


# ---------------------------------------------------------------------------
# Evaluation
#
# Concepts compile to closures over any object exposing ``full``,
# ``concepts``, ``roles`` and ``orders`` like Interpretation does; the model
# search reuses them on its own mutable valuation.

Evaluator = Callable[[object], int]


@lru_cache(maxsize=None)
def compile_concept(c: Concept) -> Evaluator:
    if isinstance(c, Name):
        name = c.name
        return lambda v: v.concepts.get(name, 0)
    if isinstance(c, Not):
        arg = compile_concept(c.arg)
        return lambda v: v.full & ~arg(v)
    if isinstance(c, And):
        left, right = compile_concept(c.left), compile_concept(c.right)
        return lambda v: left(v) & right(v)
    if isinstance(c, Exists):
        role, arg = c.role, compile_concept(c.arg)

        def exists(v):
            succ = v.roles.get(role)
            if succ is None:
                return 0
            target = arg(v)
            if not target:
                return 0
            out = 0
            for x, s in enumerate(succ):
                if s & target:
                    out |= 1 << x
            return out

        return exists
    if isinstance(c, Typical):
        slot, arg = c.index - 1, compile_concept(c.arg)

        def typical(v):
            return _min_mask(arg(v), v.orders[slot])

        return typical
    if isinstance(c, Box):
        slot, arg = c.index - 1, compile_concept(c.arg)

        def box(v):
            outside = v.full & ~arg(v)
            out = 0
            for x, p in enumerate(v.orders[slot]):
                if not p & outside:
                    out |= 1 << x
            return out

        return box
    raise TypeError(f"not a concept: {c!r}")


def atypical_mask(concept_mask: int, pred: Sequence[int]) -> int:
    """Extension of ``!box_i !A``: elements with a ``<_i``-smaller ``A``."""
    out = 0
    for x, p in enumerate(pred):
        if p & concept_mask:
            out |= 1 << x
    return out


def _max_index(c: Concept) -> int:
    return max([s.index for s in subconcepts(c) if isinstance(s, (Typical, Box))] + [0])


def eval_mask(c: Concept, interp: Interpretation) -> int:
    if _max_index(c) > interp.k:
        raise ValueError(f"concept uses operator {_max_index(c)} but the interpretation has {interp.k}")
    return compile_concept(c)(interp)


def eval_concept(c: Concept, interp: Interpretation) -> frozenset[int]:
    """Extension of the (extended) concept ``c`` under ``interp``."""
    return elements_of(eval_mask(c, interp))


def gci_check(ax: GCI) -> Callable[[object], bool]:
    lhs, rhs = compile_concept(ax.lhs), compile_concept(ax.rhs)
    return lambda v: not (lhs(v) & ~rhs(v))


def satisfies(interp: Interpretation, kb: KnowledgeBase) -> bool:
    """``interp |= kb``: every GCI and assertion holds."""
    for ax in kb.tbox:
        if eval_mask(ax.lhs, interp) & ~eval_mask(ax.rhs, interp):
            return False
    for a in kb.abox:
        if isinstance(a, ConceptAssertion):
            x = _individual(interp, a.individual)
            if not eval_mask(a.concept, interp) >> x & 1:
                return False
        elif isinstance(a, RoleAssertion):
            x, y = _individual(interp, a.subject), _individual(interp, a.object)
            succ = interp.roles.get(a.role)
            if succ is None or not succ[x] >> y & 1:
                return False
    return True


def _individual(interp: Interpretation, name: str) -> int:
    try:
        return interp.individuals[name]
    except KeyError:
        raise ValueError(f"individual {name} is not interpreted") from None
