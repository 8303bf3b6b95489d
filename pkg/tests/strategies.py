"""Hypothesis strategies for concepts, knowledge bases and interpretations."""

from __future__ import annotations

from hypothesis import strategies as st

from alctmin.interpretation import Interpretation
from alctmin.model_space import strict_partial_orders
from alctmin.syntax import And, Exists, Name, Not, Typical

CONCEPT_NAMES = ("A", "B", "C", "Bird", "Fly")
ROLE_NAMES = ("r", "s")


def classical_concepts(names=CONCEPT_NAMES, roles=ROLE_NAMES, max_leaves=8):
    leaves = st.sampled_from(names).map(Name)

    def extend(children):
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda p: And(*p)),
            st.tuples(st.sampled_from(roles), children).map(lambda p: Exists(*p)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def extended_concepts(k=2, names=CONCEPT_NAMES, roles=ROLE_NAMES, max_leaves=8):
    """Concepts whose typicality atoms ``T_i(A)`` never sit under a role."""
    atoms = st.tuples(st.integers(1, k), st.sampled_from(names)).map(lambda p: Typical(p[0], Name(p[1])))
    leaves = st.one_of(st.sampled_from(names).map(Name), atoms)

    def extend(children):
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda p: And(*p)),
        )

    return st.one_of(st.recursive(leaves, extend, max_leaves=max_leaves), classical_concepts(names, roles, max_leaves))


@st.composite
def interpretations(draw, n_max=3, k=2, names=CONCEPT_NAMES, roles=ROLE_NAMES, individuals=()):
    n = draw(st.integers(1, n_max))
    full = (1 << n) - 1
    concepts = {c: draw(st.integers(0, full)) for c in names}
    role_map = {r: tuple(draw(st.integers(0, full)) for _ in range(n)) for r in roles}
    orders = [draw(st.sampled_from(strict_partial_orders(n))) for _ in range(k)]
    inds = {a: draw(st.integers(0, n - 1)) for a in individuals}
    return Interpretation(n, concepts, role_map, orders, inds)
