import pytest

from alctmin.interpretation import PreferenceOrder, satisfies
from alctmin.model_space import (
    EnumerationLimitError,
    EnumerationSpec,
    ModelSearch,
    ProfileComponent,
    enumerate_interpretations,
    enumerate_models,
    kb_constraints,
    minimal_profiles,
    strict_partial_orders,
)
from alctmin.reasoner import _profile_mask, profile_components
from alctmin.syntax import parse_kb
from corpus import DATA, corpus_kbs
from oracle import brute_strict_partial_orders, typ_spec


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 19), (4, 219), (5, 4231)])
def test_strict_partial_order_counts(n, count):
    orders = strict_partial_orders(n)
    assert len(orders) == count
    assert len(set(orders)) == count


@pytest.mark.parametrize("n", [1, 2, 3])
def test_strict_partial_orders_match_filtered_relations(n):
    generated = {PreferenceOrder.from_predecessors(p).pairs for p in strict_partial_orders(n)}
    assert generated == set(brute_strict_partial_orders(n))


def test_enumerate_interpretations_is_exhaustive_and_duplicate_free():
    spec = EnumerationSpec(("A", "B"), ("r",), 1, 2, ("a",))
    interps = list(enumerate_interpretations(spec))
    assert len(interps) == spec.raw_count() == 4 * 4 * 16 * 3 * 2
    assert len(set(interps)) == len(interps)


def test_ceiling_raises():
    spec = EnumerationSpec(("A", "B", "C"), ("r",), 2, 3)
    with pytest.raises(EnumerationLimitError) as err:
        list(enumerate_interpretations(spec, ceiling=1000))
    assert err.value.count == spec.raw_count()


def test_search_budget_raises():
    kb = parse_kb((DATA / "penguin.kb").read_text())
    with pytest.raises(EnumerationLimitError):
        list(enumerate_models(kb, 3, ceiling=50))


@pytest.mark.parametrize("name", ["penguin1op", "penguin", "friends", "employee", "nixon"])
@pytest.mark.parametrize("n", [1, 2])
def test_enumerate_models_matches_filtered_enumeration(name, n):
    kb = corpus_kbs()[name]
    spec = typ_spec(kb, n)
    expected = {i for i in enumerate_interpretations(spec) if satisfies(i, kb)}
    got = list(enumerate_models(kb, n, spec=spec))
    assert len(got) == len(set(got))
    assert set(got) == expected


def test_fixed_concepts_and_individual_map_are_respected():
    kb = parse_kb("tbox:\n  A <= B\nabox:\n  A(a)\n")
    spec = EnumerationSpec(("A", "B"), (), 0, 2, ("a",), fixed_concepts={"B": frozenset({1})}, individual_map={"a": 1})
    models = list(enumerate_models(kb, 2, spec=spec))
    assert models
    assert all(m.extension("B") == {1} and m.individuals == {"a": 1} for m in models)


def test_order_like_roles():
    spec = EnumerationSpec((), ("r",), 0, 3, order_like_roles=frozenset({"r"}))
    assert spec.raw_count() == 19
    for i in enumerate_interpretations(spec):
        assert set(i.role_pairs("r")) == {(x, y) for y, x in PreferenceOrder.from_predecessors(i.roles["r"]).pairs}


def test_minimal_profiles():
    assert minimal_profiles([0b11, 0b01, 0b10, 0b111]) == {0b01, 0b10}
    assert minimal_profiles([0]) == {0}


@pytest.mark.parametrize("name", ["penguin1op", "penguin", "nixon", "phd"])
def test_profile_table_contains_every_minimal_profile(name):
    kb = corpus_kbs()[name]
    comps = profile_components(kb)
    for n in (1, 2):
        spec = typ_spec(kb, n)
        models = [i for i in enumerate_interpretations(spec) if satisfies(i, kb)]
        groups = {}
        for m in models:
            g = tuple(m.individuals[a] for a in spec.individuals)
            groups.setdefault(g, set()).add(_profile_mask(m, comps, n))
        search = ModelSearch(spec, kb_constraints(kb))
        table = search.profile_table(comps, [("i", a) for a in spec.individuals])
        assert set(table) == set(groups)
        for g, profiles in groups.items():
            assert minimal_profiles(table[g]) == minimal_profiles(profiles)
            for p, entry in table[g].items():
                assert satisfies(entry.witness, kb)
                assert _profile_mask(entry.witness, comps, n) == p


def test_find_below():
    kb = parse_kb("tbox:\n  T1(A) <= B\nabox:\n  A(a)\n")
    spec = EnumerationSpec(("A", "B"), (), 1, 2, ("a",))
    comp = ProfileComponent(frozenset({("c", "A")}), lambda v: v.concepts.get("A", 0), "A")
    search = ModelSearch(spec, kb_constraints(kb))
    assert search.find_below([comp], 0b01) is None
    below = search.find_below([comp], 0b11)
    assert below is not None and below.concepts["A"] in (0b01, 0b10)
