import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alctmin.interpretation import (
    Interpretation,
    PreferenceOrder,
    atypical_mask,
    check_preference_order,
    elements_of,
    eval_concept,
    mask_of,
    min_elements,
    satisfies,
)
from alctmin.model_space import strict_partial_orders
from alctmin.syntax import And, Box, Exists, Name, Not, Typical, parse_concept, parse_kb
from strategies import classical_concepts, extended_concepts, interpretations


def test_penguin_witness_evaluation():
    # 1 <_1 0: the penguin is an atypical bird, the other bird is typical
    i = Interpretation.build(
        2,
        {"Bird": {0, 1}, "Penguin": {0}, "Fly": {1}},
        orders=[[(1, 0)], []],
        individuals={"e": 0},
    )
    assert eval_concept(Typical(1, Name("Bird")), i) == {1}
    assert eval_concept(Typical(1, Name("Penguin")), i) == {0}
    assert eval_concept(Typical(2, Name("Bird")), i) == {0, 1}
    kb = parse_kb("tbox:\n  T1(Bird) <= Fly\n  T1(Penguin) <= !Fly\n  Penguin <= Bird\nabox:\n  Penguin(e)\n")
    assert satisfies(i, kb)


def test_check_preference_order_diagnostics():
    assert check_preference_order([(0, 1), (1, 2), (0, 2)], 3).ok
    d = check_preference_order([(0, 1), (1, 0)], 2)
    assert not d.ok and any("cycle" in v for v in d.violations)
    d = check_preference_order([(0, 1), (1, 2)], 3)
    assert not d.ok and any("transitive" in v for v in d.violations)
    d = check_preference_order([(0, 0)], 1)
    assert not d.ok and any("reflexive" in v for v in d.violations)
    d = check_preference_order([(0, 5)], 2)
    assert not d.ok


def test_min_elements():
    order = PreferenceOrder([(0, 1), (0, 2)])
    assert min_elements({0, 1, 2}, order) == {0}
    assert min_elements({1, 2}, order) == {1, 2}


def test_interpretation_validation():
    with pytest.raises(ValueError):
        Interpretation(0)
    with pytest.raises(ValueError):
        Interpretation(2, {"A": 0b100})
    with pytest.raises(ValueError):
        Interpretation(2, individuals={"a": 2})


def test_equality_ignores_empty_extensions():
    assert Interpretation(2, {"A": 0}) == Interpretation(2)
    assert hash(Interpretation(2, {"A": 0})) == hash(Interpretation(2))


def test_missing_individual_is_reported():
    kb = parse_kb("abox:\n  A(a)\n")
    with pytest.raises(ValueError):
        satisfies(Interpretation(1), kb)


@settings(max_examples=200, deadline=None)
@given(interpretations(), st.integers(1, 2), st.sampled_from(["A", "B", "Bird"]))
def test_typicality_is_a_and_box_not_a(i, index, a):
    t = eval_concept(Typical(index, Name(a)), i)
    assert t == eval_concept(And(Name(a), Box(index, Not(Name(a)))), i)
    assert t == min_elements(i.extension(a), i.order(index))


@settings(max_examples=200, deadline=None)
@given(interpretations(), st.integers(1, 2), st.sampled_from(["A", "B"]))
def test_atypical_mask_is_not_box_not(i, index, a):
    expected = eval_concept(Not(Box(index, Not(Name(a)))), i)
    assert elements_of(atypical_mask(i.concepts[a], i.orders[index - 1])) == expected


def _reference_eval(c, i):
    """Set-based evaluation written directly from the semantics."""
    dom = set(range(i.size))
    if isinstance(c, Name):
        return set(i.extension(c.name))
    if isinstance(c, Not):
        return dom - _reference_eval(c.arg, i)
    if isinstance(c, And):
        return _reference_eval(c.left, i) & _reference_eval(c.right, i)
    if isinstance(c, Exists):
        inner = _reference_eval(c.arg, i)
        pairs = i.role_pairs(c.role)
        return {x for x, y in pairs if y in inner}
    if isinstance(c, Typical):
        return set(min_elements(_reference_eval(c.arg, i), i.order(c.index)))
    raise TypeError(c)


@settings(max_examples=200, deadline=None)
@given(interpretations(), extended_concepts())
def test_evaluation_matches_reference(i, c):
    assert eval_concept(c, i) == _reference_eval(c, i)


@settings(max_examples=100, deadline=None)
@given(interpretations(), classical_concepts())
def test_double_negation_and_de_morgan(i, c):
    assert eval_concept(Not(Not(c)), i) == eval_concept(c, i)
    d = parse_concept("A | B")
    assert eval_concept(d, i) == i.extension("A") | i.extension("B")


def test_all_strict_partial_orders_are_smooth_up_to_five():
    for n in range(1, 6):
        for pred in strict_partial_orders(n):
            d = check_preference_order(PreferenceOrder.from_predecessors(pred), n)
            assert d.ok and d.smooth


def test_mask_round_trip():
    assert elements_of(mask_of({0, 3, 5})) == {0, 3, 5}
