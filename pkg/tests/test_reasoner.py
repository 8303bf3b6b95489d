import pytest

from alctmin.interpretation import Interpretation, satisfies
from alctmin.model_space import EnumerationLimitError, enumerate_models
from alctmin.reasoner import (
    AtypicalityProfile,
    Query,
    Verdict,
    atypicality_profile,
    is_minimal_model,
    is_minimal_model_single,
    minimal_models,
    prefers_plus,
    prefers_single,
    query,
    reduce_instance_to_unsat,
    reduce_subsumption_to_unsat,
)
from alctmin.syntax import GCI, KnowledgeBase, Name, Not, Typical, parse_concept, parse_kb
from corpus import DATA, corpus_kbs, corpus_queries
from oracle import brute_minimal_models, brute_models, brute_verdict

PENGUIN1 = parse_kb((DATA / "penguin1op.kb").read_text())
PENGUIN2 = parse_kb((DATA / "penguin.kb").read_text())
SMALL = ["penguin1op", "penguin", "tweety", "nixon", "students", "phd", "swimmer", "plain", "inconsistent", "redbird"]


def test_atypicality_profile_of_witness():
    i = Interpretation.build(
        2, {"Bird": {0, 1}, "Penguin": {0}, "Fly": {1}, "Winged": {1}}, orders=[[(1, 0)]], individuals={"e": 0}
    )
    assert satisfies(i, PENGUIN1)
    assert atypicality_profile(i, PENGUIN1) == AtypicalityProfile((frozenset({(0, "Bird")}),))


def test_profile_order():
    a = AtypicalityProfile((frozenset({(0, "A")}), frozenset()))
    b = AtypicalityProfile((frozenset({(0, "A")}), frozenset({(1, "B")})))
    assert a < b and a <= b and not b < a and not a < a


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("n", [1, 2])
def test_minimal_models_match_brute_force(name, n):
    kb = corpus_kbs()[name]
    expected = set(brute_minimal_models(kb, n))
    assert set(minimal_models(kb, n)) == expected
    for m in brute_models(kb, n):
        assert is_minimal_model(m, kb) == (m in expected)


@pytest.mark.parametrize("name", ["penguin1op", "tweety", "students", "swimmer", "redbird"])
@pytest.mark.parametrize("n", [1, 2])
def test_single_operator_path_agrees(name, n):
    kb = corpus_kbs()[name]
    models = brute_models(kb, n)
    for a in models:
        assert is_minimal_model_single(a, kb) == is_minimal_model(a, kb)
        for b in models:
            assert prefers_single(a, b, kb) == prefers_plus(a, b, kb)


def test_single_path_rejects_two_operators():
    m = next(enumerate_models(PENGUIN2, 2))
    with pytest.raises(ValueError):
        prefers_single(m, m, PENGUIN2)


def test_is_minimal_model_rejects_non_models():
    with pytest.raises(ValueError):
        is_minimal_model(Interpretation(1, orders=[(0,)], individuals={"e": 0}), PENGUIN1)


@pytest.mark.parametrize("name", SMALL + ["friends", "employee"])
def test_query_verdicts_match_brute_force(name):
    kb = corpus_kbs()[name]
    queries = [Query.consistency()] + [Query.instance(c, a) for c, a in corpus_queries(name, kb.k)]
    queries += [Query.satisfiable(Typical(i, Name(a))) for i in range(1, kb.k + 1) for a in sorted(kb.minimization_set(i))]
    for q in queries:
        result = query(kb, q, 2)
        per_size = [brute_minimal_models(kb, n, q) for n in (1, 2)]
        assert result.verdict == brute_verdict(per_size, q), q
        if result.witness is not None:
            assert result.witness in set(per_size[result.domain_size - 1])


def test_subsumption_query():
    q = Query.subsumes(Typical(1, Name("Penguin")), Not(Name("Fly")))
    assert query(PENGUIN1, q, 3).verdict == Verdict.ENTAILED_UP_TO_BOUND
    q = Query.subsumes(Name("Bird"), Name("Fly"))
    result = query(PENGUIN1, q, 3)
    assert result.verdict == Verdict.NOT_ENTAILED and result.exact


def test_inheritance_blocking_single_operator():
    result = query(PENGUIN1, Query.instance(Name("Winged"), "e"), 3)
    assert result.verdict == Verdict.NOT_ENTAILED
    assert result.domain_size <= 3
    w = result.witness
    assert is_minimal_model(w, PENGUIN1) and w.individuals["e"] not in w.extension("Winged")
    assert query(PENGUIN1, Query.instance(Not(Name("Fly")), "e"), 3).verdict == Verdict.ENTAILED_UP_TO_BOUND


def test_inheritance_with_two_operators():
    assert query(PENGUIN2, Query.instance(Name("Winged"), "e"), 3).verdict == Verdict.ENTAILED_UP_TO_BOUND


def test_inconsistent_kb():
    kb = corpus_kbs()["inconsistent"]
    assert query(kb, Query.consistency(), 3).verdict == Verdict.INCONSISTENT_UP_TO_BOUND


def test_query_rejects_undeclared_operator():
    with pytest.raises(ValueError):
        query(PENGUIN1, Query.satisfiable(Typical(2, Name("Bird"))), 2)


def test_query_ceiling():
    with pytest.raises(EnumerationLimitError):
        query(PENGUIN2, Query.instance(Name("Winged"), "e"), 3, ceiling=20)


def test_empty_kb_has_empty_minimal_model():
    kb = KnowledgeBase((), (), 1)
    models = list(minimal_models(kb, 1))
    assert Interpretation(1, orders=[(0,)]) in models


def test_reduce_instance_shape():
    c = parse_concept("Winged")
    kb2, probe = reduce_instance_to_unsat(PENGUIN1, c, "e")
    assert kb2.k == 2
    assert kb2.minimization_set(2) == {"__A"}
    assert GCI(parse_concept("top"), Name("__A")) in kb2.tbox
    with pytest.raises(ValueError):
        reduce_instance_to_unsat(PENGUIN1, c, "nobody")


@pytest.mark.parametrize("name", ["penguin1op", "nixon", "tweety"])
def test_reduction_agrees_from_two_elements(name):
    kb = corpus_kbs()[name]
    for c, a in corpus_queries(name, kb.k):
        kb2, probe = reduce_instance_to_unsat(kb, c, a)
        for n in (2, 3):
            direct = query(kb, Query.instance(c, a), n, sizes=[n])
            reduced = query(kb2, Query.satisfiable(probe), n, sizes=[n])
            assert direct.verdict.positive == (not reduced.verdict.positive)


def test_reduced_kb_has_no_single_element_model():
    kb2, _ = reduce_instance_to_unsat(PENGUIN1, Name("Winged"), "e")
    assert query(kb2, Query.consistency(), 1).verdict == Verdict.INCONSISTENT_UP_TO_BOUND


def test_reduce_subsumption():
    c, d = Name("Bird"), Name("Fly")
    probe = reduce_subsumption_to_unsat(c, d)
    sub = query(PENGUIN1, Query.subsumes(c, d), 2)
    sat = query(PENGUIN1, Query.satisfiable(probe), 2)
    assert sub.verdict.positive == (not sat.verdict.positive)
