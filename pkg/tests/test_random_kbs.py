"""Random small knowledge bases checked against brute force and the translation."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from alctmin.bridge import crosscheck
from alctmin.reasoner import Query, is_minimal_model, minimal_models, query
from alctmin.syntax import GCI, And, ConceptAssertion, KnowledgeBase, Name, Not, RoleAssertion, Typical
from oracle import brute_minimal_models, brute_models, brute_verdict
from strategies import classical_concepts

NAMES = ("A", "B", "C")


@st.composite
def small_kbs(draw, roles=False):
    k = draw(st.integers(1, 2))
    role_names = ("r",) if roles else ()
    concepts = classical_concepts(NAMES, role_names or ("r",), max_leaves=3)
    if not roles:
        concepts = st.recursive(
            st.sampled_from(NAMES).map(Name),
            lambda ch: st.one_of(ch.map(Not), st.tuples(ch, ch).map(lambda p: And(*p))),
            max_leaves=3,
        )
    typical_lhs = st.tuples(st.integers(1, k), st.sampled_from(NAMES)).map(lambda p: Typical(p[0], Name(p[1])))
    gcis = st.lists(st.tuples(st.one_of(typical_lhs, concepts), concepts).map(lambda p: GCI(*p)), min_size=1, max_size=3)
    assertions = st.lists(st.tuples(concepts, st.sampled_from(("a", "b"))).map(lambda p: ConceptAssertion(*p)), max_size=2)
    abox = draw(assertions)
    if roles and draw(st.booleans()):
        abox.append(RoleAssertion("r", "a", "b"))
    minimize = [draw(st.one_of(st.none(), st.frozensets(st.sampled_from(NAMES), max_size=2))) for _ in range(k)]
    return KnowledgeBase(tuple(draw(gcis)), tuple(abox), k, tuple(minimize))


def _queries(kb):
    qs = [Query.consistency()]
    qs += [Query.satisfiable(Typical(i, Name(a))) for i in range(1, kb.k + 1) for a in NAMES]
    qs += [Query.subsumes(Typical(1, Name("A")), Name("B"))]
    qs += [Query.instance(Name(c), a) for a in kb.individuals() for c in NAMES]
    return qs


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_kbs())
def test_queries_match_brute_force(kb):
    # one scan over all names the queries mention; names outside the KB vary freely
    every_name = Query.satisfiable(And(And(Name("A"), Name("B")), Name("C")))
    per_size = [brute_minimal_models(kb, n, every_name) for n in (1, 2)]
    for q in _queries(kb):
        assert query(kb, q, 2).verdict == brute_verdict(per_size, q), q


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_kbs())
def test_minimal_models_match_brute_force(kb):
    for n in (1, 2):
        expected = set(brute_minimal_models(kb, n))
        assert set(minimal_models(kb, n)) == expected
        for m in brute_models(kb, n)[:30]:
            assert is_minimal_model(m, kb) == (m in expected)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_kbs(roles=True))
def test_translation_agrees_on_random_kbs(kb):
    report = crosscheck(kb, _queries(kb), 2)
    assert report.all_agree, report.summary()
