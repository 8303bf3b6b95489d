import pytest

from alctmin.circumscription import (
    CircKB,
    CircPattern,
    circ_query,
    circ_spec,
    is_circ_model,
    parse_circ_kb,
    prefers_cp,
    render_circ_kb,
)
from alctmin.interpretation import Interpretation, satisfies
from alctmin.model_space import enumerate_interpretations
from alctmin.reasoner import Query, Verdict
from alctmin.syntax import ParseError, parse_concept, parse_gcis
from corpus import DATA
from oracle import brute_circ_minimal, brute_verdict

EXAMPLE2 = parse_circ_kb((DATA / "example2.circ").read_text())

CIRC_CASES = {
    "example2": EXAMPLE2,
    "example2-tbox": CircKB(EXAMPLE2.tbox, (), EXAMPLE2.pattern),
    "fixed": parse_circ_kb("minimize: Ab\nfix: Bird\ntbox:\n  Bird <= Fly | Ab\nabox:\n  Bird(a)\n"),
    "choice": parse_circ_kb("minimize: Ab1, Ab2\ntbox:\n  top <= Ab1 | Ab2\n"),
    "role": parse_circ_kb("minimize: Ab\ntbox:\n  Person <= (exists hasParent. Person) | Ab\nabox:\n  Person(p)\n"),
}


def test_pattern_rejects_overlap():
    with pytest.raises(ValueError):
        CircPattern({"A"}, {"A"})
    with pytest.raises(ValueError):
        CircPattern({"A"}, (), {"A"})


def test_circkb_validation():
    with pytest.raises(ValueError):
        CircKB(tuple(parse_gcis("T1(A) <= B", 1)), (), CircPattern({"B"}))
    with pytest.raises(ValueError):
        CircKB(tuple(parse_gcis("A <= exists r. B")), (), CircPattern({"r"}))
    with pytest.raises(ValueError):
        CircKB(tuple(parse_gcis("A <= B")), (), CircPattern({"A"}, (), frozenset()))


def test_parse_rejects_typicality():
    with pytest.raises(ParseError):
        parse_circ_kb("minimize: A\ntbox:\n  T1(A) <= B\n")


@pytest.mark.parametrize("name", sorted(CIRC_CASES))
def test_render_parse_round_trip(name):
    assert parse_circ_kb(render_circ_kb(CIRC_CASES[name])) == CIRC_CASES[name]


def test_prefers_cp():
    p = CircPattern({"A"}, {"F"})
    small = Interpretation(2, {"A": 0b01, "F": 0b10})
    big = Interpretation(2, {"A": 0b11, "F": 0b10})
    assert prefers_cp(small, big, p) and not prefers_cp(big, small, p) and not prefers_cp(small, small, p)
    assert not prefers_cp(small, Interpretation(2, {"A": 0b11, "F": 0b11}), p)
    assert not prefers_cp(small, Interpretation(2, {"A": 0b11, "F": 0b10}, individuals={"a": 0}), p)


@pytest.mark.parametrize("name", sorted(CIRC_CASES))
@pytest.mark.parametrize("n", [1, 2])
def test_is_circ_model_matches_brute_force(name, n):
    circkb = CIRC_CASES[name]
    minimal = set(brute_circ_minimal(circkb, n))
    kb = circkb.as_kb()
    for i in enumerate_interpretations(circ_spec(circkb, n)):
        if satisfies(i, kb):
            assert is_circ_model(i, circkb) == (i in minimal)


@pytest.mark.parametrize("name", sorted(CIRC_CASES))
def test_circ_query_matches_brute_force(name):
    circkb = CIRC_CASES[name]
    names = sorted(circkb.signature().concepts)
    queries = [Query.consistency()] + [Query.satisfiable(parse_concept(c)) for c in names]
    queries += [Query.satisfiable(parse_concept(f"{a} & !{b}")) for a in names for b in names if a != b]
    for a in circkb.individuals():
        queries += [Query.instance(parse_concept(c), a) for c in names]
    # the queries only use names of the knowledge base, so one scan per size serves all of them
    minimal = [brute_circ_minimal(circkb, n) for n in (1, 2)]
    for q in queries:
        result = circ_query(circkb, q, 2)
        assert result.verdict == brute_verdict(minimal, q), q


def test_example2_no_priorities():
    winged = circ_query(EXAMPLE2, Query.instance(parse_concept("Winged"), "d"), 2)
    assert winged.verdict == Verdict.ENTAILED_UP_TO_BOUND
    not_fly = circ_query(EXAMPLE2, Query.instance(parse_concept("!Fly"), "d"), 2)
    assert not_fly.verdict == Verdict.NOT_ENTAILED
    w = not_fly.witness
    assert w.individuals["d"] in w.extension("Fly")
    assert is_circ_model(w, EXAMPLE2)


def test_fixed_predicate_is_not_minimized_away():
    circkb = CIRC_CASES["fixed"]
    # a non-bird exists in some minimal model: Bird is fixed, so it can be anything
    assert circ_query(circkb, Query.satisfiable(parse_concept("!Bird")), 2).verdict == Verdict.SATISFIABLE
    assert circ_query(circkb, Query.instance(parse_concept("Fly"), "a"), 2).verdict == Verdict.ENTAILED_UP_TO_BOUND


def test_circ_query_rejects_typicality():
    with pytest.raises(ValueError):
        circ_query(EXAMPLE2, Query.satisfiable(parse_concept("T1(Bird)")), 1)
