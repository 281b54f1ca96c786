from fractions import Fraction as F

import pytest

from tempoclass.corpus import NAMES, automaton
from tempoclass.ta import (ParseError, State, TAError, check_deterministic,
                           check_run, parse_automaton, relabel_deterministic,
                           serialize_automaton, step)


def test_parse_a6_shape():
    a = automaton("a6")
    assert len(a.locations) == 2
    assert len(a.clocks) == 2
    assert a.max_constant == 2
    assert [e.name for e in a.edges] == ["d1", "d2"]


def test_parse_vacuous_automaton():
    a = parse_automaton("""
automaton empty
alphabet a
location q initial accepting
""")
    assert a.edges == ()
    res = check_run(a, a.initial_state(), [])
    assert res.ok and res.accepted and res.word == ()


def test_parse_a8_shape():
    a = automaton("a8")
    assert a.alphabet == ("a", "b", "c")
    assert a.max_constant == 2


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_automaton("automaton x\nbogus line\n")
    with pytest.raises(TAError):
        parse_automaton("automaton x\nclocks x\nalphabet a\nlocation q initial\n"
                        "edge q -> q on a guard z < 1\n")
    with pytest.raises(TAError):
        parse_automaton("automaton x\nclocks x\nalphabet a\nlocation q initial\n"
                        "edge q -> q on w\n")
    with pytest.raises(ParseError):
        parse_automaton("automaton x\nclocks x\nalphabet a\nlocation q initial\n"
                        "edge q -> q on a guard x = 1, x = 2\n")


def test_equality_sugar_desugars():
    a = automaton("a5")
    guard = a.edges[0].guard
    rels = sorted((c.relation, c.bound) for c in guard.atoms)
    assert rels == [("<=", 3), (">=", 3)]


@pytest.mark.parametrize("name", NAMES)
def test_round_trip(name):
    a = automaton(name)
    b = parse_automaton(serialize_automaton(a))
    assert (a.clocks, a.alphabet, a.locations) == (b.clocks, b.alphabet, b.locations)
    assert a.edges == b.edges
    assert a.initial == b.initial and a.accepting == b.accepting


@pytest.mark.parametrize("name", NAMES)
def test_corpus_deterministic(name):
    assert check_deterministic(automaton(name)).deterministic


def test_overlapping_guards_witness():
    a = parse_automaton("""
automaton x
clocks x
alphabet a
location q initial
location p accepting
location r accepting
edge q -> p on a guard x < 1
edge q -> r on a guard x < 2
""")
    rep = check_deterministic(a)
    assert not rep.deterministic
    v = rep.violations[0]
    assert set(v.edges) == {"d1", "d2"}
    assert v.witness == {"x": F(1, 2)}


def test_disjoint_guards_are_fine():
    a = parse_automaton("""
automaton x
clocks x
alphabet a
location q initial
location p accepting
location r accepting
edge q -> p on a guard x < 1
edge q -> r on a guard x > 1
""")
    assert check_deterministic(a).deterministic


def test_step_examples():
    a = automaton("a6")
    d1, d2 = a.edges
    s0 = State("q", (F(0), F(0)))
    s1 = step(a, s0, d1, F(4, 5))
    assert s1 == State("p", (F(0), F(4, 5)), F(4, 5))
    # zero delay is allowed
    assert step(a, s0, d1, F(0)) == State("p", (F(0), F(0)), F(0))
    s2 = step(a, s1, d2, F(3, 2))
    assert s2 == State("q", (F(7, 10), F(0)), F(3, 2))
    # strict guard: y must exceed 1
    assert step(a, s1, d2, F(1)) is None


def test_check_run_accepts_label_following_word():
    a = automaton("a6")
    d1, d2 = a.edges
    res = check_run(a, a.initial_state(),
                    [(d1, F(4, 5)), (d2, F(3, 2)), (d1, F(17, 10))])
    assert res.ok and res.accepted
    assert res.word == (("a", F(4, 5)), ("b", F(3, 2)), ("a", F(17, 10)))


def test_check_run_reports_first_violation():
    a = automaton("a6")
    d1, d2 = a.edges
    res = check_run(a, a.initial_state(), [(d1, F(4, 5)), (d2, F(1))])
    assert not res.ok
    assert res.failed_step == 2


def test_empty_run_accepted_at_initial():
    a = automaton("a1")
    res = check_run(a, a.initial_state(), [])
    assert res.ok and res.accepted and res.word == ()


def test_relabel_identity_on_deterministic():
    a = automaton("a6")
    b, renaming = relabel_deterministic(a)
    assert b.edges == a.edges
    assert renaming == {"a": "a", "b": "b"}


def test_relabel_splits_conflicts():
    a = parse_automaton("""
automaton x
clocks x
alphabet a
location q initial
location p accepting
location r accepting
edge q -> p on a guard x < 1
edge q -> r on a guard x < 2
""")
    b, renaming = relabel_deterministic(a)
    assert check_deterministic(b).deterministic
    assert sorted(b.alphabet) == ["a1", "a2"]
    assert renaming == {"a1": "a", "a2": "a"}
    assert len(b.alphabet) <= len(a.edges)


def test_relabel_preserves_language_on_grid():
    from tempoclass.bandwidth import enumerate_words

    a = parse_automaton("""
automaton x
clocks x
alphabet a b
location q initial accepting
edge q -> q on a guard x < 2 reset x
edge q -> q on a guard x < 1
edge q -> q on b guard x < 1
""")
    b, renaming = relabel_deterministic(a)
    # compare up to the pseudo-metric kernel (event sets): relabeling makes
    # simultaneous same-letter repetitions distinguishable, mapping back merges
    # them again
    words_a = {tuple(sorted(set(w.events))) for w in enumerate_words(a, F(2), F(1, 2))}
    words_b = {tuple(sorted({(renaming[l], t) for l, t in w.events}))
               for w in enumerate_words(b, F(2), F(1, 2))}
    assert words_a == words_b


def test_replay_soundness(rng):
    """Runs built step-by-step always pass check_run."""
    for name in NAMES:
        a = automaton(name)
        for _ in range(40):
            s = a.initial_state()
            steps = []
            for _ in range(rng.randrange(1, 6)):
                t = s.date + F(rng.randrange(0, 9), 4)
                fired = None
                for e in a.edges_from(s.location):
                    nxt = step(a, s, e, t)
                    if nxt is not None:
                        fired = (e, t)
                        s = nxt
                        break
                if fired is None:
                    break
                steps.append(fired)
            res = check_run(a, a.initial_state(), steps)
            assert res.ok


def _count_runs(a, word):
    """Number of distinct runs of a word from the initial state."""
    states = [a.initial_state()]
    for letter, t in word.events:
        nxt = []
        for s in states:
            for e in a.edges_from(s.location):
                if e.label != letter:
                    continue
                out = step(a, s, e, t)
                if out is not None:
                    nxt.append(out)
        states = nxt
        if not states:
            return 0
    return len(states)


@pytest.mark.parametrize("name,duration", [
    ("a1", F(3, 2)), ("a2", F(11, 2)), ("a3", F(3, 2)), ("a4", F(6)),
    ("a5", F(6)), ("a6", F(6)), ("a7", F(3, 2)), ("a8", F(3)), ("a9", F(3)),
    ("a10", F(4))])
def test_deterministic_semantics_unique_runs(name, duration):
    from tempoclass.bandwidth import enumerate_words

    a = automaton(name)
    for w in enumerate_words(a, duration, F(1, 4)):
        assert _count_runs(a, w) == 1
