from fractions import Fraction as F

import pytest

from tempoclass.bandwidth import (CurveRow, EnumerationCapExceeded,
                                  bandwidth_curve, curve_csv, enumerate_words,
                                  estimate_capacity, fit_class)
from tempoclass.corpus import automaton
from tempoclass.ta import TAError, parse_automaton, step


def test_a5_integer_grid_enumeration():
    """Punctual schedule: a|b at 3, b at 5, then again shifted by the 5s cycle."""
    words = enumerate_words(automaton("a5"), F(10), F(1))
    assert len(words) == 13  # empty word plus 2 + 2 + 4 + 4 prefixes
    nonempty = [w for w in words if len(w)]
    assert len(nonempty) == 12
    dates = {tuple(t for _, t in w.events) for w in nonempty}
    assert dates == {(3,), (3, 5), (3, 5, 8), (3, 5, 8, 10)}


def test_duration_zero():
    words = enumerate_words(automaton("a1"), F(0), F(1, 2))
    keys = {tuple(sorted(set(w.events))) for w in words}
    assert keys == {(), (("a", 0),), (("b", 0),), (("a", 0), ("b", 0))}


def test_a6_small_slice_structure():
    a = automaton("a6")
    words = enumerate_words(a, F(2), F(1, 2))
    for w in words:
        letters = w.letters()
        assert letters in ("", "a", "ab")
        assert _replays(a, w)
    assert {w.letters() for w in words} == {"", "a", "ab"}


def _replays(a, word) -> bool:
    states = [a.initial_state()]
    for letter, t in word.events:
        nxt = []
        for s in states:
            for e in a.edges_from(s.location):
                if e.label == letter:
                    out = step(a, s, e, t)
                    if out is not None:
                        nxt.append((s, e, t, out))
        states = [o for (_, _, _, o) in nxt]
        if not states:
            return False
    return any(a.is_accepting(s.location, s.clocks) for s in states)


def _brute_force_words(a, duration, grid, max_events):
    """All grid event sequences accepted by direct replay, as event sets.

    Sequences obey the enumerator's contract: dates on the grid, duration at
    most the bound, per-step delays at most maxConstant + 1.
    """
    dates = [F(k) * grid for k in range(int(duration / grid) + 1)]
    cap = a.max_constant + 1
    found = set()
    if a.is_accepting(a.initial_state().location, a.initial_state().clocks):
        found.add(())
    seqs = [[]]
    for _ in range(max_events):
        new = []
        for seq in seqs:
            last = seq[-1][1] if seq else F(0)
            for letter in a.alphabet:
                for t in dates:
                    if t < last or t - last > cap:
                        continue
                    cand = seq + [(letter, t)]
                    if _accepted_prefix(a, cand):
                        new.append(cand)
                        found.add(tuple(sorted(set(cand))))
        seqs = new
    return found


def _accepted_prefix(a, events):
    states = [a.initial_state()]
    for letter, t in events:
        nxt = []
        for s in states:
            for e in a.edges_from(s.location):
                if e.label == letter:
                    out = step(a, s, e, t)
                    if out is not None:
                        nxt.append(out)
        states = nxt
        if not states:
            return False
    return any(a.is_accepting(s.location, s.clocks) for s in states)


@pytest.mark.parametrize("name", ["a1", "a5", "a6", "a8"])
def test_enumeration_sound_and_complete_up_to_kernel(name):
    """Soundness: every enumerated word replays.  Completeness: every accepted
    grid sequence of at most 4 events has an enumerated word with the same
    event set (words repeating events at one date are identified by the
    pseudo-metric)."""
    a = automaton(name)
    duration, grid = F(3), F(1, 2)
    words = enumerate_words(a, duration, grid)
    short = [w for w in words if len(w) <= 4]
    for w in short:
        assert _replays(a, w), w.text()
    enumerated_sets = {tuple(sorted(set(w.events))) for w in words}
    for key in _brute_force_words(a, duration, grid, max_events=4):
        assert key in enumerated_sets


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        enumerate_words(automaton("a1"), F(4), F(1, 8), cap=500)


def test_grid_validation():
    with pytest.raises(TAError):
        enumerate_words(automaton("a5"), F(2), F(1, 3))
    with pytest.raises(TAError):
        enumerate_words(automaton("a5"), F(5, 4), F(1, 2))


def test_capacity_monotone_in_duration_and_eps():
    a = automaton("a6")
    eps = F(1, 4)
    caps = [estimate_capacity(a, t, eps).capacity_bits for t in (F(2), F(4), F(6))]
    for lo, hi in zip(caps, caps[1:]):
        assert hi >= lo - 1  # greedy noise allowance
    by_eps = [estimate_capacity(a, F(4), e).capacity_bits
              for e in (F(1, 2), F(1, 4), F(1, 8))]
    for coarse, fine in zip(by_eps, by_eps[1:]):
        assert fine >= coarse - 1


def test_empty_language_sentinel():
    a = parse_automaton("""
automaton dead
clocks x
alphabet a
location q initial
location p
edge q -> p on a guard x < 1
""")
    est = estimate_capacity(a, F(2), F(1, 2))
    assert est.empty
    assert est.capacity_bits is None and est.entropy_bits is None


def test_grid_must_resolve_eps():
    with pytest.raises(TAError):
        estimate_capacity(automaton("a5"), F(2), F(1, 4), grid=F(1, 4))


def test_curve_and_csv():
    rows = bandwidth_curve(automaton("a5"), [F(10), F(20)],
                           [F(1, 2), F(1, 4), F(1, 8)])
    assert [r.eps for r in rows] == [F(1, 2), F(1, 4), F(1, 8)]
    assert all(r.duration == F(20) for r in rows)
    csv = curve_csv(rows)
    head, *lines = csv.strip().splitlines()
    assert head == "epsilon,T,grid,capacity_bits,entropy_bits,bits_per_second"
    assert len(lines) == 3
    assert lines[0].startswith("0.5,20,0.25,")


def _row(eps, bits_per_second, duration=F(10)):
    return CurveRow(F(eps), duration, F(eps) / 2,
                    bits_per_second * float(duration),
                    bits_per_second * float(duration), 100)


def test_fit_picks_each_model():
    flat = [_row(F(1, 2 ** k), 3.0) for k in range(1, 5)]
    assert fit_class(flat).model == "O(1)"
    assert fit_class(flat).suggested_class == "meager"
    logs = [_row(F(1, 2 ** k), 0.5 * k) for k in range(1, 5)]
    assert fit_class(logs).model == "log(1/eps)"
    assert fit_class(logs).suggested_class == "normal"
    inv = [_row(F(1, 2 ** k), 2.0 * 2 ** k) for k in range(1, 5)]
    assert fit_class(inv).model == "1/eps"
    assert fit_class(inv).suggested_class == "obese"


def test_fit_requires_three_points():
    with pytest.raises(TAError):
        fit_class([_row(F(1, 2), 1.0), _row(F(1, 4), 1.0)])


def test_fit_inconclusive_flag():
    # halfway between constant and logarithmic growth
    rows = [_row(F(1, 2), 1.0), _row(F(1, 4), 1.26), _row(F(1, 8), 1.45),
            _row(F(1, 16), 1.55)]
    fit = fit_class(rows)
    if fit.residual_ratio < 2:
        assert not fit.conclusive
