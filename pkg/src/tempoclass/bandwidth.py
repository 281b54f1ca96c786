"""Grid-discretized language enumeration and empirical bandwidth curves.

The enumerator walks the concrete semantics depth-first over a date grid,
capping per-step delays at the max constant plus one (longer waits move events
later without adding choices) and collapsing words that differ only in the
order or multiplicity of simultaneous events (the pseudo-metric cannot tell
them apart).  Capacity and entropy estimates come from the greedy
separated-set size over the slice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .ta import TAError
from .words import INF, TimedWord, word_sort_key

DEFAULT_WORD_CAP = 400_000


class EnumerationCapExceeded(TAError):
    def __init__(self, cap: int, words_so_far: int):
        super().__init__(
            f"grid enumeration exceeded the cap of {cap} search states "
            f"({words_so_far} words found so far)")
        self.cap = cap
        self.words_so_far = words_so_far


def _power_of_two_grid(g: Fraction) -> None:
    num, den = g.numerator, g.denominator
    if num != 1 or den & (den - 1):
        raise TAError(f"grid must be 1/2^k, got {g}")


def enumerate_words(a, duration: Fraction, grid: Fraction,
                    cap: int = DEFAULT_WORD_CAP) -> list[TimedWord]:
    """Accepted words with dates on the grid, duration at most the bound, and
    per-step delays at most maxConstant + 1; sorted canonically.

    The language is enumerated up to the kernel of the pseudo-metric: two words
    with the same set of (letter, date) events are indistinguishable at every
    precision, so instant cycles that revisit a state without firing a new
    letter at the current date are cut (this is what keeps the search finite on
    automata with unguarded loops).  Every returned word is a genuine run
    witness and replays successfully.
    """
    grid = Fraction(grid)
    duration = Fraction(duration)
    _power_of_two_grid(grid)
    if duration % grid != 0:
        raise TAError("duration bound must be a multiple of the grid")
    if not a.locations:
        return []
    start = a.initial_state()
    scale = grid.denominator  # dates and clocks in integer grid units below
    horizon = int(duration * scale)
    max_delay = (a.max_constant + 1) * scale

    def units(x: Fraction) -> int:
        v = x * scale
        if v.denominator != 1:
            raise TAError("clock values must lie on the grid")
        return v.numerator

    # guard atoms as (clock index, op, scaled bound); op 0:'<' 1:'<=' 2:'>' 3:'>='
    ops = {"<": 0, "<=": 1, ">": 2, ">=": 3}
    compiled = {}
    for e in a.edges:
        atoms = tuple((a.clock_index(x.clock), ops[x.relation], x.bound * scale)
                      for x in e.guard.atoms)
        resets = frozenset(a.clock_index(c) for c in e.resets)
        compiled[e.name] = (e, atoms, resets)
    out_edges = {q: [compiled[e.name] for e in a.edges_from(q)] for q in a.locations}
    check_start = bool(getattr(a, "regions", None)) or bool(a.starting)
    accepting = {}
    for q in a.locations:
        g = a.accepting.get(q)
        if g is not None:
            accepting[q] = tuple((a.clock_index(x.clock), ops[x.relation],
                                  x.bound * scale) for x in g.atoms)

    def atoms_hold(atoms, tested) -> bool:
        for i, op, b in atoms:
            v = tested[i]
            if op == 0:
                if v >= b:
                    return False
            elif op == 1:
                if v > b:
                    return False
            elif op == 2:
                if v <= b:
                    return False
            elif v < b:
                return False
        return True

    def landing_ok(dst: str, landed) -> bool:
        if not check_start:
            return True
        return a.starting_ok(dst, tuple(Fraction(v, scale) for v in landed))

    # canonical (sorted) event multiset -> a feasible firing order
    words: dict[tuple, tuple] = {}
    budget = [cap]

    def emit(events: list):
        words.setdefault(tuple(sorted(events)), tuple(events))

    start_clocks = tuple(units(x) for x in start.clocks)
    if a.is_accepting(start.location, start.clocks):
        emit([])

    def explore(loc: str, clocks: tuple, date: int, events: list,
                chain: set, letters: frozenset):
        budget[0] -= 1
        if budget[0] < 0:
            raise EnumerationCapExceeded(cap, len(words))
        edges_here = out_edges[loc]
        for k in range(min(max_delay, horizon - date) + 1):
            t = date + k
            tested = tuple(x + k for x in clocks) if k else clocks
            for edge, atoms, resets in edges_here:
                if not atoms_hold(atoms, tested):
                    continue
                landed = tuple(0 if i in resets else v
                               for i, v in enumerate(tested)) if resets else tested
                if not landing_ok(edge.dst, landed):
                    continue
                if k == 0:
                    key = (edge.dst, landed, letters | {edge.label})
                    if key in chain:
                        continue
                    chain.add(key)
                    next_chain, next_letters = chain, letters | {edge.label}
                else:
                    next_chain = {(edge.dst, landed, frozenset((edge.label,)))}
                    next_letters = frozenset((edge.label,))
                events.append((edge.label, t))
                acc = accepting.get(edge.dst)
                if acc is not None and atoms_hold(acc, landed):
                    emit(events)
                explore(edge.dst, landed, t, events, next_chain, next_letters)
                events.pop()

    explore(start.location, start_clocks, 0, [],
            {(start.location, start_clocks, frozenset())}, frozenset())
    ordered = sorted(
        (TimedWord(tuple((l, Fraction(t, scale)) for l, t in w)) for w in words.values()),
        key=word_sort_key)
    return ordered


# -- fast integer-scaled distance for the greedy passes ----------------------------


def _int_form(w: TimedWord, grid: Fraction) -> dict[str, tuple[int, ...]]:
    by_letter: dict[str, list[int]] = {}
    for letter, t in w.events:
        by_letter.setdefault(letter, []).append(int(t / grid))
    return {letter: tuple(ds) for letter, ds in by_letter.items()}


def _directed_gap(w: dict, v: dict, cutoff) -> bool:
    """True when the directed distance exceeds the cutoff (grid units)."""
    for letter, dates in w.items():
        other = v.get(letter)
        if other is None:
            return True
        j = 0
        last = len(other) - 1
        for t in dates:
            while j < last and other[j + 1] <= t:
                j += 1
            best = abs(t - other[j])
            if j < last:
                gap = other[j + 1] - t
                if gap < best:
                    best = gap
            if best > cutoff:
                return True
    return False


def _within(w: dict, v: dict, cutoff) -> bool:
    return not (_directed_gap(w, v, cutoff) or _directed_gap(v, w, cutoff))


@dataclass(frozen=True)
class CapacityEstimate:
    word_count: int
    separated_size: int
    net_size: int
    capacity_bits: Optional[float]       # None for the empty slice
    entropy_bits: Optional[float]

    @property
    def empty(self) -> bool:
        return self.word_count == 0


def estimate_capacity(a, duration: Fraction, eps: Fraction,
                      grid: Optional[Fraction] = None,
                      cap: int = DEFAULT_WORD_CAP,
                      words: Optional[Sequence[TimedWord]] = None) -> CapacityEstimate:
    """Greedy separated-set and net sizes over the grid slice; log2 sizes bound
    the eps-capacity from below and the eps-entropy from above."""
    eps = Fraction(eps)
    grid = Fraction(grid) if grid is not None else eps / 2
    if grid > eps / 2:
        raise TAError("grid must be at most eps/2")
    if words is None:
        words = enumerate_words(a, duration, grid, cap)
    if not words:
        return CapacityEstimate(0, 0, 0, None, None)
    cutoff = eps / grid  # distances are in grid units
    forms = [_int_form(w, grid) for w in words]
    durations = [int(w.duration / grid) for w in words]  # non-decreasing
    # One greedy pass serves both bounds: a maximal separated set is a net.
    chosen = _greedy(forms, durations, cutoff)
    return CapacityEstimate(len(words), len(chosen), len(chosen),
                            math.log2(len(chosen)), math.log2(len(chosen)))


def _greedy(forms, durations, cutoff) -> list:
    """Keep each word farther than the cutoff from everything kept before
    (insertion order).  Two words within the cutoff necessarily have durations
    within the cutoff (the later final event must find a match), so only a
    duration window of kept members needs scanning.
    """
    from bisect import bisect_left, bisect_right

    selected: list = []
    sel_dur: list[int] = []
    for f, d in zip(forms, durations):
        lo = bisect_left(sel_dur, d - cutoff)
        hi = bisect_right(sel_dur, d + cutoff)
        near = any(_within(f, selected[i], cutoff) for i in range(lo, hi))
        if not near:
            selected.append(f)
            sel_dur.append(d)
    return selected


# -- curves and asymptotic fits ------------------------------------------------------


@dataclass(frozen=True)
class CurveRow:
    eps: Fraction
    duration: Fraction
    grid: Fraction
    capacity_bits: float
    entropy_bits: float
    word_count: int

    @property
    def bits_per_second(self) -> float:
        return self.capacity_bits / float(self.duration)


def bandwidth_curve(a, durations: Sequence[Fraction], epss: Sequence[Fraction],
                    grid: Optional[Fraction] = None,
                    cap: int = DEFAULT_WORD_CAP) -> list[CurveRow]:
    """One row per eps at the largest duration whose enumeration stays under
    the cap; durations are tried in increasing order."""
    rows: list[CurveRow] = []
    for eps in epss:
        eps = Fraction(eps)
        g = Fraction(grid) if grid is not None else eps / 2
        best: Optional[CurveRow] = None
        for t in sorted(Fraction(t) for t in durations):
            if t % g != 0:
                continue  # this duration does not align with this eps's grid
            try:
                est = estimate_capacity(a, t, eps, g, cap)
            except EnumerationCapExceeded:
                break
            if est.empty:
                continue
            assert est.capacity_bits is not None and est.entropy_bits is not None
            best = CurveRow(eps, t, g, est.capacity_bits, est.entropy_bits,
                            est.word_count)
        if best is not None:
            rows.append(best)
    return rows


def curve_csv(rows: Sequence[CurveRow]) -> str:
    from .words import format_rational
    lines = ["epsilon,T,grid,capacity_bits,entropy_bits,bits_per_second"]
    for r in rows:
        lines.append(",".join([
            format_rational(r.eps), format_rational(r.duration),
            format_rational(r.grid), f"{r.capacity_bits:.6g}",
            f"{r.entropy_bits:.6g}", f"{r.bits_per_second:.6g}"]))
    return "\n".join(lines) + "\n"


_MODELS = (
    ("O(1)", lambda eps: 1.0),
    ("log(1/eps)", lambda eps: math.log2(1.0 / eps)),
    ("1/eps", lambda eps: 1.0 / eps),
)

_CLASS_OF_MODEL = {"O(1)": "meager", "log(1/eps)": "normal", "1/eps": "obese"}


@dataclass(frozen=True)
class FitReport:
    model: str
    constant: float
    residuals: dict[str, float]
    residual_ratio: float        # runner-up rss / best rss (inf when exact)
    conclusive: bool
    suggested_class: str

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "constant": self.constant,
            "residuals": {k: v for k, v in sorted(self.residuals.items())},
            "residualRatio": None if self.residual_ratio == INF
            else self.residual_ratio,
            "conclusive": self.conclusive,
            "suggestedClass": self.suggested_class,
        }


def fit_class(rows: Sequence[CurveRow], ratio_threshold: float = 2.0) -> FitReport:
    """Least-squares fit of bits/second against the three one-parameter shapes;
    the winner is flagged inconclusive when the runner-up is closer than the
    threshold ratio."""
    if len(rows) < 3:
        raise TAError("need at least three epsilon points to fit a shape")
    pts = [(float(r.eps), r.bits_per_second) for r in rows]
    residuals: dict[str, float] = {}
    constants: dict[str, float] = {}
    for name, basis in _MODELS:
        num = sum(basis(e) * y for e, y in pts)
        den = sum(basis(e) ** 2 for e, y in pts)
        c = num / den if den else 0.0
        rss = sum((y - c * basis(e)) ** 2 for e, y in pts)
        residuals[name] = rss
        constants[name] = c
    ranked = sorted(residuals, key=lambda m: residuals[m])
    best, second = ranked[0], ranked[1]
    ratio = INF if residuals[best] == 0 else residuals[second] / residuals[best]
    return FitReport(best, constants[best], residuals, ratio,
                     ratio >= ratio_threshold, _CLASS_OF_MODEL[best])
