"""Reachable-orbit saturation and the three-way bandwidth classification.

The primary algorithm is breadth-first saturation of the orbit monoid with
shortest witnesses; a divide-and-conquer mode mirroring the log-space
reachability recursion is kept for cross-checking (same verdicts, no
witnesses).  An automaton is meager when no cyclic freedom orbit carries a
wide diagonal entry, obese when some cyclic duration orbit carries a fast
diagonal entry (type I) or an instant/instant/slow triangle whose return edge
is realizable by another cycle on the same region (type II), and normal
otherwise.
"""

from __future__ import annotations

import os
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .orbits import (FAST, INSTANT, SLOW, WIDE, OrbitElement, edge_orbit,
                     orbit_compose, orbit_one)
from .splitting import RegionSplitAutomaton, region_split
from .ta import TAError, TimedAutomaton

DEFAULT_CAP = 10 ** 6


def saturation_cap(flag_value: Optional[int] = None) -> int:
    env = os.environ.get("TEMPOCLASS_CAP")
    if env is not None:
        return int(env)
    if flag_value is not None:
        return flag_value
    return DEFAULT_CAP


class SaturationCapExceeded(TAError):
    def __init__(self, cap: int, partial):
        super().__init__(f"orbit saturation exceeded the cap of {cap} elements")
        self.cap = cap
        self.partial = partial


def saturate(a: RegionSplitAutomaton, kind: str,
             cap: int = DEFAULT_CAP) -> dict[OrbitElement, tuple[str, ...]]:
    """All orbits of paths, each mapped to a shortest witness edge sequence.

    Breadth-first closure over right-extension by single edges; insertion
    order is by witness length, so stored witnesses are minimal.
    """
    edge_orbits = [(e, edge_orbit(a, e, kind)) for e in a.edges]
    reach: dict[OrbitElement, tuple[str, ...]] = {orbit_one(kind): ()}
    frontier: deque[OrbitElement] = deque([orbit_one(kind)])
    while frontier:
        elem = frontier.popleft()
        wit = reach[elem]
        for e, eo in edge_orbits:
            if elem.tag == "elem" and elem.dst != e.src:
                continue
            nxt = orbit_compose(elem, eo)
            if nxt.is_zero or nxt in reach:
                continue
            reach[nxt] = wit + (e.name,)
            if len(reach) > cap:
                raise SaturationCapExceeded(cap, reach)
            frontier.append(nxt)
    return reach


def _level_sets(a: RegionSplitAutomaton, kind: str, h: int,
                cap: int = DEFAULT_CAP) -> set[OrbitElement]:
    """Orbits of paths of length <= 2**h, by repeated squaring of the level set.

    This is the memoized form of the recursive column-doubling search: a path
    of length <= 2**h splits into two halves of length <= 2**(h-1), with the
    unit padding shorter paths.
    """
    level: set[OrbitElement] = {orbit_one(kind)}
    for e in a.edges:
        eo = edge_orbit(a, e, kind)
        if not eo.is_zero:
            level.add(eo)
    for _ in range(h):
        nxt = set(level)
        for e1 in level:
            for e2 in level:
                c = orbit_compose(e1, e2)
                if not c.is_zero:
                    nxt.add(c)
                if len(nxt) > cap:
                    raise SaturationCapExceeded(cap, nxt)
        if nxt == level:
            break
        level = nxt
    return level


def is_path_orbit(a: RegionSplitAutomaton, e: OrbitElement, h: int,
                  cap: int = DEFAULT_CAP) -> bool:
    """True iff some path of length <= 2**h has orbit e."""
    return e in _level_sets(a, e.kind, h, cap)


@dataclass(frozen=True)
class PatternWitness:
    cycle: tuple[str, ...]           # edge names in the region-split automaton
    position: tuple[int, int]        # vertex indices (row, column)
    kind: str

    def to_json(self) -> dict:
        return {"cycle": list(self.cycle), "position": list(self.position),
                "kind": self.kind}


@dataclass(frozen=True)
class MeagerReport:
    meager: bool
    witness: Optional[PatternWitness] = None      # wide diagonal when not meager


@dataclass(frozen=True)
class ObeseReport:
    obese: bool
    obesity_type: Optional[str] = None            # "I" or "II"
    witnesses: tuple[PatternWitness, ...] = ()


@dataclass(frozen=True)
class ThickReport:
    thick: bool
    witness: Optional[PatternWitness] = None      # all-ones cyclic reach orbit
    applicable: bool = True                       # bounded, non-punctual guards


def is_structurally_meager(a: RegionSplitAutomaton, cap: int = DEFAULT_CAP,
                           mode: str = "bfs", reach=None) -> MeagerReport:
    """No cyclic freedom orbit may carry wide on its diagonal."""
    if mode == "savitch":
        elems = _level_sets(a, "f", _doubling_depth(cap), cap)
        for elem in sorted(elems, key=lambda x: (x.tag, str(x))):
            if elem.cyclic and WIDE in elem.diagonal():
                return MeagerReport(False, None)
        return MeagerReport(True, None)
    if reach is None:
        reach = saturate(a, "f", cap)
    for elem, wit in reach.items():
        if elem.cyclic:
            diag = elem.diagonal()
            for i, v in enumerate(diag):
                if v == WIDE:
                    return MeagerReport(False, PatternWitness(wit, (i, i), "f"))
    return MeagerReport(True, None)


def is_structurally_obese(a: RegionSplitAutomaton, cap: int = DEFAULT_CAP,
                          mode: str = "bfs", reach_d=None, reach_p=None) -> ObeseReport:
    """Fast diagonal (type I), or an instant/instant pair with a slow edge
    between them whose return is realizable on the same region (type II)."""
    if mode == "savitch":
        elems_d = _level_sets(a, "d", _doubling_depth(cap), cap)
        elems_p = None
        for elem in sorted(elems_d, key=lambda x: (x.tag, str(x))):
            if elem.cyclic and FAST in elem.diagonal():
                return ObeseReport(True, "I")
        for elem in sorted(elems_d, key=lambda x: (x.tag, str(x))):
            if not elem.cyclic:
                continue
            hit = _type2_positions(elem)
            if not hit:
                continue
            if elems_p is None:
                elems_p = _level_sets(a, "p", _doubling_depth(cap), cap)
            for (u, v) in hit:
                for other in elems_p:
                    if other.cyclic and other.src == elem.src and other.entry(v, u) != 0:
                        return ObeseReport(True, "II")
        return ObeseReport(False)

    if reach_d is None:
        reach_d = saturate(a, "d", cap)
    for elem, wit in reach_d.items():
        if elem.cyclic:
            for i, val in enumerate(elem.diagonal()):
                if val == FAST:
                    return ObeseReport(True, "I",
                                       (PatternWitness(wit, (i, i), "d"),))
    for elem, wit in reach_d.items():
        if not elem.cyclic:
            continue
        hit = _type2_positions(elem)
        if not hit:
            continue
        if reach_p is None:
            reach_p = saturate(a, "p", cap)
        for (u, v) in hit:
            for other, wit2 in reach_p.items():
                if other.cyclic and other.src == elem.src and other.entry(v, u) != 0:
                    return ObeseReport(True, "II", (
                        PatternWitness(wit, (u, v), "d"),
                        PatternWitness(wit2, (v, u), "p")))
    return ObeseReport(False)


def _type2_positions(elem: OrbitElement) -> list[tuple[int, int]]:
    diag = elem.diagonal()
    out = []
    for u, du in enumerate(diag):
        if du != INSTANT:
            continue
        for v, dv in enumerate(diag):
            if v != u and dv == INSTANT and elem.entry(u, v) == SLOW:
                out.append((u, v))
    return out


def _doubling_depth(cap: int) -> int:
    h = 0
    while (1 << h) < cap:
        h += 1
    return min(h, 32)


def is_thick(a: RegionSplitAutomaton, cap: int = DEFAULT_CAP,
             reach=None) -> ThickReport:
    """Thick iff some cycle's reachability orbit is the complete graph.

    A complete orbit on a single vertex only counts when the cycle admits
    several runs (its freedom orbit is wide there); with two or more vertices
    completeness already forces wide self-loops in the squared cycle.
    """
    from .orbits import path_orbit

    applicable = True  # caller may refine via guards_bounded_nonpunctual
    if reach is None:
        reach = saturate(a, "p", cap)
    for elem, wit in reach.items():
        if not (elem.cyclic and all(v != 0 for row in elem.matrix for v in row)):
            continue
        if len(elem.matrix) == 1:
            f = path_orbit(a, [a.edge_named(n) for n in wit], "f")
            if f.tag != "elem" or f.entry(0, 0) != WIDE:
                continue
        return ThickReport(True, PatternWitness(wit, (0, 0), "p"), applicable)
    return ThickReport(False, None, applicable)


def guards_bounded_nonpunctual(a: TimedAutomaton) -> bool:
    """Every guard caps some clock from above and pins none to a point; the
    thin/thick comparison is only claimed under these hypotheses."""
    for e in a.edges:
        uppers = [x for x in e.guard.atoms if x.relation in ("<", "<=")]
        if not uppers:
            return False
        by_clock: dict[str, list] = {}
        for atom in e.guard.atoms:
            by_clock.setdefault(atom.clock, []).append(atom)
        for atoms in by_clock.values():
            los = [x.bound for x in atoms if x.relation == ">="]
            his = [x.bound for x in atoms if x.relation == "<="]
            if los and his and max(los) == min(his):
                return False
    return True


def structurally_zeno(e: OrbitElement) -> bool:
    """Diagnostic: every self-loop instant and at least one slow edge."""
    if not e.cyclic:
        raise ValueError("structural Zenoness is a property of cyclic orbits")
    assert e.matrix is not None
    if any(v not in (0, INSTANT) for v in e.diagonal()):
        return False
    return any(v == SLOW for row in e.matrix for v in row)


# -- the classification driver ------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    classification: str                      # "meager" | "normal" | "obese"
    obesity_type: Optional[str]              # "I" | "II" | None
    fatness: str                             # "thin" | "thick"
    fatness_applicable: bool
    witnesses: tuple[PatternWitness, ...]
    stats: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return {"meager": 0, "normal": 1, "obese": 2}[self.classification]

    def to_json(self) -> dict:
        return {
            "class": self.classification,
            "obesityType": self.obesity_type,
            "fatness": self.fatness,
            "fatnessApplicable": self.fatness_applicable,
            "witnesses": [w.to_json() for w in self.witnesses],
            "stats": dict(self.stats),
        }


class ClassificationError(TAError):
    pass


def classify(a: TimedAutomaton, cap: int = DEFAULT_CAP, mode: str = "bfs") -> Verdict:
    """Region-split, run both structural checks, attach the fatness verdict."""
    t0 = time.monotonic()
    rsta = a if isinstance(a, RegionSplitAutomaton) else region_split(a)
    if not rsta.locations:
        # empty language: no cycles at all
        return Verdict("meager", None, "thin", guards_bounded_nonpunctual(a), (), {
            "locations": 0, "regions": 0, "monoidSize": 0, "witnessMaxLen": 0,
            "wallTimeMs": int((time.monotonic() - t0) * 1000)})
    if mode == "bfs":
        reaches = {k: saturate(rsta, k, cap) for k in ("p", "f", "d")}
        meager = is_structurally_meager(rsta, cap, mode, reach=reaches["f"])
        obese = is_structurally_obese(rsta, cap, mode,
                                      reach_d=reaches["d"], reach_p=reaches["p"])
    else:
        reaches = {}
        meager = is_structurally_meager(rsta, cap, mode)
        obese = is_structurally_obese(rsta, cap, mode)
    if meager.meager and obese.obese:
        raise ClassificationError(
            "structural meagerness and obesity both hold; this cannot happen")
    thick = is_thick(rsta, cap, reach=reaches.get("p"))
    witnesses: list[PatternWitness] = []
    if meager.witness:
        witnesses.append(meager.witness)
    witnesses.extend(obese.witnesses)
    if thick.witness:
        witnesses.append(thick.witness)
    if meager.meager:
        cls = "meager"
    elif obese.obese:
        cls = "obese"
    else:
        cls = "normal"
    sizes = [len(r) for r in reaches.values()]
    stats = {
        "locations": len(rsta.locations),
        "regions": len(set(rsta.regions.values())),
        "monoidSize": max(sizes) if sizes else None,
        "witnessMaxLen": max((len(w.cycle) for w in witnesses), default=0),
        "wallTimeMs": int((time.monotonic() - t0) * 1000),
    }
    return Verdict(cls, obese.obesity_type if obese.obese else None,
                   "thick" if thick.thick else "thin",
                   guards_bounded_nonpunctual(a), tuple(witnesses), stats)
