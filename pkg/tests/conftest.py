from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tempoclass.corpus import NAMES, automaton
from tempoclass.splitting import region_split
from tempoclass.ta import ClockConstraint, Edge, Guard, TimedAutomaton


@pytest.fixture(scope="session")
def corpus():
    return {name: automaton(name) for name in NAMES}


@pytest.fixture(scope="session")
def split_corpus(corpus):
    return {name: region_split(a) for name, a in corpus.items()}


@pytest.fixture()
def rng():
    return random.Random(20240811)


def random_paths(rsta, rng, count: int, max_len: int = 6):
    """Random walks over the region-split edges (always genuine paths)."""
    paths = []
    for _ in range(count):
        if not rsta.edges:
            break
        e = rng.choice(rsta.edges)
        path = [e]
        for _ in range(rng.randrange(max_len - 1)):
            nxt = rsta.edges_from(path[-1].dst)
            if not nxt:
                break
            path.append(rng.choice(nxt))
        paths.append(path)
    return paths


def grid_points_in_closure(region, grid: Fraction):
    """All grid-aligned points of the region's closure."""
    from itertools import product

    assert region.bounded
    steps = int(Fraction(region.bound) / grid)
    axis = [Fraction(k) * grid for k in range(steps + 1)]
    return [p for p in product(axis, repeat=region.clock_count)
            if region.closure_contains(p)]


def random_automaton(rng: random.Random) -> TimedAutomaton:
    """Small random automaton; not necessarily deterministic."""
    n_locs = rng.randrange(1, 4)
    n_clocks = rng.randrange(1, 3)
    bound = rng.randrange(1, 3)
    locations = tuple(f"q{i}" for i in range(n_locs))
    clocks = tuple("xy"[:n_clocks])
    letters = ("a", "b")
    edges = []
    for i in range(rng.randrange(1, 5)):
        src = rng.choice(locations)
        dst = rng.choice(locations)
        letter = rng.choice(letters)
        atoms = []
        for c in clocks:
            kind = rng.randrange(4)
            if kind == 0:
                atoms.append(ClockConstraint(c, "<", rng.randrange(1, bound + 1)))
            elif kind == 1:
                atoms.append(ClockConstraint(c, ">", rng.randrange(0, bound)))
                atoms.append(ClockConstraint(c, "<=", bound))
            elif kind == 2:
                b = rng.randrange(0, bound + 1)
                atoms.append(ClockConstraint(c, ">=", b))
                atoms.append(ClockConstraint(c, "<=", b))
        resets = frozenset(c for c in clocks if rng.random() < 0.4)
        edges.append(Edge(f"d{i + 1}", src, dst, letter, Guard(tuple(atoms)), resets))
    accepting = {q: Guard() for q in locations if rng.random() < 0.7}
    return TimedAutomaton("rand", clocks, letters, locations, tuple(edges),
                          {locations[0]: tuple(Fraction(0) for _ in clocks)},
                          accepting)
