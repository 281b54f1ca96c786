"""Finite orbit monoids over region vertices.

Three abstractions of a path, all matrices indexed by source-region vertices
(rows) and target-region vertices (columns) in lexicographic vertex order:

* kind "p": Boolean reachability between vertices;
* kind "f": amount of timing choice: 0 / narrow (unique word) / wide;
* kind "d": duration class: 0 / instant / fast (spans [0,1]) / slow (>= 1).

Entries compose through semiring matrix products, which agrees with whole-path
evaluation because the per-edge languages concatenate exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .dbm import LanguageClass, language_class
from .regions import Region, barycentric_coordinates

ZERO = 0
ONE_P = 1
NARROW, WIDE = 1, 2
INSTANT, FAST, SLOW = 1, 2, 3

KINDS = ("p", "f", "d")

_P_ADD = ((0, 1), (1, 1))
_P_MUL = ((0, 0), (0, 1))
_F_ADD = ((0, 1, 2), (1, 2, 2), (2, 2, 2))
_F_MUL = ((0, 0, 0), (0, 1, 2), (0, 2, 2))
_D_ADD = ((0, 1, 2, 3), (1, 1, 2, 2), (2, 2, 2, 2), (3, 2, 2, 3))
_D_MUL = ((0, 0, 0, 0), (0, 1, 2, 3), (0, 2, 2, 3), (0, 3, 3, 3))

_TABLES = {"p": (_P_ADD, _P_MUL), "f": (_F_ADD, _F_MUL), "d": (_D_ADD, _D_MUL)}

_LABELS = {
    "p": ("0", "1"),
    "f": ("0", "narrow", "wide"),
    "d": ("0", "instant", "fast", "slow"),
}


def semiring_add(kind: str, a: int, b: int) -> int:
    return _TABLES[kind][0][a][b]


def semiring_mul(kind: str, a: int, b: int) -> int:
    return _TABLES[kind][1][a][b]


def semiring_values(kind: str) -> range:
    return range(len(_LABELS[kind]))


def semiring_unit(kind: str) -> int:
    return 1  # narrow / instant / Boolean 1


def label(kind: str, value: int) -> str:
    return _LABELS[kind][value]


Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class OrbitElement:
    kind: str
    tag: str                      # "zero" | "one" | "elem"
    src: Optional[str] = None
    matrix: Optional[Matrix] = None
    dst: Optional[str] = None

    @property
    def is_zero(self) -> bool:
        return self.tag == "zero"

    @property
    def is_one(self) -> bool:
        return self.tag == "one"

    @property
    def cyclic(self) -> bool:
        return self.tag == "elem" and self.src == self.dst

    def entry(self, i: int, j: int) -> int:
        assert self.matrix is not None
        return self.matrix[i][j]

    def diagonal(self) -> tuple[int, ...]:
        assert self.matrix is not None and self.cyclic
        return tuple(self.matrix[i][i] for i in range(len(self.matrix)))

    def pretty(self) -> str:
        if self.tag != "elem":
            return {"zero": "0", "one": "1"}[self.tag]
        rows = "; ".join("(" + ", ".join(label(self.kind, v) for v in row) + ")"
                         for row in self.matrix)
        return f"<{self.src} | {rows} | {self.dst}>"


def orbit_zero(kind: str) -> OrbitElement:
    return OrbitElement(kind, "zero")


def orbit_one(kind: str) -> OrbitElement:
    return OrbitElement(kind, "one")


def orbit_element(kind: str, src: str, matrix: Sequence[Sequence[int]],
                  dst: str) -> OrbitElement:
    m = tuple(tuple(row) for row in matrix)
    if all(v == 0 for row in m for v in row):
        return orbit_zero(kind)
    return OrbitElement(kind, "elem", src, m, dst)


def orbit_compose(e1: OrbitElement, e2: OrbitElement) -> OrbitElement:
    if e1.kind != e2.kind:
        raise ValueError("cannot compose orbits of different kinds")
    kind = e1.kind
    if e1.is_zero or e2.is_zero:
        return orbit_zero(kind)
    if e1.is_one:
        return e2
    if e2.is_one:
        return e1
    if e1.dst != e2.src:
        return orbit_zero(kind)
    a, b = e1.matrix, e2.matrix
    assert a is not None and b is not None
    if len(a[0]) != len(b):
        return orbit_zero(kind)
    add, mul = _TABLES[kind]
    rows = []
    for i in range(len(a)):
        row = []
        for j in range(len(b[0])):
            acc = 0
            for k in range(len(b)):
                acc = add[acc][mul[a[i][k]][b[k][j]]]
            row.append(acc)
        rows.append(tuple(row))
    return orbit_element(kind, e1.src, tuple(rows), e2.dst)


def _entry_value(kind: str, lc: LanguageClass) -> int:
    if lc.empty:
        return ZERO
    if kind == "p":
        return ONE_P
    if kind == "f":
        return NARROW if lc.kind == "singleton" else WIDE
    dur = lc.duration
    assert dur is not None
    if lc.kind == "singleton" and dur.lo == 0:
        return INSTANT
    if dur.lo >= 1:
        return SLOW
    return FAST


def _matrix_for(automaton, path, src: str, dst: str, kind: str) -> OrbitElement:
    vs = automaton.location_vertices(src)
    vd = automaton.location_vertices(dst)
    rows = tuple(
        tuple(_entry_value(kind, language_class(automaton, path, v, w)) for w in vd)
        for v in vs)
    return orbit_element(kind, src, rows, dst)


def edge_orbit(automaton, edge, kind: str) -> OrbitElement:
    """Orbit of one region-split edge, entries from vertex-to-vertex languages."""
    return _matrix_for(automaton, [edge], edge.src, edge.dst, kind)


def path_orbit(automaton, path, kind: str) -> OrbitElement:
    """Fold of edge orbits; the empty sequence maps to the unit and any
    non-path to zero."""
    acc = orbit_one(kind)
    for e in path:
        acc = orbit_compose(acc, edge_orbit(automaton, e, kind))
    return acc


def path_orbit_direct(automaton, path, kind: str) -> OrbitElement:
    """Whole-path evaluation bypassing composition (oracle for the morphism
    property)."""
    if not path:
        return orbit_one(kind)
    for a, b in zip(path, path[1:]):
        if a.dst != b.src:
            return orbit_zero(kind)
    return _matrix_for(automaton, list(path), path[0].src, path[-1].dst, kind)


def idempotent_power(e: OrbitElement, cap: int = 1 << 16) -> tuple[int, OrbitElement]:
    """Smallest k with (e^k)^2 = e^k; exists by finiteness."""
    power = e
    k = 1
    while orbit_compose(power, power) != power:
        power = orbit_compose(power, e)
        k += 1
        if k > cap:
            raise RuntimeError("no idempotent power found within cap")
    return k, power


# -- SCC structure and Lyapunov families -----------------------------------------


@dataclass(frozen=True)
class SccDecomposition:
    """SCCs of a cyclic orbit's support digraph, in topological order, plus the
    family of initial vertex sets that induce non-increasing affine functions
    of the barycentric coordinates."""

    sccs: tuple[frozenset[int], ...]
    initial_sets: tuple[frozenset[int], ...]


def scc_decomposition(e: OrbitElement) -> SccDecomposition:
    if not e.cyclic:
        raise ValueError("SCC decomposition needs a cyclic orbit element")
    m = e.matrix
    assert m is not None
    n = len(m)
    adj = {i: [j for j in range(n) if m[i][j] != 0] for i in range(n)}
    sccs = _tarjan(n, adj)
    comp_of = {}
    for idx, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = idx
    preds: dict[int, set[int]] = {i: set() for i in range(len(sccs))}
    for u in range(n):
        for v in adj[u]:
            if comp_of[u] != comp_of[v]:
                preds[comp_of[v]].add(comp_of[u])
    # Kahn with smallest-vertex tie-break for a canonical topological order
    ordered: list[int] = []
    remaining = set(range(len(sccs)))
    while remaining:
        ready = [c for c in remaining if preds[c] <= set(ordered)]
        ready.sort(key=lambda c: min(sccs[c]))
        ordered.append(ready[0])
        remaining.remove(ready[0])
    topo = tuple(frozenset(sccs[c]) for c in ordered)
    initial_sets = tuple(frozenset().union(*topo[:i]) for i in range(1, len(topo)))
    return SccDecomposition(topo, initial_sets)


def _tarjan(n: int, adj: dict[int, list[int]]) -> list[set[int]]:
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[set[int]] = []
    counter = [0]

    def strongconnect(v0: int):
        work = [(v0, iter(adj[v0]))]
        index[v0] = low[v0] = counter[0]
        counter[0] += 1
        stack.append(v0)
        on_stack.add(v0)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                sccs.append(comp)

    for v in range(n):
        if v not in index:
            strongconnect(v)
    return sccs


def lyapunov_values(region: Region, initial_sets: Sequence[frozenset[int]],
                    point: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Evaluate each initial-set function at a closure point of the region."""
    bary = barycentric_coordinates(region, point)
    return tuple(sum((bary[v] for v in sorted(s)), Fraction(0)) for s in initial_sets)


# -- presentation -----------------------------------------------------------------


_DOT_STYLE = {
    ("p", 1): "",
    ("f", NARROW): ' [color="forestgreen"]',
    ("f", WIDE): ' [color="red", penwidth=2]',
    ("d", INSTANT): ' [color="gray40", style=dashed]',
    ("d", FAST): ' [color="red", penwidth=2]',
    ("d", SLOW): ' [color="blue"]',
}


def export_dot(e: OrbitElement, automaton=None) -> str:
    """Bipartite (or cyclic) digraph; edge styles encode the entry labels."""
    if e.is_zero:
        return 'digraph orbit {\n  label="0 (no realizable run)";\n}\n'
    if e.is_one:
        return 'digraph orbit {\n  label="1 (empty path)";\n}\n'
    assert e.matrix is not None
    src_names = _vertex_names(automaton, e.src, len(e.matrix))
    cyclic = e.src == e.dst
    dst_names = src_names if cyclic else _vertex_names(automaton, e.dst, len(e.matrix[0]))
    lines = ["digraph orbit {", "  rankdir=LR;"]
    for i, nm in enumerate(src_names):
        lines.append(f'  s{i} [label="{nm}"];')
    if not cyclic:
        for j, nm in enumerate(dst_names):
            lines.append(f'  t{j} [label="{nm}"];')
    prefix = "s" if cyclic else "t"
    for i, row in enumerate(e.matrix):
        for j, v in enumerate(row):
            if v == 0:
                continue
            style = _DOT_STYLE.get((e.kind, v), "")
            extra = f' [label="{label(e.kind, v)}"]' if not style else style[:-1] \
                + f', label="{label(e.kind, v)}"]'
            if e.kind == "p":
                extra = ""
            lines.append(f"  s{i} -> {prefix}{j}{extra};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _vertex_names(automaton, loc: Optional[str], count: int) -> list[str]:
    if automaton is not None and loc is not None:
        return [str(tuple(v)) for v in automaton.location_vertices(loc)]
    return [str(i) for i in range(count)]


def orbit_to_json(e: OrbitElement) -> dict:
    if e.tag != "elem":
        return {"kind": e.kind, "constant": "0" if e.is_zero else "1"}
    assert e.matrix is not None
    return {
        "src": e.src,
        "dst": e.dst,
        "kind": e.kind,
        "rows": [[label(e.kind, v) for v in row] for row in e.matrix],
    }
