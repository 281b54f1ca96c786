"""Region-split form: every location carries one bounded region as its
starting constraint and every edge is exact between regions.

The construction folds two steps into one forward exploration: locations are
annotated with the set of clocks that ran above the max constant (such clocks
are force-reset on entry and their guard atoms are resolved statically), and
split by the region their entry vectors inhabit.  Edge guards are refined to
pin the exact region in which the original guard is crossed, which keeps the
result deterministic and makes every edge's successor relation exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from .regions import Region, region_of, time_successor_chain
from .ta import (TAError, TimedAutomaton, Edge, Guard, ClockConstraint,
                 ClockVector, check_deterministic)


@dataclass(frozen=True)
class Provenance:
    base: str                     # original location
    large: frozenset[str]         # clocks that were above the bound on entry
    region: Region


@dataclass
class RegionSplitAutomaton(TimedAutomaton):
    regions: dict[str, Region] = field(default_factory=dict)
    provenance: dict[str, Provenance] = field(default_factory=dict)
    bound: int = 0

    def starting_ok(self, loc: str, clocks: ClockVector, closed: bool = False) -> bool:
        r = self.regions[loc]
        if closed:
            return r.closure_contains(clocks)
        return r.contains(clocks)

    def location_vertices(self, loc: str):
        return self.regions[loc].vertices()


def region_pins(clocks: tuple[str, ...], region: Region) -> Guard:
    """Rectangular constraints selecting `region` within any delay cone."""
    atoms: list[ClockConstraint] = []
    zero = region.zero_fraction
    for idx, name in enumerate(clocks):
        ip = region.int_part[idx]
        if ip is None:
            atoms.append(ClockConstraint(name, ">", region.bound))
        elif idx in zero:
            atoms.append(ClockConstraint(name, ">=", ip))
            atoms.append(ClockConstraint(name, "<=", ip))
        else:
            atoms.append(ClockConstraint(name, ">", ip))
            atoms.append(ClockConstraint(name, "<", ip + 1))
    return Guard(tuple(atoms))


def _guard_on(region: Region, atoms, clocks) -> bool:
    rep = region.representative()
    return all(a.holds(rep[clocks.index(a.clock)]) for a in atoms)


def _resolve_large(atoms, large: frozenset[str]):
    """Split guard atoms into (kept, feasible) under 'these clocks are large'.

    Atoms upper-bounding a large clock can never hold (bounds never exceed the
    max constant), lower bounds on large clocks always hold.
    """
    kept = []
    for a in atoms:
        if a.clock in large:
            if a.relation in ("<", "<="):
                return None
        else:
            kept.append(a)
    return tuple(kept)


_Key = tuple[str, frozenset[str], Region]


def region_split(a: TimedAutomaton) -> RegionSplitAutomaton:
    """Language-preserving region-split form of a deterministic automaton."""
    report = check_deterministic(a)
    if not report.deterministic:
        raise TAError("region_split requires a deterministic automaton")
    if len(a.initial) != 1:
        raise TAError("unsatisfiable or missing initial constraint")
    bound = a.max_constant
    (q0, x0), = a.initial.items()
    if any(v > bound for v in x0):
        raise TAError("initial clock values above the max constant are not supported")
    if not a.starting_ok(q0, x0):
        raise TAError("initial vector violates the starting constraint")

    clock_list = list(a.clocks)
    start_key: _Key = (q0, frozenset(), region_of(x0, bound))

    def is_accepting(key: _Key) -> bool:
        base, large, region = key
        g = a.accepting.get(base)
        if g is None:
            return False
        kept = _resolve_large(g.atoms, large)
        if kept is None:
            return False
        return _guard_on(region, kept, clock_list)

    # forward exploration
    succ: dict[_Key, list[tuple[Edge, Region, frozenset[str], _Key]]] = {}
    order: list[_Key] = [start_key]
    queue = deque([start_key])
    seen = {start_key}
    while queue:
        key = queue.popleft()
        base, large, region = key
        out = []
        for e in a.edges_from(base):
            kept = _resolve_large(e.guard.atoms, large)
            if kept is None:
                continue
            resets = frozenset(e.resets)
            for fired in time_successor_chain(region):
                if not _guard_on(fired, kept, clock_list):
                    continue
                newly = frozenset(
                    c for i, c in enumerate(a.clocks)
                    if fired.int_part[i] is None and c not in large and c not in resets)
                large2 = (large - resets) | newly
                resets2 = resets | large2
                target_region = fired.reset(a.clock_index(c) for c in resets2)
                starting = a.starting.get(e.dst)
                if starting is not None:
                    kept_s = _resolve_large(starting.atoms, large2)
                    if kept_s is None or not _guard_on(target_region, kept_s, clock_list):
                        continue
                key2 = (e.dst, large2, target_region)
                out.append((e, fired, resets2, key2))
                if key2 not in seen:
                    seen.add(key2)
                    order.append(key2)
                    queue.append(key2)
        succ[key] = out

    # co-reachability pruning on the finite location graph
    rev: dict[_Key, set[_Key]] = {k: set() for k in seen}
    for key, outs in succ.items():
        for _, _, _, key2 in outs:
            rev[key2].add(key)
    live = {k for k in seen if is_accepting(k)}
    stack = list(live)
    while stack:
        k = stack.pop()
        for p in rev[k]:
            if p not in live:
                live.add(p)
                stack.append(p)

    if start_key not in live:
        return RegionSplitAutomaton(
            a.name + "_rs", a.clocks, a.alphabet, (), (), {}, {}, {},
            regions={}, provenance={}, bound=bound)

    kept_keys = [k for k in order if k in live]
    names: dict[_Key, str] = {}
    per_base: dict[str, int] = {}
    for key in kept_keys:
        i = per_base.get(key[0], 0)
        per_base[key[0]] = i + 1
        names[key] = f"{key[0]}_{i}"

    edges: list[Edge] = []
    per_edge: dict[str, int] = {}
    for key in kept_keys:
        for e, fired, resets2, key2 in succ[key]:
            if key2 not in live:
                continue
            k = per_edge.get(e.name, 0)
            per_edge[e.name] = k + 1
            edges.append(Edge(f"{e.name}.{k}", names[key], names[key2], e.label,
                              region_pins(a.clocks, fired), resets2))

    rsta = RegionSplitAutomaton(
        a.name + "_rs", a.clocks, a.alphabet,
        tuple(names[k] for k in kept_keys), tuple(edges),
        {names[start_key]: x0},
        {names[k]: Guard() for k in kept_keys if is_accepting(k)},
        {},
        regions={names[k]: k[2] for k in kept_keys},
        provenance={names[k]: Provenance(k[0], k[1], k[2]) for k in kept_keys},
        bound=bound)
    return rsta


# -- closed successors / predecessors -------------------------------------------


def _face_region(vertex_set, bound: int) -> Region:
    verts = sorted(vertex_set)
    n = len(verts[0])
    mean = tuple(Fraction(sum(v[i] for v in verts), len(verts)) for i in range(n))
    return region_of(mean, bound)


def closed_successor(a: RegionSplitAutomaton, region: Region, edge: Edge) -> Region:
    """Successor of a region closure through the closed edge, as a region whose
    closure is exactly the successor set."""
    from .dbm import language_class
    src_r = a.regions[edge.src]
    if not set(region.vertices()) <= set(src_r.vertices()):
        raise TAError("region is not included in the closure of the edge's source region")
    dst_r = a.regions[edge.dst]
    hit = {v2 for v2 in dst_r.vertices()
           if any(not language_class(a, [edge], v1, v2).empty
                  for v1 in region.vertices())}
    if not hit:
        raise TAError("empty successor; region-split edges are never vacuous")
    return _face_region(hit, a.bound)


def closed_predecessor(a: RegionSplitAutomaton, region: Region, edge: Edge) -> Region:
    from .dbm import language_class
    dst_r = a.regions[edge.dst]
    if not set(region.vertices()) <= set(dst_r.vertices()):
        raise TAError("region is not included in the closure of the edge's target region")
    src_r = a.regions[edge.src]
    hit = {v1 for v1 in src_r.vertices()
           if any(not language_class(a, [edge], v1, v2).empty
                  for v2 in region.vertices())}
    if not hit:
        raise TAError("empty predecessor; region-split edges are never vacuous")
    return _face_region(hit, a.bound)


# -- region expressions (serialization) ------------------------------------------


def region_expr_text(a, region: Region) -> str:
    clocks = a.clocks
    atoms: list[str] = []
    zero = region.zero_fraction
    for i, name in enumerate(clocks):
        ip = region.int_part[i]
        if ip is None:
            atoms.append(f"{name}>{region.bound}")
        else:
            atoms.append(f"⌊{name}⌋={ip}")
            if i in zero:
                atoms.append(f"frac({name})=0")
    for block in region.positive_blocks:
        ordered = sorted(block)
        for i, j in zip(ordered, ordered[1:]):
            atoms.append(f"frac({clocks[i]})=frac({clocks[j]})")
    pos = region.positive_blocks
    for b1, b2 in zip(pos, pos[1:]):
        atoms.append(f"frac({clocks[min(b1)]})<frac({clocks[min(b2)]})")
    return ", ".join(atoms)


def _parse_region_expr(expr: str, clocks: tuple[str, ...], bound_hint: int) -> Region:
    import re
    idx = {c: i for i, c in enumerate(clocks)}
    ints: dict[int, int] = {}
    above: set[int] = set()
    zero: set[int] = set()
    equal: list[tuple[int, int]] = []
    less: list[tuple[int, int]] = []
    bound = bound_hint
    for raw in expr.split(","):
        atom = raw.strip().replace(" ", "")
        if not atom:
            continue
        m = re.fullmatch(r"⌊(\w+)⌋=(\d+)|floor\((\w+)\)=(\d+)", atom)
        if m:
            c = m.group(1) or m.group(3)
            k = int(m.group(2) or m.group(4))
            ints[idx[c]] = k
            bound = max(bound, k)
            continue
        m = re.fullmatch(r"(\w+)>(\d+|M)", atom)
        if m:
            c = m.group(1)
            above.add(idx[c])
            if m.group(2) != "M":
                bound = max(bound, int(m.group(2)))
            continue
        m = re.fullmatch(r"frac\((\w+)\)=0", atom)
        if m:
            zero.add(idx[m.group(1)])
            continue
        m = re.fullmatch(r"frac\((\w+)\)=frac\((\w+)\)", atom)
        if m:
            equal.append((idx[m.group(1)], idx[m.group(2)]))
            continue
        m = re.fullmatch(r"frac\((\w+)\)<frac\((\w+)\)", atom)
        if m:
            less.append((idx[m.group(1)], idx[m.group(2)]))
            continue
        raise TAError(f"bad region atom {raw.strip()!r}")
    bounded = set(ints) - above
    for i in bounded:
        if i not in zero and ints[i] + 1 > bound:
            bound = ints[i] + 1
    # union-find over equal fractional parts
    parent = {i: i for i in bounded if i not in zero}
    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i
    for i, j in equal:
        if i in parent and j in parent:
            parent[find(i)] = find(j)
    groups: dict[int, set[int]] = {}
    for i in parent:
        groups.setdefault(find(i), set()).add(i)
    order: dict[frozenset[int], set[frozenset[int]]] = {}
    blocks = {find(i): frozenset(groups[find(i)]) for i in parent}
    uniq = sorted(set(blocks.values()), key=min)
    before: dict[frozenset[int], set[frozenset[int]]] = {b: set() for b in uniq}
    for i, j in less:
        if i in parent and j in parent:
            before[blocks[find(j)]].add(blocks[find(i)])
    ordered: list[frozenset[int]] = []
    remaining = list(uniq)
    while remaining:
        ready = [b for b in remaining if before[b] <= set(ordered)]
        if not ready:
            raise TAError("region expression does not totally order the fractional parts")
        ready.sort(key=min)
        b = ready[0]
        ordered.append(b)
        remaining.remove(b)
    frac_blocks = ((frozenset(zero),) if zero else ()) + tuple(ordered)
    int_part = tuple(None if i in above else ints.get(i, 0) for i in range(len(clocks)))
    return Region(bound, int_part, frac_blocks, bool(zero))


def attach_starting_regions(ta: TimedAutomaton, lines: dict[str, str]) -> RegionSplitAutomaton:
    """Rebuild a region-split automaton from parsed `starting` lines."""
    if set(lines) != set(ta.locations):
        raise TAError("starting lines must cover every location exactly once")
    bound = ta.max_constant
    regions = {}
    for loc, expr in lines.items():
        regions[loc] = _parse_region_expr(expr, ta.clocks, 0)
    bound = max([bound] + [r.bound for r in regions.values()])
    regions = {loc: Region(bound, r.int_part, r.frac_blocks, r.zero_first)
               for loc, r in regions.items()}
    return RegionSplitAutomaton(
        ta.name, ta.clocks, ta.alphabet, ta.locations, ta.edges,
        dict(ta.initial), dict(ta.accepting), {},
        regions=regions,
        provenance={q: Provenance(q, frozenset(), regions[q]) for q in ta.locations},
        bound=bound)
