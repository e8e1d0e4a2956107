"""Finite directed multigraphs and the path/cycle combinatorics over them.

A graph has named vertices, named edges and optional *omega bundles*: a pair
``(u, w)`` standing for countably many parallel edges from ``u`` to ``w``.
Bundles have no individual edge names, so they never appear inside a
:class:`Path`; they do count for reachability, exits and vertex types.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import GraphError

OMEGA = math.inf
"""Cardinality marker for countably infinite counts."""


class Edge(NamedTuple):
    id: str
    source: str
    range: str


class OmegaBundle(NamedTuple):
    source: str
    range: str


@dataclass(frozen=True)
class Path:
    """A composable edge sequence; ``edges == ()`` is the trivial path at ``source``."""

    source: str
    range: str
    edges: tuple[str, ...] = ()

    def __len__(self):
        return len(self.edges)

    def __str__(self):
        return " ".join(self.edges) if self.edges else self.source

    def sort_key(self):
        return (len(self.edges), self.edges, self.source)


@dataclass(frozen=True)
class Cycle:
    """A closed path with pairwise distinct sources, rotated to start at its
    lexicographically smallest vertex."""

    base: str
    edges: tuple[str, ...]
    vertices: tuple[str, ...]

    def __len__(self):
        return len(self.edges)

    def __str__(self):
        return " ".join(self.edges)


class PathsEndingAt(NamedTuple):
    paths: list
    infinite_count: bool


class PathStats(NamedTuple):
    q1: int
    q2: int
    q2_infinite: bool


class VertexClasses(NamedTuple):
    sinks: frozenset
    regular: frozenset
    infinite_emitters: frozenset


@dataclass(frozen=True)
class Graph:
    vertices: frozenset
    edges: tuple = ()
    omega_bundles: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.vertices:
            raise GraphError("graph must have at least one vertex")
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if e.id in self.vertices:
                raise GraphError(f"edge id {e.id!r} collides with a vertex id")
            seen.add(e.id)
            for end in (e.source, e.range):
                if end not in self.vertices:
                    raise GraphError(f"edge {e.id!r} uses undeclared vertex {end!r}")
        for b in self.omega_bundles:
            for end in b:
                if end not in self.vertices:
                    raise GraphError(f"omega bundle {b.source}->{b.range} uses undeclared vertex {end!r}")

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable = (), omega: Iterable = ()) -> "Graph":
        """Convenience constructor taking plain tuples ``(id, source, range)``
        and ``(source, range)``. Edges are stored sorted by id."""
        es = tuple(sorted((Edge(*e) for e in edges), key=lambda e: e.id))
        return cls(frozenset(vertices), es, frozenset(OmegaBundle(*b) for b in omega))

    # -- lookup tables (computed lazily, never mutated afterwards) --

    @cached_property
    def edge(self) -> dict:
        return {e.id: e for e in self.edges}

    @cached_property
    def sorted_vertices(self) -> tuple:
        return tuple(sorted(self.vertices))

    @cached_property
    def out_edges(self) -> dict:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e.id)
        return {v: tuple(sorted(ids)) for v, ids in out.items()}

    @cached_property
    def in_edges(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.range].append(e.id)
        return {v: tuple(sorted(ids)) for v, ids in inc.items()}

    @cached_property
    def omega_out(self) -> dict:
        out = {v: [] for v in self.vertices}
        for b in self.omega_bundles:
            out[b.source].append(b)
        return {v: tuple(sorted(bs)) for v, bs in out.items()}

    @cached_property
    def successors(self) -> dict:
        succ = {v: set() for v in self.vertices}
        for e in self.edges:
            succ[e.source].add(e.range)
        for b in self.omega_bundles:
            succ[b.source].add(b.range)
        return {v: frozenset(s) for v, s in succ.items()}

    @cached_property
    def descendants(self) -> dict:
        """``descendants[u]`` is the set of ``w`` with ``u >= w`` (``u`` included)."""
        result = {}
        for u in self.vertices:
            seen = {u}
            stack = [u]
            while stack:
                x = stack.pop()
                for y in self.successors[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            result[u] = frozenset(seen)
        return result

    @cached_property
    def ancestors(self) -> dict:
        anc = {v: set() for v in self.vertices}
        for u, ds in self.descendants.items():
            for w in ds:
                anc[w].add(u)
        return {v: frozenset(s) for v, s in anc.items()}

    def geq(self, u: str, w: str) -> bool:
        return w in self.descendants[u]

    def is_sink(self, v: str) -> bool:
        return not self.out_edges[v] and not self.omega_out[v]

    def is_regular(self, v: str) -> bool:
        return bool(self.out_edges[v]) and not self.omega_out[v]

    def is_infinite_emitter(self, v: str) -> bool:
        return bool(self.omega_out[v])

    @property
    def has_omega(self) -> bool:
        return bool(self.omega_bundles)

    def path(self, edges: Iterable[str], source: str | None = None) -> Path:
        """Build a :class:`Path`, checking composability."""
        edges = tuple(edges)
        if not edges:
            if source is None or source not in self.vertices:
                raise GraphError("trivial path needs a declared base vertex")
            return Path(source, source, ())
        for a, b in zip(edges, edges[1:]):
            if self.edge[a].range != self.edge[b].source:
                raise GraphError(f"edges {a!r} and {b!r} do not compose")
        return Path(self.edge[edges[0]].source, self.edge[edges[-1]].range, edges)

    def __str__(self):
        parts = [f"{e.id}:{e.source}->{e.range}" for e in self.edges]
        parts += [f"omega:{b.source}->{b.range}" for b in sorted(self.omega_bundles)]
        return f"Graph({', '.join(self.sorted_vertices)}; {', '.join(parts)})"

    @cached_property
    def _cycle_table(self) -> tuple:
        return _cycles_with_exits(self)


def classify_vertices(g: Graph) -> VertexClasses:
    sinks, regular, inf = set(), set(), set()
    for v in g.vertices:
        if g.is_infinite_emitter(v):
            inf.add(v)
        elif g.out_edges[v]:
            regular.add(v)
        else:
            sinks.add(v)
    return VertexClasses(frozenset(sinks), frozenset(regular), frozenset(inf))


def _simple_paths_into(g: Graph, v: str) -> list:
    found = []

    def extend(first: str, edges: tuple, visited: frozenset):
        found.append(Path(first, v, edges))
        for eid in g.in_edges[first]:
            s = g.edge[eid].source
            if s not in visited:
                extend(s, (eid,) + edges, visited | {s})

    extend(v, (), frozenset([v]))
    found.sort(key=Path.sort_key)
    return found


def simple_paths_ending_at(g: Graph, v: str) -> PathsEndingAt:
    """All vertex-simple paths with range ``v`` (the trivial path included),
    ordered by length and then by edge ids.

    ``infinite_count`` is set when infinitely many distinct paths end at
    ``v`` once repetition through an omega bundle or a cycle exit is allowed.
    """
    if v not in g.vertices:
        raise GraphError(f"unknown vertex {v!r}")
    return PathsEndingAt(_simple_paths_into(g, v), v in infinite_count_vertices(g))


def path_count(g: Graph, v: str):
    """Number of vertex-simple paths ending at ``v``, or ``OMEGA``."""
    res = simple_paths_ending_at(g, v)
    return OMEGA if res.infinite_count else len(res.paths)


def path_stats(g: Graph) -> PathStats:
    q1 = q2 = 0
    for v in g.sorted_vertices:
        paths = _simple_paths_into(g, v)
        q2 = max(q2, len(paths))
        q1 = max(q1, len(paths[-1]) + 1)
    return PathStats(q1, q2, bool(infinite_count_vertices(g)))


def max_path_length(g: Graph) -> int:
    """Longest vertex-simple path, in edges."""
    return path_stats(g).q1 - 1


def _enumerate_cycles(g: Graph) -> list:
    found = []
    for start in g.sorted_vertices:
        # only vertices >= start, so every cycle is found once at its smallest vertex
        def walk(x, edges, verts):
            for eid in g.out_edges[x]:
                y = g.edge[eid].range
                if y == start:
                    found.append(Cycle(start, edges + (eid,), verts))
                elif y > start and y not in verts:
                    walk(y, edges + (eid,), verts + (y,))

        walk(start, (), (start,))
    found.sort(key=lambda c: (len(c.edges), c.edges))
    return found


def _cycles_with_exits(g: Graph) -> tuple:
    result = []
    for c in _enumerate_cycles(g):
        on_cycle = set(c.edges)
        exits = []
        for x in c.vertices:
            exits.extend(eid for eid in g.out_edges[x] if eid not in on_cycle)
            exits.extend(g.omega_out[x])
        result.append((c, tuple(exits)))
    return tuple(result)


def cycles(g: Graph) -> list:
    """All cycles of ``g`` with their exits (edge ids or :class:`OmegaBundle`)."""
    return list(g._cycle_table)


def omega_cycle_bundles(g: Graph) -> list:
    """Bundles lying on a closed walk; each such walk has the other parallel
    edges of the bundle as exits."""
    return sorted(b for b in g.omega_bundles if g.geq(b.range, b.source))


def is_acyclic(g: Graph) -> bool:
    return not cycles(g) and not omega_cycle_bundles(g)


def no_cycle_has_exit(g: Graph) -> bool:
    if omega_cycle_bundles(g):
        return False
    return all(not exits for _, exits in cycles(g))


def first_cycle_with_exit(g: Graph):
    for c, exits in cycles(g):
        if exits:
            return c, exits
    return None


def infinite_count_vertices(g: Graph) -> frozenset:
    """Vertices at which infinitely many distinct paths end: everything
    reachable from an omega bundle's range or from the range of an exit of
    some cycle."""
    seeds = {b.range for b in g.omega_bundles}
    for _, exits in cycles(g):
        for x in exits:
            seeds.add(x.range if isinstance(x, OmegaBundle) else g.edge[x].range)
    out = set()
    for s in seeds:
        out |= g.descendants[s]
    return frozenset(out)


def is_downward_directed(g: Graph, M: Iterable[str]) -> bool:
    M = frozenset(M)
    for u in M:
        du = g.descendants[u] & M
        for v in M:
            if v <= u:
                continue
            if not (du & g.descendants[v]):
                return False
    return True


def _count_closed_simple_paths(g: Graph, v: str, limit: int = 2) -> int:
    """Closed paths based at ``v`` that meet ``v`` only at the ends, capped at ``limit``."""
    # interior vertices must be reachable from v and reach v without passing v
    forward = set()
    stack = [g.edge[e].range for e in g.out_edges[v] if g.edge[e].range != v]
    while stack:
        x = stack.pop()
        if x in forward:
            continue
        forward.add(x)
        stack.extend(g.edge[e].range for e in g.out_edges[x] if g.edge[e].range != v)
    backward = set()
    stack = [g.edge[e].source for e in g.in_edges[v] if g.edge[e].source != v]
    while stack:
        x = stack.pop()
        if x in backward:
            continue
        backward.add(x)
        stack.extend(g.edge[e].source for e in g.in_edges[x] if g.edge[e].source != v)
    inner = forward & backward

    loops = sum(1 for e in g.out_edges[v] if g.edge[e].range == v)
    # a cycle among the interior vertices gives infinitely many closed paths
    sub = {x: [g.edge[e].range for e in g.out_edges[x] if g.edge[e].range in inner] for x in inner}
    state = {}

    def has_cycle(x):
        state[x] = 1
        for y in sub[x]:
            if state.get(y) == 1 or (y not in state and has_cycle(y)):
                return True
        state[x] = 2
        return False

    if any(x not in state and has_cycle(x) for x in inner):
        return limit

    # count walks v -> inner* -> v in the DAG on `inner`
    memo = {}

    def to_v(x):
        if x not in memo:
            total = sum(1 for e in g.out_edges[x] if g.edge[e].range == v)
            total += sum(to_v(y) for y in sub[x])
            memo[x] = min(total, limit)
        return memo[x]

    total = loops + sum(to_v(g.edge[e].range) for e in g.out_edges[v] if g.edge[e].range in inner)
    return min(total, limit)


def on_closed_path(g: Graph) -> frozenset:
    """Vertices lying on some closed path of named edges."""
    result = set()
    for c, _ in cycles(g):
        result.update(c.vertices)
    return frozenset(result)


def satisfies_condition_K(g: Graph) -> bool:
    return all(_count_closed_simple_paths(g, v) >= 2 for v in on_closed_path(g))
