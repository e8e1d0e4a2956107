"""Hereditary saturated sets, admissible pairs, quotient graphs and the
graded prime ideals of a Leavitt path algebra, all computed on the graph."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import CapExceeded, GraphError
from .graph import (
    OMEGA,
    Edge,
    Graph,
    OmegaBundle,
    cycles,
    is_downward_directed,
    path_count,
)

DEFAULT_CAP = 20


def default_cap() -> int:
    """Enumeration cap, overridable through ``LPA_CAP``."""
    env = os.environ.get("LPA_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_CAP


def _check_cap(g: Graph, cap):
    cap = default_cap() if cap is None else cap
    if len(g.vertices) > cap:
        raise CapExceeded(f"graph has {len(g.vertices)} vertices, enumeration cap is {cap}")


def _set_key(s):
    return (len(s), tuple(sorted(s)))


@dataclass(frozen=True)
class AdmissiblePair:
    H: frozenset
    S: frozenset = frozenset()

    def __str__(self):
        return f"({{{', '.join(sorted(self.H))}}}, {{{', '.join(sorted(self.S))}}})"


@dataclass(frozen=True)
class GradedPrimeIdeal:
    """``form`` is ``"FullBH"`` for I(H, B_H) or ``"BHminus"`` for I(H, B_H \\ {u})."""

    pair: AdmissiblePair
    form: str
    u: str | None = None

    def sort_key(self):
        return (_set_key(self.pair.H), self.form, self.u or "")


class QuotientClass(NamedTuple):
    kind: str  # "MatK", "MatLaurent" or "Other"
    t: object  # positive int, OMEGA, or None for Other

    @property
    def finite(self) -> bool:
        return self.kind != "Other" and self.t != OMEGA


def is_hereditary(g: Graph, H: Iterable[str]) -> bool:
    H = frozenset(H)
    return all(g.descendants[v] <= H for v in H)


def is_saturated(g: Graph, H: Iterable[str]) -> bool:
    H = frozenset(H)
    for v in g.vertices - H:
        if g.is_regular(v) and all(g.edge[e].range in H for e in g.out_edges[v]):
            return False
    return True


def hereditary_saturated_closure(g: Graph, X: Iterable[str]) -> frozenset:
    H = set()
    for x in X:
        if x not in g.vertices:
            raise GraphError(f"unknown vertex {x!r}")
        H |= g.descendants[x]
    changed = True
    while changed:
        changed = False
        for v in g.sorted_vertices:
            if v in H or not g.is_regular(v):
                continue
            if all(g.edge[e].range in H for e in g.out_edges[v]):
                # v's descendants other than itself are already in H
                H.add(v)
                changed = True
    return frozenset(H)


def all_hereditary_saturated_sets(g: Graph, cap: int | None = None) -> list:
    """Every hereditary saturated subset, smallest first.

    Each such set is the closure of the union of the closures of its
    vertices, so the lattice is generated from the principal closures by
    repeated joins.
    """
    _check_cap(g, cap)
    principal = {hereditary_saturated_closure(g, [v]) for v in g.vertices}
    found = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for H in frontier:
            for P in principal:
                if P <= H:
                    continue
                J = hereditary_saturated_closure(g, H | P)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=_set_key)


def breaking_vertices(g: Graph, H: Iterable[str]) -> frozenset:
    H = frozenset(H)
    result = set()
    for w in g.vertices - H:
        if not g.is_infinite_emitter(w):
            continue
        if any(b.range not in H for b in g.omega_out[w]):
            continue
        n = sum(1 for e in g.out_edges[w] if g.edge[e].range not in H)
        if n > 0:
            result.add(w)
    return frozenset(result)


def _prime(name: str) -> str:
    return name + "'"


def quotient_graph(g: Graph, pair: AdmissiblePair) -> Graph:
    """The graph E \\ (H, S): drop H, keep edges landing outside H, and give
    each breaking vertex not in S a primed sink copy fed by primed edges."""
    H, S = pair.H, pair.S
    B = breaking_vertices(g, H)
    if not S <= B:
        raise GraphError("S must be a subset of the breaking vertices of H")
    cloned = B - S
    vertices = set(g.vertices - H) | {_prime(v) for v in cloned}
    edges = [e for e in g.edges if e.range not in H]
    edges += [Edge(_prime(e.id), e.source, _prime(e.range)) for e in g.edges if e.range in cloned]
    bundles = {b for b in g.omega_bundles if b.range not in H}
    bundles |= {OmegaBundle(b.source, _prime(b.range)) for b in g.omega_bundles if b.range in cloned}
    return Graph(frozenset(vertices), tuple(sorted(edges, key=lambda e: e.id)), frozenset(bundles))


def is_maximal_tail(g: Graph, M: Iterable[str]) -> bool:
    M = frozenset(M)
    if not M:
        return False
    for u in M:
        if not g.ancestors[u] <= M:
            return False
        emits = g.out_edges[u] or g.omega_out[u]
        if emits and not (g.successors[u] & M):
            return False
    return is_downward_directed(g, M)


def maximal_tails(g: Graph, cap: int | None = None) -> list:
    """Non-empty vertex sets that are downward directed, closed upwards, and
    in which every emitting vertex has an edge back into the set.

    The complement of a tail is hereditary and saturated, so candidates are
    taken from the hereditary saturated lattice.
    """
    tails = [g.vertices - H for H in all_hereditary_saturated_sets(g, cap)]
    return sorted((M for M in tails if is_maximal_tail(g, M)), key=_set_key)


def graded_prime_ideals(g: Graph, cap: int | None = None) -> list:
    result = []
    for M in maximal_tails(g, cap):
        H = g.vertices - M
        B = breaking_vertices(g, H)
        result.append(GradedPrimeIdeal(AdmissiblePair(H, B), "FullBH"))
        for u in sorted(B):
            if all(g.geq(v, u) for v in M):
                result.append(GradedPrimeIdeal(AdmissiblePair(H, B - {u}), "BHminus", u))
    result.sort(key=GradedPrimeIdeal.sort_key)
    return result


def classify_graph(q: Graph) -> QuotientClass:
    """Matrix type of L_K(q) for a downward directed graph ``q``."""
    sinks = [v for v in q.sorted_vertices if q.is_sink(v)]
    if sinks:
        if len(sinks) > 1:
            return QuotientClass("Other", None)
        return QuotientClass("MatK", path_count(q, sinks[0]))
    no_exit = [c for c, exits in cycles(q) if not exits]
    if len(no_exit) == 1:
        return QuotientClass("MatLaurent", path_count(q, no_exit[0].base))
    return QuotientClass("Other", None)


def classify_quotient(g: Graph, ideal: GradedPrimeIdeal) -> QuotientClass:
    return classify_graph(quotient_graph(g, ideal.pair))
