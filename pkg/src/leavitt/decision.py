"""Graph-side decision procedures for ring properties of L(E), each with the
graph objects that witness the verdict."""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import GHOST, REAL, VERTEX, algebra_of, raw_letter, raw_mul
from .graph import (
    OMEGA,
    Cycle,
    Graph,
    OmegaBundle,
    cycles,
    first_cycle_with_exit,
    infinite_count_vertices,
    is_acyclic,
    omega_cycle_bundles,
    path_count,
    path_stats,
)
from .ideals import classify_quotient, graded_prime_ideals, quotient_graph
from .structure import decompose

VON_NEUMANN_REGULAR = "VonNeumannRegular"
DIRECTLY_FINITE = "DirectlyFinite"
BOUNDED_INDEX = "BoundedIndex"
SIGMA_V = "SigmaV"
GRADED_SIGMA_V_IMPLIED = "GradedSigmaVImplied"


@dataclass
class Verdict:
    property: str
    holds: bool
    bound: int | None = None
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"property": self.property, "holds": self.holds, "bound": self.bound, "evidence": self.evidence}


def count_json(t):
    if t is None:
        return None
    return "omega" if t == OMEGA else t


def cycle_json(c: Cycle) -> dict:
    return {"base": c.base, "edges": list(c.edges)}


def exit_json(x) -> object:
    if isinstance(x, OmegaBundle):
        return {"omega": [x.source, x.range]}
    return x


def graph_json(g: Graph) -> dict:
    return {
        "vertices": list(g.sorted_vertices),
        "edges": [{"id": e.id, "source": e.source, "range": e.range} for e in g.edges],
        "omega": [[b.source, b.range] for b in sorted(g.omega_bundles)],
    }


def _cycle_obstruction(g: Graph) -> dict | None:
    """Evidence that some cycle has an exit, or ``None``."""
    hit = first_cycle_with_exit(g)
    if hit is not None:
        c, exits = hit
        return {"reason": "cycle has exit", "cycle": cycle_json(c), "exits": [exit_json(x) for x in exits]}
    bundles = omega_cycle_bundles(g)
    if bundles:
        b = bundles[0]
        return {"reason": "omega bundle lies on a closed path", "omega": [b.source, b.range]}
    return None


def decide_von_neumann_regular(g: Graph) -> Verdict:
    if is_acyclic(g):
        return Verdict(VON_NEUMANN_REGULAR, True, evidence={"reason": "graph is acyclic"})
    cs = cycles(g)
    if cs:
        return Verdict(VON_NEUMANN_REGULAR, False, evidence={"reason": "graph has a cycle", "cycle": cycle_json(cs[0][0])})
    b = omega_cycle_bundles(g)[0]
    return Verdict(VON_NEUMANN_REGULAR, False, evidence={"reason": "omega bundle lies on a closed path", "omega": [b.source, b.range]})


def _rotate(g: Graph, c: Cycle, start: str) -> tuple:
    k = c.vertices.index(start)
    return c.edges[k:] + c.edges[:k]


def direct_finiteness_witness(g: Graph, c: Cycle, f: str) -> dict:
    """Check ``c* c = v``, ``c c* != v`` and ``f* c c* = 0`` for the cycle
    ``c`` rotated to start at ``v = s(f)``; the exit ``f`` shows ``c c* != v``
    because ``f* v = f*`` is nonzero."""
    alg = algebra_of(g)
    v = g.edge[f].source
    path = _rotate(g, c, v)
    raw_c = {tuple((REAL, e) for e in path): 1}
    raw_cs = {tuple((GHOST, e) for e in reversed(path)): 1}
    raw_fs = raw_letter(g, f, starred=True)
    vertex = alg.vertex(v)
    cs_c = alg.normal_form(raw_mul(raw_cs, raw_c))
    c_cs = alg.normal_form(raw_mul(raw_c, raw_cs))
    fs_c_cs = alg.normal_form(raw_mul(raw_fs, raw_mul(raw_c, raw_cs)))
    fs_v = alg.normal_form(raw_mul(raw_fs, {((VERTEX, v),): 1}))
    return {
        "a": " ".join(e + "*" for e in reversed(path)),
        "b": " ".join(path),
        "u": v,
        "exit": f,
        "ab": str(cs_c),
        "ba": str(c_cs),
        "ab_equals_u": cs_c == vertex,
        "ba_equals_u": c_cs == vertex,
        "exit_star_times_ba": str(fs_c_cs),
        "exit_star_times_u": str(fs_v),
    }


def decide_directly_finite(g: Graph) -> Verdict:
    obstruction = _cycle_obstruction(g)
    if obstruction is None:
        return Verdict(DIRECTLY_FINITE, True, evidence={"reason": "no cycle has an exit"})
    hit = first_cycle_with_exit(g)
    if hit is not None and not g.has_omega:
        c, exits = hit
        named = [x for x in exits if not isinstance(x, OmegaBundle)]
        obstruction["witness"] = direct_finiteness_witness(g, c, named[0])
    else:
        obstruction["witness"] = None
    return Verdict(DIRECTLY_FINITE, False, evidence=obstruction)


def _infinite_vertex_evidence(g: Graph) -> dict:
    v = sorted(infinite_count_vertices(g))[0]
    return {"reason": "infinitely many paths end at a vertex", "vertex": v}


def decide_bounded_index(g: Graph) -> Verdict:
    obstruction = _cycle_obstruction(g)
    if obstruction is not None:
        return Verdict(BOUNDED_INDEX, False, evidence=obstruction)
    stats = path_stats(g)
    if stats.q2_infinite:
        return Verdict(BOUNDED_INDEX, False, evidence=_infinite_vertex_evidence(g))
    attained = next(v for v in g.sorted_vertices if path_count(g, v) == stats.q2)
    return Verdict(
        BOUNDED_INDEX,
        True,
        stats.q2,
        {"max_vertices_on_path": stats.q1, "max_paths_ending_at_vertex": stats.q2, "attained_at": attained},
    )


def decide_sigma_v(g: Graph) -> Verdict:
    if not is_acyclic(g):
        ev = decide_von_neumann_regular(g).evidence
        return Verdict(SIGMA_V, False, evidence=ev)
    stats = path_stats(g)
    if stats.q2_infinite:
        return Verdict(SIGMA_V, False, evidence=_infinite_vertex_evidence(g))
    longest = stats.q1 - 1
    d = max(longest, stats.q2)
    return Verdict(
        SIGMA_V,
        True,
        d,
        {"max_path_length": longest, "max_paths_ending_at_vertex": stats.q2, "every_path_ends_at_sink": True},
    )


def ideal_table(g: Graph, cap: int | None = None) -> list:
    rows = []
    for ideal in graded_prime_ideals(g, cap):
        cls = classify_quotient(g, ideal)
        q = quotient_graph(g, ideal.pair)
        rows.append(
            {
                "H": sorted(ideal.pair.H),
                "S": sorted(ideal.pair.S),
                "form": ideal.form,
                "u": ideal.u,
                "tail": sorted(g.vertices - ideal.pair.H),
                "quotient": {"kind": cls.kind, "t": count_json(cls.t)},
                "quotient_graph": graph_json(q),
            }
        )
    return rows


def cross_check_via_ideals(g: Graph, cap: int | None = None) -> dict:
    """Recompute bounded index and Sigma-V from the graded prime quotients
    and compare with the direct graph criteria."""
    ideals = graded_prime_ideals(g, cap)
    classes = [classify_quotient(g, p) for p in ideals]
    finite = all(c.finite for c in classes)
    top = max((c.t for c in classes), default=None) if finite else None
    bi_holds = bool(classes) and finite
    sv_holds = bi_holds and is_acyclic(g) and all(c.kind == "MatK" for c in classes)

    bi = decide_bounded_index(g)
    sv = decide_sigma_v(g)

    def section(v: Verdict, holds: bool) -> dict:
        bound = top if holds else None
        return {
            "graph": {"holds": v.holds, "bound": v.bound},
            "ideals": {"holds": holds, "bound": bound},
            "agree": v.holds == holds and v.bound == bound,
        }

    bi_sec = section(bi, bi_holds)
    sv_sec = section(sv, sv_holds)
    return {
        "bounded_index": bi_sec,
        "sigma_v": sv_sec,
        "ideal_count": len(ideals),
        "quotients": [{"kind": c.kind, "t": count_json(c.t)} for c in classes],
        "agree": bi_sec["agree"] and sv_sec["agree"],
    }


def full_report(g: Graph, cap: int | None = None) -> dict:
    vnr = decide_von_neumann_regular(g)
    df = decide_directly_finite(g)
    bi = decide_bounded_index(g)
    sv = decide_sigma_v(g)
    implied = Verdict(
        GRADED_SIGMA_V_IMPLIED,
        bi.holds,
        evidence={
            "from": BOUNDED_INDEX,
            "note": "bounded index implies graded Sigma-V; the converse fails, e.g. for M_inf(K[x,1/x])",
        },
    )
    stats = path_stats(g)
    return {
        "von_neumann_regular": vnr.to_json(),
        "directly_finite": df.to_json(),
        "bounded_index": bi.to_json(),
        "sigma_v": sv.to_json(),
        "graded_sigma_v_implied": implied.to_json(),
        "path_stats": {"q1": stats.q1, "q2": stats.q2, "q2_infinite": stats.q2_infinite},
        "decomposition": decompose(g).to_json(),
        "ideals": ideal_table(g, cap),
    }
