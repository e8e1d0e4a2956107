"""``lpa`` command line: graph file in, deterministic JSON report out."""
from __future__ import annotations

import argparse
import json
import sys

from .algebra import algebra_of, nilpotency_index
from .decision import (
    count_json,
    cross_check_via_ideals,
    cycle_json,
    exit_json,
    full_report,
    graph_json,
    ideal_table,
)
from .errors import CapExceeded, ParseError, UnsupportedGraph
from .graph import (
    classify_vertices,
    cycles,
    is_acyclic,
    max_path_length,
    path_count,
    path_stats,
    satisfies_condition_K,
)
from .ideals import default_cap, maximal_tails
from .parsing import evaluate, expand, load_graph, parse_expr
from .structure import decompose, matrix_nilpotency_index, represent, verify_homomorphism

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_PARSE, EXIT_CAP, EXIT_UNSUPPORTED = 0, 2, 3, 4


def _terms_json(a) -> list:
    return [
        {"alpha": list(m.alpha), "beta": list(m.beta), "vertex": m.vertex, "coeff": str(c)}
        for m, c in a.sorted_terms()
    ]


def cmd_analyze(g, args) -> dict:
    stats = path_stats(g)
    classes = classify_vertices(g)
    return {
        "vertices": {
            "sinks": sorted(classes.sinks),
            "regular": sorted(classes.regular),
            "infinite_emitters": sorted(classes.infinite_emitters),
        },
        "path_stats": {
            "q1": stats.q1,
            "q2": count_json(stats.q2),
            "q2_infinite": stats.q2_infinite,
            "max_path_length": max_path_length(g),
            "paths_ending_at": {v: count_json(path_count(g, v)) for v in g.sorted_vertices},
        },
        "acyclic": is_acyclic(g),
        "cycles": [dict(cycle_json(c), exits=[exit_json(x) for x in exits]) for c, exits in cycles(g)],
        "condition_k": satisfies_condition_K(g),
        "maximal_tails": [sorted(M) for M in maximal_tails(g, args.cap)],
    }


def cmd_decide(g, args) -> dict:
    return full_report(g, args.cap)


def cmd_decompose(g, args) -> dict:
    report = decompose(g)
    check = None
    if report.applicable:
        check = verify_homomorphism(g, trials=args.trials, seed=args.seed)
    return {"decomposition": report.to_json(), "homomorphism_check": check}


def cmd_ideals(g, args) -> dict:
    return {"graded_prime_ideals": ideal_table(g, args.cap)}


def cmd_eval(g, args) -> dict:
    expr = parse_expr(g, args.expr)
    alg = algebra_of(g)
    a = alg.normal_form(expand(expr, g))
    comps = a.degree_components()
    return {
        "expression": args.expr,
        "normal_form": str(a),
        "terms": _terms_json(a),
        "degree_components": {str(d): str(comps[d]) for d in sorted(comps)},
    }


def cmd_nilindex(g, args) -> dict:
    expr = parse_expr(g, args.expr)
    a = evaluate(expr, g)
    k = nilpotency_index(a, args.bound)
    matrix = None
    if decompose(g).applicable:
        matrix = matrix_nilpotency_index(represent(g, a))
    return {"expression": args.expr, "bound": args.bound, "nilpotency_index": k, "matrix_index": matrix}


def cmd_crosscheck(g, args) -> dict:
    return cross_check_via_ideals(g, args.cap)


COMMANDS = {
    "analyze": cmd_analyze,
    "decide": cmd_decide,
    "decompose": cmd_decompose,
    "ideals": cmd_ideals,
    "eval": cmd_eval,
    "nilindex": cmd_nilindex,
    "crosscheck": cmd_crosscheck,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="graph file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=None, help="enumeration cap on vertices (default 20, or LPA_CAP)")
    common.add_argument("--pretty", action="store_true")

    parser = argparse.ArgumentParser(prog="lpa", description="Ring properties of Leavitt path algebras, decided on the graph.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="path counts, cycles, Condition (K), maximal tails")
    sub.add_parser("decide", parents=[common], help="verdicts with evidence")
    p = sub.add_parser("decompose", parents=[common], help="matrix decomposition with a homomorphism check")
    p.add_argument("--trials", type=int, default=50)
    sub.add_parser("ideals", parents=[common], help="graded prime ideals and quotient classes")
    p = sub.add_parser("eval", parents=[common], help="normal form of an expression")
    p.add_argument("-e", "--expr", required=True)
    p = sub.add_parser("nilindex", parents=[common], help="index of nilpotence up to a bound")
    p.add_argument("-e", "--expr", required=True)
    p.add_argument("--bound", type=int, required=True)
    sub.add_parser("crosscheck", parents=[common], help="compare graph criteria with the ideal route")
    return parser


def dumps(obj, pretty: bool) -> str:
    if pretty:
        return json.dumps(obj, indent=2)
    return json.dumps(obj, separators=(",", ":"))


def run(argv=None) -> tuple:
    """Execute one command; returns ``(exit_code, stdout_text)``."""
    args = build_parser().parse_args(argv)
    if args.cap is None:
        args.cap = default_cap()
    pretty = args.pretty
    try:
        g = load_graph(args.file)
        results = COMMANDS[args.command](g, args)
    except ParseError as exc:
        return EXIT_PARSE, _error("parse_error", exc, pretty)
    except OSError as exc:
        return EXIT_PARSE, _error("parse_error", exc, pretty)
    except CapExceeded as exc:
        return EXIT_CAP, _error("cap_exceeded", exc, pretty)
    except UnsupportedGraph as exc:
        return EXIT_UNSUPPORTED, _error("unsupported", exc, pretty)
    out = {"schema_version": SCHEMA_VERSION, "graph": graph_json(g), "results": results}
    return EXIT_OK, dumps(out, pretty)


def _error(kind: str, exc: Exception, pretty: bool) -> str:
    return dumps({"schema_version": SCHEMA_VERSION, "error": {"kind": kind, "message": str(exc)}}, pretty)


def main(argv=None) -> int:
    code, text = run(argv)
    print(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
