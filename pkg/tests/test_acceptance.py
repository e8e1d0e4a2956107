"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``python3 tests/test_acceptance.py`` or ``pytest tests/test_acceptance.py``.
"""
import json
import os
import random
import subprocess
import sys
from pathlib import Path

import pytest

from exprgen import random_expr
from leavitt.algebra import dim_over_K, nilpotency_index, normal_form
from leavitt.decision import (
    cross_check_via_ideals,
    decide_bounded_index,
    decide_directly_finite,
    decide_sigma_v,
    decide_von_neumann_regular,
    direct_finiteness_witness,
)
from leavitt.fixtures import clock, finite_fixtures, fixtures, random_graph
from leavitt.graph import cycles, is_acyclic, no_cycle_has_exit, simple_paths_ending_at
from leavitt.ideals import classify_quotient, graded_prime_ideals, is_hereditary, is_saturated, maximal_tails
from leavitt.parsing import evaluate, expand
from leavitt.structure import decompose, random_nilpotent, represent, matrix_nilpotency_index, shift_element, verify_homomorphism

GRAPHS = Path(__file__).parent / "graphs"


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


def verdict_row(g):
    def val(v):
        return v.bound if v.holds and v.bound is not None else v.holds

    return (
        decide_von_neumann_regular(g).holds,
        decide_directly_finite(g).holds,
        val(decide_bounded_index(g)),
        val(decide_sigma_v(g)),
    )


def expected_table():
    T, F = True, False
    table = {f"line{n}": (T, T, n, n) for n in range(1, 7)}
    table["loop"] = (F, T, 1, F)
    table["toeplitz"] = (F, F, F, F)
    table.update({f"rose{k}": (F, T, k + 1, F) for k in range(1, 5)})
    table.update({f"clock{k}": (T, T, 2, 2) for k in range(1, 7)})
    table["twocycles"] = (F, F, F, F)
    return table


def test_criterion_1_verdict_table(report):
    fx = fixtures()
    wrong = {}
    for name, want in expected_table().items():
        got = verdict_row(fx[name])
        # bools and ints compare loosely in Python; compare types too
        if got != want or [type(x) for x in got] != [type(x) for x in want]:
            wrong[name] = (got, want)
    report(1, not wrong, f"{len(expected_table())} fixtures, mismatches: {wrong or 'none'}")


def test_criterion_2_bounded_index_vs_ideals(report):
    rng = random.Random(20240)
    bad = []
    holds = 0
    for i in range(10_000):
        g = random_graph(rng, max_vertices=8, max_edges=12)
        direct = decide_bounded_index(g)
        sec = cross_check_via_ideals(g)["bounded_index"]
        holds += direct.holds
        if (direct.holds, direct.bound) != (sec["ideals"]["holds"], sec["ideals"]["bound"]):
            bad.append((i, str(g)))
    report(2, not bad, f"10000 graphs ({holds} with bounded index), discrepancies: {len(bad)} {bad[:3]}")


def test_criterion_3_oracle_attainment(report):
    problems = []
    checked = []
    for name, g in sorted(finite_fixtures().items()):
        v = decide_bounded_index(g)
        if not v.holds:
            continue
        n = v.bound
        r = decompose(g)
        blocks = r.sink_blocks + r.cycle_blocks
        base = max(blocks, key=lambda b: (b[1], b[0]))[0]
        s = shift_element(g, base)
        if nilpotency_index(s, n + 1) != n:
            problems.append((name, "shift index"))
        if matrix_nilpotency_index(represent(g, s)) != n:
            problems.append((name, "matrix index"))
        rng = random.Random(name)
        for _ in range(1000):
            x = random_nilpotent(g, rng)
            if not (x ** n).is_zero():
                problems.append((name, str(x)))
                break
        checked.append(f"{name}={n}")
    report(3, not problems and bool(checked), f"{len(checked)} fixtures, 1000 nilpotents each; problems: {problems or 'none'}")


def test_criterion_4_direct_finiteness_witness(report):
    bad = []
    seen = []
    for name, g in sorted(finite_fixtures().items()):
        for c, exits in cycles(g):
            for f in exits:
                w = direct_finiteness_witness(g, c, f)
                ok = w["ab_equals_u"] and not w["ba_equals_u"] and w["exit_star_times_ba"] == "0"
                seen.append(f"{name}:{'.'.join(c.edges)}/{f}")
                if not ok:
                    bad.append((name, w))
    want = {"toeplitz", "twocycles", "double_loop"}
    covered = {s.split(":")[0] for s in seen}
    report(4, not bad and covered == want, f"witnesses {seen}; failures: {bad or 'none'}")


def test_criterion_5_homomorphism(report):
    results = {}
    for name, g in sorted(finite_fixtures().items()):
        if no_cycle_has_exit(g):
            results[name] = verify_homomorphism(g, trials=500, seed=5)
    failed = {n: r["counterexample"] for n, r in results.items() if not r["passed"]}
    report(5, not failed and len(results) > 0, f"{len(results)} fixtures x 500 pairs; failures: {failed or 'none'}")


def test_criterion_6_dimension_law(report):
    bad = {}
    count = 0
    for name, g in sorted(finite_fixtures().items()):
        if not is_acyclic(g):
            continue
        count += 1
        sizes = [len(simple_paths_ending_at(g, w).paths) for w in g.vertices if g.is_sink(w)]
        want = sum(n * n for n in sizes)
        got = dim_over_K(g)
        if got != want:
            bad[name] = (got, want)
    fx = fixtures()
    named = (dim_over_K(fx["star2"]), dim_over_K(fx["single_edge"]))
    report(6, not bad and named == (8, 4), f"{count} acyclic fixtures, star2/single_edge = {named}; mismatches: {bad or 'none'}")


def test_criterion_7_confluence(report):
    bad = []
    total = 0
    for name, g in sorted(finite_fixtures().items()):
        rng = random.Random(f"confluence-{name}")
        for i in range(1000):
            x = random_expr(g, rng)
            raw = expand(x, g)
            left = normal_form(g, raw, "leftmost")
            others = [
                normal_form(g, raw, "rightmost"),
                normal_form(g, raw, "random", random.Random(i)),
                evaluate(x, g),
            ]
            total += 1
            if any(y != left for y in others):
                bad.append((name, i))
    report(7, not bad, f"{total} expressions x 3 strategies; mismatches: {len(bad)} {bad[:3]}")


def test_criterion_8_clock3_ideals(report):
    g = clock(3)
    ideals = graded_prime_ideals(g)
    sinks = sorted(v for v in g.vertices if g.is_sink(v))
    want = {frozenset(sinks) - {w} for w in sinks}
    sink_complement = [p for p in ideals if p.pair.H in want and p.form == "FullBH"]
    classes = [classify_quotient(g, p) for p in sink_complement]
    ok_ideals = len(sink_complement) == 3 and all((c.kind, c.t) == ("MatK", 2) for c in classes)
    tails = maximal_tails(g)
    ok_tails = bool(tails) and all(
        is_hereditary(g, g.vertices - M) and is_saturated(g, g.vertices - M) for M in tails
    )
    extra = len(ideals) - len(sink_complement)
    report(8, ok_ideals and ok_tails, f"{len(ideals)} graded primes ({extra} beyond the sink complements), {len(tails)} tails with hereditary saturated complements")


_DETERMINISM_SCRIPT = r"""
import hashlib, json, sys
from pathlib import Path
from leavitt.cli import run
graphs = Path(sys.argv[1])
out = []
for path in sorted(graphs.glob("*.graph")):
    text = path.read_text()
    first = [l.split()[1] for l in text.splitlines() if l.startswith("edge ")] or \
            [l.split()[1] for l in text.splitlines() if l.startswith("vertex ")]
    expr = first[0]
    for argv in (["analyze"], ["decide"], ["decompose", "--trials", "20"], ["ideals"],
                 ["eval", "-e", expr + " + " + expr + "*"], ["nilindex", "-e", expr, "--bound", "4"],
                 ["crosscheck"]):
        code, text_out = run(argv[:1] + [str(path)] + argv[1:] + ["--seed", "7"])
        out.append([path.stem, argv[0], code, hashlib.sha256(text_out.encode()).hexdigest()])
print(json.dumps(out))
"""


def test_criterion_9_cli_determinism(report):
    runs = []
    for hashseed in ("1", "2", "3"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        proc = subprocess.run(
            [sys.executable, "-c", _DETERMINISM_SCRIPT, str(GRAPHS)],
            capture_output=True, text=True, env=env, check=True,
        )
        runs.append(json.loads(proc.stdout))
    pairs = len(runs[0])
    differing = [a[:2] for a, b, c in zip(*runs) if not (a == b == c)]
    ok = pairs == 7 * len(fixtures()) and not differing
    report(9, ok, f"{pairs} (fixture, command) pairs x 3 processes; differing: {differing or 'none'}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
