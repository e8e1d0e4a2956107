import json
import subprocess
import sys
from pathlib import Path

import pytest

from leavitt.cli import run

GRAPHS = Path(__file__).parent / "graphs"


def call(*argv):
    code, text = run([str(a) for a in argv])
    return code, json.loads(text)


def test_top_level_key_order():
    code, out = call("decide", GRAPHS / "toeplitz.graph")
    assert code == 0
    assert list(out) == ["schema_version", "graph", "results"]
    assert out["schema_version"] == "1"


def test_decide_toeplitz_witness():
    _, out = call("decide", GRAPHS / "toeplitz.graph")
    df = out["results"]["directly_finite"]
    assert df["holds"] is False
    assert df["evidence"]["witness"] == {
        "a": "e*",
        "b": "e",
        "u": "v",
        "exit": "f",
        "ab": "v",
        "ba": "v - f f*",
        "ab_equals_u": True,
        "ba_equals_u": False,
        "exit_star_times_ba": "0",
        "exit_star_times_u": "f*",
    }


def test_eval_ck2():
    code, out = call("eval", GRAPHS / "toeplitz.graph", "-e", "v - e e* - f f*")
    assert code == 0 and out["results"]["normal_form"] == "0"


def test_eval_degree_components():
    _, out = call("eval", GRAPHS / "toeplitz.graph", "-e", "e + e* + 2 f f*")
    assert out["results"]["degree_components"] == {"-1": "e*", "0": "2 f f*", "1": "e"}


def test_ideals_clock3():
    _, out = call("ideals", GRAPHS / "clock3.graph")
    rows = out["results"]["graded_prime_ideals"]
    assert [r["H"] for r in rows] == [["w1", "w2"], ["w1", "w3"], ["w2", "w3"]]
    assert all(r["quotient"] == {"kind": "MatK", "t": 2} for r in rows)


def test_omega_is_serialised_as_text():
    _, out = call("ideals", GRAPHS / "twocycles.graph")
    assert out["results"]["graded_prime_ideals"][0]["quotient"] == {"kind": "MatLaurent", "t": "omega"}
    _, out = call("analyze", GRAPHS / "omega_star.graph")
    assert out["graph"]["omega"] == [["v", "w1"]]
    assert out["results"]["path_stats"]["paths_ending_at"]["w1"] == "omega"


def test_analyze_fields():
    _, out = call("analyze", GRAPHS / "rose2.graph")
    r = out["results"]
    assert r["condition_k"] is False
    assert r["cycles"] == [{"base": "v", "edges": ["g"], "exits": []}]
    assert r["path_stats"]["q2"] == 3
    assert r["maximal_tails"] == [["u1", "u2", "v"]]


def test_decompose_with_check():
    _, out = call("decompose", GRAPHS / "rose2.graph", "--seed", 3, "--trials", 20)
    r = out["results"]
    assert r["decomposition"]["cycle_blocks"] == [{"base": "v", "size": 3}]
    assert r["homomorphism_check"]["passed"]
    _, out = call("decompose", GRAPHS / "toeplitz.graph")
    assert out["results"]["homomorphism_check"] is None


def test_nilindex():
    _, out = call("nilindex", GRAPHS / "line3.graph", "-e", "e1 + e2", "--bound", 5)
    assert out["results"]["nilpotency_index"] == 3 and out["results"]["matrix_index"] == 3
    _, out = call("nilindex", GRAPHS / "line3.graph", "-e", "v1", "--bound", 5)
    assert out["results"]["nilpotency_index"] is None


def test_crosscheck():
    _, out = call("crosscheck", GRAPHS / "rose3.graph")
    assert out["results"]["agree"] is True
    assert out["results"]["bounded_index"]["graph"] == {"holds": True, "bound": 4}


def test_exit_code_parse_error(tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("vertex v\nedge e : v -> w\n")
    code, out = call("decide", bad)
    assert code == 2 and out["error"]["kind"] == "parse_error"
    assert "line 2" in out["error"]["message"]


def test_exit_code_bad_expression():
    code, out = call("eval", GRAPHS / "toeplitz.graph", "-e", "e +")
    assert code == 2


def test_exit_code_missing_file(tmp_path):
    code, _ = call("decide", tmp_path / "nope.graph")
    assert code == 2


def test_exit_code_cap():
    code, out = call("ideals", GRAPHS / "line6.graph", "--cap", 3)
    assert code == 3 and out["error"]["kind"] == "cap_exceeded"


def test_cap_env(monkeypatch):
    monkeypatch.setenv("LPA_CAP", "2")
    code, _ = call("ideals", GRAPHS / "line3.graph")
    assert code == 3
    code, _ = call("ideals", GRAPHS / "line3.graph", "--cap", 5)
    assert code == 0


def test_exit_code_unsupported():
    code, out = call("eval", GRAPHS / "omega_star.graph", "-e", "f")
    assert code == 4 and out["error"]["kind"] == "unsupported"


def test_pretty_only_changes_whitespace():
    _, compact = run(["decide", str(GRAPHS / "clock3.graph")])
    _, pretty = run(["decide", str(GRAPHS / "clock3.graph"), "--pretty"])
    assert compact != pretty
    assert json.loads(compact) == json.loads(pretty)
    assert "".join(pretty.split()) == "".join(compact.split())


@pytest.mark.parametrize("entry", [[sys.executable, "-m", "leavitt"]])
def test_module_entry_point(entry):
    proc = subprocess.run(entry + ["decide", str(GRAPHS / "loop.graph")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["bounded_index"]["bound"] == 1
    proc = subprocess.run(entry + ["ideals", str(GRAPHS / "line3.graph"), "--cap", "1"], capture_output=True, text=True)
    assert proc.returncode == 3
