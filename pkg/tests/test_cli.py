import json
import subprocess
import sys
from pathlib import Path

import pytest

from leakyforce.cli import main, run
from leakyforce.forcing import closure
from leakyforce.graph import generate_family, parse_graph6
from leakyforce.leaks import parse_leak_string

FIXTURES = Path(__file__).parent / "fixtures"
PRISM = "E{Sw"
PAW_EDGES = "n 4\n0 1\n0 2\n1 2\n0 3\n"


@pytest.fixture
def paw_file(tmp_path):
    p = tmp_path / "paw.txt"
    p.write_text(PAW_EDGES)
    return str(p)


def ok(argv):
    code, doc, err = run(argv)
    assert code == 0, err
    assert set(doc) == {"query", "result", "stats"}
    assert "runtime_ms" in doc["stats"]
    return doc


def test_prism_word_is_the_prism():
    assert parse_graph6(PRISM) == generate_family("cartesian_product", 3)


def test_closure_verb():
    doc = ok(["closure", "--g6", "Bg", "--set", "0"])
    assert doc["result"]["final"] == [0, 1, 2]
    assert doc["result"]["process"] == ["0>1", "1>2"]
    assert doc["result"]["complete"] is True
    assert doc["query"] == {"verb": "closure", "graph6": "Bg", "set": [0], "leaks": []}


def test_check_verb_counterexample_reverifies():
    doc = ok(["check", "--g6", PRISM, "--set", "2,1,0", "--ell", "2", "--kind", "specified"])
    res = doc["result"]
    assert res["holds"] is False
    assert res["counterexample"] == {"leaks": ["a:0>3", "a:1>4"], "stalled": [0, 1, 2, 5]}
    assert doc["query"]["set"] == [0, 1, 2]
    g = parse_graph6(PRISM)
    leaks = parse_leak_string(",".join(res["counterexample"]["leaks"]), g)
    assert sorted(closure(g, {0, 1, 2}, leaks).final) == res["counterexample"]["stalled"]


def test_number_verb(paw_file):
    doc = ok(["number", "--graph", paw_file, "--ell", "1", "--kind", "vertex"])
    assert doc["result"]["value"] == 3
    assert doc["result"]["witness"] == [0, 1, 3]
    assert doc["stats"]["subsets_checked"] > 0


def test_forces_verb():
    doc = ok(["forces", "--g6", "Bg", "--set", "0,2"])
    assert doc["result"] == {"forces": ["0>1", "2>1"], "method": "blocked_closure"}
    oracle = ok(["forces", "--g6", PRISM, "--set", "0,1,2", "--oracle"])
    fast = ok(["forces", "--g6", PRISM, "--set", "0,1,2"])
    assert oracle["result"]["forces"] == fast["result"]["forces"]
    assert len(fast["result"]["forces"]) == 9
    doc = ok(["forces", "--g6", "Bg", "--set", "0", "--leaks", "v:1", "--unfiltered"])
    assert doc["result"]["forces"] == ["0>1"]


def test_pattern_verb():
    doc = ok(["pattern", "--g6", PRISM, "--arcs", "a:0>3,a:1>4,a:2>5", "--set", "0,1,2"])
    assert doc["result"]["holds"] is False
    doc = ok(["pattern", "--g6", PRISM, "--arcs", "a:0>2,a:1>2", "--number"])
    assert doc["result"] == {"value": 3, "witness": [0, 1, 2]}


def test_verify_verb():
    doc = ok(["verify", "--corpus", str(FIXTURES / "order3.g6"), "--ell-max", "2"])
    assert doc["result"]["violations"] == []
    assert doc["result"]["graphs"] == 2


def test_assert_exit_codes():
    argv = ["check", "--g6", PRISM, "--set", "0,1,2", "--ell", "2", "--kind", "specified"]
    assert run(argv)[0] == 0
    assert run(argv + ["--assert"])[0] == 1
    assert run(["check", "--g6", "Bg", "--set", "0,1,2", "--ell", "1", "--kind", "vertex", "--assert"])[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["closure", "--g6", "B", "--set", "0"],
        ["closure", "--g6", "Bg", "--set", "7"],
        ["closure", "--g6", "Bg", "--set", "x"],
        ["closure", "--g6", "Bg", "--set", "0", "--leaks", "a:0>0"],
        ["closure", "--g6", "Bg", "--set", "0", "--leaks", "e:0-2"],
        ["closure", "--graph", "/nonexistent/file", "--set", "0"],
        ["closure", "--set", "0"],
        ["verify", "--corpus", "/nonexistent", "--ell-max", "1"],
        ["verify", "--corpus", "x", "--ell-max", "0"],
    ],
)
def test_input_errors(argv):
    code, doc, err = run(argv)
    assert code == 2 and doc is None and err


def test_resource_error_exit():
    code, doc, err = run(["forces", "--g6", "Bg", "--set", "0", "--oracle", "--state-cap", "1"])
    assert code == 3 and doc is None and "cap" in err


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["closure", "--g6", "Bg", "--graph", "x", "--set", "0"])
    assert exc.value.code == 2


def _strip(doc):
    doc = json.loads(json.dumps(doc))
    doc["stats"].pop("runtime_ms")
    return json.dumps(doc, indent=2)


@pytest.mark.parametrize(
    "argv",
    [
        ["number", "--g6", PRISM, "--ell", "1", "--kind", "mixed"],
        ["pattern", "--g6", PRISM, "--arcs", "a:0>3,a:1>4", "--number"],
        ["closure", "--g6", PRISM, "--set", "0,1,3", "--leaks", "e:0-3"],
    ],
)
def test_output_stable_across_runs_and_workers(argv):
    docs = {_strip(ok(argv + ["--workers", str(w)])) for w in (1, 4, 1)}
    assert len(docs) == 1


def test_main_prints_json(capsys):
    assert main(["closure", "--g6", "Bg", "--set", "0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"]["white"] == []
    assert main(["closure", "--g6", "B", "--set", "0"]) == 2
    assert "error" in capsys.readouterr().err


def test_stdin_and_module_entry():
    out = subprocess.run(
        [sys.executable, "-m", "leakyforce", "closure", "--graph", "-", "--set", "1,3"],
        input=PAW_EDGES, capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["result"]["final"] == [0, 1, 2, 3]
