"""The command line.

Core claims:
    - the documented invocations produce the documented JSON
    - exit codes: 0 on success, 1 on verification failure, 2 on bad input
    - output bytes are identical across repeated runs
    - the measure-perturbation hook makes the product-equation check fail,
      which is how the harness proves the reference suite can fail
"""

import json

from arboreal.cli import run


def payload(argv):
    code, out = run(argv)
    assert code == 0, out
    return json.loads(out)


def test_measure_symbolic_example():
    data = payload(["measure", "--tree", "(a,b,(c,d))", "--symbolic"])
    assert data["mu"] == "t^3-4*t^2+4*t / t^4-4*t^3+6*t^2-4*t+1"
    assert data["schema"] == "arboreal/1"


def test_amalgamate_count_and_shapes():
    data = payload(["amalgamate", "--t1", "(1,2)", "--t2", "(3,4,5)", "--count"])
    assert data["count"] == 56
    data = payload(["amalgamate", "--t1", "(1,2)", "--t2", "(3,4,5)", "--by-shape"])
    assert sorted(item["count"] for item in data["by_shape"]) == [1, 6, 6, 10, 15, 18]
    # within level 3: the shape classes of sizes 15, 18, and 6 survive
    data = payload(["amalgamate", "--t1", "(1,2)", "--t2", "(3,4,5)", "--max-level", "3", "--count"])
    assert data["count"] == 39


def test_enumerate():
    data = payload(["enumerate", "--labels", "a,b,c,d"])
    assert data["count"] == 4 and len(data["trees"]) == 4
    data = payload(["enumerate", "--labels", "a,b,c,d,e", "--max-level", "3", "--count"])
    assert data["count"] == 15
    code, _ = run(["enumerate", "--labels", ",".join("abcdefgh"), "--max-labels", "7"])
    assert code == 2


def test_measure_modes_and_errors():
    data = payload(["measure", "--tree", "(a,b,c,d,e)", "--t", "4"])
    assert data["mu"] == "0"
    data = payload(["measure", "--tree", "(a,b,c)", "--level", "3"])
    assert data["mu"] == "-3/8"
    data = payload(["measure", "--sub", "(a,b,c)", "--super", "(a,b,(c,d))", "--symbolic"])
    assert data["value"] == "-t+2 / t-1"
    data = payload(["measure", "--tree", "(a,b)", "--infinity"])
    assert data["mu"] == "0"
    assert run(["measure", "--tree", "(a,a)"])[0] == 2
    assert run(["measure", "--tree", "(a,b)", "--t", "1"])[0] == 2
    assert run(["measure", "--tree", "(a,b,c,d)", "--level", "3"])[0] == 2
    assert run(["measure"])[0] == 2
    assert run(["measure", "--sub", "(a,b)"])[0] == 2


def test_algebra_operations():
    data = payload(["algebra", "gram", "--tree", "(1,2)", "--at", "3"])
    assert data["semisimple_at"]["nondegenerate"] is False
    assert data["semisimple_at"]["witness"] == "(s:1,s:2,t:1,t:2)"
    assert len(data["gram"]) == 10
    data = payload(["algebra", "gram", "--tree", "(1,2)", "--at", "7/2"])
    assert data["semisimple_at"]["nondegenerate"] is True

    data = payload(
        [
            "algebra", "compose", "--tree", "(1,2)",
            "--f", "(s:1/t:2,s:2/t:1)",
            "--g", "((s:1,t:1),(s:2,t:2))",
        ]
    )
    from arboreal.trees import parse_tree

    swapped_quartet = parse_tree("((s:1,t:2),(s:2,t:1))").canonical_key()
    assert [t["amalgamation"] for t in data["result"]["terms"]] == [swapped_quartet]

    data = payload(
        [
            "algebra", "trace", "--tree", "(1,2)",
            "--u", "((s:1,t:1),(s:2,t:2))",
            "--v", "((s:1,t:1),(s:2,t:2))",
            "--w", "((s:1,t:1),(s:2,t:2))",
        ]
    )
    assert data["triple_trees"] == 16

    b3 = json.dumps(
        [
            {"amalgamation": "((s:1,t:1),(s:2,t:2))", "coeff": "1/2"},
            {"amalgamation": "((s:1,t:2),(s:2,t:1))", "coeff": "-1/2"},
        ]
    )
    data = payload(["algebra", "minpoly", "--tree", "(1,2)", "--e", b3])
    assert data["degree"] == 3 and data["minpoly"][0] == "0"

    data = payload(["algebra", "idempotent", "--tree", "(1,2)", "--e", "(s:1/t:1,s:2/t:2)"])
    assert data["is_idempotent"] is True and data["udim_image"] == "t / t^2-2*t+1"

    assert run(["algebra", "trace", "--tree", "(1,2)"])[0] == 2
    assert run(["algebra", "minpoly", "--tree", "(1,2)", "--e", "(a,b)"])[0] == 2


def test_verify_suites():
    code, out = run(["verify", "relations", "--max-leaves", "5"])
    assert code == 0
    data = json.loads(out)
    assert data["failures"] == 0 and data["cases"] > 5
    code, out = run(["verify", "measure-axioms", "--max-leaves", "4"])
    assert code == 0 and json.loads(out)["failures"] == 0
    code, out = run(["verify", "separated", "--max-leaves", "4"])
    assert code == 0 and json.loads(out)["failures"] == 0


def test_paper_check_single_scope():
    code, out = run(["paper-check", "--scope", "sec1-census-total"])
    assert code == 0
    assert out.splitlines()[0].startswith("PASS sec1-census-total")
    code, out = run(["paper-check", "--scope", "sec1-census-total", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True and len(data["checks"]) == 1
    assert run(["paper-check", "--scope", "nonsense"])[0] == 2


def test_byte_stability():
    argv = ["amalgamate", "--t1", "(1,2)", "--t2", "(3,4,5)"]
    assert run(argv) == run(argv)
    argv = ["algebra", "gram", "--tree", "(1,2)"]
    assert run(argv) == run(argv)


def test_mutation_hook_fails_the_equation_check(monkeypatch):
    monkeypatch.setenv("ARBOREAL_MUTATE_MU", "2")
    code, out = run(["paper-check", "--scope", "sec1-equation"])
    assert code == 1
    assert out.splitlines()[0].startswith("FAIL sec1-equation")
    monkeypatch.delenv("ARBOREAL_MUTATE_MU")
    code, _ = run(["paper-check", "--scope", "sec1-equation"])
    assert code == 0


def test_usage_errors():
    assert run(["amalgamate", "--t1", "(1,2)"])[0] == 2
    assert run(["no-such-command"])[0] == 2
    assert run(["enumerate", "--labels", "a,b", "--bogus-flag"])[0] == 2
