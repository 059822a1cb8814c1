import json

import pytest

from linorder.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    doc = json.loads(out)
    assert doc["schema"] == 1
    return code, doc


def test_stdmap_example(capsys):
    assert run(capsys, "stdmap", "--order", "fin(2)", "--r", "0", "--s", "1", "--seq", "0,0|1")[:2] == (0, "0|1\n")
    code, out, _ = run(capsys, "stdmap", "--order", "fin(2)", "--r", "0", "--s", "1", "--seq", "0|1", "--invert")
    assert (code, out) == (0, "0,0|1\n")


def test_tailequiv_example(capsys):
    code, out, _ = run(capsys, "tailequiv", "--order", "fin(2)", "-n", "2", "|0,1", "|1,0")
    assert (code, out.strip()) == (0, "not equivalent")
    code, doc = run_json(capsys, "tailequiv", "--order", "fin(2)", "-n", "1", "|0,1", "|1,0")
    assert code == 0 and (doc["equivalent"], doc["k"], doc["l"]) == (True, 0, 1)


def test_pra_example(capsys):
    code, doc = run_json(capsys, "pra", "--order", "zeta", "--cover", "auto", "--samples", "500",
                         "--depth", "32", "--seed", "7")
    assert code == 0 and doc["passed"] and doc["samples"] == 500 and doc["seed"] == 7


@pytest.mark.parametrize("fault,key", [("identity", "parity_violations"), ("swapped", "order_violations")])
def test_faults_exit_one(capsys, fault, key):
    code, doc = run_json(capsys, "pra", "--order", "fin(2)", "--fault", fault, "--samples", "100")
    assert code == 1 and doc[key]


def test_nra_both_endpoints(capsys):
    code, doc = run_json(capsys, "nra", "--order", "fin(2)", "-n", "3", "--cover", "both", "--samples", "100")
    assert code == 0 and doc["modulus"] == 3


def test_parse_and_compare(capsys):
    code, doc = run_json(capsys, "parse", "lex(zeta, fin(2))")
    assert code == 0 and doc["expr"] == "lex(zeta, fin(2))"
    assert doc["meta"]["has_min"] is False and doc["meta"]["is_dense"] is False
    assert run(capsys, "compare", "--order", "lex(zeta,fin(2))", "(-1,1)", "(0,0)")[:2] == (0, "LT\n")
    assert run(capsys, "seq-compare", "--order", "fin(2)", "|0,1", "0|1")[:2] == (0, "LT\n")


def test_lift(capsys, tmp_path):
    path = tmp_path / "ca.json"
    path.write_text(json.dumps({
        "entries": [{"rep": "|0,1", "fiber": "fin(2)"}, {"rep": "|1,0", "fiber": "fin(3)"}],
        "default": None,
    }))
    code, doc = run_json(capsys, "lift", "--order", "zeta", "-n", "2", "--assignment", str(path),
                         "--seq", "|0,1", "--fiber", "1")
    assert code == 0
    assert doc == {"schema": 1, "letter": "1", "address": "|0,1", "fiber": "1", "image": "|1,0"}
    code, _, err = run(capsys, "lift", "--order", "zeta", "--assignment", str(path), "--seq", "|2", "--fiber", "0")
    assert code == 2 and "empty class" in err


def test_iso(capsys):
    code, doc = run_json(capsys, "iso", "cantor", "--x", "eta", "--y", "dyadic", "--steps", "40")
    assert code == 0 and doc["matched"] >= 20 and not doc["violations"]
    code, doc = run_json(capsys, "iso", "skolem", "--x", "lex(fin(2),dyadic)", "--y", "dyadic",
                         "--colors", "3", "--steps", "60")
    assert code == 0 and not doc["violations"]
    code, _, err = run(capsys, "iso", "cantor", "--x", "omega", "--y", "eta")
    assert code == 2 and "endpoint" in err


def test_sb_scenarios(capsys):
    code, doc = run_json(capsys, "sb", "omega-shift3", "--count", "20")
    assert code == 0 and all(row["h"] == row["x"] for row in doc["map"])
    code, doc = run_json(capsys, "sb", "omega-identity", "--count", "5")
    assert all(row["chain"] == "cyclic" for row in doc["map"])
    assert run(capsys, "sb", "no-such-scenario")[0] == 2


def test_sqlimit_address_rdecomp(capsys):
    code, doc = run_json(capsys, "sqlimit", "--base", "fin(2)", "-n", "2", "--check-samples", "50")
    assert code == 0 and doc["violations"] == 0
    assert run(capsys, "address", "--order", "fin(2)", "--point", "|0,1", "--depth", "4")[:2] == (0, "0,1,0,1\n")
    code, doc = run_json(capsys, "rdecomp", "zeta-binary", "5", "--depth", "5")
    assert code == 0 and doc["digits"] == [1, 0, 1, 0, 0] and doc["anchor"] == 0


@pytest.mark.parametrize("argv", [
    ["parse", "lex(fin(2))"],
    ["compare", "--order", "fin(2)", "0", "5"],
    ["stdmap", "--order", "fin(2)", "--r", "1", "--s", "0", "--seq", "|0"],
    ["tailequiv", "--order", "fin(2)", "|0", "|3"],
    [],
    ["pra", "--order", "lex(zeta, fin(2))"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_syntax_error_shows_position(capsys):
    _, _, err = run(capsys, "parse", "lex(fin(2))")
    assert "position 10" in err


def test_selftest_is_deterministic(capsys):
    code, first, _ = run(capsys, "selftest", "--seed", "1", "--json")
    _, second, _ = run(capsys, "selftest", "--seed", "1", "--json")
    assert code == 0 and first == second
    assert json.loads(first)["passed"]


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ORD_SEED", "9")
    _, doc = run_json(capsys, "pra", "--order", "fin(2)", "--samples", "20")
    assert doc["seed"] == 9
    monkeypatch.setenv("ORD_SEED", "x")
    assert run(capsys, "pra", "--order", "fin(2)")[0] == 2


def test_selftest_fault_injection(capsys):
    code, doc = run_json(capsys, "selftest", "--corrupt-stdmap")
    assert code == 1 and not doc["passed"]
    failed = [s for s in doc["suites"] if not s["passed"]]
    assert [s["name"] for s in failed] == ["3 standard-map laws"]
    assert "order not preserved" in failed[0]["counterexample"]
