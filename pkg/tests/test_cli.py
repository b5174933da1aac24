import json

import pytest

from thetacurve.cli import ERROR, FALSE, OK, run


@pytest.fixture
def manifest(tmp_path):
    path = tmp_path / "primes.json"
    path.write_text(json.dumps({"theta": ["A", "B"], "knot": ["k", "l"], "manifold": ["P", "Q"]}))
    return str(path)


def cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eq_centrality(capsys):
    code, out, _ = cli(capsys, "eq", "--lhs", "A*tau0(k)", "--rhs", "tau0(k)*A")
    assert (code, out.strip()) == (OK, "true")


def test_eq_false_verdict(capsys, manifest):
    code, out, _ = cli(capsys, "eq", "--primes", manifest, "--lhs", "A*B", "--rhs", "B*A", "--format", "json")
    assert code == FALSE
    assert json.loads(out) == {"equal": False, "lhs": "A * B", "rhs": "B * A"}


def test_factor(capsys, manifest):
    code, out, _ = cli(capsys, "factor", "--primes", manifest, "--expr", "tau0(k#l)", "--format", "json")
    assert code == OK
    assert json.loads(out)["factors"] == ["tau0(k)", "tau0(l)"]
    code, out, _ = cli(capsys, "factor", "--expr", "k # flat(P)", "--sort", "knot", "--label", "+")
    assert (code, out.strip()) == (OK, "k # flat(P)")


def test_factor_trivial_is_error(capsys):
    code, _, err = cli(capsys, "factor", "--expr", "1")
    assert code == ERROR and err.startswith("error:")


def test_normalize(capsys, manifest):
    code, out, _ = cli(capsys, "normalize", "--primes", manifest, "--expr", "tau+(flat(P)) * B * tau0(unknot)")
    assert (code, out.strip()) == (OK, "theta: B * tauM(P)")
    code, out, _ = cli(capsys, "normalize", "--primes", manifest, "--expr", "tau0(k)", "--format", "json")
    data = json.loads(out)
    assert data["knot_like"] and data["prime"] and not data["trivial"]


def test_gamma_verify(capsys, tmp_path):
    dot, js = tmp_path / "g.dot", tmp_path / "g.json"
    code, out, _ = cli(capsys, "gamma", "--expr", "tau0(k)", "--verify", "--dot", str(dot), "--json", str(js))
    assert code == OK
    assert "unique:    True" in out and "2 vertices, 1 edges" in out
    assert dot.read_text().startswith("digraph")
    data = json.loads(js.read_text())
    assert len(data["vertices"]) == 2 and data["edges"] == [[0, 1]] and data["root"] == [1]


def test_gamma_plain_and_cap(capsys):
    code, out, _ = cli(capsys, "gamma", "--expr", "A * tau0(k) * B", "--format", "json")
    assert code == OK and json.loads(out)["vertices"] == 7
    code, _, err = cli(capsys, "gamma", "--expr", "A * tau0(k) * B", "--cap", "3")
    assert code == ERROR and "cap" in err


def test_declare(capsys, manifest, tmp_path):
    code, out, _ = cli(capsys, "declare", "--file", manifest, "--format", "json")
    assert code == OK and json.loads(out)["knot"] == ["k", "l"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"theta": ["A"], "knot": ["A"]}))
    assert cli(capsys, "declare", "--file", str(bad))[0] == ERROR


def test_manifest_enforces_sorts(capsys, manifest):
    code, _, err = cli(capsys, "normalize", "--primes", manifest, "--expr", "A # B")
    assert code == ERROR and "position" in err
    code, _, err = cli(capsys, "normalize", "--primes", manifest, "--expr", "A * Z")
    assert code == ERROR and "undeclared" in err


def test_ars_check(capsys, tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"vertices": ["a", "b", "c", "d"], "edges": [["a", "b"], ["a", "c"], ["b", "d"], ["c", "d"]]}))
    code, out, _ = cli(capsys, "ars", "check", "--file", str(g), "--format", "json")
    assert code == OK and json.loads(out)["ee_holds"]
    g.write_text(json.dumps({"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["a", "c"]]}))
    code, out, _ = cli(capsys, "ars", "check", "--file", str(g))
    assert code == FALSE and "(EE): False" in out


def test_ars_fuzz(capsys):
    code, out, _ = cli(capsys, "ars", "fuzz", "--count", "200", "--max-vertices", "8", "--edge-prob", "0.3", "--seed", "1")
    assert code == OK and "0 counterexamples" in out
    assert cli(capsys, "ars", "fuzz", "--count", "5", "--max-vertices", "4")[0] == ERROR


def test_oracle_eq(capsys):
    code, out, _ = cli(capsys, "oracle", "eq", "--lhs", "A * tau0(k) * B", "--rhs", "A * B * tau0(k)")
    assert code == OK and out.strip().endswith("true")
    code, _, _ = cli(capsys, "oracle", "eq", "--lhs", "A * B", "--rhs", "B * A")
    assert code == FALSE


def test_selftest(capsys):
    code, out, _ = cli(capsys, "selftest", "--count", "10", "--max-primes", "3", "--seed", "4", "--format", "json")
    assert code == OK
    assert all(row["passed"] for row in json.loads(out)["checks"])


def test_usage_and_io_errors(capsys, tmp_path):
    assert cli(capsys, "frobnicate")[0] == ERROR
    assert cli(capsys, "declare", "--file", str(tmp_path / "missing.json"))[0] == ERROR
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    assert cli(capsys, "normalize", "--primes", str(bad), "--expr", "A")[0] == ERROR
    assert cli(capsys, "--help")[0] == OK
