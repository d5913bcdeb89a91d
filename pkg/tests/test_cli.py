import io
import json

import pytest

from entronet.cli import run
from entronet.exactlog import log2_units
from entronet.groupchar import (
    SubgroupFamily,
    SubspaceFamily,
    builtin_function,
    cyclic,
    direct_product,
)
from entronet.netmodel import (
    ConnectionRequirement,
    Edge,
    Network,
    RateCapacityTuple,
    UNCAPPED,
)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.fixture
def zy_path(tmp_path):
    return write(tmp_path, "zy.json", builtin_function("zy").to_json())


def test_check_exit_codes(tmp_path, zy_path, capsys):
    assert run(["check", "poly", zy_path]) == 0
    assert run(["check", "zy", zy_path]) == 1
    assert run(["check", "poly", str(tmp_path / "missing.json")]) == 2
    out = capsys.readouterr()
    assert "PASS" in out.out and "FAIL" in out.out


def test_json_reports(zy_path, capsys):
    assert run(["check", "zy", zy_path, "--json"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["format"] == "report/1" and rep["ok"] is False


def test_stdin_dash(monkeypatch, capsys):
    doc = json.dumps(builtin_function("projective-plane").to_json())
    monkeypatch.setattr("sys.stdin", io.StringIO(doc))
    assert run(["check", "ingleton", "-"]) == 1


def test_builtin_pipes_into_check(monkeypatch, capsys):
    assert run(["builtin", "projective-plane"]) == 0
    doc = capsys.readouterr().out
    monkeypatch.setattr("sys.stdin", io.StringIO(doc))
    assert run(["check", "poly", "-"]) == 0


def test_group_and_qu_flow(tmp_path, capsys):
    g = direct_product(cyclic(2), cyclic(2))
    subs = [sorted(s) for s in g.all_subgroups() if len(s) == 2]
    fam_path = write(tmp_path, "fam.json", SubgroupFamily(g, (subs[0], subs[1])).to_json())
    assert run(["group", "entropy", fam_path, "--json"]) == 0
    ent = json.loads(capsys.readouterr().out)
    assert ent["format"] == "setfunction/1"
    assert run(["group", "support", fam_path, "--json"]) == 0
    sup_doc = capsys.readouterr().out
    sup_path = tmp_path / "sup.json"
    sup_path.write_text(sup_doc)
    assert run(["qu", "check", str(sup_path)]) == 0


def test_construct_and_witness_flow(tmp_path, capsys):
    g = direct_product(cyclic(2), cyclic(2))
    subs = [sorted(s) for s in g.all_subgroups() if len(s) == 2]
    fam_path = write(tmp_path, "fam.json", SubgroupFamily(g, (subs[0], subs[1])).to_json())
    assert run(["group", "entropy", fam_path, "--json"]) == 0
    h_path = tmp_path / "h.json"
    h_path.write_text(capsys.readouterr().out)

    dot_path = tmp_path / "g.dot"
    assert run(["construct", "gdagger", "--n", "2", "--h", str(h_path),
                "--dot", str(dot_path), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["format"] == "gdagger/1" and "tuple" in doc
    assert dot_path.read_text().startswith("digraph")
    tup_path = write(tmp_path, "tup.json", doc["tuple"])

    assert run(["witness", "build", str(h_path), "--n", "2"]) == 0
    cert_path = tmp_path / "cert.json"
    cert_path.write_text(capsys.readouterr().out)
    assert run(["witness", "verify", str(cert_path), tup_path]) == 0


def test_code_build_and_verify_bundle(tmp_path, capsys):
    fam = SubspaceFamily(2, 2, (((1, 0),), ((0, 1),), ((1, 1),)))
    fam_path = write(tmp_path, "sfam.json", fam.to_json())
    assert run(["code", "build", "linear", fam_path, "--n", "3"]) == 0
    bundle_path = tmp_path / "bundle.json"
    bundle_path.write_text(capsys.readouterr().out)
    assert run(["code", "verify", str(bundle_path)]) == 0
    bundle = json.loads(bundle_path.read_text())
    paths = [write(tmp_path, f"{k}.json", bundle[k])
             for k in ("network", "conn", "code", "tuple")]
    assert run(["code", "verify", *paths]) == 0


def test_lp_subcommands(tmp_path, capsys, monkeypatch):
    net = Network(("s", "m", "r"),
                  (Edge("e1", "s", "m", UNCAPPED), Edge("e2", "m", "r", UNCAPPED)))
    conn = ConnectionRequirement(("U",), {"U": "s"}, {"U": ("r",)})
    net_path = write(tmp_path, "net.json", net.to_json())
    conn_path = write(tmp_path, "conn.json", conn.to_json())
    ok_tup = write(tmp_path, "t1.json", RateCapacityTuple(
        {"U": log2_units(1)}, {"e1": log2_units(1), "e2": log2_units(1)}).to_json())
    bad_tup = write(tmp_path, "t2.json", RateCapacityTuple(
        {"U": log2_units(2)}, {"e1": log2_units(1), "e2": log2_units(1)}).to_json())
    assert run(["lp", "feasible", net_path, conn_path, ok_tup]) == 0
    assert run(["lp", "feasible", net_path, conn_path, bad_tup]) == 1

    expr_path = tmp_path / "e.txt"
    expr_path.write_text("I(1;2) >= 0\n")
    assert run(["lp", "implies", str(expr_path), "--n", "3"]) == 0
    monkeypatch.setattr("sys.stdin",
                        io.StringIO("2 I(3;4) - I(1;2) - I(1;3,4) - 3 I(3;4|1) - I(3;4|2) <= 0"))
    assert run(["lp", "implies", "-", "--n", "4"]) == 1


def test_structural_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["check", "poly", str(bad)]) == 2
    wrong = write(tmp_path, "wrong.json", {"format": "network/1", "nodes": [], "edges": []})
    assert run(["check", "poly", wrong]) == 2
