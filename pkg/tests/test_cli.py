import json

import pytest

from modcomp.cli import COMMANDS, HF_COMMANDS, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_classify(capsys):
    code, out = run(capsys, "classify", "--formula", "(forall-in w x (in w y))")
    assert code == 0 and json.loads(out.out)["class"] == "Delta0"


def test_translate(capsys):
    code, out = run(capsys, "translate", "--formula", "(= x y)")
    assert json.loads(out.out)["translation"] == "(and (WFE x) (and (WFE y) (EQ x y)))"


def test_hf_encode_decode(capsys):
    code, out = run(capsys, "hf", "encode", "--set", "{{},{{}}}")
    c = json.loads(out.out)
    assert c == {"domain": 3, "rel": [[1, 0], [1, 2], [2, 0]]}
    code, out = run(capsys, "hf", "decode", "--code", json.dumps(c))
    assert json.loads(out.out)["set"] == "{{},{{}}}"
    code, out = run(capsys, "hf", "decode", "--number", "3")
    assert json.loads(out.out)["set"] == "{{},{{}}}"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "ec", "--class", "graphs", "--size", "3")[0] == 0
    assert run(capsys, "ec", "--class", "graphs", "--size", "3", "--strict")[0] == 1
    assert run(capsys, "--strict", "ec", "--class", "graphs", "--size", "3")[0] == 1
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "classify")[0] == 2
    assert run(capsys, "classify", "--formula", "(forall x")[0] == 2
    assert run(capsys, "hf", "quotient", "--m", "6")[0] == 3
    out = tmp_path / "r.json"
    assert run(capsys, "hf", "quotient", "--m", "3", "--out", str(out))[0] == 0
    assert json.loads(out.read_text())["ok"]


def test_structure_commands(capsys, tmp_path):
    k2 = tmp_path / "k2.json"
    k2.write_text(json.dumps({"size": 2, "relations": {"E": [[0, 1], [1, 0]]}}))
    p3 = json.dumps({"size": 3, "relations": {"E": [[0, 1], [1, 0], [1, 2], [2, 1]]}})
    code, out = run(capsys, "embeddings", "--sig", "graphs", "--structure", str(k2), "--structure", p3)
    assert json.loads(out.out)["embeddings"] == [[0, 1], [1, 0], [1, 2], [2, 1]]
    code, out = run(capsys, "eval", "--sig", "graphs", "--structure", str(k2),
                    "--formula", "(exists y (E x y))", "--assign", '{"x": 0}')
    assert json.loads(out.out)["value"] is True
    code, out = run(capsys, "diagram", "--sig", "graphs", "--structure", str(k2))
    assert json.loads(out.out)["diagram"][0] == "(not (E (c0) (c0)))"


def test_class_commands(capsys):
    code, out = run(capsys, "separate", "--class", "cliques", "--class", "triangle-free",
                    "--size", "3", "--qrank", "2")
    assert json.loads(out.out) == {"status": "none", "embedding": {"source": 0, "target": 0, "map": [0]}}
    code, out = run(capsys, "modelcomplete", "--class", "graphs", "--size", "3", "--morleyize")
    assert json.loads(out.out)["passed"]
    code, out = run(capsys, "univ-equiv", "--class", "cliques2", "--size", "3",
                    "--formula", "(exists y (E x y))")
    assert json.loads(out.out)["equivalent"] == "(= x x)"
    code, out = run(capsys, "enum", "--class", "graphs", "--size", "3")
    assert json.loads(out.out)["count"] == 7


def test_morleyize(capsys):
    code, out = run(capsys, "morleyize", "--sig", "graphs", "--formula", "(exists y (E x y))",
                    "--formula", "(E x y)", "--kinds", "relation,skolem")
    r = json.loads(out.out)
    assert [s["symbol"] for s in r["symbols"]] == ["R_0", "f_1"]


@pytest.mark.parametrize("name,desc", [(n, d) for n, d, _, _ in COMMANDS])
def test_help_names_operation(capsys, name, desc):
    assert main([name, "--help"]) == 0
    op = desc.split(":")[0].split(" / ")[0]
    assert op in capsys.readouterr().out


@pytest.mark.parametrize("name,desc", [(n, d) for n, d, _, _ in HF_COMMANDS])
def test_hf_help_names_operation(capsys, name, desc):
    assert main(["hf", name, "--help"]) == 0
    assert desc.split(":")[0].split(" / ")[0] in capsys.readouterr().out
