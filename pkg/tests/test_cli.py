import json
import subprocess
import sys

import pytest

from conftest import FIXTURES, GOLDEN
from uordkit.cli import law_tag, main, run
from uordkit.errors import SchemaError

F = {name: str(FIXTURES / f"{name}.json") for name in ("chain2", "diamond", "discrete2", "sk", "singleton")}

GOLDEN_RUNS = {
    "chain2_audit": ["audit", F["chain2"], "--tripos", "--dcomplete", "--max-index", "2"],
    "diamond_relcomp": ["relcomp", F["diamond"]],
    "discrete2_audit": ["audit", F["discrete2"], "--max-index", "2", "--recheck"],
    "sk_check": ["pca-check", F["sk"], "--samples", "20"],
    "chain2_cartesian": ["cartesian", F["chain2"], "--search"],
    "singleton_bridge": ["bridge", F["singleton"], "--to-rpca"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_reports(name, capsys):
    main(GOLDEN_RUNS[name] + ["--no-timing"])
    got = json.loads(capsys.readouterr().out)
    expect = json.loads((GOLDEN / f"{name}.json").read_text())
    assert got == expect


def test_runs_are_byte_identical():
    argv = [sys.executable, "-m", "uordkit", "audit", F["chain2"], "--tripos", "--max-index", "2", "--no-timing"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a


def test_exit_codes():
    assert run(["audit", F["chain2"], "--tripos", "--max-index", "2"])[2] == 0
    assert run(["audit", F["discrete2"], "--max-index", "2"])[2] == 1
    assert run(["cartesian", F["discrete2"], "--search"])[2] == 1


def test_unknown_name_exits_2(capsys):
    assert main(["leq", F["chain2"], "--phi", "z", "--psi", "0"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "UnknownName"


def test_missing_reflexivity(tmp_path, capsys):
    p = tmp_path / "noid.json"
    p.write_text(json.dumps({"carrier": ["a", "b"], "basis": [{"name": "r", "pairs": [["a", "b"]]}]}))
    assert main(["validate", str(p)]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "MissingReflexivity"
    assert main(["validate", str(p), "--auto-reflexive"]) == 0


def test_schema_errors(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"carrier": ["a"], "colour": 1}))
    assert main(["validate", str(p)]) == 2
    assert "colour" in json.loads(capsys.readouterr().err)["message"]
    p.write_text("{not json")
    assert main(["validate", str(p)]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "ParseError"
    assert main(["validate", str(tmp_path / "absent.json")]) == 2


def test_recheck_confirms_counterexamples():
    report, _, _ = run(["audit", F["discrete2"], "--max-index", "2", "--recheck"])
    failing = [r for r in report["results"].values() if "counterexample" in r]
    assert failing and all(r["recheck"] is True for r in failing)


def test_text_format_has_tags(capsys):
    main(["audit", F["chain2"], "--tripos", "--max-index", "2", "--format", "text", "--no-timing"])
    out = capsys.readouterr().out
    assert "PASS" in out and "[" in out
    assert "runtime" not in out


def test_law_tags_are_descriptive():
    assert law_tag("cartesian") == "cartesian-criterion"
    assert law_tag("dcomplete") == "existential-completion"
    assert law_tag("exists.beck_chevalley")


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_index": 1, "seed": 5}))
    report, _, _ = run(["audit", F["chain2"], "--config", str(cfg), "--max-index", "2"])
    assert report["config"]["max_index"] == 2 and report["config"]["seed"] == 5
    cfg.write_text(json.dumps({"depth": 1}))
    with pytest.raises(SchemaError):
        run(["audit", F["chain2"], "--config", str(cfg)])


def test_pca_commands():
    report, _, code = run(["pca-eval", F["sk"], "--term", "S K K K"])
    assert code == 0
    report, _, code = run(["pca-compile", F["sk"], "--term", "x", "--vars", "x y"])
    assert code == 0 and report["results"]["bracket"]["pass"]
    report, _, code = run(["bridge", F["sk"], "--to-dco", "--phi", "K", "--psi", "K"])
    assert code == 0


def test_bridge_rejects_non_dco(capsys):
    assert main(["bridge", F["chain2"], "--to-rpca"]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "NotDco"


def test_other_commands_smoke():
    assert run(["relcomp", F["diamond"]])[2] == 0
    assert run(["dcomplete", F["diamond"], "--max-index", "2"])[2] == 0
    assert run(["dalgebra", F["chain2"]])[2] == 0
    assert run(["dco", F["chain2"]])[2] == 1
    assert run(["discrete", F["chain2"]])[2] == 1
    assert run(["discrete", F["discrete2"]])[2] == 0
    assert run(["prime", F["chain2"], "--pi", "{0}", "--max-index", "2"])[2] == 0
    assert run(["prime", F["chain2"], "--pi", "{}", "--max-index", "2"])[2] == 1
    assert run(["monotone", F["chain2"], "--map", "top"])[2] == 0
    assert run(["adjunction", F["chain2"], "--f", "id", "--g", "id"])[2] == 0
    assert run(["saturate", F["diamond"]])[2] == 0
    assert run(["leq", F["chain2"], "--phi", "0 1", "--psi", "1 1"])[2] == 0
    assert run(["leq", F["chain2"], "--phi", "1", "--psi", "0"])[2] == 1


def test_corpus_command():
    report, _, code = run(["corpus", "--semilattices-upto", "2", "--max-index", "2"])
    assert code == 0 and report["config"]["seed"] == 7
